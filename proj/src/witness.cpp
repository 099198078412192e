#include "lipcert/witness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lipcert {

namespace {

bool steep_to_build(double slope, double threshold) {
  return slope > threshold * (1.0 + kSteepGuard);
}

bool steep_to_verify(double slope, double threshold) {
  return slope > threshold * (1.0 - kSteepGuard);
}

// Dyadic subintervals of `parent` at level `l`: 2^l aligned pieces of width
// len/2^l plus 2^l - 1 pieces shifted right by half a width. ldexp keeps the
// width exact. Pieces that collapse under rounding (possible when the parent
// is within a few ulp of degeneracy) are skipped.
template <class Fn>
void for_each_dyadic(const Interval& parent, int level, Fn&& fn) {
  const double width = std::ldexp(parent.length(), -level);
  const long count = 1L << level;
  for (long i = 0; i < count; ++i) {
    const double a = parent.a + static_cast<double>(i) * width;
    const double b = i + 1 == count ? parent.b : a + width;
    if (a < b) fn(Interval(a, b));
  }
  for (long i = 0; i + 1 < count; ++i) {
    const double a = parent.a + (static_cast<double>(i) + 0.5) * width;
    const double b = a + width;
    if (a < b) fn(Interval(a, b));
  }
}

}  // namespace

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::slope_mismatch: return "slope_mismatch";
    case ViolationKind::not_steep: return "not_steep";
    case ViolationKind::children_overlap: return "children_overlap";
    case ViolationKind::child_outside_parent: return "child_outside_parent";
    case ViolationKind::child_too_long: return "child_too_long";
    case ViolationKind::bad_arity: return "bad_arity";
    case ViolationKind::ragged_leaves: return "ragged_leaves";
    case ViolationKind::bad_threshold: return "bad_threshold";
    case ViolationKind::structure: return "structure";
  }
  return "?";
}

double secant_slope(const FuncSpec& f, const Interval& I) {
  return std::fabs(evaluate(f, I.b) - evaluate(f, I.a)) / I.length();
}

std::pair<Interval, double> find_seed(const FuncSpec& f, const Interval& J, double c,
                                      int resolution_depth) {
  if (!(c >= 0.0)) throw SpecError("find_seed: C must be >= 0");
  if (resolution_depth < 1 || resolution_depth > 30)
    throw SpecError("find_seed: resolutionDepth must lie in [1, 30]");

  for (int level = 0; level <= resolution_depth; ++level) {
    Interval found(0.0, 1.0);
    double slope = -1.0;
    for_each_dyadic(J, level, [&](const Interval& piece) {
      if (slope >= 0.0) return;
      const double s = secant_slope(f, piece);
      if (steep_to_build(s, c)) {
        found = piece;
        slope = s;
      }
    });
    if (slope >= 0.0) return {found, 0.5 * (slope + c)};
  }
  throw NoSeedFound(
      "find_seed: no steep subinterval at levels 0.." +
      std::to_string(resolution_depth) + " for C = " + std::to_string(c) +
      "; the C-exceptional set may be empty at this resolution");
}

std::vector<SteepInterval> bisect_chain(const FuncSpec& f, const Interval& seed,
                                        double c_prime, int max_depth) {
  if (max_depth < 0) throw SpecError("bisect_chain: maxDepth must be >= 0");
  const double s0 = secant_slope(f, seed);
  if (!steep_to_build(s0, c_prime))
    throw SpecError("bisect_chain: seed is not steep for cPrime");

  std::vector<SteepInterval> chain;
  chain.reserve(static_cast<std::size_t>(max_depth) + 1);
  chain.push_back({seed, s0, c_prime});

  Interval cur = seed;
  for (int step = 1; step <= max_depth; ++step) {
    const double mid = cur.midpoint();
    if (!(mid > cur.a && mid < cur.b))
      throw NumericalBreakdown(
          "bisect_chain: interval collapsed at machine scale", step - 1);
    const Interval left(cur.a, mid);
    const Interval right(mid, cur.b);
    const double ql = secant_slope(f, left);
    const double qr = secant_slope(f, right);
    if (steep_to_build(ql, c_prime)) {
      chain.push_back({left, ql, c_prime});
      cur = left;
    } else if (steep_to_build(qr, c_prime)) {
      chain.push_back({right, qr, c_prime});
      cur = right;
    } else {
      throw NumericalBreakdown(
          "bisect_chain: neither half steep within tolerance at depth " +
              std::to_string(step),
          step - 1);
    }
  }
  return chain;
}

std::pair<SteepInterval, SteepInterval> split_steep(const FuncSpec& f,
                                                    const SteepInterval& parent,
                                                    int search_depth) {
  if (search_depth < 1 || search_depth > 30)
    throw SpecError("split_steep: searchDepth must lie in [1, 30]");
  if (!steep_to_verify(parent.slope, parent.threshold))
    throw SpecError("split_steep: parent interval is not steep");

  const double thr = parent.threshold;
  const double half_len = 0.5 * parent.interval.length();

  // Candidates in scan order: coarse to fine, aligned before shifted, left to
  // right. Among all strictly disjoint pairs, return the one maximizing the
  // smaller slope, ties broken by scan order, result ordered by position.
  //
  // The steepest piece over a given rise is the tightest enclosure of that
  // rise, so this selection keeps each child's steep content at a bounded
  // fraction of its width. Taking instead the first disjoint pair in scan
  // order occasionally emits a child whose rise is confined to a corner far
  // below the 2^-search_depth resolution, and the recursion dies there.
  struct Candidate {
    Interval interval;
    double slope;
  };
  std::vector<Candidate> candidates;
  for (int level = 1; level <= search_depth; ++level) {
    for_each_dyadic(parent.interval, level, [&](const Interval& piece) {
      if (piece.length() > half_len * (1.0 + kLengthSlack)) return;
      const double s = secant_slope(f, piece);
      if (steep_to_build(s, thr)) candidates.push_back({piece, s});
    });
  }

  double best = -1.0;
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      const Interval& a = candidates[i].interval;
      const Interval& b = candidates[j].interval;
      if (!(a.b < b.a || b.b < a.a)) continue;
      const double pair_min = std::min(candidates[i].slope, candidates[j].slope);
      if (pair_min > best) {
        best = pair_min;
        best_i = i;
        best_j = j;
      }
    }
  }
  if (best >= 0.0) {
    const std::size_t lo =
        candidates[best_i].interval.a <= candidates[best_j].interval.a ? best_i
                                                                       : best_j;
    const std::size_t hi = lo == best_i ? best_j : best_i;
    return {SteepInterval{candidates[lo].interval, candidates[lo].slope, thr},
            SteepInterval{candidates[hi].interval, candidates[hi].slope, thr}};
  }
  throw ResolutionExhausted(
      "split_steep: no disjoint steep pair up to search level " +
          std::to_string(search_depth) +
          "; this signals insufficient search depth or a threshold too close "
          "to the function's steepness at this scale, never a counterexample "
          "— for a continuous function a disjoint pair exists at some finite "
          "depth",
      "");
}

namespace {

void build_children(const FuncSpec& f, WitnessNode& node, int remaining,
                    int search_depth, const std::string& addr) {
  if (remaining == 0) return;
  try {
    auto [left, right] = split_steep(f, node.steep, search_depth);
    node.children.push_back(WitnessNode{left, {}});
    node.children.push_back(WitnessNode{right, {}});
  } catch (const ResolutionExhausted& e) {
    throw ResolutionExhausted(std::string(e.what()) + " (at node '" + addr + "')",
                              addr);
  }
  build_children(f, node.children[0], remaining - 1, search_depth, addr + "0");
  build_children(f, node.children[1], remaining - 1, search_depth, addr + "1");
}

}  // namespace

WitnessTree build_tree(const FuncSpec& f, const Interval& J, double c, int depth,
                       int search_depth, int resolution_depth) {
  if (depth < 1) throw SpecError("build_tree: depth must be >= 1");
  auto [seed, c_prime] = find_seed(f, J, c, resolution_depth);
  WitnessNode root{SteepInterval{seed, secant_slope(f, seed), c_prime}, {}};
  build_children(f, root, depth, search_depth, "");
  return WitnessTree{f, c, c_prime, depth, std::move(root)};
}

namespace {

struct Verifier {
  const WitnessTree& tree;
  VerifyReport report;

  void violation(const std::string& addr, ViolationKind kind, std::string msg) {
    report.violations.push_back({addr, kind, std::move(msg)});
  }

  void check_node(const WitnessNode& node, const std::string& addr, int level) {
    ++report.nodes_checked;
    const SteepInterval& s = node.steep;

    if (s.threshold != tree.c_prime)
      violation(addr, ViolationKind::bad_threshold,
                "node threshold differs from the tree's cPrime");

    const double recomputed = secant_slope(tree.func, s.interval);
    const double scale = std::max({std::fabs(recomputed), std::fabs(s.slope), 1e-300});
    if (std::fabs(recomputed - s.slope) > kSlopeRecomputeTol * scale)
      violation(addr, ViolationKind::slope_mismatch,
                "stored slope " + std::to_string(s.slope) +
                    " does not recompute (" + std::to_string(recomputed) + ")");
    if (!steep_to_verify(recomputed, tree.c_prime))
      violation(addr, ViolationKind::not_steep,
                "recomputed slope " + std::to_string(recomputed) +
                    " not above cPrime = " + std::to_string(tree.c_prime));

    if (node.children.empty()) {
      if (level != tree.depth)
        violation(addr, ViolationKind::ragged_leaves,
                  "leaf at depth " + std::to_string(level) + ", expected " +
                      std::to_string(tree.depth));
      return;
    }
    if (node.children.size() != 2) {
      violation(addr, ViolationKind::bad_arity,
                "node has " + std::to_string(node.children.size()) +
                    " children, expected 0 or 2");
      return;
    }

    const Interval& c0 = node.children[0].steep.interval;
    const Interval& c1 = node.children[1].steep.interval;
    const Interval& lo = c0.a <= c1.a ? c0 : c1;
    const Interval& hi = c0.a <= c1.a ? c1 : c0;
    if (!(lo.b < hi.a))
      violation(addr, ViolationKind::children_overlap,
                "child intervals are not strictly disjoint");
    const double max_len = 0.5 * s.interval.length() * (1.0 + kLengthSlack);
    for (int i = 0; i < 2; ++i) {
      const Interval& ci = node.children[static_cast<std::size_t>(i)].steep.interval;
      const std::string child_addr = addr + (i == 0 ? "0" : "1");
      if (!s.interval.contains(ci))
        violation(child_addr, ViolationKind::child_outside_parent,
                  "child interval leaves the parent");
      if (ci.length() > max_len)
        violation(child_addr, ViolationKind::child_too_long,
                  "child longer than half the parent");
    }
    check_node(node.children[0], addr + "0", level + 1);
    check_node(node.children[1], addr + "1", level + 1);
  }
};

}  // namespace

VerifyReport verify_tree(const WitnessTree& t) {
  Verifier v{t, {}};
  if (!(t.c >= 0.0) || !(t.c_prime > t.c))
    v.violation("", ViolationKind::bad_threshold,
                "requires C >= 0 and cPrime > C");
  if (t.depth < 0)
    v.violation("", ViolationKind::structure, "negative depth");
  v.check_node(t.root, "", 0);
  return std::move(v.report);
}

CantorCertificate certificate(const WitnessTree& t) {
  const VerifyReport report = verify_tree(t);
  if (!report.valid())
    throw InvalidTree("certificate: tree failed verification with " +
                      std::to_string(report.violations.size()) + " violation(s)");

  CantorCertificate cert;
  cert.c_prime = t.c_prime;

  struct Walker {
    CantorCertificate& cert;
    void walk(const WitnessNode& node, const std::string& addr, double min_slope) {
      min_slope = std::min(min_slope, node.steep.slope);
      if (node.children.empty()) {
        cert.leaf_intervals.push_back(node.steep.interval);
        cert.branch_slope_minima.push_back(min_slope);
        cert.addresses.push_back(addr);
        return;
      }
      walk(node.children[0], addr + "0", min_slope);
      walk(node.children[1], addr + "1", min_slope);
    }
  };
  Walker{cert}.walk(t.root, "", t.root.steep.slope);
  return cert;
}

}  // namespace lipcert
