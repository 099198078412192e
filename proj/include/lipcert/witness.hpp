#pragma once

// Constructive bisection machinery: steep-interval seeds, bisection chains,
// disjoint steep splitting, and depth-n witness trees.
//
// A witness tree is the finite skeleton of a Cantor-type construction: a
// perfectly balanced binary tree of closed intervals, all steep above a
// working threshold C' > C, children disjoint and at most half their parent's
// length. Every infinite extension of its branches converges to a point with
// pointwise Lipschitz constant >= C' > C, so the 2^depth leaves enclose that
// many pairwise-disjoint portions of the C-exceptional set.
//
// The splitting search is deterministic: dyadic subintervals, aligned and
// half-shifted, coarse to fine, left to right. Half-shifted windows keep
// steep features that straddle a dyadic cut from being missed. Tie-breaking
// is leftmost-first throughout, so certificates are byte-stable.

#include <string>
#include <utility>
#include <vector>

#include "lipcert/func_spec.hpp"
#include "lipcert/interval.hpp"

namespace lipcert {

// Steepness comparisons: slope > threshold * (1 + kSteepGuard) to build,
// slope > threshold * (1 - kSteepGuard) to verify. Building stricter than
// verifying means a valid certificate never flaps.
inline constexpr double kSteepGuard = 1e-9;

// A stored slope must recompute from the function within this relative error.
inline constexpr double kSlopeRecomputeTol = 1e-12;

// Slack for the length-halving check (dyadic endpoints round by sub-ulps).
inline constexpr double kLengthSlack = 1e-12;

// Closed interval with |f(b) - f(a)| > threshold * (b - a).
struct SteepInterval {
  Interval interval;
  double slope;      // |f(b) - f(a)| / (b - a)
  double threshold;  // the C' it was tested against

  friend bool operator==(const SteepInterval&, const SteepInterval&) = default;
};

struct WitnessNode {
  SteepInterval steep;
  std::vector<WitnessNode> children;  // empty or exactly two, left to right

  friend bool operator==(const WitnessNode&, const WitnessNode&) = default;
};

struct WitnessTree {
  FuncSpec func;
  double c;        // exceptional-set level
  double c_prime;  // working threshold, > c
  int depth;       // all leaves at exactly this depth
  WitnessNode root;
};

// Flat, machine-checkable view of a verified tree.
struct CantorCertificate {
  std::vector<Interval> leaf_intervals;       // left to right, pairwise disjoint
  std::vector<double> branch_slope_minima;    // per leaf, min slope on its chain
  double c_prime;
  std::vector<std::string> addresses;         // per leaf, binary string of length depth
};

enum class ViolationKind {
  slope_mismatch,        // stored slope does not recompute from the function
  not_steep,             // recomputed slope fails the threshold
  children_overlap,      // sibling intervals not strictly disjoint
  child_outside_parent,
  child_too_long,        // child length exceeds half the parent's
  bad_arity,             // child count neither 0 nor 2
  ragged_leaves,         // leaf depth differs from the declared depth
  bad_threshold,         // node threshold != cPrime, or cPrime <= C
  structure,             // malformed certificate document
};

const char* to_string(ViolationKind k);

struct Violation {
  std::string address;  // binary address of the offending node ("" = root)
  ViolationKind kind;
  std::string message;
};

struct VerifyReport {
  std::vector<Violation> violations;
  int nodes_checked = 0;
  bool valid() const { return violations.empty(); }
};

// |f(I.b) - f(I.a)| / (I.b - I.a)
double secant_slope(const FuncSpec& f, const Interval& I);

// Scans dyadic subintervals of J at levels 0..resolution_depth (2^l aligned
// pieces plus the 2^l - 1 half-shifted pieces per level) for the first
// interval with slope > C, coarse to fine, aligned before shifted, left to
// right. Returns it together with C' = (slope + C) / 2 > C.
// Throws NoSeedFound when nothing qualifies: the exceptional set may be
// empty at this resolution.
std::pair<Interval, double> find_seed(const FuncSpec& f, const Interval& J, double c,
                                      int resolution_depth);

// Repeated midpoint bisection from `seed`: a nested chain of max_depth + 1
// steep intervals with halving lengths, each slope > c_prime. At every step
// at least one half inherits the steepness (triangle inequality); the left
// half wins ties. Throws NumericalBreakdown if neither half qualifies.
std::vector<SteepInterval> bisect_chain(const FuncSpec& f, const Interval& seed,
                                        double c_prime, int max_depth);

// Constructive form of the splitting step: enumerates dyadic subintervals of
// the parent at levels 1..search_depth in scan order (coarse to fine, aligned
// before shifted, left to right), keeps those with slope above the parent's
// threshold (length <= parent/2 by construction), and among all strictly
// disjoint pairs returns the one whose smaller slope is maximal (ties broken
// by scan order, result sorted by position). Maximizing the weaker slope
// keeps each child tightly wrapped around its steep content, which is what
// lets the recursion continue at the same search depth. Throws
// ResolutionExhausted if no disjoint pair exists up to search_depth — a
// resolution limit of the search, not evidence against the splitting lemma,
// which guarantees a pair for the true continuous function at some finite
// depth.
std::pair<SteepInterval, SteepInterval> split_steep(const FuncSpec& f,
                                                    const SteepInterval& parent,
                                                    int search_depth);

// find_seed, then recursive split_steep down to `depth`, all with threshold
// C' fixed by the seed (applying the splitting step to C' rather than C is
// what places the limit points strictly inside the C-exceptional set).
// Construction failures carry the binary address where they occurred.
WitnessTree build_tree(const FuncSpec& f, const Interval& J, double c, int depth,
                       int search_depth, int resolution_depth);

// Recomputes every node's slope from the embedded function and re-checks
// steepness, disjointness, containment, length halving, and balance.
// Violations are data, not exceptions; an empty list means a valid
// certificate.
VerifyReport verify_tree(const WitnessTree& t);

// Extracts the leaf-level certificate. Verifies the tree first and throws
// InvalidTree if verification fails.
CantorCertificate certificate(const WitnessTree& t);

}  // namespace lipcert
