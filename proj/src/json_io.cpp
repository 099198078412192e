#include "lipcert/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <deque>
#include <istream>
#include <map>
#include <sstream>
#include <system_error>

namespace lipcert {

using nlohmann::json;

namespace {

// Shortest round-trip representation (what to_chars produces).
std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double get_double(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw SpecError(std::string("missing or non-numeric field '") + key + "'");
  return j[key].get<double>();
}

int get_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw SpecError(std::string("missing or non-integer field '") + key + "'");
  return j[key].get<int>();
}

std::vector<double> get_array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw SpecError(std::string("missing or non-array field '") + key + "'");
  std::vector<double> out;
  out.reserve(j[key].size());
  for (const json& v : j[key]) {
    if (!v.is_number())
      throw SpecError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

struct FuncToJson {
  json operator()(const Constant& c) const {
    return {{"kind", "Constant"}, {"value", c.value}};
  }
  json operator()(const Affine& a) const {
    return {{"kind", "Affine"}, {"slope", a.slope}, {"intercept", a.intercept}};
  }
  json operator()(const Abs&) const { return {{"kind", "Abs"}}; }
  json operator()(const Polynomial& p) const {
    return {{"kind", "Polynomial"}, {"coefficients", p.coefficients}};
  }
  json operator()(const PiecewiseLinear& f) const {
    return {{"kind", "PiecewiseLinear"},
            {"breakpoints", f.breakpoints},
            {"values", f.values}};
  }
  json operator()(const CantorStaircase& c) const {
    return {{"kind", "CantorStaircase"},
            {"ratio", c.spec.ratio},
            {"digitDepth", c.spec.digit_depth}};
  }
  json operator()(const Sampled& s) const {
    return {{"kind", "Sampled"},
            {"xs", s.xs},
            {"ys", s.ys},
            {"interpolation", "linear"}};
  }
  json operator()(const AffineReparam& r) const {
    return {{"kind", "AffineReparam"}, {"inner", func_to_json(*r.inner)},
            {"preScale", r.pre_scale},   {"preShift", r.pre_shift},
            {"postScale", r.post_scale}, {"postShift", r.post_shift}};
  }
  json operator()(const Sum& s) const {
    json terms = json::array();
    for (const FuncSpec& t : s.terms) terms.push_back(func_to_json(t));
    return {{"kind", "Sum"}, {"terms", terms}};
  }
};

}  // namespace

json func_to_json(const FuncSpec& f) { return std::visit(FuncToJson{}, f.node()); }

FuncSpec func_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw SpecError("function document needs a string 'kind' field");
  const std::string kind = j["kind"].get<std::string>();

  if (kind == "Constant") return FuncSpec(Constant{get_double(j, "value")});
  if (kind == "Affine")
    return FuncSpec(Affine{get_double(j, "slope"), get_double(j, "intercept")});
  if (kind == "Abs") return FuncSpec(Abs{});
  if (kind == "Polynomial")
    return FuncSpec(Polynomial{get_array(j, "coefficients")});
  if (kind == "PiecewiseLinear")
    return FuncSpec(
        PiecewiseLinear{get_array(j, "breakpoints"), get_array(j, "values")});
  if (kind == "CantorStaircase")
    return FuncSpec(CantorStaircase{
        CantorSpec{get_double(j, "ratio"), get_int(j, "digitDepth")}});
  if (kind == "Sampled") {
    if (j.contains("interpolation") &&
        j["interpolation"].get<std::string>() != "linear")
      throw SpecError("Sampled supports only linear interpolation");
    return FuncSpec(Sampled{get_array(j, "xs"), get_array(j, "ys")});
  }
  if (kind == "AffineReparam") {
    if (!j.contains("inner")) throw SpecError("AffineReparam needs 'inner'");
    return reparam(func_from_json(j["inner"]), get_double(j, "preScale"),
                   get_double(j, "preShift"), get_double(j, "postScale"),
                   get_double(j, "postShift"));
  }
  if (kind == "Sum") {
    if (!j.contains("terms") || !j["terms"].is_array())
      throw SpecError("Sum needs an array 'terms'");
    std::vector<FuncSpec> terms;
    for (const json& t : j["terms"]) terms.push_back(func_from_json(t));
    return FuncSpec(Sum{std::move(terms)});
  }
  throw SpecError("unknown function kind '" + kind + "'");
}

Sampled sampled_from_csv(std::istream& in) {
  std::vector<double> xs, ys;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x = 0.0, y = 0.0;
    if (!(row >> x >> y)) {
      if (lineno == 1) continue;  // header row
      throw SpecError("csv: malformed line " + std::to_string(lineno));
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  if (xs.size() < 2) throw SpecError("csv: need at least two data rows");
  return Sampled{std::move(xs), std::move(ys)};
}

std::string profile_to_csv(const LipschitzProfile& p) {
  std::string out = "x,value,divergent,sided";
  const std::size_t windows =
      p.estimates.empty() ? 0 : p.estimates.front().window_maxima.size();
  for (std::size_t k = 0; k < windows; ++k) out += ",wm" + std::to_string(k);
  out += "\n";
  for (std::size_t i = 0; i < p.grid_points.size(); ++i) {
    const LipEstimate& e = p.estimates[i];
    out += fmt(p.grid_points[i]);
    out += ",";
    out += fmt(e.value);
    out += e.divergent ? ",1," : ",0,";
    out += to_string(e.sided);
    for (double wm : e.window_maxima) {
      out += ",";
      out += fmt(wm);
    }
    out += "\n";
  }
  return out;
}

namespace {

json estimate_to_json(const LipEstimate& e) {
  return {{"value", e.value},
          {"windowMaxima", e.window_maxima},
          {"divergent", e.divergent},
          {"sided", to_string(e.sided)}};
}

}  // namespace

json profile_to_json(const LipschitzProfile& p) {
  json estimates = json::array();
  for (const LipEstimate& e : p.estimates) estimates.push_back(estimate_to_json(e));
  return {{"gridPoints", p.grid_points},
          {"estimates", estimates},
          {"schedule",
           {{"h0", p.schedule.h0},
            {"shrinkFactor", p.schedule.shrink_factor},
            {"windowCount", p.schedule.window_count},
            {"samplesPerWindow", p.schedule.samples_per_window}}},
          {"func", func_to_json(p.func)}};
}

namespace {

json nodes_to_json(const WitnessTree& t) {
  json nodes = json::array();
  std::deque<std::pair<const WitnessNode*, std::string>> queue;
  queue.emplace_back(&t.root, "");
  while (!queue.empty()) {
    auto [node, addr] = queue.front();
    queue.pop_front();
    nodes.push_back({{"addr", addr},
                     {"a", node->steep.interval.a},
                     {"b", node->steep.interval.b},
                     {"slope", node->steep.slope}});
    for (std::size_t i = 0; i < node->children.size(); ++i)
      queue.emplace_back(&node->children[i], addr + (i == 0 ? "0" : "1"));
  }
  return nodes;
}

}  // namespace

json tree_to_json(const WitnessTree& t) {
  return {{"version", 1},
          {"func", func_to_json(t.func)},
          {"C", t.c},
          {"cPrime", t.c_prime},
          {"depth", t.depth},
          {"nodes", nodes_to_json(t)}};
}

json certificate_to_json(const WitnessTree& t, const CantorCertificate& cert) {
  json doc = tree_to_json(t);
  json leaves = json::array();
  for (std::size_t i = 0; i < cert.leaf_intervals.size(); ++i)
    leaves.push_back({{"addr", cert.addresses[i]},
                      {"a", cert.leaf_intervals[i].a},
                      {"b", cert.leaf_intervals[i].b},
                      {"branchSlopeMin", cert.branch_slope_minima[i]}});
  doc["leaves"] = leaves;
  return doc;
}

namespace {

struct RawNode {
  double a;
  double b;
  double slope;
};

struct DocumentHeader {
  FuncSpec func;
  double c;
  double c_prime;
  int depth;
  std::map<std::string, RawNode> nodes;
};

DocumentHeader parse_header(const json& j) {
  if (!j.is_object()) throw SpecError("certificate: document must be an object");
  if (get_int(j, "version") != 1)
    throw SpecError("certificate: unsupported version");
  if (!j.contains("func")) throw SpecError("certificate: missing 'func'");
  if (!j.contains("nodes") || !j["nodes"].is_array())
    throw SpecError("certificate: missing 'nodes' array");

  DocumentHeader h{func_from_json(j["func"]), get_double(j, "C"),
                   get_double(j, "cPrime"), get_int(j, "depth"), {}};
  for (const json& n : j["nodes"]) {
    if (!n.is_object() || !n.contains("addr") || !n["addr"].is_string())
      throw SpecError("certificate: node needs a string 'addr'");
    const std::string addr = n["addr"].get<std::string>();
    if (addr.find_first_not_of("01") != std::string::npos)
      throw SpecError("certificate: node address must be a binary string");
    if (!h.nodes.emplace(addr, RawNode{get_double(n, "a"), get_double(n, "b"),
                                       get_double(n, "slope")})
             .second)
      throw SpecError("certificate: duplicate node address '" + addr + "'");
  }
  return h;
}

// Materializes the subtree rooted at `addr`. Returns false (and records a
// violation) when the subtree is structurally unusable.
bool materialize(const DocumentHeader& h, const std::string& addr, double c_prime,
                 WitnessNode& out, std::vector<Violation>& violations,
                 std::size_t& used) {
  auto it = h.nodes.find(addr);
  if (it == h.nodes.end()) {
    violations.push_back({addr, ViolationKind::structure, "missing node"});
    return false;
  }
  ++used;
  const RawNode& raw = it->second;
  if (!(raw.a < raw.b)) {
    violations.push_back(
        {addr, ViolationKind::structure, "degenerate interval (a >= b)"});
    return false;
  }
  out.steep = SteepInterval{Interval(raw.a, raw.b), raw.slope, c_prime};

  const bool has0 = h.nodes.count(addr + "0") > 0;
  const bool has1 = h.nodes.count(addr + "1") > 0;
  if (has0 != has1) {
    violations.push_back(
        {addr, ViolationKind::bad_arity, "exactly one child present"});
    return false;
  }
  if (!has0) return true;
  out.children.resize(2, WitnessNode{out.steep, {}});
  bool ok = materialize(h, addr + "0", c_prime, out.children[0], violations, used);
  ok = materialize(h, addr + "1", c_prime, out.children[1], violations, used) && ok;
  return ok;
}

}  // namespace

WitnessTree tree_from_json(const json& j) {
  DocumentHeader h = parse_header(j);
  std::vector<Violation> violations;
  std::size_t used = 0;
  WitnessNode root{SteepInterval{Interval(0.0, 1.0), 0.0, 0.0}, {}};
  if (!materialize(h, "", h.c_prime, root, violations, used))
    throw SpecError("certificate: " + violations.front().message + " at node '" +
                    violations.front().address + "'");
  if (used != h.nodes.size())
    throw SpecError("certificate: document contains orphan nodes");
  return WitnessTree{std::move(h.func), h.c, h.c_prime, h.depth, std::move(root)};
}

VerifyReport verify_document(const json& j) {
  DocumentHeader h = parse_header(j);
  VerifyReport report;
  std::size_t used = 0;
  WitnessNode root{SteepInterval{Interval(0.0, 1.0), 0.0, 0.0}, {}};
  const bool ok = materialize(h, "", h.c_prime, root, report.violations, used);
  if (used != h.nodes.size())
    report.violations.push_back({"", ViolationKind::structure,
                                 std::to_string(h.nodes.size() - used) +
                                     " orphan node(s) unreachable from the root"});
  if (!ok || !report.violations.empty()) return report;

  WitnessTree tree{std::move(h.func), h.c, h.c_prime, h.depth, std::move(root)};
  return verify_tree(tree);
}

json report_to_json(const EquivalenceReport& r) {
  return {{"C", r.c},
          {"maxPointwise", r.max_pointwise},
          {"maxPairwise", r.max_pairwise},
          {"pointwiseWithin", r.pointwise_within},
          {"pairwiseWithin", r.pairwise_within},
          {"consistent", r.pointwise_within == r.pairwise_within},
          {"gridSize", r.grid_size},
          {"relTol", r.rel_tol}};
}

json report_to_json(const IsolationReport& r) {
  return {{"violations", r.violations},
          {"resolutionFlags", r.resolution_flags},
          {"checked", r.checked}};
}

json report_to_json(const FlatnessReport& r) {
  return {{"level", r.level},
          {"h", r.h},
          {"gapCount", r.gap_count},
          {"maxQuotient", r.max_quotient},
          {"pass", r.pass}};
}

json report_to_json(const VerifyReport& r) {
  json violations = json::array();
  for (const Violation& v : r.violations)
    violations.push_back({{"address", v.address},
                          {"kind", to_string(v.kind)},
                          {"message", v.message}});
  return {{"valid", r.valid()},
          {"nodesChecked", r.nodes_checked},
          {"violations", violations}};
}

json report_to_json(const NonremovabilityReport& r) {
  json flatness = json::array();
  for (const FlatnessReport& f : r.flatness) flatness.push_back(report_to_json(f));
  // A failed verification still serializes (tree document without leaves).
  json cert_doc = r.witness_valid
                      ? certificate_to_json(r.tree, certificate(r.tree))
                      : tree_to_json(r.tree);
  return {{"ratio", r.spec.ratio},
          {"digitDepth", r.spec.digit_depth},
          {"C", r.c},
          {"depth", r.depth},
          {"increment", r.increment},
          {"nonConstant", r.non_constant},
          {"flatness", flatness},
          {"flatOffSet", r.flat_off_set},
          {"witnessValid", r.witness_valid},
          {"verification", report_to_json(r.verification)},
          {"certificate", std::move(cert_doc)},
          {"pass", r.pass()}};
}

}  // namespace lipcert
