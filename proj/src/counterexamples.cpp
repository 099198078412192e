#include "lipcert/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lipcert {

namespace {

void validate_level(const CantorSpec& spec, int level) {
  cantor_value(0.0, spec);  // runs the spec validation
  if (level < 1 || level > 40)
    throw SpecError("gap level must lie in [1, 40]");
}

}  // namespace

GapSample gap_intervals(const CantorSpec& spec, int level) {
  validate_level(spec, level);
  const double r = spec.ratio;

  // Surviving intervals after level-1 construction steps, by left endpoint.
  std::vector<double> lefts{0.0};
  double len = 1.0;
  for (int step = 1; step < level; ++step) {
    std::vector<double> next;
    next.reserve(lefts.size() * 2);
    const double offset = len - r * len;
    for (double a : lefts) {
      next.push_back(a);
      next.push_back(a + offset);
    }
    lefts = std::move(next);
    len *= r;
  }

  GapSample out;
  out.level = level;
  out.gaps.reserve(lefts.size());
  out.midpoints.reserve(lefts.size());
  const double gap_width = len * (1.0 - 2.0 * r);
  const double inset = 0.1 * gap_width;
  for (double a : lefts) {
    const double g1 = a + r * len;
    const double g2 = a + len - r * len;
    out.gaps.emplace_back(g1 + inset, g2 - inset);
    out.midpoints.push_back(a + 0.5 * len);
  }
  return out;
}

FlatnessReport flatness_check(const CantorSpec& spec, int level, double h) {
  const GapSample gs = gap_intervals(spec, level);
  double min_width = gs.gaps.front().length();
  for (const Interval& g : gs.gaps) min_width = std::min(min_width, g.length());
  if (!(h > 0.0) || !(h < 0.25 * min_width))
    throw StepTooLarge("flatness_check: h = " + std::to_string(h) +
                       " must lie in (0, " + std::to_string(0.25 * min_width) +
                       "), a quarter of the narrowest sampled gap");

  FlatnessReport report{level, h, gs.gaps.size(), 0.0, true};
  for (double m : gs.midpoints) {
    const double v0 = cantor_value(m, spec);
    const double vp = cantor_value(m + h, spec);
    const double vm = cantor_value(m - h, spec);
    if (vp != v0 || vm != v0) report.pass = false;
    const double q = std::max(std::fabs(vp - v0), std::fabs(v0 - vm)) / h;
    report.max_quotient = std::max(report.max_quotient, q);
  }
  return report;
}

NonremovabilityReport nonremovability_demo(const CantorSpec& spec, double c,
                                           int depth, int search_depth,
                                           int resolution_depth) {
  if (!(c >= 0.0)) throw SpecError("nonremovability_demo: C must be >= 0");
  const FuncSpec f{CantorStaircase{spec}};

  const double increment = cantor_value(1.0, spec) - cantor_value(0.0, spec);

  std::vector<FlatnessReport> flatness;
  bool flat = true;
  for (int level = 1; level <= 5; ++level) {
    const GapSample gs = gap_intervals(spec, level);
    const double h = gs.gaps.front().length() / 8.0;
    FlatnessReport rep = flatness_check(spec, level, h);
    flat = flat && rep.pass && rep.max_quotient == 0.0;
    flatness.push_back(rep);
  }

  WitnessTree tree = build_tree(f, Interval(0.0, 1.0), c, depth, search_depth,
                                resolution_depth);
  VerifyReport verification = verify_tree(tree);
  const bool valid = verification.valid();

  return NonremovabilityReport{spec,
                               c,
                               depth,
                               increment,
                               increment == 1.0,
                               std::move(flatness),
                               flat,
                               std::move(tree),
                               std::move(verification),
                               valid};
}

}  // namespace lipcert
