#pragma once

// Non-removability counterexamples: generalized Cantor staircases are
// continuous, non-constant, and have derivative zero off a perfect set.
// The demo ties three verified facts together — f(1) - f(0) = 1, exact
// flatness at sampled gap points, and a verified witness tree inside the
// exceptional set — so perfect sets are exhibited as non-removable.

#include <vector>

#include "lipcert/func_spec.hpp"
#include "lipcert/interval.hpp"
#include "lipcert/witness.hpp"

namespace lipcert {

// The removed gaps of the generalized Cantor construction at one level,
// recorded as closed intervals shrunk 10% inward so sampled points stay
// strictly interior.
struct GapSample {
  int level;
  std::vector<Interval> gaps;      // 2^(level-1) intervals, sorted, disjoint
  std::vector<double> midpoints;   // gap centers
};

struct FlatnessReport {
  int level;
  double h;
  std::size_t gap_count;
  double max_quotient;  // must be exactly 0: the staircase is constant on gaps
  bool pass;
};

struct NonremovabilityReport {
  CantorSpec spec;
  double c;
  int depth;

  double increment;       // cantor_value(1) - cantor_value(0)
  bool non_constant;      // increment == 1 exactly

  std::vector<FlatnessReport> flatness;
  bool flat_off_set;      // every flatness check passed with quotient 0

  WitnessTree tree;       // certified skeleton inside the exceptional set
  VerifyReport verification;
  bool witness_valid;

  bool pass() const { return non_constant && flat_off_set && witness_valid; }
};

// Gaps removed at step `level` (1 <= level <= 40). Throws SpecError on an
// invalid spec or level.
GapSample gap_intervals(const CantorSpec& spec, int level);

// Asserts cantor_value(m - h) == cantor_value(m) == cantor_value(m + h)
// bit-exactly at every gap midpoint of the level. Requires
// 0 < h < (narrowest recorded gap)/4, else StepTooLarge.
FlatnessReport flatness_check(const CantorSpec& spec, int level, double h);

// Composite counterexample report for f = the staircase of `spec`:
// non-constant, derivative 0 at sampled points off the Cantor set, and a
// depth-`depth` witness tree certified inside E_C(f). Component errors
// (NoSeedFound, ResolutionExhausted, ...) propagate.
NonremovabilityReport nonremovability_demo(const CantorSpec& spec, double c,
                                           int depth, int search_depth = 6,
                                           int resolution_depth = 12);

}  // namespace lipcert
