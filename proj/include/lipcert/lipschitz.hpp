#pragma once

// Shrinking-window estimation of pointwise Lipschitz constants
// L(f, x0) = limsup_{x -> x0} |f(x) - f(x0)| / |x - x0|,
// grid profiles, C-exceptional point detection, and the seminorm
// equivalence check.
//
// The limsup is discretized by a geometric sequence of window scales. Window
// k records the maximum difference quotient over sample points whose distance
// from x0 lies in the outer half-shell [h_k/2, h_k] (evenly spaced distances,
// both endpoints included; both sides of x0 when interior, one side at a
// domain endpoint). With shrink factor 1/2 consecutive shells tile the whole
// ball; sampling each window's full ball instead would let coarse-scale
// secants leak into every window and over-report the limsup.

#include <span>
#include <vector>

#include "lipcert/func_spec.hpp"
#include "lipcert/interval.hpp"

namespace lipcert {

// Floating-point guard for "> C" comparisons: exceedance means
// value > C * (1 + kDefaultRelTol), so L = C exactly never flickers.
inline constexpr double kDefaultRelTol = 1e-9;

// windowMaxima must grow by at least this consecutive ratio over the last
// half of the windows for the estimate to be flagged divergent (L = +inf).
inline constexpr double kDefaultDivergenceRatio = 1.2;

// Geometric window schedule: window k has half-width h0 * shrink_factor^k,
// k = 0 .. window_count-1, each sampled at samples_per_window distances.
struct ScaleSchedule {
  double h0;
  double shrink_factor = 0.5;
  int window_count;
  int samples_per_window;
  double divergence_ratio = kDefaultDivergenceRatio;

  // Throws SpecError unless h0 > 0, 0 < shrink_factor < 1, window_count >= 3,
  // samples_per_window >= 4, divergence_ratio > 1.
  void validate() const;

  // The window half-widths, largest first.
  std::vector<double> scales() const;
};

enum class Sided { two_sided, left, right };

const char* to_string(Sided s);

// Per-point estimate of L(f, x0).
//   value         max of the last ceil(K/2) window maxima; +inf when divergent
//   windowMaxima  max difference quotient per window, coarse to fine
//   divergent     window maxima strictly increase by ratio >= divergence_ratio
//                 over the last ceil(K/2) windows
struct LipEstimate {
  double value;
  std::vector<double> window_maxima;
  bool divergent;
  Sided sided;
};

struct LipschitzProfile {
  std::vector<double> grid_points;
  std::vector<LipEstimate> estimates;
  ScaleSchedule schedule;
  FuncSpec func;
};

// Estimates L(f, x0) with the given schedule. Sampling is deterministic, so
// repeated calls are bit-identical. One-sided automatically at domain
// endpoints; samples never leave the domain.
LipEstimate estimate_pointwise(const FuncSpec& f, double x0, const Interval& domain,
                               const ScaleSchedule& schedule);

// Same estimator with explicit window scales (strictly decreasing, positive).
// Used where the scales are dictated externally, e.g. by the interval lengths
// of a witness-tree branch.
LipEstimate estimate_pointwise(const FuncSpec& f, double x0, const Interval& domain,
                               std::span<const double> scales,
                               int samples_per_window,
                               double divergence_ratio = kDefaultDivergenceRatio);

// Profile over an evenly spaced grid including both endpoints (one-sided
// estimates there). Estimator errors are rethrown annotated with the
// offending grid point.
LipschitzProfile profile(const FuncSpec& f, const Interval& domain, int grid_count,
                         const ScaleSchedule& schedule);

// Profile over an explicit strictly increasing grid inside `domain`.
LipschitzProfile profile_at(const FuncSpec& f, const Interval& domain,
                            std::vector<double> grid_points,
                            const ScaleSchedule& schedule);

// Evenly spaced grid over I joined with f's critical points (breakpoints,
// kinks), so piecewise-linear profiles and seminorm estimates are exact.
// Near-coincident points are merged, keeping the critical point.
std::vector<double> aligned_grid(const FuncSpec& f, const Interval& I,
                                 int grid_count);

struct ExceptionalPoint {
  double x;
  LipEstimate estimate;
};

// Grid points whose estimate exceeds C * (1 + rel_tol) or is divergent,
// in grid order. Monotone in C: larger C selects a subset.
std::vector<ExceptionalPoint> exceptional_points(const LipschitzProfile& p, double c,
                                                 double rel_tol = kDefaultRelTol);

// Max adjacent-pair difference quotient over aligned_grid(f, I, grid_count).
// A lower bound on the true Lipschitz seminorm; exact for piecewise linear
// functions (the grid contains every breakpoint).
double seminorm_estimate(const FuncSpec& f, const Interval& I, int grid_count);

struct EquivalenceReport {
  double c;
  double max_pointwise;  // max profile estimate over the aligned grid
  double max_pairwise;   // seminorm estimate over the same grid
  bool pointwise_within; // max_pointwise <= c * (1 + rel_tol)
  bool pairwise_within;  // max_pairwise  <= c * (1 + rel_tol)
  std::size_t grid_size;
  double rel_tol;
};

// Checks the equivalence "L(f,x) <= C for all x" <=> "Lipschitz seminorm
// <= C" on an aligned grid. Throws DisagreementError (carrying both maxima)
// if the two sides disagree.
EquivalenceReport check_equivalence(const FuncSpec& f, const Interval& I, double c,
                                    int grid_count, const ScaleSchedule& schedule,
                                    double rel_tol = kDefaultRelTol);

struct IsolationReport {
  // Isolated exceptional points contradicting the no-isolated-points property.
  std::vector<double> violations;
  // Isolated points attributed to grid resolution (the true exceptional set
  // may be thinner than the grid).
  std::vector<double> resolution_flags;
  std::size_t checked = 0;
};

// For each exceptional point, requires another exceptional point within
// 2 * grid_step. Isolated singletons are violations when the caller vouches
// that the point set is exact at this resolution (every component of the true
// set contributes at least two grid points, as for oracle-computed piecewise
// linear exceptional sets on breakpoint-aligned grids); otherwise they are
// reported as resolution-limited flags.
IsolationReport no_isolated_check(const std::vector<double>& points,
                                  double grid_step, bool exact_set = false);

}  // namespace lipcert
