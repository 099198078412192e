#include "lipcert/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lipcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t tail_start(std::size_t window_count) {
  // Last ceil(K/2) windows carry the estimate; the limsup lives at the
  // finest scales.
  return window_count - (window_count + 1) / 2;
}

void validate_scales(std::span<const double> scales) {
  if (scales.empty()) throw SpecError("estimator needs at least one scale");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(std::isfinite(scales[i]) && scales[i] > 0.0))
      throw SpecError("window scales must be positive and finite");
    if (i > 0 && !(scales[i] < scales[i - 1]))
      throw SpecError("window scales must be strictly decreasing");
  }
}

}  // namespace

void ScaleSchedule::validate() const {
  if (!(std::isfinite(h0) && h0 > 0.0))
    throw SpecError("ScaleSchedule: h0 must be positive");
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0))
    throw SpecError("ScaleSchedule: shrinkFactor must lie in (0, 1)");
  if (window_count < 3) throw SpecError("ScaleSchedule: windowCount must be >= 3");
  if (samples_per_window < 4)
    throw SpecError("ScaleSchedule: samplesPerWindow must be >= 4");
  if (!(divergence_ratio > 1.0))
    throw SpecError("ScaleSchedule: divergenceRatio must exceed 1");
}

std::vector<double> ScaleSchedule::scales() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(window_count));
  double h = h0;
  for (int k = 0; k < window_count; ++k) {
    out[static_cast<std::size_t>(k)] = h;
    h *= shrink_factor;
  }
  return out;
}

const char* to_string(Sided s) {
  switch (s) {
    case Sided::two_sided: return "two-sided";
    case Sided::left: return "left";
    case Sided::right: return "right";
  }
  return "?";
}

LipEstimate estimate_pointwise(const FuncSpec& f, double x0, const Interval& domain,
                               std::span<const double> scales,
                               int samples_per_window, double divergence_ratio) {
  if (!domain.contains(x0))
    throw DomainError("estimate_pointwise: x0 outside the domain");
  validate_scales(scales);
  if (samples_per_window < 2)
    throw SpecError("estimate_pointwise: need at least 2 samples per window");
  if (!(divergence_ratio > 1.0))
    throw SpecError("estimate_pointwise: divergenceRatio must exceed 1");

  const double f0 = evaluate(f, x0);
  const double room_left = x0 - domain.a;
  const double room_right = domain.b - x0;
  const Sided sided = room_left == 0.0   ? Sided::right
                      : room_right == 0.0 ? Sided::left
                                          : Sided::two_sided;

  const int m = samples_per_window;
  std::vector<double> window_maxima;
  window_maxima.reserve(scales.size());

  for (std::size_t k = 0; k < scales.size(); ++k) {
    double wmax = -1.0;
    for (int dir = 0; dir < 2; ++dir) {
      const double room = dir == 0 ? room_left : room_right;
      if (room <= 0.0) continue;
      const double radius = std::min(scales[k], room);
      const double half = 0.5 * radius;
      for (int j = 0; j < m; ++j) {
        // Distances evenly spaced over [radius/2, radius], both ends included.
        const double d = half + half * (static_cast<double>(j) / (m - 1));
        double x = dir == 0 ? x0 - d : x0 + d;
        x = std::clamp(x, domain.a, domain.b);
        const double dist = std::fabs(x - x0);
        if (dist == 0.0) continue;
        const double q = std::fabs(evaluate(f, x) - f0) / dist;
        wmax = std::max(wmax, q);
      }
    }
    if (wmax < 0.0)
      throw ScheduleError("window " + std::to_string(k) +
                          " has no usable sample points after clipping");
    window_maxima.push_back(wmax);
  }

  const std::size_t start = tail_start(window_maxima.size());
  bool divergent = window_maxima.size() - start >= 2;
  double tail_max = 0.0;
  for (std::size_t i = start; i < window_maxima.size(); ++i) {
    tail_max = std::max(tail_max, window_maxima[i]);
    if (i > start) {
      const bool grows = window_maxima[i] > window_maxima[i - 1] &&
                         window_maxima[i] >= window_maxima[i - 1] * divergence_ratio;
      divergent = divergent && grows;
    }
  }

  return LipEstimate{divergent ? kInf : tail_max, std::move(window_maxima),
                     divergent, sided};
}

LipEstimate estimate_pointwise(const FuncSpec& f, double x0, const Interval& domain,
                               const ScaleSchedule& schedule) {
  const std::vector<double> scales = schedule.scales();
  return estimate_pointwise(f, x0, domain, scales, schedule.samples_per_window,
                            schedule.divergence_ratio);
}

namespace {

LipschitzProfile profile_impl(const FuncSpec& f, const Interval& domain,
                              std::vector<double> grid,
                              const ScaleSchedule& schedule) {
  schedule.validate();
  if (grid.size() < 2) throw SpecError("profile: need at least 2 grid points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!domain.contains(grid[i]))
      throw DomainError("profile: grid point outside the domain");
    if (i > 0 && !(grid[i - 1] < grid[i]))
      throw SpecError("profile: grid points must be strictly increasing");
  }
  std::vector<LipEstimate> estimates;
  estimates.reserve(grid.size());
  for (double x : grid) {
    try {
      estimates.push_back(estimate_pointwise(f, x, domain, schedule));
    } catch (const ScheduleError& e) {
      throw ScheduleError(std::string(e.what()) + " at grid point x = " +
                          std::to_string(x));
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at grid point x = " +
                        std::to_string(x));
    }
  }
  return LipschitzProfile{std::move(grid), std::move(estimates), schedule, f};
}

std::vector<double> even_grid(const Interval& I, int grid_count) {
  if (grid_count < 2) throw SpecError("grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(grid_count));
  const double n = grid_count - 1;
  for (int i = 0; i < grid_count; ++i)
    grid[static_cast<std::size_t>(i)] = I.a + (I.b - I.a) * (i / n);
  grid.front() = I.a;
  grid.back() = I.b;
  return grid;
}

}  // namespace

LipschitzProfile profile(const FuncSpec& f, const Interval& domain, int grid_count,
                         const ScaleSchedule& schedule) {
  return profile_impl(f, domain, even_grid(domain, grid_count), schedule);
}

LipschitzProfile profile_at(const FuncSpec& f, const Interval& domain,
                            std::vector<double> grid_points,
                            const ScaleSchedule& schedule) {
  return profile_impl(f, domain, std::move(grid_points), schedule);
}

std::vector<double> aligned_grid(const FuncSpec& f, const Interval& I,
                                 int grid_count) {
  std::vector<double> grid = even_grid(I, grid_count);
  std::vector<double> crit = critical_points(f, I);
  if (crit.empty()) return grid;

  struct Tagged {
    double x;
    bool critical;
  };
  std::vector<Tagged> pts;
  pts.reserve(grid.size() + crit.size());
  for (double x : grid) pts.push_back({x, x == I.a || x == I.b});
  for (double x : crit) pts.push_back({x, true});
  std::sort(pts.begin(), pts.end(), [](const Tagged& l, const Tagged& r) {
    return l.x < r.x || (l.x == r.x && l.critical > r.critical);
  });

  // Merge near-coincident points so adjacent-pair quotients stay
  // well-conditioned; a critical point wins over a plain grid point.
  const double min_sep = I.length() * 1e-12;
  std::vector<Tagged> merged;
  for (const Tagged& p : pts) {
    if (!merged.empty() && p.x - merged.back().x <= min_sep) {
      if (p.critical && !merged.back().critical) merged.back() = p;
      continue;
    }
    merged.push_back(p);
  }
  std::vector<double> out;
  out.reserve(merged.size());
  for (const Tagged& p : merged) out.push_back(p.x);
  out.front() = I.a;
  out.back() = I.b;
  return out;
}

std::vector<ExceptionalPoint> exceptional_points(const LipschitzProfile& p, double c,
                                                 double rel_tol) {
  if (!(c >= 0.0)) throw SpecError("exceptional_points: C must be >= 0");
  std::vector<ExceptionalPoint> out;
  for (std::size_t i = 0; i < p.grid_points.size(); ++i) {
    const LipEstimate& e = p.estimates[i];
    if (e.divergent || e.value > c * (1.0 + rel_tol))
      out.push_back({p.grid_points[i], e});
  }
  return out;
}

double seminorm_estimate(const FuncSpec& f, const Interval& I, int grid_count) {
  const std::vector<double> grid = aligned_grid(f, I, grid_count);
  double best = 0.0;
  double prev_x = grid[0];
  double prev_y = evaluate(f, prev_x);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double x = grid[i];
    const double y = evaluate(f, x);
    best = std::max(best, std::fabs(y - prev_y) / (x - prev_x));
    prev_x = x;
    prev_y = y;
  }
  return best;
}

EquivalenceReport check_equivalence(const FuncSpec& f, const Interval& I, double c,
                                    int grid_count, const ScaleSchedule& schedule,
                                    double rel_tol) {
  if (!(c >= 0.0)) throw SpecError("check_equivalence: C must be >= 0");
  const LipschitzProfile prof = profile_at(f, I, aligned_grid(f, I, grid_count),
                                           schedule);
  double max_pointwise = 0.0;
  for (const LipEstimate& e : prof.estimates)
    max_pointwise = std::max(max_pointwise, e.value);
  const double max_pairwise = seminorm_estimate(f, I, grid_count);

  const double bound = c * (1.0 + rel_tol);
  const bool pointwise_within = max_pointwise <= bound;
  const bool pairwise_within = max_pairwise <= bound;
  if (pointwise_within != pairwise_within)
    throw DisagreementError(
        "check_equivalence: pointwise max " + std::to_string(max_pointwise) +
            " and pairwise max " + std::to_string(max_pairwise) +
            " fall on opposite sides of C = " + std::to_string(c) +
            "; the estimator or grid is misconfigured for this function",
        max_pointwise, max_pairwise);

  return EquivalenceReport{c,
                           max_pointwise,
                           max_pairwise,
                           pointwise_within,
                           pairwise_within,
                           prof.grid_points.size(),
                           rel_tol};
}

IsolationReport no_isolated_check(const std::vector<double>& points,
                                  double grid_step, bool exact_set) {
  if (!(grid_step > 0.0)) throw SpecError("no_isolated_check: gridStep must be > 0");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i - 1] < points[i]))
      throw SpecError("no_isolated_check: points must be sorted ascending");

  IsolationReport report;
  report.checked = points.size();
  const double reach = 2.0 * grid_step;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double nearest = kInf;
    if (i > 0) nearest = std::min(nearest, points[i] - points[i - 1]);
    if (i + 1 < points.size()) nearest = std::min(nearest, points[i + 1] - points[i]);
    if (nearest <= reach) continue;
    if (exact_set)
      report.violations.push_back(points[i]);
    else
      report.resolution_flags.push_back(points[i]);
  }
  return report;
}

}  // namespace lipcert
