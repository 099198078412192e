#include "lipcert/func_spec.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace lipcert {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw SpecError(msg);
}

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw SpecError(std::string(what) + " must be finite");
}

void require_strictly_increasing(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i - 1] < v[i]))
      throw SpecError(std::string(what) + " must be strictly increasing");
}

void validate_breakpoint_table(const std::vector<double>& xs,
                               const std::vector<double>& ys, const char* what) {
  require(xs.size() >= 2, "breakpoint table needs at least two points");
  require(xs.size() == ys.size(), "breakpoint/value lengths must match");
  require_finite(xs, what);
  require_finite(ys, what);
  require_strictly_increasing(xs, what);
}

void validate_cantor(const CantorSpec& s) {
  require(std::isfinite(s.ratio) && s.ratio > 0.0 && s.ratio < 0.5,
          "CantorSpec ratio must lie in (0, 1/2)");
  require(s.digit_depth >= 1, "CantorSpec digitDepth must be >= 1");
}

struct Validator {
  void operator()(const Constant& c) const {
    require(std::isfinite(c.value), "Constant value must be finite");
  }
  void operator()(const Affine& a) const {
    require(std::isfinite(a.slope) && std::isfinite(a.intercept),
            "Affine parameters must be finite");
  }
  void operator()(const Abs&) const {}
  void operator()(const Polynomial& p) const {
    require(!p.coefficients.empty(), "Polynomial needs at least one coefficient");
    require_finite(p.coefficients, "Polynomial coefficients");
  }
  void operator()(const PiecewiseLinear& f) const {
    validate_breakpoint_table(f.breakpoints, f.values, "PiecewiseLinear breakpoints");
  }
  void operator()(const CantorStaircase& c) const { validate_cantor(c.spec); }
  void operator()(const Sampled& s) const {
    validate_breakpoint_table(s.xs, s.ys, "Sampled xs");
  }
  void operator()(const AffineReparam& r) const {
    require(r.inner != nullptr, "AffineReparam inner function missing");
    require(std::isfinite(r.pre_scale) && r.pre_scale != 0.0,
            "AffineReparam preScale must be finite and nonzero");
    require(std::isfinite(r.pre_shift) && std::isfinite(r.post_scale) &&
                std::isfinite(r.post_shift),
            "AffineReparam parameters must be finite");
  }
  void operator()(const Sum& s) const {
    require(!s.terms.empty(), "Sum needs at least one term");
  }
};

Domain domain_of(const FuncSpec::Variant& v);

struct DomainVisitor {
  Domain operator()(const Constant&) const { return {}; }
  Domain operator()(const Affine&) const { return {}; }
  Domain operator()(const Abs&) const { return {}; }
  Domain operator()(const Polynomial&) const { return {}; }
  Domain operator()(const PiecewiseLinear& f) const {
    return {f.breakpoints.front(), f.breakpoints.back()};
  }
  Domain operator()(const CantorStaircase&) const { return {0.0, 1.0}; }
  Domain operator()(const Sampled& s) const { return {s.xs.front(), s.xs.back()}; }
  Domain operator()(const AffineReparam& r) const {
    Domain d = r.inner->domain();
    double lo = (d.lo - r.pre_shift) / r.pre_scale;
    double hi = (d.hi - r.pre_shift) / r.pre_scale;
    if (lo > hi) std::swap(lo, hi);
    return {lo, hi};
  }
  Domain operator()(const Sum& s) const {
    Domain acc;
    for (const FuncSpec& t : s.terms) {
      Domain d = t.domain();
      acc.lo = std::max(acc.lo, d.lo);
      acc.hi = std::min(acc.hi, d.hi);
    }
    return acc;
  }
};

Domain domain_of(const FuncSpec::Variant& v) { return std::visit(DomainVisitor{}, v); }

// Locates the segment of x and evaluates the interpolant. End segments
// extrapolate: this raw path tolerates the sub-ulp excursions produced by
// reparametrization chains; strict domain enforcement happens once at the
// public evaluate() entry.
double pl_eval(const std::vector<double>& xs, const std::vector<double>& ys,
               double x) {
  const std::size_t n = xs.size();
  if (x == xs[n - 1]) return ys[n - 1];
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i;
  if (it == xs.begin())
    i = 0;
  else if (it == xs.end())
    i = n - 2;
  else
    i = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + slope * (x - xs[i]);
}

double cantor_raw(double x, const CantorSpec& s) {
  // Endpoints are the construction's fixed points. Truncation would return
  // 1 - 2^-digit_depth at x = 1; the exact construction value is 1.
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double value = 0.0;
  double weight = 0.5;
  const double r = s.ratio;
  const double upper = 1.0 - s.ratio;
  for (int k = 0; k < s.digit_depth; ++k) {
    if (x < r) {
      x /= r;
    } else if (x > upper) {
      value += weight;
      x = (x - upper) / r;
    } else {
      // x sits in a removed gap, where the staircase is exactly constant.
      return value + weight;
    }
    weight *= 0.5;
  }
  return value;
}

double eval_raw(const FuncSpec& f, double x);

struct EvalVisitor {
  double x;
  double operator()(const Constant& c) const { return c.value; }
  double operator()(const Affine& a) const { return a.slope * x + a.intercept; }
  double operator()(const Abs&) const { return std::fabs(x); }
  double operator()(const Polynomial& p) const {
    double acc = 0.0;
    for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it)
      acc = acc * x + *it;
    return acc;
  }
  double operator()(const PiecewiseLinear& f) const {
    return pl_eval(f.breakpoints, f.values, x);
  }
  double operator()(const CantorStaircase& c) const { return cantor_raw(x, c.spec); }
  double operator()(const Sampled& s) const { return pl_eval(s.xs, s.ys, x); }
  double operator()(const AffineReparam& r) const {
    return r.post_scale * eval_raw(*r.inner, r.pre_scale * x + r.pre_shift) +
           r.post_shift;
  }
  double operator()(const Sum& s) const {
    double acc = 0.0;
    for (const FuncSpec& t : s.terms) acc += eval_raw(t, x);
    return acc;
  }
};

double eval_raw(const FuncSpec& f, double x) {
  return std::visit(EvalVisitor{x}, f.node());
}

struct CriticalPointsVisitor {
  std::vector<double>& out;
  void operator()(const Constant&) const {}
  void operator()(const Affine&) const {}
  void operator()(const Abs&) const { out.push_back(0.0); }
  void operator()(const Polynomial&) const {}
  void operator()(const PiecewiseLinear& f) const {
    out.insert(out.end(), f.breakpoints.begin(), f.breakpoints.end());
  }
  void operator()(const CantorStaircase&) const {}
  void operator()(const Sampled& s) const {
    out.insert(out.end(), s.xs.begin(), s.xs.end());
  }
  void operator()(const AffineReparam& r) const {
    std::vector<double> inner_pts;
    std::visit(CriticalPointsVisitor{inner_pts}, r.inner->node());
    for (double p : inner_pts) out.push_back((p - r.pre_shift) / r.pre_scale);
  }
  void operator()(const Sum& s) const {
    for (const FuncSpec& t : s.terms) std::visit(CriticalPointsVisitor{out}, t.node());
  }
};

}  // namespace

bool operator==(const AffineReparam& l, const AffineReparam& r) {
  return *l.inner == *r.inner && l.pre_scale == r.pre_scale &&
         l.pre_shift == r.pre_shift && l.post_scale == r.post_scale &&
         l.post_shift == r.post_shift;
}

bool operator==(const Sum& l, const Sum& r) { return l.terms == r.terms; }

FuncSpec::FuncSpec(Variant v) : v_(std::move(v)) {
  std::visit(Validator{}, v_);
  Domain d = domain_of(v_);
  if (!(d.lo < d.hi))
    throw SpecError("function domain is empty or degenerate");
}

Domain FuncSpec::domain() const { return domain_of(v_); }

FuncSpec reparam(FuncSpec inner, double pre_scale, double pre_shift,
                 double post_scale, double post_shift) {
  return FuncSpec(AffineReparam{std::make_shared<const FuncSpec>(std::move(inner)),
                                pre_scale, pre_shift, post_scale, post_shift});
}

double evaluate(const FuncSpec& f, double x) {
  if (!std::isfinite(x)) throw DomainError("evaluate: x must be finite");
  if (!f.domain().contains(x))
    throw DomainError("evaluate: x = " + std::to_string(x) +
                      " outside the function's domain");
  return eval_raw(f, x);
}

double cantor_value(double x, const CantorSpec& spec) {
  validate_cantor(spec);
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError("cantor_value: x must lie in [0, 1]");
  return cantor_raw(x, spec);
}

double exact_pointwise_lipschitz_pl(const PiecewiseLinear& f, double x) {
  validate_breakpoint_table(f.breakpoints, f.values, "PiecewiseLinear breakpoints");
  const auto& xs = f.breakpoints;
  const auto& ys = f.values;
  const std::size_t n = xs.size();
  if (x < xs.front() || x > xs.back())
    throw DomainError("exact_pointwise_lipschitz_pl: x outside breakpoint range");

  auto slope_abs = [&](std::size_t seg) {
    return std::fabs((ys[seg + 1] - ys[seg]) / (xs[seg + 1] - xs[seg]));
  };

  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (it != xs.end() && *it == x) {
    if (i == 0) return slope_abs(0);
    if (i == n - 1) return slope_abs(n - 2);
    return std::max(slope_abs(i - 1), slope_abs(i));
  }
  // x is interior to segment i-1 (lower_bound returned the first breakpoint
  // strictly above x; i == 0 cannot happen past the range check).
  return slope_abs(i - 1);
}

std::vector<double> critical_points(const FuncSpec& f, const Interval& window) {
  std::vector<double> pts;
  std::visit(CriticalPointsVisitor{pts}, f.node());
  std::vector<double> out;
  for (double p : pts)
    if (window.contains(p)) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace lipcert
