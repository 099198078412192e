#pragma once

#include <stdexcept>
#include <string>

namespace lipcert {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A function/schedule/tree description violates its invariants.
struct SpecError : Error {
  using Error::Error;
};

// Argument outside a function's (or operation's) domain.
struct DomainError : Error {
  using Error::Error;
};

// A sampling window produced no usable points (after clipping/underflow).
struct ScheduleError : Error {
  using Error::Error;
};

// flatness_check: the step h is too large for the sampled gaps.
struct StepTooLarge : Error {
  using Error::Error;
};

// certificate() invoked on a tree that fails verification.
struct InvalidTree : Error {
  using Error::Error;
};

// check_equivalence: the pointwise and pairwise characterizations of the
// Lipschitz bound disagreed outside tolerance. Signals estimator or grid
// misconfiguration, not a mathematical failure.
struct DisagreementError : Error {
  DisagreementError(const std::string& msg, double pointwise, double pairwise)
      : Error(msg), max_pointwise(pointwise), max_pairwise(pairwise) {}
  double max_pointwise;
  double max_pairwise;
};

// find_seed: no steep subinterval exists at the scanned resolution.
// The exceptional set may be empty at this level.
struct NoSeedFound : Error {
  using Error::Error;
};

// split_steep/build_tree: no disjoint steep pair up to the search depth.
// For a continuous function a pair always exists at some finite depth, so
// this reflects a resolution limit of the search, never a counterexample.
struct ResolutionExhausted : Error {
  ResolutionExhausted(const std::string& msg, std::string addr)
      : Error(msg), address(std::move(addr)) {}
  // Binary address of the node where construction stopped ("" = root).
  std::string address;
};

// bisect_chain: neither half qualified within tolerance (floating-point
// cancellation near machine scale).
struct NumericalBreakdown : Error {
  NumericalBreakdown(const std::string& msg, int depth)
      : Error(msg), depth_reached(depth) {}
  int depth_reached;
};

}  // namespace lipcert
