#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcone {

// Base for all toolkit errors.  kind() strings are stable identifiers that
// surface in CLI JSON error payloads; changing them breaks consumers.
class MomentError : public std::runtime_error {
public:
  MomentError(std::string kind, const std::string& msg)
      : std::runtime_error(msg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

// Malformed or inconsistent input data (bad JSON shape, g_0 != 1, irregular
// index set, atom outside the support, ...).  CLI exit code 65.
struct InvalidInput : MomentError {
  explicit InvalidInput(const std::string& msg) : MomentError("invalid_input", msg) {}
};

// A local neighborhood of the support has (numerically) zero volume.
struct RegularityViolation : MomentError {
  explicit RegularityViolation(const std::string& msg)
      : MomentError("regularity_violation", msg) {}
};

// sample_grid produced no points inside the region.
struct EmptyGrid : MomentError {
  explicit EmptyGrid(const std::string& msg) : MomentError("empty_grid", msg) {}
};

// A quadrature routine could not reach the requested tolerance.  The best
// estimates computed so far are attached.
struct ToleranceNotReached : MomentError {
  ToleranceNotReached(const std::string& msg, std::vector<double> best)
      : MomentError("tolerance_not_reached", msg), best_estimate(std::move(best)) {}
  std::vector<double> best_estimate;
};

// A matrix expected to have full row rank does not.
struct RankDeficient : MomentError {
  explicit RankDeficient(const std::string& msg) : MomentError("rank_deficient", msg) {}
};

// No usable level set found when planning a perturbation.
struct DegenerateDensity : MomentError {
  explicit DegenerateDensity(const std::string& msg)
      : MomentError("degenerate_density", msg) {}
};

// Requested moment shift exceeds what the perturbation scheme can absorb.
struct BetaTooLarge : MomentError {
  explicit BetaTooLarge(const std::string& msg) : MomentError("beta_too_large", msg) {}
};

// The truncation-level search was exhausted without meeting its bound.
struct KExhausted : MomentError {
  explicit KExhausted(const std::string& msg) : MomentError("k_exhausted", msg) {}
};

// LP engine (or another numeric kernel) failed its internal consistency
// checks.  CLI exit code 70.
struct NumericalBreakdown : MomentError {
  explicit NumericalBreakdown(const std::string& msg)
      : MomentError("numerical_breakdown", msg) {}
};

// Synthesis preconditions not met.
struct NotStrictlyPositive : MomentError {
  explicit NotStrictlyPositive(const std::string& msg)
      : MomentError("not_strictly_positive", msg) {}
};

struct AtomicInfeasible : MomentError {
  explicit AtomicInfeasible(const std::string& msg)
      : MomentError("atomic_infeasible", msg) {}
};

}  // namespace mcone
