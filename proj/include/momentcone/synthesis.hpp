#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "momentcone/certify.hpp"
#include "momentcone/perturb.hpp"
#include "momentcone/quadrature.hpp"

namespace mcone {

struct SynthesisParams {
  CertifyParams certify;
  int atomic_resolution = 0;  // grid for atom placement; 0: 65 (1D) / 17
  int cells = 0;              // perturbation-plan cells; 0: 8 (1D) / 25
  double quad_tol = -1.0;     // pipeline quadrature tolerance; 0>: 1e-8
  double moment_tol = -1.0;   // acceptance on output moments; 0>: 1e-6 / 1e-4
  double eps0 = 0.2;          // mollification schedule start
  int eps_steps = 8;          // halvings tried
  std::uint64_t seed = 0;
};

struct AtomicResult {
  bool feasible = false;
  AtomicMeasure measure;  // empty when infeasible
};

// Nonnegative weights on the grid matching all moments of g (an LP
// feasibility problem).  Infeasible only rules out representations on this
// grid, not membership in the moment cone.
AtomicResult find_atomic_representation(const MomentVector& g,
                                        const SupportRegion& T,
                                        const SampleGrid& grid);

struct BuildResult {
  Density density;
  double eps = 0.0;            // mollification radius used
  AtomicMeasure atoms;         // pre-mollification atomic representation
  PerturbResult correction;    // perturbation diagnostics
  double max_moment_error = 0.0;  // |moments(density) - g|_inf
};

// Constructs a bounded, strictly positive density with the moments g.
// Requires a converged StrictlyPositive certificate.  Walks a shrinking
// mollification schedule: at each eps it represents the tail-adjusted target
// g - eps*(tail moments) by nonnegative weights on mollified-bump moment
// columns (so the assembled density hits g to quadrature accuracy), plans a
// perturbation, and lets perturb absorb the residual drift; BetaTooLarge or
// KExhausted at one eps moves to the next.
BuildResult build_density(const MomentVector& g, const SupportRegion& T,
                          const SynthesisParams& params = {});

enum class ClassVerdict {
  InteriorRepresentable,
  Boundary,
  NotRepresentable,
  Unresolved
};

const char* to_string(ClassVerdict v);

struct Classification {
  ClassVerdict verdict = ClassVerdict::Unresolved;
  PositivityCertificate certificate;
  std::optional<AtomicMeasure> atomic_witness;
  std::optional<Density> density_witness;
  std::string diagnostics;  // populated for Unresolved
};

// Trichotomy: StrictlyPositive certificate + successful density construction
// -> InteriorRepresentable; Degenerate -> Boundary (atomic witness attached
// when the grid LP finds one); NegativeWitness -> NotRepresentable.  Any
// non-convergence or construction failure folds into Unresolved with the
// reason in diagnostics.
Classification classify(const MomentVector& g, const SupportRegion& T,
                        const SynthesisParams& params = {});

}  // namespace mcone
