#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "phasesep/torus.hpp"
#include "phasesep/wigner.hpp"

namespace phasesep {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SelfcheckOptions {
  /// Fault injection: distort the displacement boost used by the
  /// orthogonality check.
  double displacement_distortion = 0.0;
  std::uint64_t seed = 20240601;
};

std::vector<CheckResult> selfcheck(const SelfcheckOptions& options = {});
bool all_passed(const std::vector<CheckResult>& report);
void print_report(std::ostream& os, const std::vector<CheckResult>& report);

/// Scale turning singular values of the reshaped Wigner matrix into the
/// operator-space Schmidt coefficients of rho: sqrt(cell_volume / hs_scale).
double wigner_schmidt_scale(const WignerField& W);

/// Random density operator rho = A A^dagger / Tr(A A^dagger) with Gaussian A.
DensityOperator random_density(const TorusGeometry& g, int factors, std::uint64_t seed);
/// Haar-like random pure state from normalized Gaussian amplitudes.
TorusState random_state(const TorusGeometry& g, int factors, std::uint64_t seed);

}  // namespace phasesep
