#pragma once

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "phasesep/torus.hpp"

namespace phasesep {

/// Integer symplectic matrix [[M11, M12], [M21, M22]] plus kick strengths.
struct CatParams {
  int M11 = 2;
  int M12 = 1;
  int M21 = 3;
  int M22 = 2;
  double K = 0.5;
  double Kc = 1.0;

  /// Throws InvalidParameter unless det == 1 and M12 != 0.
  void validate() const;
  std::string describe() const;
};

/// (G_N)_{lj} = N^{-1/2} exp[-2 pi i (j + 1/2)(l + 1/2) / N].
UnitaryPropagator antiperiodic_fourier(int N);

/// B = G_N^{-1} (G_{N/2} (+) G_{N/2}); N must be even.
UnitaryPropagator baker_unitary(const TorusGeometry& geom);

/// M_{lj} = A exp[(pi i / (N M12)) (M11 l^2 - 2 l j + M22 j^2) + F(l)] with
/// A = (1 / (i N M12))^{1/2} and F(l) = (i K N / 2 pi) cos(2 pi l / N).
UnitaryPropagator perturbed_cat_unitary(const TorusGeometry& geom, const CatParams& params);

/// Diagonal of the coupling C_{j1 j2} = exp[(i Kc N / 2 pi) cos(2 pi (j1 + j2) / N)],
/// flattened as j1 * N + j2.
Eigen::VectorXcd coupling_diagonal(const TorusGeometry& geom, double Kc);

/// M2D = (M (x) M) C: the coupling acts first.
UnitaryPropagator coupled_cat_unitary(const TorusGeometry& g1, const TorusGeometry& g2,
                                      const CatParams& params);

TorusState evolve(const UnitaryPropagator& U, const TorusState& psi, int steps);
DensityOperator evolve(const UnitaryPropagator& U, const DensityOperator& rho, int steps);

/// One step of a quantum map applied to state vectors without forming the
/// dense matrix. Fast paths are FFT based where the kernel allows it.
class QuantumMap {
 public:
  virtual ~QuantumMap() = default;
  virtual std::string name() const = 0;
  virtual int factors() const = 0;
  virtual Index dimension() const = 0;
  virtual void apply(Eigen::VectorXcd& psi) const = 0;
  /// The dense correctness baseline this map must agree with.
  virtual UnitaryPropagator dense() const = 0;

  TorusState evolve(const TorusState& psi, int steps) const;
};

std::unique_ptr<QuantumMap> make_baker_map(const TorusGeometry& geom);
std::unique_ptr<QuantumMap> make_perturbed_cat_map(const TorusGeometry& geom, const CatParams& params);
std::unique_ptr<QuantumMap> make_coupled_cat_map(const TorusGeometry& geom, const CatParams& params);

}  // namespace phasesep
