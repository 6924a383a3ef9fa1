#pragma once

#include <array>
#include <complex>
#include <string>

#include <Eigen/Dense>

namespace phasesep {

using Complex = std::complex<double>;
using Eigen::Index;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Quantized unit torus with Hilbert dimension N and hbar = 1/(2 pi N).
///
/// `boundary_phases` = (theta_q, theta_p) place the position and momentum
/// grids at q_j = (j + theta_q)/N and p_m = (m + theta_p)/N. The default
/// (1/2, 1/2) is the antiperiodic grid used by the baker quantization.
struct TorusGeometry {
  int N = 0;
  double hbar = 0.0;
  std::array<double, 2> boundary_phases{0.5, 0.5};

  double q(int j) const { return (j + boundary_phases[0]) / N; }
  double p(int m) const { return (m + boundary_phases[1]) / N; }

  bool operator==(const TorusGeometry&) const = default;
};

TorusGeometry make_geometry(int N);
TorusGeometry make_geometry(int N, std::array<double, 2> boundary_phases);

/// Pure state on `factors` copies of the same torus. Multi-factor amplitudes
/// are stored row-major in the factor indices: index = j1 * N + j2.
struct TorusState {
  TorusGeometry geometry;
  int factors = 1;
  Eigen::VectorXcd amplitudes;

  Index dimension() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
};

struct DensityOperator {
  TorusGeometry geometry;
  int factors = 1;
  Eigen::MatrixXcd matrix;

  Index dimension() const { return matrix.rows(); }
  Complex trace() const { return matrix.trace(); }
  double purity() const;
};

/// Residuals of the density-operator invariants.
struct DensityCheck {
  double hermiticity = 0.0;   // max |rho - rho^dagger|
  double trace_error = 0.0;   // |Tr rho - 1|
  double min_eigenvalue = 0.0;
  double purity = 0.0;
};

DensityCheck check_density(const DensityOperator& rho);

DensityOperator density_from_state(const TorusState& psi);
TorusState tensor_product(const TorusState& a, const TorusState& b);
DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

/// Periodized Gaussian wavepacket centred at (q0, p0):
///   psi(l) ~ sum_{|m| <= cutoff} exp[-pi N (q_l - q0 + m)^2 + 2 pi i N p0 (q_l + m)]
/// normalized to unit 2-norm. Its Wigner function is the isotropic Gaussian
/// exp(-|z - z0|^2 / hbar) (per-axis standard deviation sqrt(hbar/2)).
TorusState coherent_state(const TorusGeometry& geom, double q0, double p0, int image_cutoff = 3);

/// Dense unitary acting on a D-dimensional space.
struct UnitaryPropagator {
  Eigen::MatrixXcd matrix;
  std::string label;

  Index dimension() const { return matrix.rows(); }
  /// max |U^dagger U - I|
  double unitarity_residual() const;
};

/// Fundamental window of displacement indices [-floor(N/2), ceil(N/2) - 1].
struct DisplacementWindow {
  int N = 0;
  int lo = 0;
  int hi = 0;

  int size() const { return N; }
  bool contains(int v) const { return v >= lo && v <= hi; }
  /// Representative of v mod N inside the window.
  int wrap(int v) const;
  /// Position of window value v in an FFT-ordered array (v mod N).
  int slot(int v) const { return ((v % N) + N) % N; }
  /// Window value stored at FFT slot s.
  int value(int s) const { return s <= hi ? s : s - N; }
};

DisplacementWindow displacement_window(int N);

/// Fault-injection hook: a nonzero `boost_distortion` rescales the exponent of
/// the momentum boost V and destroys Hilbert-Schmidt orthogonality.
struct DisplacementConvention {
  double boost_distortion = 0.0;
};

/// Nonzero entry of column j of D(k,l) = exp(i pi k l / N) U^k V^l, i.e.
/// D(k,l)|q_j> = coefficient * |q_{(j+k) mod N}>. Valid for any integers
/// k, l (the extended formula, used by the doubled-grid construction).
Complex displacement_coefficient(const TorusGeometry& geom, int k, int l, int j,
                                 const DisplacementConvention& conv = {});

/// Dense D(k,l) for (k,l) in the fundamental window.
UnitaryPropagator displacement_operator(const TorusGeometry& geom, int k, int l,
                                        const DisplacementConvention& conv = {});

/// max over window pairs of |Tr[D(a)^dagger D(b)] - N delta_ab|. Pairs with
/// different k have disjoint supports, so only equal-k pairs are summed.
double displacement_orthogonality_residual(const TorusGeometry& geom,
                                           const DisplacementConvention& conv = {});

}  // namespace phasesep
