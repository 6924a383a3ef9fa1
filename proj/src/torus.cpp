#include "phasesep/torus.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "phasesep/error.hpp"

namespace phasesep {

namespace {

Complex cis(double angle) { return {std::cos(angle), std::sin(angle)}; }

int floor_div(int a, int n) {
  int q = a / n;
  if ((a % n != 0) && ((a < 0) != (n < 0))) --q;
  return q;
}

}  // namespace

TorusGeometry make_geometry(int N) { return make_geometry(N, {0.5, 0.5}); }

TorusGeometry make_geometry(int N, std::array<double, 2> boundary_phases) {
  if (N < 2) {
    throw Error(ErrorKind::InvalidDimension,
                "torus dimension must be at least 2, got " + std::to_string(N));
  }
  for (double theta : boundary_phases) {
    if (!(theta >= 0.0 && theta < 1.0)) {
      throw Error(ErrorKind::InvalidParameter, "boundary phases must lie in [0, 1)");
    }
  }
  TorusGeometry g;
  g.N = N;
  g.hbar = 1.0 / (2.0 * kPi * N);
  g.boundary_phases = boundary_phases;
  return g;
}

double DensityOperator::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return matrix.squaredNorm();
}

DensityCheck check_density(const DensityOperator& rho) {
  DensityCheck c;
  const Eigen::MatrixXcd& m = rho.matrix;
  c.hermiticity = (m - m.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  c.purity = rho.purity();
  return c;
}

DensityOperator density_from_state(const TorusState& psi) {
  DensityOperator rho;
  rho.geometry = psi.geometry;
  rho.factors = psi.factors;
  rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
  return rho;
}

TorusState tensor_product(const TorusState& a, const TorusState& b) {
  if (a.geometry != b.geometry) {
    throw Error(ErrorKind::DimensionMismatch, "tensor factors must share the same torus");
  }
  TorusState out;
  out.geometry = a.geometry;
  out.factors = a.factors + b.factors;
  out.amplitudes = Eigen::kroneckerProduct(a.amplitudes, b.amplitudes).eval();
  return out;
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  if (a.geometry != b.geometry) {
    throw Error(ErrorKind::DimensionMismatch, "tensor factors must share the same torus");
  }
  DensityOperator out;
  out.geometry = a.geometry;
  out.factors = a.factors + b.factors;
  out.matrix = Eigen::kroneckerProduct(a.matrix, b.matrix).eval();
  return out;
}

TorusState coherent_state(const TorusGeometry& geom, double q0, double p0, int image_cutoff) {
  if (image_cutoff < 1) {
    throw Error(ErrorKind::InvalidParameter, "image_cutoff must be at least 1");
  }
  if (!std::isfinite(q0) || !std::isfinite(p0)) {
    throw Error(ErrorKind::NonFinite, "coherent-state centre must be finite");
  }
  const int N = geom.N;
  TorusState psi;
  psi.geometry = geom;
  psi.amplitudes = Eigen::VectorXcd::Zero(N);
  for (int l = 0; l < N; ++l) {
    const double ql = geom.q(l);
    Complex acc = 0.0;
    for (int m = -image_cutoff; m <= image_cutoff; ++m) {
      const double d = ql - q0 + m;
      acc += std::exp(-kPi * N * d * d) * cis(2.0 * kPi * N * p0 * (ql + m));
    }
    psi.amplitudes(l) = acc;
  }
  psi.amplitudes.normalize();
  return psi;
}

double UnitaryPropagator::unitarity_residual() const {
  const Index d = matrix.rows();
  return (matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
}

int DisplacementWindow::wrap(int v) const {
  const int r = ((v - lo) % N + N) % N;
  return lo + r;
}

DisplacementWindow displacement_window(int N) {
  if (N < 1) throw Error(ErrorKind::InvalidDimension, "window needs N >= 1");
  DisplacementWindow w;
  w.N = N;
  w.lo = -(N / 2);
  w.hi = (N + 1) / 2 - 1;
  return w;
}

Complex displacement_coefficient(const TorusGeometry& geom, int k, int l, int j,
                                 const DisplacementConvention& conv) {
  const int N = geom.N;
  const auto [theta_q, theta_p] = geom.boundary_phases;
  // V^l first (diagonal boost), then U^k with one boundary phase per wrap.
  const int wraps = floor_div(j + k, N);
  const double angle = kPi * k * l / N +
                       2.0 * kPi * (1.0 + conv.boost_distortion) * (j + theta_q) * l / N -
                       2.0 * kPi * theta_p * wraps;
  return cis(angle);
}

UnitaryPropagator displacement_operator(const TorusGeometry& geom, int k, int l,
                                        const DisplacementConvention& conv) {
  const DisplacementWindow w = displacement_window(geom.N);
  if (!w.contains(k) || !w.contains(l)) {
    throw Error(ErrorKind::InvalidDisplacement,
                "displacement (" + std::to_string(k) + ", " + std::to_string(l) +
                    ") outside window [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) + "]");
  }
  const int N = geom.N;
  UnitaryPropagator D;
  D.matrix = Eigen::MatrixXcd::Zero(N, N);
  for (int j = 0; j < N; ++j) {
    const int row = ((j + k) % N + N) % N;
    D.matrix(row, j) = displacement_coefficient(geom, k, l, j, conv);
  }
  D.label = "D(" + std::to_string(k) + "," + std::to_string(l) + ")";
  return D;
}

double displacement_orthogonality_residual(const TorusGeometry& geom,
                                           const DisplacementConvention& conv) {
  // D(k,l) is a permutation with fixed shift k times a diagonal, so
  // Tr[D(k,l)^dagger D(k',l')] vanishes identically unless k == k'. For equal
  // k the trace is a column sum of coefficient products.
  //
  // Above kExhaustiveN only reference rows la = lo are paired with every lb:
  // for fixed k the product conj(c(k,la,j)) c(k,lb,j) is a unit phase times a
  // function of lb - la and j, so the remaining pairs repeat those sums.
  constexpr int kExhaustiveN = 64;
  const int N = geom.N;
  const DisplacementWindow w = displacement_window(N);
  const bool exhaustive = N <= kExhaustiveN;
  std::vector<int> ks;
  if (exhaustive) {
    for (int k = w.lo; k <= w.hi; ++k) ks.push_back(k);
  } else {
    ks = {w.lo, 0, w.hi};
  }
  double worst = 0.0;
  std::vector<Complex> ca(N);
  for (int k : ks) {
    const int la_end = exhaustive ? w.hi : w.lo;
    for (int la = w.lo; la <= la_end; ++la) {
      for (int j = 0; j < N; ++j) ca[j] = std::conj(displacement_coefficient(geom, k, la, j, conv));
      for (int lb = la; lb <= w.hi; ++lb) {
        Complex tr = 0.0;
        for (int j = 0; j < N; ++j) tr += ca[j] * displacement_coefficient(geom, k, lb, j, conv);
        const double target = (la == lb) ? static_cast<double>(N) : 0.0;
        worst = std::max(worst, std::abs(tr - target));
      }
    }
  }
  return worst;
}

}  // namespace phasesep
