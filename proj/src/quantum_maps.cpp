#include "phasesep/quantum_maps.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/KroneckerProduct>

#include "phasesep/error.hpp"

namespace phasesep {

namespace {

Complex cis(double angle) { return {std::cos(angle), std::sin(angle)}; }

void require_steps(int steps) {
  if (steps < 0) throw Error(ErrorKind::InvalidParameter, "steps must be nonnegative");
}

Complex cat_prefactor(int N, int M12) {
  // Principal branch of (1 / (i N M12))^{1/2}.
  return std::sqrt(Complex(1.0, 0.0) / Complex(0.0, static_cast<double>(N) * M12));
}

double kick_phase(int N, double K, int l) {
  return K * N / (2.0 * kPi) * std::cos(2.0 * kPi * l / N);
}

// Antiperiodic Fourier transform y = G_n x (or G_n^dagger x) via one FFT:
//   y_l = n^{-1/2} e^{-i pi (l + 1/2)/n} sum_j [x_j e^{-i pi j/n}] e^{-2 pi i j l/n}.
class AntiperiodicFft {
 public:
  explicit AntiperiodicFft(int n) : n_(n), pre_(n), post_(n), buf_(n), out_(n) {
    for (int j = 0; j < n; ++j) {
      pre_[j] = cis(-kPi * j / n);
      post_[j] = cis(-kPi * (j + 0.5) / n) / std::sqrt(static_cast<double>(n));
    }
  }

  void forward(Complex* x) const {
    for (int j = 0; j < n_; ++j) buf_[j] = x[j] * pre_[j];
    // kissfft does not handle a length-1 transform
    if (n_ == 1) {
      out_[0] = buf_[0];
    } else {
      fft_.fwd(out_, buf_);
    }
    for (int l = 0; l < n_; ++l) x[l] = out_[l] * post_[l];
  }

  // G^dagger = conj(G): conjugate, forward, conjugate.
  void adjoint(Complex* x) const {
    for (int j = 0; j < n_; ++j) x[j] = std::conj(x[j]);
    forward(x);
    for (int j = 0; j < n_; ++j) x[j] = std::conj(x[j]);
  }

 private:
  int n_;
  std::vector<Complex> pre_, post_;
  mutable std::vector<Complex> buf_, out_;
  mutable Eigen::FFT<double> fft_;
};

class BakerMap final : public QuantumMap {
 public:
  explicit BakerMap(const TorusGeometry& g) : geom_(g), full_(g.N), half_(g.N / 2) {}
  std::string name() const override { return "baker"; }
  int factors() const override { return 1; }
  Index dimension() const override { return geom_.N; }
  void apply(Eigen::VectorXcd& psi) const override {
    const int h = geom_.N / 2;
    half_.forward(psi.data());
    half_.forward(psi.data() + h);
    full_.adjoint(psi.data());
  }
  UnitaryPropagator dense() const override { return baker_unitary(geom_); }

 private:
  TorusGeometry geom_;
  AntiperiodicFft full_, half_;
};

// Perturbed cat map. For M12 = 1 the kernel is a chirp-FFT-chirp product;
// otherwise the dense matrix is applied directly.
class PerturbedCatMap final : public QuantumMap {
 public:
  PerturbedCatMap(const TorusGeometry& g, const CatParams& p)
      : geom_(g), params_(p), pre_(g.N), post_(g.N), buf_(g.N), out_(g.N) {
    const int N = g.N;
    if (p.M12 == 1) {
      const Complex A = cat_prefactor(N, 1);
      for (int j = 0; j < N; ++j) {
        // Reduce the quadratic exponent mod 2N before scaling to keep the phase small.
        const long long jj = static_cast<long long>(j) * j;
        pre_[j] = cis(kPi * static_cast<double>((p.M22 * jj) % (2LL * N)) / N);
        post_[j] = A * cis(kPi * static_cast<double>((p.M11 * jj) % (2LL * N)) / N +
                           kick_phase(N, p.K, j));
      }
    } else {
      dense_ = perturbed_cat_unitary(g, p).matrix;
    }
  }
  std::string name() const override { return "pcat"; }
  int factors() const override { return 1; }
  Index dimension() const override { return geom_.N; }
  void apply(Eigen::VectorXcd& psi) const override { apply_raw(psi.data(), 1); }
  UnitaryPropagator dense() const override { return perturbed_cat_unitary(geom_, params_); }

  // Applies M to the strided vector x[0], x[stride], ...
  void apply_raw(Complex* x, Index stride) const {
    const int N = geom_.N;
    if (params_.M12 != 1) {
      Eigen::Map<Eigen::VectorXcd, 0, Eigen::InnerStride<>> v(x, N, Eigen::InnerStride<>(stride));
      const Eigen::VectorXcd r = dense_ * v;
      v = r;
      return;
    }
    for (int j = 0; j < N; ++j) buf_[j] = x[j * stride] * pre_[j];
    fft_.fwd(out_, buf_);
    for (int l = 0; l < N; ++l) x[l * stride] = out_[l] * post_[l];
  }

 private:
  TorusGeometry geom_;
  CatParams params_;
  std::vector<Complex> pre_, post_;
  Eigen::MatrixXcd dense_;
  mutable std::vector<Complex> buf_, out_;
  mutable Eigen::FFT<double> fft_;
};

// Coupled cats on the N^2 space: psi <- C psi, then M acting on each factor.
class CoupledCatMap final : public QuantumMap {
 public:
  CoupledCatMap(const TorusGeometry& g, const CatParams& p)
      : geom_(g), params_(p), single_(g, p), coupling_(coupling_diagonal(g, p.Kc)) {}
  std::string name() const override { return "coupled"; }
  int factors() const override { return 2; }
  Index dimension() const override { return static_cast<Index>(geom_.N) * geom_.N; }
  void apply(Eigen::VectorXcd& psi) const override {
    const int N = geom_.N;
    psi.array() *= coupling_.array();
    // Row-major (j1, j2): factor 2 is contiguous, factor 1 has stride N.
    for (int j1 = 0; j1 < N; ++j1) single_.apply_raw(psi.data() + static_cast<Index>(j1) * N, 1);
    for (int j2 = 0; j2 < N; ++j2) single_.apply_raw(psi.data() + j2, N);
  }
  UnitaryPropagator dense() const override { return coupled_cat_unitary(geom_, geom_, params_); }

 private:
  TorusGeometry geom_;
  CatParams params_;
  PerturbedCatMap single_;
  Eigen::VectorXcd coupling_;
};

}  // namespace

void CatParams::validate() const {
  if (M11 * M22 - M12 * M21 != 1) {
    throw Error(ErrorKind::InvalidParameter, "cat matrix must satisfy det = 1, got " + describe());
  }
  if (M12 == 0) {
    throw Error(ErrorKind::InvalidParameter, "cat matrix needs M12 != 0");
  }
  if (!std::isfinite(K) || !std::isfinite(Kc)) {
    throw Error(ErrorKind::NonFinite, "kick strengths must be finite");
  }
}

std::string CatParams::describe() const {
  std::ostringstream os;
  os << "M=[[" << M11 << "," << M12 << "],[" << M21 << "," << M22 << "]] K=" << K << " Kc=" << Kc;
  return os.str();
}

UnitaryPropagator antiperiodic_fourier(int N) {
  if (N < 1) throw Error(ErrorKind::InvalidDimension, "Fourier matrix needs N >= 1");
  UnitaryPropagator G;
  G.matrix.resize(N, N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  for (int l = 0; l < N; ++l) {
    for (int j = 0; j < N; ++j) {
      // (2j + 1)(2l + 1) / 4 reduced mod 2N keeps the argument small.
      const long long m = ((2LL * j + 1) * (2LL * l + 1)) % (4LL * N);
      G.matrix(l, j) = scale * cis(-kPi * static_cast<double>(m) / (2.0 * N));
    }
  }
  G.label = "G_" + std::to_string(N);
  return G;
}

UnitaryPropagator baker_unitary(const TorusGeometry& geom) {
  const int N = geom.N;
  if (N % 2 != 0) {
    throw Error(ErrorKind::InvalidDimension, "quantum baker needs even N, got " + std::to_string(N));
  }
  const Eigen::MatrixXcd Gh = antiperiodic_fourier(N / 2).matrix;
  Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(N, N);
  block.topLeftCorner(N / 2, N / 2) = Gh;
  block.bottomRightCorner(N / 2, N / 2) = Gh;
  UnitaryPropagator B;
  B.matrix = antiperiodic_fourier(N).matrix.adjoint() * block;
  B.label = "baker N=" + std::to_string(N);
  return B;
}

UnitaryPropagator perturbed_cat_unitary(const TorusGeometry& geom, const CatParams& params) {
  params.validate();
  const int N = geom.N;
  const Complex A = cat_prefactor(N, params.M12);
  const long long period = 2LL * N * std::abs(params.M12);
  UnitaryPropagator M;
  M.matrix.resize(N, N);
  for (int l = 0; l < N; ++l) {
    const double F = kick_phase(N, params.K, l);
    for (int j = 0; j < N; ++j) {
      const long long LL = static_cast<long long>(l), JJ = static_cast<long long>(j);
      long long m = (params.M11 * LL * LL - 2 * LL * JJ + params.M22 * JJ * JJ) % period;
      const double phase = kPi * static_cast<double>(m) / (static_cast<double>(N) * params.M12);
      M.matrix(l, j) = A * cis(phase + F);
    }
  }
  M.label = "pcat N=" + std::to_string(N) + " " + params.describe();
  return M;
}

Eigen::VectorXcd coupling_diagonal(const TorusGeometry& geom, double Kc) {
  const int N = geom.N;
  Eigen::VectorXcd c(static_cast<Index>(N) * N);
  for (int j1 = 0; j1 < N; ++j1) {
    for (int j2 = 0; j2 < N; ++j2) {
      c(static_cast<Index>(j1) * N + j2) =
          cis(Kc * N / (2.0 * kPi) * std::cos(2.0 * kPi * ((j1 + j2) % N) / N));
    }
  }
  return c;
}

UnitaryPropagator coupled_cat_unitary(const TorusGeometry& g1, const TorusGeometry& g2,
                                      const CatParams& params) {
  if (g1 != g2) {
    throw Error(ErrorKind::DimensionMismatch, "coupled cats need identical factor tori");
  }
  const Eigen::MatrixXcd M = perturbed_cat_unitary(g1, params).matrix;
  const Eigen::VectorXcd C = coupling_diagonal(g1, params.Kc);
  UnitaryPropagator U;
  U.matrix = Eigen::kroneckerProduct(M, M).eval();
  U.matrix = U.matrix * C.asDiagonal();
  U.label = "coupled N=" + std::to_string(g1.N) + " " + params.describe();
  return U;
}

TorusState evolve(const UnitaryPropagator& U, const TorusState& psi, int steps) {
  require_steps(steps);
  if (U.dimension() != psi.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "propagator and state dimensions differ");
  }
  TorusState out = psi;
  for (int t = 0; t < steps; ++t) {
    out.amplitudes = U.matrix * out.amplitudes;
    out.amplitudes.normalize();
  }
  return out;
}

DensityOperator evolve(const UnitaryPropagator& U, const DensityOperator& rho, int steps) {
  require_steps(steps);
  if (U.dimension() != rho.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "propagator and density dimensions differ");
  }
  DensityOperator out = rho;
  for (int t = 0; t < steps; ++t) {
    out.matrix = U.matrix * out.matrix * U.matrix.adjoint();
    out.matrix = 0.5 * (out.matrix + out.matrix.adjoint()).eval();
  }
  return out;
}

TorusState QuantumMap::evolve(const TorusState& psi, int steps) const {
  require_steps(steps);
  if (psi.dimension() != dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "map and state dimensions differ");
  }
  TorusState out = psi;
  for (int t = 0; t < steps; ++t) {
    apply(out.amplitudes);
    out.amplitudes.normalize();
  }
  return out;
}

std::unique_ptr<QuantumMap> make_baker_map(const TorusGeometry& geom) {
  if (geom.N % 2 != 0) {
    throw Error(ErrorKind::InvalidDimension, "quantum baker needs even N, got " + std::to_string(geom.N));
  }
  return std::make_unique<BakerMap>(geom);
}

std::unique_ptr<QuantumMap> make_perturbed_cat_map(const TorusGeometry& geom, const CatParams& params) {
  params.validate();
  return std::make_unique<PerturbedCatMap>(geom, params);
}

std::unique_ptr<QuantumMap> make_coupled_cat_map(const TorusGeometry& geom, const CatParams& params) {
  params.validate();
  return std::make_unique<CoupledCatMap>(geom, params);
}

}  // namespace phasesep
