#include "phasesep/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "phasesep/error.hpp"

namespace phasesep {

namespace {

constexpr double kRelativeCutoff = 1e-14;

template <class Mat>
SchmidtDecomposition spectrum_impl(const Mat& X, bool keep_factors) {
  if (!X.allFinite()) throw Error(ErrorKind::NonFinite, "matrix has non-finite entries");
  SchmidtDecomposition s;
  if (X.size() == 0) return s;
  const unsigned opts = keep_factors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Eigen::BDCSVD<Mat> svd(X, opts);
  s.singular_values = svd.singularValues();
  if (keep_factors) {
    s.left = svd.matrixU().template cast<Complex>();
    s.right = svd.matrixV().template cast<Complex>();
  }
  s.norm2 = s.singular_values.squaredNorm();
  return s;
}

int factor_dim(const DensityOperator& rho) {
  const Index D = rho.matrix.rows();
  const Index N = rho.geometry.N;
  if (rho.matrix.cols() != D || N * N != D) {
    throw Error(ErrorKind::InvalidSplit, "operator is not on a two-factor N x N space");
  }
  return static_cast<int>(N);
}

}  // namespace

double to_base(double nats, LogBase base) { return base == LogBase::Two ? nats / std::log(2.0) : nats; }

SchmidtDecomposition schmidt_spectrum(const Eigen::MatrixXd& X, bool keep_factors) {
  return spectrum_impl(X, keep_factors);
}

SchmidtDecomposition schmidt_spectrum(const Eigen::MatrixXcd& X, bool keep_factors) {
  return spectrum_impl(X, keep_factors);
}

EntropyResult svd_entropy(const Eigen::VectorXd& mu, LogBase base) {
  if (!mu.allFinite()) throw Error(ErrorKind::NonFinite, "spectrum has non-finite entries");
  const double mu1 = mu.size() ? mu.cwiseAbs().maxCoeff() : 0.0;
  if (!(mu1 > 0.0)) throw Error(ErrorKind::UndefinedEntropy, "entropy of an all-zero spectrum");
  const double total = mu.squaredNorm();
  EntropyResult r;
  r.log_base = base;
  double h = 0.0;
  for (Index n = 0; n < mu.size(); ++n) {
    const double m = std::abs(mu(n));
    const double p = m * m / total;
    if (m < kRelativeCutoff * mu1) {
      r.spectrum_tail_mass += p;
      continue;
    }
    ++r.terms;
    if (p > 0.0) h -= p * std::log(p);
  }
  r.value = to_base(std::max(h, 0.0), base);
  return r;
}

EntropyResult svd_entropy(const SchmidtDecomposition& s, LogBase base) {
  return svd_entropy(s.singular_values, base);
}

Eigen::MatrixXd split_matrix(const PhaseSpaceField& field, const AxisSplit& split) {
  const int d = static_cast<int>(field.grid_shape.size());
  std::vector<bool> in_rows(d, false);
  for (int a : split.rows) {
    if (a < 0 || a >= d || in_rows[a]) throw Error(ErrorKind::InvalidSplit, "split lists an invalid axis");
    in_rows[a] = true;
  }
  std::vector<int> row_axes, col_axes;
  for (int a = 0; a < d; ++a) (in_rows[a] ? row_axes : col_axes).push_back(a);
  if (row_axes.empty() || col_axes.empty()) {
    throw Error(ErrorKind::InvalidSplit, "both parts of a split must be nonempty");
  }
  Index rows = 1, cols = 1;
  for (int a : row_axes) rows *= field.grid_shape[a];
  for (int a : col_axes) cols *= field.grid_shape[a];
  if (static_cast<std::size_t>(rows * cols) != field.values.size()) {
    throw Error(ErrorKind::DimensionMismatch, "field size does not match its grid shape");
  }
  Eigen::MatrixXd X(rows, cols);
  std::vector<int> idx(d, 0);
  for (std::size_t flat = 0; flat < field.values.size(); ++flat) {
    std::size_t rem = flat;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % field.grid_shape[a]);
      rem /= field.grid_shape[a];
    }
    Index r = 0, c = 0;
    for (int a : row_axes) r = r * field.grid_shape[a] + idx[a];
    for (int a : col_axes) c = c * field.grid_shape[a] + idx[a];
    X(r, c) = field.values[flat];
  }
  return X;
}

EntropyResult field_separability_entropy(const PhaseSpaceField& field, const AxisSplit& split, LogBase base) {
  return svd_entropy(schmidt_spectrum(split_matrix(field, split)), base);
}

EntropyResult wigner_separability_entropy(const WignerField& W, const AxisSplit& split, LogBase base) {
  return field_separability_entropy(W.field, split, base);
}

EntropyResult classical_separability_entropy(const PhaseSpaceField& rho_c, const AxisSplit& split,
                                             LogBase base) {
  return field_separability_entropy(rho_c, split, base);
}

Eigen::MatrixXcd operator_reshuffle(const DensityOperator& rho) {
  const int N = factor_dim(rho);
  Eigen::MatrixXcd R(static_cast<Index>(N) * N, static_cast<Index>(N) * N);
  for (int l1 = 0; l1 < N; ++l1)
    for (int l2 = 0; l2 < N; ++l2)
      for (int j1 = 0; j1 < N; ++j1)
        for (int j2 = 0; j2 < N; ++j2)
          R(l1 * N + j1, l2 * N + j2) = rho.matrix(l1 * N + l2, j1 * N + j2);
  return R;
}

EntropyResult operator_space_entanglement_entropy(const DensityOperator& rho, LogBase base) {
  return svd_entropy(schmidt_spectrum(operator_reshuffle(rho)), base);
}

SchmidtDecomposition state_schmidt(const TorusState& psi) {
  const Index N = psi.geometry.N;
  if (psi.amplitudes.size() != N * N) {
    throw Error(ErrorKind::InvalidSplit, "state is not on a two-factor N x N space");
  }
  // Row-major (j1, j2) amplitudes viewed as the N x N coefficient matrix.
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(
      psi.amplitudes.data(), N, N);
  return schmidt_spectrum(Eigen::MatrixXcd(A));
}

EntropyResult entanglement_entropy(const TorusState& psi, LogBase base) {
  return svd_entropy(state_schmidt(psi), base);
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho, LogBase base) {
  if (!rho.allFinite()) throw Error(ErrorKind::NonFinite, "operator has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > kRelativeCutoff) s -= lam * std::log(lam);
  }
  return to_base(std::max(s, 0.0), base);
}

Eigen::MatrixXcd partial_trace(const DensityOperator& rho, int keep) {
  const int N = factor_dim(rho);
  if (keep != 0 && keep != 1) throw Error(ErrorKind::InvalidSplit, "factor index must be 0 or 1");
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int t = 0; t < N; ++t)
        r(a, b) += keep == 0 ? rho.matrix(a * N + t, b * N + t) : rho.matrix(t * N + a, t * N + b);
  return r;
}

EntropyResult mutual_information(const DensityOperator& rho, LogBase base) {
  const double s1 = von_neumann_entropy(partial_trace(rho, 0));
  const double s2 = von_neumann_entropy(partial_trace(rho, 1));
  const double s12 = von_neumann_entropy(rho.matrix);
  EntropyResult r;
  r.log_base = base;
  r.value = to_base(std::max(s1 + s2 - s12, 0.0), base);
  return r;
}

}  // namespace phasesep
