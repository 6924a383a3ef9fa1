#pragma once
// Independent, from-definition reference computations for the tests. Nothing
// here calls into the FFT paths or the closed-form coefficient formulas of the
// library: operators are built as dense matrices and everything is summed
// explicitly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace oracle {

using Complex = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

inline Complex cis(double a) { return std::polar(1.0, a); }

inline int wlo(int N) { return -(N / 2); }
inline int whi(int N) { return (N + 1) / 2 - 1; }

// Cyclic shift |q_j> -> |q_{j+1}>, picking up exp(-2 pi i theta_p) on the wrap.
inline MatrixXcd shift_U(int N, double theta_p = 0.5) {
  MatrixXcd U = MatrixXcd::Zero(N, N);
  for (int j = 0; j < N - 1; ++j) U(j + 1, j) = 1.0;
  U(0, N - 1) = cis(-2 * pi * theta_p);
  return U;
}

inline MatrixXcd boost_V(int N, double theta_q = 0.5) {
  MatrixXcd V = MatrixXcd::Zero(N, N);
  for (int j = 0; j < N; ++j) V(j, j) = cis(2 * pi * (j + theta_q) / N);
  return V;
}

inline MatrixXcd matrix_power(const MatrixXcd& A, int n) {
  MatrixXcd base = n >= 0 ? A : MatrixXcd(A.adjoint());
  MatrixXcd r = MatrixXcd::Identity(A.rows(), A.cols());
  for (int i = 0; i < std::abs(n); ++i) r = r * base;
  return r;
}

// D(k,l) = exp(i pi k l / N) U^k V^l as a product of dense matrix powers.
inline MatrixXcd displacement(int N, int k, int l, double tq = 0.5, double tp = 0.5) {
  return cis(pi * k * l / N) * matrix_power(shift_U(N, tp), k) * matrix_power(boost_V(N, tq), l);
}

// Hermitian Wigner basis on the fundamental window: B0 = D e^{-2 pi i (beta k - alpha l)/N}
// with (alpha, beta) = -(theta_q, theta_p); the phase c making B(-k,-l) = B(k,l)^dagger
// is found numerically by comparing dense matrices.
struct WignerBasis {
  int N;
  std::map<std::pair<int, int>, MatrixXcd> B;

  WignerBasis(int n, double tq = 0.5, double tp = 0.5) : N(n) {
    std::map<std::pair<int, int>, MatrixXcd> B0;
    for (int k = wlo(N); k <= whi(N); ++k)
      for (int l = wlo(N); l <= whi(N); ++l)
        B0[{k, l}] = displacement(N, k, l, tq, tp) * cis(-2 * pi * (-tp * k + tq * l) / N);
    auto wrap = [this](int v) { return ((v - wlo(N)) % N + N) % N + wlo(N); };
    for (const auto& [kl, M] : B0) {
      const auto [k, l] = kl;
      const std::pair<int, int> pk{wrap(-k), wrap(-l)};
      // Second member of a pair: take the adjoint of the first, so the two
      // never land on opposite sides of the arg() branch cut.
      if (pk != kl && B.count(pk)) {
        B[kl] = B.at(pk).adjoint();
        continue;
      }
      const MatrixXcd& partner = B0.at(pk);
      // partner = z M^dagger for a unit z; read it off the largest entry.
      const MatrixXcd Md = M.adjoint();
      Index r, c;
      Md.cwiseAbs().maxCoeff(&r, &c);
      const Complex z = partner(r, c) / Md(r, c);
      // Hermiticity fixes c only up to sign; take the root in {1, -i}.
      double phi = std::arg(z);
      if (phi < -pi + 1e-9) phi += 2 * pi;
      B[kl] = M * cis(-0.5 * phi);
    }
  }
};

// W(a,b) = sum_{k,l} Tr[rho B(k,l)^dagger] exp[2 pi i (a l - b k)/N], all sums explicit.
inline MatrixXcd wigner_dense(const MatrixXcd& rho, const WignerBasis& basis) {
  const int N = basis.N;
  MatrixXcd W = MatrixXcd::Zero(N, N);
  for (const auto& [kl, B] : basis.B) {
    const auto [k, l] = kl;
    const Complex chi = (rho * B.adjoint()).trace();
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) W(a, b) += chi * cis(2 * pi * (double(a) * l - double(b) * k) / N);
  }
  return W;
}

// Two-factor version with B1 (x) B2 built by Kronecker products; returns the
// (q1 p1) x (q2 p2) matrix of the field.
inline MatrixXcd wigner_dense_2d(const MatrixXcd& rho, const WignerBasis& basis) {
  const int N = basis.N;
  MatrixXcd W = MatrixXcd::Zero(N * N, N * N);
  for (const auto& [kl1, B1] : basis.B) {
    for (const auto& [kl2, B2] : basis.B) {
      const MatrixXcd B = Eigen::kroneckerProduct(B1, B2).eval();
      const Complex chi = (rho * B.adjoint()).trace();
      for (int a1 = 0; a1 < N; ++a1)
        for (int b1 = 0; b1 < N; ++b1)
          for (int a2 = 0; a2 < N; ++a2)
            for (int b2 = 0; b2 < N; ++b2) {
              const double ph = double(a1) * kl1.second - double(b1) * kl1.first + double(a2) * kl2.second -
                                double(b2) * kl2.first;
              W(a1 * N + b1, a2 * N + b2) += chi * cis(2 * pi * ph / N);
            }
    }
  }
  return W;
}

// Singular values as square roots of the eigenvalues of X^dagger X (sorted
// nonincreasing), avoiding the library's SVD.
inline VectorXd singular_values(const MatrixXcd& X) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(X.adjoint() * X, Eigen::EigenvaluesOnly);
  VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<double>());
  return ev;
}

inline double shannon(const VectorXd& mu) {
  const double total = mu.squaredNorm();
  double h = 0.0;
  for (Index i = 0; i < mu.size(); ++i) {
    const double p = mu(i) * mu(i) / total;
    if (p > 1e-30) h -= p * std::log(p);
  }
  return h;
}

// Operator-space Schmidt coefficients: expand rho over the product basis
// |i><j| (x) |k><l| via traces, then take singular values of the coefficient
// matrix indexed by (ij) x (kl).
inline VectorXd operator_schmidt(const MatrixXcd& rho, int N) {
  MatrixXcd C(N * N, N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      MatrixXcd E1 = MatrixXcd::Zero(N, N);
      E1(i, j) = 1.0;
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          MatrixXcd E2 = MatrixXcd::Zero(N, N);
          E2(k, l) = 1.0;
          const MatrixXcd E = Eigen::kroneckerProduct(E1, E2).eval();
          C(i * N + j, k * N + l) = (E.adjoint() * rho).trace();
        }
    }
  return singular_values(C);
}

inline MatrixXcd ptrace_second(const MatrixXcd& rho, int N) {
  MatrixXcd r = MatrixXcd::Zero(N, N);
  for (int t = 0; t < N; ++t) {
    VectorXcd e = VectorXcd::Zero(N);
    e(t) = 1.0;
    const MatrixXcd P = Eigen::kroneckerProduct(MatrixXcd::Identity(N, N), e).eval();  // N^2 x N
    r += P.adjoint() * rho * P;
  }
  return r;
}

inline MatrixXcd ptrace_first(const MatrixXcd& rho, int N) {
  MatrixXcd r = MatrixXcd::Zero(N, N);
  for (int t = 0; t < N; ++t) {
    VectorXcd e = VectorXcd::Zero(N);
    e(t) = 1.0;
    const MatrixXcd P = Eigen::kroneckerProduct(e, MatrixXcd::Identity(N, N)).eval();
    r += P.adjoint() * rho * P;
  }
  return r;
}

// -sum lambda log lambda from a general (non-Hermitian-specialized) eigensolver.
inline double von_neumann(const MatrixXcd& rho) {
  Eigen::ComplexEigenSolver<MatrixXcd> es(rho);
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i).real();
    if (lam > 1e-14) s -= lam * std::log(lam);
  }
  return s;
}

// Periodized Gaussian exp(-(x - x0)^2 / (2 s^2)) summed over +-cut images.
inline double periodic_gauss(double x, double x0, double s, int cut = 6) {
  double v = 0.0;
  for (int m = -cut; m <= cut; ++m) v += std::exp(-(x - x0 + m) * (x - x0 + m) / (2 * s * s));
  return v;
}

}  // namespace oracle
