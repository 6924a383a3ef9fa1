#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "phasesep/error.hpp"
#include "phasesep/torus.hpp"

using namespace phasesep;

TEST_CASE("geometry constants") {
  CHECK(make_geometry(512).hbar == doctest::Approx(1.0 / (1024.0 * kPi)).epsilon(1e-15));
  CHECK(make_geometry(2).hbar == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-15));
  const auto g = make_geometry(16);
  CHECK(g.boundary_phases[0] == 0.5);
  CHECK(g.boundary_phases[1] == 0.5);
  CHECK(g.q(0) == doctest::Approx(0.5 / 16));
  CHECK_THROWS_AS(make_geometry(1), Error);
  try {
    make_geometry(0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidDimension);
  }
  CHECK_THROWS_AS(make_geometry(8, {1.0, 0.5}), Error);
}

TEST_CASE("coherent state is normalized and reflection symmetric about the centre") {
  for (int N : {8, 33, 64, 256}) {
    const TorusState psi = coherent_state(make_geometry(N), 0.5, 0.5);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    // q_l = (l + 1/2)/N mirrors to q_{N-1-l} about 1/2.
    double asym = 0.0;
    for (int l = 0; l < N; ++l) asym = std::max(asym, std::abs(std::norm(psi.amplitudes(l)) -
                                                              std::norm(psi.amplitudes(N - 1 - l))));
    CHECK(asym < 1e-12);
  }
  CHECK_THROWS_AS(coherent_state(make_geometry(8), 0.5, 0.5, 0), Error);
}

TEST_CASE("coherent states half a period apart are nearly orthogonal") {
  for (int N : {64, 128}) {
    const auto g = make_geometry(N);
    const auto a = coherent_state(g, 0.5, 0.5), b = coherent_state(g, 0.0, 0.5);
    // Oracle: two Gaussians of width sigma_q = 1/sqrt(4 pi N) separated by 1/2
    // overlap as exp(-d^2 / (8 sigma^2)).
    const double s2 = 1.0 / (4 * kPi * N);
    const double predicted = std::exp(-0.25 / (8 * s2));
    const double overlap = std::abs(a.amplitudes.dot(b.amplitudes));
    CHECK(overlap < 1e-6);
    CHECK(overlap <= 10 * predicted + 1e-14);
  }
}

TEST_CASE("coherent-state position variance matches the periodized Gaussian") {
  for (int N : {64, 200, 512}) {
    const auto psi = coherent_state(make_geometry(N), 0.5, 0.3);
    // Oracle: |psi(q)|^2 ~ periodized Gaussian of sigma^2 = 1/(4 pi N), sampled on the grid.
    const double s = 1.0 / std::sqrt(4 * kPi * N);
    double m1 = 0, m2 = 0, o1 = 0, o2 = 0, on = 0;
    for (int l = 0; l < N; ++l) {
      const double q = (l + 0.5) / N;
      const double p = std::norm(psi.amplitudes(l));
      m1 += p * q;
      m2 += p * q * q;
      const double w = oracle::periodic_gauss(q, 0.5, s);
      on += w;
      o1 += w * q;
      o2 += w * q * q;
    }
    const double var = m2 - m1 * m1;
    const double ovar = o2 / on - (o1 / on) * (o1 / on);
    CHECK(std::abs(var - ovar) / ovar < 0.01);
    CHECK(std::abs(var - s * s) / (s * s) < 0.01);
  }
}

TEST_CASE("displacement operators match dense matrix powers") {
  for (int N : {2, 3, 4, 5, 8}) {
    const auto g = make_geometry(N);
    const auto w = displacement_window(N);
    for (int k = w.lo; k <= w.hi; ++k)
      for (int l = w.lo; l <= w.hi; ++l) {
        const auto D = displacement_operator(g, k, l);
        CHECK((D.matrix - oracle::displacement(N, k, l)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(D.unitarity_residual() < 1e-12);
      }
  }
  const auto g = make_geometry(8);
  CHECK((displacement_operator(g, 0, 0).matrix - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-15);
  CHECK_THROWS_AS(displacement_operator(g, 4, 0), Error);
  CHECK_THROWS_AS(displacement_operator(g, 0, -5), Error);
}

TEST_CASE("displacement window bookkeeping") {
  const auto w8 = displacement_window(8);
  CHECK(w8.lo == -4);
  CHECK(w8.hi == 3);
  CHECK(w8.wrap(4) == -4);
  CHECK(w8.wrap(-5) == 3);
  CHECK(w8.value(w8.slot(-3)) == -3);
  const auto w9 = displacement_window(9);
  CHECK(w9.lo == -4);
  CHECK(w9.hi == 4);
}

TEST_CASE("displacement Hilbert-Schmidt traces") {
  const auto g8 = make_geometry(8);
  const auto w = displacement_window(8);
  for (int k = w.lo; k <= w.hi; ++k)
    for (int l = w.lo; l <= w.hi; ++l) {
      const auto D = oracle::displacement(8, k, l);
      CHECK(std::abs((D.adjoint() * D).trace() - Complex(8.0)) < 1e-12);
    }
  const auto D10 = displacement_operator(make_geometry(4), 1, 0).matrix;
  const auto D01 = displacement_operator(make_geometry(4), 0, 1).matrix;
  CHECK(std::abs((D10.adjoint() * D01).trace()) < 1e-14);
  CHECK(displacement_orthogonality_residual(g8) < 1e-10);
  CHECK(displacement_orthogonality_residual(make_geometry(512)) < 1e-10);
  CHECK(displacement_orthogonality_residual(g8, {0.01}) > 1e-3);
}

TEST_CASE("density operator helpers") {
  const auto g = make_geometry(4);
  const auto psi = coherent_state(g, 0.3, 0.6);
  const auto rho = density_from_state(psi);
  const auto c = check_density(rho);
  CHECK(c.hermiticity < 1e-15);
  CHECK(c.trace_error < 1e-12);
  CHECK(c.min_eigenvalue > -1e-12);
  CHECK(c.purity == doctest::Approx(1.0).epsilon(1e-12));
  const auto both = tensor_product(psi, psi);
  CHECK(both.dimension() == 16);
  CHECK(both.factors == 2);
  CHECK(std::abs(both.amplitudes(1 * 4 + 2) - psi.amplitudes(1) * psi.amplitudes(2)) < 1e-15);
  const auto rr = tensor_product(rho, rho);
  CHECK((rr.matrix - density_from_state(both).matrix).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(tensor_product(psi, coherent_state(make_geometry(5), 0.5, 0.5)), Error);
}
