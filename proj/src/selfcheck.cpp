#include "phasesep/selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "phasesep/classical.hpp"
#include "phasesep/entropy.hpp"
#include "phasesep/quantum_maps.hpp"

namespace phasesep {

namespace {

Eigen::MatrixXcd gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd A(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) A(i, j) = Complex(n(rng), n(rng));
  return A;
}

Index total_dim(const TorusGeometry& g, int factors) {
  Index d = 1;
  for (int f = 0; f < factors; ++f) d *= g.N;
  return d;
}

void add(std::vector<CheckResult>& r, std::string name, double residual, double tol) {
  r.push_back({std::move(name), residual, tol, residual <= tol});
}

double fast_vs_dense(const QuantumMap& map, const TorusGeometry& g, std::uint64_t seed) {
  const TorusState psi = random_state(g, map.factors(), seed);
  Eigen::VectorXcd fast = psi.amplitudes;
  map.apply(fast);
  return (fast - map.dense().matrix * psi.amplitudes).cwiseAbs().maxCoeff();
}

}  // namespace

DensityOperator random_density(const TorusGeometry& g, int factors, std::uint64_t seed) {
  const Index D = total_dim(g, factors);
  const Eigen::MatrixXcd A = gaussian_matrix(D, D, seed);
  DensityOperator rho;
  rho.geometry = g;
  rho.factors = factors;
  rho.matrix = A * A.adjoint();
  rho.matrix /= rho.matrix.trace().real();
  return rho;
}

TorusState random_state(const TorusGeometry& g, int factors, std::uint64_t seed) {
  TorusState psi;
  psi.geometry = g;
  psi.factors = factors;
  psi.amplitudes = gaussian_matrix(total_dim(g, factors), 1, seed).col(0);
  psi.amplitudes.normalize();
  return psi;
}

double wigner_schmidt_scale(const WignerField& W) {
  return std::sqrt(W.field.cell_volume() / W.provenance.hs_scale);
}

std::vector<CheckResult> selfcheck(const SelfcheckOptions& opt) {
  std::vector<CheckResult> r;
  const CatParams cat{};

  const TorusGeometry g64 = make_geometry(64);
  add(r, "unitarity baker N=64", baker_unitary(g64).unitarity_residual(), 1e-12);
  add(r, "unitarity pcat N=64", perturbed_cat_unitary(g64, cat).unitarity_residual(), 1e-10);
  const TorusGeometry g8 = make_geometry(8);
  add(r, "unitarity coupled N=8", coupled_cat_unitary(g8, g8, cat).unitarity_residual(), 1e-10);

  add(r, "fast baker matches dense N=64", fast_vs_dense(*make_baker_map(g64), g64, opt.seed), 1e-10);
  add(r, "fast pcat matches dense N=64", fast_vs_dense(*make_perturbed_cat_map(g64, cat), g64, opt.seed + 1), 1e-10);
  add(r, "fast coupled matches dense N=8", fast_vs_dense(*make_coupled_cat_map(g8, cat), g8, opt.seed + 2), 1e-10);

  const DisplacementConvention conv{opt.displacement_distortion};
  for (int N : {8, 9}) {
    add(r, "displacement orthogonality N=" + std::to_string(N),
        displacement_orthogonality_residual(make_geometry(N), conv), 1e-10);
  }

  // Wigner isometry on random mixed two-factor operators.
  const TorusGeometry g4 = make_geometry(4);
  double iso = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const DensityOperator rho = random_density(g4, 2, opt.seed + 10 + trial);
    const WignerField W = wigner_2d(rho);
    const Eigen::VectorXd mw =
        schmidt_spectrum(split_matrix(W.field, AxisSplit::factors())).singular_values * wigner_schmidt_scale(W);
    const Eigen::VectorXd mr = schmidt_spectrum(operator_reshuffle(rho)).singular_values;
    iso = std::max(iso, (mw - mr).cwiseAbs().maxCoeff());
  }
  add(r, "Wigner isometry (random mixed, N=4 per factor)", iso, 1e-10);

  // Identity chain h[W] = h[rho] = 2E = I(1:2) on random pure states.
  double chain = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const TorusState psi = random_state(g8, 2, opt.seed + 20 + trial);
    const DensityOperator rho = density_from_state(psi);
    const double hw = wigner_separability_entropy(wigner_2d(psi), AxisSplit::factors()).value;
    const double ho = operator_space_entanglement_entropy(rho).value;
    const double e2 = 2.0 * entanglement_entropy(psi).value;
    const double mi = mutual_information(rho).value;
    chain = std::max({chain, std::abs(hw - e2), std::abs(ho - e2), std::abs(mi - e2)});
  }
  add(r, "identity chain (random pure, N=8 per factor)", chain, 1e-10);

  // Classical forward/inverse round trips.
  std::mt19937_64 rng(opt.seed + 30);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double trip2 = 0.0, trip4 = 0.0, tripb = 0.0;
  auto torus_dist = [](double a, double b) {
    const double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
  };
  for (int i = 0; i < 1000; ++i) {
    const Point2 z{u(rng), u(rng)};
    const Point2 zb = baker_inverse(baker_forward(z));
    const Point2 zc = perturbed_cat_inverse(perturbed_cat_forward(z, cat), cat);
    for (int a = 0; a < 2; ++a) {
      tripb = std::max(tripb, torus_dist(zb[a], z[a]));
      trip2 = std::max(trip2, torus_dist(zc[a], z[a]));
    }
    const Point4 w{u(rng), u(rng), u(rng), u(rng)};
    const Point4 wc = coupled_cat_inverse(coupled_cat_forward(w, cat), cat);
    for (int a = 0; a < 4; ++a) trip4 = std::max(trip4, torus_dist(wc[a], w[a]));
  }
  add(r, "baker round trip", tripb, 1e-12);
  add(r, "pcat round trip", trip2, 1e-12);
  add(r, "coupled round trip", trip4, 1e-12);
  return r;
}

bool all_passed(const std::vector<CheckResult>& report) {
  for (const auto& c : report)
    if (!c.pass) return false;
  return true;
}

void print_report(std::ostream& os, const std::vector<CheckResult>& report) {
  for (const auto& c : report) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-52s residual %.3e (tol %.0e)", c.pass ? "ok" : "FAIL",
                  c.name.c_str(), c.residual, c.tolerance);
    os << line << '\n';
  }
}

}  // namespace phasesep
