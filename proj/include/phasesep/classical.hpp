#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "phasesep/quantum_maps.hpp"

namespace phasesep {

using Point2 = std::array<double, 2>;  // (q, p)
using Point4 = std::array<double, 4>;  // (q1, p1, q2, p2)

/// Reduction into [0, 1); an exact 1.0 (or -0.0 rounding) maps to 0.0.
double mod1(double x);

Point2 baker_forward(Point2 z);
Point2 baker_inverse(Point2 z);

/// (q', p') = M (q, p + eps(q)) mod 1 with eps(q) = -(K / 2 pi) sin(2 pi q).
Point2 perturbed_cat_forward(Point2 z, const CatParams& params);
Point2 perturbed_cat_inverse(Point2 z, const CatParams& params);

/// Both factors get eps(q^i) + eps'(q1, q2), eps' = -(Kc / 2 pi) sin(2 pi q1 + 2 pi q2).
Point4 coupled_cat_forward(Point4 z, const CatParams& params);
Point4 coupled_cat_inverse(Point4 z, const CatParams& params);

/// Type-erased map on 2D or 4D points. `inverse` may be empty for maps that
/// cannot be inverted; pull-back transport refuses those.
struct ClassicalMap {
  std::string name;
  int dims = 2;
  std::function<void(const double* in, double* out)> forward;
  std::function<void(const double* in, double* out)> inverse;
};

ClassicalMap make_classical_map(const std::string& kind, const CatParams& params = {});

/// Real field over the cell centres of a uniform torus grid, row-major in
/// the axis order (q, p) or (q1, p1, q2, p2).
struct PhaseSpaceField {
  int dims = 2;
  std::vector<int> grid_shape;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double cell_volume() const;
  /// sum(values) * cell_volume
  double normalization() const;
  /// sum(values^2) * cell_volume
  double l2_norm_squared() const;
};

PhaseSpaceField make_field(std::vector<int> grid_shape);

/// Analytic density on the torus, evaluated at a point of `dims` coordinates.
using DensityFunction = std::function<double(const double* z)>;

/// Periodized isotropic Gaussian with per-axis standard deviation `sigma`,
/// summed over +-image_cutoff periods per axis, integrating to 1 on the torus.
DensityFunction gaussian_function(std::vector<double> center, double sigma, int image_cutoff = 3);

/// The same Gaussian sampled at cell centres and renormalized so that
/// sum * cell_volume = 1.
PhaseSpaceField gaussian_density(const std::vector<int>& grid_shape, const std::vector<double>& center,
                                 double sigma, int image_cutoff = 3);

/// Pull-back transport: each cell holds the average of rho0(Map^{-t} z) over
/// an s^dims sub-grid of points inside the cell.
PhaseSpaceField liouville_evolve(const DensityFunction& rho0, const ClassicalMap& map, int t,
                                 const std::vector<int>& grid_shape, int subsamples);

/// Cell-to-cell transport at fixed resolution (Ulam's method): each cell's
/// s^dims sub-grid points are pushed forward one step and carry equal shares
/// of the cell's mass to the cells they land in. Mass is conserved exactly.
class CoarseGrainedTransport {
 public:
  CoarseGrainedTransport(const ClassicalMap& map, std::vector<int> grid_shape, int subsamples);

  PhaseSpaceField step(const PhaseSpaceField& density) const;
  const std::vector<int>& grid_shape() const { return shape_; }
  int subsamples() const { return s_; }

 private:
  std::vector<int> shape_;
  int s_ = 1;
  std::size_t per_cell_ = 1;
  std::vector<std::uint32_t> targets_;  // cells x per_cell landing indices
};

/// Cell index of a point (coordinates in [0, 1)) on the given grid.
std::size_t cell_index(const double* z, const std::vector<int>& grid_shape);

/// Guard used by the grid builders: refuses shapes whose flat size would
/// exceed `max_cells`.
void check_grid(const std::vector<int>& grid_shape, int dims, std::size_t max_cells = std::size_t{1} << 31);

}  // namespace phasesep
