#include "phasesep/classical.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "phasesep/error.hpp"
#include "phasesep/parallel.hpp"

namespace phasesep {

std::size_t worker_count() {
  if (const char* env = std::getenv("PHASESEP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

double mod1(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0 || r == 0.0) r = 0.0;  // also folds -0.0 into +0.0
  return r;
}

namespace {

double kick(double q, double K) { return -K / (2.0 * kPi) * std::sin(2.0 * kPi * q); }

double coupling_kick(double q1, double q2, double Kc) {
  return -Kc / (2.0 * kPi) * std::sin(2.0 * kPi * q1 + 2.0 * kPi * q2);
}

}  // namespace

Point2 baker_forward(Point2 z) {
  const auto [q, p] = z;
  if (q <= 0.5) return {mod1(2.0 * q), p / 2.0};
  return {mod1(2.0 * q - 1.0), p / 2.0 + 0.5};
}

Point2 baker_inverse(Point2 z) {
  const auto [q, p] = z;
  if (p < 0.5) return {q / 2.0, mod1(2.0 * p)};
  return {q / 2.0 + 0.5, mod1(2.0 * p - 1.0)};
}

Point2 perturbed_cat_forward(Point2 z, const CatParams& m) {
  const double q = z[0];
  const double p = z[1] + kick(q, m.K);
  return {mod1(m.M11 * q + m.M12 * p), mod1(m.M21 * q + m.M22 * p)};
}

Point2 perturbed_cat_inverse(Point2 z, const CatParams& m) {
  const double a = m.M22 * z[0] - m.M12 * z[1];
  const double b = -m.M21 * z[0] + m.M11 * z[1];
  return {mod1(a), mod1(b - kick(a, m.K))};
}

Point4 coupled_cat_forward(Point4 z, const CatParams& m) {
  const double c = coupling_kick(z[0], z[2], m.Kc);
  const double p1 = z[1] + kick(z[0], m.K) + c;
  const double p2 = z[3] + kick(z[2], m.K) + c;
  return {mod1(m.M11 * z[0] + m.M12 * p1), mod1(m.M21 * z[0] + m.M22 * p1),
          mod1(m.M11 * z[2] + m.M12 * p2), mod1(m.M21 * z[2] + m.M22 * p2)};
}

Point4 coupled_cat_inverse(Point4 z, const CatParams& m) {
  const double a1 = m.M22 * z[0] - m.M12 * z[1];
  const double b1 = -m.M21 * z[0] + m.M11 * z[1];
  const double a2 = m.M22 * z[2] - m.M12 * z[3];
  const double b2 = -m.M21 * z[2] + m.M11 * z[3];
  const double c = coupling_kick(a1, a2, m.Kc);
  return {mod1(a1), mod1(b1 - kick(a1, m.K) - c), mod1(a2), mod1(b2 - kick(a2, m.K) - c)};
}

ClassicalMap make_classical_map(const std::string& kind, const CatParams& params) {
  ClassicalMap map;
  map.name = kind;
  if (kind == "baker") {
    map.dims = 2;
    map.forward = [](const double* in, double* out) {
      const Point2 r = baker_forward({in[0], in[1]});
      out[0] = r[0];
      out[1] = r[1];
    };
    map.inverse = [](const double* in, double* out) {
      const Point2 r = baker_inverse({in[0], in[1]});
      out[0] = r[0];
      out[1] = r[1];
    };
  } else if (kind == "pcat") {
    params.validate();
    map.dims = 2;
    map.forward = [params](const double* in, double* out) {
      const Point2 r = perturbed_cat_forward({in[0], in[1]}, params);
      out[0] = r[0];
      out[1] = r[1];
    };
    map.inverse = [params](const double* in, double* out) {
      const Point2 r = perturbed_cat_inverse({in[0], in[1]}, params);
      out[0] = r[0];
      out[1] = r[1];
    };
  } else if (kind == "coupled") {
    params.validate();
    map.dims = 4;
    map.forward = [params](const double* in, double* out) {
      const Point4 r = coupled_cat_forward({in[0], in[1], in[2], in[3]}, params);
      for (int i = 0; i < 4; ++i) out[i] = r[i];
    };
    map.inverse = [params](const double* in, double* out) {
      const Point4 r = coupled_cat_inverse({in[0], in[1], in[2], in[3]}, params);
      for (int i = 0; i < 4; ++i) out[i] = r[i];
    };
  } else {
    throw Error(ErrorKind::UnsupportedMap, "unknown classical map '" + kind + "'");
  }
  return map;
}

void check_grid(const std::vector<int>& grid_shape, int dims, std::size_t max_cells) {
  if (static_cast<int>(grid_shape.size()) != dims) {
    throw Error(ErrorKind::DimensionMismatch, "grid rank does not match the map dimension");
  }
  std::size_t cells = 1;
  for (int g : grid_shape) {
    if (g < 1) throw Error(ErrorKind::InvalidDimension, "grid axes need at least one cell");
    cells *= static_cast<std::size_t>(g);
    if (cells > max_cells) throw Error(ErrorKind::ResourceGuard, "phase-space grid too large");
  }
}

double PhaseSpaceField::cell_volume() const {
  double v = 1.0;
  for (int g : grid_shape) v /= g;
  return v;
}

double PhaseSpaceField::normalization() const {
  return std::accumulate(values.begin(), values.end(), 0.0) * cell_volume();
}

double PhaseSpaceField::l2_norm_squared() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s * cell_volume();
}

PhaseSpaceField make_field(std::vector<int> grid_shape) {
  PhaseSpaceField f;
  f.dims = static_cast<int>(grid_shape.size());
  std::size_t n = 1;
  for (int g : grid_shape) n *= static_cast<std::size_t>(g);
  f.grid_shape = std::move(grid_shape);
  f.values.assign(n, 0.0);
  return f;
}

std::size_t cell_index(const double* z, const std::vector<int>& grid_shape) {
  std::size_t idx = 0;
  for (std::size_t a = 0; a < grid_shape.size(); ++a) {
    const int g = grid_shape[a];
    int c = static_cast<int>(std::floor(z[a] * g));
    c = std::clamp(c, 0, g - 1);
    idx = idx * static_cast<std::size_t>(g) + static_cast<std::size_t>(c);
  }
  return idx;
}

namespace {

// Periodized 1D Gaussian, normalized to unit integral over one period.
double periodic_gaussian(double x, double x0, double sigma, int cutoff) {
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * kPi));
  double s = 0.0;
  for (int m = -cutoff; m <= cutoff; ++m) {
    const double d = x - x0 + m;
    s += std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return norm * s;
}

// Fills z with the coordinates of sub-sample `sub` of cell `cell`.
void subsample_point(std::size_t cell, std::size_t sub, const std::vector<int>& shape, int s,
                     double* z) {
  const int d = static_cast<int>(shape.size());
  for (int a = d - 1; a >= 0; --a) {
    const int g = shape[a];
    const int ci = static_cast<int>(cell % g);
    cell /= g;
    const int si = static_cast<int>(sub % s);
    sub /= s;
    z[a] = (ci + (si + 0.5) / s) / g;
  }
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

DensityFunction gaussian_function(std::vector<double> center, double sigma, int image_cutoff) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidParameter, "Gaussian sigma must be positive");
  if (image_cutoff < 1) throw Error(ErrorKind::InvalidParameter, "image_cutoff must be at least 1");
  return [center = std::move(center), sigma, image_cutoff](const double* z) {
    double v = 1.0;
    for (std::size_t a = 0; a < center.size(); ++a) {
      v *= periodic_gaussian(z[a], center[a], sigma, image_cutoff);
    }
    return v;
  };
}

PhaseSpaceField gaussian_density(const std::vector<int>& grid_shape, const std::vector<double>& center,
                                 double sigma, int image_cutoff) {
  if (center.size() != grid_shape.size()) {
    throw Error(ErrorKind::DimensionMismatch, "Gaussian centre rank differs from grid rank");
  }
  check_grid(grid_shape, static_cast<int>(grid_shape.size()));
  const DensityFunction rho = gaussian_function(center, sigma, image_cutoff);
  PhaseSpaceField f = make_field(grid_shape);
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    double z[4];
    for (std::size_t c = b; c < e; ++c) {
      subsample_point(c, 0, grid_shape, 1, z);
      f.values[c] = rho(z);
    }
  });
  const double norm = f.normalization();
  for (double& v : f.values) v /= norm;
  return f;
}

PhaseSpaceField liouville_evolve(const DensityFunction& rho0, const ClassicalMap& map, int t,
                                 const std::vector<int>& grid_shape, int subsamples) {
  if (t < 0) throw Error(ErrorKind::InvalidParameter, "steps must be nonnegative");
  if (subsamples < 1) throw Error(ErrorKind::InvalidParameter, "subsamples must be at least 1");
  if (t > 0 && !map.inverse) {
    throw Error(ErrorKind::UnsupportedMap, "map '" + map.name + "' has no inverse for pull-back transport");
  }
  check_grid(grid_shape, map.dims);
  const std::size_t per_cell = ipow(static_cast<std::size_t>(subsamples), map.dims);
  PhaseSpaceField f = make_field(grid_shape);
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    double z[4], w[4];
    for (std::size_t c = b; c < e; ++c) {
      double acc = 0.0;
      for (std::size_t sub = 0; sub < per_cell; ++sub) {
        subsample_point(c, sub, grid_shape, subsamples, z);
        for (int step = 0; step < t; ++step) {
          map.inverse(z, w);
          std::copy(w, w + map.dims, z);
        }
        acc += rho0(z);
      }
      f.values[c] = acc / static_cast<double>(per_cell);
    }
  }, 256);
  return f;
}

CoarseGrainedTransport::CoarseGrainedTransport(const ClassicalMap& map, std::vector<int> grid_shape,
                                               int subsamples)
    : shape_(std::move(grid_shape)), s_(subsamples) {
  if (subsamples < 1) throw Error(ErrorKind::InvalidParameter, "subsamples must be at least 1");
  if (!map.forward) throw Error(ErrorKind::UnsupportedMap, "map '" + map.name + "' has no forward action");
  check_grid(shape_, map.dims, std::size_t{1} << 31);
  per_cell_ = ipow(static_cast<std::size_t>(s_), map.dims);
  std::size_t cells = 1;
  for (int g : shape_) cells *= static_cast<std::size_t>(g);
  if (cells * per_cell_ > (std::size_t{1} << 31)) {
    throw Error(ErrorKind::ResourceGuard, "transport table would exceed 2^31 entries");
  }
  targets_.resize(cells * per_cell_);
  parallel_for(cells, [&](std::size_t b, std::size_t e) {
    double z[4], w[4];
    for (std::size_t c = b; c < e; ++c) {
      for (std::size_t sub = 0; sub < per_cell_; ++sub) {
        subsample_point(c, sub, shape_, s_, z);
        map.forward(z, w);
        targets_[c * per_cell_ + sub] = static_cast<std::uint32_t>(cell_index(w, shape_));
      }
    }
  }, 256);
}

PhaseSpaceField CoarseGrainedTransport::step(const PhaseSpaceField& density) const {
  if (density.grid_shape != shape_) {
    throw Error(ErrorKind::DimensionMismatch, "density grid differs from the transport grid");
  }
  PhaseSpaceField out = make_field(shape_);
  const double share = 1.0 / static_cast<double>(per_cell_);
  const std::size_t cells = density.size();
  // Serial scatter keeps the summation order, and so the result, fixed.
  for (std::size_t c = 0; c < cells; ++c) {
    const double m = density.values[c] * share;
    if (m == 0.0) continue;
    const std::uint32_t* tgt = targets_.data() + c * per_cell_;
    for (std::size_t sub = 0; sub < per_cell_; ++sub) out.values[tgt[sub]] += m;
  }
  return out;
}

}  // namespace phasesep
