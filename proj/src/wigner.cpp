#include "phasesep/wigner.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <unsupported/Eigen/FFT>

#include "phasesep/error.hpp"
#include "phasesep/parallel.hpp"

namespace phasesep {

namespace {

Complex cis(double angle) { return {std::cos(angle), std::sin(angle)}; }

int floor_div(int a, int n) {
  int q = a / n;
  if ((a % n != 0) && ((a < 0) != (n < 0))) --q;
  return q;
}

int pmod(int a, int n) { return ((a % n) + n) % n; }

// Per-torus phase tables shared by every construction.
//
// The Wigner basis is B(k,l) = c(k,l) D(k,l) exp[-2 pi i (beta k - alpha l)/N]
// with (alpha, beta) = -(theta_q, theta_p), which puts grid index a at
// q = (a + theta_q)/N. On even N the window edge k = -N/2 (or l = -N/2) is its
// own negative only up to a sign, and c in {1, -i} restores B(-k,-l) = B(k,l)^dagger
// so that the field comes out real.
struct TorusPhases {
  TorusGeometry g;
  DisplacementWindow w;

  explicit TorusPhases(const TorusGeometry& geom) : g(geom), w(displacement_window(geom.N)) {}

  // Phase applied after the FFT over j: exp[-i pi k l / N] exp[-2 pi i theta_q l / N].
  Complex chord_post(int k, int l) const {
    const int N = g.N;
    return cis(-kPi * static_cast<double>(k) * l / N - 2.0 * kPi * g.boundary_phases[0] * l / N);
  }

  // Conjugated boundary phase for column j of U^k.
  Complex wrap_conj(int k, int j) const {
    return cis(2.0 * kPi * g.boundary_phases[1] * floor_div(j + k, g.N));
  }

  // exp[2 pi i (beta k - alpha l)/N]: chord of rho against the unhermitized basis.
  Complex basis_shift(int k, int l) const {
    const auto [tq, tp] = g.boundary_phases;
    return cis(2.0 * kPi * (-tp * k + tq * l) / g.N);
  }

  Complex hermitian_fix(int k, int l) const {
    const int N = g.N;
    if (N % 2 != 0) return 1.0;
    // With alpha = -theta_q and beta = -theta_p the wrap factors reduce to signs.
    double z = 1.0;
    int kk = -k, ll = -l;
    if (kk == N / 2) {
      z /= (ll % 2 == 0) ? 1.0 : -1.0;
      kk -= N;
    }
    if (ll == N / 2) {
      z /= (kk % 2 == 0) ? 1.0 : -1.0;
    }
    return z > 0 ? Complex(1.0, 0.0) : Complex(0.0, -1.0);
  }

  // conj(c) * basis_shift: maps chi to the chord against B.
  Complex basis_factor(int k, int l) const { return std::conj(hermitian_fix(k, l)) * basis_shift(k, l); }
};

// Unscaled 1D DFT along one axis of a row-major complex array.
// sign = -1: sum_x f(x) e^{-2 pi i x y / n}; sign = +1: e^{+2 pi i x y / n}.
void dft_axis(std::vector<Complex>& data, const std::vector<int>& shape, int axis, int sign) {
  const int n = shape[axis];
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < shape.size(); ++a) stride *= shape[a];
  const std::size_t total = data.size();
  const std::size_t lines = total / n;
  parallel_for(lines, [&](std::size_t b, std::size_t e) {
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<Complex> in(n), out(n);
    for (std::size_t line = b; line < e; ++line) {
      const std::size_t outer = line / stride, inner = line % stride;
      const std::size_t base = outer * stride * n + inner;
      for (int x = 0; x < n; ++x) in[x] = data[base + x * stride];
      if (sign < 0) {
        fft.fwd(out, in);
      } else {
        fft.inv(out, in);
      }
      for (int x = 0; x < n; ++x) data[base + x * stride] = out[x];
    }
  }, 64);
}

// chi(k,l) for one torus from an accessor elem(r, j) = rho_{r j}.
template <class Elem>
ChordFunction chord_1d(const TorusGeometry& g, Elem elem) {
  const TorusPhases ph(g);
  const int N = g.N;
  ChordFunction chi;
  chi.geometry = g;
  chi.values.resize(N, N);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
    Eigen::FFT<double> fft;
    std::vector<Complex> f(N), F(N);
    for (std::size_t ks = b; ks < e; ++ks) {
      const int k = ph.w.value(static_cast<int>(ks));
      for (int j = 0; j < N; ++j) f[j] = elem(pmod(j + k, N), j) * ph.wrap_conj(k, j);
      fft.fwd(F, f);
      for (int ls = 0; ls < N; ++ls) {
        const int l = ph.w.value(ls);
        chi.values(ks, ls) = ph.chord_post(k, l) * F[ls];
      }
    }
  }, 8);
  return chi;
}

double take_real(const std::vector<Complex>& data, std::vector<double>& out) {
  out.resize(data.size());
  double imag = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[i] = data[i].real();
    imag = std::max(imag, std::abs(data[i].imag()));
    scale = std::max(scale, std::abs(data[i].real()));
  }
  if (!(imag <= 1e-8 * scale)) {
    throw Error(ErrorKind::InvalidParameter,
                "Wigner field has imaginary residue " + std::to_string(imag) +
                    "; the input operator is not Hermitian");
  }
  return imag;
}

void require_factors(const DensityOperator& rho, int factors) {
  const Index N = rho.geometry.N;
  const Index expect = factors == 1 ? N : N * N;
  if (rho.matrix.rows() != expect || rho.matrix.cols() != expect) {
    throw Error(ErrorKind::DimensionMismatch, "operator dimension " + std::to_string(rho.matrix.rows()) +
                                                  " does not match " + std::to_string(factors) +
                                                  " torus factor(s) of N = " + std::to_string(N));
  }
}

void require_factors(const TorusState& psi, int factors) {
  const Index N = psi.geometry.N;
  const Index expect = factors == 1 ? N : N * N;
  if (psi.amplitudes.size() != expect) {
    throw Error(ErrorKind::DimensionMismatch, "state dimension does not match the torus factors");
  }
}

// Four-index chord function against the Wigner basis, laid out [l1][k1][l2][k2]
// on FFT slots, from an accessor elem(r1, r2, j1, j2) = rho_{(r1 r2),(j1 j2)}.
template <class Elem>
std::vector<Complex> basis_chord_2d(const TorusGeometry& g, Elem elem) {
  const TorusPhases ph(g);
  const int N = g.N;
  const std::size_t NN = static_cast<std::size_t>(N) * N;
  std::vector<Complex> out(NN * NN);
  parallel_for(NN, [&](std::size_t b, std::size_t e) {
    Eigen::FFT<double> fft;
    std::vector<Complex> F(NN), in(N), tmp(N);
    for (std::size_t kk = b; kk < e; ++kk) {
      const int k1s = static_cast<int>(kk / N), k2s = static_cast<int>(kk % N);
      const int k1 = ph.w.value(k1s), k2 = ph.w.value(k2s);
      for (int j1 = 0; j1 < N; ++j1) {
        const Complex w1 = ph.wrap_conj(k1, j1);
        const int r1 = pmod(j1 + k1, N);
        for (int j2 = 0; j2 < N; ++j2) {
          F[static_cast<std::size_t>(j1) * N + j2] =
              elem(r1, pmod(j2 + k2, N), j1, j2) * w1 * ph.wrap_conj(k2, j2);
        }
      }
      // 2D forward FFT over (j1, j2) -> (l1, l2).
      for (int j1 = 0; j1 < N; ++j1) {
        std::copy_n(F.begin() + static_cast<std::ptrdiff_t>(j1) * N, N, in.begin());
        fft.fwd(tmp, in);
        std::copy_n(tmp.begin(), N, F.begin() + static_cast<std::ptrdiff_t>(j1) * N);
      }
      for (int l2 = 0; l2 < N; ++l2) {
        for (int j1 = 0; j1 < N; ++j1) in[j1] = F[static_cast<std::size_t>(j1) * N + l2];
        fft.fwd(tmp, in);
        for (int l1 = 0; l1 < N; ++l1) F[static_cast<std::size_t>(l1) * N + l2] = tmp[l1];
      }
      for (int l1s = 0; l1s < N; ++l1s) {
        const int l1 = ph.w.value(l1s);
        const Complex f1 = ph.chord_post(k1, l1) * ph.basis_factor(k1, l1);
        for (int l2s = 0; l2s < N; ++l2s) {
          const int l2 = ph.w.value(l2s);
          const Complex f2 = ph.chord_post(k2, l2) * ph.basis_factor(k2, l2);
          const std::size_t idx = ((static_cast<std::size_t>(l1s) * N + k1s) * N + l2s) * N + k2s;
          out[idx] = f1 * f2 * F[static_cast<std::size_t>(l1s) * N + l2s];
        }
      }
    }
  }, 4);
  return out;
}

WignerField finish_2d(const TorusGeometry& g, std::vector<Complex> data) {
  const int N = g.N;
  const std::vector<int> shape{N, N, N, N};
  dft_axis(data, shape, 0, +1);
  dft_axis(data, shape, 1, -1);
  dft_axis(data, shape, 2, +1);
  dft_axis(data, shape, 3, -1);
  WignerField W;
  W.field = make_field(shape);
  W.provenance.construction = WignerConstruction::ChordN;
  W.provenance.hs_scale = static_cast<double>(N) * N;
  W.provenance.imag_residue = take_real(data, W.field.values);
  return W;
}

// Chord of rho against the unhermitized basis on the 2N-periodic extension,
// k, l in [-N, N), from an accessor elem(r, j).
template <class Elem>
WignerField phasepoint_impl(const TorusGeometry& g, GhostHandling ghosts, Elem elem) {
  const int N = g.N, M = 2 * N;
  const TorusPhases ph(g);
  std::vector<Complex> X(static_cast<std::size_t>(M) * M, Complex(0.0, 0.0));  // [l][k] mod 2N
  if (ghosts == GhostHandling::Kept) {
    Eigen::FFT<double> fft;
    std::vector<Complex> f(N), F(N);
    for (int k = -N; k < N; ++k) {
      for (int j = 0; j < N; ++j) f[j] = elem(pmod(j + k, N), j) * ph.wrap_conj(k, j);
      fft.fwd(F, f);
      for (int l = -N; l < N; ++l) {
        X[static_cast<std::size_t>(pmod(l, M)) * M + pmod(k, M)] =
            ph.basis_shift(k, l) * ph.chord_post(k, l) * F[pmod(l, N)];
      }
    }
  } else if (ghosts == GhostHandling::Removed) {
    const ChordFunction chi = chord_1d(g, elem);
    const int half = N / 2;
    const bool even = N % 2 == 0;
    const int lo = even ? -half : ph.w.lo;
    const int hi = even ? half : ph.w.hi;
    for (int k = lo; k <= hi; ++k) {
      const double wk = (even && std::abs(k) == half) ? 0.5 : 1.0;
      const int kw = ph.w.wrap(k);
      for (int l = lo; l <= hi; ++l) {
        const double wl = (even && std::abs(l) == half) ? 0.5 : 1.0;
        const int lw = ph.w.wrap(l);
        X[static_cast<std::size_t>(pmod(l, M)) * M + pmod(k, M)] +=
            wk * wl * ph.basis_factor(kw, lw) * chi.at(kw, lw);
      }
    }
  } else {
    throw Error(ErrorKind::InvalidParameter, "phase-point Wigner needs ghosts = keep or remove");
  }
  const std::vector<int> shape{M, M};
  dft_axis(X, shape, 0, +1);
  dft_axis(X, shape, 1, -1);
  WignerField W;
  W.field = make_field(shape);
  W.provenance.construction = WignerConstruction::PhasePoint2N;
  W.provenance.ghosts = ghosts;
  W.provenance.imag_residue = take_real(X, W.field.values);
  return W;
}

}  // namespace

Complex ChordFunction::at(int k, int l) const {
  const DisplacementWindow w = displacement_window(geometry.N);
  if (!w.contains(k) || !w.contains(l)) {
    throw Error(ErrorKind::InvalidDisplacement, "chord index outside the fundamental window");
  }
  return values(w.slot(k), w.slot(l));
}

std::string WignerProvenance::describe() const {
  std::string s = construction == WignerConstruction::ChordN ? "chord-N" : "phasepoint-2N";
  switch (ghosts) {
    case GhostHandling::Removed: s += " ghosts=removed"; break;
    case GhostHandling::Kept: s += " ghosts=kept"; break;
    case GhostHandling::NotApplicable: break;
  }
  s += " hs_scale=" + std::to_string(hs_scale);
  return s;
}

ChordFunction chord_function(const DensityOperator& rho) {
  require_factors(rho, 1);
  const Eigen::MatrixXcd& m = rho.matrix;
  return chord_1d(rho.geometry, [&m](int r, int j) { return m(r, j); });
}

ChordFunction chord_function(const TorusState& psi) {
  require_factors(psi, 1);
  const Eigen::VectorXcd& v = psi.amplitudes;
  return chord_1d(psi.geometry, [&v](int r, int j) { return v(r) * std::conj(v(j)); });
}

WignerField wigner_from_chord(const ChordFunction& chi) {
  const TorusPhases ph(chi.geometry);
  const int N = chi.geometry.N;
  std::vector<Complex> X(static_cast<std::size_t>(N) * N);  // [l][k]
  for (int ks = 0; ks < N; ++ks) {
    const int k = ph.w.value(ks);
    for (int ls = 0; ls < N; ++ls) {
      const int l = ph.w.value(ls);
      X[static_cast<std::size_t>(ls) * N + ks] = ph.basis_factor(k, l) * chi.values(ks, ls);
    }
  }
  const std::vector<int> shape{N, N};
  dft_axis(X, shape, 0, +1);
  dft_axis(X, shape, 1, -1);
  WignerField W;
  W.field = make_field(shape);
  W.provenance.construction = WignerConstruction::ChordN;
  W.provenance.hs_scale = N;
  W.provenance.imag_residue = take_real(X, W.field.values);
  return W;
}

WignerField wigner_1d(const DensityOperator& rho) { return wigner_from_chord(chord_function(rho)); }
WignerField wigner_1d(const TorusState& psi) { return wigner_from_chord(chord_function(psi)); }

WignerField wigner_2d(const DensityOperator& rho) {
  require_factors(rho, 2);
  const Index N = rho.geometry.N;
  const Eigen::MatrixXcd& m = rho.matrix;
  return finish_2d(rho.geometry, basis_chord_2d(rho.geometry, [&](int r1, int r2, int j1, int j2) {
                     return m(r1 * N + r2, j1 * N + j2);
                   }));
}

WignerField wigner_2d(const TorusState& psi) {
  require_factors(psi, 2);
  const Index N = psi.geometry.N;
  const Eigen::VectorXcd& v = psi.amplitudes;
  return finish_2d(psi.geometry, basis_chord_2d(psi.geometry, [&](int r1, int r2, int j1, int j2) {
                     return v(r1 * N + r2) * std::conj(v(j1 * N + j2));
                   }));
}

WignerField phasepoint_wigner(const DensityOperator& rho, GhostHandling ghosts) {
  require_factors(rho, 1);
  const Eigen::MatrixXcd& m = rho.matrix;
  WignerField W = phasepoint_impl(rho.geometry, ghosts, [&m](int r, int j) { return m(r, j); });
  W.provenance.hs_scale = W.field.l2_norm_squared() / rho.purity();
  return W;
}

WignerField phasepoint_wigner(const TorusState& psi, GhostHandling ghosts) {
  require_factors(psi, 1);
  const Eigen::VectorXcd& v = psi.amplitudes;
  WignerField W = phasepoint_impl(psi.geometry, ghosts, [&v](int r, int j) { return v(r) * std::conj(v(j)); });
  W.provenance.hs_scale = W.field.l2_norm_squared() / std::pow(v.squaredNorm(), 2);
  return W;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    const int c = is.get();
    if (c == EOF) throw Error(ErrorKind::Io, "truncated field dump");
    v |= static_cast<std::uint32_t>(c & 0xff) << (8 * i);
  }
  return v;
}

constexpr std::uint32_t kDumpVersion = 1;

}  // namespace

void write_field_dump(const std::string& path, const PhaseSpaceField& field, const std::string& provenance) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  os.write("PSWF", 4);
  put_u32(os, kDumpVersion);
  put_u32(os, static_cast<std::uint32_t>(field.grid_shape.size()));
  for (int g : field.grid_shape) put_u32(os, static_cast<std::uint32_t>(g));
  put_u32(os, static_cast<std::uint32_t>(provenance.size()));
  os.write(provenance.data(), static_cast<std::streamsize>(provenance.size()));
  for (double v : field.values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) os.put(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
  if (!os) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

FieldDump read_field_dump(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "PSWF", 4) != 0) throw Error(ErrorKind::Io, "not a field dump: " + path);
  if (get_u32(is) != kDumpVersion) throw Error(ErrorKind::Io, "unsupported field dump version");
  const std::uint32_t dims = get_u32(is);
  if (dims != 2 && dims != 4) throw Error(ErrorKind::Io, "field dump has bad rank");
  std::vector<int> shape(dims);
  for (auto& g : shape) g = static_cast<int>(get_u32(is));
  FieldDump d;
  const std::uint32_t plen = get_u32(is);
  d.provenance.resize(plen);
  is.read(d.provenance.data(), plen);
  d.field = make_field(shape);
  for (double& v : d.field.values) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw Error(ErrorKind::Io, "truncated field dump");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    v = std::bit_cast<double>(bits);
  }
  return d;
}

}  // namespace phasesep
