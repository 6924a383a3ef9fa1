#include "phasesep/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "phasesep/classical.hpp"
#include "phasesep/error.hpp"

namespace phasesep {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

int parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    bad(key + ": expected an integer, got '" + v + "'");
  }
  if (pos != v.size() || x < INT32_MIN || x > INT32_MAX) bad(key + ": expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    bad(key + ": expected a number, got '" + v + "'");
  }
  if (pos != v.size() || !std::isfinite(x)) bad(key + ": expected a finite number, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  bad(key + ": expected true or false, got '" + v + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string to_string(MapKind m) {
  switch (m) {
    case MapKind::Baker: return "baker";
    case MapKind::Pcat: return "pcat";
    case MapKind::Coupled: return "coupled";
  }
  return "?";
}

std::string to_string(WignerKind w) { return w == WignerKind::Chord ? "chord" : "phasepoint"; }

std::string to_string(GhostHandling g) {
  switch (g) {
    case GhostHandling::Removed: return "remove";
    case GhostHandling::Kept: return "keep";
    case GhostHandling::NotApplicable: return "n/a";
  }
  return "?";
}

std::string to_string(ClassicalScheme s) { return s == ClassicalScheme::Coarse ? "coarse" : "pullback"; }

double ExperimentConfig::sigma() const {
  if (classical_sigma > 0.0) return classical_sigma;
  return std::sqrt(1.0 / (4.0 * kPi * N));
}

void ExperimentConfig::validate() const {
  if (N < 2) bad("N must be at least 2");
  if (N > 16384) bad("N must not exceed 16384");
  if (map == MapKind::Baker && N % 2 != 0) bad("the quantum baker map needs even N");
  if (steps < 0 || steps > 100000) bad("steps must lie in [0, 100000]");
  if (subsamples < 1 || subsamples > 64) bad("subsamples must lie in [1, 64]");
  if (classical_grid < 0) bad("classical_grid must be positive (0 selects N)");
  if (classical_sigma < 0.0) bad("classical_sigma must be positive (0 selects the default)");
  if (!(memory_cap_gib > 0.0)) bad("memory_cap_gib must be positive");
  for (double c : {init_center.first, init_center.second}) {
    if (!(c >= 0.0 && c < 1.0)) bad("init_center coordinates must lie in [0, 1)");
  }
  if (map != MapKind::Baker) {
    try {
      cat.validate();
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  if (ghost == GhostHandling::Kept && wigner != WignerKind::PhasePoint) {
    bad("ghost = keep needs wigner = phasepoint (the chord construction has no ghost images)");
  }
  if (ghost == GhostHandling::NotApplicable) bad("ghost must be remove or keep");
  if (map == MapKind::Coupled && wigner != WignerKind::Chord) {
    bad("the coupled map supports only wigner = chord");
  }
}

double ExperimentConfig::estimated_bytes() const {
  const double n = N, g = grid();
  if (map == MapKind::Coupled) {
    const double n4 = n * n * n * n, g4 = g * g * g * g;
    double bytes = n4 * 16.0 * 2 + n4 * 8.0 * 3;  // chord array, field, SVD workspace
    if (osee) bytes += n4 * 16.0 * 4;              // density operator and its reshuffle
    const double s4 = std::pow(subsamples, 4);
    bytes += g4 * 8.0 * 3;
    if (classical_scheme == ClassicalScheme::Coarse) bytes += g4 * s4 * 4.0;
    return bytes;
  }
  const double side = wigner == WignerKind::PhasePoint ? 2.0 * n : n;
  double bytes = side * side * (16.0 + 8.0 * 3) + n * n * 16.0;
  bytes += g * g * 8.0 * 3;
  if (classical_scheme == ClassicalScheme::Coarse) bytes += g * g * subsamples * subsamples * 4.0;
  return bytes;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("map", to_string(map));
  e.emplace_back("N", std::to_string(N));
  e.emplace_back("steps", std::to_string(steps));
  e.emplace_back("K", fmt(cat.K));
  e.emplace_back("Kc", fmt(cat.Kc));
  e.emplace_back("M", std::to_string(cat.M11) + "," + std::to_string(cat.M12) + "," +
                          std::to_string(cat.M21) + "," + std::to_string(cat.M22));
  e.emplace_back("init_center", fmt(init_center.first) + "," + fmt(init_center.second));
  e.emplace_back("classical_grid", std::to_string(grid()));
  e.emplace_back("subsamples", std::to_string(subsamples));
  e.emplace_back("classical_scheme", to_string(classical_scheme));
  e.emplace_back("classical_sigma", fmt(sigma()));
  e.emplace_back("ghost", to_string(ghost));
  e.emplace_back("wigner", to_string(wigner));
  e.emplace_back("log_base", log_base == LogBase::E ? "e" : "2");
  e.emplace_back("osee", osee ? "true" : "false");
  e.emplace_back("timing", timing ? "true" : "false");
  e.emplace_back("memory_cap_gib", fmt(memory_cap_gib));
  e.emplace_back("seed", std::to_string(seed));
  e.emplace_back("out", out);
  e.emplace_back("dump_wigner", dump_wigner);
  return e;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "map") {
    if (v == "baker") cfg.map = MapKind::Baker;
    else if (v == "pcat") cfg.map = MapKind::Pcat;
    else if (v == "coupled") cfg.map = MapKind::Coupled;
    else bad("map: expected baker, pcat or coupled, got '" + v + "'");
  } else if (key == "N") {
    cfg.N = parse_int(key, v);
  } else if (key == "steps") {
    cfg.steps = parse_int(key, v);
  } else if (key == "K") {
    cfg.cat.K = parse_double(key, v);
  } else if (key == "Kc") {
    cfg.cat.Kc = parse_double(key, v);
  } else if (key == "M") {
    std::stringstream ss(v);
    std::string part;
    std::vector<int> m;
    while (std::getline(ss, part, ',')) m.push_back(parse_int(key, trim(part)));
    if (m.size() != 4) bad("M: expected four comma-separated integers");
    cfg.cat.M11 = m[0];
    cfg.cat.M12 = m[1];
    cfg.cat.M21 = m[2];
    cfg.cat.M22 = m[3];
  } else if (key == "init_center") {
    const auto comma = v.find(',');
    if (comma == std::string::npos) bad("init_center: expected q,p");
    cfg.init_center = {parse_double(key, trim(v.substr(0, comma))), parse_double(key, trim(v.substr(comma + 1)))};
  } else if (key == "classical_grid") {
    cfg.classical_grid = parse_int(key, v);
  } else if (key == "subsamples") {
    cfg.subsamples = parse_int(key, v);
  } else if (key == "classical_scheme") {
    if (v == "coarse") cfg.classical_scheme = ClassicalScheme::Coarse;
    else if (v == "pullback") cfg.classical_scheme = ClassicalScheme::Pullback;
    else bad("classical_scheme: expected coarse or pullback, got '" + v + "'");
  } else if (key == "classical_sigma") {
    cfg.classical_sigma = parse_double(key, v);
  } else if (key == "ghost") {
    if (v == "remove") cfg.ghost = GhostHandling::Removed;
    else if (v == "keep") cfg.ghost = GhostHandling::Kept;
    else bad("ghost: expected remove or keep, got '" + v + "'");
  } else if (key == "wigner") {
    if (v == "chord") cfg.wigner = WignerKind::Chord;
    else if (v == "phasepoint") cfg.wigner = WignerKind::PhasePoint;
    else bad("wigner: expected chord or phasepoint, got '" + v + "'");
  } else if (key == "log_base") {
    if (v == "e") cfg.log_base = LogBase::E;
    else if (v == "2") cfg.log_base = LogBase::Two;
    else bad("log_base: expected e or 2, got '" + v + "'");
  } else if (key == "osee") {
    cfg.osee = parse_bool(key, v);
  } else if (key == "timing") {
    cfg.timing = parse_bool(key, v);
  } else if (key == "memory_cap_gib") {
    cfg.memory_cap_gib = parse_double(key, v);
  } else if (key == "seed") {
    const int s = parse_int(key, v);
    if (s < 0) bad("seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "out") {
    cfg.out = v;
  } else if (key == "dump_wigner") {
    cfg.dump_wigner = v;
  } else {
    bad("unknown configuration key '" + key + "'");
  }
}

void parse_config(ExperimentConfig& cfg, std::istream& in, const std::string& source) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad(source + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      bad(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config file '" + path + "'");
  parse_config(cfg, in, path);
}

namespace {

// Quantum side of one run: state, map and the Wigner/entropy evaluation.
struct QuantumBranch {
  const ExperimentConfig& cfg;
  TorusGeometry geom;
  std::unique_ptr<QuantumMap> map;
  TorusState psi;

  explicit QuantumBranch(const ExperimentConfig& c) : cfg(c), geom(make_geometry(c.N)) {
    const TorusState one = coherent_state(geom, c.init_center.first, c.init_center.second);
    switch (c.map) {
      case MapKind::Baker:
        map = make_baker_map(geom);
        psi = one;
        break;
      case MapKind::Pcat:
        map = make_perturbed_cat_map(geom, c.cat);
        psi = one;
        break;
      case MapKind::Coupled:
        map = make_coupled_cat_map(geom, c.cat);
        psi = tensor_product(one, one);
        break;
    }
  }

  void measure(EntropyRow& row, int t) const {
    WignerField W;
    AxisSplit split = AxisSplit::q_p();
    if (cfg.map == MapKind::Coupled) {
      W = wigner_2d(psi);
      split = AxisSplit::factors();
    } else if (cfg.wigner == WignerKind::Chord) {
      W = wigner_1d(psi);
    } else {
      W = phasepoint_wigner(psi, cfg.ghost);
    }
    const EntropyResult h = wigner_separability_entropy(W, split, cfg.log_base);
    row.h_quantum = h.value;
    row.tail_mass = h.spectrum_tail_mass;
    row.purity = std::pow(psi.amplitudes.squaredNorm(), 2);
    if (cfg.map == MapKind::Coupled) {
      row.two_E = 2.0 * entanglement_entropy(psi, cfg.log_base).value;
      if (cfg.osee) row.h_osee = operator_space_entanglement_entropy(density_from_state(psi), cfg.log_base).value;
    }
    if (!cfg.dump_wigner.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "wigner_t%03d.bin", t);
      write_field_dump((std::filesystem::path(cfg.dump_wigner) / name).string(), W.field,
                       W.provenance.describe());
    }
  }
};

// Classical side: the density and whichever transport the config selects.
struct ClassicalBranch {
  const ExperimentConfig& cfg;
  ClassicalMap map;
  std::vector<int> shape;
  std::vector<double> center;
  PhaseSpaceField rho;
  std::optional<CoarseGrainedTransport> transport;

  explicit ClassicalBranch(const ExperimentConfig& c)
      : cfg(c), map(make_classical_map(to_string(c.map), c.cat)) {
    shape.assign(map.dims, c.grid());
    for (int f = 0; f < map.dims / 2; ++f) {
      center.push_back(c.init_center.first);
      center.push_back(c.init_center.second);
    }
    if (c.classical_scheme == ClassicalScheme::Coarse) {
      rho = gaussian_density(shape, center, c.sigma());
      transport.emplace(map, shape, c.subsamples);
    }
  }

  const PhaseSpaceField& at(int t) {
    if (transport) {
      if (t > 0) rho = transport->step(rho);
    } else {
      rho = liouville_evolve(gaussian_function(center, cfg.sigma()), map, t, shape, cfg.subsamples);
    }
    return rho;
  }
};

}  // namespace

EntropySeries run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const double cap = cfg.memory_cap_gib * 1024.0 * 1024.0 * 1024.0;
  if (cfg.estimated_bytes() > cap) {
    std::ostringstream os;
    os << "run needs about " << std::setprecision(3) << cfg.estimated_bytes() / (1024.0 * 1024.0 * 1024.0)
       << " GiB, above the memory cap of " << cfg.memory_cap_gib << " GiB (set memory_cap_gib to raise it)";
    throw Error(ErrorKind::ResourceGuard, os.str());
  }
  if (!cfg.dump_wigner.empty()) std::filesystem::create_directories(cfg.dump_wigner);

  QuantumBranch quantum(cfg);
  ClassicalBranch classical(cfg);
  const AxisSplit split = cfg.map == MapKind::Coupled ? AxisSplit::factors() : AxisSplit::q_p();

  EntropySeries series;
  series.config = cfg;
  for (int t = 0; t <= cfg.steps; ++t) {
    const auto start = std::chrono::steady_clock::now();
    if (t > 0) quantum.map->apply(quantum.psi.amplitudes);
    EntropyRow row;
    row.t = t;
    quantum.measure(row, t);
    row.h_classical = classical_separability_entropy(classical.at(t), split, cfg.log_base).value;
    if (cfg.timing) {
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    series.rows.push_back(row);
  }
  return series;
}

std::string csv_body(const EntropySeries& series) {
  std::ostringstream os;
  os << "t,h_quantum,h_classical,two_E,h_osee,purity,tail_mass,wall_ms\n";
  auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  for (const EntropyRow& r : series.rows) {
    os << r.t << ',' << fmt(r.h_quantum) << ',' << fmt(r.h_classical) << ',' << opt(r.two_E) << ','
       << opt(r.h_osee) << ',' << fmt(r.purity) << ',' << fmt(r.tail_mass) << ',' << opt(r.wall_ms) << '\n';
  }
  return os.str();
}

void write_csv(std::ostream& os, const EntropySeries& series) {
  os << "# " << kVersion << '\n';
  os << "# generated = " << timestamp_utc() << '\n';
  for (const auto& [k, v] : series.config.entries()) os << "# " << k << " = " << v << '\n';
  os << csv_body(series);
}

void write_csv(const std::string& path, const EntropySeries& series) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  write_csv(os, series);
  if (!os) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

Preset preset(const std::string& name, PresetScale scale) {
  const bool full = scale == PresetScale::Full;
  ExperimentConfig base;
  base.steps = 10;
  base.ghost = GhostHandling::Removed;
  base.wigner = WignerKind::Chord;
  Preset p;
  p.name = name;
  if (name == "fig1") {
    base.map = MapKind::Baker;
    base.N = full ? 512 : 128;
    p.runs.push_back(base);
  } else if (name == "fig2") {
    base.map = MapKind::Pcat;
    for (int N : full ? std::vector<int>{2048, 8192} : std::vector<int>{512, 1024}) {
      base.N = N;
      p.runs.push_back(base);
    }
    ExperimentConfig ghosts = p.runs.front();
    ghosts.wigner = WignerKind::PhasePoint;
    ghosts.ghost = GhostHandling::Kept;
    p.ghost_comparison = ghosts;
  } else if (name == "fig3") {
    base.map = MapKind::Coupled;
    base.N = full ? 64 : 32;
    base.subsamples = 2;
    p.runs.push_back(base);
  } else {
    bad("unknown preset '" + name + "' (expected fig1, fig2 or fig3)");
  }
  return p;
}

double lyapunov_exponent(MapKind map, const CatParams& cat) {
  if (map == MapKind::Baker) return std::log(2.0);
  const double tr = cat.M11 + cat.M22;
  if (std::abs(tr) <= 2.0) {
    throw Error(ErrorKind::InvalidParameter, "cat matrix is not hyperbolic (|trace| <= 2)");
  }
  return std::log((std::abs(tr) + std::sqrt(tr * tr - 4.0)) / 2.0);
}

double ehrenfest_time(int N, double lyapunov) {
  if (!(lyapunov > 0.0)) throw Error(ErrorKind::InvalidParameter, "Lyapunov exponent must be positive");
  if (N < 1) throw Error(ErrorKind::InvalidDimension, "N must be positive");
  return std::log(2.0 * kPi * N) / lyapunov;
}

double relative_gap(double a, double b, double floor) {
  const double m = std::max(std::abs(a), std::abs(b));
  if (m < floor) return 0.0;
  return std::abs(a - b) / m;
}

int break_time(const EntropySeries& s, double threshold, double floor) {
  for (const EntropyRow& r : s.rows) {
    if (relative_gap(r.h_quantum, r.h_classical, floor) > threshold) return r.t;
  }
  return s.rows.empty() ? 0 : s.rows.back().t + 1;
}

}  // namespace phasesep
