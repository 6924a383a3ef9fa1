#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phasesep/entropy.hpp"
#include "phasesep/quantum_maps.hpp"
#include "phasesep/wigner.hpp"

namespace phasesep {

inline constexpr const char* kVersion = "phasesep 0.1.0";

enum class MapKind { Baker, Pcat, Coupled };
enum class WignerKind { Chord, PhasePoint };

/// How the classical density is propagated.
///   coarse:   cell-to-cell transport at fixed grid resolution (mass conserving,
///             coarse-grains at every step);
///   pullback: rho_0(Map^{-t} z) averaged over sub-samples of each cell.
enum class ClassicalScheme { Coarse, Pullback };

struct ExperimentConfig {
  MapKind map = MapKind::Pcat;
  int N = 128;
  int steps = 10;
  CatParams cat{};
  /// (q, p) per factor; the coupled map uses it for both factors.
  std::pair<double, double> init_center{0.5, 0.5};
  int classical_grid = 0;  // 0: same as N
  int subsamples = 4;
  GhostHandling ghost = GhostHandling::Removed;
  WignerKind wigner = WignerKind::Chord;
  ClassicalScheme classical_scheme = ClassicalScheme::Coarse;
  /// Per-axis standard deviation of the classical Gaussian; 0 selects
  /// sqrt(hbar/2), the spread of the coherent state's Wigner function.
  double classical_sigma = 0.0;
  LogBase log_base = LogBase::E;
  bool osee = true;               // also compute h[rho] for the coupled map
  bool timing = true;             // fill wall_ms (off for byte-reproducible CSV)
  double memory_cap_gib = 8.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string dump_wigner;

  int grid() const { return classical_grid > 0 ? classical_grid : N; }
  double sigma() const;
  /// Throws InvalidConfig describing the first violated constraint.
  void validate() const;
  /// Rough peak memory of one run in bytes (dense SVD input plus tables).
  double estimated_bytes() const;
  /// Ordered key/value echo used for CSV headers and config files.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

std::string to_string(MapKind m);
std::string to_string(WignerKind w);
std::string to_string(GhostHandling g);
std::string to_string(ClassicalScheme s);

/// Applies one `key = value` setting; throws InvalidConfig on unknown keys
/// or malformed values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
/// Reads `key = value` lines ('#' starts a comment) into cfg.
void load_config_file(ExperimentConfig& cfg, const std::string& path);
void parse_config(ExperimentConfig& cfg, std::istream& in, const std::string& source);

struct EntropyRow {
  int t = 0;
  double h_quantum = 0.0;
  double h_classical = 0.0;
  std::optional<double> two_E;
  std::optional<double> h_osee;
  double purity = 1.0;
  double tail_mass = 0.0;
  std::optional<double> wall_ms;
};

struct EntropySeries {
  ExperimentConfig config;
  std::vector<EntropyRow> rows;
};

EntropySeries run_experiment(const ExperimentConfig& cfg);

/// Writes the '#' header (version, timestamp, config echo) and the rows.
void write_csv(std::ostream& os, const EntropySeries& series);
void write_csv(const std::string& path, const EntropySeries& series);
/// The rows only, as they appear after the header.
std::string csv_body(const EntropySeries& series);

enum class PresetScale { Desk, Full };

struct Preset {
  std::string name;
  std::vector<ExperimentConfig> runs;
  /// Fig. 2 only: the lower-N run evaluated with ghosts kept.
  std::optional<ExperimentConfig> ghost_comparison;
};

Preset preset(const std::string& name, PresetScale scale);

/// Largest Lyapunov exponent of the classical map: ln 2 for the baker,
/// ln of the expanding eigenvalue of the cat matrix otherwise.
double lyapunov_exponent(MapKind map, const CatParams& cat = {});
/// t_E = ln(2 pi N) / lambda = -ln(hbar) / lambda.
double ehrenfest_time(int N, double lyapunov);

/// |a - b| / max(|a|, |b|), or 0 when both are below `floor`.
double relative_gap(double a, double b, double floor);
/// First t whose gap exceeds `threshold`; rows.size() if none does.
int break_time(const EntropySeries& s, double threshold, double floor);

}  // namespace phasesep
