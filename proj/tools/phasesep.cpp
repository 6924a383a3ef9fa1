// phasesep: run the separability-entropy experiments from the command line.
//
//   phasesep run --preset fig1|fig2|fig3 [--scale desk|full] [--out f.csv]
//   phasesep run --map pcat --N 512 --steps 10 ... [--config file]
//   phasesep selfcheck
//   phasesep ehrenfest --N 2048
//
// Exit codes: 0 success, 1 invalid configuration, 2 resource guard, 3 selfcheck failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "phasesep/error.hpp"
#include "phasesep/experiment.hpp"
#include "phasesep/selfcheck.hpp"

namespace {

using phasesep::ExperimentConfig;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitResource = 2;
constexpr int kExitSelfcheck = 3;

std::string suffixed(const std::string& path, const std::string& tag) {
  std::filesystem::path p(path);
  const std::string stem = p.stem().string();
  const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
  return (p.parent_path() / (stem + "_" + tag + ext)).string();
}

void emit(const phasesep::EntropySeries& s, const std::string& path) {
  if (path.empty()) {
    phasesep::write_csv(std::cout, s);
  } else {
    phasesep::write_csv(path, s);
    std::cerr << "wrote " << path << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum and classical separability entropies of chaotic torus maps"};
  app.set_version_flag("--version", std::string(phasesep::kVersion));
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run an experiment and write its entropy series as CSV");
  std::string preset_name, scale = "desk", config_path;
  // Every experiment flag is captured as text and applied through the same
  // key = value parser the config file uses, so both paths validate alike.
  std::map<std::string, std::string> flags;
  const std::vector<std::pair<std::string, std::string>> flag_specs = {
      {"map", "baker, pcat or coupled"},
      {"N", "Hilbert dimension per torus"},
      {"steps", "Number of map iterations"},
      {"K", "Perturbation strength"},
      {"Kc", "Coupling strength (coupled map)"},
      {"M", "Cat matrix entries M11,M12,M21,M22"},
      {"init-center", "Initial centre q,p"},
      {"classical-grid", "Classical cells per axis (default N)"},
      {"subsamples", "Sub-samples per cell axis"},
      {"classical-scheme", "coarse or pullback"},
      {"classical-sigma", "Classical Gaussian standard deviation"},
      {"ghost", "remove or keep"},
      {"wigner", "chord or phasepoint"},
      {"log-base", "e or 2"},
      {"osee", "Compute the operator-space entropy (coupled map)"},
      {"timing", "Record wall-clock time per step"},
      {"memory-cap-gib", "Refuse runs above this memory estimate"},
      {"seed", "Seed for randomized modes"},
      {"out", "CSV output path (default stdout)"},
      {"dump-wigner", "Directory for binary Wigner field dumps"},
  };
  for (const auto& [name, help] : flag_specs) run->add_option("--" + name, flags[name], help);
  run->add_option("--preset", preset_name, "fig1, fig2 or fig3");
  run->add_option("--scale", scale, "desk or full")->check(CLI::IsMember({"desk", "full"}));
  run->add_option("--config", config_path, "key = value configuration file; flags override it");

  // selfcheck
  auto* check = app.add_subcommand("selfcheck", "Run the fast invariant suite");
  double distortion = 0.0;
  check->add_option("--corrupt-displacement", distortion, "Fault injection: distort the momentum boost")
      ->group("");

  // ehrenfest
  auto* ehr = app.add_subcommand("ehrenfest", "Print the Ehrenfest time ln(2 pi N) / lambda");
  int ehr_N = 0;
  std::string ehr_map = "pcat";
  ehr->add_option("--N", ehr_N, "Hilbert dimension")->required();
  ehr->add_option("--map", ehr_map, "baker or pcat")->check(CLI::IsMember({"baker", "pcat", "coupled"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*check) {
      phasesep::SelfcheckOptions opt;
      opt.displacement_distortion = distortion;
      const auto report = phasesep::selfcheck(opt);
      phasesep::print_report(std::cout, report);
      return phasesep::all_passed(report) ? kExitOk : kExitSelfcheck;
    }

    if (*ehr) {
      ExperimentConfig cfg;
      phasesep::apply_setting(cfg, "map", ehr_map);
      const double lambda = phasesep::lyapunov_exponent(cfg.map, cfg.cat);
      std::printf("lambda = %.6f\nt_E = %.6f\n", lambda, phasesep::ehrenfest_time(ehr_N, lambda));
      return kExitOk;
    }

    // run: preset or defaults, then the config file, then explicit flags.
    std::vector<ExperimentConfig> runs;
    std::optional<ExperimentConfig> ghosts;
    if (!preset_name.empty()) {
      const auto p = phasesep::preset(preset_name, scale == "full" ? phasesep::PresetScale::Full
                                                                 : phasesep::PresetScale::Desk);
      runs = p.runs;
      ghosts = p.ghost_comparison;
    } else {
      runs.emplace_back();
    }
    auto configure = [&](ExperimentConfig& cfg) {
      if (!config_path.empty()) phasesep::load_config_file(cfg, config_path);
      for (const auto& [name, help] : flag_specs) {
        if (run->count("--" + name) == 0) continue;
        std::string key = name;
        for (char& c : key)
          if (c == '-') c = '_';
        phasesep::apply_setting(cfg, key, flags[name]);
      }
      cfg.validate();
    };
    for (auto& cfg : runs) configure(cfg);
    if (ghosts) configure(*ghosts);

    const bool many = runs.size() > 1 || ghosts.has_value();
    for (const auto& cfg : runs) {
      const auto series = phasesep::run_experiment(cfg);
      emit(series, many && !cfg.out.empty() ? suffixed(cfg.out, "N" + std::to_string(cfg.N)) : cfg.out);
    }
    if (ghosts) {
      const auto series = phasesep::run_experiment(*ghosts);
      emit(series, !ghosts->out.empty() ? suffixed(ghosts->out, "N" + std::to_string(ghosts->N) + "_ghosts")
                                        : ghosts->out);
    }
    return kExitOk;
  } catch (const phasesep::Error& e) {
    std::cerr << "phasesep: " << e.what() << '\n';
    return e.kind() == phasesep::ErrorKind::ResourceGuard ? kExitResource : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "phasesep: " << e.what() << '\n';
    return kExitConfig;
  }
}
