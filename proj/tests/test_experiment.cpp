#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "phasesep/error.hpp"
#include "phasesep/experiment.hpp"

using namespace phasesep;

TEST_CASE("Lyapunov exponents and Ehrenfest times") {
  const double lambda = lyapunov_exponent(MapKind::Pcat);
  CHECK(lambda == doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-15));
  CHECK(lambda == doctest::Approx(1.3170).epsilon(1e-4));
  CHECK(lyapunov_exponent(MapKind::Baker) == doctest::Approx(std::log(2.0)));
  CHECK(ehrenfest_time(2048, lambda) == doctest::Approx(std::log(2 * kPi * 2048) / lambda));
  CHECK(ehrenfest_time(2048, lambda) == doctest::Approx(7.19).epsilon(1e-3));
  CHECK(ehrenfest_time(8192, lambda) - ehrenfest_time(2048, lambda) ==
        doctest::Approx(std::log(4.0) / lambda).epsilon(1e-12));
  CHECK(ehrenfest_time(8192, lambda) - ehrenfest_time(2048, lambda) == doctest::Approx(1.05).epsilon(1e-2));
  CHECK_THROWS_AS(ehrenfest_time(64, 0.0), Error);
  CHECK_THROWS_AS(ehrenfest_time(64, -1.0), Error);
  CatParams elliptic{1, 1, -1, 0, 0.0, 0.0};
  CHECK_THROWS_AS(lyapunov_exponent(MapKind::Pcat, elliptic), Error);
}

TEST_CASE("presets") {
  const auto f3 = preset("fig3", PresetScale::Full);
  REQUIRE(f3.runs.size() == 1);
  CHECK(f3.runs[0].map == MapKind::Coupled);
  CHECK(f3.runs[0].N == 64);
  CHECK(f3.runs[0].cat.K == 0.5);
  CHECK(f3.runs[0].cat.Kc == 1.0);
  CHECK(f3.runs[0].steps == 10);
  const auto f1 = preset("fig1", PresetScale::Full);
  CHECK(f1.runs[0].map == MapKind::Baker);
  CHECK(f1.runs[0].N == 512);
  CHECK(f1.runs[0].ghost == GhostHandling::Removed);
  CHECK(preset("fig1", PresetScale::Desk).runs[0].N == 128);
  const auto f2 = preset("fig2", PresetScale::Desk);
  REQUIRE(f2.runs.size() == 2);
  CHECK(f2.runs[0].N == 512);
  CHECK(f2.runs[1].N == 1024);
  ExperimentConfig a = f2.runs[0], b = f2.runs[1];
  b.N = a.N;
  CHECK(a.entries() == b.entries());
  REQUIRE(f2.ghost_comparison.has_value());
  CHECK(f2.ghost_comparison->ghost == GhostHandling::Kept);
  CHECK(f2.ghost_comparison->N == 512);
  const auto f2full = preset("fig2", PresetScale::Full);
  CHECK(f2full.runs[0].N == 2048);
  CHECK(f2full.runs[1].N == 8192);
  CHECK(preset("fig3", PresetScale::Desk).runs[0].N == 32);
  CHECK_THROWS_AS(preset("fig4", PresetScale::Desk), Error);
}

TEST_CASE("configuration parsing and validation") {
  ExperimentConfig cfg;
  std::istringstream in(
      "# comment\n"
      "map = coupled\n"
      "N = 16   # trailing comment\n"
      "steps=3\n"
      "Kc = 0.25\n"
      "subsamples = 2\n"
      "log_base = 2\n"
      "timing = false\n");
  parse_config(cfg, in, "test");
  CHECK(cfg.map == MapKind::Coupled);
  CHECK(cfg.N == 16);
  CHECK(cfg.steps == 3);
  CHECK(cfg.cat.Kc == 0.25);
  CHECK(cfg.log_base == LogBase::Two);
  CHECK(!cfg.timing);
  CHECK_NOTHROW(cfg.validate());

  auto expect_config_error = [](const std::string& text) {
    ExperimentConfig c;
    std::istringstream s(text);
    try {
      parse_config(c, s, "bad");
      c.validate();
    } catch (const Error& e) {
      return e.kind() == ErrorKind::InvalidConfig;
    }
    return false;
  };
  CHECK(expect_config_error("map = tent\n"));
  CHECK(expect_config_error("N = twelve\n"));
  CHECK(expect_config_error("N = 1\n"));
  CHECK(expect_config_error("map = baker\nN = 31\n"));
  CHECK(expect_config_error("steps = -1\n"));
  CHECK(expect_config_error("colour = blue\n"));
  CHECK(expect_config_error("no equals sign\n"));
  CHECK(expect_config_error("ghost = keep\n"));
  CHECK(expect_config_error("map = coupled\nwigner = phasepoint\n"));
  CHECK(expect_config_error("M = 2,1,3,3\n"));
  CHECK(expect_config_error("init_center = 1.5,0.5\n"));
  CHECK(expect_config_error("K = nan\n"));
  CHECK(!expect_config_error("wigner = phasepoint\nghost = keep\n"));
}

TEST_CASE("resource guard refuses oversized runs") {
  ExperimentConfig cfg;
  cfg.map = MapKind::Coupled;
  cfg.N = 256;
  try {
    run_experiment(cfg);
    FAIL("expected a resource-guard error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ResourceGuard);
    CHECK(std::string(e.what()).find("GiB") != std::string::npos);
  }
}

TEST_CASE("coupled cats: quantum separability entropy equals twice the entanglement") {
  ExperimentConfig cfg;
  cfg.map = MapKind::Coupled;
  cfg.N = 16;
  cfg.steps = 3;
  cfg.subsamples = 2;
  const auto s = run_experiment(cfg);
  REQUIRE(s.rows.size() == 4);
  for (const auto& r : s.rows) {
    REQUIRE(r.two_E.has_value());
    REQUIRE(r.h_osee.has_value());
    CHECK(std::abs(r.h_quantum - *r.two_E) < 1e-10);
    CHECK(std::abs(r.h_quantum - *r.h_osee) < 1e-10);
    CHECK(std::abs(r.purity - 1.0) < 1e-10);
    CHECK(r.h_classical >= 0.0);
  }
  CHECK(s.rows[0].h_quantum < 1e-10);
  CHECK(s.rows[3].h_quantum > 1.0);
}

TEST_CASE("separable Gaussian start for the perturbed cat") {
  ExperimentConfig cfg;
  cfg.map = MapKind::Pcat;
  cfg.N = 512;
  cfg.steps = 0;
  const auto s = run_experiment(cfg);
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].h_quantum < 0.05);
  CHECK(s.rows[0].h_classical < 0.05);
  CHECK(!s.rows[0].two_E.has_value());
}

TEST_CASE("CSV output is deterministic and fully described by its header") {
  ExperimentConfig cfg;
  cfg.map = MapKind::Baker;
  cfg.N = 32;
  cfg.steps = 4;
  cfg.timing = false;
  const auto a = run_experiment(cfg), b = run_experiment(cfg);
  CHECK(csv_body(a) == csv_body(b));
  std::ostringstream os;
  write_csv(os, a);
  const std::string text = os.str();
  CHECK(text.rfind("# phasesep 0.1.0\n", 0) == 0);
  CHECK(text.find("# map = baker\n") != std::string::npos);
  CHECK(text.find("# N = 32\n") != std::string::npos);
  CHECK(text.find("\nt,h_quantum,h_classical,two_E,h_osee,purity,tail_mass,wall_ms\n") != std::string::npos);
  // 2D maps leave the coupled-only columns and (with timing off) wall_ms empty.
  std::istringstream body(csv_body(a));
  std::string line;
  std::getline(body, line);
  int rows = 0;
  while (std::getline(body, line)) {
    ++rows;
    int commas = 0;
    for (char c : line) commas += c == ',';
    CHECK(commas == 7);
    CHECK(line.find(",,,") != std::string::npos);
    CHECK(line.back() == ',');
  }
  CHECK(rows == 5);
  // Header echo can be fed back as a config file.
  ExperimentConfig back;
  std::istringstream echo([&] {
    std::string s;
    for (const auto& [k, v] : cfg.entries()) s += k + " = " + v + "\n";
    return s;
  }());
  parse_config(back, echo, "echo");
  CHECK(back.entries() == cfg.entries());
}

TEST_CASE("relative gap and break time") {
  CHECK(relative_gap(1.0, 0.8, 0.05) == doctest::Approx(0.2));
  CHECK(relative_gap(0.01, 0.0, 0.05) == 0.0);
  EntropySeries s;
  for (int t = 0; t < 5; ++t) {
    EntropyRow r;
    r.t = t;
    r.h_quantum = 1.0;
    r.h_classical = t < 3 ? 0.9 : 0.5;
    s.rows.push_back(r);
  }
  CHECK(break_time(s, 0.25, 0.05) == 3);
  for (auto& r : s.rows) r.h_classical = 1.0;
  CHECK(break_time(s, 0.25, 0.05) == 5);
}
