// Regenerates tests/golden/golden_values.hpp from fine-step reference runs.
//
//   golden_oracle [OUT]          write the header to OUT (default stdout)
//   golden_oracle --check FILE   exit 1 unless FILE matches a fresh run

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "spinfreeze/discord.hpp"
#include "spinfreeze/experiments.hpp"

using namespace spinfreeze;

namespace {

constexpr double kOracleDt = 1e-4;          // a tenth of the rotating-frame step
constexpr std::size_t kOracleStride = 100;  // same record times as the default grid
constexpr std::size_t kWernerGrid = 1000;

double oracle_max_leakage(const std::string& name) {
  ScenarioConfig cfg = preset(name);
  cfg.grid.method = Method::expm_piecewise_oracle;
  cfg.grid.dt = kOracleDt;
  cfg.grid.record_stride = kOracleStride;
  return run_scenario(cfg).metrics.max_leakage;
}

double werner_discord(double p) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexMatrix rho = p * ComplexMatrix::projector({h, 0.0, 0.0, h}) + (1.0 - p) * 0.25 * ComplexMatrix::identity(4);
  DiscordOptions o;
  o.n_theta = kWernerGrid;
  o.n_phi = kWernerGrid;
  o.refine = false;
  return quantum_discord(rho, o).discord;
}

std::string line(const char* name, double v, const char* comment) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "inline constexpr double %s = %.17g;  // %s\n", name, v, comment);
  return buf;
}

std::string generate() {
  std::string s =
      "#pragma once\n\n"
      "// Generated by tools/golden_oracle. Do not edit; rerun the tool instead.\n\n"
      "namespace spinfreeze::golden {\n\n";
  s += line("kFig2dMaxLeakage", oracle_max_leakage("fig2d"), "max(P_ge + P_ee), expm steps of 1e-4 us");
  s += line("kFig4dMaxDeviation", oracle_max_leakage("fig4d"), "max |P_gN - 0.5|, expm steps of 1e-4 us");
  s += line("kWernerHalfDiscord", werner_discord(0.5), "Werner p = 0.5, natural log, 1000 x 1000 grid");
  s += "\n}  // namespace spinfreeze::golden\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string args1 = argc > 1 ? argv[1] : "";
  if (args1 == "--check") {
    if (argc != 3) {
      std::fprintf(stderr, "usage: golden_oracle --check FILE\n");
      return 2;
    }
    std::ifstream in(argv[2]);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string fresh = generate();
    if (ss.str() != fresh) {
      std::fprintf(stderr, "%s is stale; regenerated values:\n%s", argv[2], fresh.c_str());
      return 1;
    }
    std::printf("golden values up to date\n");
    return 0;
  }
  const std::string text = generate();
  if (args1.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(args1);
  out << text;
  return out ? 0 : 3;
}
