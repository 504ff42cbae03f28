// spinfreeze command-line front end.
//
// Exit codes: 0 success, 1 invalid configuration or arguments, 2 propagation
// failure, 3 I/O failure.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinfreeze/config.hpp"
#include "spinfreeze/error.hpp"
#include "spinfreeze/experiments.hpp"
#include "spinfreeze/output.hpp"
#include "spinfreeze/version.hpp"

namespace fs = std::filesystem;
using namespace spinfreeze;

namespace {

enum Exit { kOk = 0, kConfig = 1, kPropagation = 2, kIo = 3 };

std::mutex g_print;

template <typename... Args>
void say(std::FILE* f, const char* format, Args... args) {
  std::lock_guard lock(g_print);
  std::fprintf(f, format, args...);
}

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<Frame> frame;
  std::optional<double> t_end;
  bool discord = false;
  bool svg = false;
  unsigned threads = 1;
};

std::string default_out_dir() {
  if (const char* env = std::getenv("SPINFREEZE_OUT"); env && *env) return env;
  return "spinfreeze_out";
}

std::optional<Frame> parse_frame(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "lab") return Frame::lab;
  if (s == "rotating") return Frame::rotating;
  throw ConfigError("frame", "expected lab or rotating, got '" + s + "'");
}

ScenarioConfig apply_overrides(ScenarioConfig cfg, const RunOptions& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.frame) cfg = with_frame(std::move(cfg), *o.frame);
  if (o.t_end) cfg.grid.t_end = *o.t_end;
  if (o.discord) cfg.outputs.discord = true;
  return cfg;
}

int run_one(ScenarioConfig cfg, const std::string& source, const fs::path& out_dir, const RunOptions& opts) {
  const fs::path manifest_path = out_dir / "manifest.json";
  try {
    cfg = apply_overrides(std::move(cfg), opts);
    cfg.validate();
  } catch (const ConfigError& e) {
    say(stderr, "error: invalid configuration: %s\n", e.what());
    return kConfig;
  }

  try {
    fs::create_directories(out_dir);
    fs::remove(manifest_path);
  } catch (const fs::filesystem_error& e) {
    say(stderr, "error: %s\n", e.what());
    return kIo;
  }

  ScenarioResult res;
  try {
    res = run_scenario(cfg, opts.threads);
  } catch (const ConfigError& e) {
    say(stderr, "error: invalid configuration: %s\n", e.what());
    return kConfig;
  } catch (const IntegrationFailure& e) {
    say(stderr, "error: propagation failed: %s\n", e.what());
    return kPropagation;
  } catch (const Error& e) {
    say(stderr, "error: scenario %s: %s\n", cfg.name.c_str(), e.what());
    return kPropagation;
  }
  for (const auto& w : res.warnings) say(stderr, "warning: %s: %s\n", cfg.name.c_str(), w.c_str());

  std::vector<std::string> files;
  try {
    const std::string csv = cfg.name + "_populations.csv";
    emit_csv(res.series, (out_dir / csv).string(), cfg.outputs.nuclear_marginal);
    files.push_back(csv);
    if (res.discord) {
      const std::string dcsv = cfg.name + "_discord.csv";
      emit_discord_csv(*res.discord, (out_dir / dcsv).string());
      files.push_back(dcsv);
    }
    if (opts.svg) {
      const std::string svg = cfg.name + ".svg";
      emit_svg(res.series, (out_dir / svg).string(), cfg.name);
      files.push_back(svg);
      if (res.discord) {
        const std::string dsvg = cfg.name + "_discord.svg";
        std::vector<double> d;
        for (const auto& v : res.discord->values) d.push_back(v.discord);
        write_file((out_dir / dsvg).string(), render_svg(res.discord->times, {{"discord", d}}, "discord", cfg.name));
        files.push_back(dsvg);
      }
    }

    nlohmann::ordered_json m;
    m["scenario"] = cfg.name;
    m["source"] = source;
    m["output_dir"] = out_dir.string();
    m["seed"] = cfg.seed;
    m["seed_override"] = opts.seed ? nlohmann::ordered_json(*opts.seed) : nlohmann::ordered_json(nullptr);
    m["frame"] = to_string(cfg.frame);
    m["frame_override"] = opts.frame ? nlohmann::ordered_json(to_string(*opts.frame)) : nlohmann::ordered_json(nullptr);
    m["files"] = files;
    m["wall_seconds"] = res.wall_seconds;
    m["version"] = kVersion;
    m["metrics"] = {{"mode", to_string(res.metrics.mode)},
                    {"max_leakage", res.metrics.max_leakage},
                    {"mean_leakage", res.metrics.mean_leakage},
                    {"time_window_us", res.metrics.time_window}};
    m["diagnostics"] = {{"worst_trace_error", res.series.worst_trace_error},
                        {"worst_min_eigenvalue", res.series.worst_min_eigenvalue},
                        {"steps", res.series.steps_taken}};
    m["warnings"] = res.warnings;
    write_file(manifest_path.string(), m.dump(2) + "\n");
  } catch (const IoError& e) {
    say(stderr, "error: I/O failure: %s\n", e.what());
    return kIo;
  }

  std::string line = cfg.name + ": max_leakage=" + std::to_string(res.metrics.max_leakage) +
                     " mean_leakage=" + std::to_string(res.metrics.mean_leakage) + " (" +
                     to_string(res.metrics.mode) + ", " + std::to_string(res.metrics.time_window) + " us)";
  if (res.discord) {
    double dmax = 0.0;
    for (const auto& v : res.discord->values) dmax = std::max(dmax, v.discord);
    line += " max_discord=" + std::to_string(dmax);
  }
  say(stdout, "%s -> %s\n", line.c_str(), out_dir.string().c_str());
  return kOk;
}

int cmd_list() {
  for (const auto& name : preset_names()) std::printf("%-14s %s\n", name.c_str(), preset(name).description.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interaction-induced freezing of an NV nuclear spin: scenarios, dynamics and discord"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List the built-in scenario presets");

  RunOptions opts;
  std::string frame_str;
  std::optional<std::uint64_t> seed;
  std::optional<double> t_end;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--frame", frame_str, "Override the frame (lab|rotating)");
    sub->add_option("--t-end", t_end, "Override the simulated window (us)");
    sub->add_flag("--discord", opts.discord, "Compute and write the discord trace");
    sub->add_flag("--svg", opts.svg, "Also write SVG plots");
    sub->add_option("--threads", threads, "Worker threads for the discord trace")->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Run one preset or config file");
  std::string preset_name, config_path, out_dir;
  run->add_option("preset", preset_name, "Preset name (see `list`)");
  run->add_option("--config", config_path, "Scenario config file");
  run->add_option("--out", out_dir, "Output directory (default $SPINFREEZE_OUT or ./spinfreeze_out)");
  add_run_flags(run);

  auto* batch = app.add_subcommand("batch", "Run several presets, each into its own subdirectory");
  std::vector<std::string> batch_names;
  unsigned jobs = 1;
  batch->add_option("presets", batch_names, "Preset names (default: all)");
  batch->add_option("--jobs", jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber);
  batch->add_option("--out", out_dir, "Parent output directory");
  add_run_flags(batch);

  auto* dump = app.add_subcommand("dump-config", "Print a preset as a config file");
  std::string dump_name;
  dump->add_option("preset", dump_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    opts.frame = parse_frame(frame_str);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  }
  opts.seed = seed;
  opts.t_end = t_end;
  opts.threads = threads;
  const fs::path out = out_dir.empty() ? fs::path(default_out_dir()) : fs::path(out_dir);

  if (*list) return cmd_list();

  if (*dump) {
    try {
      std::fputs(serialize_config(preset(dump_name)).c_str(), stdout);
      return kOk;
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kConfig;
    }
  }

  if (*run) {
    if (preset_name.empty() == config_path.empty()) {
      std::fprintf(stderr, "error: give exactly one of a preset name or --config FILE\n");
      return kConfig;
    }
    ScenarioConfig cfg;
    try {
      cfg = config_path.empty() ? preset(preset_name) : load_config(config_path);
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kConfig;
    } catch (const IoError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kIo;
    }
    return run_one(std::move(cfg), config_path.empty() ? preset_name : config_path, out, opts);
  }

  // batch
  if (batch_names.empty()) batch_names = preset_names();
  std::vector<ScenarioConfig> cfgs;
  for (const auto& n : batch_names) {
    try {
      cfgs.push_back(preset(n));
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kConfig;
    }
  }
  opts.threads = 1;
  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{kOk};
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < std::min<std::size_t>(jobs, cfgs.size()); ++j)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfgs.size(); i = next++) {
          const int code = run_one(cfgs[i], cfgs[i].name, out / cfgs[i].name, opts);
          int cur = worst.load();
          while (code > cur && !worst.compare_exchange_weak(cur, code)) {
          }
        }
      });
  }
  return worst.load();
}
