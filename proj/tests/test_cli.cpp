#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinfreeze/config.hpp"
#include "spinfreeze/experiments.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Sandbox {
 public:
  Sandbox() {
    root_ = fs::temp_directory_path() / ("spinfreeze_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  ~Sandbox() { fs::remove_all(root_); }
  const fs::path& root() const { return root_; }

  Outcome run(const std::string& args, const std::string& env = "") const {
    const fs::path o = root_ / "stdout.txt", e = root_ / "stderr.txt";
    const std::string cmd = env + " \"" SPINFREEZE_CLI "\" " + args + " >\"" + o.string() + "\" 2>\"" + e.string() + "\"";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
  }

 private:
  static inline int counter_ = 0;
  fs::path root_;
};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(std::stod(f));
  return v;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("list prints every preset") {
  Sandbox sb;
  const auto r = sb.run("list");
  CHECK(r.code == 0);
  const auto ls = lines_of(r.out);
  CHECK(ls.size() == 18);
  for (const auto& n : spinfreeze::preset_names()) CHECK(r.out.find(n) != std::string::npos);
}

TEST_CASE("run writes csv, svg and manifest") {
  Sandbox sb;
  const fs::path out = sb.root() / "out";
  const auto r = sb.run("run fig2d --t-end 1 --svg --out \"" + out.string() + "\"");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("fig2d") != std::string::npos);

  const auto csv = lines_of(slurp(out / "fig2d_populations.csv"));
  REQUIRE(csv.size() == 102);
  CHECK(csv[0] == "t_us,P_gg,P_ge,P_eg,P_ee,trace_err,min_eig");
  for (std::size_t k = 1; k < csv.size(); ++k) {
    const auto f = fields(csv[k]);
    REQUIRE(f.size() == 7);
    CHECK(std::abs(f[1] + f[2] + f[3] + f[4] - 1.0) <= 1e-9);
  }
  CHECK(fields(csv.back())[0] == doctest::Approx(1.0));

  const auto svg = slurp(out / "fig2d.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(count(svg, "class=\"series\"") == 4);

  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(m["scenario"] == "fig2d");
  CHECK(m["seed"] == 0);
  CHECK(m["seed_override"].is_null());
  CHECK(m["frame"] == "rotating");
  CHECK(m["files"].size() == 2);
  CHECK(m["metrics"]["max_leakage"].get<double>() >= 0.0);
  CHECK(m["diagnostics"]["worst_trace_error"].get<double>() <= 1e-9);
  CHECK(m.contains("version"));
  CHECK(m.contains("wall_seconds"));

  const auto again = sb.run("run fig2d --t-end 1 --out \"" + (sb.root() / "again").string() + "\"");
  REQUIRE(again.code == 0);
  CHECK(slurp(out / "fig2d_populations.csv") == slurp(sb.root() / "again" / "fig2d_populations.csv"));
}

TEST_CASE("nuclear marginal and discord columns") {
  Sandbox sb;
  const fs::path out = sb.root() / "o";
  const auto r = sb.run("run fig6a --t-end 1 --threads 2 --out \"" + out.string() + "\"");
  REQUIRE(r.code == 0);
  const auto csv = lines_of(slurp(out / "fig6a_populations.csv"));
  CHECK(csv[0] == "t_us,P_gg,P_ge,P_eg,P_ee,P_gN,P_eN,trace_err,min_eig");
  const auto d = lines_of(slurp(out / "fig6a_discord.csv"));
  CHECK(d[0] == "t_us,mutual_info,classical_corr,discord");
  CHECK(d.size() == 4);  // t = 0, 0.5, 1
}

TEST_CASE("unknown preset lists the valid ones") {
  Sandbox sb;
  const auto r = sb.run("run nosuch --out \"" + sb.root().string() + "\"");
  CHECK(r.code == 1);
  for (const auto& n : spinfreeze::preset_names()) CHECK(r.err.find(n) != std::string::npos);
}

TEST_CASE("config file errors") {
  Sandbox sb;
  const fs::path cfg = sb.root() / "bad.cfg";
  std::ofstream(cfg) << "name = bad\nmw.rabbi = 4\n";
  auto r = sb.run("run --config \"" + cfg.string() + "\" --out \"" + sb.root().string() + "\"");
  CHECK(r.code == 1);
  CHECK(r.err.find("mw.rabbi") != std::string::npos);

  r = sb.run("run --config \"" + (sb.root() / "missing.cfg").string() + "\"");
  CHECK(r.code == 3);

  r = sb.run("run fig2a --frame sideways");
  CHECK(r.code == 1);
  r = sb.run("run fig2a --frame lab --out \"" + sb.root().string() + "\"");
  CHECK(r.code == 1);
  r = sb.run("run --bogus-flag");
  CHECK(r.code == 1);
}

TEST_CASE("unwritable output directory") {
  Sandbox sb;
  const fs::path blocker = sb.root() / "file";
  std::ofstream(blocker) << "x";
  const auto r = sb.run("run fig2a --t-end 0.1 --out \"" + (blocker / "sub").string() + "\"");
  CHECK(r.code == 3);
}

TEST_CASE("propagation failure leaves no manifest") {
  Sandbox sb;
  const fs::path out = sb.root() / "o";
  fs::create_directories(out);
  std::ofstream(out / "manifest.json") << "{}";
  auto c = spinfreeze::preset("fig3a");
  c.name = "blowup";
  c.t2_us = 1e-3;
  c.grid.dt = 0.01;
  c.grid.record_stride = 1;
  c.grid.t_end = 1.0;
  const fs::path cfg = sb.root() / "blowup.cfg";
  std::ofstream(cfg) << spinfreeze::serialize_config(c);
  const auto r = sb.run("run --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"");
  CHECK(r.code == 2);
  CHECK(r.err.find("blowup") != std::string::npos);
  CHECK_FALSE(fs::exists(out / "manifest.json"));
}

TEST_CASE("output directory from the environment") {
  Sandbox sb;
  const fs::path out = sb.root() / "env_out";
  const auto r = sb.run("run fig2b --t-end 0.2", "SPINFREEZE_OUT=\"" + out.string() + "\"");
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "fig2b_populations.csv"));
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("seed override is recorded") {
  Sandbox sb;
  const fs::path out = sb.root() / "o";
  REQUIRE(sb.run("run fig5a --t-end 0.5 --seed 9 --out \"" + out.string() + "\"").code == 0);
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(m["seed"] == 9);
  CHECK(m["seed_override"] == 9);
}

TEST_CASE("batch runs each preset into its own directory") {
  Sandbox sb;
  const fs::path out = sb.root() / "b";
  const auto r = sb.run("batch fig2a fig2b fig2c --jobs 2 --t-end 0.2 --out \"" + out.string() + "\"");
  CHECK(r.code == 0);
  for (const char* n : {"fig2a", "fig2b", "fig2c"}) {
    CHECK(fs::exists(out / n / (std::string(n) + "_populations.csv")));
    CHECK(fs::exists(out / n / "manifest.json"));
  }
  CHECK(sb.run("batch fig2a nosuch --out \"" + out.string() + "\"").code == 1);
}

TEST_CASE("dump-config round trips through run") {
  Sandbox sb;
  const auto d = sb.run("dump-config fig3b_caption");
  REQUIRE(d.code == 0);
  CHECK(spinfreeze::parse_config(d.out) == spinfreeze::preset("fig3b_caption"));
  CHECK(sb.run("dump-config nosuch").code == 1);

  const fs::path cfg = sb.root() / "c.cfg";
  std::ofstream(cfg) << d.out;
  const fs::path a = sb.root() / "a", b = sb.root() / "b";
  REQUIRE(sb.run("run --config \"" + cfg.string() + "\" --t-end 0.3 --out \"" + a.string() + "\"").code == 0);
  REQUIRE(sb.run("run fig3b_caption --t-end 0.3 --out \"" + b.string() + "\"").code == 0);
  CHECK(slurp(a / "fig3b_caption_populations.csv") == slurp(b / "fig3b_caption_populations.csv"));
}
