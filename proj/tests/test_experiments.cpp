#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spinfreeze/config.hpp"
#include "spinfreeze/error.hpp"
#include "spinfreeze/experiments.hpp"
#include "spinfreeze/output.hpp"

using namespace spinfreeze;

namespace {

TimeSeries series_from(const std::vector<double>& times, const std::vector<std::vector<double>>& pops) {
  TimeSeries s;
  s.times = times;
  s.populations = pops;
  return s;
}

std::string csv_of(const ScenarioResult& r) {
  std::ostringstream out;
  write_populations_csv(out, r.series, r.config.outputs.nuclear_marginal);
  return out.str();
}

}  // namespace

TEST_CASE("preset registry") {
  const auto& names = preset_names();
  CHECK(names.size() == 18);
  CHECK(std::is_sorted(names.begin(), names.end()));
  for (const auto& n : names) {
    const auto c = preset(n);
    CHECK(c.name == n);
    CHECK_NOTHROW(c.validate());
  }
  try {
    preset("nosuch");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "preset");
    for (const auto& n : names) CHECK(std::string(e.what()).find(n) != std::string::npos);
  }
}

TEST_CASE("preset parameters") {
  struct TwoSpinRow {
    const char* name;
    double o1, o2, v0;
  };
  for (const auto& row : {TwoSpinRow{"fig2a", 2, 2, 0}, TwoSpinRow{"fig2b", 2, 2, 2}, TwoSpinRow{"fig2c", 2, 0.1, 0},
                          TwoSpinRow{"fig2d", 2, 0.1, 2}}) {
    const auto c = preset(row.name);
    CHECK(c.model == ModelKind::two_spin);
    CHECK(c.two_spin.omega_1 == row.o1);
    CHECK(c.two_spin.omega_2 == row.o2);
    CHECK(c.two_spin.v0 == row.v0);
    CHECK(c.two_spin.delta_1 == 0.0);
    CHECK(c.two_spin.delta_2 == 0.0);
    CHECK(c.t2_us == 0.0);
    CHECK(c.grid.t_end == 10.0);
  }

  struct NvRow {
    const char* name;
    double mw, rf, t_end;
  };
  for (const auto& row : {NvRow{"fig3a", 4, 4, 10}, NvRow{"fig3b_caption", 4, 0.04, 10}, NvRow{"fig3b_text", 4, 0.1, 10},
                          NvRow{"fig3c", 4, 0.04, 150}}) {
    const auto c = preset(row.name);
    CHECK(c.model == ModelKind::nv_reduced);
    CHECK(c.mw.rabi == row.mw);
    CHECK(c.rf.rabi == row.rf);
    CHECK(c.grid.t_end == row.t_end);
    CHECK(c.t2_us == 150.0);
    CHECK(c.nv.b_z == 500.0);
    CHECK_FALSE(c.noise.profile.has_value());
    CHECK_FALSE(c.mw.carrier.has_value());
    CHECK_FALSE(c.rf.carrier.has_value());
  }

  for (const char* n : {"fig4a", "fig4b", "fig4c", "fig4d", "fig6a", "fig6b"}) {
    const auto c = preset(n);
    REQUIRE(c.noise.profile.has_value());
    CHECK(*c.noise.profile == NoiseProfile::single_tone);
    CHECK(c.noise.amplitude == 0.04);
    CHECK(c.rf.rabi == 0.0);
    CHECK(c.grid.t_end == 150.0);
    CHECK(c.mw.rabi == (n[4] == 'a' || n[4] == 'c' ? 0.0 : 4.0));
  }
  CHECK(preset("fig4a").initial.kind == InitialKind::basis);
  CHECK(preset("fig4c").initial.kind == InitialKind::nuclear_superposition);
  CHECK(preset("fig4d").metric == MetricMode::superposition);
  CHECK(preset("fig6a").initial.kind == InitialKind::equal_superposition);
  CHECK(preset("fig6b").outputs.discord);

  const auto g1 = preset("fig5a"), g2 = preset("fig5b"), u1 = preset("fig5c"), u2 = preset("fig5d");
  CHECK(*g1.noise.profile == NoiseProfile::gaussian);
  CHECK(g1.noise.amplitude == 0.03);
  CHECK(g1.noise.sigma == 0.01);
  CHECK(g2.noise.sigma == 0.1);
  CHECK(*u1.noise.profile == NoiseProfile::uniform_band);
  CHECK(u1.noise.amplitude == 0.01);
  CHECK(u2.noise.amplitude == 0.02);
  CHECK(u1.noise.half_width == 0.5);
  for (const auto& c : {g1, g2, u1, u2}) CHECK(c.mw.rabi == 4.0);
}

TEST_CASE("initial states") {
  auto c = preset("fig4c");
  auto rho = initial_density_matrix(c);
  CHECK(rho(0, 0).real() == doctest::Approx(0.5));
  CHECK(rho(0, 1).real() == doctest::Approx(0.5));
  CHECK(rho(2, 2).real() == 0.0);

  c.initial.kind = InitialKind::amplitudes;
  c.initial.amplitudes = {cplx(0.0), cplx(0.0), cplx(0.0, 2.0), cplx(0.0)};
  rho = initial_density_matrix(c);
  CHECK(rho(2, 2).real() == doctest::Approx(1.0));

  c.model = ModelKind::nv_full;
  c.frame = Frame::lab;
  rho = initial_density_matrix(c);
  CHECK(rho.dim() == 9);
  CHECK(rho(6, 6).real() == doctest::Approx(1.0));

  c.initial.amplitudes = {};
  CHECK_THROWS_AS(initial_density_matrix(c), ConfigError);
  c.initial = {InitialKind::basis, "xx", {}};
  CHECK_THROWS_AS(initial_density_matrix(c), ConfigError);
}

TEST_CASE("validation names the field") {
  auto expect_field = [](ScenarioConfig c, const std::string& field) {
    try {
      c.validate();
      FAIL("expected ConfigError for " << field);
    } catch (const ConfigError& e) {
      CHECK(e.field() == field);
    }
  };
  auto c = preset("fig2a");
  c.frame = Frame::lab;
  expect_field(c, "frame");

  c = preset("fig3c");
  c.model = ModelKind::nv_full;
  expect_field(c, "frame");
  c.frame = Frame::lab;
  CHECK_NOTHROW(c.validate());

  c = preset("fig6a");
  c.model = ModelKind::nv_full;
  c.frame = Frame::lab;
  expect_field(c, "outputs.discord");

  c = preset("fig5a");
  c.noise.sigma = 0.0;
  expect_field(c, "noise.sigma");
  c = preset("fig5c");
  c.noise.realizations = 0;
  expect_field(c, "noise.realizations");
  c = preset("fig3a");
  c.mw.rabi = -1.0;
  expect_field(c, "mw.rabi");
  c = preset("fig3a");
  c.grid.t_end = 0.0;
  expect_field(c, "grid.t_end");
  c = preset("fig3a");
  c.name = "bad name";
  expect_field(c, "name");
}

TEST_CASE("freezing metrics") {
  const auto flat = series_from({0, 1, 2}, {{1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}});
  auto m = freezing_metrics(flat, MetricMode::ground);
  CHECK(m.max_leakage == 0.0);
  CHECK(m.mean_leakage == 0.0);
  CHECK(m.time_window == 2.0);

  const auto bump = series_from({0, 1, 2}, {{1, 0, 0, 0}, {0.9, 0.05, 0.03, 0.02}, {1, 0, 0, 0}});
  m = freezing_metrics(bump, MetricMode::ground);
  CHECK(m.max_leakage == doctest::Approx(0.07));
  CHECK(m.mean_leakage == doctest::Approx(0.07 / 3));
  CHECK(window_mean_leakage(bump, MetricMode::ground, 0.5, 2.0) == doctest::Approx(0.035));
  CHECK_THROWS_AS(window_mean_leakage(bump, MetricMode::ground, 3.0, 4.0), ConfigError);

  const auto sup = series_from({0, 1}, {{0.5, 0.5, 0, 0}, {0.4, 0.5, 0.1, 0}});
  m = freezing_metrics(sup, MetricMode::superposition);
  CHECK(m.max_leakage == 0.0);
  const auto sup2 = series_from({0, 1}, {{0.5, 0.5, 0, 0}, {0.3, 0.6, 0.1, 0}});
  CHECK(freezing_metrics(sup2, MetricMode::superposition).max_leakage == doctest::Approx(0.1));

  std::vector<double> nine(9, 0.0);
  nine[3] = 0.8;
  nine[4] = 0.1;
  nine[0] = 0.1;
  const auto full = series_from({0}, {nine});
  CHECK(nuclear_populations(full)[0][0] == doctest::Approx(0.9));
  CHECK(reduced_populations(full)[0][1] == doctest::Approx(0.1));

  CHECK_THROWS_AS(freezing_metrics(TimeSeries{}, MetricMode::ground), ConfigError);
}

TEST_CASE("two-spin Rabi flip") {
  auto c = preset("fig2a");
  c.grid.t_end = 0.5;
  const auto r = run_scenario(c);
  const auto pops = reduced_populations(r.series);
  bool found = false;
  for (std::size_t k = 0; k < r.series.size(); ++k) {
    if (std::abs(r.series.times[k] - 0.25) < 1e-9) {
      CHECK(pops[k][3] == doctest::Approx(1.0).epsilon(1e-6));
      found = true;
    }
  }
  CHECK(found);
  CHECK(r.series.times.back() == doctest::Approx(0.5));
  CHECK(r.series.size() == 51);
}

TEST_CASE("runs are bit-identical") {
  auto c = preset("fig5a");
  c.grid.t_end = 2.0;
  CHECK(csv_of(run_scenario(c)) == csv_of(run_scenario(c)));
  auto d = c;
  d.seed = 7;
  CHECK(csv_of(run_scenario(c)) != csv_of(run_scenario(d)));
}

TEST_CASE("realization average") {
  auto c = preset("fig5c");
  c.grid.t_end = 2.0;
  c.noise.n_tones = 11;
  auto c1 = c;
  c1.seed = 1;
  const auto a = run_scenario(c), b = run_scenario(c1);
  c.noise.realizations = 2;
  const auto avg = run_scenario(c);
  REQUIRE(avg.series.size() == a.series.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < a.series.size(); ++k)
    for (std::size_t i = 0; i < 4; ++i)
      worst = std::max(worst, std::abs(avg.series.populations[k][i] -
                                       0.5 * (a.series.populations[k][i] + b.series.populations[k][i])));
  CHECK(worst <= 1e-14);

  auto tone = preset("fig4b");
  tone.grid.t_end = 1.0;
  auto tone2 = tone;
  tone2.noise.realizations = 5;
  CHECK(csv_of(run_scenario(tone)) == csv_of(run_scenario(tone2)));
}

TEST_CASE("leakage grows with band amplitude") {
  double prev = -1.0;
  for (double k : {0.005, 0.01, 0.02, 0.04}) {
    auto c = preset("fig5c");
    c.noise.amplitude = k;
    const double leak = run_scenario(c).metrics.max_leakage;
    CHECK(leak > prev);
    prev = leak;
  }
}

TEST_CASE("automatic grid") {
  const auto rot = preset("fig3c");
  const auto g = resolved_grid(rot, build_model(rot));
  CHECK(g.dt == 1e-3);
  CHECK(g.record_stride == 10);

  auto lab = with_frame(preset("fig3b_caption"), Frame::lab);
  const auto model = build_model(lab);
  const auto gl = resolved_grid(lab, model);
  CHECK(gl.dt * static_cast<double>(gl.record_stride) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(gl.dt <= 1.0 / (40.0 * model.max_frequency()) + 1e-15);

  auto disc = preset("fig6a");
  CHECK(resolved_grid(disc, build_model(disc)).keep_states);
}

TEST_CASE("nine-level lab run") {
  auto c = with_frame(preset("fig3b_caption"), Frame::lab);
  c.model = ModelKind::nv_full;
  c.grid.t_end = 0.2;
  const auto r = run_scenario(c);
  CHECK(r.series.populations.front().size() == 9);
  CHECK(r.series.worst_trace_error <= 1e-9);
  CHECK(r.series.worst_min_eigenvalue >= -1e-6);
  CHECK(r.metrics.max_leakage <= 1e-2);
}

TEST_CASE("propagation failure names the scenario") {
  auto c = preset("fig3a");
  c.t2_us = 1e-3;
  c.grid.dt = 0.01;
  c.grid.record_stride = 1;
  c.grid.t_end = 1.0;
  try {
    run_scenario(c);
    FAIL("expected IntegrationFailure");
  } catch (const IntegrationFailure& e) {
    CHECK(std::string(e.what()).find("fig3a") != std::string::npos);
    CHECK(e.time_us() > 0.0);
  }
}

TEST_CASE("config round trip") {
  for (const auto& n : preset_names()) {
    const auto c = preset(n);
    const std::string text = serialize_config(c);
    CHECK(parse_config(text) == c);
    CHECK(serialize_config(parse_config(text)) == text);
  }
  auto c = preset("fig5b");
  c.seed = 18446744073709551615ULL;
  c.mw.carrier = 1234.5678901234567;
  c.initial.kind = InitialKind::amplitudes;
  c.initial.amplitudes = {cplx(0.1, -0.2), cplx(0.3), cplx(0.0, 1e-17), cplx(-0.7, 0.0)};
  c.outputs.discord_options.log_base = LogBase::two;
  c.outputs.discord_options.measured = Subsystem::second;
  CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("config parse errors name the key") {
  auto expect_key = [](const std::string& text, const std::string& key) {
    try {
      parse_config(text);
      FAIL("expected ConfigError for " << key);
    } catch (const ConfigError& e) {
      CHECK(e.field() == key);
    }
  };
  expect_key("nv.bz = 500\n", "nv.bz");
  expect_key("mw.rabi = 4\nmw.rabi = 5\n", "mw.rabi");
  expect_key("mw.rabi = four\n", "mw.rabi");
  expect_key("model = nv_huge\n", "model");
  expect_key("noise.n_tones = -3\n", "noise.n_tones");
  expect_key("outputs.discord = yes\n", "outputs.discord");
  expect_key("initial.amplitude[2] = 1\n", "initial.amplitude[2]");

  const auto c = parse_config("# comment\n\nname = tiny\nmw.rabi = 4\nrf.rabi = 0.04\ngrid.t_end = 1\n");
  CHECK(c.name == "tiny");
  CHECK(c.mw.rabi == 4.0);
  CHECK(c.rf.rabi == 0.04);
  CHECK(c.grid.t_end == 1.0);

  CHECK_THROWS_AS(load_config("/nonexistent/dir/cfg.txt"), IoError);
}
