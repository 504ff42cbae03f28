#include <doctest.h>

#include <sstream>

#include "spinfreeze/output.hpp"

using namespace spinfreeze;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

TimeSeries tiny() {
  TimeSeries s;
  s.times = {0.0, 0.5};
  s.populations = {{1, 0, 0, 0}, {0.25, 0.25, 0.25, 0.25}};
  s.trace_error = {0.0, 1e-15};
  s.min_eigenvalue = {0.0, -1e-12};
  s.hermiticity_error = {0.0, 0.0};
  return s;
}

}  // namespace

TEST_CASE("population csv") {
  std::ostringstream out;
  write_populations_csv(out, tiny(), false);
  CHECK(out.str() ==
        "t_us,P_gg,P_ge,P_eg,P_ee,trace_err,min_eig\n"
        "0.0000000000000000e+00,1.0000000000000000e+00,0.0000000000000000e+00,0.0000000000000000e+00,"
        "0.0000000000000000e+00,0.0000000000000000e+00,0.0000000000000000e+00\n"
        "5.0000000000000000e-01,2.5000000000000000e-01,2.5000000000000000e-01,2.5000000000000000e-01,"
        "2.5000000000000000e-01,1.0000000000000001e-15,-9.9999999999999998e-13\n");

  std::ostringstream nuc;
  write_populations_csv(nuc, tiny(), true);
  CHECK(nuc.str().find("P_gN,P_eN") != std::string::npos);
  CHECK(nuc.str().find("5.0000000000000000e-01,5.0000000000000000e-01,1.0000000000000001e-15") != std::string::npos);
}

TEST_CASE("nine-level csv reports the two-qubit subspace") {
  TimeSeries s;
  s.times = {0.0};
  std::vector<double> p(9, 0.0);
  p[3] = 0.7;
  p[7] = 0.2;
  p[0] = 0.1;
  s.populations = {p};
  s.trace_error = {0.0};
  s.min_eigenvalue = {0.0};
  s.hermiticity_error = {0.0};
  std::ostringstream out;
  write_populations_csv(out, s, false);
  CHECK(out.str().find("\n0.0000000000000000e+00,6.9999999999999996e-01,0.0000000000000000e+00,0.0000000000000000e+00,"
                       "2.0000000000000001e-01,") != std::string::npos);
}

TEST_CASE("svg plot") {
  const auto s = tiny();
  const auto svg = render_svg(s.times, population_curves(s), "population", "demo");
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count(svg, "class=\"series\"") == 4);
  CHECK(svg.find("demo") != std::string::npos);
  CHECK(svg.find("P_ee") != std::string::npos);
  CHECK(svg == render_svg(s.times, population_curves(s), "population", "demo"));

  const auto empty = render_svg({}, {}, "population", "");
  CHECK(empty.find("<svg") != std::string::npos);
  CHECK(count(empty, "class=\"series\"") == 0);

  std::vector<double> t(10000), y(10000);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = y[k] = static_cast<double>(k);
  const auto big = render_svg(t, {{"y", y}}, "y", "");
  CHECK(count(big, ",") <= 2100);
}
