#include "spinfreeze/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "spinfreeze/error.hpp"
#include "spinfreeze/experiments.hpp"

namespace spinfreeze {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string px(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// 1, 2 or 5 times a power of ten, giving about five intervals.
double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
constexpr std::size_t kMaxPoints = 2000;

}  // namespace

void write_populations_csv(std::ostream& out, const TimeSeries& series, bool nuclear_marginal) {
  out << "t_us,P_gg,P_ge,P_eg,P_ee";
  if (nuclear_marginal) out << ",P_gN,P_eN";
  out << ",trace_err,min_eig\n";
  const auto reduced = reduced_populations(series);
  const auto nuc = nuclear_marginal ? nuclear_populations(series) : std::vector<std::array<double, 2>>{};
  for (std::size_t k = 0; k < series.size(); ++k) {
    out << num(series.times[k]);
    for (double p : reduced[k]) out << ',' << num(p);
    if (nuclear_marginal) out << ',' << num(nuc[k][0]) << ',' << num(nuc[k][1]);
    out << ',' << num(series.trace_error[k]) << ',' << num(series.min_eigenvalue[k]) << '\n';
  }
}

void write_discord_csv(std::ostream& out, const DiscordTrace& trace) {
  out << "t_us,mutual_info,classical_corr,discord\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const auto& v = trace.values[k];
    out << num(trace.times[k]) << ',' << num(v.mutual_info) << ',' << num(v.classical_corr) << ',' << num(v.discord)
        << '\n';
  }
}

std::vector<PlotCurve> population_curves(const TimeSeries& series) {
  std::vector<PlotCurve> curves = {{"P_gg", {}}, {"P_ge", {}}, {"P_eg", {}}, {"P_ee", {}}};
  for (const auto& p : reduced_populations(series))
    for (std::size_t i = 0; i < 4; ++i) curves[i].values.push_back(p[i]);
  return curves;
}

std::string render_svg(const std::vector<double>& t_us, const std::vector<PlotCurve>& curves,
                       const std::string& y_label, const std::string& title) {
  const double width = 720, height = 440;
  const double left = 70, right = 150, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  double t0 = 0.0, t1 = 1.0;
  if (!t_us.empty()) {
    t0 = t_us.front();
    t1 = std::max(t_us.back(), t0 + 1e-12);
  }
  double y0 = 0.0, y1 = 1.0;
  for (const auto& c : curves)
    for (double v : c.values) {
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  auto sx = [&](double t) { return left + (t - t0) / (t1 - t0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    s << "<text x=\"" << px(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
      << "</text>\n";

  s << "<g stroke=\"black\" fill=\"none\">\n"
    << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\"" << px(pw) << "\" height=\"" << px(ph)
    << "\"/>\n</g>\n";

  s << "<g class=\"x-ticks\">\n";
  const double xs = nice_step(t1 - t0);
  for (double t = std::ceil(t0 / xs) * xs; t <= t1 + 1e-9 * xs; t += xs) {
    const double x = sx(t);
    s << "<line x1=\"" << px(x) << "\" y1=\"" << px(top + ph) << "\" x2=\"" << px(x) << "\" y2=\"" << px(top + ph + 5)
      << "\" stroke=\"black\"/>"
      << "<text x=\"" << px(x) << "\" y=\"" << px(top + ph + 18) << "\" text-anchor=\"middle\">"
      << tick_label(std::abs(t) < 1e-12 * xs ? 0.0 : t) << "</text>\n";
  }
  s << "</g>\n<g class=\"y-ticks\">\n";
  const double ys = nice_step(y1 - y0);
  for (double y = std::ceil(y0 / ys) * ys; y <= y1 + 1e-9 * ys; y += ys) {
    const double yy = sy(y);
    s << "<line x1=\"" << px(left - 5) << "\" y1=\"" << px(yy) << "\" x2=\"" << px(left) << "\" y2=\"" << px(yy)
      << "\" stroke=\"black\"/>"
      << "<text x=\"" << px(left - 8) << "\" y=\"" << px(yy + 4) << "\" text-anchor=\"end\">"
      << tick_label(std::abs(y) < 1e-12 * ys ? 0.0 : y) << "</text>\n";
  }
  s << "</g>\n";
  s << "<text x=\"" << px(left + pw / 2) << "\" y=\"" << px(height - 15) << "\" text-anchor=\"middle\">t (us)</text>\n"
    << "<text x=\"18\" y=\"" << px(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << px(top + ph / 2) << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& vals = curves[c].values;
    const std::size_t n = std::min(vals.size(), t_us.size());
    const std::size_t stride = n > kMaxPoints ? (n + kMaxPoints - 1) / kMaxPoints : 1;
    const char* color = kPalette[c % std::size(kPalette)];
    s << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t k = 0; k < n; k += stride) {
      if (k) s << ' ';
      s << px(sx(t_us[k])) << ',' << px(sy(vals[k]));
    }
    if (n > 1 && (n - 1) % stride != 0) s << ' ' << px(sx(t_us[n - 1])) << ',' << px(sy(vals[n - 1]));
    s << "\"/>\n";

    const double ly = top + 10 + 20.0 * static_cast<double>(c);
    s << "<line x1=\"" << px(left + pw + 15) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(left + pw + 40) << "\" y2=\""
      << px(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
      << "<text x=\"" << px(left + pw + 46) << "\" y=\"" << px(ly + 4) << "\">" << escape(curves[c].label)
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError(path, "write failed");
}

void emit_csv(const TimeSeries& series, const std::string& path, bool nuclear_marginal) {
  std::ostringstream s;
  write_populations_csv(s, series, nuclear_marginal);
  write_file(path, s.str());
}

void emit_discord_csv(const DiscordTrace& trace, const std::string& path) {
  std::ostringstream s;
  write_discord_csv(s, trace);
  write_file(path, s.str());
}

void emit_svg(const TimeSeries& series, const std::string& path, const std::string& title) {
  write_file(path, render_svg(series.times, population_curves(series), "population", title));
}

}  // namespace spinfreeze
