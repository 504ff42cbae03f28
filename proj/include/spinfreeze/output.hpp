#pragma once

// CSV and SVG writers for scenario results. All writers produce identical
// bytes for identical input.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spinfreeze/discord.hpp"
#include "spinfreeze/dynamics.hpp"

namespace spinfreeze {

/// Header t_us,P_gg,P_ge,P_eg,P_ee[,P_gN,P_eN],trace_err,min_eig; one row per
/// record, %.16e numbers, '\n' line ends. Nine-level series report the
/// two-qubit subspace populations.
void write_populations_csv(std::ostream& out, const TimeSeries& series, bool nuclear_marginal);

/// Header t_us,mutual_info,classical_corr,discord.
void write_discord_csv(std::ostream& out, const DiscordTrace& trace);

struct PlotCurve {
  std::string label;
  std::vector<double> values;
};

/// Standalone SVG line plot: axes with ticks, one polyline per curve, legend.
/// Curves longer than 2000 points are thinned with a fixed stride.
std::string render_svg(const std::vector<double>& t_us, const std::vector<PlotCurve>& curves,
                       const std::string& y_label, const std::string& title);

/// The four reduced populations of a series, labelled as in the CSV.
std::vector<PlotCurve> population_curves(const TimeSeries& series);

/// Writes `content` to `path`; throws IoError.
void write_file(const std::string& path, const std::string& content);

void emit_csv(const TimeSeries& series, const std::string& path, bool nuclear_marginal = false);
void emit_discord_csv(const DiscordTrace& trace, const std::string& path);
void emit_svg(const TimeSeries& series, const std::string& path, const std::string& title = "");

}  // namespace spinfreeze
