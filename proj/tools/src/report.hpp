#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace patchroute::cli {

/// 9-significant-digit decimal rendering used for every CSV number, so
/// repeated runs are byte-identical.
std::string fmt_g9(double v);

/// Filesystem-safe stem derived from a scene name.
std::string sanitize_name(const std::string& name);

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Minimal deterministic SVG line chart (fixed palette, no timestamps).
void write_svg_line_chart(const std::filesystem::path& path, const std::string& title,
                          const std::string& subtitle, const std::string& x_label,
                          const std::string& y_label, const std::vector<Series>& series);

/// Vertical bar chart for per-rank marginal gains and rate histograms.
void write_svg_bar_chart(const std::filesystem::path& path, const std::string& title,
                         const std::string& subtitle, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<std::pair<std::string, double>>& bars);

} // namespace patchroute::cli
