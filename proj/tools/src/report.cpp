#include "report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace patchroute::cli {

std::string fmt_g9(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", v);
    return buffer;
}

std::string sanitize_name(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
        out.push_back(ok ? c : '_');
    }
    if (out.empty()) out = "scene";
    return out;
}

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 56;
constexpr int kMarginBottom = 52;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::ofstream open_svg(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return out;
}

void write_frame(std::ofstream& out, const std::string& title, const std::string& subtitle,
                 const std::string& x_label, const std::string& y_label) {
    const int x0 = kMarginLeft;
    const int y0 = kHeight - kMarginBottom;
    const int x1 = kWidth - kMarginRight;
    const int y1 = kMarginTop;
    out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" font-size=\"15\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\">" << title << "</text>\n";
    if (!subtitle.empty()) {
        out << "<text x=\"" << kWidth / 2 << "\" y=\"38\" font-size=\"11\" fill=\"#555\" "
            << "text-anchor=\"middle\" font-family=\"sans-serif\">" << subtitle << "</text>\n";
    }
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 14
        << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">" << x_label
        << "</text>\n"
        << "<text x=\"16\" y=\"" << (y0 + y1) / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 16 " << (y0 + y1) / 2 << ")\">" << y_label << "</text>\n";
}

} // namespace

void write_svg_line_chart(const std::filesystem::path& path, const std::string& title,
                          const std::string& subtitle, const std::string& x_label,
                          const std::string& y_label, const std::vector<Series>& series) {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const Series& s : series) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            }
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;
    y_min = std::min(y_min, 0.0);

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto px = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    const auto py = [&](double y) {
        return kHeight - kMarginBottom - (y - y_min) / (y_max - y_min) * plot_h;
    };

    std::ofstream out = open_svg(path);
    write_frame(out, title, subtitle, x_label, y_label);
    // axis extremes
    out << "<text x=\"" << kMarginLeft << "\" y=\"" << kHeight - kMarginBottom + 16
        << "\" font-size=\"10\" font-family=\"sans-serif\">" << fmt_g9(x_min) << "</text>\n"
        << "<text x=\"" << kWidth - kMarginRight << "\" y=\"" << kHeight - kMarginBottom + 16
        << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt_g9(x_max)
        << "</text>\n"
        << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kMarginTop + 4
        << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt_g9(y_max)
        << "</text>\n"
        << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kHeight - kMarginBottom
        << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt_g9(y_min)
        << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (const auto& [x, y] : series[i].points) {
            out << fmt_g9(px(x)) << ',' << fmt_g9(py(y)) << ' ';
        }
        out << "\"/>\n";
        const int ly = kMarginTop + 14 + static_cast<int>(i) * 16;
        out << "<line x1=\"" << kWidth - 190 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - 166
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kWidth - 160 << "\" y=\"" << ly + 4
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << series[i].label
            << "</text>\n";
    }
    out << "</svg>\n";
}

void write_svg_bar_chart(const std::filesystem::path& path, const std::string& title,
                         const std::string& subtitle, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<std::pair<std::string, double>>& bars) {
    double y_max = 1.0;
    for (const auto& [label, v] : bars) y_max = std::max(y_max, v);

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const double slot = bars.empty() ? plot_w : plot_w / static_cast<double>(bars.size());

    std::ofstream out = open_svg(path);
    write_frame(out, title, subtitle, x_label, y_label);
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kMarginTop + 4
        << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt_g9(y_max)
        << "</text>\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double h = bars[i].second / y_max * plot_h;
        const double x = kMarginLeft + static_cast<double>(i) * slot + slot * 0.125;
        out << "<rect x=\"" << fmt_g9(x) << "\" y=\"" << fmt_g9(kHeight - kMarginBottom - h)
            << "\" width=\"" << fmt_g9(slot * 0.75) << "\" height=\"" << fmt_g9(h)
            << "\" fill=\"#1f77b4\"/>\n";
        if (bars.size() <= 24 || i % (bars.size() / 12) == 0) {
            out << "<text x=\"" << fmt_g9(x + slot * 0.375) << "\" y=\""
                << kHeight - kMarginBottom + 14
                << "\" font-size=\"9\" text-anchor=\"middle\" font-family=\"sans-serif\">"
                << bars[i].first << "</text>\n";
        }
    }
    out << "</svg>\n";
}

} // namespace patchroute::cli
