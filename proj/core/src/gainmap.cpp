#include "patchroute/gainmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace patchroute {

double GainMap::sum() const {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

double GainMap::max_value() const {
    double best = 0.0;
    for (double v : values) best = std::max(best, v);
    return best;
}

GainMap build_gt_gainmap(std::span<const BBox> boxes, const GridSpec& grid,
                         const PatchSpec& patch, const BinConfig& bins) {
    GainMap map = GainMap::zeros(grid);
    const double cap = bins.cap();
    for (int gy = 0; gy < grid.grid_h; ++gy) {
        for (int gx = 0; gx < grid.grid_w; ++gx) {
            const PixelRect rect = patch_rect_at(grid, patch, gx, gy);
            double raw = 0.0;
            for (const BBox& box : boxes) {
                raw += iof(box, rect);
            }
            map.at(gx, gy) = std::min(raw, cap);
        }
    }
    return map;
}

namespace {

// 1D overlap between the clamped patch interval centered on cell i and the box
// interval [b1, b2]. Mirrors one axis of the rect intersection in iof().
double axis_overlap(double center, double half_patch, double image_len, double b1, double b2) {
    const double p1 = std::max(center - half_patch, 0.0);
    const double p2 = std::min(center + half_patch, image_len);
    const double o = std::min(b2, p2) - std::max(b1, p1);
    return o > 0.0 ? o : 0.0;
}

// Index range of cells whose patch rect can overlap [b1, b2] along one axis.
// Cell centers are (i + 0.5) * stride; overlap requires
// b1 - half_patch < center < b2 + half_patch.
std::pair<int, int> cell_range(double b1, double b2, double half_patch, double stride, int cells) {
    int lo = static_cast<int>(std::floor((b1 - half_patch) / stride - 0.5));
    int hi = static_cast<int>(std::ceil((b2 + half_patch) / stride - 0.5));
    lo = std::clamp(lo, 0, cells - 1);
    hi = std::clamp(hi, 0, cells - 1);
    return {lo, hi};
}

} // namespace

GainMap build_gt_gainmap_fast(std::span<const BBox> boxes, const GridSpec& grid,
                              const PatchSpec& patch, const BinConfig& bins) {
    GainMap map = GainMap::zeros(grid);
    const double sx = grid.stride_x();
    const double sy = grid.stride_y();
    const double half_w = patch.patch_w_px / 2.0;
    const double half_h = patch.patch_h_px / 2.0;
    const double img_w = grid.extent.width_px;
    const double img_h = grid.extent.height_px;

    std::vector<double> ox;
    std::vector<double> oy;
    for (const BBox& box : boxes) {
        const double box_area = box.area();
        if (!(box_area > 0.0)) {
            throw std::invalid_argument("build_gt_gainmap_fast: box must have positive area");
        }
        const auto [x_lo, x_hi] = cell_range(box.x_min, box.x_max, half_w, sx, grid.grid_w);
        const auto [y_lo, y_hi] = cell_range(box.y_min, box.y_max, half_h, sy, grid.grid_h);

        ox.assign(static_cast<std::size_t>(x_hi - x_lo + 1), 0.0);
        for (int gx = x_lo; gx <= x_hi; ++gx) {
            ox[gx - x_lo] = axis_overlap((gx + 0.5) * sx, half_w, img_w, box.x_min, box.x_max);
        }
        oy.assign(static_cast<std::size_t>(y_hi - y_lo + 1), 0.0);
        for (int gy = y_lo; gy <= y_hi; ++gy) {
            oy[gy - y_lo] = axis_overlap((gy + 0.5) * sy, half_h, img_h, box.y_min, box.y_max);
        }

        for (int gy = y_lo; gy <= y_hi; ++gy) {
            const double oyv = oy[gy - y_lo];
            if (oyv <= 0.0) continue;
            double* row = map.values.data() + grid.index(0, gy);
            for (int gx = x_lo; gx <= x_hi; ++gx) {
                row[gx] += (ox[gx - x_lo] * oyv) / box_area;
            }
        }
    }

    const double cap = bins.cap();
    for (double& v : map.values) v = std::min(v, cap);
    return map;
}

double decode_expectation(std::span<const double> logits) {
    if (logits.empty()) {
        throw std::invalid_argument("decode_expectation: empty logits");
    }
    double z_max = logits[0];
    for (double z : logits) {
        if (!std::isfinite(z)) {
            throw std::invalid_argument("decode_expectation: non-finite logit");
        }
        z_max = std::max(z_max, z);
    }
    // Ratio form: uniform logits decode to the exact bin-square mean.
    double numer = 0.0;
    double denom = 0.0;
    for (std::size_t b = 0; b < logits.size(); ++b) {
        const double e = std::exp(logits[b] - z_max);
        numer += static_cast<double>(b) * static_cast<double>(b) * e;
        denom += e;
    }
    const double cap = static_cast<double>(logits.size() - 1) * static_cast<double>(logits.size() - 1);
    return std::clamp(numer / denom, 0.0, cap);
}

DflTarget dfl_target_weights(double g, const BinConfig& bins) {
    if (!(g >= 0.0) || g > bins.cap()) {
        throw std::invalid_argument("dfl_target_weights: target " + std::to_string(g) +
                                    " outside [0, " + std::to_string(bins.cap()) + "]");
    }
    const double t = std::sqrt(g);
    const int lo = std::min(static_cast<int>(std::floor(t)), bins.bin_limit);
    const int hi = std::min(lo + 1, bins.bin_limit);
    const double w_hi = t - lo;
    return {lo, hi, 1.0 - w_hi, w_hi};
}

namespace {

constexpr std::array<GridCoord, 4> kNeighborShifts = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

} // namespace

PeakSet extract_peaks(const GainMap& gt) {
    PeakSet peaks;
    const GridSpec& grid = gt.grid;
    for (int gy = 0; gy < grid.grid_h; ++gy) {
        for (int gx = 0; gx < grid.grid_w; ++gx) {
            const double v = gt.at(gx, gy);
            if (!(v > 0.0)) continue;
            bool is_peak = true;
            for (const GridCoord& d : kNeighborShifts) {
                const int nx = gx + d.gx;
                const int ny = gy + d.gy;
                if (grid.contains(nx, ny) && gt.at(nx, ny) > v) {
                    is_peak = false;
                    break;
                }
            }
            if (is_peak) peaks.push_back({gx, gy});
        }
    }
    return peaks;
}

double lpm_loss(const GainMap& pred, const PeakSet& peaks, double margin) {
    if (peaks.empty()) return 0.0;
    const GridSpec& grid = pred.grid;
    double total = 0.0;
    for (const GridCoord& p : peaks) {
        if (!grid.contains(p.gx, p.gy)) {
            throw std::out_of_range("lpm_loss: peak outside grid");
        }
        const double peak_value = pred.at(p.gx, p.gy);
        double sum = 0.0;
        int degree = 0;
        for (const GridCoord& d : kNeighborShifts) {
            const int nx = p.gx + d.gx;
            const int ny = p.gy + d.gy;
            if (!grid.contains(nx, ny)) continue;
            ++degree;
            sum += std::max(0.0, pred.at(nx, ny) + margin - peak_value);
        }
        if (degree > 0) total += sum / degree;
    }
    return total / static_cast<double>(peaks.size());
}

std::vector<double> lpm_subgradient(const GainMap& pred, const PeakSet& peaks, double margin) {
    std::vector<double> grad(pred.values.size(), 0.0);
    if (peaks.empty()) return grad;
    const GridSpec& grid = pred.grid;
    const double inv_peaks = 1.0 / static_cast<double>(peaks.size());
    for (const GridCoord& p : peaks) {
        if (!grid.contains(p.gx, p.gy)) {
            throw std::out_of_range("lpm_subgradient: peak outside grid");
        }
        const double peak_value = pred.at(p.gx, p.gy);
        int degree = 0;
        for (const GridCoord& d : kNeighborShifts) {
            if (grid.contains(p.gx + d.gx, p.gy + d.gy)) ++degree;
        }
        if (degree == 0) continue;
        const double unit = inv_peaks / degree;
        for (const GridCoord& d : kNeighborShifts) {
            const int nx = p.gx + d.gx;
            const int ny = p.gy + d.gy;
            if (!grid.contains(nx, ny)) continue;
            // Active only strictly past the hinge; the boundary itself uses
            // the zero branch.
            if (pred.at(nx, ny) + margin - peak_value > 0.0) {
                grad[grid.index(nx, ny)] += unit;
                grad[grid.index(p.gx, p.gy)] -= unit;
            }
        }
    }
    return grad;
}

} // namespace patchroute
