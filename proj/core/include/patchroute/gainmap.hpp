#pragma once

#include "patchroute/geometry.hpp"

#include <span>
#include <vector>

namespace patchroute {

/// Discrete bin configuration for the classification-based gain decoding.
/// Scores live on [0, cap] with cap = bin_limit^2.
struct BinConfig {
    int bin_limit = 6;

    double cap() const { return static_cast<double>(bin_limit) * bin_limit; }
};

/// Non-negative score per grid cell, row-major. Ground-truth maps built from
/// annotations are additionally capped at BinConfig::cap().
struct GainMap {
    GridSpec grid;
    std::vector<double> values;

    static GainMap zeros(const GridSpec& grid) {
        return {grid, std::vector<double>(static_cast<std::size_t>(grid.cell_count()), 0.0)};
    }

    double at(int gx, int gy) const { return values[grid.index(gx, gy)]; }
    double& at(int gx, int gy) { return values[grid.index(gx, gy)]; }
    double sum() const;
    double max_value() const;
};

/// Set of grid peak locations, sorted in row-major order.
using PeakSet = std::vector<GridCoord>;

/// Ground-truth gain map: per cell, the capped sum of per-box IoF values with
/// the candidate patch rect at that cell,
///   G(gx,gy) = min(sum_i IoF(box_i, patch_rect_at(gx,gy)), cap).
/// Reference implementation, O(boxes * cells). Throws std::invalid_argument
/// on a zero-area box.
GainMap build_gt_gainmap(std::span<const BBox> boxes, const GridSpec& grid,
                         const PatchSpec& patch, const BinConfig& bins);

/// Same output as build_gt_gainmap (within 1e-6 per cell) computed by sweeping
/// each box over only the cells whose patch rect can touch it. The per-box
/// pixel overlap is separable, overlap(gx,gy) = ox(gx) * oy(gy), so one box
/// costs two 1D overlap profiles plus their outer product over a small window
/// instead of a full pass over the grid.
GainMap build_gt_gainmap_fast(std::span<const BBox> boxes, const GridSpec& grid,
                              const PatchSpec& patch, const BinConfig& bins);

/// Expected score of a discrete bin distribution: sum_b b^2 * softmax(z)_b,
/// with M + 1 = z.size() bins. Result clamped to [0, M^2]. Throws
/// std::invalid_argument on empty or non-finite logits.
double decode_expectation(std::span<const double> logits);

struct DflTarget {
    int bin_lo = 0;
    int bin_hi = 0;
    double weight_lo = 0.0;
    double weight_hi = 0.0;
};

/// Two-bin interpolation of a continuous target g onto the bin axis t = sqrt(g):
/// bin_lo = floor(t), bin_hi = min(bin_lo + 1, M), weight_hi = t - bin_lo.
/// Throws std::invalid_argument when g is outside [0, cap].
DflTarget dfl_target_weights(double g, const BinConfig& bins);

/// Ground-truth peaks: cells with positive value that are >= all in-bounds
/// 4-neighbors (non-strict, so plateaus stay represented).
PeakSet extract_peaks(const GainMap& gt);

/// Local peak margin penalty,
///   (1/|peaks|) * sum_p mean_{q in 4-neighborhood(p)} max(0, pred_q + margin - pred_p),
/// averaged over in-bounds neighbors so border peaks are not down-weighted.
/// Returns 0 for an empty peak set.
double lpm_loss(const GainMap& pred, const PeakSet& peaks, double margin);

/// Subgradient of lpm_loss w.r.t. every cell of pred, same row-major layout.
/// Hinge terms exactly at their boundary take the inactive (zero) branch.
std::vector<double> lpm_subgradient(const GainMap& pred, const PeakSet& peaks, double margin);

} // namespace patchroute
