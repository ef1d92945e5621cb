#pragma once

#include "patchroute/gainmap.hpp"

#include <vector>

namespace patchroute {

enum class KernelShape { Linear, Gaussian };

/// Spatial overlap penalty kernel in grid units. pw_grid / ph_grid are the
/// patch dimensions projected onto the gain-map grid (real-valued).
/// Linear:   max(0, 1 - |dx|/pw) * max(0, 1 - |dy|/ph)
/// Gaussian: exp(-dx^2/(2*sx^2) - dy^2/(2*sy^2)), sx = pw/2, sy = ph/2,
/// chosen so the 1-sigma width matches the linear kernel's half support.
struct OverlapKernel {
    double pw_grid = 0.0;
    double ph_grid = 0.0;
    KernelShape shape = KernelShape::Linear;

    static OverlapKernel for_patch(const GridSpec& grid, const PatchSpec& patch,
                                   KernelShape shape) {
        return {static_cast<double>(patch.patch_w_px) * grid.grid_w / grid.extent.width_px,
                static_cast<double>(patch.patch_h_px) * grid.grid_h / grid.extent.height_px,
                shape};
    }
};

double kernel_eval(const OverlapKernel& kernel, double dx, double dy);

/// Ordered routing result: ranks 1..K, pairwise-distinct centers,
/// non-increasing non-negative scores, and the candidate patch rect of each
/// chosen cell.
struct PatchSelection {
    struct Entry {
        int rank = 0;
        int gx = 0;
        int gy = 0;
        double score = 0.0;
        PixelRect rect;
    };
    std::vector<Entry> entries;

    PatchSelection prefix(int k) const {
        PatchSelection out;
        out.entries.assign(entries.begin(),
                           entries.begin() + std::min<std::size_t>(k, entries.size()));
        return out;
    }
    std::vector<PixelRect> rects() const;
};

enum class Strategy { SoftLinear, SoftGaussian, RigidNms };

struct RouterConfig {
    int budget = 40;
    PatchSpec patch{512, 512};
    Strategy strategy = Strategy::SoftLinear;
};

/// Greedy peak picking with soft suppression. Each of K iterations takes the
/// argmax cell (ties broken by smallest row-major index), records its value,
/// discounts the neighborhood |dx| <= pw, |dy| <= ph by value * kernel with a
/// clamp at zero, and zeroes the chosen center. When the map is exhausted the
/// remaining entries carry score 0 at the smallest-index cells not yet taken,
/// so the result always has exactly K distinct centers. The input map is not
/// mutated. Throws std::invalid_argument when K exceeds the cell count.
PatchSelection soft_subtract_select(const GainMap& gain, const RouterConfig& config);

/// Baseline: same greedy loop but every pick hard-zeroes the cells strictly
/// inside the kernel support (|dx| < pw and |dy| < ph), so selected patches
/// never overlap.
PatchSelection rigid_nms_select(const GainMap& gain, const RouterConfig& config);

/// Dispatch on config.strategy.
PatchSelection route(const GainMap& gain, const RouterConfig& config);

/// Decoder query budget, proportional to the spatial gain sum.
struct QueryBudgetRule {
    double scale = 1.0;
    int min_queries = 300;
    int max_queries = 3000;
};

/// clamp(round(scale * sum(gain) / (pw_grid * ph_grid)), min, max). The patch
/// area in grid cells normalizes the sum: one object contributes IoF mass to
/// roughly that many overlapping candidates.
int query_budget(const GainMap& gain, const PatchSpec& patch, const QueryBudgetRule& rule);

} // namespace patchroute
