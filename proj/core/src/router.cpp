#include "patchroute/router.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace patchroute {

double kernel_eval(const OverlapKernel& kernel, double dx, double dy) {
    if (kernel.shape == KernelShape::Linear) {
        const double kx = std::max(0.0, 1.0 - std::abs(dx) / kernel.pw_grid);
        const double ky = std::max(0.0, 1.0 - std::abs(dy) / kernel.ph_grid);
        return kx * ky;
    }
    const double sx = kernel.pw_grid / 2.0;
    const double sy = kernel.ph_grid / 2.0;
    return std::exp(-dx * dx / (2.0 * sx * sx) - dy * dy / (2.0 * sy * sy));
}

std::vector<PixelRect> PatchSelection::rects() const {
    std::vector<PixelRect> out;
    out.reserve(entries.size());
    for (const Entry& e : entries) out.push_back(e.rect);
    return out;
}

namespace {

struct WorkingMap {
    const GridSpec& grid;
    std::vector<double> values;
    std::vector<char> taken;

    explicit WorkingMap(const GainMap& gain)
        : grid(gain.grid), values(gain.values), taken(gain.values.size(), 0) {}

    // Argmax over untaken cells; on ties the smallest row-major index wins.
    // With an all-zero remainder this lands on the smallest untaken cell.
    GridCoord argmax() const {
        std::size_t best = std::size_t(-1);
        double best_value = -1.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (taken[i]) continue;
            if (values[i] > best_value) {
                best_value = values[i];
                best = i;
            }
        }
        const int gy = static_cast<int>(best) / grid.grid_w;
        const int gx = static_cast<int>(best) % grid.grid_w;
        return {gx, gy};
    }
};

void check_budget(const GainMap& gain, const RouterConfig& config) {
    if (config.budget < 1) {
        throw std::invalid_argument("router: budget must be >= 1");
    }
    if (config.budget > gain.grid.cell_count()) {
        throw std::invalid_argument("router: budget " + std::to_string(config.budget) +
                                    " exceeds " + std::to_string(gain.grid.cell_count()) +
                                    " grid cells");
    }
}

PatchSelection greedy_select(const GainMap& gain, const RouterConfig& config, bool rigid) {
    check_budget(gain, config);
    const GridSpec& grid = gain.grid;
    const KernelShape shape =
        config.strategy == Strategy::SoftGaussian ? KernelShape::Gaussian : KernelShape::Linear;
    const OverlapKernel kernel = OverlapKernel::for_patch(grid, config.patch, shape);

    WorkingMap work(gain);
    PatchSelection selection;
    selection.entries.reserve(static_cast<std::size_t>(config.budget));

    for (int k = 1; k <= config.budget; ++k) {
        const GridCoord c = work.argmax();
        const std::size_t ci = grid.index(c.gx, c.gy);
        const double value = work.values[ci];

        if (value > 0.0) {
            // Neighborhood |dx| <= pw, |dy| <= ph clipped to the grid.
            const int x_lo = std::max(0, static_cast<int>(std::ceil(c.gx - kernel.pw_grid)));
            const int x_hi = std::min(grid.grid_w - 1,
                                      static_cast<int>(std::floor(c.gx + kernel.pw_grid)));
            const int y_lo = std::max(0, static_cast<int>(std::ceil(c.gy - kernel.ph_grid)));
            const int y_hi = std::min(grid.grid_h - 1,
                                      static_cast<int>(std::floor(c.gy + kernel.ph_grid)));
            for (int gy = y_lo; gy <= y_hi; ++gy) {
                for (int gx = x_lo; gx <= x_hi; ++gx) {
                    const std::size_t i = grid.index(gx, gy);
                    if (rigid) {
                        if (std::abs(gx - c.gx) < kernel.pw_grid &&
                            std::abs(gy - c.gy) < kernel.ph_grid) {
                            work.values[i] = 0.0;
                        }
                    } else {
                        const double penalty =
                            value * kernel_eval(kernel, gx - c.gx, gy - c.gy);
                        work.values[i] = std::max(0.0, work.values[i] - penalty);
                    }
                }
            }
        }
        // Zeroed unconditionally so an exhausted map cannot re-select a cell.
        work.values[ci] = 0.0;
        work.taken[ci] = 1;

        selection.entries.push_back(
            {k, c.gx, c.gy, value, patch_rect_at(grid, config.patch, c.gx, c.gy)});
    }
    return selection;
}

} // namespace

PatchSelection soft_subtract_select(const GainMap& gain, const RouterConfig& config) {
    return greedy_select(gain, config, /*rigid=*/false);
}

PatchSelection rigid_nms_select(const GainMap& gain, const RouterConfig& config) {
    return greedy_select(gain, config, /*rigid=*/true);
}

PatchSelection route(const GainMap& gain, const RouterConfig& config) {
    if (config.strategy == Strategy::RigidNms) {
        return rigid_nms_select(gain, config);
    }
    return soft_subtract_select(gain, config);
}

int query_budget(const GainMap& gain, const PatchSpec& patch, const QueryBudgetRule& rule) {
    const OverlapKernel k = OverlapKernel::for_patch(gain.grid, patch, KernelShape::Linear);
    const double normalized = gain.sum() / (k.pw_grid * k.ph_grid);
    const long rounded = std::lround(rule.scale * normalized);
    return static_cast<int>(
        std::clamp(rounded, static_cast<long>(rule.min_queries), static_cast<long>(rule.max_queries)));
}

} // namespace patchroute
