#pragma once

#include "patchroute/coverage.hpp"
#include "patchroute/gainmap.hpp"
#include "patchroute/router.hpp"
#include "patchroute/synthetic.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace patchroute::cli {

enum class CliStrategy { SoftLinear, SoftGaussian, RigidNms, ExactGreedy };

std::string strategy_name(CliStrategy s);

struct RunConfig {
    int grid_stride = 64; // px per gain-map cell; 8192 -> 128x128 grid
    PatchSpec patch{512, 512};
    int budget = 40;
    CliStrategy strategy = CliStrategy::SoftLinear;
    BinConfig bins{6};
    double margin = 0.05;
    CoverageCriterion criterion{0.5};
    QueryBudgetRule queries{};
    int tile_target = 8192;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";
    bool verify = false;
    int jobs = 0; // 0 = all logical cores

    // synthetic dataset (compare/curve/oracle fixtures)
    bool synthetic = false;
    int synth_scenes = 100;
    ClusterSceneParams cluster{};

    // sweep axes for compare
    int k_max = 60;
    std::vector<std::pair<int, int>> patch_sweep = {{256, 160}, {512, 40}, {1024, 10}};
};

/// Grid laid over one scene at the configured stride (at least one cell).
inline GridSpec grid_for(const ImageExtent& extent, int stride) {
    return {std::max(1, extent.width_px / stride), std::max(1, extent.height_px / stride), extent};
}

/// A patch larger than the image breaks the candidate-rect geometry; treated
/// as a configuration error.
inline void check_patch(const PatchSpec& patch, const ImageExtent& extent,
                        const std::string& scene_name) {
    if (patch.patch_w_px > extent.width_px || patch.patch_h_px > extent.height_px) {
        throw std::invalid_argument("patch " + std::to_string(patch.patch_w_px) + "x" +
                                    std::to_string(patch.patch_h_px) + " exceeds the " +
                                    std::to_string(extent.width_px) + "x" +
                                    std::to_string(extent.height_px) + " extent of " +
                                    scene_name);
    }
}

} // namespace patchroute::cli
