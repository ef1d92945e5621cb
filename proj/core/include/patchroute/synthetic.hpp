#pragma once

#include "patchroute/coverage.hpp"
#include "patchroute/dataset.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace patchroute {

/// Deterministic RNG for synthetic data. Distributions are derived from raw
/// mt19937_64 output (53-bit uniforms, Box-Muller, Knuth Poisson) instead of
/// <random> distribution objects, which are implementation-defined; the same
/// seed yields the same scenes on every platform.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) {
        return std::min(hi, lo + static_cast<int>(uniform() * (hi - lo + 1)));
    }

    double normal() {
        const double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    }

    int poisson(double mean) {
        const double limit = std::exp(-mean);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

private:
    std::mt19937_64 gen_;
};

/// Matern-style cluster process: cluster centers uniform over the canvas,
/// Poisson box count per cluster, Gaussian scatter of box centers, uniform
/// box sizes. Boxes are clipped to the canvas; boxes left degenerate are
/// discarded. Defaults give clusters wider than one 512 px patch and boxes
/// large enough that disjoint tilings split some of them below the coverage
/// threshold, which is the regime that separates the selection strategies.
struct ClusterSceneParams {
    int image_px = 8192;
    double clusters_mean = 10.0;
    double boxes_per_cluster_mean = 20.0;
    double scatter_sigma_px = 220.0;
    double box_min_px = 200.0;
    double box_max_px = 400.0;
};

Scene make_cluster_scene(int id, const ClusterSceneParams& params, DetRng& rng);

std::vector<Scene> make_cluster_dataset(int scene_count, const ClusterSceneParams& params,
                                        std::uint64_t seed);

/// Random instance within the brute-force oracle bounds: at most 20 boxes,
/// at most 16 candidate rects, budget at most 5.
SmallInstance random_small_instance(DetRng& rng);

} // namespace patchroute
