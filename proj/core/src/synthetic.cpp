#include "patchroute/synthetic.hpp"

#include <algorithm>

namespace patchroute {

Scene make_cluster_scene(int id, const ClusterSceneParams& params, DetRng& rng) {
    Scene scene;
    scene.id = id;
    scene.name = "scene" + std::to_string(id);
    scene.extent = {params.image_px, params.image_px};

    const double canvas = params.image_px;
    const int cluster_count = rng.poisson(params.clusters_mean);
    std::int64_t instance = 0;
    for (int c = 0; c < cluster_count; ++c) {
        const double cx = rng.uniform(0.0, canvas);
        const double cy = rng.uniform(0.0, canvas);
        const int box_count = rng.poisson(params.boxes_per_cluster_mean);
        for (int b = 0; b < box_count; ++b) {
            const double bx = cx + rng.normal() * params.scatter_sigma_px;
            const double by = cy + rng.normal() * params.scatter_sigma_px;
            const double bw = rng.uniform(params.box_min_px, params.box_max_px);
            const double bh = rng.uniform(params.box_min_px, params.box_max_px);
            BBox box{bx - bw / 2.0, by - bh / 2.0, bx + bw / 2.0, by + bh / 2.0, 0, 0};
            box.x_min = std::max(box.x_min, 0.0);
            box.y_min = std::max(box.y_min, 0.0);
            box.x_max = std::min(box.x_max, canvas);
            box.y_max = std::min(box.y_max, canvas);
            if (!(box.x_min < box.x_max) || !(box.y_min < box.y_max)) continue;
            box.instance_id = instance++;
            scene.boxes.push_back(box);
        }
    }
    return scene;
}

std::vector<Scene> make_cluster_dataset(int scene_count, const ClusterSceneParams& params,
                                        std::uint64_t seed) {
    DetRng rng(seed);
    std::vector<Scene> scenes;
    scenes.reserve(static_cast<std::size_t>(scene_count));
    for (int i = 0; i < scene_count; ++i) {
        scenes.push_back(make_cluster_scene(i, params, rng));
    }
    return scenes;
}

SmallInstance random_small_instance(DetRng& rng) {
    constexpr double kCanvas = 1000.0;
    SmallInstance instance;

    const int box_count = rng.uniform_int(4, SmallInstance::kMaxBoxes);
    // Boxes drawn around a few loose focal points so candidate subsets overlap.
    const int focals = rng.uniform_int(1, 4);
    std::vector<double> fx(static_cast<std::size_t>(focals));
    std::vector<double> fy(static_cast<std::size_t>(focals));
    for (int f = 0; f < focals; ++f) {
        fx[static_cast<std::size_t>(f)] = rng.uniform(100.0, kCanvas - 100.0);
        fy[static_cast<std::size_t>(f)] = rng.uniform(100.0, kCanvas - 100.0);
    }
    for (int b = 0; b < box_count; ++b) {
        const int f = rng.uniform_int(0, focals - 1);
        const double cx =
            std::clamp(fx[static_cast<std::size_t>(f)] + rng.normal() * 120.0, 10.0, kCanvas - 10.0);
        const double cy =
            std::clamp(fy[static_cast<std::size_t>(f)] + rng.normal() * 120.0, 10.0, kCanvas - 10.0);
        const double w = rng.uniform(15.0, 70.0);
        const double h = rng.uniform(15.0, 70.0);
        instance.boxes.push_back({std::max(cx - w / 2.0, 0.0), std::max(cy - h / 2.0, 0.0),
                                  std::min(cx + w / 2.0, kCanvas), std::min(cy + h / 2.0, kCanvas),
                                  0, b});
    }

    const int candidate_count = rng.uniform_int(4, SmallInstance::kMaxCandidates);
    for (int c = 0; c < candidate_count; ++c) {
        const double w = rng.uniform(120.0, 420.0);
        const double h = rng.uniform(120.0, 420.0);
        const double x1 = rng.uniform(0.0, kCanvas - w);
        const double y1 = rng.uniform(0.0, kCanvas - h);
        instance.candidates.push_back({x1, y1, x1 + w, y1 + h});
    }

    instance.budget = rng.uniform_int(1, std::min(SmallInstance::kMaxBudget, candidate_count));
    return instance;
}

} // namespace patchroute
