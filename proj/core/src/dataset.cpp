#include "patchroute/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace patchroute {

namespace {

using nlohmann::json;

// Clip to the extent; returns false when nothing with positive area remains.
bool clip_box(BBox& box, const ImageExtent& extent) {
    box.x_min = std::max(box.x_min, 0.0);
    box.y_min = std::max(box.y_min, 0.0);
    box.x_max = std::min(box.x_max, static_cast<double>(extent.width_px));
    box.y_max = std::min(box.y_max, static_cast<double>(extent.height_px));
    return box.x_min < box.x_max && box.y_min < box.y_max;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::runtime_error(where + ": " + what);
}

} // namespace

SceneDataset load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open annotation file " + path.string());
    }
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }

    SceneDataset dataset;
    std::map<int, std::size_t> scene_by_id;

    if (!root.contains("images") || !root["images"].is_array()) {
        fail(path.string(), "missing `images` array");
    }
    std::size_t idx = 0;
    for (const json& im : root["images"]) {
        const std::string where = path.string() + ": images[" + std::to_string(idx++) + "]";
        if (!im.contains("id") || !im.contains("width") || !im.contains("height")) {
            fail(where, "needs id, width and height");
        }
        Scene scene;
        scene.id = im["id"].get<int>();
        scene.extent = {im["width"].get<int>(), im["height"].get<int>()};
        if (scene.extent.width_px <= 0 || scene.extent.height_px <= 0) {
            fail(where, "non-positive image extent");
        }
        scene.name = im.value("file_name", "img" + std::to_string(scene.id));
        if (scene_by_id.count(scene.id)) {
            fail(where, "duplicate image id " + std::to_string(scene.id));
        }
        scene_by_id[scene.id] = dataset.scenes.size();
        dataset.scenes.push_back(std::move(scene));
    }

    if (root.contains("categories") && root["categories"].is_array()) {
        for (const json& cat : root["categories"]) {
            if (cat.contains("id")) {
                dataset.categories[cat["id"].get<int>()] = cat.value("name", "");
            }
        }
    }

    if (root.contains("annotations")) {
        if (!root["annotations"].is_array()) {
            fail(path.string(), "`annotations` must be an array");
        }
        std::map<int, std::int64_t> next_instance;
        idx = 0;
        for (const json& ann : root["annotations"]) {
            const std::string where =
                path.string() + ": annotations[" + std::to_string(idx++) + "]";
            try {
                if (!ann.contains("image_id") || !ann.contains("bbox")) {
                    fail(where, "needs image_id and bbox");
                }
                const int image_id = ann["image_id"].get<int>();
                const auto scene_it = scene_by_id.find(image_id);
                if (scene_it == scene_by_id.end()) {
                    fail(where, "unknown image_id " + std::to_string(image_id));
                }
                const json& bbox = ann["bbox"];
                if (!bbox.is_array() || bbox.size() != 4) {
                    fail(where, "bbox must be [x, y, w, h]");
                }
                const double x = bbox[0].get<double>();
                const double y = bbox[1].get<double>();
                const double w = bbox[2].get<double>();
                const double h = bbox[3].get<double>();

                Scene& scene = dataset.scenes[scene_it->second];
                BBox box{x, y, x + w, y + h, ann.value("category_id", 0), 0};
                if (!clip_box(box, scene.extent)) {
                    ++dataset.dropped_boxes;
                    continue;
                }
                box.instance_id = next_instance[image_id]++;
                scene.boxes.push_back(box);
            } catch (const json::exception& e) {
                fail(where, e.what());
            }
        }
    }
    return dataset;
}

std::vector<Scene> tile_scene(const Scene& scene, int target_px) {
    if (target_px <= 0) {
        throw std::invalid_argument("tile_scene: target must be positive");
    }
    const double target = target_px;
    const int tiles_x = std::max(1, static_cast<int>(std::ceil(scene.extent.width_px / target)));
    const int tiles_y = std::max(1, static_cast<int>(std::ceil(scene.extent.height_px / target)));

    std::vector<Scene> tiles;
    tiles.reserve(static_cast<std::size_t>(tiles_x) * tiles_y);
    for (int ty = 0; ty < tiles_y; ++ty) {
        for (int tx = 0; tx < tiles_x; ++tx) {
            Scene tile;
            tile.id = scene.id;
            tile.name = tiles_x * tiles_y == 1
                            ? scene.name
                            : scene.name + "_r" + std::to_string(ty) + "_c" + std::to_string(tx);
            tile.extent = {target_px, target_px};
            tiles.push_back(std::move(tile));
        }
    }

    for (const BBox& box : scene.boxes) {
        const double cx = (box.x_min + box.x_max) / 2.0;
        const double cy = (box.y_min + box.y_max) / 2.0;
        const int tx = std::clamp(static_cast<int>(std::floor(cx / target)), 0, tiles_x - 1);
        const int ty = std::clamp(static_cast<int>(std::floor(cy / target)), 0, tiles_y - 1);
        const double ox = tx * target;
        const double oy = ty * target;

        BBox shifted = box;
        shifted.x_min = std::max(box.x_min, ox) - ox;
        shifted.y_min = std::max(box.y_min, oy) - oy;
        shifted.x_max = std::min(box.x_max, ox + target) - ox;
        shifted.y_max = std::min(box.y_max, oy + target) - oy;
        tiles[static_cast<std::size_t>(ty) * tiles_x + tx].boxes.push_back(shifted);
    }
    return tiles;
}

SceneDataset tile_dataset(const SceneDataset& dataset, int target_px) {
    SceneDataset out;
    out.categories = dataset.categories;
    out.dropped_boxes = dataset.dropped_boxes;
    int next_id = 0;
    for (const Scene& scene : dataset.scenes) {
        for (Scene& tile : tile_scene(scene, target_px)) {
            tile.id = next_id++;
            out.scenes.push_back(std::move(tile));
        }
    }
    return out;
}

} // namespace patchroute
