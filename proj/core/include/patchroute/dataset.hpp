#pragma once

#include "patchroute/geometry.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace patchroute {

struct Scene {
    int id = 0;
    std::string name;
    ImageExtent extent;
    std::vector<BBox> boxes;
};

struct SceneDataset {
    std::vector<Scene> scenes;
    std::map<int, std::string> categories;
    int dropped_boxes = 0; // degenerate after clipping to the image extent
};

/// Loads COCO-style annotations: `images` entries with id/width/height and
/// `annotations` entries with image_id and bbox [x, y, w, h]. Boxes are
/// clipped to their image extent; boxes degenerate after clipping are dropped
/// and counted in dropped_boxes. Instance ids are assigned per image in file
/// order. Throws std::runtime_error with the offending location on missing
/// files, malformed JSON, or an annotation referencing an unknown image_id.
SceneDataset load_annotations(const std::filesystem::path& path);

/// Splits a scene into non-overlapping target x target tiles (stride =
/// target), the zero-padding analogue for annotations: every tile reports a
/// target x target extent, boxes go to the tile containing their center and
/// are clipped to it, and empty tiles are kept. A scene already within target
/// in both dimensions yields one tile.
std::vector<Scene> tile_scene(const Scene& scene, int target_px);

/// tile_scene over a whole dataset, with fresh sequential scene ids.
SceneDataset tile_dataset(const SceneDataset& dataset, int target_px);

} // namespace patchroute
