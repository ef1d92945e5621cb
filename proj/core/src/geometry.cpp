#include "patchroute/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace patchroute {

namespace {

void check_index(const GridSpec& grid, int gx, int gy) {
    if (!grid.contains(gx, gy)) {
        throw std::out_of_range("grid index (" + std::to_string(gx) + ", " + std::to_string(gy) +
                                ") outside " + std::to_string(grid.grid_w) + "x" +
                                std::to_string(grid.grid_h) + " grid");
    }
}

} // namespace

PixelPoint grid_to_pixel_center(const GridSpec& grid, int gx, int gy) {
    check_index(grid, gx, gy);
    return {(gx + 0.5) * grid.stride_x(), (gy + 0.5) * grid.stride_y()};
}

GridCoord pixel_to_grid(const GridSpec& grid, double px, double py) {
    const int gx = static_cast<int>(std::floor(px / grid.stride_x()));
    const int gy = static_cast<int>(std::floor(py / grid.stride_y()));
    return {std::clamp(gx, 0, grid.grid_w - 1), std::clamp(gy, 0, grid.grid_h - 1)};
}

PixelRect centered_rect(PixelPoint center, const PatchSpec& patch) {
    const double half_w = patch.patch_w_px / 2.0;
    const double half_h = patch.patch_h_px / 2.0;
    return {center.x - half_w, center.y - half_h, center.x + half_w, center.y + half_h};
}

PixelRect patch_rect_at(const GridSpec& grid, const PatchSpec& patch, int gx, int gy) {
    PixelRect rect = centered_rect(grid_to_pixel_center(grid, gx, gy), patch);
    rect.x1 = std::max(rect.x1, 0.0);
    rect.y1 = std::max(rect.y1, 0.0);
    rect.x2 = std::min(rect.x2, static_cast<double>(grid.extent.width_px));
    rect.y2 = std::min(rect.y2, static_cast<double>(grid.extent.height_px));
    return rect;
}

double iof(const BBox& box, const PixelRect& rect) {
    const double box_area = box.area();
    if (!(box_area > 0.0)) {
        throw std::invalid_argument("iof: box must have positive area");
    }
    const double ix = std::min(box.x_max, rect.x2) - std::max(box.x_min, rect.x1);
    const double iy = std::min(box.y_max, rect.y2) - std::max(box.y_min, rect.y1);
    if (ix <= 0.0 || iy <= 0.0) {
        return 0.0;
    }
    return (ix * iy) / box_area;
}

namespace {

void check_rect(const PixelRect& rect) {
    if (rect.degenerate()) {
        throw std::invalid_argument("anchor projection: degenerate patch rect");
    }
}

} // namespace

AnchorBox project_anchor_to_patch(const AnchorBox& anchor, const PixelRect& rect,
                                  const ImageExtent& extent) {
    check_rect(rect);
    const double w_px = extent.width_px;
    const double h_px = extent.height_px;
    return {
        (anchor.cx * w_px - rect.x1) / rect.width(),
        (anchor.cy * h_px - rect.y1) / rect.height(),
        anchor.w * w_px / rect.width(),
        anchor.h * h_px / rect.height(),
    };
}

AnchorBox project_anchor_to_global(const AnchorBox& local, const PixelRect& rect,
                                   const ImageExtent& extent) {
    check_rect(rect);
    const double w_px = extent.width_px;
    const double h_px = extent.height_px;
    return {
        (local.cx * rect.width() + rect.x1) / w_px,
        (local.cy * rect.height() + rect.y1) / h_px,
        local.w * rect.width() / w_px,
        local.h * rect.height() / h_px,
    };
}

} // namespace patchroute
