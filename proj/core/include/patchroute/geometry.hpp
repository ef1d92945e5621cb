#pragma once

#include <cstdint>
#include <stdexcept>

namespace patchroute {

struct ImageExtent {
    int width_px = 0;
    int height_px = 0;
};

/// Axis-aligned object annotation in pixel coordinates (x_min,y_min) inclusive
/// of fractional pixels. Corners satisfy x_min < x_max and y_min < y_max.
struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;
    int category_id = 0;
    std::int64_t instance_id = 0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
};

/// A grid_h x grid_w candidate-center lattice laid over an image. Cell strides
/// are real-valued: stride_x = width_px / grid_w.
struct GridSpec {
    int grid_w = 0;
    int grid_h = 0;
    ImageExtent extent;

    double stride_x() const { return static_cast<double>(extent.width_px) / grid_w; }
    double stride_y() const { return static_cast<double>(extent.height_px) / grid_h; }
    int cell_count() const { return grid_w * grid_h; }
    bool contains(int gx, int gy) const {
        return gx >= 0 && gx < grid_w && gy >= 0 && gy < grid_h;
    }
    // Row-major linear index; also the deterministic tie-break order.
    std::size_t index(int gx, int gy) const {
        return static_cast<std::size_t>(gy) * grid_w + gx;
    }
};

struct PatchSpec {
    int patch_w_px = 512;
    int patch_h_px = 512;
};

struct PixelRect {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
    bool degenerate() const { return !(x1 < x2) || !(y1 < y2); }
};

/// Normalized (cx, cy, w, h) box. Global anchors live in [0,1]^4; patch-local
/// projections may legitimately leave that range and are never clamped.
struct AnchorBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;
};

struct GridCoord {
    int gx = 0;
    int gy = 0;

    friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Pixel-space center of grid cell (gx, gy): ((gx+0.5)*stride_x, (gy+0.5)*stride_y).
/// Throws std::out_of_range for an invalid index.
PixelPoint grid_to_pixel_center(const GridSpec& grid, int gx, int gy);

/// Cell containing a pixel position; clamped to the grid at the image border.
GridCoord pixel_to_grid(const GridSpec& grid, double px, double py);

/// Patch rectangle of exact PatchSpec dimensions centered at a point, no clamping.
PixelRect centered_rect(PixelPoint center, const PatchSpec& patch);

/// Candidate patch rect for a grid cell: exact patch dims centered on the cell
/// center, then clamped to the image extent (border patches shrink, their
/// center-cell correspondence stays exact). Throws std::out_of_range for an
/// invalid index.
PixelRect patch_rect_at(const GridSpec& grid, const PatchSpec& patch, int gx, int gy);

/// Intersection-over-Foreground: Area(box ∩ rect) / Area(box), in [0,1].
/// Equals 1 exactly when the box lies inside the rect. Throws
/// std::invalid_argument for a zero-area box.
double iof(const BBox& box, const PixelRect& rect);

/// Global normalized anchor -> patch-local frame:
///   cx_local = (cx*W - x1) / (x2 - x1),  w_local = w*W / (x2 - x1)
/// (and the y analogues). Outputs outside [0,1] are permitted and not clamped;
/// clamping would break the inverse. Throws std::invalid_argument on a
/// degenerate rect.
AnchorBox project_anchor_to_patch(const AnchorBox& anchor, const PixelRect& rect,
                                  const ImageExtent& extent);

/// Exact inverse of project_anchor_to_patch (up to floating-point roundoff).
AnchorBox project_anchor_to_global(const AnchorBox& local, const PixelRect& rect,
                                   const ImageExtent& extent);

} // namespace patchroute
