#include <doctest.h>

#include "patchroute/geometry.hpp"
#include "patchroute/synthetic.hpp"

#include <cmath>

using namespace patchroute;

TEST_CASE("grid_to_pixel_center returns cell centers") {
    const GridSpec g2{2, 2, {100, 100}};
    const PixelPoint p = grid_to_pixel_center(g2, 0, 0);
    CHECK(p.x == doctest::Approx(25.0));
    CHECK(p.y == doctest::Approx(25.0));

    const GridSpec g16{16, 16, {8192, 8192}};
    const PixelPoint q = grid_to_pixel_center(g16, 15, 15);
    CHECK(q.x == 7936.0); // (15.5) * 512
    CHECK(q.y == 7936.0);

    const GridSpec g1{1, 1, {64, 64}};
    const PixelPoint r = grid_to_pixel_center(g1, 0, 0);
    CHECK(r.x == 32.0);
    CHECK(r.y == 32.0);

    CHECK_THROWS_AS(grid_to_pixel_center(g2, 2, 0), std::out_of_range);
    CHECK_THROWS_AS(grid_to_pixel_center(g2, 0, -1), std::out_of_range);
}

TEST_CASE("grid centers lie strictly inside the image") {
    const GridSpec g{7, 5, {130, 97}};
    for (int gy = 0; gy < g.grid_h; ++gy) {
        for (int gx = 0; gx < g.grid_w; ++gx) {
            const PixelPoint p = grid_to_pixel_center(g, gx, gy);
            CHECK(p.x > 0.0);
            CHECK(p.x < g.extent.width_px);
            CHECK(p.y > 0.0);
            CHECK(p.y < g.extent.height_px);
            // pixel_to_grid inverts the center mapping
            const GridCoord c = pixel_to_grid(g, p.x, p.y);
            CHECK(c.gx == gx);
            CHECK(c.gy == gy);
        }
    }
}

TEST_CASE("patch_rect_at centers and clamps") {
    const GridSpec g16{16, 16, {8192, 8192}};
    const PixelRect mid = patch_rect_at(g16, {512, 512}, 7, 7);
    CHECK(mid.x1 == 3584.0);
    CHECK(mid.y1 == 3584.0);
    CHECK(mid.x2 == 4096.0);
    CHECK(mid.y2 == 4096.0);

    const GridSpec g2{2, 2, {100, 100}};
    const PixelRect full = patch_rect_at(g2, {200, 200}, 0, 0);
    CHECK(full.x1 == 0.0);
    CHECK(full.y1 == 0.0);
    CHECK(full.x2 == 100.0);
    CHECK(full.y2 == 100.0);

    const GridSpec g4{4, 4, {64, 64}};
    const PixelRect corner = patch_rect_at(g4, {16, 16}, 0, 0);
    CHECK(corner.x1 == 0.0);
    CHECK(corner.y1 == 0.0);
    CHECK(corner.x2 == 16.0);
    CHECK(corner.y2 == 16.0);
}

TEST_CASE("centered_rect always has exact patch dimensions") {
    DetRng rng(11);
    const PatchSpec patch{37, 81};
    for (int i = 0; i < 200; ++i) {
        const PixelPoint center{rng.uniform(-100.0, 1100.0), rng.uniform(-100.0, 1100.0)};
        const PixelRect r = centered_rect(center, patch);
        CHECK(r.width() == doctest::Approx(37.0).epsilon(1e-12));
        CHECK(r.height() == doctest::Approx(81.0).epsilon(1e-12));
    }
    // clamped rects never exceed the patch size and keep positive extent
    const GridSpec g{9, 9, {100, 100}};
    for (int gy = 0; gy < 9; ++gy) {
        for (int gx = 0; gx < 9; ++gx) {
            const PixelRect r = patch_rect_at(g, patch, gx, gy);
            CHECK(r.width() <= 37.0 + 1e-12);
            CHECK(r.height() <= 81.0 + 1e-12);
            CHECK(r.x1 < r.x2);
            CHECK(r.y1 < r.y2);
        }
    }
}

TEST_CASE("iof basics") {
    const PixelRect big{0, 0, 100, 100};
    CHECK(iof({10, 10, 20, 20, 0, 0}, big) == 1.0);
    CHECK(iof({0, 0, 10, 10, 0, 0}, {5, 0, 100, 10}) == 0.5);
    CHECK(iof({0, 0, 10, 10, 0, 0}, {50, 50, 60, 60}) == 0.0);
    CHECK_THROWS_AS(iof({5, 5, 5, 9, 0, 0}, big), std::invalid_argument);
}

TEST_CASE("iof range and containment on random pairs") {
    DetRng rng(23);
    for (int i = 0; i < 500; ++i) {
        const double x1 = rng.uniform(0.0, 900.0);
        const double y1 = rng.uniform(0.0, 900.0);
        const BBox box{x1, y1, x1 + rng.uniform(1.0, 80.0), y1 + rng.uniform(1.0, 80.0), 0, 0};
        const double rx = rng.uniform(0.0, 800.0);
        const double ry = rng.uniform(0.0, 800.0);
        const PixelRect rect{rx, ry, rx + rng.uniform(5.0, 200.0), ry + rng.uniform(5.0, 200.0)};
        const double v = iof(box, rect);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
        const bool inside = box.x_min >= rect.x1 && box.x_max <= rect.x2 &&
                            box.y_min >= rect.y1 && box.y_max <= rect.y2;
        if (inside) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
        if (v == 1.0) CHECK(inside);
    }
}

TEST_CASE("iof partitions over an exact tiling") {
    // any box inside the image has IoF values summing to 1 over a tiling
    DetRng rng(31);
    const GridSpec grid{8, 8, {512, 512}};
    const PatchSpec tile{64, 64}; // patch == stride -> exact non-overlapping tiling
    for (int i = 0; i < 200; ++i) {
        const double x1 = rng.uniform(0.0, 450.0);
        const double y1 = rng.uniform(0.0, 450.0);
        const BBox box{x1, y1, x1 + rng.uniform(1.0, 60.0), y1 + rng.uniform(1.0, 60.0), 0, 0};
        double total = 0.0;
        for (int gy = 0; gy < grid.grid_h; ++gy) {
            for (int gx = 0; gx < grid.grid_w; ++gx) {
                total += iof(box, patch_rect_at(grid, tile, gx, gy));
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("anchor projection worked examples") {
    const ImageExtent extent{8192, 8192};
    const PixelRect rect{3840, 3840, 4352, 4352};

    const AnchorBox center{0.5, 0.5, 0.1, 0.1};
    const AnchorBox local = project_anchor_to_patch(center, rect, extent);
    CHECK(local.cx == 0.5);
    CHECK(local.cy == 0.5);

    // left-edge alignment: cx * W == x1
    const AnchorBox edge{3840.0 / 8192.0, 0.5, 0.0, 0.0};
    CHECK(project_anchor_to_patch(edge, rect, extent).cx == 0.0);

    const PixelRect band{1792, 0, 2304, 512};
    const AnchorBox a{0.25, 0.0, 0.0625, 0.0};
    const AnchorBox b = project_anchor_to_patch(a, band, extent);
    CHECK(b.cx == 0.5);
    CHECK(b.w == 1.0);

    const AnchorBox origin = project_anchor_to_global({0, 0, 0, 0}, rect, extent);
    CHECK(origin.cx == 3840.0 / 8192.0);
    CHECK(origin.cy == 3840.0 / 8192.0);
    CHECK(origin.w == 0.0);
    const AnchorBox far_corner = project_anchor_to_global({1, 1, 0.5, 0.5}, rect, extent);
    CHECK(far_corner.cx == 4352.0 / 8192.0);
    CHECK(far_corner.cy == 4352.0 / 8192.0);

    CHECK_THROWS_AS(project_anchor_to_patch(center, {10, 10, 10, 20}, extent),
                    std::invalid_argument);
    CHECK_THROWS_AS(project_anchor_to_global(center, {10, 30, 10, 20}, extent),
                    std::invalid_argument);
}

TEST_CASE("anchor projection round-trips") {
    DetRng rng(47);
    const ImageExtent extent{8192, 4096};
    for (int i = 0; i < 2000; ++i) {
        const AnchorBox a{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        const double x1 = rng.uniform(0.0, 7000.0);
        const double y1 = rng.uniform(0.0, 3000.0);
        const PixelRect rect{x1, y1, x1 + rng.uniform(1.0, 1100.0), y1 + rng.uniform(1.0, 1000.0)};
        const AnchorBox local = project_anchor_to_patch(a, rect, extent);
        const AnchorBox back = project_anchor_to_global(local, rect, extent);
        CHECK(std::abs(back.cx - a.cx) < 1e-9);
        CHECK(std::abs(back.cy - a.cy) < 1e-9);
        CHECK(std::abs(back.w - a.w) < 1e-9);
        CHECK(std::abs(back.h - a.h) < 1e-9);
    }
}
