#include "patchroute/gainmap_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

namespace patchroute {

void write_gainmap(std::ostream& out, const GainMap& map) {
    out << map.grid.grid_w << ' ' << map.grid.grid_h << ' ' << map.grid.extent.width_px << ' '
        << map.grid.extent.height_px << '\n';
    out << std::setprecision(9);
    for (int gy = 0; gy < map.grid.grid_h; ++gy) {
        for (int gx = 0; gx < map.grid.grid_w; ++gx) {
            if (gx > 0) out << ' ';
            out << map.at(gx, gy);
        }
        out << '\n';
    }
}

void write_gainmap_file(const std::filesystem::path& path, const GainMap& map) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    write_gainmap(out, map);
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

GainMap read_gainmap(std::istream& in) {
    GridSpec grid;
    if (!(in >> grid.grid_w >> grid.grid_h >> grid.extent.width_px >> grid.extent.height_px)) {
        throw std::runtime_error("gain map: malformed header (expected 4 integers)");
    }
    if (grid.grid_w <= 0 || grid.grid_h <= 0 || grid.extent.width_px <= 0 ||
        grid.extent.height_px <= 0) {
        throw std::runtime_error("gain map: header dimensions must be positive");
    }
    if (grid.grid_w > grid.extent.width_px || grid.grid_h > grid.extent.height_px) {
        throw std::runtime_error("gain map: grid larger than image extent");
    }
    GainMap map = GainMap::zeros(grid);
    for (int gy = 0; gy < grid.grid_h; ++gy) {
        for (int gx = 0; gx < grid.grid_w; ++gx) {
            double v = 0.0;
            if (!(in >> v)) {
                throw std::runtime_error("gain map: missing value at row " + std::to_string(gy) +
                                         ", column " + std::to_string(gx));
            }
            if (!std::isfinite(v) || v < 0.0) {
                throw std::runtime_error("gain map: invalid value at row " + std::to_string(gy) +
                                         ", column " + std::to_string(gx));
            }
            map.at(gx, gy) = v;
        }
    }
    return map;
}

GainMap read_gainmap_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    try {
        return read_gainmap(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

} // namespace patchroute
