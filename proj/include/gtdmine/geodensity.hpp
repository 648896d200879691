#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gtdmine/dataset.hpp"

namespace gtdmine {

struct GeoBounds {
    double lat_min = -90;
    double lat_max = 90;
    double lon_min = -180;
    double lon_max = 180;

    bool contains(const GeoPoint& p) const;
    bool operator==(const GeoBounds&) const = default;
};

/// Throws InvalidBounds for empty, inverted or out-of-range bounds.
void validate(const GeoBounds& bounds);

/// Cells are row-major from the southern edge: cells[iy * nx + ix].
struct DensityGrid {
    GeoBounds bounds;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> cells;
    std::size_t total_points = 0;   // points offered, in bounds or not
    std::size_t out_of_bounds = 0;

    double& at(std::size_t ix, std::size_t iy) { return cells[iy * nx + ix]; }
    double at(std::size_t ix, std::size_t iy) const { return cells[iy * nx + ix]; }
    double mass() const;
    double cell_width() const { return (bounds.lon_max - bounds.lon_min) / static_cast<double>(nx); }
    double cell_height() const { return (bounds.lat_max - bounds.lat_min) / static_cast<double>(ny); }

    bool operator==(const DensityGrid&) const = default;
};

/// Edge i of an axis split into n cells: lo + (hi - lo) * i / n.
double cell_edge(double lo, double hi, std::size_t n, std::size_t i);
/// Cell holding v, with v in [lo, hi]: interior edges go to the higher
/// cell, v == hi to the last.
std::size_t cell_index(double v, double lo, double hi, std::size_t n);

/// Throws InvalidBounds, also for nx or ny of zero.
DensityGrid build_density_grid(std::span<const GeoPoint> points, const GeoBounds& bounds, std::size_t nx,
                               std::size_t ny);
/// Points of every record that carries coordinates.
std::vector<GeoPoint> geo_points(const Dataset& data);

/// Separable Gaussian of the given bandwidth (in cells), truncated at
/// ceil(3 * bandwidth), mirrored at the grid edges. Throws
/// InvalidHyperparameter unless bandwidth > 0.
DensityGrid smooth_grid(const DensityGrid& grid, double bandwidth);

void write_grid(const DensityGrid& grid, std::ostream& out);
/// Throws IoError.
void export_grid(const DensityGrid& grid, const std::string& path);
/// Throws CorruptPayload.
DensityGrid read_grid(std::istream& in);
DensityGrid parse_grid(const std::string& path);

struct RegionPreset {
    std::string name;
    GeoBounds bounds;
};

/// "name = lat_min, lat_max, lon_min, lon_max" lines. Throws InvalidConfig.
std::vector<RegionPreset> read_region_presets(std::istream& in);
std::vector<RegionPreset> load_region_presets(const std::string& path);
/// Throws InvalidConfig for an unknown name.
const RegionPreset& find_preset(std::span<const RegionPreset> presets, std::string_view name);

}  // namespace gtdmine
