#include "gtdmine/geodensity.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gtdmine/error.hpp"
#include "gtdmine/text.hpp"
#include "gtdmine/token_io.hpp"

namespace gtdmine {

bool GeoBounds::contains(const GeoPoint& p) const {
    return p.lat >= lat_min && p.lat <= lat_max && p.lon >= lon_min && p.lon <= lon_max;
}

void validate(const GeoBounds& b) {
    const auto text = "[" + format_double(b.lat_min) + ", " + format_double(b.lat_max) + "] x [" +
                      format_double(b.lon_min) + ", " + format_double(b.lon_max) + "]";
    if (!(b.lat_min < b.lat_max) || !(b.lon_min < b.lon_max)) {
        throw Error(Errc::InvalidBounds, "bounds " + text + " are empty or inverted");
    }
    if (b.lat_min < -90 || b.lat_max > 90 || b.lon_min < -180 || b.lon_max > 180) {
        throw Error(Errc::InvalidBounds, "bounds " + text + " exceed [-90, 90] x [-180, 180]");
    }
}

double DensityGrid::mass() const { return std::accumulate(cells.begin(), cells.end(), 0.0); }

double cell_edge(double lo, double hi, std::size_t n, std::size_t i) {
    if (i == n) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
}

std::size_t cell_index(double v, double lo, double hi, std::size_t n) {
    const double t = std::floor((v - lo) / (hi - lo) * static_cast<double>(n));
    std::size_t i = t <= 0 ? 0 : std::min(static_cast<std::size_t>(t), n - 1);
    while (i + 1 < n && v >= cell_edge(lo, hi, n, i + 1)) ++i;
    while (i > 0 && v < cell_edge(lo, hi, n, i)) --i;
    return i;
}

DensityGrid build_density_grid(std::span<const GeoPoint> points, const GeoBounds& bounds, std::size_t nx,
                               std::size_t ny) {
    validate(bounds);
    if (nx == 0 || ny == 0) throw Error(Errc::InvalidBounds, "grid needs at least one cell on each axis");
    DensityGrid g;
    g.bounds = bounds;
    g.nx = nx;
    g.ny = ny;
    g.cells.assign(nx * ny, 0.0);
    g.total_points = points.size();
    for (const auto& p : points) {
        if (!bounds.contains(p)) {
            ++g.out_of_bounds;
            continue;
        }
        const auto ix = cell_index(p.lon, bounds.lon_min, bounds.lon_max, nx);
        const auto iy = cell_index(p.lat, bounds.lat_min, bounds.lat_max, ny);
        g.at(ix, iy) += 1;
    }
    return g;
}

std::vector<GeoPoint> geo_points(const Dataset& data) {
    std::vector<GeoPoint> out;
    for (const auto& r : data.records()) {
        if (r.geo) out.push_back(*r.geo);
    }
    return out;
}

namespace {

std::size_t mirror(long long j, std::size_t n) {
    const auto period = 2 * static_cast<long long>(n);
    auto m = j % period;
    if (m < 0) m += period;
    return static_cast<std::size_t>(m < static_cast<long long>(n) ? m : period - 1 - m);
}

// Convolves `count` lines of `n` samples spaced `stride` apart.
void convolve(std::vector<double>& data, std::size_t n, std::size_t stride, std::size_t count, std::size_t step,
              const std::vector<double>& kernel) {
    const auto radius = static_cast<long long>(kernel.size() / 2);
    std::vector<double> line(n);
    for (std::size_t l = 0; l < count; ++l) {
        const std::size_t base = l * step;
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0;
            for (long long d = -radius; d <= radius; ++d) {
                v += kernel[static_cast<std::size_t>(d + radius)] *
                     data[base + mirror(static_cast<long long>(i) + d, n) * stride];
            }
            line[i] = v;
        }
        for (std::size_t i = 0; i < n; ++i) data[base + i * stride] = line[i];
    }
}

}  // namespace

DensityGrid smooth_grid(const DensityGrid& grid, double bandwidth) {
    if (!(bandwidth > 0) || !std::isfinite(bandwidth)) {
        throw Error(Errc::InvalidHyperparameter, "smoothing bandwidth must be a positive finite number of cells");
    }
    const auto radius = static_cast<std::size_t>(std::ceil(3 * bandwidth));
    std::vector<double> kernel(2 * radius + 1);
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        const double d = static_cast<double>(i) - static_cast<double>(radius);
        kernel[i] = std::exp(-d * d / (2 * bandwidth * bandwidth));
    }
    const double sum = std::accumulate(kernel.begin(), kernel.end(), 0.0);
    for (auto& k : kernel) k /= sum;

    DensityGrid out = grid;
    convolve(out.cells, grid.nx, 1, grid.ny, grid.nx, kernel);
    convolve(out.cells, grid.ny, grid.nx, grid.nx, 1, kernel);
    return out;
}

void write_grid(const DensityGrid& g, std::ostream& out) {
    out << "gtdmine-grid 1\n";
    out << "nx " << g.nx << '\n';
    out << "ny " << g.ny << '\n';
    out << "bounds " << format_double(g.bounds.lat_min) << ' ' << format_double(g.bounds.lat_max) << ' '
        << format_double(g.bounds.lon_min) << ' ' << format_double(g.bounds.lon_max) << '\n';
    out << "cell " << format_double(g.cell_height()) << ' ' << format_double(g.cell_width()) << '\n';
    out << "total_points " << g.total_points << '\n';
    out << "out_of_bounds " << g.out_of_bounds << '\n';
    for (std::size_t row = g.ny; row-- > 0;) {
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            if (ix) out << ' ';
            out << format_double(g.at(ix, row));
        }
        out << '\n';
    }
}

void export_grid(const DensityGrid& grid, const std::string& path) {
    std::ostringstream buf;
    write_grid(grid, buf);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write grid file " + path);
    out << buf.str();
    if (!out.flush()) throw Error(Errc::IoError, "failed writing grid file " + path);
}

DensityGrid read_grid(std::istream& stream) {
    TokenReader in(stream);
    in.expect("gtdmine-grid");
    if (in.integer() != 1) throw Error(Errc::CorruptPayload, "unsupported grid format version");
    DensityGrid g;
    in.expect("nx");
    g.nx = in.count();
    in.expect("ny");
    g.ny = in.count();
    if (g.nx == 0 || g.ny == 0) throw Error(Errc::CorruptPayload, "grid has no cells");
    in.expect("bounds");
    g.bounds.lat_min = in.real();
    g.bounds.lat_max = in.real();
    g.bounds.lon_min = in.real();
    g.bounds.lon_max = in.real();
    try {
        validate(g.bounds);
    } catch (const Error& e) {
        throw Error(Errc::CorruptPayload, e.what());
    }
    in.expect("cell");
    in.real();
    in.real();
    in.expect("total_points");
    g.total_points = in.count();
    in.expect("out_of_bounds");
    g.out_of_bounds = in.count();
    g.cells.assign(g.nx * g.ny, 0.0);
    for (std::size_t row = g.ny; row-- > 0;) {
        for (std::size_t ix = 0; ix < g.nx; ++ix) g.at(ix, row) = in.real();
    }
    if (std::string rest; stream >> rest) throw Error(Errc::CorruptPayload, "unexpected data after the last grid row");
    return g;
}

DensityGrid parse_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::FileNotFound, "cannot open grid file " + path);
    return read_grid(in);
}

std::vector<RegionPreset> read_region_presets(std::istream& in) {
    std::vector<KeyValue> entries;
    try {
        entries = parse_key_values(in);
    } catch (const Error& e) {
        throw Error(Errc::InvalidConfig, e.what());
    }
    std::vector<RegionPreset> out;
    for (const auto& kv : entries) {
        const auto where = "region presets line " + std::to_string(kv.line);
        const auto parts = split(kv.value, ',');
        std::vector<double> v;
        for (const auto& p : parts) {
            const auto d = parse_double(trim(p));
            if (!d) throw Error(Errc::InvalidConfig, where + ": '" + p + "' is not a number");
            v.push_back(*d);
        }
        if (v.size() != 4) throw Error(Errc::InvalidConfig, where + ": expected lat_min, lat_max, lon_min, lon_max");
        RegionPreset preset{kv.key, {v[0], v[1], v[2], v[3]}};
        try {
            validate(preset.bounds);
        } catch (const Error& e) {
            throw Error(Errc::InvalidConfig, where + ": " + e.what());
        }
        for (const auto& p : out) {
            if (p.name == preset.name) throw Error(Errc::InvalidConfig, where + ": duplicate region " + p.name);
        }
        out.push_back(std::move(preset));
    }
    return out;
}

std::vector<RegionPreset> load_region_presets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::FileNotFound, "cannot open region presets " + path);
    return read_region_presets(in);
}

const RegionPreset& find_preset(std::span<const RegionPreset> presets, std::string_view name) {
    for (const auto& p : presets) {
        if (p.name == name) return p;
    }
    throw Error(Errc::InvalidConfig, "no region preset named '" + std::string(name) + "'");
}

}  // namespace gtdmine
