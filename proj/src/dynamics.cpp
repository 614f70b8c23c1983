#include "wander/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace wander {

namespace {

bool within_guard(complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag()) &&
           std::abs(z) <= kOrbitGuard;
}

}  // namespace

Trajectory orbit(const MapFn& map, complex start, std::int64_t steps,
                 const std::string& word) {
    if (steps < 1) throw std::invalid_argument("orbit: steps must be >= 1");
    Trajectory t;
    t.start = start;
    t.word = word;
    t.points.reserve(static_cast<std::size_t>(std::min<std::int64_t>(steps, 1 << 20)) + 1);
    t.points.push_back(start);
    complex z = start;
    for (std::int64_t i = 0; i < steps; ++i) {
        z = map(z);
        if (!within_guard(z)) {
            t.overflowed = true;
            break;
        }
        t.points.push_back(z);
    }
    return t;
}

FixedPointResult find_fixed_point(const MapFn& map, complex seed, double tol,
                                  std::int64_t max_iterations) {
    FixedPointResult r;
    r.z = seed;
    complex z = seed;
    for (std::int64_t it = 1; it <= max_iterations; ++it) {
        const complex next = map(z);
        r.iterations = it;
        if (!within_guard(next)) break;  // diverged; report the last finite iterate
        const double diff = std::abs(next - z);
        z = next;
        r.z = z;
        if (diff <= tol) {
            r.converged = true;
            break;
        }
    }
    const complex image = map(r.z);
    r.residual = within_guard(image) ? std::abs(image - r.z)
                                     : std::numeric_limits<double>::infinity();
    const double h = 1e-6;
    const complex d = map(r.z + h) - map(r.z - h);
    const double m = std::abs(d) / (2.0 * h);
    r.multiplier = std::isfinite(m) ? m : std::numeric_limits<double>::infinity();
    return r;
}

std::vector<complex> core_seeds(std::int64_t count) {
    if (count < 1) throw std::invalid_argument("core_seeds: count must be >= 1");
    // Vogel spiral: strictly increasing radii make the seeds pairwise distinct.
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<complex> seeds;
    seeds.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        const double r =
            0.9 * std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(count));
        const double th = golden_angle * static_cast<double>(i);
        seeds.emplace_back(2.0 + r * std::cos(th), r * std::sin(th));
    }
    return seeds;
}

bool orbit_conforms(const MapFn& map, const TransitionTable& table, complex z,
                    const DomainSymbol& start, std::int64_t steps) {
    DomainSymbol s = start;
    for (std::int64_t i = 0; i < steps; ++i) {
        const auto disk = table.at(s);
        if (!disk) return false;
        z = map(z);
        if (!within_guard(z)) return false;
        if (std::abs(z - complex(static_cast<double>(disk->center), 0.0)) >=
            kTargetDiskRadius)
            return false;
        s = disk->containing;
    }
    return true;
}

namespace {

// Steps until the orbit of z enters |w - z0| < 1/2; -1 when it does not
// within the cap (or overflows).
std::int64_t steps_into_basin(const MapFn& map, complex z, complex z0) {
    for (std::int64_t s = 0; s <= kEscapeCap; ++s) {
        if (std::abs(z - z0) < kTargetDiskRadius) return s;
        z = map(z);
        if (!within_guard(z)) return -1;
    }
    return -1;
}

std::array<unsigned char, 3> escape_color(std::int64_t steps_taken) {
    if (steps_taken < 0) return {255, 255, 255};
    // gray ramp 235 (immediate) .. 55 (cap); never 255, so basin pixels
    // stay distinguishable from never-entering ones
    const std::int64_t g = 235 - (180 * std::min(steps_taken, kEscapeCap)) / kEscapeCap;
    const auto b = static_cast<unsigned char>(g);
    return {b, b, b};
}

}  // namespace

std::string render_regions(const TruncatedCarlemanSet& set,
                           const std::optional<MapFn>& map, const BoundingBox& viewport,
                           std::int64_t width, std::int64_t height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("render_regions: image must be at least 1x1");
    if (!(viewport.x1 > viewport.x0) || !(viewport.y1 > viewport.y0))
        throw std::invalid_argument("render_regions: degenerate viewport");

    std::map<ComponentId, std::int32_t> index;
    for (std::size_t i = 0; i < set.components.size(); ++i)
        index.emplace(set.components[i].id, static_cast<std::int32_t>(i));

    complex z0;
    if (map) z0 = find_fixed_point(*map).z;

    const double sx = (viewport.x1 - viewport.x0) / static_cast<double>(width);
    const double sy = (viewport.y1 - viewport.y0) / static_cast<double>(height);

    std::string bytes =
        "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    bytes.reserve(bytes.size() + static_cast<std::size_t>(width * height) * 3);
    for (std::int64_t py = 0; py < height; ++py) {
        const double y = viewport.y1 - (static_cast<double>(py) + 0.5) * sy;
        for (std::int64_t px = 0; px < width; ++px) {
            const double x = viewport.x0 + (static_cast<double>(px) + 0.5) * sx;
            const complex z{x, y};
            std::array<unsigned char, 3> rgb{255, 255, 255};
            if (const auto id = membership(set, z)) {
                rgb = region_color(index.at(*id));
            } else if (map) {
                rgb = escape_color(steps_into_basin(*map, z, z0));
            }
            bytes.push_back(static_cast<char>(rgb[0]));
            bytes.push_back(static_cast<char>(rgb[1]));
            bytes.push_back(static_cast<char>(rgb[2]));
        }
    }
    return bytes;
}

void render_regions(const TruncatedCarlemanSet& set, const std::optional<MapFn>& map,
                    const BoundingBox& viewport, std::int64_t width, std::int64_t height,
                    const std::string& out_path) {
    const std::string bytes = render_regions(set, map, viewport, width, height);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing: " + out_path);
}

namespace {

ordered_json cx(complex z) { return ordered_json{z.real(), z.imag()}; }

}  // namespace

ordered_json trajectory_to_json(const Trajectory& t) {
    ordered_json points = ordered_json::array();
    for (const complex p : t.points) points.push_back(cx(p));
    return ordered_json{{"start", cx(t.start)},
                        {"word", t.word},
                        {"points", points},
                        {"overflowed", t.overflowed}};
}

ordered_json fixed_point_to_json(const FixedPointResult& r) {
    return ordered_json{{"z", cx(r.z)},
                        {"iterations", r.iterations},
                        {"converged", r.converged},
                        {"multiplier", r.multiplier},
                        {"residual", r.residual},
                        {"attracting", r.attracting()}};
}

}  // namespace wander
