#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wander/approximation.hpp"
#include "wander/geometry.hpp"
#include "wander/tables.hpp"

namespace wander {

// Iterates whose modulus exceeds this (or go non-finite) stop an orbit with
// the overflowed flag set; exp-composites blow through double range silently
// otherwise.
inline constexpr double kOrbitGuard = 1e300;

struct Trajectory {
    complex start;
    std::string word;             // label of the map applied per step
    std::vector<complex> points;  // points[0] == start, one entry per finished step
    bool overflowed = false;      // stopped early: iterate beyond the guard
};

// points = z, F(z), ..., F^steps(z), truncated (and flagged) at the guard.
// steps must be >= 1.
Trajectory orbit(const MapFn& map, complex start, std::int64_t steps,
                 const std::string& word = "");

struct FixedPointResult {
    complex z;                   // final iterate
    std::int64_t iterations = 0;
    bool converged = false;      // successive difference <= tol within the budget
    double multiplier = 0.0;     // |F'(z)| by central difference, step 1e-6
    double residual = 0.0;       // |F(z) - z| at the final iterate

    bool attracting() const { return converged && multiplier < 1.0; }
};

// Fixed-point iteration z <- F(z) from the seed; converged once the
// successive difference drops to tol.  The multiplier and residual are
// measured at the final iterate either way.
FixedPointResult find_fixed_point(const MapFn& map, complex seed = complex(2.0, 0.0),
                                  double tol = 1e-9, std::int64_t max_iterations = 500);

// Deterministic distinct seeds on a golden-angle spiral inside the central
// disk |z - 2| <= 0.9 (strictly inside the radius-1 core component).
std::vector<complex> core_seeds(std::int64_t count = 50);

// True when the first `steps` iterates of `map` from `z` land in the
// radius-1/2 disks obtained by stepping `table` from `start`'s symbol;
// false on a table gap or a guard trip.
bool orbit_conforms(const MapFn& map, const TransitionTable& table, complex z,
                    const DomainSymbol& start, std::int64_t steps);

// Escape-overlay step cap for render_regions.
inline constexpr std::int64_t kEscapeCap = 30;

// P6 image of the viewport, pixel centers sampled on a width x height grid
// (row 0 = top).  Pixels whose center lies in the set carry their
// component's region_color; with a map given, the remaining pixels get a
// gray ramp by the number of steps until the orbit enters the half-radius
// disk about the map's fixed point (found internally), capped at kEscapeCap;
// pixels that never enter (or overflow) stay white.  Identical arguments
// produce identical bytes.
std::string render_regions(const TruncatedCarlemanSet& set,
                           const std::optional<MapFn>& map, const BoundingBox& viewport,
                           std::int64_t width, std::int64_t height);

// Same image written to a file; throws std::runtime_error on I/O failure.
void render_regions(const TruncatedCarlemanSet& set, const std::optional<MapFn>& map,
                    const BoundingBox& viewport, std::int64_t width, std::int64_t height,
                    const std::string& out_path);

ordered_json trajectory_to_json(const Trajectory& t);
ordered_json fixed_point_to_json(const FixedPointResult& r);

}  // namespace wander
