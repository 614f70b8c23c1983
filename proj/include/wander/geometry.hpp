#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wander/symbols.hpp"

namespace wander {

using complex = std::complex<double>;
using ordered_json = nlohmann::ordered_json;

// --- region primitives -----------------------------------------------------
//
// Closed point sets; the two `open_*` flags mark endpoints excluded by a
// strict inequality in the set definition (membership honors them, the
// raster does not need to).

struct Disk {  // filled
    complex center;
    double radius = 1.0;
};

struct VerticalSegment {  // Re z = x, y0 <= Im z <= y1
    double x = 0.0;
    double y0 = 0.0;
    double y1 = 0.0;
};

struct VerticalHalfLineUp {  // Re z = x, base <= Im z, clipped at t
    double x = 0.0;
    double base = 1.0;
    double t = 0.0;
};

struct VerticalHalfLineDown {  // Re z = x, Im z <= base, clipped at -t
    double x = 0.0;
    double base = -1.0;
    double t = 0.0;
};

struct Arc {  // circular arc, counterclockwise from theta0 to theta1
    complex center;
    double radius = 1.0;
    double theta0 = 0.0;
    double theta1 = 0.0;
    bool open_ends = false;
};

struct Segment {
    complex a;
    complex b;
    bool open_a = false;  // excluded start point
};

struct Annulus {  // filled ring, r_inner <= |z - center| <= r_outer
    complex center;
    double r_inner = 0.0;
    double r_outer = 1.0;
};

using RegionPrimitive = std::variant<Disk, VerticalSegment, VerticalHalfLineUp,
                                     VerticalHalfLineDown, Arc, Segment, Annulus>;

// Distance from z to the primitive as a closed set (open flags ignored).
double primitive_distance(const RegionPrimitive& p, complex z);

// --- labeled components ----------------------------------------------------

struct ComponentId {
    enum class Family { G0, Gk, Bk, Lk, Mk, Arc, Axis, Ray, Synthetic };

    Family family = Family::G0;
    std::int64_t index = 0;  // k for the indexed families, n for Ray

    std::string str() const;  // "G0", "G3", "B1", "L2", "arc", "ray(4)", ...

    friend auto operator<=>(const ComponentId&, const ComponentId&) = default;
};

struct LabeledComponent {
    ComponentId id;
    std::vector<RegionPrimitive> primitives;
    std::optional<DomainSymbol> symbol;  // set for the families the tables speak about
};

double component_distance(const LabeledComponent& c, complex z);

enum class SetKind { Example1, Example3 };

std::string set_kind_name(SetKind k);

struct TruncatedCarlemanSet {
    SetKind kind = SetKind::Example3;
    std::int64_t n = 0;  // max family index (Example3) / ray count (Example1)
    double t = 0.0;      // truncation: |Im z| <= t for lines, |z| <= t for rays
    std::vector<LabeledComponent> components;

    const LabeledComponent* find(const ComponentId& id) const;
};

// Example3: G0 plus G_k, B_k (unit disks at +-(4k+2) with vertical half-line
// whiskers from |Im z| = 1) and the vertical lines L_k, M_k at Re z = +-4k,
// for k <= n, everything clipped to |Im z| <= t.
// Example1: the unit half-circle Re z > 0, the real-axis ray x > 1 and the
// rays arg z = pi/m, m = 3..n+2, clipped to |z| <= t.
TruncatedCarlemanSet build_set(SetKind kind, std::int64_t n, double t);

// --- membership and sampling -----------------------------------------------

inline constexpr double kMembershipEps = 1e-12;

// Boundary-inclusive point location: first component within kMembershipEps,
// honoring excluded endpoints.  Components of the built sets are pairwise
// farther apart than the tolerance, so the answer is unambiguous.
std::optional<ComponentId> membership(const TruncatedCarlemanSet& set, complex z);

struct SamplePoint {
    complex z;
    ComponentId id;
};

// Deterministic quasi-uniform samples: disks as concentric rings (boundary
// and center included), segments and arcs at arithmetic steps, annuli as
// radial rings.  phase = 0 aligns the lattice with centers/endpoints; a
// phase in (0,1) shifts every parameter by that fraction of a step, which
// yields a point set disjoint from the phase-0 lattice.  Every component
// contributes at least ceil(1/spacing) points (step refinement otherwise).
std::vector<SamplePoint> sample_points(const TruncatedCarlemanSet& set,
                                       double spacing, double phase = 0.0);

// Minimum distance between distinct components: exact for disk/segment
// pairs (the Example3 families), sampled bound when arcs or annuli enter.
double min_pairwise_distance(const TruncatedCarlemanSet& set);

// --- raster ------------------------------------------------------------------

struct BoundingBox {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

    bool strictly_contains(const BoundingBox& inner) const {
        return x0 < inner.x0 && x1 > inner.x1 && y0 < inner.y0 && y1 > inner.y1;
    }
};

BoundingBox set_bounds(const TruncatedCarlemanSet& set);

struct Raster {
    std::int64_t width = 0;
    std::int64_t height = 0;
    BoundingBox box;
    double resolution = 0.0;          // pixels per unit
    std::vector<std::int32_t> label;  // component index, -1 outside; row 0 = top

    std::int32_t at(std::int64_t px, std::int64_t py) const {
        return label[static_cast<std::size_t>(py * width + px)];
    }
    complex pixel_center(std::int64_t px, std::int64_t py) const;
};

// Marks a pixel when its center is within half a pixel diagonal of some
// component, so the continuum set is covered by the marked pixels.
Raster rasterize(const TruncatedCarlemanSet& set, const BoundingBox& box,
                 double resolution);

// Flood-fills the unmarked pixels from the border (4-connectivity) and
// reports whether they are all reached: the discrete analogue of "every
// complement component is unbounded".  Throws std::invalid_argument when
// the box does not strictly contain the set or the resolution is too
// coarse for the thinnest primitive.
bool complement_connected(const TruncatedCarlemanSet& set, const BoundingBox& box,
                          double resolution);

// Fixed render palette, cycled by component index; negative index = white.
std::array<unsigned char, 3> region_color(std::int32_t component_index);

// P6 image of the raster, one fixed color per component index.
void write_raster_ppm(const Raster& raster, const std::string& path);

ordered_json set_to_json(const TruncatedCarlemanSet& set);

}  // namespace wander
