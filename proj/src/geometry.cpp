#include "wander/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wander {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double point_segment_distance(complex a, complex b, complex z) {
    complex ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(z - a);
    double t = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

// every primitive reduces to one of these for metric purposes
struct Shape {
    enum Kind { FilledDisk, Seg, ArcCurve, Ring } kind = Seg;
    complex c;               // disk/arc/ring center
    double r = 0.0;          // disk/arc radius, ring outer radius
    double r2 = 0.0;         // ring inner radius
    double th0 = 0.0, th1 = 0.0;
    complex a, b;            // segment endpoints
};

Shape shape_of(const RegionPrimitive& p) {
    Shape s;
    if (const auto* d = std::get_if<Disk>(&p)) {
        s = {Shape::FilledDisk, d->center, d->radius};
    } else if (const auto* v = std::get_if<VerticalSegment>(&p)) {
        s.kind = Shape::Seg;
        s.a = {v->x, v->y0};
        s.b = {v->x, v->y1};
    } else if (const auto* u = std::get_if<VerticalHalfLineUp>(&p)) {
        s.kind = Shape::Seg;
        s.a = {u->x, u->base};
        s.b = {u->x, u->t};
    } else if (const auto* w = std::get_if<VerticalHalfLineDown>(&p)) {
        s.kind = Shape::Seg;
        s.a = {w->x, -w->t};
        s.b = {w->x, w->base};
    } else if (const auto* arc = std::get_if<Arc>(&p)) {
        s.kind = Shape::ArcCurve;
        s.c = arc->center;
        s.r = arc->radius;
        s.th0 = arc->theta0;
        s.th1 = arc->theta1;
    } else if (const auto* seg = std::get_if<Segment>(&p)) {
        s.kind = Shape::Seg;
        s.a = seg->a;
        s.b = seg->b;
    } else {
        const auto& ring = std::get<Annulus>(p);
        s = {Shape::Ring, ring.center, ring.r_outer, ring.r_inner};
    }
    return s;
}

double shape_distance(const Shape& s, complex z) {
    switch (s.kind) {
        case Shape::FilledDisk:
            return std::max(0.0, std::abs(z - s.c) - s.r);
        case Shape::Seg:
            return point_segment_distance(s.a, s.b, z);
        case Shape::ArcCurve: {
            complex d = z - s.c;
            double rho = std::abs(d);
            double rel = std::atan2(d.imag(), d.real()) - s.th0;
            rel -= std::floor(rel / kTwoPi) * kTwoPi;
            if (rel <= s.th1 - s.th0) return std::abs(rho - s.r);
            complex e0 = s.c + s.r * std::polar(1.0, s.th0);
            complex e1 = s.c + s.r * std::polar(1.0, s.th1);
            return std::min(std::abs(z - e0), std::abs(z - e1));
        }
        case Shape::Ring: {
            double rho = std::abs(z - s.c);
            if (rho < s.r2) return s.r2 - rho;
            if (rho > s.r) return rho - s.r;
            return 0.0;
        }
    }
    throw std::logic_error("bad shape");
}

bool primitive_contains(const RegionPrimitive& p, complex z) {
    if (primitive_distance(p, z) > kMembershipEps) return false;
    if (const auto* seg = std::get_if<Segment>(&p))
        if (seg->open_a && std::abs(z - seg->a) < kMembershipEps) return false;
    if (const auto* arc = std::get_if<Arc>(&p))
        if (arc->open_ends) {
            complex e0 = arc->center + arc->radius * std::polar(1.0, arc->theta0);
            complex e1 = arc->center + arc->radius * std::polar(1.0, arc->theta1);
            if (std::abs(z - e0) < kMembershipEps || std::abs(z - e1) < kMembershipEps)
                return false;
        }
    return true;
}

}  // namespace

double primitive_distance(const RegionPrimitive& p, complex z) {
    return shape_distance(shape_of(p), z);
}

double component_distance(const LabeledComponent& c, complex z) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : c.primitives) best = std::min(best, primitive_distance(p, z));
    return best;
}

std::string ComponentId::str() const {
    switch (family) {
        case Family::G0: return "G0";
        case Family::Gk: return "G" + std::to_string(index);
        case Family::Bk: return "B" + std::to_string(index);
        case Family::Lk: return "L" + std::to_string(index);
        case Family::Mk: return "M" + std::to_string(index);
        case Family::Arc: return "arc";
        case Family::Axis: return "axis";
        case Family::Ray: return "ray(" + std::to_string(index) + ")";
        case Family::Synthetic: return "synthetic(" + std::to_string(index) + ")";
    }
    throw std::logic_error("bad component family");
}

std::string set_kind_name(SetKind k) {
    return k == SetKind::Example1 ? "Example1" : "Example3";
}

const LabeledComponent* TruncatedCarlemanSet::find(const ComponentId& id) const {
    for (const auto& c : components)
        if (c.id == id) return &c;
    return nullptr;
}

TruncatedCarlemanSet build_set(SetKind kind, std::int64_t n, double t) {
    if (n < 1) throw std::invalid_argument("build_set: N must be >= 1");
    if (!(t > 1.0)) throw std::invalid_argument("build_set: T must be > 1");
    TruncatedCarlemanSet set;
    set.kind = kind;
    set.n = n;
    set.t = t;

    if (kind == SetKind::Example3) {
        set.components.push_back(
            {{ComponentId::Family::G0, 0}, {Disk{{2.0, 0.0}, 1.0}}, DomainSymbol::core()});
        for (std::int64_t k = 1; k <= n; ++k) {
            double xg = static_cast<double>(4 * k + 2);
            set.components.push_back({{ComponentId::Family::Gk, k},
                                      {Disk{{xg, 0.0}, 1.0},
                                       VerticalHalfLineUp{xg, 1.0, t},
                                       VerticalHalfLineDown{xg, -1.0, t}},
                                      DomainSymbol::g(k)});
            set.components.push_back({{ComponentId::Family::Bk, k},
                                      {Disk{{-xg, 0.0}, 1.0},
                                       VerticalHalfLineUp{-xg, 1.0, t},
                                       VerticalHalfLineDown{-xg, -1.0, t}},
                                      DomainSymbol::b(k)});
            double xl = static_cast<double>(4 * k);
            set.components.push_back({{ComponentId::Family::Lk, k},
                                      {VerticalSegment{xl, -t, t}},
                                      DomainSymbol::core()});
            set.components.push_back({{ComponentId::Family::Mk, k},
                                      {VerticalSegment{-xl, -t, t}},
                                      DomainSymbol::core()});
        }
        return set;
    }

    // Example1: half-circle arc, axis ray, angled rays arg z = pi/m
    set.components.push_back({{ComponentId::Family::Arc, 0},
                              {Arc{{0.0, 0.0}, 1.0, -std::numbers::pi / 2,
                                   std::numbers::pi / 2, true}},
                              std::nullopt});
    set.components.push_back({{ComponentId::Family::Axis, 0},
                              {Segment{{1.0, 0.0}, {t, 0.0}, true}},
                              std::nullopt});
    for (std::int64_t m = 3; m <= n + 2; ++m) {
        complex dir = std::polar(1.0, std::numbers::pi / static_cast<double>(m));
        set.components.push_back({{ComponentId::Family::Ray, m},
                                  {Segment{dir, t * dir, true}},
                                  std::nullopt});
    }
    return set;
}

std::optional<ComponentId> membership(const TruncatedCarlemanSet& set, complex z) {
    for (const auto& c : set.components)
        for (const auto& p : c.primitives)
            if (primitive_contains(p, z)) return c.id;
    return std::nullopt;
}

// --- sampling ----------------------------------------------------------------

namespace {

std::int64_t steps_for(double length, double spacing) {
    return std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(length / spacing)));
}

void sample_ring(complex c, double rho, double spacing, double phase,
                 std::vector<complex>& out) {
    if (rho <= 0.0) {
        out.push_back(c);
        return;
    }
    std::int64_t n = steps_for(kTwoPi * rho, spacing);
    for (std::int64_t j = 0; j < n; ++j) {
        double theta = kTwoPi * (static_cast<double>(j) + phase) / static_cast<double>(n);
        out.push_back(c + rho * std::polar(1.0, theta));
    }
}

void sample_radii(complex c, double r_in, double r_out, double spacing, double phase,
                  std::vector<complex>& out) {
    std::int64_t m = steps_for(r_out - r_in, spacing);
    if (phase == 0.0) {
        for (std::int64_t i = 0; i <= m; ++i)
            sample_ring(c, r_in + (r_out - r_in) * static_cast<double>(i) / static_cast<double>(m),
                        spacing, phase, out);
    } else {
        for (std::int64_t i = 0; i < m; ++i)
            sample_ring(c,
                        r_in + (r_out - r_in) * (static_cast<double>(i) + phase) /
                                   static_cast<double>(m),
                        spacing, phase, out);
    }
}

void sample_parametric(double length, double spacing, double phase, bool open_start,
                       bool open_end, const auto& at, std::vector<complex>& out) {
    std::int64_t n = steps_for(length, spacing);
    if (phase == 0.0) {
        std::int64_t first = open_start ? 1 : 0;
        std::int64_t last = open_end ? n - 1 : n;
        for (std::int64_t j = first; j <= last; ++j)
            out.push_back(at(static_cast<double>(j) / static_cast<double>(n)));
        if (first > last)  // degenerate short piece: keep its midpoint
            out.push_back(at(0.5));
    } else {
        for (std::int64_t j = 0; j < n; ++j)
            out.push_back(at((static_cast<double>(j) + phase) / static_cast<double>(n)));
    }
}

void sample_primitive(const RegionPrimitive& p, double spacing, double phase,
                      std::vector<complex>& out) {
    if (const auto* d = std::get_if<Disk>(&p)) {
        sample_radii(d->center, 0.0, d->radius, spacing, phase, out);
        return;
    }
    if (const auto* ring = std::get_if<Annulus>(&p)) {
        sample_radii(ring->center, ring->r_inner, ring->r_outer, spacing, phase, out);
        return;
    }
    if (const auto* arc = std::get_if<Arc>(&p)) {
        double span = arc->theta1 - arc->theta0;
        sample_parametric(
            arc->radius * span, spacing, phase, arc->open_ends, arc->open_ends,
            [&](double u) {
                return arc->center + arc->radius * std::polar(1.0, arc->theta0 + span * u);
            },
            out);
        return;
    }
    Shape s = shape_of(p);  // remaining variants are segments
    bool open_start = false;
    if (const auto* seg = std::get_if<Segment>(&p)) open_start = seg->open_a;
    sample_parametric(
        std::abs(s.b - s.a), spacing, phase, open_start, false,
        [&](double u) { return s.a + u * (s.b - s.a); }, out);
}

}  // namespace

std::vector<SamplePoint> sample_points(const TruncatedCarlemanSet& set, double spacing,
                                       double phase) {
    if (!(spacing > 0.0)) throw std::invalid_argument("sample_points: spacing must be > 0");
    if (phase < 0.0 || phase >= 1.0)
        throw std::invalid_argument("sample_points: phase must lie in [0,1)");
    std::vector<SamplePoint> samples;
    const auto min_count =
        static_cast<std::int64_t>(std::ceil(1.0 / spacing));
    for (const auto& c : set.components) {
        std::vector<complex> pts;
        double s = spacing;
        for (int attempt = 0; attempt < 24; ++attempt) {
            pts.clear();
            for (const auto& p : c.primitives) sample_primitive(p, s, phase, pts);
            if (static_cast<std::int64_t>(pts.size()) >= min_count) break;
            s /= 2.0;
        }
        for (complex z : pts) samples.push_back({z, c.id});
    }
    return samples;
}

// --- pairwise distance -------------------------------------------------------

namespace {

double cross(complex o, complex p, complex q) {
    return (p.real() - o.real()) * (q.imag() - o.imag()) -
           (p.imag() - o.imag()) * (q.real() - o.real());
}

double segment_segment_distance(complex a1, complex b1, complex a2, complex b2) {
    double o1 = cross(a1, b1, a2), o2 = cross(a1, b1, b2);
    double o3 = cross(a2, b2, a1), o4 = cross(a2, b2, b1);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 &&
        o3 != 0 && o4 != 0)
        return 0.0;  // proper crossing
    return std::min(std::min(point_segment_distance(a1, b1, a2),
                             point_segment_distance(a1, b1, b2)),
                    std::min(point_segment_distance(a2, b2, a1),
                             point_segment_distance(a2, b2, b1)));
}

double shape_pair_distance(const RegionPrimitive& pa, const RegionPrimitive& pb) {
    Shape a = shape_of(pa);
    Shape b = shape_of(pb);
    if (a.kind == Shape::FilledDisk && b.kind == Shape::FilledDisk)
        return std::max(0.0, std::abs(a.c - b.c) - a.r - b.r);
    if (a.kind == Shape::FilledDisk && b.kind == Shape::Seg)
        return std::max(0.0, point_segment_distance(b.a, b.b, a.c) - a.r);
    if (a.kind == Shape::Seg && b.kind == Shape::FilledDisk)
        return std::max(0.0, point_segment_distance(a.a, a.b, b.c) - b.r);
    if (a.kind == Shape::Seg && b.kind == Shape::Seg)
        return segment_segment_distance(a.a, a.b, b.a, b.b);
    // arc or annulus involved: two-sided sampled bound at a fine step
    double best = std::numeric_limits<double>::infinity();
    std::vector<complex> pts;
    sample_primitive(pa, 0.01, 0.0, pts);
    for (complex z : pts) best = std::min(best, shape_distance(b, z));
    pts.clear();
    sample_primitive(pb, 0.01, 0.0, pts);
    for (complex z : pts) best = std::min(best, shape_distance(a, z));
    return best;
}

}  // namespace

double min_pairwise_distance(const TruncatedCarlemanSet& set) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.components.size(); ++i)
        for (std::size_t j = i + 1; j < set.components.size(); ++j)
            for (const auto& pa : set.components[i].primitives)
                for (const auto& pb : set.components[j].primitives)
                    best = std::min(best, shape_pair_distance(pa, pb));
    return best;
}

// --- raster ------------------------------------------------------------------

namespace {

BoundingBox primitive_bounds(const RegionPrimitive& p) {
    Shape s = shape_of(p);
    switch (s.kind) {
        case Shape::FilledDisk:
        case Shape::ArcCurve:  // conservative: full circle box
        case Shape::Ring:
            return {s.c.real() - s.r, s.c.real() + s.r, s.c.imag() - s.r,
                    s.c.imag() + s.r};
        case Shape::Seg:
            return {std::min(s.a.real(), s.b.real()), std::max(s.a.real(), s.b.real()),
                    std::min(s.a.imag(), s.b.imag()), std::max(s.a.imag(), s.b.imag())};
    }
    throw std::logic_error("bad shape");
}

double primitive_thickness(const RegionPrimitive& p) {
    Shape s = shape_of(p);
    switch (s.kind) {
        case Shape::FilledDisk: return s.r;
        case Shape::Ring: return s.r - s.r2;
        case Shape::ArcCurve: return s.r * (s.th1 - s.th0);
        case Shape::Seg: return std::abs(s.b - s.a);
    }
    throw std::logic_error("bad shape");
}

}  // namespace

BoundingBox set_bounds(const TruncatedCarlemanSet& set) {
    BoundingBox b{std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
    for (const auto& c : set.components)
        for (const auto& p : c.primitives) {
            BoundingBox pb = primitive_bounds(p);
            b.x0 = std::min(b.x0, pb.x0);
            b.x1 = std::max(b.x1, pb.x1);
            b.y0 = std::min(b.y0, pb.y0);
            b.y1 = std::max(b.y1, pb.y1);
        }
    return b;
}

complex Raster::pixel_center(std::int64_t px, std::int64_t py) const {
    return {box.x0 + (static_cast<double>(px) + 0.5) / resolution,
            box.y1 - (static_cast<double>(py) + 0.5) / resolution};
}

Raster rasterize(const TruncatedCarlemanSet& set, const BoundingBox& box,
                 double resolution) {
    if (!(resolution > 0.0)) throw std::invalid_argument("rasterize: resolution must be > 0");
    if (box.x1 <= box.x0 || box.y1 <= box.y0)
        throw std::invalid_argument("rasterize: degenerate box");
    Raster r;
    r.box = box;
    r.resolution = resolution;
    r.width = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil((box.x1 - box.x0) * resolution)));
    r.height = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil((box.y1 - box.y0) * resolution)));
    r.label.assign(static_cast<std::size_t>(r.width * r.height), -1);

    const double reach = 0.5 * std::numbers::sqrt2 / resolution;
    for (std::size_t ci = 0; ci < set.components.size(); ++ci) {
        for (const auto& p : set.components[ci].primitives) {
            BoundingBox pb = primitive_bounds(p);
            auto px0 = static_cast<std::int64_t>(
                std::floor((pb.x0 - reach - box.x0) * resolution));
            auto px1 = static_cast<std::int64_t>(
                std::ceil((pb.x1 + reach - box.x0) * resolution));
            auto py0 = static_cast<std::int64_t>(
                std::floor((box.y1 - pb.y1 - reach) * resolution));
            auto py1 = static_cast<std::int64_t>(
                std::ceil((box.y1 - pb.y0 + reach) * resolution));
            px0 = std::clamp<std::int64_t>(px0, 0, r.width - 1);
            px1 = std::clamp<std::int64_t>(px1, 0, r.width - 1);
            py0 = std::clamp<std::int64_t>(py0, 0, r.height - 1);
            py1 = std::clamp<std::int64_t>(py1, 0, r.height - 1);
            for (std::int64_t py = py0; py <= py1; ++py)
                for (std::int64_t px = px0; px <= px1; ++px) {
                    auto idx = static_cast<std::size_t>(py * r.width + px);
                    if (r.label[idx] >= 0) continue;
                    if (primitive_distance(p, r.pixel_center(px, py)) <= reach)
                        r.label[idx] = static_cast<std::int32_t>(ci);
                }
        }
    }
    return r;
}

bool complement_connected(const TruncatedCarlemanSet& set, const BoundingBox& box,
                          double resolution) {
    if (resolution < 2.0)
        throw std::invalid_argument(
            "complement_connected: resolution too coarse (need >= 2 px/unit)");
    for (const auto& c : set.components)
        for (const auto& p : c.primitives)
            if (primitive_thickness(p) * resolution < 1.0)
                throw std::invalid_argument(
                    "complement_connected: resolution too coarse for component " +
                    c.id.str());
    if (!box.strictly_contains(set_bounds(set)))
        throw std::invalid_argument(
            "complement_connected: box must strictly contain the set");

    Raster r = rasterize(set, box, resolution);
    std::vector<char> seen(r.label.size(), 0);
    std::deque<std::pair<std::int64_t, std::int64_t>> queue;
    auto push = [&](std::int64_t px, std::int64_t py) {
        if (px < 0 || px >= r.width || py < 0 || py >= r.height) return;
        auto idx = static_cast<std::size_t>(py * r.width + px);
        if (seen[idx] || r.label[idx] >= 0) return;
        seen[idx] = 1;
        queue.emplace_back(px, py);
    };
    for (std::int64_t px = 0; px < r.width; ++px) {
        push(px, 0);
        push(px, r.height - 1);
    }
    for (std::int64_t py = 0; py < r.height; ++py) {
        push(0, py);
        push(r.width - 1, py);
    }
    while (!queue.empty()) {
        auto [px, py] = queue.front();
        queue.pop_front();
        push(px + 1, py);
        push(px - 1, py);
        push(px, py + 1);
        push(px, py - 1);
    }
    for (std::size_t i = 0; i < r.label.size(); ++i)
        if (r.label[i] < 0 && !seen[i]) return false;
    return true;
}

std::array<unsigned char, 3> region_color(std::int32_t component_index) {
    // fixed palette, cycled by component index; negative = white background
    static constexpr std::array<std::array<unsigned char, 3>, 16> palette{{
        {31, 119, 180}, {255, 127, 14},  {44, 160, 44},   {214, 39, 40},
        {148, 103, 189}, {140, 86, 75},  {227, 119, 194}, {127, 127, 127},
        {188, 189, 34}, {23, 190, 207},  {174, 199, 232}, {255, 187, 120},
        {152, 223, 138}, {255, 152, 150}, {197, 176, 213}, {196, 156, 148},
    }};
    if (component_index < 0) return {255, 255, 255};
    return palette[static_cast<std::size_t>(component_index) % palette.size()];
}

void write_raster_ppm(const Raster& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "P6\n" << r.width << " " << r.height << "\n255\n";
    std::string bytes;
    bytes.reserve(r.label.size() * 3);
    for (std::int32_t v : r.label) {
        const auto rgb = region_color(v);
        bytes.push_back(static_cast<char>(rgb[0]));
        bytes.push_back(static_cast<char>(rgb[1]));
        bytes.push_back(static_cast<char>(rgb[2]));
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing: " + path);
}

// --- JSON ----------------------------------------------------------------------

namespace {

ordered_json cx(complex z) { return ordered_json{z.real(), z.imag()}; }

ordered_json primitive_to_json(const RegionPrimitive& p) {
    if (const auto* d = std::get_if<Disk>(&p))
        return {{"type", "disk"}, {"center", cx(d->center)}, {"radius", d->radius}};
    if (const auto* v = std::get_if<VerticalSegment>(&p))
        return {{"type", "vertical_segment"}, {"x", v->x}, {"y0", v->y0}, {"y1", v->y1}};
    if (const auto* u = std::get_if<VerticalHalfLineUp>(&p))
        return {{"type", "vertical_half_line_up"}, {"x", u->x}, {"base", u->base}, {"t", u->t}};
    if (const auto* w = std::get_if<VerticalHalfLineDown>(&p))
        return {{"type", "vertical_half_line_down"}, {"x", w->x}, {"base", w->base}, {"t", w->t}};
    if (const auto* a = std::get_if<Arc>(&p))
        return {{"type", "arc"},       {"center", cx(a->center)},
                {"radius", a->radius}, {"theta0", a->theta0},
                {"theta1", a->theta1}, {"open_ends", a->open_ends}};
    if (const auto* s = std::get_if<Segment>(&p))
        return {{"type", "segment"}, {"a", cx(s->a)}, {"b", cx(s->b)}, {"open_a", s->open_a}};
    const auto& ring = std::get<Annulus>(p);
    return {{"type", "annulus"},
            {"center", cx(ring.center)},
            {"r_inner", ring.r_inner},
            {"r_outer", ring.r_outer}};
}

}  // namespace

ordered_json set_to_json(const TruncatedCarlemanSet& set) {
    ordered_json components = ordered_json::array();
    for (const auto& c : set.components) {
        ordered_json prims = ordered_json::array();
        for (const auto& p : c.primitives) prims.push_back(primitive_to_json(p));
        components.push_back(
            {{"id", c.id.str()},
             {"symbol", c.symbol ? ordered_json(c.symbol->str()) : ordered_json(nullptr)},
             {"primitives", std::move(prims)}});
    }
    return ordered_json{{"kind", set_kind_name(set.kind)},
                        {"N", set.n},
                        {"T", set.t},
                        {"components", std::move(components)}};
}

}  // namespace wander
