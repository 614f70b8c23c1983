#include "wander/approximation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wander {

namespace {

constexpr double kBreakdownRelTol = 1e-12;

complex core_target() { return complex(std::log(2.0), 0.0); }

complex log_with_sign(double magnitude, bool negative) {
    // log of a nonzero real number: negative reals pick up the pi*i branch.
    return complex(std::log(magnitude), negative ? std::acos(-1.0) : 0.0);
}

complex target_value(TargetName name, const ComponentId& id) {
    switch (id.family) {
        case ComponentId::Family::G0:
        case ComponentId::Family::Lk:
        case ComponentId::Family::Mk:
            return core_target();
        case ComponentId::Family::Bk:
            return log_with_sign(4.0 * static_cast<double>(id.index) + 6.0, true);
        case ComponentId::Family::Gk: {
            const auto k = id.index;
            switch (name) {
                case TargetName::Alpha:
                    return log_with_sign(6.0, true);
                case TargetName::Beta:
                    if (k == 1) return log_with_sign(6.0, true);
                    return log_with_sign(4.0 * static_cast<double>(k) - 2.0, false);
                case TargetName::Gamma:
                    if (k == 1) return log_with_sign(10.0, true);
                    if (k == 2) return log_with_sign(6.0, true);
                    return log_with_sign(4.0 * static_cast<double>(k) - 6.0, false);
            }
            throw std::logic_error("unhandled target name");
        }
        default:
            throw std::invalid_argument("component " + id.str() +
                                        " carries no target value");
    }
}

ordered_json complex_json(complex z) { return ordered_json::array({z.real(), z.imag()}); }

complex complex_from_json(const ordered_json& j) {
    return complex(j.at(0).get<double>(), j.at(1).get<double>());
}

// Weighted inner product <u,v> = (1/n) sum conj(u_i) v_i keeps basis vectors
// O(1) in magnitude independent of sample count.
complex dot_w(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    return u.dot(v) / static_cast<double>(u.size());
}

double norm_w(const Eigen::VectorXcd& u) {
    return u.norm() / std::sqrt(static_cast<double>(u.size()));
}

struct Basis {
    Eigen::MatrixXcd q;                         // columns orthonormal w.r.t. dot_w
    Eigen::MatrixXcd d;                         // optional: d/dw of each column
    std::vector<std::vector<complex>> h;        // h[k] has k+2 entries
};

// Builds up to `max_cols` orthonormal basis vectors for span{1, w, w^2, ...}
// on the sample points (optionally with their w-derivatives).  Stops early
// (benignly) only when the span of the points is exhausted; an earlier
// breakdown signals coincident points.
Basis build_basis(const Eigen::VectorXcd& w, std::int64_t max_cols, double lambda,
                  bool with_derivative) {
    const auto n = w.size();
    Basis basis;
    basis.q.resize(n, max_cols);
    basis.q.col(0).setOnes();
    if (with_derivative) {
        basis.d.resize(n, max_cols);
        basis.d.col(0).setZero();
    }
    for (std::int64_t k = 0; k + 1 < max_cols; ++k) {
        Eigen::VectorXcd v = w.cwiseProduct(basis.q.col(k));
        Eigen::VectorXcd vd;
        if (with_derivative) vd = basis.q.col(k) + w.cwiseProduct(basis.d.col(k));
        const double before = std::max(norm_w(v), 1.0);
        std::vector<complex> column(static_cast<std::size_t>(k) + 2);
        for (std::int64_t j = 0; j <= k; ++j) {  // modified Gram-Schmidt
            const complex hjk = dot_w(basis.q.col(j), v);
            v -= hjk * basis.q.col(j);
            if (with_derivative) vd -= hjk * basis.d.col(j);
            column[static_cast<std::size_t>(j)] = hjk;
        }
        const double next = norm_w(v);
        if (next <= kBreakdownRelTol * before) {
            if (lambda == 0.0)
                throw std::runtime_error(
                    "rank-deficient design at degree " + std::to_string(k + 1) +
                    ": samples are not distinct enough for the requested degree; "
                    "raise lambda or add samples");
            basis.q.conservativeResize(Eigen::NoChange, k + 1);
            if (with_derivative) basis.d.conservativeResize(Eigen::NoChange, k + 1);
            return basis;
        }
        column[static_cast<std::size_t>(k) + 1] = next;
        basis.q.col(k + 1) = v / next;
        if (with_derivative) basis.d.col(k + 1) = vd / next;
        basis.h.push_back(std::move(column));
    }
    return basis;
}

}  // namespace

std::string target_name_str(TargetName name) {
    switch (name) {
        case TargetName::Alpha: return "alpha";
        case TargetName::Beta: return "beta";
        case TargetName::Gamma: return "gamma";
    }
    throw std::logic_error("unhandled target name");
}

TargetName target_for_letter(char letter) {
    switch (letter) {
        case 'f': return TargetName::Alpha;
        case 'g': return TargetName::Beta;
        case 'h': return TargetName::Gamma;
        default: throw std::invalid_argument(std::string("no target for letter '") + letter + "'");
    }
}

char letter_for_target(TargetName name) {
    switch (name) {
        case TargetName::Alpha: return 'f';
        case TargetName::Beta: return 'g';
        case TargetName::Gamma: return 'h';
    }
    throw std::logic_error("unhandled target name");
}

TargetName parse_target_name(const std::string& text) {
    if (text == "alpha") return TargetName::Alpha;
    if (text == "beta") return TargetName::Beta;
    if (text == "gamma") return TargetName::Gamma;
    if (text.size() == 1) return target_for_letter(text[0]);
    throw std::invalid_argument("unknown target name: " + text);
}

complex PiecewiseTarget::at(const ComponentId& id) const {
    const auto it = value.find(id);
    if (it == value.end())
        throw std::invalid_argument("no target value for component " + id.str());
    return it->second;
}

PiecewiseTarget target_profile(TargetName name, const TruncatedCarlemanSet& set) {
    PiecewiseTarget profile;
    profile.name = name;
    for (const auto& component : set.components)
        profile.value[component.id] = target_value(name, component.id);
    return profile;
}

double safe_delta(double m) {
    if (!(m > 0.0)) throw std::invalid_argument("safe_delta needs m > 0");
    return std::log1p(1.0 / (2.0 * m));
}

double ToleranceProfile::at(const ComponentId& id) const {
    const auto it = value.find(id);
    if (it == value.end())
        throw std::invalid_argument("no tolerance for component " + id.str());
    return it->second;
}

ToleranceProfile tolerance_profile(TargetName name, const TruncatedCarlemanSet& set) {
    ToleranceProfile profile;
    profile.name = name;
    for (const auto& component : set.components) {
        const complex w0 = target_value(name, component.id);
        profile.value[component.id] = safe_delta(std::exp(w0.real()));
    }
    return profile;
}

complex Approximant::operator()(complex z) const {
    const complex w = scale * (z - shift);
    complex acc = 0.0;
    std::vector<complex> e(coefficients.size());
    if (!e.empty()) {
        e[0] = 1.0;
        acc = coefficients[0];
    }
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
        complex v = w * e[k];
        const auto& column = hessenberg[k];
        for (std::size_t j = 0; j <= k; ++j) v -= column[j] * e[j];
        e[k + 1] = v / column[k + 1];
        acc += coefficients[k + 1] * e[k + 1];
    }
    return acc;
}

FitResult fit_approximant(const TruncatedCarlemanSet& set, const PiecewiseTarget& target,
                          std::int64_t degree, double lambda, double spacing) {
    if (degree < 0) throw std::invalid_argument("degree must be >= 0");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    const auto points = sample_points(set, spacing);
    const auto n = static_cast<std::int64_t>(points.size());
    if (n == 0) throw std::invalid_argument("no samples to fit");

    BoundingBox box{points[0].z.real(), points[0].z.real(),
                    points[0].z.imag(), points[0].z.imag()};
    for (const auto& p : points) {
        box.x0 = std::min(box.x0, p.z.real());
        box.x1 = std::max(box.x1, p.z.real());
        box.y0 = std::min(box.y0, p.z.imag());
        box.y1 = std::max(box.y1, p.z.imag());
    }
    const complex shift((box.x0 + box.x1) / 2.0, (box.y0 + box.y1) / 2.0);
    double radius = 0.0;
    for (const auto& p : points) radius = std::max(radius, std::abs(p.z - shift));
    const double scale = radius > 0.0 ? 1.0 / radius : 1.0;

    Eigen::VectorXcd w(n), b(n);
    for (std::int64_t i = 0; i < n; ++i) {
        w(i) = scale * (points[static_cast<std::size_t>(i)].z - shift);
        b(i) = target.at(points[static_cast<std::size_t>(i)].id);
    }

    const std::int64_t max_cols = std::min<std::int64_t>(degree + 1, n);
    Basis basis = build_basis(w, max_cols, lambda, false);
    const auto cols = basis.q.cols();

    Eigen::VectorXcd coeffs;
    if (lambda == 0.0) {
        coeffs = basis.q.householderQr().solve(b);
    } else {
        Eigen::MatrixXcd a(n + cols, cols);
        a.topRows(n) = basis.q;
        a.bottomRows(cols) =
            std::sqrt(lambda) * Eigen::MatrixXcd::Identity(cols, cols);
        Eigen::VectorXcd rhs(n + cols);
        rhs.head(n) = b;
        rhs.tail(cols).setZero();
        coeffs = a.householderQr().solve(rhs);
    }

    FitResult result;
    result.approximant.shift = shift;
    result.approximant.scale = scale;
    result.approximant.hessenberg = std::move(basis.h);
    result.approximant.coefficients.assign(coeffs.data(), coeffs.data() + cols);
    const Eigen::VectorXcd r = basis.q * coeffs - b;
    result.max_residual = r.size() > 0 ? r.cwiseAbs().maxCoeff() : 0.0;
    result.ss_residual = r.squaredNorm();
    result.sample_count = n;
    return result;
}

RefinedFit fit_refined(const TruncatedCarlemanSet& set, const PiecewiseTarget& target,
                       const ToleranceProfile& tolerance, std::int64_t degree,
                       double spacing, const RefinementConfig& config) {
    if (degree < 0) throw std::invalid_argument("degree must be >= 0");
    if (config.lawson_iterations < 1)
        throw std::invalid_argument("need at least one solve");
    auto points = sample_points(set, spacing);
    {
        auto interleaved = sample_points(set, spacing, 0.5);
        points.insert(points.end(), interleaved.begin(), interleaved.end());
    }
    const auto n = static_cast<std::int64_t>(points.size());
    if (n == 0) throw std::invalid_argument("no samples to fit");

    BoundingBox box{points[0].z.real(), points[0].z.real(),
                    points[0].z.imag(), points[0].z.imag()};
    for (const auto& p : points) {
        box.x0 = std::min(box.x0, p.z.real());
        box.x1 = std::max(box.x1, p.z.real());
        box.y0 = std::min(box.y0, p.z.imag());
        box.y1 = std::max(box.y1, p.z.imag());
    }
    const complex shift((box.x0 + box.x1) / 2.0, (box.y0 + box.y1) / 2.0);
    double radius = 0.0;
    for (const auto& p : points) radius = std::max(radius, std::abs(p.z - shift));
    const double scale = radius > 0.0 ? 1.0 / radius : 1.0;

    Eigen::VectorXcd w(n), b(n);
    Eigen::VectorXd delta(n);
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& p = points[static_cast<std::size_t>(i)];
        w(i) = scale * (p.z - shift);
        b(i) = target.at(p.id);
        delta(i) = tolerance.at(p.id);
    }

    const std::int64_t max_cols = std::min<std::int64_t>(degree + 1, n);
    const bool penalize = config.derivative_penalty > 0.0;
    Basis basis = build_basis(w, max_cols, 0.0, penalize);
    const auto cols = basis.q.cols();
    const double lam_d = config.derivative_penalty * spacing * scale;

    RefinedFit result;
    Eigen::VectorXcd best_c;
    Eigen::VectorXd weight = delta.cwiseInverse();
    for (std::int64_t it = 0; it < config.lawson_iterations; ++it) {
        weight /= weight.maxCoeff();
        Eigen::VectorXcd c;
        if (penalize) {
            Eigen::MatrixXcd a(2 * n, cols);
            a.topRows(n) = weight.asDiagonal() * basis.q;
            a.bottomRows(n) = (lam_d * delta.cwiseInverse()).asDiagonal() * basis.d;
            Eigen::VectorXcd rhs(2 * n);
            rhs.head(n) = weight.cwiseProduct(b);
            rhs.tail(n).setZero();
            c = a.householderQr().solve(rhs);
        } else {
            const Eigen::MatrixXcd a = weight.asDiagonal() * basis.q;
            const Eigen::VectorXcd rhs = weight.cwiseProduct(b);
            c = a.householderQr().solve(rhs);
        }
        const Eigen::VectorXcd r = basis.q * c - b;
        std::map<ComponentId, double> ratios;
        double max_ratio = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            const double ratio = std::abs(r(i)) / delta(i);
            max_ratio = std::max(max_ratio, ratio);
            auto [pos, inserted] =
                ratios.try_emplace(points[static_cast<std::size_t>(i)].id, ratio);
            if (!inserted) pos->second = std::max(pos->second, ratio);
        }
        if (it == 0 || max_ratio < result.max_ratio) {
            result.max_ratio = max_ratio;
            result.component_ratio = std::move(ratios);
            result.best_iteration = it;
            best_c = c;
            result.fit.max_residual = r.cwiseAbs().maxCoeff();
            result.fit.ss_residual = r.squaredNorm();
        }
        weight = weight.cwiseProduct(
            (r.cwiseAbs().cwiseQuotient(delta)).cwiseMax(1e-12).cwiseSqrt());
    }

    result.fit.approximant.shift = shift;
    result.fit.approximant.scale = scale;
    result.fit.approximant.hessenberg = std::move(basis.h);
    result.fit.approximant.coefficients.assign(best_c.data(), best_c.data() + cols);
    result.fit.sample_count = n;
    return result;
}

VerificationReport verify_mapping(const std::vector<EntireMap>& chain,
                                  const TruncatedCarlemanSet& set,
                                  const TransitionTable& table, double fresh_spacing) {
    std::vector<MapFn> fns;
    fns.reserve(chain.size());
    for (const auto& map : chain) fns.emplace_back(map);
    return verify_mapping(fns, set, table, fresh_spacing);
}

VerificationReport verify_mapping(const std::vector<MapFn>& chain,
                                  const TruncatedCarlemanSet& set,
                                  const TransitionTable& table, double fresh_spacing) {
    if (chain.size() != table.word.size())
        throw std::invalid_argument("chain length " + std::to_string(chain.size()) +
                                    " does not match word '" + table.word + "'");
    VerificationReport report;
    report.word = table.word;
    report.spacing = fresh_spacing;

    std::map<ComponentId, VerificationRow> rows;
    for (const auto& component : set.components) {
        if (!component.symbol)
            throw std::invalid_argument("component " + component.id.str() +
                                        " carries no symbol to verify against");
        VerificationRow row;
        row.id = component.id;
        row.symbol = *component.symbol;
        const auto rule = table.at_checked(*component.symbol);
        row.expected_center = complex(static_cast<double>(rule.center), 0.0);
        rows[component.id] = row;
    }

    const auto points = sample_points(set, fresh_spacing, 0.5);
    for (const auto& p : points) {
        complex v = p.z;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) v = (*it)(v);
        auto& row = rows.at(p.id);
        row.samples += 1;
        row.max_residual = std::max(row.max_residual, std::abs(v - row.expected_center));
    }

    report.samples = static_cast<std::int64_t>(points.size());
    report.pass = true;
    for (const auto& component : set.components) {
        auto row = rows.at(component.id);
        row.pass = row.samples > 0 && row.max_residual < row.allowed;
        report.pass = report.pass && row.pass;
        report.rows.push_back(std::move(row));
    }
    return report;
}

ordered_json approximant_to_json(const Approximant& a) {
    ordered_json j;
    j["kind"] = "arnoldi";
    j["shift"] = complex_json(a.shift);
    j["scale"] = a.scale;
    j["degree"] = a.degree();
    ordered_json h = ordered_json::array();
    for (const auto& column : a.hessenberg) {
        ordered_json col = ordered_json::array();
        for (const auto& entry : column) col.push_back(complex_json(entry));
        h.push_back(std::move(col));
    }
    j["hessenberg"] = std::move(h);
    ordered_json c = ordered_json::array();
    for (const auto& coeff : a.coefficients) c.push_back(complex_json(coeff));
    j["coefficients"] = std::move(c);
    return j;
}

Approximant approximant_from_json(const ordered_json& j) {
    if (j.at("kind").get<std::string>() != "arnoldi")
        throw std::invalid_argument("unknown approximant kind");
    Approximant a;
    a.shift = complex_from_json(j.at("shift"));
    a.scale = j.at("scale").get<double>();
    for (const auto& col : j.at("hessenberg")) {
        std::vector<complex> column;
        for (const auto& entry : col) column.push_back(complex_from_json(entry));
        a.hessenberg.push_back(std::move(column));
    }
    for (const auto& entry : j.at("coefficients"))
        a.coefficients.push_back(complex_from_json(entry));
    if (a.coefficients.size() != a.hessenberg.size() + 1)
        throw std::invalid_argument("coefficient count does not match basis size");
    return a;
}

ordered_json report_to_json(const VerificationReport& r) {
    ordered_json j;
    j["word"] = r.word;
    j["spacing"] = r.spacing;
    j["samples"] = r.samples;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
        ordered_json item;
        item["id"] = row.id.str();
        item["symbol"] = row.symbol.str();
        item["expected_center"] = complex_json(row.expected_center);
        item["samples"] = row.samples;
        item["max_residual"] = row.max_residual;
        item["allowed"] = row.allowed;
        item["pass"] = row.pass;
        rows.push_back(std::move(item));
    }
    j["components"] = std::move(rows);
    j["pass"] = r.pass;
    return j;
}

}  // namespace wander
