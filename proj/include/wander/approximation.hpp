#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wander/geometry.hpp"
#include "wander/tables.hpp"

namespace wander {

// The three piecewise-constant log-targets; exponentiating a fitted
// approximant of one of them realizes the corresponding generator map.
enum class TargetName { Alpha, Beta, Gamma };  // alpha <-> f, beta <-> g, gamma <-> h

std::string target_name_str(TargetName name);
TargetName target_for_letter(char letter);
char letter_for_target(TargetName name);
TargetName parse_target_name(const std::string& text);  // "alpha" | "beta" | "gamma"

struct PiecewiseTarget {
    TargetName name = TargetName::Alpha;
    std::map<ComponentId, complex> value;

    complex at(const ComponentId& id) const;  // throws on unknown component
};

// Per-component constants: exp(value) is exactly the disk center the
// matching generator table assigns to the component's symbol.
PiecewiseTarget target_profile(TargetName name, const TruncatedCarlemanSet& set);

// delta = ln(1 + 1/(2m)): |w - w0| <= delta and |e^{w0}| = m imply
// |e^w - e^{w0}| <= m(e^delta - 1) = 1/2.
double safe_delta(double m);

struct ToleranceProfile {
    TargetName name = TargetName::Alpha;
    std::map<ComponentId, double> value;

    double at(const ComponentId& id) const;
};

// delta per component computed as safe_delta(|exp(target)|) from the
// matching target profile.
ToleranceProfile tolerance_profile(TargetName name, const TruncatedCarlemanSet& set);

// Polynomial in the normalized variable w = scale * (z - shift), expressed
// in a discrete orthogonal basis built by an Arnoldi recurrence on the
// training points; `hessenberg` stores the recurrence coefficients (column
// k holds h(0..k+1, k)), which makes evaluation at new points deterministic
// and numerically stable at high degree.
struct Approximant {
    complex shift;
    double scale = 1.0;
    std::vector<std::vector<complex>> hessenberg;
    std::vector<complex> coefficients;  // one per basis polynomial

    std::int64_t degree() const {
        return static_cast<std::int64_t>(coefficients.size()) - 1;
    }
    complex operator()(complex z) const;
};

struct FitResult {
    Approximant approximant;
    double max_residual = 0.0;  // max |p(z_i) - target(z_i)| on training points
    double ss_residual = 0.0;   // sum of squared residual moduli
    std::int64_t sample_count = 0;
};

// Least-squares fit of a degree <= `degree` polynomial to the target values
// on phase-0 samples of the set.  lambda > 0 adds ridge rows on the basis
// coefficients.  Throws std::runtime_error when the sample set cannot carry
// the requested degree at lambda = 0 (rank-deficient design); with distinct
// points and fewer samples than coefficients the fit degrades to exact
// interpolation instead.
FitResult fit_approximant(const TruncatedCarlemanSet& set, const PiecewiseTarget& target,
                          std::int64_t degree, double lambda, double spacing);

struct EntireMap {
    Approximant inner;

    complex operator()(complex z) const { return std::exp(inner(z)); }
};

struct RefinementConfig {
    std::int64_t lawson_iterations = 1;  // 1 = one tolerance-weighted solve
    double derivative_penalty = 0.3;     // relative to the grid step
};

struct RefinedFit {
    FitResult fit;
    std::map<ComponentId, double> component_ratio;  // max |p - target| / delta
    double max_ratio = 0.0;
    std::int64_t best_iteration = 0;
};

// Tolerance-aware fit used to produce the shipped maps: trains on the union
// of the phase-0 and phase-1/2 lattices, weights rows by 1/delta, optionally
// re-weights via Lawson iterations (keeping the best iterate), and penalizes
// the derivative on the set to suppress oscillation between grid points (the
// target is locally constant, so the penalty is bias-free).  Deterministic
// for a fixed configuration.
RefinedFit fit_refined(const TruncatedCarlemanSet& set, const PiecewiseTarget& target,
                       const ToleranceProfile& tolerance, std::int64_t degree,
                       double spacing, const RefinementConfig& config = {});

struct VerificationRow {
    ComponentId id;
    DomainSymbol symbol;
    complex expected_center;
    std::int64_t samples = 0;
    double max_residual = 0.0;
    double allowed = kTargetDiskRadius;
    bool pass = false;
};

struct VerificationReport {
    std::string word;
    double spacing = 0.0;
    std::int64_t samples = 0;
    std::vector<VerificationRow> rows;
    bool pass = false;
};

using MapFn = std::function<complex(complex)>;

// Evaluates the composed maps (chain[0] outermost, rightmost applied first)
// on fresh phase-1/2 samples of every component and measures
// max |F(z) - c| against the center c the table assigns to the component's
// symbol; a row passes iff the residual stays below the disk radius 1/2.
// Requires chain length == word length and symbols on every component.
VerificationReport verify_mapping(const std::vector<MapFn>& chain,
                                  const TruncatedCarlemanSet& set,
                                  const TransitionTable& table, double fresh_spacing);
VerificationReport verify_mapping(const std::vector<EntireMap>& chain,
                                  const TruncatedCarlemanSet& set,
                                  const TransitionTable& table, double fresh_spacing);

ordered_json approximant_to_json(const Approximant& a);
Approximant approximant_from_json(const ordered_json& j);
ordered_json report_to_json(const VerificationReport& r);

}  // namespace wander
