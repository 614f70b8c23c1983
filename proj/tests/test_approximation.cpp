#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "wander/approximation.hpp"
#include "wander/geometry.hpp"
#include "wander/tables.hpp"

using namespace wander;

namespace {

// Piecewise-exact stand-in for a perfectly fitted map: looks up the
// component of the argument and returns the exponentiated target.
MapFn ideal_map(const TruncatedCarlemanSet& set, TargetName name) {
    const auto profile = target_profile(name, set);
    return [&set, profile](complex z) {
        const auto id = membership(set, z);
        if (!id) throw std::runtime_error("ideal map queried off the set");
        return std::exp(profile.at(*id));
    };
}

}  // namespace

TEST_CASE("safe delta closed forms") {
    CHECK(safe_delta(2.0) == doctest::Approx(std::log(5.0 / 4.0)).epsilon(1e-14));
    CHECK(safe_delta(6.0) == doctest::Approx(std::log(13.0 / 12.0)).epsilon(1e-14));
    CHECK(safe_delta(10.0) == doctest::Approx(std::log(21.0 / 20.0)).epsilon(1e-14));
    CHECK_THROWS_AS(safe_delta(0.0), std::invalid_argument);
    CHECK_THROWS_AS(safe_delta(-3.0), std::invalid_argument);
}

TEST_CASE("target names pair with generator letters") {
    CHECK(target_for_letter('f') == TargetName::Alpha);
    CHECK(target_for_letter('g') == TargetName::Beta);
    CHECK(target_for_letter('h') == TargetName::Gamma);
    CHECK(letter_for_target(TargetName::Gamma) == 'h');
    CHECK(parse_target_name("beta") == TargetName::Beta);
    CHECK(parse_target_name("f") == TargetName::Alpha);
    CHECK(target_name_str(TargetName::Alpha) == "alpha");
    CHECK_THROWS_AS(parse_target_name("delta"), std::invalid_argument);
    CHECK_THROWS_AS(target_for_letter('x'), std::invalid_argument);
}

TEST_CASE("targets exponentiate to the generator table centers") {
    const auto set = build_set(SetKind::Example3, 6, 3.0);
    for (char letter : {'f', 'g', 'h'}) {
        const auto table = generator_table(letter);
        const auto profile = target_profile(target_for_letter(letter), set);
        for (const auto& component : set.components) {
            REQUIRE(component.symbol.has_value());
            const auto rule = table.at_checked(*component.symbol);
            const complex image = std::exp(profile.at(component.id));
            const complex center(static_cast<double>(rule.center), 0.0);
            CHECK(std::abs(image - center) < 1e-9);
        }
    }
}

TEST_CASE("negative centers take the imaginary-pi branch") {
    const auto set = build_set(SetKind::Example3, 3, 2.0);
    const auto alpha = target_profile(TargetName::Alpha, set);
    const auto beta = target_profile(TargetName::Beta, set);
    const auto gamma = target_profile(TargetName::Gamma, set);
    const ComponentId g2{ComponentId::Family::Gk, 2};
    const ComponentId b2{ComponentId::Family::Bk, 2};
    const double pi = std::acos(-1.0);
    CHECK(alpha.at(g2).imag() == doctest::Approx(pi));        // -> -6
    CHECK(beta.at(g2).imag() == doctest::Approx(0.0));        // -> 6
    CHECK(beta.at(g2).real() == doctest::Approx(std::log(6.0)));
    CHECK(gamma.at(g2).imag() == doctest::Approx(pi));        // -> -6
    CHECK(alpha.at(b2).imag() == doctest::Approx(pi));        // -> -14
    CHECK(alpha.at(b2).real() == doctest::Approx(std::log(14.0)));
    CHECK_THROWS_AS(alpha.at(ComponentId{ComponentId::Family::Gk, 9}),
                    std::invalid_argument);
}

TEST_CASE("tolerance radius is sound and sharp under exp") {
    const auto set = build_set(SetKind::Example3, 3, 4.0);
    const double pi = std::acos(-1.0);
    for (auto name : {TargetName::Alpha, TargetName::Beta, TargetName::Gamma}) {
        const auto targets = target_profile(name, set);
        const auto tolerances = tolerance_profile(name, set);
        for (const auto& component : set.components) {
            const complex w0 = targets.at(component.id);
            const double delta = tolerances.at(component.id);
            const complex center = std::exp(w0);
            double worst = 0.0;
            bool sound = true;
            for (int j = 0; j < 1000; ++j) {
                const double theta = 2.0 * pi * j / 1000.0;
                const complex w = w0 + delta * complex(std::cos(theta), std::sin(theta));
                const double residual = std::abs(std::exp(w) - center);
                worst = std::max(worst, residual);
                sound = sound && residual <= 0.5 + 1e-12;
            }
            CHECK(sound);
            CHECK(worst > 0.5 - 1e-9);  // the bound is attained, not slack
        }
    }
}

TEST_CASE("tolerances equal safe delta of the center magnitude") {
    const auto set = build_set(SetKind::Example3, 2, 2.0);
    const auto tolerances = tolerance_profile(TargetName::Gamma, set);
    CHECK(tolerances.at(ComponentId{ComponentId::Family::G0, 0}) ==
          doctest::Approx(std::log(5.0 / 4.0)));
    CHECK(tolerances.at(ComponentId{ComponentId::Family::Gk, 1}) ==
          doctest::Approx(std::log(21.0 / 20.0)));  // gamma sends G(1) near -10
    CHECK(tolerances.at(ComponentId{ComponentId::Family::Bk, 2}) ==
          doctest::Approx(std::log(29.0 / 28.0)));  // |center| = 14
    CHECK(tolerances.at(ComponentId{ComponentId::Family::Lk, 2}) ==
          doctest::Approx(std::log(5.0 / 4.0)));
}

TEST_CASE("least-squares residual envelope shrinks with degree") {
    const auto set = build_set(SetKind::Example3, 1, 2.0);
    const auto target = target_profile(TargetName::Alpha, set);
    double previous_ssr = 0.0;
    double previous_max = 0.0;
    bool first = true;
    for (std::int64_t degree : {5, 10, 20, 40, 80}) {
        const auto fit = fit_approximant(set, target, degree, 0.0, 0.15);
        CHECK(fit.sample_count > degree);
        if (!first) {
            CHECK(fit.ss_residual <= previous_ssr * (1.0 + 1e-9));
        }
        previous_ssr = fit.ss_residual;
        previous_max = fit.max_residual;
        first = false;
    }
    CHECK(previous_max < 2.0);  // alpha jumps are ~pi; even degree 80 stays coarse
}

TEST_CASE("training residual agrees with recurrence evaluation") {
    const auto set = build_set(SetKind::Example3, 1, 2.0);
    const auto target = target_profile(TargetName::Beta, set);
    const double spacing = 0.2;
    const auto fit = fit_approximant(set, target, 60, 0.0, spacing);
    double replayed = 0.0;
    for (const auto& p : sample_points(set, spacing)) {
        const double residual = std::abs(fit.approximant(p.z) - target.at(p.id));
        replayed = std::max(replayed, residual);
    }
    CHECK(replayed == doctest::Approx(fit.max_residual).epsilon(1e-8));
}

TEST_CASE("fewer samples than coefficients degrades to interpolation") {
    const auto set = build_set(SetKind::Example3, 1, 2.0);
    const auto target = target_profile(TargetName::Alpha, set);
    const auto probe = fit_approximant(set, target, 0, 0.0, 0.9);
    const auto n = probe.sample_count;
    REQUIRE(n > 4);
    const auto fit = fit_approximant(set, target, n + 10, 0.0, 0.9);
    CHECK(fit.approximant.degree() == n - 1);  // basis capped at the sample span
    CHECK(fit.max_residual <= 1e-8);
}

TEST_CASE("coincident samples: throw at lambda zero, truncate under ridge") {
    TruncatedCarlemanSet set;
    set.kind = SetKind::Example3;
    set.n = 0;
    set.t = 1.0;
    LabeledComponent first;
    first.id = ComponentId{ComponentId::Family::Synthetic, 1};
    first.primitives = {Disk{complex(0.0, 0.0), 0.5}};
    first.symbol = DomainSymbol::core();
    LabeledComponent second = first;
    second.id = ComponentId{ComponentId::Family::Synthetic, 2};
    set.components = {first, second};

    PiecewiseTarget target;
    target.name = TargetName::Alpha;
    target.value[first.id] = complex(std::log(2.0), 0.0);
    target.value[second.id] = complex(std::log(2.0), 0.0);

    const auto probe = fit_approximant(set, target, 0, 0.0, 0.25);
    const auto half = probe.sample_count / 2;  // distinct points
    CHECK_THROWS_AS(fit_approximant(set, target, half + 3, 0.0, 0.25),
                    std::runtime_error);
    const auto ridge = fit_approximant(set, target, half + 3, 1e-8, 0.25);
    CHECK(ridge.approximant.degree() < half + 3);
    CHECK(ridge.max_residual < 1e-6);
}

TEST_CASE("refined fit is deterministic and tracks per-component ratios") {
    const auto set = build_set(SetKind::Example3, 1, 2.0);
    const auto target = target_profile(TargetName::Alpha, set);
    const auto tolerance = tolerance_profile(TargetName::Alpha, set);
    const auto a = fit_refined(set, target, tolerance, 60, 0.15, {});
    const auto b = fit_refined(set, target, tolerance, 60, 0.15, {});
    REQUIRE(a.fit.approximant.coefficients.size() ==
            b.fit.approximant.coefficients.size());
    for (std::size_t i = 0; i < a.fit.approximant.coefficients.size(); ++i)
        CHECK(a.fit.approximant.coefficients[i] == b.fit.approximant.coefficients[i]);
    CHECK(a.component_ratio.size() == set.components.size());
    double worst = 0.0;
    for (const auto& [id, ratio] : a.component_ratio) worst = std::max(worst, ratio);
    CHECK(worst == doctest::Approx(a.max_ratio));
    CHECK(a.max_ratio > 0.0);
}

TEST_CASE("lawson reweighting never reports a worse iterate") {
    const auto set = build_set(SetKind::Example3, 1, 2.0);
    const auto target = target_profile(TargetName::Gamma, set);
    const auto tolerance = tolerance_profile(TargetName::Gamma, set);
    RefinementConfig plain;
    plain.lawson_iterations = 1;
    RefinementConfig equalized;
    equalized.lawson_iterations = 5;
    const auto base = fit_refined(set, target, tolerance, 80, 0.15, plain);
    const auto lawson = fit_refined(set, target, tolerance, 80, 0.15, equalized);
    CHECK(lawson.max_ratio <= base.max_ratio * (1.0 + 1e-12));
    CHECK(lawson.best_iteration >= 0);
    CHECK(lawson.best_iteration < 5);
}

TEST_CASE("verification with ideal maps passes every component") {
    const auto set = build_set(SetKind::Example3, 2, 2.0);
    for (char letter : {'f', 'g', 'h'}) {
        const auto report = verify_mapping({ideal_map(set, target_for_letter(letter))},
                                           set, generator_table(letter), 0.21);
        CHECK(report.pass);
        CHECK(report.rows.size() == set.components.size());
        for (const auto& row : report.rows) {
            CHECK(row.pass);
            CHECK(row.max_residual <= 1e-9);
            CHECK(row.samples > 0);
        }
    }
}

TEST_CASE("ideal two-letter chain verifies against the derived table only") {
    // Truncation deep enough that every intermediate disk lies in the set.
    const auto set = build_set(SetKind::Example3, 3, 2.0);
    const auto wide = build_set(SetKind::Example3, 9, 2.0);  // hosts intermediates
    const std::vector<MapFn> chain{ideal_map(wide, TargetName::Alpha),
                                   ideal_map(wide, TargetName::Beta)};
    const auto derived = verify_mapping(chain, set, derive_table("fg"), 0.21);
    CHECK(derived.pass);
    const auto claimed = verify_mapping(chain, set, claimed_table("fg"), 0.21);
    CHECK_FALSE(claimed.pass);  // published B-branch row disagrees with reality
}

TEST_CASE("verification rejects mismatched chain length and missing symbols") {
    const auto set = build_set(SetKind::Example3, 1, 2.0);
    const std::vector<MapFn> chain{ideal_map(set, TargetName::Alpha)};
    CHECK_THROWS_AS(verify_mapping(chain, set, derive_table("fg"), 0.2),
                    std::invalid_argument);
    const auto bare = build_set(SetKind::Example1, 3, 4.0);
    CHECK_THROWS_AS(verify_mapping(chain, bare, generator_table('f'), 0.2),
                    std::invalid_argument);
}

TEST_CASE("approximant json round-trip preserves evaluation") {
    const auto set = build_set(SetKind::Example3, 1, 2.0);
    const auto target = target_profile(TargetName::Beta, set);
    const auto fit = fit_approximant(set, target, 25, 0.0, 0.2);
    const auto j = approximant_to_json(fit.approximant);
    CHECK(j.at("kind") == "arnoldi");
    CHECK(j.at("degree").get<std::int64_t>() == 25);
    CHECK(j.at("coefficients").size() == 26);
    const auto restored = approximant_from_json(j);
    for (complex z : {complex(2.1, 0.3), complex(-6.2, -0.4), complex(4.0, 1.0)}) {
        CHECK(std::abs(restored(z) - fit.approximant(z)) == 0.0);
    }
}

TEST_CASE("verification report serializes per-component rows") {
    const auto set = build_set(SetKind::Example3, 1, 2.0);
    const auto report = verify_mapping({ideal_map(set, TargetName::Alpha)}, set,
                                       generator_table('f'), 0.3);
    const auto j = report_to_json(report);
    CHECK(j.at("word") == "f");
    CHECK(j.at("pass") == true);
    CHECK(j.at("samples").get<std::int64_t>() == report.samples);
    REQUIRE(j.at("components").size() == set.components.size());
    const auto& row = j.at("components").at(0);
    CHECK(row.at("id") == "G0");
    CHECK(row.at("symbol") == "Core");
    CHECK(row.at("expected_center").at(0).get<double>() == 2.0);
    CHECK(row.at("allowed").get<double>() == 0.5);
}
