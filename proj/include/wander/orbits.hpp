#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wander/tables.hpp"

namespace wander {

// Outcome of iterating s -> containing(table(s)) at the symbol level.
//
// Wandering carries a certificate: after entry_step applications the orbit
// sits at a symbol B(j) covered by a B-branch tail whose index shift is
// >= 1 with no exceptions at or beyond j, so every later symbol is a B of
// strictly larger index and the orbit never revisits a symbol.
struct Wandering {
    std::int64_t entry_step = 0;  // applications taken to reach the certified symbol
    DomainSymbol entry_symbol;    // the certified B(j)

    friend bool operator==(const Wandering&, const Wandering&) = default;
};

struct FixedCore {  // orbit reached Core, which every table maps into itself
    friend bool operator==(const FixedCore&, const FixedCore&) = default;
};

struct Periodic {
    std::int64_t period = 0;
    std::vector<DomainSymbol> witness;  // the cycle, starting at the revisited symbol

    friend bool operator==(const Periodic&, const Periodic&) = default;
};

struct PrePeriodic {
    std::int64_t preperiod = 0;
    std::int64_t period = 0;

    friend bool operator==(const PrePeriodic&, const PrePeriodic&) = default;
};

struct Unknown {
    std::int64_t horizon = 0;  // applications performed before giving up

    friend bool operator==(const Unknown&, const Unknown&) = default;
};

using OrbitClassification =
    std::variant<Wandering, FixedCore, Periodic, PrePeriodic, Unknown>;

std::string classification_kind(const OrbitClassification& c);
ordered_json classification_to_json(const OrbitClassification& c);

// Generous default: the escape certificate fires within ~k_max steps for
// every table in this system.
std::int64_t default_horizon(std::int64_t k_max);

// Iterates the symbol-level map starting at `start`, applying the table at
// most `horizon` times.  Returns FixedCore once the orbit sits in Core,
// Wandering once the escape certificate holds, Periodic/PrePeriodic when a
// symbol repeats, and Unknown only when the horizon is exhausted first.
// Throws std::runtime_error if the table has no rule for a visited symbol.
OrbitClassification classify_orbit(const TransitionTable& table,
                                   const DomainSymbol& start, std::int64_t horizon);

// First `steps + 1` symbols of the same iteration (including `start`),
// stopping early if the table has a gap; for display and tests.
std::vector<DomainSymbol> symbolic_orbit(const TransitionTable& table,
                                         const DomainSymbol& start, std::int64_t steps);

// Per-symbol classification of G(k) and B(k), k <= k_max, plus Core, under
// the compose-derived table of `word`.
struct EnumerationSummary {
    std::string word;
    std::int64_t k_max = 0;
    std::int64_t horizon = 0;
    OrbitClassification core;
    std::int64_t wandering = 0;
    std::int64_t fixed_core = 0;
    std::int64_t periodic = 0;
    std::int64_t pre_periodic = 0;
    std::int64_t unknown = 0;
    std::vector<std::pair<DomainSymbol, OrbitClassification>> details;

    bool all_wandering() const {
        return wandering == 2 * k_max && periodic == 0 && pre_periodic == 0 &&
               unknown == 0 && fixed_core == 0;
    }
};

EnumerationSummary enumerate_wandering(const std::string& word, std::int64_t k_max);
EnumerationSummary enumerate_wandering(const TransitionTable& table, std::int64_t k_max,
                                       std::int64_t horizon);

ordered_json summary_to_json(const EnumerationSummary& s, bool with_details = false);

}  // namespace wander
