#include "wander/orbits.hpp"

#include <map>

namespace wander {

namespace {

struct KindName {
    std::string operator()(const Wandering&) const { return "Wandering"; }
    std::string operator()(const FixedCore&) const { return "FixedCore"; }
    std::string operator()(const Periodic&) const { return "Periodic"; }
    std::string operator()(const PrePeriodic&) const { return "PrePeriodic"; }
    std::string operator()(const Unknown&) const { return "Unknown"; }
};

// True when `s` sits in the strictly index-increasing part of the B-branch:
// from there every application lands in B(j + shift), shift >= 1, forever.
bool escape_certificate(const TransitionTable& t, const DomainSymbol& s) {
    if (s.branch != Branch::B || !t.b_rule.tail) return false;
    const auto& tail = *t.b_rule.tail;
    if (tail.target.branch != Branch::B) return false;
    if (tail.target.index.slope != 1 || tail.target.index.offset < 1) return false;
    if (s.k < tail.from) return false;
    if (!t.b_rule.exceptions.empty() && t.b_rule.exceptions.back().first >= s.k)
        return false;
    return true;
}

}  // namespace

std::string classification_kind(const OrbitClassification& c) {
    return std::visit(KindName{}, c);
}

ordered_json classification_to_json(const OrbitClassification& c) {
    ordered_json j{{"kind", classification_kind(c)}};
    if (const auto* w = std::get_if<Wandering>(&c)) {
        j["entry_step"] = w->entry_step;
        j["entry_symbol"] = w->entry_symbol.str();
    } else if (const auto* p = std::get_if<Periodic>(&c)) {
        j["period"] = p->period;
        ordered_json cyc = ordered_json::array();
        for (const auto& s : p->witness) cyc.push_back(s.str());
        j["witness"] = std::move(cyc);
    } else if (const auto* pp = std::get_if<PrePeriodic>(&c)) {
        j["preperiod"] = pp->preperiod;
        j["period"] = pp->period;
    } else if (const auto* u = std::get_if<Unknown>(&c)) {
        j["horizon"] = u->horizon;
    }
    return j;
}

std::int64_t default_horizon(std::int64_t k_max) { return 10 * k_max + 100; }

OrbitClassification classify_orbit(const TransitionTable& table,
                                   const DomainSymbol& start, std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("classify_orbit: horizon must be >= 1");
    std::map<DomainSymbol, std::int64_t> seen;
    std::vector<DomainSymbol> path;
    DomainSymbol s = start;
    for (std::int64_t step = 0;; ++step) {
        if (s.branch == Branch::Core) return FixedCore{};
        if (escape_certificate(table, s)) return Wandering{step, s};
        if (auto it = seen.find(s); it != seen.end()) {
            std::int64_t first = it->second;
            std::int64_t period = step - first;
            if (first == 0)
                return Periodic{period,
                                {path.begin() + first, path.end()}};
            return PrePeriodic{first, period};
        }
        if (step == horizon) return Unknown{horizon};
        seen.emplace(s, step);
        path.push_back(s);
        s = table.at_checked(s).containing;
    }
}

std::vector<DomainSymbol> symbolic_orbit(const TransitionTable& table,
                                         const DomainSymbol& start, std::int64_t steps) {
    std::vector<DomainSymbol> orbit{start};
    DomainSymbol s = start;
    for (std::int64_t i = 0; i < steps; ++i) {
        auto d = table.at(s);
        if (!d) break;
        s = d->containing;
        orbit.push_back(s);
    }
    return orbit;
}

EnumerationSummary enumerate_wandering(const TransitionTable& table, std::int64_t k_max,
                                       std::int64_t horizon) {
    if (k_max < 1) throw std::invalid_argument("enumerate_wandering: k_max must be >= 1");
    EnumerationSummary sum;
    sum.word = table.word;
    sum.k_max = k_max;
    sum.horizon = horizon;
    sum.core = classify_orbit(table, DomainSymbol::core(), horizon);

    auto tally = [&](const OrbitClassification& c) {
        if (std::holds_alternative<Wandering>(c)) ++sum.wandering;
        else if (std::holds_alternative<FixedCore>(c)) ++sum.fixed_core;
        else if (std::holds_alternative<Periodic>(c)) ++sum.periodic;
        else if (std::holds_alternative<PrePeriodic>(c)) ++sum.pre_periodic;
        else ++sum.unknown;
    };
    for (std::int64_t k = 1; k <= k_max; ++k) {
        for (Branch br : {Branch::G, Branch::B}) {
            DomainSymbol s{br, k};
            OrbitClassification c = classify_orbit(table, s, horizon);
            tally(c);
            sum.details.emplace_back(s, std::move(c));
        }
    }
    return sum;
}

EnumerationSummary enumerate_wandering(const std::string& word, std::int64_t k_max) {
    return enumerate_wandering(derive_table(word), k_max, default_horizon(k_max));
}

ordered_json summary_to_json(const EnumerationSummary& s, bool with_details) {
    ordered_json j{{"word", s.word},
                   {"k_max", s.k_max},
                   {"horizon", s.horizon},
                   {"core", classification_to_json(s.core)},
                   {"counts",
                    ordered_json{{"Wandering", s.wandering},
                                 {"FixedCore", s.fixed_core},
                                 {"Periodic", s.periodic},
                                 {"PrePeriodic", s.pre_periodic},
                                 {"Unknown", s.unknown}}},
                   {"all_wandering", s.all_wandering()}};
    if (with_details) {
        ordered_json details = ordered_json::array();
        for (const auto& [sym, c] : s.details) {
            ordered_json d{{"symbol", sym.str()}};
            d["classification"] = classification_to_json(c);
            details.push_back(std::move(d));
        }
        j["details"] = std::move(details);
    }
    return j;
}

}  // namespace wander
