#include "wander/tables.hpp"

#include <algorithm>
#include <map>

namespace wander {

std::optional<TargetDisk> BranchRule::at(std::int64_t k) const {
    if (k < 1) throw std::invalid_argument("branch index must be >= 1");
    auto it = std::lower_bound(exceptions.begin(), exceptions.end(), k,
                               [](const auto& e, std::int64_t v) { return e.first < v; });
    if (it != exceptions.end() && it->first == k) return it->second;
    if (tail && k >= tail->from) {
        auto sym = tail->target.at(k);
        if (!sym)
            throw std::invalid_argument("tail target invalid at k=" + std::to_string(k));
        return TargetDisk{tail->center.at(k), *sym};
    }
    return std::nullopt;
}

bool BranchRule::covers_all_k() const {
    if (!tail) return false;
    // exceptions are sorted and distinct; they must be exactly 1..from-1
    if (static_cast<std::int64_t>(exceptions.size()) != tail->from - 1) return false;
    for (std::int64_t i = 0; i < tail->from - 1; ++i)
        if (exceptions[static_cast<std::size_t>(i)].first != i + 1) return false;
    return true;
}

BranchRule::Tail make_tail(std::int64_t from, AffineInt center) {
    auto sym = symbol_of_affine_center(center);
    if (!sym)
        throw std::invalid_argument("tail center " + center.str() +
                                    " fits no component family");
    return BranchRule::Tail{from, center, *sym};
}

std::optional<TargetDisk> TransitionTable::at(const DomainSymbol& s) const {
    switch (s.branch) {
        case Branch::Core: return core;
        case Branch::G: return g_rule.at(s.k);
        case Branch::B: return b_rule.at(s.k);
    }
    throw std::logic_error("bad branch");
}

TargetDisk TransitionTable::at_checked(const DomainSymbol& s) const {
    auto d = at(s);
    if (!d)
        throw std::runtime_error("table " + word + " has no rule for " + s.str());
    return *d;
}

namespace {

void validate_rule(const BranchRule& r, const std::string& who) {
    std::int64_t prev = 0;
    for (const auto& [k, disk] : r.exceptions) {
        if (k <= prev)
            throw std::invalid_argument(who + ": exceptions not sorted/distinct");
        prev = k;
        if (disk_from_center(disk.center) != disk)
            throw std::invalid_argument(who + ": exception disk not inside its component");
    }
    if (r.tail) {
        if (!r.exceptions.empty() && r.exceptions.back().first >= r.tail->from)
            throw std::invalid_argument(who + ": tail threshold must exceed every exception index");
        auto sym = symbol_of_affine_center(r.tail->center);
        if (!sym || *sym != r.tail->target)
            throw std::invalid_argument(who + ": tail target inconsistent with its center");
        if (!r.tail->target.at(r.tail->from))
            throw std::invalid_argument(who + ": tail target invalid at its own threshold");
    }
}

}  // namespace

void TransitionTable::validate() const {
    if (!valid_word(word)) throw std::invalid_argument("invalid word: " + word);
    if (disk_from_center(core.center) != std::optional<TargetDisk>(core))
        throw std::invalid_argument(word + ": Core row disk not inside a component");
    if (core.containing != DomainSymbol::core())
        throw std::invalid_argument(word + ": Core row must map into Core");
    validate_rule(g_rule, word + "/G");
    validate_rule(b_rule, word + "/B");
}

bool valid_word(const std::string& word) {
    if (word.empty()) return false;
    return std::all_of(word.begin(), word.end(),
                       [](char c) { return c == 'f' || c == 'g' || c == 'h'; });
}

namespace {

// shared by all three generators: B_k -> disk(-(4k+6)) in B(k+1)
BranchRule escape_b_rule() {
    BranchRule r;
    r.tail = make_tail(1, AffineInt{-4, -6});
    return r;
}

std::pair<std::int64_t, TargetDisk> exc(std::int64_t k, std::int64_t center) {
    return {k, disk_from_center_checked(center)};
}

}  // namespace

TransitionTable generator_table(char name) {
    TransitionTable t;
    t.word = std::string(1, name);
    t.core = disk_from_center_checked(2);
    t.b_rule = escape_b_rule();
    switch (name) {
        case 'f':
            // G_k -> disk(-6) in B(1), all k
            t.g_rule.tail = make_tail(1, AffineInt{0, -6});
            break;
        case 'g':
            // G_1 -> disk(-6) in B(1); G_k -> disk(4k-2) in G(k-1), k >= 2
            t.g_rule.exceptions = {exc(1, -6)};
            t.g_rule.tail = make_tail(2, AffineInt{4, -2});
            break;
        case 'h':
            // G_1 -> disk(-10) in B(2); G_2 -> disk(-6) in B(1);
            // G_k -> disk(4k-6) in G(k-2), k >= 3
            t.g_rule.exceptions = {exc(1, -10), exc(2, -6)};
            t.g_rule.tail = make_tail(3, AffineInt{4, -6});
            break;
        default:
            throw std::invalid_argument("unknown generator: " + std::string(1, name));
    }
    t.validate();
    return t;
}

namespace {

// Applies `outer` to the symbol family an inner tail lands in, producing the
// composite tail plus any exception rows the outer table's own exceptions
// induce below the composite threshold.
void compose_branch(const TransitionTable& outer, const BranchRule& inner,
                    BranchRule& out) {
    if (!inner.tail || !inner.covers_all_k())
        throw std::invalid_argument("compose: inner table branch does not cover all k");

    for (const auto& [k, disk] : inner.exceptions)
        out.exceptions.emplace_back(k, outer.at_checked(disk.containing));

    const auto& t = *inner.tail;
    if (t.target.branch == Branch::Core || t.target.index.is_constant()) {
        auto sym = t.target.at(t.from);
        if (!sym) throw std::invalid_argument("compose: inner tail lands outside the alphabet");
        TargetDisk d = outer.at_checked(*sym);
        out.tail = make_tail(t.from, AffineInt{0, d.center});
        return;
    }
    if (t.target.index.slope != 1)
        throw std::invalid_argument("compose: inner tail index not affine with unit slope");

    const std::int64_t shift = t.target.index.offset;  // inner: X(k) -> Y(k+shift)
    const BranchRule& orule =
        (t.target.branch == Branch::G) ? outer.g_rule : outer.b_rule;
    if (!orule.tail || !orule.covers_all_k())
        throw std::invalid_argument("compose: outer table branch does not cover all k");

    const std::int64_t from = std::max(t.from, orule.tail->from - shift);
    // below the composite threshold the outer exceptions resolve each k
    for (std::int64_t k = t.from; k < from; ++k) {
        auto d = orule.at(k + shift);
        if (!d) throw std::invalid_argument("compose: outer table gap at k=" +
                                            std::to_string(k + shift));
        out.exceptions.emplace_back(k, *d);
    }
    AffineInt center{orule.tail->center.slope,
                     orule.tail->center.slope * shift + orule.tail->center.offset};
    out.tail = make_tail(from, center);
}

// Canonical form: pull exceptions that already match the tail into it.
void absorb_exceptions(BranchRule& r) {
    if (!r.tail) return;
    while (r.tail->from > 1 && !r.exceptions.empty() &&
           r.exceptions.back().first == r.tail->from - 1) {
        std::int64_t k = r.tail->from - 1;
        auto sym = r.tail->target.at(k);
        if (!sym) break;
        TargetDisk tail_disk{r.tail->center.at(k), *sym};
        if (tail_disk != r.exceptions.back().second) break;
        r.exceptions.pop_back();
        r.tail->from = k;
    }
}

}  // namespace

TransitionTable compose(const TransitionTable& outer, const TransitionTable& inner) {
    outer.validate();
    inner.validate();
    TransitionTable t;
    t.word = outer.word + inner.word;
    t.core = outer.at_checked(inner.core.containing);
    compose_branch(outer, inner.g_rule, t.g_rule);
    compose_branch(outer, inner.b_rule, t.b_rule);
    absorb_exceptions(t.g_rule);
    absorb_exceptions(t.b_rule);
    t.validate();
    return t;
}

TransitionTable derive_table(const std::string& word) {
    if (!valid_word(word)) throw std::invalid_argument("invalid word: " + word);
    TransitionTable t = generator_table(word[0]);
    for (std::size_t i = 1; i < word.size(); ++i)
        t = compose(t, generator_table(word[i]));
    return t;
}

namespace {

struct ClaimedSpec {
    std::vector<std::pair<std::int64_t, std::int64_t>> g_exceptions;  // (k, center)
    std::int64_t g_from;
    AffineInt g_center;
    AffineInt b_center;  // B tail always from 1 in the displayed tables
};

// Verbatim transcription of the displayed composite tables.  Each |.+-c|<1/2
// row is read as a disk of radius 1/2 about -+c; coverage gaps are kept.
const std::map<std::string, ClaimedSpec>& claimed_specs() {
    static const std::map<std::string, ClaimedSpec> specs = {
        {"fg", {{{1, -10}}, 2, {0, -6}, {4, 10}}},
        {"gf", {{}, 1, {0, -10}, {-4, -10}}},
        {"fh", {{{1, -14}, {2, -10}}, 4, {0, -6}, {-4, -10}}},  // no row for k=3
        {"hf", {{}, 1, {0, -10}, {-4, -10}}},
        {"gh", {{{1, -14}, {2, -10}}, 3, {0, -6}, {-4, -10}}},
        {"hg", {{{1, -10}, {2, -10}, {3, -6}}, 4, {4, -10}, {-4, -10}}},
        {"fgh", {{{1, -18}, {2, -14}, {3, -10}}, 4, {0, -6}, {-4, -10}}},
        {"fhg", {{{1, -14}, {2, -14}, {3, -10}}, 4, {0, -6}, {-4, -10}}},
        {"gfh", {{{1, -18}, {2, -14}}, 3, {0, -10}, {-4, -10}}},
        {"ghf", {{}, 1, {0, -14}, {-4, -10}}},
        {"hfg", {{{1, -14}}, 2, {0, -10}, {-4, -10}}},
        {"hgf", {{}, 1, {0, -14}, {-4, -10}}},
    };
    return specs;
}

}  // namespace

bool has_claimed_table(const std::string& word) {
    return claimed_specs().count(word) > 0;
}

std::vector<std::string> claimed_words() {
    return {"fg", "gf", "fh", "hf", "gh", "hg",
            "fgh", "fhg", "gfh", "ghf", "hfg", "hgf"};
}

TransitionTable claimed_table(const std::string& word) {
    auto it = claimed_specs().find(word);
    if (it == claimed_specs().end())
        throw std::invalid_argument("no displayed table for word: " + word);
    const ClaimedSpec& spec = it->second;
    TransitionTable t;
    t.word = word;
    t.core = disk_from_center_checked(2);
    for (const auto& [k, center] : spec.g_exceptions)
        t.g_rule.exceptions.emplace_back(k, disk_from_center_checked(center));
    t.g_rule.tail = make_tail(spec.g_from, spec.g_center);
    t.b_rule.tail = make_tail(1, spec.b_center);
    t.validate();
    return t;
}

namespace {

ordered_json disk_to_json(const TargetDisk& d) {
    return ordered_json{{"center", {d.center, 0}}, {"containing", d.containing.str()}};
}

TargetDisk disk_from_json(const ordered_json& j) {
    std::int64_t c = j.at("center").at(0).get<std::int64_t>();
    if (j.at("center").at(1).get<std::int64_t>() != 0)
        throw std::invalid_argument("disk center must be real");
    TargetDisk d = disk_from_center_checked(c);
    auto sym = parse_symbol(j.at("containing").get<std::string>());
    if (!sym || *sym != d.containing)
        throw std::invalid_argument("containing symbol inconsistent with center");
    return d;
}

ordered_json rule_to_json(const BranchRule& r, Branch branch) {
    ordered_json exceptions = ordered_json::array();
    for (const auto& [k, disk] : r.exceptions)
        exceptions.push_back(ordered_json{{"k", k}, {"target", disk_to_json(disk)}});
    ordered_json tail;
    if (r.tail)
        tail = ordered_json{{"from", r.tail->from},
                            {"target", r.tail->target.str()},
                            {"center", r.tail->center.str()}};
    return ordered_json{{"branch", branch_name(branch)},
                        {"exceptions", std::move(exceptions)},
                        {"tail", std::move(tail)}};
}

BranchRule rule_from_json(const ordered_json& j) {
    BranchRule r;
    for (const auto& e : j.at("exceptions"))
        r.exceptions.emplace_back(e.at("k").get<std::int64_t>(),
                                  disk_from_json(e.at("target")));
    if (j.contains("tail") && !j.at("tail").is_null()) {
        const auto& tj = j.at("tail");
        auto center = AffineInt::parse(tj.at("center").get<std::string>());
        if (!center) throw std::invalid_argument("bad tail center expression");
        auto tail = make_tail(tj.at("from").get<std::int64_t>(), *center);
        auto target = SymbolExpr::parse(tj.at("target").get<std::string>());
        if (!target || *target != tail.target)
            throw std::invalid_argument("tail target inconsistent with center");
        r.tail = tail;
    }
    return r;
}

}  // namespace

ordered_json table_to_json(const TransitionTable& t) {
    ordered_json rules = ordered_json::array();
    rules.push_back(ordered_json{{"branch", "Core"}, {"target", disk_to_json(t.core)}});
    rules.push_back(rule_to_json(t.g_rule, Branch::G));
    rules.push_back(rule_to_json(t.b_rule, Branch::B));
    return ordered_json{{"word", t.word}, {"rules", std::move(rules)}};
}

TransitionTable table_from_json(const ordered_json& j) {
    TransitionTable t;
    t.word = j.at("word").get<std::string>();
    for (const auto& rule : j.at("rules")) {
        std::string branch = rule.at("branch").get<std::string>();
        if (branch == "Core") t.core = disk_from_json(rule.at("target"));
        else if (branch == "G") t.g_rule = rule_from_json(rule);
        else if (branch == "B") t.b_rule = rule_from_json(rule);
        else throw std::invalid_argument("unknown branch: " + branch);
    }
    t.validate();
    return t;
}

}  // namespace wander
