#include "wander/diff.hpp"

#include <algorithm>

namespace wander {

namespace {

// Where two integer-affine expressions coincide: nowhere, one index, or all.
struct EqSet {
    enum Kind { None, One, All } kind = None;
    std::int64_t at = 0;
};

EqSet affine_eq(const AffineInt& x, const AffineInt& y) {
    if (x.slope == y.slope)
        return {x.offset == y.offset ? EqSet::All : EqSet::None, 0};
    std::int64_t num = y.offset - x.offset;
    std::int64_t den = x.slope - y.slope;
    if (num % den != 0) return {EqSet::None, 0};
    return {EqSet::One, num / den};
}

EqSet intersect(const EqSet& a, const EqSet& b) {
    if (a.kind == EqSet::All) return b;
    if (b.kind == EqSet::All) return a;
    if (a.kind == EqSet::None || b.kind == EqSet::None) return {EqSet::None, 0};
    return a.at == b.at ? a : EqSet{EqSet::None, 0};
}

// Affine view of one side over a segment: the rule is uniform there, either
// a tail (possibly restricted to a single k) or a single-index exception.
struct SegmentRule {
    bool present = false;
    AffineInt center{0, 0};
    Branch branch = Branch::Core;
    AffineInt index{0, 0};  // meaningless when branch == Core

    DiffEntry::Side render(std::int64_t lo, std::int64_t hi) const {
        if (lo == hi) {
            DomainSymbol s = branch == Branch::Core ? DomainSymbol::core()
                                                    : DomainSymbol{branch, index.at(lo)};
            return {std::to_string(center.at(lo)), s.str()};
        }
        return {center.str(), SymbolExpr{branch, index}.str()};
    }
};

SegmentRule rule_over(const BranchRule& r, std::int64_t lo) {
    // segment boundaries guarantee the rule at lo covers the whole segment
    auto it = std::lower_bound(r.exceptions.begin(), r.exceptions.end(), lo,
                               [](const auto& e, std::int64_t v) { return e.first < v; });
    if (it != r.exceptions.end() && it->first == lo) {
        const TargetDisk& d = it->second;
        return {true, {0, d.center}, d.containing.branch, {0, d.containing.k}};
    }
    if (r.tail && lo >= r.tail->from)
        return {true, r.tail->center, r.tail->target.branch, r.tail->target.index};
    return {};
}

// Indices where the two segment rules produce the same target disk.
EqSet rules_agree(const SegmentRule& a, const SegmentRule& b) {
    if (!a.present || !b.present)
        return {(!a.present && !b.present) ? EqSet::All : EqSet::None, 0};
    if (a.branch != b.branch) return {EqSet::None, 0};
    EqSet centers = affine_eq(a.center, b.center);
    if (a.branch == Branch::Core) return centers;
    return intersect(centers, affine_eq(a.index, b.index));
}

void diff_branch(Branch br, const BranchRule& derived, const BranchRule& claimed,
                 std::int64_t k_max, std::vector<DiffEntry>& out) {
    std::vector<std::int64_t> cuts = {1};
    auto add_rule_cuts = [&](const BranchRule& r) {
        for (const auto& [k, d] : r.exceptions) {
            (void)d;
            cuts.push_back(k);
            cuts.push_back(k + 1);
        }
        if (r.tail) cuts.push_back(r.tail->from);
    };
    add_rule_cuts(derived);
    add_rule_cuts(claimed);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::erase_if(cuts, [&](std::int64_t c) { return c < 1 || c > k_max; });
    cuts.push_back(k_max + 1);

    auto emit = [&](std::int64_t lo, std::int64_t hi, const SegmentRule& d,
                    const SegmentRule& c, bool open_end) {
        if (lo > hi) return;
        DiffEntry e;
        e.branch = br;
        e.from = lo;
        if (!open_end) e.to = hi;
        if (d.present) e.derived = d.render(lo, hi);
        if (c.present) e.claimed = c.render(lo, hi);
        out.push_back(std::move(e));
    };

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        std::int64_t lo = cuts[i];
        std::int64_t hi = cuts[i + 1] - 1;
        SegmentRule d = rule_over(derived, lo);
        SegmentRule c = rule_over(claimed, lo);
        EqSet agree = rules_agree(d, c);
        if (agree.kind == EqSet::All) continue;
        // does this segment's rule pair extend past k_max without ever agreeing?
        bool open_end = hi == k_max && d.present && c.present &&
                        (agree.kind == EqSet::None || agree.at <= k_max);
        if (agree.kind == EqSet::One && agree.at >= lo && agree.at <= hi) {
            emit(lo, agree.at - 1, d, c, false);
            emit(agree.at + 1, hi, d, c, open_end);
        } else {
            emit(lo, hi, d, c, open_end);
        }
    }
}

ordered_json side_to_json(const std::optional<DiffEntry::Side>& s) {
    if (!s) return nullptr;
    return ordered_json{{"center", s->center}, {"containing", s->containing}};
}

}  // namespace

DiscrepancyReport diff_tables(const TransitionTable& derived,
                              const TransitionTable& claimed, std::int64_t k_max) {
    if (derived.word != claimed.word)
        throw std::invalid_argument("diff_tables: word mismatch (" + derived.word +
                                    " vs " + claimed.word + ")");
    if (k_max < 1) throw std::invalid_argument("diff_tables: k_max must be >= 1");

    DiscrepancyReport r;
    r.word = derived.word;
    r.k_max = k_max;
    if (derived.core != claimed.core) {
        DiffEntry e;
        e.branch = Branch::Core;
        e.derived = DiffEntry::Side{std::to_string(derived.core.center),
                                    derived.core.containing.str()};
        e.claimed = DiffEntry::Side{std::to_string(claimed.core.center),
                                    claimed.core.containing.str()};
        r.entries.push_back(std::move(e));
    }
    diff_branch(Branch::G, derived.g_rule, claimed.g_rule, k_max, r.entries);
    diff_branch(Branch::B, derived.b_rule, claimed.b_rule, k_max, r.entries);
    return r;
}

ordered_json report_to_json(const DiscrepancyReport& r) {
    ordered_json entries = ordered_json::array();
    for (const auto& e : r.entries) {
        ordered_json je{{"branch", branch_name(e.branch)}};
        if (e.from) {
            je["from"] = *e.from;
            je["to"] = e.to ? ordered_json(*e.to) : ordered_json(nullptr);
        }
        je["derived"] = side_to_json(e.derived);
        je["claimed"] = side_to_json(e.claimed);
        entries.push_back(std::move(je));
    }
    return ordered_json{{"word", r.word},
                        {"k_max", r.k_max},
                        {"agrees", r.entries.empty()},
                        {"entries", std::move(entries)}};
}

}  // namespace wander
