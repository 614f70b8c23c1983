#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wander/symbols.hpp"

namespace wander {

using ordered_json = nlohmann::ordered_json;

// Rule for one indexed source branch (G or B): finitely many explicit
// exceptions plus one affine tail covering all k >= from.  Claimed tables
// transcribed from the literature may leave index gaps (no exception and
// k < from); derived tables never do.
struct BranchRule {
    struct Tail {
        std::int64_t from = 1;     // threshold k0
        AffineInt center{0, 0};    // target disk center as a function of k
        SymbolExpr target;         // component containing the disk

        friend bool operator==(const Tail&, const Tail&) = default;
    };

    std::vector<std::pair<std::int64_t, TargetDisk>> exceptions;  // sorted by k
    std::optional<Tail> tail;

    std::optional<TargetDisk> at(std::int64_t k) const;

    // True when exceptions + tail cover every k >= 1 exactly once.
    bool covers_all_k() const;

    friend bool operator==(const BranchRule&, const BranchRule&) = default;
};

// Builds a tail from its center expression; the containing component is
// implied by the center.  Throws if the center fits no component family.
BranchRule::Tail make_tail(std::int64_t from, AffineInt center);

struct TransitionTable {
    std::string word;  // letters over {f,g,h}, leftmost = outermost
    TargetDisk core;   // the single Core row
    BranchRule g_rule;
    BranchRule b_rule;

    std::optional<TargetDisk> at(const DomainSymbol& s) const;
    TargetDisk at_checked(const DomainSymbol& s) const;  // throws on a gap

    // Structural well-formedness: sorted distinct exceptions below the tail
    // threshold, tail consistent with its center, Core row inside Core.
    void validate() const;

    friend bool operator==(const TransitionTable&, const TransitionTable&) = default;
};

// The three generator tables transcribed from the construction.
TransitionTable generator_table(char name);  // 'f' | 'g' | 'h'

// True iff the word consists only of letters f, g, h (and is nonempty).
bool valid_word(const std::string& word);

// Left-fold composition of the word's generator tables:
// derive("fgh") = f o g o h (rightmost letter applied first).
TransitionTable derive_table(const std::string& word);

// result(s) = outer(containing symbol of inner(s)); word is concatenated and
// the rules are renormalized into exceptions + affine tail form.  Throws
// std::invalid_argument when an input table is malformed (missing or
// non-affine tail, incomplete coverage).
TransitionTable compose(const TransitionTable& outer, const TransitionTable& inner);

// The 12 composite tables displayed in the literature, verbatim, including
// their slips (sign of the fg B-branch, the fh gap at k=3, the gh G-tail,
// and the triple-composite B-branch constants).  Throws on any other word.
TransitionTable claimed_table(const std::string& word);
bool has_claimed_table(const std::string& word);
std::vector<std::string> claimed_words();  // the 12, fixed order

ordered_json table_to_json(const TransitionTable& t);
TransitionTable table_from_json(const ordered_json& j);

}  // namespace wander
