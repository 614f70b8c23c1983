#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wander/tables.hpp"

namespace wander {

// One maximal run of source symbols where two tables disagree.  Sides are
// rendered as integer expressions valid across the whole run; a missing side
// marks a coverage gap (the table has no rule for those indices).
struct DiffEntry {
    struct Side {
        std::string center;      // "-(4k+10)", "-6", ...
        std::string containing;  // "B(k+2)", "B(1)", "Core", ...

        friend bool operator==(const Side&, const Side&) = default;
    };

    Branch branch = Branch::Core;
    std::optional<std::int64_t> from;  // first index of the run; empty for the Core row
    std::optional<std::int64_t> to;    // last index; empty = mismatch holds for all k >= from
    std::optional<Side> derived;
    std::optional<Side> claimed;

    friend bool operator==(const DiffEntry&, const DiffEntry&) = default;
};

struct DiscrepancyReport {
    std::string word;
    std::int64_t k_max = 0;
    std::vector<DiffEntry> entries;  // ordered Core, G runs, B runs

    bool empty() const { return entries.empty(); }

    friend bool operator==(const DiscrepancyReport&, const DiscrepancyReport&) = default;
};

// Compares target disks symbol-by-symbol for Core and G(k)/B(k), k <= k_max,
// coalescing runs that share one affine rule per side.  A run that provably
// extends past k_max (both sides are pure tails that never meet again) is
// reported with an open upper end.  Throws std::invalid_argument if the two
// tables carry different words.
DiscrepancyReport diff_tables(const TransitionTable& derived,
                              const TransitionTable& claimed, std::int64_t k_max);

ordered_json report_to_json(const DiscrepancyReport& r);

}  // namespace wander
