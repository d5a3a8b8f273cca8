#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "vpmine/dataset.hpp"

namespace vpmine {

struct Item {
    VarId var = 0;
    ValueCode value = 0;
    friend auto operator<=>(const Item&, const Item&) = default;
};

/// A constant pattern: a set of variable=value items (sorted by variable,
/// at most one item per variable) together with the exact sorted list of
/// observation ids matching all of them.
struct Pattern {
    std::vector<Item> items;
    Tidset tids;
    std::size_t support() const { return tids.size(); }
};

struct PatternSet {
    std::vector<Pattern> patterns;
    double min_sup = 0.0;
    std::string source;
};

/// The single support test shared by mining and merging: a tidset of size
/// count qualifies iff count >= ceil(min_sup * n_obs), which for integer
/// count is the same as count >= min_sup * n_obs.
bool meets_support(std::size_t count, std::size_t n_obs, double min_sup);

Tidset intersect_tids(const Tidset& a, const Tidset& b);

/// Level-wise mining of all frequent constant patterns over the given
/// variables. Candidates join two patterns sharing all but their last item,
/// are pruned when any sub-pattern is infrequent, and keep exact tidsets.
/// Output is ordered by pattern length, lexicographically within a length.
PatternSet apriori(const Dataset& d, const std::vector<VarId>& vars, double min_sup,
                   std::string source = "full");

/// True when q has strictly more items, covers every item of p, and selects
/// exactly the same observations.
bool is_dominated(const Pattern& p, const Pattern& q);

/// Keeps only patterns not dominated by any other pattern in the set, and
/// collapses duplicate item sets to their first occurrence.
PatternSet closed_filter(const PatternSet& ps);

/// Reference answer for partitioned mining: mine the projection whole, then
/// keep the closed patterns.
PatternSet mine_closed_oracle(const Dataset& d, const std::vector<VarId>& vars, double min_sup);

std::string pattern_to_string(const Pattern& p, const Dataset& d);

/// One line per pattern: comma-joined var=value items, a tab, then the
/// space-joined tidset. Lines are sorted by item list.
void write_patterns(const PatternSet& ps, const Dataset& d, std::ostream& out);

} // namespace vpmine
