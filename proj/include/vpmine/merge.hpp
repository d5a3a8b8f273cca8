#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vpmine/miner.hpp"

namespace vpmine {

/// Per-cluster frequent pattern sets over disjoint variable sets, all mined
/// from the same observations under the same threshold.
struct MergeInput {
    std::vector<PatternSet> cluster_patterns;
    std::size_t n_obs = 0;
    double min_sup = 0.0;
};

/// Conjunction of two patterns over disjoint variable sets: item sets are
/// united and tidsets intersected. Returns nullopt when the intersection
/// falls below the support threshold; overlapping variables are an error.
std::optional<Pattern> join(const Pattern& p, const Pattern& q, std::size_t n_obs,
                            double min_sup);

/// Reconstructs the closed frequent patterns of the whole variable set from
/// the per-cluster sets. For each cluster i a working set seeded with its
/// patterns is extended cluster by cluster: every working pattern is joined
/// with every pattern of cluster j (patterns appended during the pass are
/// recognized by already carrying cluster-j variables and are not rejoined).
/// Afterwards, working patterns not dominated by any working or already
/// final pattern move to the final set.
PatternSet pattern_merge(const MergeInput& in);

struct MergeStats {
    std::size_t pre_merge_count = 0;
    std::size_t final_count = 0;
    double mean_obs = 0.0;  // mean tidset size over pre-merge patterns
    double mean_vars = 0.0; // mean item count over pre-merge patterns
    bool empty_premerge = false;
};

MergeStats merge_stats(const std::vector<PatternSet>& before, const PatternSet& after);

/// {"pre_merge_count": ..., "final_count": ..., "mean_obs": ..., "mean_vars": ...,
///  "merge_wall_ms": ...}
std::string merge_summary_json(const MergeStats& s, double merge_wall_ms);

} // namespace vpmine
