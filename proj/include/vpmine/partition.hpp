#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vpmine/similarity.hpp"

namespace vpmine {

enum class Strategy { similarity, dissimilarity, random };

Strategy strategy_from_name(std::string_view name);
std::string_view strategy_name(Strategy s);

enum class LinkObjective { most_similar, least_similar };

/// A disjoint cover of the selected variables, each cluster holding between
/// 1 and cap variables. Clusters store their ids sorted ascending.
struct PartitionPlan {
    std::vector<std::vector<VarId>> clusters;
    std::size_t cap = 0;
    Strategy strategy = Strategy::similarity;
    std::optional<std::uint64_t> seed; // random strategy only
};

/// Size-capped agglomerative clustering under average linkage.
///
/// Starts from singletons and repeatedly merges the candidate pair with the
/// best (objective-dependent) mean pairwise score among pairs whose combined
/// size stays within cap; a cluster at the cap is no longer considered.
/// Ties break on the lexicographically smallest pair of minimum variable ids,
/// so the result is deterministic.
PartitionPlan capped_agglomerative(const SimilarityMatrix& m, std::size_t cap,
                                   LinkObjective objective);

/// Seeded Fisher-Yates shuffle, then sequential chunks of exactly cap
/// variables (the final chunk may be smaller).
PartitionPlan random_partition(std::vector<VarId> vars, std::size_t cap, std::uint64_t seed);

/// nullopt when the plan is a partition of vars honoring the size cap,
/// otherwise a description of the first violation found.
std::optional<std::string> validate(const PartitionPlan& p, const std::vector<VarId>& vars);

std::string plan_to_json(const PartitionPlan& p);
PartitionPlan plan_from_json(std::string_view text);

} // namespace vpmine
