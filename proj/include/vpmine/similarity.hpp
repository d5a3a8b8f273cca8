#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vpmine/dataset.hpp"

namespace vpmine {

enum class Metric { sim_co, sim_or, jaccard, pearson, kendall };

Metric metric_from_name(std::string_view name); // "sim_co" | "sim_or" | "jaccard" | "pearson" | "kendall"
std::string_view metric_name(Metric m);

/// One variable's cells in dense per-observation form plus its value table.
struct Column {
    std::vector<std::int32_t> codes;        // per observation, -1 = missing
    std::vector<std::string> values;        // code -> value string
    std::vector<std::size_t> value_counts;  // code -> count over the full observation range
    // Per-code numeric keys, present when every value of the variable parses
    // as a finite number. Ordering falls back to lexicographic byte order.
    std::optional<std::vector<double>> numeric;

    std::size_t n_obs() const { return codes.size(); }
};

Column make_column(const Dataset& d, VarId id);
/// Build a free-standing column from raw cells (tests, bindings, ad-hoc use).
Column column_from_strings(const std::vector<std::string>& cells,
                           std::string_view missing_marker = "NaN");

/// Joint value distribution of a variable pair over co-observed rows, plus
/// full-range marginals. pair_counts is sorted by (code1, code2) so that
/// downstream floating-point sums are order-canonical: permuting the
/// observations of both columns identically changes no metric bit.
struct PairDistribution {
    std::size_t co_obs = 0;
    std::vector<std::pair<std::pair<ValueCode, ValueCode>, std::size_t>> pair_counts;
    std::vector<std::size_t> marginal1;
    std::vector<std::size_t> marginal2;
};

PairDistribution pair_distribution(const Column& y1, const Column& y2);

/// Likelihood of two variables forming a constant (or, after alignment,
/// additive/multiplicative) pattern. Product of a pair-confidence factor and
/// one minus the normalized pair entropy; 0 when fewer than two co-observed
/// rows exist. The log base cancels in the entropy ratio.
double sim_co(const Column& y1, const Column& y2);
double sim_co_from_distribution(const PairDistribution& dist, std::size_t n_obs,
                                double log_base = std::numbers::e);

/// Order-preserving likelihood: the larger one-directional strict-dominance
/// count over co-observed rows, divided by the full observation count.
double sim_or(const Column& y1, const Column& y2);

/// |T1 ^ T2| / |T1 v T2| on binary presence variables; 0 when both empty.
double jaccard(const Column& y1, const Column& y2);

/// Sample correlation over co-observed rows; 0 when either side has zero
/// variance there.
double pearson(const Column& y1, const Column& y2);

/// Kendall tau-b (tie-corrected) over co-observed rows; 0 when all values of
/// either side are tied.
double kendall_tau(const Column& y1, const Column& y2);

double evaluate_metric(Metric m, const Column& y1, const Column& y2);

struct SimilarityMatrix {
    std::vector<VarId> variable_ids;
    Metric metric = Metric::sim_co;
    std::vector<double> scores; // row-major, order x order

    std::size_t order() const { return variable_ids.size(); }
    double at(std::size_t i, std::size_t j) const { return scores[i * order() + j]; }
    double& at(std::size_t i, std::size_t j) { return scores[i * order() + j]; }
};

/// Evaluate every unordered variable pair of d under the chosen metric.
/// Metric errors are rethrown with the offending pair named.
SimilarityMatrix build_matrix(const Dataset& d, Metric metric);

/// CSV with a header row/column of variable ids and the full symmetric grid.
void write_matrix_csv(const SimilarityMatrix& m, std::ostream& out);

} // namespace vpmine
