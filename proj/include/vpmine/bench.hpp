#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vpmine/dataset.hpp"
#include "vpmine/merge.hpp"
#include "vpmine/partition.hpp"
#include "vpmine/similarity.hpp"
#include "vpmine/stats.hpp"

namespace vpmine {

struct ExperimentConfig {
    std::vector<std::size_t> variable_counts = {4, 8, 12, 16, 20};
    std::size_t runs = 10;
    std::size_t cap = 4;
    Metric metric = Metric::sim_co;
    std::uint64_t master_seed = 1;
    std::optional<double> min_sup_override; // else derived from the dataset
    bool parallel_mine = false;
    bool include_matrix_time = false;
    std::size_t significance_len = 4;
    double significance_alpha = 0.05;
    double min_sup_floor = 0.01;
};

struct RunRecord {
    std::string dataset;
    std::size_t n_vars = 0;
    std::size_t run = 0;
    Strategy strategy = Strategy::similarity;
    std::uint64_t seed = 0;     // variable-subset seed of this (n_vars, run) cell
    double t_pipeline_ms = 0.0; // partition + mine + merge
    double t_matrix_ms = 0.0;   // similarity matrix build, reported separately
    double t_merge_ms = 0.0;
    std::size_t n_premerge = 0;
    double mean_obs_premerge = 0.0;
    double mean_vars_premerge = 0.0;
    std::size_t n_final = 0;
};

struct Aggregate {
    std::size_t n_vars = 0;
    Strategy strategy = Strategy::similarity;
    std::size_t runs = 0;
    double mean_pipeline_ms = 0.0, sd_pipeline_ms = 0.0;
    double mean_merge_ms = 0.0, sd_merge_ms = 0.0;
    double mean_obs = 0.0, sd_obs = 0.0;
    double mean_vars = 0.0, sd_vars = 0.0;
    double mean_final = 0.0, sd_final = 0.0;
};

/// Paired one-sided t-tests of the similarity strategy against one baseline,
/// pairing the (n_vars, run) cells of both strategies.
struct StrategyComparison {
    Strategy baseline = Strategy::random;
    double p_merge_less = 0.5, p_merge_greater = 0.5;
    double p_pipeline_less = 0.5, p_pipeline_greater = 0.5;
};

struct BenchReport {
    std::string dataset;
    ExperimentConfig config;
    double min_sup = 0.0;
    std::vector<RunRecord> records;
    std::vector<Aggregate> aggregates;
    std::vector<StrategyComparison> comparisons;
};

/// splitmix64-based derivation, so each (a, b, role) cell gets an
/// independent stream and adding roles never shifts existing draws.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t role);

/// k distinct variables drawn without replacement, returned sorted.
std::vector<VarId> sample_variables(const std::vector<VarId>& all, std::size_t k,
                                    std::uint64_t seed);

/// Runs every (variable count, run, strategy) cell: the same drawn subset is
/// partitioned under all three strategies, each cluster is mined, and the
/// merged pattern sets are checked for equality across strategies before the
/// records count. Thresholds default to the dataset's minimum significant
/// support (length significance_len at significance_alpha) with a floor.
BenchReport run_experiment(const Dataset& d, const ExperimentConfig& cfg);

/// Aggregates and paired tests recomputed from raw records, for reports
/// assembled outside run_experiment.
BenchReport assemble_report(std::string dataset, const ExperimentConfig& cfg, double min_sup,
                            std::vector<RunRecord> records);

void write_runs_csv(const BenchReport& r, std::ostream& out);
void write_matrix_times_csv(const BenchReport& r, std::ostream& out);
std::string summary_table(const BenchReport& r);

/// runs.csv, matrix_ms.csv, summary.txt and one SVG chart per reported
/// quantity, written into out_dir (created if needed).
void write_report(const BenchReport& r, const std::filesystem::path& out_dir);

} // namespace vpmine
