#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vpmine/bench.hpp"
#include "vpmine/dataset.hpp"
#include "vpmine/errors.hpp"
#include "vpmine/merge.hpp"
#include "vpmine/miner.hpp"
#include "vpmine/partition.hpp"
#include "vpmine/similarity.hpp"

namespace {

using namespace vpmine;

struct LoadOptions {
    std::string path;
    std::string format = "auto";
    std::string missing_marker = "NaN";
};

void add_load_options(CLI::App* cmd, LoadOptions& opt) {
    cmd->add_option("file", opt.path, "input dataset")->required();
    cmd->add_option("--format", opt.format, "fimi or csv (default: by extension, .csv is csv)")
        ->check(CLI::IsMember({"auto", "fimi", "csv"}));
    cmd->add_option("--missing-marker", opt.missing_marker,
                    "cell treated as missing in csv input (default NaN)");
}

Dataset load(const LoadOptions& opt) {
    Dataset::Format format;
    if (opt.format == "fimi")
        format = Dataset::Format::fimi;
    else if (opt.format == "csv")
        format = Dataset::Format::csv;
    else
        format = std::filesystem::path(opt.path).extension() == ".csv" ? Dataset::Format::csv
                                                                       : Dataset::Format::fimi;
    return Dataset::load_file(opt.path, format, opt.missing_marker);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run(int argc, char** argv) {
    CLI::App app{"similarity-guided vertical partitioning for scalable pattern mining"};
    app.require_subcommand(1);

    // stats
    LoadOptions stats_load;
    std::size_t stats_len = 4;
    double stats_alpha = 0.05;
    auto* stats_cmd = app.add_subcommand("stats", "dataset shape and minimum significant support");
    add_load_options(stats_cmd, stats_load);
    stats_cmd->add_option("--len", stats_len, "pattern length for the significance bound")
        ->check(CLI::PositiveNumber);
    stats_cmd->add_option("--alpha", stats_alpha, "significance level");

    // simmatrix
    LoadOptions sim_load;
    std::string sim_metric = "sim_co";
    std::string sim_out;
    std::vector<VarId> sim_vars;
    auto* sim_cmd = app.add_subcommand("simmatrix", "pairwise variable similarity matrix");
    add_load_options(sim_cmd, sim_load);
    sim_cmd->add_option("--metric", sim_metric, "sim_co, sim_or, jaccard, pearson or kendall");
    sim_cmd->add_option("--vars", sim_vars, "restrict to these variable ids")->delimiter(',');
    sim_cmd->add_option("-o,--output", sim_out, "output csv path")->required();

    // partition
    LoadOptions part_load;
    std::string part_metric = "sim_co";
    std::string part_strategy = "similarity";
    std::size_t part_cap = 4;
    std::optional<std::uint64_t> part_seed;
    std::string part_out;
    auto* part_cmd = app.add_subcommand("partition", "group variables under a size cap");
    add_load_options(part_cmd, part_load);
    part_cmd->add_option("--metric", part_metric, "similarity metric for clustered strategies");
    part_cmd->add_option("--strategy", part_strategy, "similarity, dissimilarity or random");
    part_cmd->add_option("--cap", part_cap, "largest allowed cluster size")->required();
    part_cmd->add_option("--seed", part_seed, "shuffle seed for the random strategy");
    part_cmd->add_option("-o,--output", part_out, "output plan json path")->required();

    // mine
    LoadOptions mine_load;
    std::string mine_plan;
    double mine_min_sup = 0.0;
    std::string mine_out;
    auto* mine_cmd =
        app.add_subcommand("mine", "closed frequent patterns, whole or partitioned+merged");
    add_load_options(mine_cmd, mine_load);
    mine_cmd->add_option("--plan", mine_plan, "partition plan json; omitted mines whole");
    mine_cmd->add_option("--min-sup", mine_min_sup, "support threshold in (0, 1]")->required();
    mine_cmd->add_option("-o,--output", mine_out, "output pattern file")->required();

    // bench
    LoadOptions bench_load;
    ExperimentConfig cfg;
    std::optional<double> bench_min_sup;
    std::string bench_metric = "sim_co";
    std::string bench_out;
    auto* bench_cmd = app.add_subcommand("bench", "strategy comparison experiment");
    add_load_options(bench_cmd, bench_load);
    bench_cmd->add_option("--counts", cfg.variable_counts, "variable counts to sweep")
        ->delimiter(',');
    bench_cmd->add_option("--runs", cfg.runs, "runs per variable count");
    bench_cmd->add_option("--cap", cfg.cap, "largest allowed cluster size");
    bench_cmd->add_option("--seed", cfg.master_seed, "master seed");
    bench_cmd->add_option("--metric", bench_metric, "similarity metric");
    bench_cmd->add_option("--min-sup", bench_min_sup, "fixed support threshold override");
    bench_cmd->add_flag("--parallel-mine", cfg.parallel_mine, "mine clusters concurrently");
    bench_cmd->add_flag("--include-matrix-time", cfg.include_matrix_time,
                        "count matrix construction into pipeline time");
    bench_cmd->add_option("-o,--output", bench_out, "report directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e); // --help and friends
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (stats_cmd->parsed()) {
        const Dataset d = load(stats_load);
        const DatasetStats st = d.stats();
        std::printf("dataset: %s\n", d.name().c_str());
        std::printf("observations: %zu\n", st.n_obs);
        std::printf("variables: %zu\n", st.n_vars);
        std::printf("missing: %.6g%%\n", st.missing_fraction * 100.0);
        std::printf("min significant support (len %zu, alpha %g): %.10g\n", stats_len,
                    stats_alpha, min_significant_support(d, stats_len, stats_alpha));
        return kExitOk;
    }

    if (sim_cmd->parsed()) {
        Dataset d = load(sim_load);
        if (!sim_vars.empty()) d = d.project(sim_vars);
        const SimilarityMatrix m = build_matrix(d, metric_from_name(sim_metric));
        auto out = open_output(sim_out);
        write_matrix_csv(m, out);
        std::printf("wrote %zux%zu %s matrix to %s\n", m.order(), m.order(),
                    metric_name(m.metric).data(), sim_out.c_str());
        return kExitOk;
    }

    if (part_cmd->parsed()) {
        const Dataset d = load(part_load);
        const Strategy strategy = strategy_from_name(part_strategy);
        PartitionPlan plan;
        if (strategy == Strategy::random) {
            plan = random_partition(d.variables(), part_cap, part_seed.value_or(1));
        } else {
            const SimilarityMatrix m = build_matrix(d, metric_from_name(part_metric));
            plan = capped_agglomerative(m, part_cap,
                                        strategy == Strategy::similarity
                                            ? LinkObjective::most_similar
                                            : LinkObjective::least_similar);
        }
        if (auto problem = validate(plan, d.variables()))
            throw DataError("invalid plan: " + *problem);
        auto out = open_output(part_out);
        out << plan_to_json(plan);
        std::printf("wrote %zu clusters (cap %zu, %s) to %s\n", plan.clusters.size(), plan.cap,
                    strategy_name(plan.strategy).data(), part_out.c_str());
        return kExitOk;
    }

    if (mine_cmd->parsed()) {
        const Dataset d = load(mine_load);
        PatternSet result;
        if (mine_plan.empty()) {
            result = mine_closed_oracle(d, d.variables(), mine_min_sup);
        } else {
            const PartitionPlan plan = plan_from_json(read_text_file(mine_plan));
            if (auto problem = validate(plan, d.variables()))
                throw DataError("plan does not fit dataset: " + *problem);
            MergeInput in;
            in.n_obs = d.n_obs();
            in.min_sup = mine_min_sup;
            for (std::size_t c = 0; c < plan.clusters.size(); ++c)
                in.cluster_patterns.push_back(
                    apriori(d, plan.clusters[c], mine_min_sup, "cluster" + std::to_string(c)));
            result = pattern_merge(in);
        }
        auto out = open_output(mine_out);
        write_patterns(result, d, out);
        std::printf("wrote %zu closed patterns to %s\n", result.patterns.size(),
                    mine_out.c_str());
        return kExitOk;
    }

    if (bench_cmd->parsed()) {
        const Dataset d = load(bench_load);
        cfg.metric = metric_from_name(bench_metric);
        cfg.min_sup_override = bench_min_sup;
        const BenchReport report = run_experiment(d, cfg);
        write_report(report, bench_out);
        std::printf("%s", summary_table(report).c_str());
        std::printf("report written to %s\n", bench_out.c_str());
        return kExitOk;
    }

    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const vpmine::StrategyMismatchError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return vpmine::kExitInternal;
    } catch (const vpmine::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return vpmine::kExitData;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return vpmine::kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return vpmine::kExitInternal;
    }
}
