#include "vpmine/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <random>
#include <stdexcept>

#include "vpmine/errors.hpp"
#include "vpmine/svg.hpp"

namespace vpmine {

namespace {

constexpr std::uint64_t kSubsetRole = 1;
constexpr std::uint64_t kShuffleRole = 2;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

const Strategy kStrategyOrder[3] = {Strategy::similarity, Strategy::dissimilarity,
                                    Strategy::random};

std::vector<std::pair<std::vector<Item>, Tidset>> canonical(const PatternSet& ps) {
    std::vector<std::pair<std::vector<Item>, Tidset>> v;
    v.reserve(ps.patterns.size());
    for (const Pattern& p : ps.patterns) v.emplace_back(p.items, p.tids);
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<PatternSet> mine_clusters(const Dataset& d, const PartitionPlan& plan,
                                      double min_sup, bool parallel) {
    std::vector<PatternSet> mined(plan.clusters.size());
    if (parallel && plan.clusters.size() > 1) {
        std::vector<std::future<PatternSet>> futs;
        futs.reserve(plan.clusters.size());
        for (std::size_t c = 0; c < plan.clusters.size(); ++c)
            futs.push_back(std::async(std::launch::async, [&, c] {
                return apriori(d, plan.clusters[c], min_sup, "cluster" + std::to_string(c));
            }));
        for (std::size_t c = 0; c < futs.size(); ++c) mined[c] = futs[c].get();
    } else {
        for (std::size_t c = 0; c < plan.clusters.size(); ++c)
            mined[c] = apriori(d, plan.clusters[c], min_sup, "cluster" + std::to_string(c));
    }
    return mined;
}

struct MeanSd {
    double mean = 0.0, sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& xs) {
    MeanSd r;
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= double(xs.size());
    if (xs.size() < 2) return r;
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.sd = std::sqrt(ss / double(xs.size() - 1));
    return r;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_ms(double v) {
    return std::to_string(static_cast<long long>(std::llround(v)));
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t role) {
    std::uint64_t s = splitmix64(master ^ (role * 0xd6e8feb86659fd93ULL));
    s = splitmix64(s ^ a);
    return splitmix64(s ^ b);
}

std::vector<VarId> sample_variables(const std::vector<VarId>& all, std::size_t k,
                                    std::uint64_t seed) {
    if (k > all.size())
        throw std::invalid_argument("cannot sample " + std::to_string(k) + " of " +
                                    std::to_string(all.size()) + " variables");
    std::vector<VarId> pool(all);
    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(gen() % (pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

BenchReport run_experiment(const Dataset& d, const ExperimentConfig& cfg) {
    if (cfg.variable_counts.empty())
        throw std::invalid_argument("no variable counts configured");
    if (cfg.runs < 2) throw std::invalid_argument("at least two runs are required");
    if (cfg.cap < 1) throw std::invalid_argument("cap must be at least 1");
    for (std::size_t k : cfg.variable_counts) {
        if (k < 2) throw std::invalid_argument("variable counts must be at least 2");
        if (k > d.n_vars())
            throw DataError("variable count " + std::to_string(k) + " exceeds the " +
                            std::to_string(d.n_vars()) + " variables of " + d.name());
    }

    const double min_sup =
        cfg.min_sup_override
            ? *cfg.min_sup_override
            : std::max(min_significant_support(d, cfg.significance_len, cfg.significance_alpha),
                       cfg.min_sup_floor);

    std::vector<RunRecord> records;
    records.reserve(cfg.variable_counts.size() * cfg.runs * 3);

    for (std::size_t k : cfg.variable_counts) {
        for (std::size_t run = 0; run < cfg.runs; ++run) {
            const std::uint64_t subset_seed = derive_seed(cfg.master_seed, k, run, kSubsetRole);
            const std::vector<VarId> subset = sample_variables(d.variables(), k, subset_seed);
            const Dataset proj = d.project(subset);

            std::vector<std::pair<std::vector<Item>, Tidset>> reference;
            for (Strategy strategy : kStrategyOrder) {
                RunRecord rec;
                rec.dataset = d.name();
                rec.n_vars = k;
                rec.run = run;
                rec.strategy = strategy;
                rec.seed = subset_seed;

                PartitionPlan plan;
                double partition_ms = 0.0;
                if (strategy == Strategy::random) {
                    const auto t0 = std::chrono::steady_clock::now();
                    plan = random_partition(subset, cfg.cap,
                                            derive_seed(cfg.master_seed, k, run, kShuffleRole));
                    partition_ms = ms_since(t0);
                } else {
                    const auto tm = std::chrono::steady_clock::now();
                    const SimilarityMatrix matrix = build_matrix(proj, cfg.metric);
                    rec.t_matrix_ms = ms_since(tm);
                    const auto t0 = std::chrono::steady_clock::now();
                    plan = capped_agglomerative(matrix, cfg.cap,
                                                strategy == Strategy::similarity
                                                    ? LinkObjective::most_similar
                                                    : LinkObjective::least_similar);
                    partition_ms = ms_since(t0);
                }

                const auto t1 = std::chrono::steady_clock::now();
                const std::vector<PatternSet> mined =
                    mine_clusters(proj, plan, min_sup, cfg.parallel_mine);
                const double mine_ms = ms_since(t1);

                const auto t2 = std::chrono::steady_clock::now();
                const PatternSet merged =
                    pattern_merge(MergeInput{mined, proj.n_obs(), min_sup});
                rec.t_merge_ms = ms_since(t2);

                rec.t_pipeline_ms = partition_ms + mine_ms + rec.t_merge_ms +
                                    (cfg.include_matrix_time ? rec.t_matrix_ms : 0.0);

                const MergeStats st = merge_stats(mined, merged);
                rec.n_premerge = st.pre_merge_count;
                rec.mean_obs_premerge = st.mean_obs;
                rec.mean_vars_premerge = st.mean_vars;
                rec.n_final = st.final_count;

                auto canon = canonical(merged);
                if (strategy == Strategy::similarity) {
                    reference = std::move(canon);
                } else if (canon != reference) {
                    throw StrategyMismatchError(
                        "strategies disagree on " + d.name() + ", n_vars " + std::to_string(k) +
                        ", run " + std::to_string(run) + ": similarity found " +
                        std::to_string(reference.size()) + " patterns, " +
                        std::string(strategy_name(strategy)) + " found " +
                        std::to_string(canon.size()));
                }
                records.push_back(std::move(rec));
            }
        }
    }
    return assemble_report(d.name(), cfg, min_sup, std::move(records));
}

BenchReport assemble_report(std::string dataset, const ExperimentConfig& cfg, double min_sup,
                            std::vector<RunRecord> records) {
    BenchReport rep;
    rep.dataset = std::move(dataset);
    rep.config = cfg;
    rep.min_sup = min_sup;
    rep.records = std::move(records);

    for (std::size_t k : cfg.variable_counts) {
        for (Strategy strategy : kStrategyOrder) {
            std::vector<double> pipeline, merge, obs, vars, finals;
            for (const RunRecord& r : rep.records) {
                if (r.n_vars != k || r.strategy != strategy) continue;
                pipeline.push_back(r.t_pipeline_ms);
                merge.push_back(r.t_merge_ms);
                obs.push_back(r.mean_obs_premerge);
                vars.push_back(r.mean_vars_premerge);
                finals.push_back(double(r.n_final));
            }
            if (pipeline.empty()) continue;
            Aggregate a;
            a.n_vars = k;
            a.strategy = strategy;
            a.runs = pipeline.size();
            const MeanSd p = mean_sd(pipeline), m = mean_sd(merge), o = mean_sd(obs),
                         v = mean_sd(vars), f = mean_sd(finals);
            a.mean_pipeline_ms = p.mean;
            a.sd_pipeline_ms = p.sd;
            a.mean_merge_ms = m.mean;
            a.sd_merge_ms = m.sd;
            a.mean_obs = o.mean;
            a.sd_obs = o.sd;
            a.mean_vars = v.mean;
            a.sd_vars = v.sd;
            a.mean_final = f.mean;
            a.sd_final = f.sd;
            rep.aggregates.push_back(a);
        }
    }

    // Pair the (n_vars, run) cells of the similarity strategy with each
    // baseline, in record order.
    std::map<std::pair<std::size_t, std::size_t>, std::array<const RunRecord*, 3>> cells;
    std::vector<std::pair<std::size_t, std::size_t>> cell_order;
    for (const RunRecord& r : rep.records) {
        auto key = std::make_pair(r.n_vars, r.run);
        auto [it, fresh] = cells.try_emplace(key);
        if (fresh) cell_order.push_back(key);
        it->second[static_cast<std::size_t>(r.strategy)] = &r;
    }
    for (Strategy baseline : {Strategy::dissimilarity, Strategy::random}) {
        std::vector<double> sim_merge, base_merge, sim_pipe, base_pipe;
        for (const auto& key : cell_order) {
            const auto& cell = cells[key];
            const RunRecord* s = cell[static_cast<std::size_t>(Strategy::similarity)];
            const RunRecord* b = cell[static_cast<std::size_t>(baseline)];
            if (!s || !b) continue;
            sim_merge.push_back(s->t_merge_ms);
            base_merge.push_back(b->t_merge_ms);
            sim_pipe.push_back(s->t_pipeline_ms);
            base_pipe.push_back(b->t_pipeline_ms);
        }
        if (sim_merge.size() < 2) continue;
        StrategyComparison c;
        c.baseline = baseline;
        c.p_merge_less = paired_t_one_sided(sim_merge, base_merge, Alternative::less);
        c.p_merge_greater = paired_t_one_sided(sim_merge, base_merge, Alternative::greater);
        c.p_pipeline_less = paired_t_one_sided(sim_pipe, base_pipe, Alternative::less);
        c.p_pipeline_greater = paired_t_one_sided(sim_pipe, base_pipe, Alternative::greater);
        rep.comparisons.push_back(c);
    }
    return rep;
}

void write_runs_csv(const BenchReport& r, std::ostream& out) {
    out << "dataset,n_vars,run,strategy,seed,t_pipeline_ms,t_merge_ms,n_premerge,"
           "mean_obs_premerge,mean_vars_premerge,n_final\n";
    for (const RunRecord& rec : r.records) {
        out << rec.dataset << ',' << rec.n_vars << ',' << rec.run << ','
            << strategy_name(rec.strategy) << ',' << rec.seed << ',' << fmt_ms(rec.t_pipeline_ms)
            << ',' << fmt_ms(rec.t_merge_ms) << ',' << rec.n_premerge << ','
            << fmt6(rec.mean_obs_premerge) << ',' << fmt6(rec.mean_vars_premerge) << ','
            << rec.n_final << '\n';
    }
}

void write_matrix_times_csv(const BenchReport& r, std::ostream& out) {
    out << "dataset,n_vars,run,strategy,seed,t_matrix_ms\n";
    for (const RunRecord& rec : r.records) {
        if (rec.strategy == Strategy::random) continue;
        out << rec.dataset << ',' << rec.n_vars << ',' << rec.run << ','
            << strategy_name(rec.strategy) << ',' << rec.seed << ',' << fmt_ms(rec.t_matrix_ms)
            << '\n';
    }
}

std::string summary_table(const BenchReport& r) {
    auto p2 = [](double p) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.2f%s", p, p < 0.05 ? "*" : " ");
        return std::string(buf);
    };
    std::string s;
    s += "dataset: " + r.dataset + "\n";
    s += "min_sup: " + fmt6(r.min_sup) + ", runs: " + std::to_string(r.config.runs) +
         ", cap: " + std::to_string(r.config.cap) +
         ", metric: " + std::string(metric_name(r.config.metric)) + "\n";
    s += "paired one-sided t-tests on per-cell timings, similarity vs baseline\n\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-28s %-12s %-12s %-15s %-15s\n", "comparison",
                  "merge_less", "merge_greater", "pipeline_less", "pipeline_greater");
    s += line;
    if (r.comparisons.empty()) {
        s += "(not enough paired cells for a t-test)\n";
        return s;
    }
    for (const StrategyComparison& c : r.comparisons) {
        const std::string name = "similarity vs " + std::string(strategy_name(c.baseline));
        std::snprintf(line, sizeof line, "%-28s %-12s %-12s %-15s %-15s\n", name.c_str(),
                      p2(c.p_merge_less).c_str(), p2(c.p_merge_greater).c_str(),
                      p2(c.p_pipeline_less).c_str(), p2(c.p_pipeline_greater).c_str());
        s += line;
    }
    s += "\n* marks p below 0.05\n";
    return s;
}

namespace {

struct ChartField {
    const char* file;
    const char* title;
    const char* y_label;
    double Aggregate::* mean;
    double Aggregate::* sd;
};

} // namespace

void write_report(const BenchReport& r, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream f(out_dir / "runs.csv");
        write_runs_csv(r, f);
    }
    {
        std::ofstream f(out_dir / "matrix_ms.csv");
        write_matrix_times_csv(r, f);
    }
    {
        std::ofstream f(out_dir / "summary.txt");
        f << summary_table(r);
    }
    if (r.config.variable_counts.empty()) return;

    const ChartField fields[] = {
        {"pipeline_ms.svg", "Pipeline time", "time (ms)", &Aggregate::mean_pipeline_ms,
         &Aggregate::sd_pipeline_ms},
        {"merge_ms.svg", "Merge time", "time (ms)", &Aggregate::mean_merge_ms,
         &Aggregate::sd_merge_ms},
        {"mean_obs_premerge.svg", "Mean observations per pre-merge pattern", "observations",
         &Aggregate::mean_obs, &Aggregate::sd_obs},
        {"mean_vars_premerge.svg", "Mean variables per pre-merge pattern", "variables",
         &Aggregate::mean_vars, &Aggregate::sd_vars},
    };
    const std::pair<Strategy, const char*> palette[] = {
        {Strategy::similarity, "#2e8b57"},
        {Strategy::random, "#e6b800"},
        {Strategy::dissimilarity, "#d62728"},
    };

    for (const ChartField& field : fields) {
        ChartSpec spec;
        spec.title = field.title + std::string(" on ") + r.dataset;
        spec.x_label = "variables";
        spec.y_label = field.y_label;
        for (std::size_t k : r.config.variable_counts) spec.x.push_back(double(k));
        for (const auto& [strategy, color] : palette) {
            ChartSeries series;
            series.label = strategy_name(strategy);
            series.color = color;
            for (std::size_t k : r.config.variable_counts) {
                const Aggregate* found = nullptr;
                for (const Aggregate& a : r.aggregates)
                    if (a.n_vars == k && a.strategy == strategy) {
                        found = &a;
                        break;
                    }
                series.mean.push_back(found ? found->*(field.mean) : 0.0);
                series.sd.push_back(found ? found->*(field.sd) : 0.0);
            }
            spec.series.push_back(std::move(series));
        }
        std::ofstream f(out_dir / field.file);
        f << render_line_chart(spec);
    }
}

} // namespace vpmine
