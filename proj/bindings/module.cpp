#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "vpmine/bench.hpp"
#include "vpmine/dataset.hpp"
#include "vpmine/merge.hpp"
#include "vpmine/miner.hpp"
#include "vpmine/partition.hpp"
#include "vpmine/similarity.hpp"
#include "vpmine/stats.hpp"

namespace py = pybind11;
using namespace vpmine;

namespace {

Dataset load_dataset(const std::filesystem::path& path, const std::string& format,
                     const std::string& missing_marker) {
    Dataset::Format f;
    if (format == "fimi")
        f = Dataset::Format::fimi;
    else if (format == "csv")
        f = Dataset::Format::csv;
    else if (format == "auto")
        f = path.extension() == ".csv" ? Dataset::Format::csv : Dataset::Format::fimi;
    else
        throw std::invalid_argument("unknown format: " + format);
    return Dataset::load_file(path, f, missing_marker);
}

Alternative alternative_from_name(const std::string& name) {
    if (name == "less") return Alternative::less;
    if (name == "greater") return Alternative::greater;
    throw std::invalid_argument("alternative must be 'less' or 'greater'");
}

PartitionPlan make_partition(const Dataset& d, std::size_t cap, const std::string& strategy,
                             const std::string& metric, std::optional<std::uint64_t> seed) {
    const Strategy s = strategy_from_name(strategy);
    if (s == Strategy::random) return random_partition(d.variables(), cap, seed.value_or(1));
    const SimilarityMatrix m = build_matrix(d, metric_from_name(metric));
    return capped_agglomerative(m, cap,
                                s == Strategy::similarity ? LinkObjective::most_similar
                                                          : LinkObjective::least_similar);
}

PatternSet merge_mined(const Dataset& d, const PartitionPlan& plan, double min_sup) {
    if (auto problem = validate(plan, d.variables()))
        throw DataError("plan does not fit dataset: " + *problem);
    MergeInput in;
    in.n_obs = d.n_obs();
    in.min_sup = min_sup;
    for (std::size_t c = 0; c < plan.clusters.size(); ++c)
        in.cluster_patterns.push_back(
            apriori(d, plan.clusters[c], min_sup, "cluster" + std::to_string(c)));
    return pattern_merge(in);
}

} // namespace

PYBIND11_MODULE(vpmine, m) {
    m.doc() = "similarity-guided vertical partitioning for scalable pattern mining";

    py::register_exception<DataError>(m, "DataError");
    py::register_exception<StrategyMismatchError>(m, "StrategyMismatchError");

    py::class_<DatasetStats>(m, "DatasetStats")
        .def_readonly("n_obs", &DatasetStats::n_obs)
        .def_readonly("n_vars", &DatasetStats::n_vars)
        .def_readonly("missing_fraction", &DatasetStats::missing_fraction)
        .def("__repr__", [](const DatasetStats& s) {
            std::ostringstream o;
            o << "DatasetStats(n_obs=" << s.n_obs << ", n_vars=" << s.n_vars
              << ", missing_fraction=" << s.missing_fraction << ")";
            return o.str();
        });

    py::class_<Dataset>(m, "Dataset")
        .def_static("from_fimi", &Dataset::parse_fimi, py::arg("text"), py::arg("name") = "")
        .def_static("from_csv", &Dataset::parse_csv, py::arg("text"),
                    py::arg("missing_marker") = "NaN", py::arg("name") = "")
        .def_static("load", &load_dataset, py::arg("path"), py::arg("format") = "auto",
                    py::arg("missing_marker") = "NaN")
        .def_property_readonly("n_obs", &Dataset::n_obs)
        .def_property_readonly("n_vars", &Dataset::n_vars)
        .def_property_readonly("name", &Dataset::name)
        .def("variables", &Dataset::variables)
        .def("variable_name", &Dataset::variable_name, py::arg("var"))
        .def("value_count", &Dataset::value_count, py::arg("var"))
        .def("value_name", &Dataset::value_name, py::arg("var"), py::arg("code"))
        .def("tidset", &Dataset::tidset, py::arg("var"), py::arg("code"))
        .def("stats", &Dataset::stats)
        .def("project", &Dataset::project, py::arg("vars"))
        .def("__repr__", [](const Dataset& d) {
            std::ostringstream o;
            o << "Dataset('" << d.name() << "', " << d.n_obs() << " obs, " << d.n_vars()
              << " vars)";
            return o.str();
        });

    m.def(
        "min_significant_support",
        [](const Dataset& d, std::size_t pattern_len, double alpha) {
            return min_significant_support(d, pattern_len, alpha);
        },
        py::arg("dataset"), py::arg("pattern_len") = 4, py::arg("alpha") = 0.05);
    m.def(
        "min_significant_support_raw",
        [](std::size_t n_obs, double missing_fraction, std::size_t pattern_len, double alpha) {
            return min_significant_support(n_obs, missing_fraction, pattern_len, alpha);
        },
        py::arg("n_obs"), py::arg("missing_fraction"), py::arg("pattern_len") = 4,
        py::arg("alpha") = 0.05);

    py::class_<SimilarityMatrix>(m, "SimilarityMatrix")
        .def_readonly("variable_ids", &SimilarityMatrix::variable_ids)
        .def_property_readonly("metric",
                               [](const SimilarityMatrix& s) { return metric_name(s.metric); })
        .def_property_readonly("order", &SimilarityMatrix::order)
        .def("at", [](const SimilarityMatrix& s, std::size_t i,
                      std::size_t j) { return s.at(i, j); })
        .def("rows", [](const SimilarityMatrix& s) {
            std::vector<std::vector<double>> rows(s.order());
            for (std::size_t i = 0; i < s.order(); ++i)
                for (std::size_t j = 0; j < s.order(); ++j) rows[i].push_back(s.at(i, j));
            return rows;
        });

    m.def(
        "similarity",
        [](const Dataset& d, VarId v1, VarId v2, const std::string& metric) {
            return evaluate_metric(metric_from_name(metric), make_column(d, v1),
                                   make_column(d, v2));
        },
        py::arg("dataset"), py::arg("var1"), py::arg("var2"), py::arg("metric") = "sim_co");
    m.def(
        "similarity_from_cells",
        [](const std::vector<std::string>& a, const std::vector<std::string>& b,
           const std::string& metric, const std::string& missing_marker) {
            return evaluate_metric(metric_from_name(metric), column_from_strings(a, missing_marker),
                                   column_from_strings(b, missing_marker));
        },
        py::arg("cells1"), py::arg("cells2"), py::arg("metric") = "sim_co",
        py::arg("missing_marker") = "NaN");
    m.def(
        "similarity_matrix",
        [](const Dataset& d, const std::string& metric) {
            return build_matrix(d, metric_from_name(metric));
        },
        py::arg("dataset"), py::arg("metric") = "sim_co");

    py::class_<PartitionPlan>(m, "PartitionPlan")
        .def_readonly("clusters", &PartitionPlan::clusters)
        .def_readonly("cap", &PartitionPlan::cap)
        .def_property_readonly("strategy",
                               [](const PartitionPlan& p) { return strategy_name(p.strategy); })
        .def_readonly("seed", &PartitionPlan::seed)
        .def("to_json", &plan_to_json)
        .def_static("from_json",
                    [](const std::string& text) { return plan_from_json(text); });

    m.def("partition", &make_partition, py::arg("dataset"), py::arg("cap"),
          py::arg("strategy") = "similarity", py::arg("metric") = "sim_co",
          py::arg("seed") = std::nullopt);

    py::class_<Pattern>(m, "Pattern")
        .def_property_readonly("items",
                               [](const Pattern& p) {
                                   std::vector<std::pair<VarId, ValueCode>> out;
                                   for (const Item& it : p.items)
                                       out.emplace_back(it.var, it.value);
                                   return out;
                               })
        .def_readonly("tids", &Pattern::tids)
        .def_property_readonly("support", &Pattern::support)
        .def("describe", &pattern_to_string, py::arg("dataset"));

    py::class_<PatternSet>(m, "PatternSet")
        .def_readonly("patterns", &PatternSet::patterns)
        .def_readonly("min_sup", &PatternSet::min_sup)
        .def_readonly("source", &PatternSet::source)
        .def("__len__", [](const PatternSet& ps) { return ps.patterns.size(); });

    m.def("apriori", &apriori, py::arg("dataset"), py::arg("vars"), py::arg("min_sup"),
          py::arg("source") = "full");
    m.def("closed_filter", &closed_filter, py::arg("patterns"));
    m.def("mine_closed", &mine_closed_oracle, py::arg("dataset"), py::arg("vars"),
          py::arg("min_sup"));
    m.def("mine_partitioned", &merge_mined, py::arg("dataset"), py::arg("plan"),
          py::arg("min_sup"));

    m.def(
        "paired_t_one_sided",
        [](const std::vector<double>& a, const std::vector<double>& b,
           const std::string& alternative) {
            return paired_t_one_sided(a, b, alternative_from_name(alternative));
        },
        py::arg("a"), py::arg("b"), py::arg("alternative") = "less");
    m.def("student_t_cdf", &student_t_cdf, py::arg("t"), py::arg("df"));

    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("dataset", &RunRecord::dataset)
        .def_readonly("n_vars", &RunRecord::n_vars)
        .def_readonly("run", &RunRecord::run)
        .def_property_readonly("strategy",
                               [](const RunRecord& r) { return strategy_name(r.strategy); })
        .def_readonly("seed", &RunRecord::seed)
        .def_readonly("t_pipeline_ms", &RunRecord::t_pipeline_ms)
        .def_readonly("t_matrix_ms", &RunRecord::t_matrix_ms)
        .def_readonly("t_merge_ms", &RunRecord::t_merge_ms)
        .def_readonly("n_premerge", &RunRecord::n_premerge)
        .def_readonly("mean_obs_premerge", &RunRecord::mean_obs_premerge)
        .def_readonly("mean_vars_premerge", &RunRecord::mean_vars_premerge)
        .def_readonly("n_final", &RunRecord::n_final);

    py::class_<BenchReport>(m, "BenchReport")
        .def_readonly("dataset", &BenchReport::dataset)
        .def_readonly("min_sup", &BenchReport::min_sup)
        .def_readonly("records", &BenchReport::records)
        .def("summary", &summary_table)
        .def("write", &write_report, py::arg("out_dir"))
        .def("runs_csv", [](const BenchReport& r) {
            std::ostringstream out;
            write_runs_csv(r, out);
            return out.str();
        });

    m.def(
        "run_benchmark",
        [](const Dataset& d, const std::vector<std::size_t>& counts, std::size_t runs,
           std::size_t cap, std::uint64_t seed, const std::string& metric,
           std::optional<double> min_sup, bool parallel_mine, bool include_matrix_time) {
            ExperimentConfig cfg;
            cfg.variable_counts = counts;
            cfg.runs = runs;
            cfg.cap = cap;
            cfg.master_seed = seed;
            cfg.metric = metric_from_name(metric);
            cfg.min_sup_override = min_sup;
            cfg.parallel_mine = parallel_mine;
            cfg.include_matrix_time = include_matrix_time;
            return run_experiment(d, cfg);
        },
        py::arg("dataset"), py::arg("counts") = std::vector<std::size_t>{4, 8, 12, 16, 20},
        py::arg("runs") = 10, py::arg("cap") = 4, py::arg("seed") = 1,
        py::arg("metric") = "sim_co", py::arg("min_sup") = std::nullopt,
        py::arg("parallel_mine") = false, py::arg("include_matrix_time") = false);
}
