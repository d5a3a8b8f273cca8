#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "support/oracles.hpp"
#include "vpmine/errors.hpp"
#include "vpmine/merge.hpp"
#include "vpmine/partition.hpp"
#include "vpmine/similarity.hpp"

using namespace vpmine;

namespace {

MergeInput mine_plan(const Dataset& d, const PartitionPlan& plan, double min_sup) {
    MergeInput in;
    in.n_obs = d.n_obs();
    in.min_sup = min_sup;
    for (std::size_t c = 0; c < plan.clusters.size(); ++c)
        in.cluster_patterns.push_back(
            apriori(d, plan.clusters[c], min_sup, "cluster" + std::to_string(c)));
    return in;
}

} // namespace

TEST_SUITE("merge") {

TEST_CASE("join unites items and intersects rows") {
    Pattern p{{{0, 1}}, {0, 1, 2}};
    Pattern q{{{2, 0}}, {1, 2, 3}};
    auto j = join(p, q, 4, 0.5);
    REQUIRE(j.has_value());
    CHECK(j->items == std::vector<Item>{{0, 1}, {2, 0}});
    CHECK(j->tids == Tidset{1, 2});

    CHECK_FALSE(join(p, q, 4, 0.75).has_value()); // 2 rows < ceil(3)

    Pattern r{{{0, 0}}, {0, 1}};
    CHECK_THROWS_WITH_AS(join(p, r, 4, 0.1), doctest::Contains("variable 0"), DataError);
}

TEST_CASE("pattern_merge reconstructs the worked example") {
    auto d = Dataset::parse_csv("a,b\n1,p\n1,p\n1,q\n2,q\n");
    PartitionPlan plan;
    plan.cap = 1;
    plan.clusters = {{0}, {1}};
    auto merged = pattern_merge(mine_plan(d, plan, 0.5));
    CHECK(merged.source == "merged");
    CHECK(merged.min_sup == 0.5);
    CHECK(oracle::canon(merged.patterns) ==
          oracle::canon(mine_closed_oracle(d, d.variables(), 0.5).patterns));
    CHECK(merged.patterns.size() == 3);
}

TEST_CASE("a single cluster reduces to the closed filter") {
    std::mt19937_64 gen(41);
    auto d = Dataset::parse_csv(oracle::random_csv(gen, 30, 5, 3, 0.2));
    PartitionPlan plan;
    plan.cap = d.n_vars();
    plan.clusters = {d.variables()};
    auto merged = pattern_merge(mine_plan(d, plan, 0.2));
    CHECK(oracle::canon(merged.patterns) ==
          oracle::canon(mine_closed_oracle(d, d.variables(), 0.2).patterns));
}

TEST_CASE("merged patterns equal whole-table closed mining for every plan") {
    std::mt19937_64 gen(47);
    for (int rep = 0; rep < 24; ++rep) {
        const std::size_t n_vars = 4 + rep % 6;
        auto d = rep % 3 == 2
                     ? Dataset::parse_fimi(oracle::random_fimi(gen, 20 + rep, n_vars, 0.45))
                     : Dataset::parse_csv(
                           oracle::random_csv(gen, 20 + rep, n_vars, 3, 0.15));
        auto matrix = build_matrix(d, Metric::sim_co);
        for (double min_sup : {0.15, 0.3}) {
            auto want = oracle::canon(
                oracle::closed_by_definition(oracle::enumerate_frequent(d, d.variables(), min_sup)));
            CHECK(oracle::canon(mine_closed_oracle(d, d.variables(), min_sup).patterns) == want);
            for (std::size_t cap : {1u, 2u, 3u}) {
                PartitionPlan plans[] = {
                    capped_agglomerative(matrix, cap, LinkObjective::most_similar),
                    capped_agglomerative(matrix, cap, LinkObjective::least_similar),
                    random_partition(d.variables(), cap, 1000 + rep),
                };
                for (const auto& plan : plans) {
                    INFO("rep=", rep, " min_sup=", min_sup, " cap=", cap, " strategy=",
                         strategy_name(plan.strategy));
                    auto merged = pattern_merge(mine_plan(d, plan, min_sup));
                    CHECK(oracle::canon(merged.patterns) == want);
                }
            }
        }
    }
}

TEST_CASE("merged output is closed and above threshold") {
    std::mt19937_64 gen(53);
    auto d = Dataset::parse_csv(oracle::random_csv(gen, 40, 6, 3, 0.2));
    auto plan = random_partition(d.variables(), 2, 7);
    auto merged = pattern_merge(mine_plan(d, plan, 0.2));
    REQUIRE(!merged.patterns.empty());
    for (const Pattern& p : merged.patterns)
        CHECK(meets_support(p.support(), d.n_obs(), 0.2));
    for (const Pattern& p : merged.patterns)
        for (const Pattern& q : merged.patterns) CHECK_FALSE(is_dominated(p, q));
}

TEST_CASE("pattern_merge rejects inconsistent inputs") {
    auto d = Dataset::parse_csv("a,b\n1,p\n1,p\n1,q\n2,q\n");
    PartitionPlan plan;
    plan.clusters = {{0}, {1}};

    auto in = mine_plan(d, plan, 0.5);
    in.cluster_patterns[1].min_sup = 0.4;
    CHECK_THROWS_WITH_AS(pattern_merge(in), doctest::Contains("threshold"), DataError);

    MergeInput overlap;
    overlap.n_obs = 4;
    overlap.min_sup = 0.5;
    overlap.cluster_patterns = {apriori(d, {0}, 0.5), apriori(d, {0}, 0.5)};
    CHECK_THROWS_WITH_AS(pattern_merge(overlap), doctest::Contains("more than one"), DataError);

    MergeInput empty;
    empty.min_sup = 0.5;
    CHECK(pattern_merge(empty).patterns.empty());
}

TEST_CASE("merge_stats summarizes the pre-merge sets") {
    PatternSet a;
    a.patterns = {Pattern{{{0, 0}}, {0, 1, 2}}};
    PatternSet b;
    b.patterns = {Pattern{{{1, 0}, {2, 1}}, {0, 1}}};
    PatternSet after;
    after.patterns = {Pattern{{{0, 0}}, {0, 1, 2}}};

    auto s = merge_stats({a, b}, after);
    CHECK(s.pre_merge_count == 2);
    CHECK(s.final_count == 1);
    CHECK(s.mean_obs == doctest::Approx(2.5));
    CHECK(s.mean_vars == doctest::Approx(1.5));
    CHECK_FALSE(s.empty_premerge);

    auto e = merge_stats({}, PatternSet{});
    CHECK(e.empty_premerge);
    CHECK(e.pre_merge_count == 0);
    CHECK(e.mean_obs == 0.0);
}

TEST_CASE("merge_summary_json carries the report fields") {
    MergeStats s;
    s.pre_merge_count = 7;
    s.final_count = 4;
    s.mean_obs = 12.25;
    s.mean_vars = 1.5;
    auto j = nlohmann::json::parse(merge_summary_json(s, 3.5));
    CHECK(j["pre_merge_count"] == 7);
    CHECK(j["final_count"] == 4);
    CHECK(j["mean_obs"] == doctest::Approx(12.25));
    CHECK(j["mean_vars"] == doctest::Approx(1.5));
    CHECK(j["merge_wall_ms"] == doctest::Approx(3.5));
}

} // TEST_SUITE
