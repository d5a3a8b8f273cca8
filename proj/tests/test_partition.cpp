#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "vpmine/errors.hpp"
#include "vpmine/partition.hpp"

using namespace vpmine;

namespace {

using Clusters = std::vector<std::vector<VarId>>;

SimilarityMatrix matrix(std::vector<VarId> ids, std::vector<double> scores) {
    SimilarityMatrix m;
    m.variable_ids = std::move(ids);
    m.scores = std::move(scores);
    REQUIRE(m.scores.size() == m.order() * m.order());
    return m;
}

SimilarityMatrix from_upper(std::vector<VarId> ids,
                            const std::vector<std::vector<double>>& upper) {
    const std::size_t n = ids.size();
    SimilarityMatrix m;
    m.variable_ids = std::move(ids);
    m.scores.assign(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            m.at(i, j) = upper[i][j - i - 1];
            m.at(j, i) = upper[i][j - i - 1];
        }
    return m;
}

std::multiset<std::vector<VarId>> cluster_set(const PartitionPlan& p) {
    return {p.clusters.begin(), p.clusters.end()};
}

} // namespace

TEST_SUITE("partition") {

TEST_CASE("most similar pairs the strongest links under the cap") {
    auto m = from_upper({1, 2, 3, 4}, {{0.9, 0.2, 0.1}, {0.15, 0.05}, {0.8}});
    auto p = capped_agglomerative(m, 2, LinkObjective::most_similar);
    CHECK(p.clusters == Clusters{{1, 2}, {3, 4}});
    CHECK(p.cap == 2);
    CHECK(p.strategy == Strategy::similarity);
    CHECK_FALSE(p.seed.has_value());

    auto q = capped_agglomerative(m, 2, LinkObjective::least_similar);
    CHECK(q.clusters == Clusters{{1, 3}, {2, 4}});
    CHECK(q.strategy == Strategy::dissimilarity);
}

TEST_CASE("objectives pick opposite first merges") {
    auto m = from_upper({1, 2, 3}, {{0.5, 0.9}, {0.1}});
    CHECK(capped_agglomerative(m, 2, LinkObjective::most_similar).clusters ==
          Clusters{{1, 3}, {2}});
    CHECK(capped_agglomerative(m, 2, LinkObjective::least_similar).clusters ==
          Clusters{{1}, {2, 3}});
}

TEST_CASE("linkage averages the pairwise scores") {
    // After {1,2} forms, single-link would chase the 0.9 edge into {1,2,3};
    // the average (0.9 + 0.0) / 2 = 0.45 loses to the 0.48 pair (3,4).
    auto m = from_upper({1, 2, 3, 4}, {{1.0, 0.9, 0.3}, {0.0, 0.35}, {0.48}});
    auto p = capped_agglomerative(m, 3, LinkObjective::most_similar);
    CHECK(p.clusters == Clusters{{1, 2}, {3, 4}});
}

TEST_CASE("score ties break on the smallest variable pair") {
    auto m = matrix({10, 20, 30, 40}, std::vector<double>(16, 0.7));
    auto p = capped_agglomerative(m, 2, LinkObjective::most_similar);
    CHECK(p.clusters == Clusters{{10, 20}, {30, 40}});
    CHECK(capped_agglomerative(m, 2, LinkObjective::least_similar).clusters ==
          Clusters{{10, 20}, {30, 40}});
}

TEST_CASE("cap one yields singletons, cap n one cluster") {
    auto m = from_upper({3, 1, 2}, {{0.4, 0.6}, {0.2}});
    auto p = capped_agglomerative(m, 1, LinkObjective::most_similar);
    CHECK(p.clusters == Clusters{{1}, {2}, {3}}); // ordered by smallest member
    for (auto obj : {LinkObjective::most_similar, LinkObjective::least_similar}) {
        CHECK(capped_agglomerative(m, 3, obj).clusters == Clusters{{1, 2, 3}});
        CHECK(capped_agglomerative(m, 9, obj).clusters == Clusters{{1, 2, 3}});
    }
}

TEST_CASE("first merges follow the extreme pair exactly") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<VarId> ids = {5, 7, 11, 13};
    for (int rep = 0; rep < 200; ++rep) {
        SimilarityMatrix m;
        m.variable_ids = ids;
        m.scores.assign(16, 1.0);
        std::size_t lo_i = 0, lo_j = 1, hi_i = 0, hi_j = 1;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) {
                double s = unit(gen);
                m.at(i, j) = m.at(j, i) = s;
                if (s > m.at(hi_i, hi_j)) hi_i = i, hi_j = j;
                if (s < m.at(lo_i, lo_j)) lo_i = i, lo_j = j;
            }
        // With cap 2 over four variables the plan is the extreme pair plus
        // the complement pair, whatever their own score is.
        auto expect = [&](std::size_t a, std::size_t b) {
            std::vector<VarId> first = {ids[a], ids[b]};
            std::vector<VarId> rest;
            for (std::size_t k = 0; k < 4; ++k)
                if (k != a && k != b) rest.push_back(ids[k]);
            std::sort(first.begin(), first.end());
            std::sort(rest.begin(), rest.end());
            return std::multiset<std::vector<VarId>>{first, rest};
        };
        CHECK(cluster_set(capped_agglomerative(m, 2, LinkObjective::most_similar)) ==
              expect(hi_i, hi_j));
        CHECK(cluster_set(capped_agglomerative(m, 2, LinkObjective::least_similar)) ==
              expect(lo_i, lo_j));
    }
}

TEST_CASE("clustered plans are valid partitions for any cap") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 150; ++rep) {
        const std::size_t n = 2 + rep % 9;
        std::vector<VarId> ids;
        for (std::size_t i = 0; i < n; ++i) ids.push_back(static_cast<VarId>(i * 3 + 1));
        SimilarityMatrix m;
        m.variable_ids = ids;
        m.scores.assign(n * n, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) m.at(i, j) = m.at(j, i) = unit(gen);
        const std::size_t cap = 1 + rep % (n + 1);
        for (auto obj : {LinkObjective::most_similar, LinkObjective::least_similar}) {
            auto p = capped_agglomerative(m, cap, obj);
            CHECK(validate(p, ids) == std::nullopt);
            for (const auto& c : p.clusters) {
                CHECK(c.size() <= cap);
                CHECK(std::is_sorted(c.begin(), c.end()));
            }
            for (std::size_t c = 1; c < p.clusters.size(); ++c)
                CHECK(p.clusters[c - 1].front() < p.clusters[c].front());
            CHECK(p.clusters.size() >= (n + cap - 1) / cap);
            auto again = capped_agglomerative(m, cap, obj);
            CHECK(again.clusters == p.clusters);
        }
    }
}

TEST_CASE("cluster count never grows with a looser cap") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = 9;
    SimilarityMatrix m;
    for (std::size_t i = 0; i < n; ++i) m.variable_ids.push_back(static_cast<VarId>(i));
    m.scores.assign(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m.at(i, j) = m.at(j, i) = unit(gen);
    std::size_t prev = n + 1;
    for (std::size_t cap = 1; cap <= n; ++cap) {
        auto p = capped_agglomerative(m, cap, LinkObjective::most_similar);
        CHECK(p.clusters.size() <= prev);
        prev = p.clusters.size();
    }
}

TEST_CASE("capped_agglomerative rejects degenerate inputs") {
    auto m = from_upper({1, 2}, {{0.5}});
    CHECK_THROWS_AS(capped_agglomerative(m, 0, LinkObjective::most_similar),
                    std::invalid_argument);
    SimilarityMatrix empty;
    CHECK_THROWS_AS(capped_agglomerative(empty, 2, LinkObjective::most_similar),
                    std::invalid_argument);
}

TEST_CASE("random partition cuts a seeded shuffle into chunks") {
    std::vector<VarId> vars = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    auto p = random_partition(vars, 4, 99);
    CHECK(p.strategy == Strategy::random);
    CHECK(p.seed == 99);
    CHECK(p.cap == 4);
    REQUIRE(p.clusters.size() == 3);
    CHECK(p.clusters[0].size() == 4);
    CHECK(p.clusters[1].size() == 4);
    CHECK(p.clusters[2].size() == 2);
    CHECK(validate(p, vars) == std::nullopt);
    for (const auto& c : p.clusters) CHECK(std::is_sorted(c.begin(), c.end()));

    CHECK(random_partition(vars, 4, 99).clusters == p.clusters);
    CHECK(random_partition(vars, 4, 100).clusters != p.clusters);
    CHECK(random_partition(vars, 20, 5).clusters.size() == 1);
    CHECK(random_partition(vars, 1, 5).clusters.size() == 10);
    CHECK_THROWS_AS(random_partition(vars, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_partition({}, 2, 1), std::invalid_argument);
}

TEST_CASE("validate reports the first violation") {
    std::vector<VarId> vars = {1, 2, 3};
    PartitionPlan p;
    p.cap = 2;
    p.strategy = Strategy::similarity;

    p.clusters = {{1, 2}, {3}};
    CHECK(validate(p, vars) == std::nullopt);

    p.clusters = {{1, 2}, {}, {3}};
    CHECK(validate(p, vars)->find("empty") != std::string::npos);

    p.clusters = {{1, 2, 3}};
    CHECK(validate(p, vars)->find("cap") != std::string::npos);

    p.clusters = {{1, 2}, {7}};
    CHECK(validate(p, vars)->find("unknown") != std::string::npos);

    p.clusters = {{1, 2}, {2, 3}};
    CHECK(validate(p, vars)->find("more than one") != std::string::npos);

    p.clusters = {{1, 2}};
    CHECK(validate(p, vars)->find("not covered") != std::string::npos);

    p.clusters = {{1, 2}, {3}};
    p.cap = 0;
    CHECK(validate(p, vars).has_value());
}

TEST_CASE("plans survive a json round trip") {
    std::vector<VarId> vars = {4, 9, 2, 7};
    auto p = random_partition(vars, 2, 1234);
    auto q = plan_from_json(plan_to_json(p));
    CHECK(q.clusters == p.clusters);
    CHECK(q.cap == p.cap);
    CHECK(q.strategy == p.strategy);
    CHECK(q.seed == p.seed);

    auto m = from_upper({1, 2, 3}, {{0.5, 0.9}, {0.1}});
    auto c = capped_agglomerative(m, 2, LinkObjective::most_similar);
    auto c2 = plan_from_json(plan_to_json(c));
    CHECK(c2.clusters == c.clusters);
    CHECK_FALSE(c2.seed.has_value());

    // Unsorted clusters are normalized on load.
    auto loaded = plan_from_json(
        R"({"cap": 2, "strategy": "similarity", "seed": null, "clusters": [[3, 1], [2]]})");
    CHECK(loaded.clusters == Clusters{{1, 3}, {2}});

    CHECK_THROWS_AS(plan_from_json("{"), DataError);
    CHECK_THROWS_AS(plan_from_json(R"({"cap": 2})"), DataError);
    CHECK_THROWS_AS(
        plan_from_json(R"({"cap": 2, "strategy": "best", "clusters": [[1]]})"),
        DataError);
}

TEST_CASE("strategy names round trip") {
    for (Strategy s : {Strategy::similarity, Strategy::dissimilarity, Strategy::random})
        CHECK(strategy_from_name(strategy_name(s)) == s);
    CHECK_THROWS_AS(strategy_from_name("greedy"), std::invalid_argument);
}

} // TEST_SUITE
