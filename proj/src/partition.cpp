#include "vpmine/partition.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "vpmine/errors.hpp"

namespace vpmine {

Strategy strategy_from_name(std::string_view name) {
    if (name == "similarity") return Strategy::similarity;
    if (name == "dissimilarity") return Strategy::dissimilarity;
    if (name == "random") return Strategy::random;
    throw std::invalid_argument("unknown strategy: " + std::string(name));
}

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::similarity: return "similarity";
        case Strategy::dissimilarity: return "dissimilarity";
        case Strategy::random: return "random";
    }
    throw std::invalid_argument("unknown strategy value");
}

PartitionPlan capped_agglomerative(const SimilarityMatrix& m, std::size_t cap,
                                   LinkObjective objective) {
    if (cap < 1) throw std::invalid_argument("cap must be at least 1");
    const std::size_t n = m.order();
    if (n == 0) throw std::invalid_argument("empty similarity matrix");

    std::vector<std::vector<VarId>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {m.variable_ids[i]};
    std::vector<bool> alive(n, true);

    // link[i][j] accumulates the sum of pairwise scores between clusters i
    // and j, so average linkage is link / (|i| * |j|) at any point.
    std::vector<std::vector<double>> link(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) link[i][j] = link[j][i] = m.at(i, j);

    const bool want_max = objective == LinkObjective::most_similar;
    while (true) {
        std::size_t best_a = n, best_b = n;
        double best_score = 0.0;
        VarId best_lo = 0, best_hi = 0;
        bool found = false;
        for (std::size_t a = 0; a < n; ++a) {
            if (!alive[a]) continue;
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!alive[b]) continue;
                if (clusters[a].size() + clusters[b].size() > cap) continue;
                const double score =
                    link[a][b] / (double(clusters[a].size()) * double(clusters[b].size()));
                const VarId lo = std::min(clusters[a].front(), clusters[b].front());
                const VarId hi = std::max(clusters[a].front(), clusters[b].front());
                bool better;
                if (!found) {
                    better = true;
                } else if (score != best_score) {
                    better = want_max ? score > best_score : score < best_score;
                } else {
                    better = lo < best_lo || (lo == best_lo && hi < best_hi);
                }
                if (better) {
                    best_a = a;
                    best_b = b;
                    best_score = score;
                    best_lo = lo;
                    best_hi = hi;
                    found = true;
                }
            }
        }
        if (!found) break;

        auto& dst = clusters[best_a];
        auto& src = clusters[best_b];
        dst.insert(dst.end(), src.begin(), src.end());
        std::sort(dst.begin(), dst.end());
        src.clear();
        alive[best_b] = false;
        for (std::size_t c = 0; c < n; ++c) {
            if (!alive[c] || c == best_a) continue;
            link[best_a][c] = link[c][best_a] = link[best_a][c] + link[best_b][c];
        }
    }

    PartitionPlan plan;
    plan.cap = cap;
    plan.strategy =
        want_max ? Strategy::similarity : Strategy::dissimilarity;
    for (std::size_t i = 0; i < n; ++i)
        if (alive[i]) plan.clusters.push_back(std::move(clusters[i]));
    std::sort(plan.clusters.begin(), plan.clusters.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return plan;
}

PartitionPlan random_partition(std::vector<VarId> vars, std::size_t cap, std::uint64_t seed) {
    if (cap < 1) throw std::invalid_argument("cap must be at least 1");
    if (vars.empty()) throw std::invalid_argument("no variables to partition");

    // Fisher-Yates with an explicit modulo draw; std::shuffle is not
    // guaranteed to produce the same permutation across standard libraries.
    std::mt19937_64 gen(seed);
    for (std::size_t i = vars.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(gen() % (i + 1));
        std::swap(vars[i], vars[j]);
    }

    PartitionPlan plan;
    plan.cap = cap;
    plan.strategy = Strategy::random;
    plan.seed = seed;
    for (std::size_t start = 0; start < vars.size(); start += cap) {
        const std::size_t stop = std::min(start + cap, vars.size());
        std::vector<VarId> cluster(vars.begin() + start, vars.begin() + stop);
        std::sort(cluster.begin(), cluster.end());
        plan.clusters.push_back(std::move(cluster));
    }
    return plan;
}

std::optional<std::string> validate(const PartitionPlan& p, const std::vector<VarId>& vars) {
    if (p.cap < 1) return "cap must be at least 1";
    const std::unordered_set<VarId> universe(vars.begin(), vars.end());
    std::unordered_set<VarId> seen;
    for (std::size_t c = 0; c < p.clusters.size(); ++c) {
        const auto& cluster = p.clusters[c];
        if (cluster.empty()) return "cluster " + std::to_string(c) + " is empty";
        if (cluster.size() > p.cap)
            return "cluster " + std::to_string(c) + " has " + std::to_string(cluster.size()) +
                   " variables, cap is " + std::to_string(p.cap);
        for (VarId v : cluster) {
            if (!universe.count(v))
                return "cluster " + std::to_string(c) + " references unknown variable " +
                       std::to_string(v);
            if (!seen.insert(v).second)
                return "variable " + std::to_string(v) + " appears in more than one cluster";
        }
    }
    for (VarId v : vars)
        if (!seen.count(v)) return "variable " + std::to_string(v) + " is not covered";
    return std::nullopt;
}

std::string plan_to_json(const PartitionPlan& p) {
    nlohmann::json j;
    j["cap"] = p.cap;
    j["strategy"] = std::string(strategy_name(p.strategy));
    if (p.seed)
        j["seed"] = *p.seed;
    else
        j["seed"] = nullptr;
    j["clusters"] = p.clusters;
    return j.dump(2) + "\n";
}

PartitionPlan plan_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid plan json: ") + e.what());
    }
    PartitionPlan p;
    try {
        p.cap = j.at("cap").get<std::size_t>();
        p.strategy = strategy_from_name(j.at("strategy").get<std::string>());
        if (j.contains("seed") && !j.at("seed").is_null())
            p.seed = j.at("seed").get<std::uint64_t>();
        p.clusters = j.at("clusters").get<std::vector<std::vector<VarId>>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid plan json: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("invalid plan json: ") + e.what());
    }
    for (auto& cluster : p.clusters) std::sort(cluster.begin(), cluster.end());
    return p;
}

} // namespace vpmine
