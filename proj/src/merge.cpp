#include "vpmine/merge.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "vpmine/errors.hpp"

namespace vpmine {

namespace {

struct ItemsHash {
    std::size_t operator()(const std::vector<Item>& items) const {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (const Item& it : items)
            h ^= (std::size_t(it.var) << 32 | it.value) + 0x9e3779b97f4a7c15ULL + (h << 6) +
                 (h >> 2);
        return h;
    }
};

std::size_t hash_tids(const Tidset& t) {
    std::size_t h = t.size();
    for (ObsId x : t) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

bool shares_variable(const std::vector<Item>& items, const std::unordered_set<VarId>& vars) {
    for (const Item& it : items)
        if (vars.count(it.var)) return true;
    return false;
}

} // namespace

std::optional<Pattern> join(const Pattern& p, const Pattern& q, std::size_t n_obs,
                            double min_sup) {
    std::vector<Item> items;
    items.reserve(p.items.size() + q.items.size());
    std::merge(p.items.begin(), p.items.end(), q.items.begin(), q.items.end(),
               std::back_inserter(items));
    for (std::size_t i = 1; i < items.size(); ++i)
        if (items[i].var == items[i - 1].var)
            throw DataError("join over overlapping variable sets (variable " +
                            std::to_string(items[i].var) + ")");
    Tidset tids = intersect_tids(p.tids, q.tids);
    if (!meets_support(tids.size(), n_obs, min_sup)) return std::nullopt;
    return Pattern{std::move(items), std::move(tids)};
}

PatternSet pattern_merge(const MergeInput& in) {
    const std::size_t parts = in.cluster_patterns.size();

    std::vector<std::unordered_set<VarId>> cluster_vars(parts);
    {
        std::unordered_map<VarId, std::size_t> owner;
        for (std::size_t i = 0; i < parts; ++i) {
            const PatternSet& ps = in.cluster_patterns[i];
            if (ps.min_sup != in.min_sup)
                throw DataError("cluster pattern set mined under a different threshold");
            for (const Pattern& p : ps.patterns)
                for (const Item& it : p.items) {
                    auto [pos, fresh] = owner.emplace(it.var, i);
                    if (!fresh && pos->second != i)
                        throw DataError("variable " + std::to_string(it.var) +
                                        " appears in more than one cluster pattern set");
                    cluster_vars[i].insert(it.var);
                }
        }
    }

    PatternSet final_set;
    final_set.min_sup = in.min_sup;
    final_set.source = "merged";
    std::unordered_map<std::size_t, std::vector<std::size_t>> final_by_tids;

    for (std::size_t i = 0; i < parts; ++i) {
        std::vector<Pattern> working = in.cluster_patterns[i].patterns;
        std::unordered_set<std::vector<Item>, ItemsHash> working_items;
        for (const Pattern& p : working) working_items.insert(p.items);

        for (std::size_t j = i + 1; j < parts; ++j) {
            const auto& others = in.cluster_patterns[j].patterns;
            for (std::size_t w = 0; w < working.size(); ++w) {
                // Patterns appended during this pass already hold cluster-j
                // variables; joining them again would throw, and the result
                // would be redundant anyway.
                if (shares_variable(working[w].items, cluster_vars[j])) continue;
                for (const Pattern& q : others) {
                    auto joined = join(working[w], q, in.n_obs, in.min_sup);
                    if (!joined) continue;
                    if (working_items.insert(joined->items).second)
                        working.push_back(std::move(*joined));
                }
            }
        }

        std::unordered_map<std::size_t, std::vector<std::size_t>> working_by_tids;
        for (std::size_t w = 0; w < working.size(); ++w)
            working_by_tids[hash_tids(working[w].tids)].push_back(w);

        for (std::size_t w = 0; w < working.size(); ++w) {
            const Pattern& p = working[w];
            const std::size_t key = hash_tids(p.tids);
            bool dominated = false;
            for (std::size_t o : working_by_tids[key]) {
                if (o != w && is_dominated(p, working[o])) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) {
                auto it = final_by_tids.find(key);
                if (it != final_by_tids.end()) {
                    for (std::size_t o : it->second) {
                        const Pattern& q = final_set.patterns[o];
                        if (is_dominated(p, q) || q.items == p.items) {
                            dominated = true;
                            break;
                        }
                    }
                }
            }
            if (!dominated) {
                final_by_tids[key].push_back(final_set.patterns.size());
                final_set.patterns.push_back(p);
            }
        }
    }
    return final_set;
}

MergeStats merge_stats(const std::vector<PatternSet>& before, const PatternSet& after) {
    MergeStats s;
    double obs = 0.0, vars = 0.0;
    for (const PatternSet& ps : before) {
        s.pre_merge_count += ps.patterns.size();
        for (const Pattern& p : ps.patterns) {
            obs += double(p.tids.size());
            vars += double(p.items.size());
        }
    }
    s.final_count = after.patterns.size();
    if (s.pre_merge_count == 0) {
        s.empty_premerge = true;
    } else {
        s.mean_obs = obs / double(s.pre_merge_count);
        s.mean_vars = vars / double(s.pre_merge_count);
    }
    return s;
}

std::string merge_summary_json(const MergeStats& s, double merge_wall_ms) {
    nlohmann::json j;
    j["pre_merge_count"] = s.pre_merge_count;
    j["final_count"] = s.final_count;
    j["mean_obs"] = s.mean_obs;
    j["mean_vars"] = s.mean_vars;
    j["merge_wall_ms"] = merge_wall_ms;
    return j.dump(2) + "\n";
}

} // namespace vpmine
