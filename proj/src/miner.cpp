#include "vpmine/miner.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "vpmine/errors.hpp"

namespace vpmine {

bool meets_support(std::size_t count, std::size_t n_obs, double min_sup) {
    return static_cast<double>(count) >= min_sup * static_cast<double>(n_obs);
}

Tidset intersect_tids(const Tidset& a, const Tidset& b) {
    Tidset out;
    out.reserve(std::min(a.size(), b.size()));
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

namespace {

struct ItemsHash {
    std::size_t operator()(const std::vector<Item>& items) const {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (const Item& it : items) {
            h ^= (std::size_t(it.var) << 32 | it.value) + 0x9e3779b97f4a7c15ULL + (h << 6) +
                 (h >> 2);
        }
        return h;
    }
};

std::size_t hash_tids(const Tidset& t) {
    std::size_t h = t.size();
    for (ObsId x : t) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

} // namespace

PatternSet apriori(const Dataset& d, const std::vector<VarId>& vars, double min_sup,
                   std::string source) {
    if (!(min_sup > 0.0 && min_sup <= 1.0))
        throw std::invalid_argument("min_sup must be in (0, 1]");
    for (VarId v : vars)
        if (!d.has_variable(v))
            throw DataError("unknown variable id " + std::to_string(v));

    std::vector<VarId> order(vars);
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());

    const std::size_t n = d.n_obs();
    PatternSet out;
    out.min_sup = min_sup;
    out.source = std::move(source);

    std::vector<Pattern> level;
    for (VarId v : order) {
        for (ValueCode c = 0; c < d.value_count(v); ++c) {
            const Tidset& tids = d.tidset(v, c);
            if (meets_support(tids.size(), n, min_sup))
                level.push_back(Pattern{{Item{v, c}}, tids});
        }
    }

    while (!level.empty()) {
        out.patterns.insert(out.patterns.end(), level.begin(), level.end());

        std::unordered_set<std::vector<Item>, ItemsHash> frequent;
        frequent.reserve(level.size());
        for (const Pattern& p : level) frequent.insert(p.items);

        // Patterns in a level are sorted by items, so candidates from a
        // shared (k-1)-prefix come out sorted as well.
        std::vector<Pattern> next;
        const std::size_t k = level.front().items.size();
        std::size_t block = 0;
        while (block < level.size()) {
            std::size_t end = block + 1;
            while (end < level.size() &&
                   std::equal(level[block].items.begin(), level[block].items.end() - 1,
                              level[end].items.begin(), level[end].items.end() - 1))
                ++end;
            for (std::size_t i = block; i < end; ++i) {
                for (std::size_t j = i + 1; j < end; ++j) {
                    if (level[i].items.back().var == level[j].items.back().var) continue;
                    std::vector<Item> cand(level[i].items);
                    cand.push_back(level[j].items.back());

                    bool pruned = false;
                    if (k >= 2) {
                        std::vector<Item> sub;
                        sub.reserve(k);
                        for (std::size_t drop = 0; drop + 2 < cand.size() && !pruned; ++drop) {
                            sub.clear();
                            for (std::size_t q = 0; q < cand.size(); ++q)
                                if (q != drop) sub.push_back(cand[q]);
                            pruned = !frequent.count(sub);
                        }
                    }
                    if (pruned) continue;

                    Tidset tids = intersect_tids(level[i].tids, level[j].tids);
                    if (meets_support(tids.size(), n, min_sup))
                        next.push_back(Pattern{std::move(cand), std::move(tids)});
                }
            }
            block = end;
        }
        level = std::move(next);
    }
    return out;
}

bool is_dominated(const Pattern& p, const Pattern& q) {
    if (q.items.size() <= p.items.size()) return false;
    if (q.tids != p.tids) return false;
    return std::includes(q.items.begin(), q.items.end(), p.items.begin(), p.items.end());
}

PatternSet closed_filter(const PatternSet& ps) {
    PatternSet out;
    out.min_sup = ps.min_sup;
    out.source = ps.source;

    std::vector<std::size_t> kept;
    std::unordered_set<std::vector<Item>, ItemsHash> seen;
    std::unordered_map<std::size_t, std::vector<std::size_t>> by_tids;
    for (std::size_t i = 0; i < ps.patterns.size(); ++i) {
        if (!seen.insert(ps.patterns[i].items).second) continue;
        kept.push_back(i);
        by_tids[hash_tids(ps.patterns[i].tids)].push_back(i);
    }

    for (std::size_t i : kept) {
        const Pattern& p = ps.patterns[i];
        bool dominated = false;
        for (std::size_t j : by_tids[hash_tids(p.tids)]) {
            if (j == i) continue;
            if (is_dominated(p, ps.patterns[j])) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.patterns.push_back(p);
    }
    return out;
}

PatternSet mine_closed_oracle(const Dataset& d, const std::vector<VarId>& vars, double min_sup) {
    return closed_filter(apriori(d, vars, min_sup));
}

std::string pattern_to_string(const Pattern& p, const Dataset& d) {
    std::string s;
    for (std::size_t i = 0; i < p.items.size(); ++i) {
        if (i) s += ',';
        s += d.variable_name(p.items[i].var);
        s += '=';
        s += d.value_name(p.items[i].var, p.items[i].value);
    }
    return s;
}

void write_patterns(const PatternSet& ps, const Dataset& d, std::ostream& out) {
    std::vector<const Pattern*> order;
    order.reserve(ps.patterns.size());
    for (const Pattern& p : ps.patterns) order.push_back(&p);
    std::sort(order.begin(), order.end(),
              [](const Pattern* a, const Pattern* b) { return a->items < b->items; });
    for (const Pattern* p : order) {
        out << pattern_to_string(*p, d) << '\t';
        for (std::size_t i = 0; i < p->tids.size(); ++i) {
            if (i) out << ' ';
            out << p->tids[i];
        }
        out << '\n';
    }
}

} // namespace vpmine
