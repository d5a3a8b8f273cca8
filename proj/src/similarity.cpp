#include "vpmine/similarity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace vpmine {

namespace {

std::optional<double> parse_number(std::string_view s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

void detect_numeric(Column& col) {
    if (col.values.empty()) {
        return;
    }
    std::vector<double> keys;
    keys.reserve(col.values.size());
    for (const std::string& v : col.values) {
        auto num = parse_number(v);
        if (!num) {
            return;
        }
        keys.push_back(*num);
    }
    col.numeric = std::move(keys);
}

// Value codes follow first appearance in the source, so permuting the
// observations would relabel them and reorder every downstream float sum.
// Remapping codes to sorted value order makes the whole metric pipeline
// bitwise independent of observation order.
void canonicalize_codes(Column& col) {
    const std::size_t k = col.values.size();
    if (k < 2) {
        return;
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return col.values[a] < col.values[b]; });
    std::vector<std::int32_t> new_code(k);
    std::vector<std::string> values(k);
    std::vector<std::size_t> counts(k);
    for (std::size_t pos = 0; pos < k; ++pos) {
        new_code[order[pos]] = static_cast<std::int32_t>(pos);
        values[pos] = std::move(col.values[order[pos]]);
        counts[pos] = col.value_counts[order[pos]];
    }
    col.values = std::move(values);
    col.value_counts = std::move(counts);
    for (std::int32_t& c : col.codes) {
        if (c >= 0) {
            c = new_code[static_cast<std::size_t>(c)];
        }
    }
}

// Summation in sorted term order. The per-pair term values below are
// invariant under argument transposition, so metrics that sum them this way
// return identical bits no matter which column comes first.
double sorted_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) {
        s += t;
    }
    return s;
}

void check_same_length(const Column& a, const Column& b) {
    if (a.codes.size() != b.codes.size()) {
        throw std::invalid_argument("mismatched n_obs between variable views");
    }
}

// Rank of each value code under the variable's ordering (numeric when every
// value parses, lexicographic otherwise). Codes with equal keys share a rank.
std::vector<std::size_t> code_ranks(const Column& c) {
    std::vector<std::size_t> idx(c.values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
        return c.numeric ? (*c.numeric)[a] < (*c.numeric)[b] : c.values[a] < c.values[b];
    };
    auto equal = [&](std::size_t a, std::size_t b) {
        return c.numeric ? (*c.numeric)[a] == (*c.numeric)[b] : c.values[a] == c.values[b];
    };
    std::sort(idx.begin(), idx.end(), less);
    std::vector<std::size_t> rank(c.values.size(), 0);
    std::size_t r = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i > 0 && !equal(idx[i - 1], idx[i])) {
            ++r;
        }
        rank[idx[i]] = r;
    }
    return rank;
}

} // namespace

Metric metric_from_name(std::string_view name) {
    if (name == "sim_co") return Metric::sim_co;
    if (name == "sim_or") return Metric::sim_or;
    if (name == "jaccard") return Metric::jaccard;
    if (name == "pearson") return Metric::pearson;
    if (name == "kendall") return Metric::kendall;
    throw std::invalid_argument("unknown metric name: " + std::string(name));
}

std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::sim_co: return "sim_co";
        case Metric::sim_or: return "sim_or";
        case Metric::jaccard: return "jaccard";
        case Metric::pearson: return "pearson";
        case Metric::kendall: return "kendall";
    }
    return "?";
}

Column make_column(const Dataset& d, VarId id) {
    Column col;
    col.codes = d.dense_column(id);
    const std::size_t n_values = d.value_count(id);
    col.values.reserve(n_values);
    col.value_counts.reserve(n_values);
    for (ValueCode c = 0; c < n_values; ++c) {
        col.values.push_back(d.value_name(id, c));
        col.value_counts.push_back(d.tidset(id, c).size());
    }
    canonicalize_codes(col);
    detect_numeric(col);
    return col;
}

Column column_from_strings(const std::vector<std::string>& cells,
                           std::string_view missing_marker) {
    Column col;
    col.codes.resize(cells.size(), -1);
    std::unordered_map<std::string, ValueCode> dict;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == missing_marker) {
            continue;
        }
        auto [it, inserted] = dict.try_emplace(cells[i], static_cast<ValueCode>(col.values.size()));
        if (inserted) {
            col.values.push_back(cells[i]);
            col.value_counts.push_back(0);
        }
        col.codes[i] = static_cast<std::int32_t>(it->second);
        ++col.value_counts[it->second];
    }
    canonicalize_codes(col);
    detect_numeric(col);
    return col;
}

PairDistribution pair_distribution(const Column& y1, const Column& y2) {
    check_same_length(y1, y2);
    PairDistribution dist;
    dist.marginal1 = y1.value_counts;
    dist.marginal2 = y2.value_counts;

    std::unordered_map<std::uint64_t, std::size_t> counts;
    for (std::size_t i = 0; i < y1.codes.size(); ++i) {
        if (y1.codes[i] < 0 || y2.codes[i] < 0) {
            continue;
        }
        const std::uint64_t key = (static_cast<std::uint64_t>(y1.codes[i]) << 32) |
                                  static_cast<std::uint32_t>(y2.codes[i]);
        ++counts[key];
        ++dist.co_obs;
    }
    dist.pair_counts.reserve(counts.size());
    for (const auto& [key, cnt] : counts) {
        dist.pair_counts.push_back({{static_cast<ValueCode>(key >> 32),
                                     static_cast<ValueCode>(key & 0xffffffffu)},
                                    cnt});
    }
    std::sort(dist.pair_counts.begin(), dist.pair_counts.end());
    return dist;
}

double sim_co_from_distribution(const PairDistribution& dist, std::size_t n_obs,
                                double log_base) {
    if (dist.co_obs <= 1 || n_obs <= 1) {
        return 0.0;
    }
    const double n = static_cast<double>(n_obs);
    const double log_b = std::log(log_base);

    std::vector<double> confidence_terms;
    std::vector<double> entropy_terms;
    confidence_terms.reserve(dist.pair_counts.size());
    entropy_terms.reserve(dist.pair_counts.size());
    for (const auto& [pair, cnt] : dist.pair_counts) {
        const double larger_marginal = static_cast<double>(
            std::max(dist.marginal1[pair.first], dist.marginal2[pair.second]));
        confidence_terms.push_back(static_cast<double>(cnt) / larger_marginal);
        const double p = static_cast<double>(cnt) / n;
        entropy_terms.push_back(p * (std::log(p) / log_b));
    }
    const double f1 =
        sorted_sum(confidence_terms) / static_cast<double>(dist.pair_counts.size());
    const double f2 = 1.0 - sorted_sum(entropy_terms) / (std::log(1.0 / n) / log_b);
    return f1 * f2;
}

double sim_co(const Column& y1, const Column& y2) {
    return sim_co_from_distribution(pair_distribution(y1, y2), y1.n_obs());
}

double sim_or(const Column& y1, const Column& y2) {
    const PairDistribution dist = pair_distribution(y1, y2);
    if (dist.co_obs == 0) {
        return 0.0;
    }
    const bool num1 = y1.numeric.has_value();
    const bool num2 = y2.numeric.has_value();
    if (num1 != num2) {
        throw DataError("incomparable value types: one variable numeric, the other not");
    }
    std::size_t above = 0;
    std::size_t below = 0;
    for (const auto& [pair, cnt] : dist.pair_counts) {
        int cmp;
        if (num1) {
            const double a = (*y1.numeric)[pair.first];
            const double b = (*y2.numeric)[pair.second];
            cmp = a < b ? -1 : (a > b ? 1 : 0);
        } else {
            cmp = y1.values[pair.first].compare(y2.values[pair.second]);
        }
        if (cmp > 0) {
            above += cnt;
        } else if (cmp < 0) {
            below += cnt;
        }
    }
    return static_cast<double>(std::max(above, below)) / static_cast<double>(y1.n_obs());
}

double jaccard(const Column& y1, const Column& y2) {
    check_same_length(y1, y2);
    if (y1.values.size() > 1 || y2.values.size() > 1) {
        throw DataError("jaccard requires binary presence variables");
    }
    std::size_t both = 0;
    for (std::size_t i = 0; i < y1.codes.size(); ++i) {
        if (y1.codes[i] >= 0 && y2.codes[i] >= 0) {
            ++both;
        }
    }
    const std::size_t t1 = y1.values.empty() ? 0 : y1.value_counts[0];
    const std::size_t t2 = y2.values.empty() ? 0 : y2.value_counts[0];
    const std::size_t uni = t1 + t2 - both;
    return uni == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(uni);
}

namespace {

// Per-code moments of one side of a pair distribution, summed in code order
// over the co-observed marginal. Each side is computed from its own column
// alone, so the two orientations produce the same pair of sums.
struct SideMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

SideMoments side_moments(const std::vector<std::size_t>& co_marginal,
                         const std::vector<double>& values) {
    SideMoments m;
    for (std::size_t c = 0; c < co_marginal.size(); ++c) {
        if (co_marginal[c] == 0) {
            continue;
        }
        const double w = static_cast<double>(co_marginal[c]);
        const double v = values[c];
        m.sum += w * v;
        m.sum_sq += w * v * v;
    }
    return m;
}

} // namespace

double pearson(const Column& y1, const Column& y2) {
    const PairDistribution dist = pair_distribution(y1, y2);
    if (!y1.numeric || !y2.numeric) {
        throw DataError("pearson requires numeric values");
    }
    if (dist.co_obs < 2) {
        throw DataError("pearson requires at least 2 co-observed rows");
    }
    std::vector<std::size_t> co_marginal1(y1.values.size(), 0);
    std::vector<std::size_t> co_marginal2(y2.values.size(), 0);
    std::vector<double> cross_terms;
    cross_terms.reserve(dist.pair_counts.size());
    for (const auto& [pair, cnt] : dist.pair_counts) {
        co_marginal1[static_cast<std::size_t>(pair.first)] += cnt;
        co_marginal2[static_cast<std::size_t>(pair.second)] += cnt;
        cross_terms.push_back(static_cast<double>(cnt) *
                              ((*y1.numeric)[pair.first] * (*y2.numeric)[pair.second]));
    }
    const SideMoments mx = side_moments(co_marginal1, *y1.numeric);
    const SideMoments my = side_moments(co_marginal2, *y2.numeric);
    const double sxy = sorted_sum(cross_terms);
    const double n = static_cast<double>(dist.co_obs);
    const double vx = n * mx.sum_sq - mx.sum * mx.sum;
    const double vy = n * my.sum_sq - my.sum * my.sum;
    if (vx <= 0.0 || vy <= 0.0) {
        return 0.0;
    }
    return (n * sxy - mx.sum * my.sum) / std::sqrt(vx * vy);
}

// Every quantity accumulated below is an exact small integer held in a
// double, so the iteration order cannot move a bit and no canon is needed.
double kendall_tau(const Column& y1, const Column& y2) {
    const PairDistribution dist = pair_distribution(y1, y2);
    if (dist.co_obs < 2) {
        return 0.0;
    }
    const std::vector<std::size_t> rank1 = code_ranks(y1);
    const std::vector<std::size_t> rank2 = code_ranks(y2);

    // Co-observed tie groups, keyed by rank so equal-valued codes pool.
    std::unordered_map<std::size_t, std::size_t> group1;
    std::unordered_map<std::size_t, std::size_t> group2;
    for (const auto& [pair, cnt] : dist.pair_counts) {
        group1[rank1[pair.first]] += cnt;
        group2[rank2[pair.second]] += cnt;
    }
    auto tie_pairs = [](const std::unordered_map<std::size_t, std::size_t>& groups) {
        double t = 0.0;
        for (const auto& [_, c] : groups) {
            t += 0.5 * static_cast<double>(c) * static_cast<double>(c - 1);
        }
        return t;
    };

    double concordant = 0.0;
    double discordant = 0.0;
    for (std::size_t i = 0; i < dist.pair_counts.size(); ++i) {
        for (std::size_t j = i + 1; j < dist.pair_counts.size(); ++j) {
            const auto& [pi, ni] = dist.pair_counts[i];
            const auto& [pj, nj] = dist.pair_counts[j];
            const auto cmp = [](std::size_t a, std::size_t b) { return a < b ? -1 : (a > b ? 1 : 0); };
            const int c1 = cmp(rank1[pi.first], rank1[pj.first]);
            const int c2 = cmp(rank2[pi.second], rank2[pj.second]);
            if (c1 == 0 || c2 == 0) {
                continue;
            }
            const double w = static_cast<double>(ni) * static_cast<double>(nj);
            if (c1 == c2) {
                concordant += w;
            } else {
                discordant += w;
            }
        }
    }
    const double n = static_cast<double>(dist.co_obs);
    const double n0 = 0.5 * n * (n - 1.0);
    const double d1 = n0 - tie_pairs(group1);
    const double d2 = n0 - tie_pairs(group2);
    if (d1 <= 0.0 || d2 <= 0.0) {
        return 0.0; // all values tied on one side
    }
    return (concordant - discordant) / std::sqrt(d1 * d2);
}

double evaluate_metric(Metric m, const Column& y1, const Column& y2) {
    switch (m) {
        case Metric::sim_co: return sim_co(y1, y2);
        case Metric::sim_or: return sim_or(y1, y2);
        case Metric::jaccard: return jaccard(y1, y2);
        case Metric::pearson: return pearson(y1, y2);
        case Metric::kendall: return kendall_tau(y1, y2);
    }
    throw std::invalid_argument("unknown metric");
}

SimilarityMatrix build_matrix(const Dataset& d, Metric metric) {
    if (d.n_vars() < 2) {
        throw DataError("build_matrix requires at least 2 variables");
    }
    const std::vector<VarId>& ids = d.variables();
    std::vector<Column> cols;
    cols.reserve(ids.size());
    for (VarId id : ids) {
        cols.push_back(make_column(d, id));
    }

    SimilarityMatrix m;
    m.variable_ids = ids;
    m.metric = metric;
    m.scores.assign(ids.size() * ids.size(), 0.0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i; j < ids.size(); ++j) {
            double score;
            try {
                score = evaluate_metric(metric, cols[i], cols[j]);
            } catch (const DataError& e) {
                std::ostringstream msg;
                msg << "pair (" << d.variable_name(ids[i]) << ", " << d.variable_name(ids[j])
                    << "): " << e.what();
                throw DataError(msg.str());
            }
            m.at(i, j) = score;
            m.at(j, i) = score;
        }
    }
    return m;
}

void write_matrix_csv(const SimilarityMatrix& m, std::ostream& out) {
    char buf[64];
    out << "var";
    for (VarId id : m.variable_ids) {
        out << ',' << id;
    }
    out << '\n';
    for (std::size_t i = 0; i < m.order(); ++i) {
        out << m.variable_ids[i];
        for (std::size_t j = 0; j < m.order(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.15g", m.at(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
}

} // namespace vpmine
