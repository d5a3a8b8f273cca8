#include "vpmine/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace vpmine {

namespace {

bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

// Calls fn(line, 1-based physical line number) for every line of text.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        if (pos == text.size()) {
            break;
        }
        std::size_t nl = text.find('\n', pos);
        std::string_view line = (nl == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        ++lineno;
        fn(line, lineno);
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(pos));
            break;
        }
        cells.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return cells;
}

} // namespace

Dataset Dataset::parse_fimi(std::string_view text, std::string name) {
    std::unordered_map<std::uint32_t, Tidset> items;
    std::size_t obs = 0;

    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (is_blank(line)) {
            return;
        }
        const ObsId oid = static_cast<ObsId>(obs);
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
                ++i;
            }
            if (i >= line.size()) {
                break;
            }
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
                ++i;
            }
            std::string_view tok = line.substr(start, i - start);
            std::uint32_t item = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), item);
            if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
                std::ostringstream msg;
                msg << "line " << lineno << ": non-integer token '" << tok << "'";
                throw DataError(msg.str());
            }
            Tidset& tids = items[item];
            if (tids.empty() || tids.back() != oid) {
                tids.push_back(oid);
            }
        }
        ++obs;
    });

    if (obs == 0) {
        throw DataError("no observations");
    }

    std::vector<std::uint32_t> ids;
    ids.reserve(items.size());
    for (const auto& [id, _] : items) {
        ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());

    Dataset d;
    d.n_obs_ = obs;
    d.name_ = std::move(name);
    d.vars_.reserve(ids.size());
    d.var_ids_.reserve(ids.size());
    for (std::uint32_t id : ids) {
        Variable v;
        v.id = id;
        v.name = std::to_string(id);
        v.values = {"present"};
        v.tidsets.push_back(std::move(items[id]));
        v.non_missing = v.tidsets[0].size();
        d.slot_[id] = d.vars_.size();
        d.var_ids_.push_back(id);
        d.vars_.push_back(std::move(v));
    }
    return d;
}

Dataset Dataset::parse_csv(std::string_view text, std::string_view missing_marker,
                           std::string name) {
    Dataset d;
    d.name_ = std::move(name);

    bool have_header = false;
    std::vector<std::unordered_map<std::string, ValueCode>> dicts;
    std::size_t obs = 0;

    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (!have_header) {
            if (is_blank(line)) {
                return; // leading blank lines before the header
            }
            auto cells = split_cells(line);
            for (std::size_t c = 0; c < cells.size(); ++c) {
                Variable v;
                v.id = static_cast<VarId>(c);
                v.name = std::string(cells[c]);
                for (const Variable& prev : d.vars_) {
                    if (prev.name == v.name) {
                        throw DataError("duplicate header name '" + v.name + "'");
                    }
                }
                d.slot_[v.id] = d.vars_.size();
                d.var_ids_.push_back(v.id);
                d.vars_.push_back(std::move(v));
            }
            dicts.resize(d.vars_.size());
            have_header = true;
            return;
        }
        if (is_blank(line)) {
            return;
        }
        auto cells = split_cells(line);
        if (cells.size() != d.vars_.size()) {
            std::ostringstream msg;
            msg << "row " << lineno << ": expected " << d.vars_.size() << " cells, got "
                << cells.size();
            throw DataError(msg.str());
        }
        const ObsId oid = static_cast<ObsId>(obs);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (cells[c] == missing_marker) {
                continue;
            }
            Variable& v = d.vars_[c];
            auto [it, inserted] = dicts[c].try_emplace(std::string(cells[c]),
                                                       static_cast<ValueCode>(v.values.size()));
            if (inserted) {
                v.values.emplace_back(cells[c]);
                v.tidsets.emplace_back();
            }
            v.tidsets[it->second].push_back(oid);
            ++v.non_missing;
        }
        ++obs;
    });

    if (!have_header) {
        throw DataError("empty input: missing header row");
    }
    if (obs == 0) {
        throw DataError("no observations");
    }
    d.n_obs_ = obs;
    return d;
}

Dataset Dataset::load_file(const std::filesystem::path& path, Format format,
                           std::string_view missing_marker) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = std::move(buf).str();
    std::string name = path.stem().string();
    return format == Format::fimi ? parse_fimi(text, std::move(name))
                                  : parse_csv(text, missing_marker, std::move(name));
}

const Dataset::Variable& Dataset::var(VarId id) const {
    auto it = slot_.find(id);
    if (it == slot_.end()) {
        throw DataError("unknown variable id " + std::to_string(id));
    }
    return vars_[it->second];
}

std::vector<std::int32_t> Dataset::dense_column(VarId id) const {
    const Variable& v = var(id);
    std::vector<std::int32_t> col(n_obs_, -1);
    for (std::size_t code = 0; code < v.tidsets.size(); ++code) {
        for (ObsId o : v.tidsets[code]) {
            col[o] = static_cast<std::int32_t>(code);
        }
    }
    return col;
}

DatasetStats Dataset::stats() const {
    DatasetStats s;
    s.n_obs = n_obs_;
    s.n_vars = vars_.size();
    std::size_t filled = 0;
    for (const Variable& v : vars_) {
        filled += v.non_missing;
    }
    const double cells = static_cast<double>(n_obs_) * static_cast<double>(vars_.size());
    s.missing_fraction = cells > 0 ? 1.0 - static_cast<double>(filled) / cells : 0.0;
    return s;
}

Dataset Dataset::project(const std::vector<VarId>& vars) const {
    std::vector<bool> keep(vars_.size(), false);
    for (VarId id : vars) {
        auto it = slot_.find(id);
        if (it == slot_.end()) {
            throw DataError("unknown variable id " + std::to_string(id));
        }
        keep[it->second] = true;
    }
    Dataset d;
    d.n_obs_ = n_obs_;
    d.name_ = name_;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (!keep[i]) {
            continue;
        }
        d.slot_[vars_[i].id] = d.vars_.size();
        d.var_ids_.push_back(vars_[i].id);
        d.vars_.push_back(vars_[i]);
    }
    return d;
}

double log_binomial_tail(std::size_t n, double p, std::size_t k) {
    if (k == 0) {
        return 0.0;
    }
    if (k > n) {
        return -std::numeric_limits<double>::infinity();
    }
    if (p <= 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    if (p >= 1.0) {
        return 0.0;
    }
    const double nd = static_cast<double>(n);
    const double lp = std::log(p);
    const double l1p = std::log1p(-p);
    auto log_pmf = [&](std::size_t j) {
        const double jd = static_cast<double>(j);
        return std::lgamma(nd + 1.0) - std::lgamma(jd + 1.0) - std::lgamma(nd - jd + 1.0) +
               jd * lp + (nd - jd) * l1p;
    };

    const auto mode = static_cast<std::size_t>(
        std::min(nd, std::max(0.0, std::floor((nd + 1.0) * p))));
    const std::size_t k0 = std::min(std::max(k, mode), n);
    const double ref = log_pmf(k0);

    // Terms decrease monotonically away from the mode in both directions, so
    // the remaining mass beyond position j is bounded by count * current term.
    double sum = 1.0;
    double cur = 0.0;
    for (std::size_t j = k0; j < n; ++j) {
        cur += std::log(nd - static_cast<double>(j)) - std::log(static_cast<double>(j) + 1.0) +
               lp - l1p;
        const double term = std::exp(cur);
        sum += term;
        if (term * static_cast<double>(n - j - 1) < sum * 1e-17) {
            break;
        }
    }
    cur = 0.0;
    for (std::size_t j = k0; j > k; --j) {
        cur += std::log(static_cast<double>(j)) - std::log(nd - static_cast<double>(j) + 1.0) -
               lp + l1p;
        const double term = std::exp(cur);
        sum += term;
        if (term * static_cast<double>(j - k) < sum * 1e-17) {
            break;
        }
    }
    return ref + std::log(sum);
}

double min_significant_support(std::size_t n_obs, double missing_fraction,
                               std::size_t pattern_len, double alpha) {
    if (n_obs == 0) {
        throw DataError("degenerate dataset: no observations");
    }
    if (pattern_len < 1) {
        throw std::invalid_argument("pattern_len must be >= 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must be in (0, 1)");
    }
    if (!(missing_fraction >= 0.0 && missing_fraction <= 1.0)) {
        throw std::invalid_argument("missing_fraction must be in [0, 1]");
    }
    const double p = std::pow(1.0 - missing_fraction, static_cast<double>(pattern_len));
    const double nd = static_cast<double>(n_obs);
    if (p >= 1.0) {
        return 1.0; // tail is 1 at every K <= N: nothing is ever significant
    }
    const double log_alpha = std::log(alpha);
    if (!(log_binomial_tail(n_obs, p, n_obs) < log_alpha)) {
        return 1.0;
    }
    std::size_t lo = 1;
    std::size_t hi = n_obs;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (log_binomial_tail(n_obs, p, mid) < log_alpha) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return static_cast<double>(lo) / nd;
}

double min_significant_support(const Dataset& d, std::size_t pattern_len, double alpha) {
    return min_significant_support(d.n_obs(), d.stats().missing_fraction, pattern_len, alpha);
}

} // namespace vpmine
