#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vpmine/errors.hpp"

namespace vpmine {

using VarId = std::uint32_t;
using ObsId = std::uint32_t;
using ValueCode = std::uint32_t;

/// Sorted, duplicate-free list of observation ids supporting one value or pattern.
using Tidset = std::vector<ObsId>;

struct DatasetStats {
    std::size_t n_obs = 0;
    std::size_t n_vars = 0;
    double missing_fraction = 0.0; // 1 - non_missing_cells / (n_obs * n_vars)
};

/// Immutable categorical matrix in vertical (tidset) form.
///
/// Cells are stored per (variable, value) as sorted observation-id lists.
/// A missing cell belongs to no tidset. Values are interned per variable:
/// internally cells are small integer codes, the public API speaks strings.
/// Safe to share across threads once constructed.
class Dataset {
public:
    /// One transaction of integer item ids per nonempty line. Every distinct
    /// item becomes a binary variable: present on its lines, missing elsewhere.
    static Dataset parse_fimi(std::string_view text, std::string name = "");

    /// First row is the header. Cells equal to missing_marker (case-sensitive)
    /// become missing cells; everything else is a categorical value verbatim.
    /// No quoting: values must not contain commas.
    static Dataset parse_csv(std::string_view text, std::string_view missing_marker = "NaN",
                             std::string name = "");

    enum class Format { fimi, csv };
    static Dataset load_file(const std::filesystem::path& path, Format format,
                             std::string_view missing_marker = "NaN");

    std::size_t n_obs() const { return n_obs_; }
    std::size_t n_vars() const { return vars_.size(); }
    const std::string& name() const { return name_; }

    /// Variable ids in dataset order (FIMI: ascending item id, CSV: column order).
    const std::vector<VarId>& variables() const { return var_ids_; }
    bool has_variable(VarId id) const { return slot_.count(id) != 0; }
    const std::string& variable_name(VarId id) const { return var(id).name; }

    std::size_t value_count(VarId id) const { return var(id).values.size(); }
    const std::string& value_name(VarId id, ValueCode code) const { return var(id).values.at(code); }
    const Tidset& tidset(VarId id, ValueCode code) const { return var(id).tidsets.at(code); }
    /// Observations where the variable is non-missing.
    std::size_t non_missing_count(VarId id) const { return var(id).non_missing; }

    /// Per-observation value codes for one variable, -1 for missing cells.
    std::vector<std::int32_t> dense_column(VarId id) const;

    DatasetStats stats() const;

    /// Restriction to a subset of variables. Observation ids are never
    /// renumbered, so tidsets from different projections intersect correctly.
    Dataset project(const std::vector<VarId>& vars) const;

private:
    struct Variable {
        VarId id = 0;
        std::string name;
        std::vector<std::string> values;  // code -> value string
        std::vector<Tidset> tidsets;      // code -> supporting observations
        std::size_t non_missing = 0;
    };

    const Variable& var(VarId id) const;

    std::vector<Variable> vars_;
    std::vector<VarId> var_ids_;
    std::unordered_map<VarId, std::size_t> slot_;
    std::size_t n_obs_ = 0;
    std::string name_;
};

/// Smallest support fraction s such that, under a uniform-presence null with
/// p = (1 - missing_fraction)^pattern_len, the binomial upper tail
/// P(Bin(n_obs, p) >= ceil(s * n_obs)) drops below alpha.
/// Returns 1.0 when no support level is significant (saturated null).
double min_significant_support(std::size_t n_obs, double missing_fraction,
                               std::size_t pattern_len, double alpha);
double min_significant_support(const Dataset& d, std::size_t pattern_len, double alpha);

/// log P(Bin(n, p) >= k), summed exactly in log space.
double log_binomial_tail(std::size_t n, double p, std::size_t k);

} // namespace vpmine
