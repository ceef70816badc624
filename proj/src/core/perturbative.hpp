#pragma once

#include "core/table.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdc {

/// Parameters of a noise draw. Identical (spec, input) pairs always produce
/// identical outputs; all randomness flows from the seed (see rng.hpp for the
/// documented generator). Draws are consumed in row order over the target
/// column's non-missing cells.
struct NoiseSpec {
    double mean = 0.0;
    /// Variance sigma^2. When absent, add_noise defaults to
    /// (0.1 * sample std)^2 of the target column; the other ops require it.
    std::optional<double> variance;
    std::uint64_t seed = 0;
};

/// z_j = x_j + e_j with e_j ~ N(0, sigma^2); spec.mean must be 0.
Table add_noise(const Table& table, std::string_view attr, const NoiseSpec& spec);

/// y_j = x_j * e_j with e_j ~ N(1, sigma^2); spec.mean must be 1.
Table multiply_noise(const Table& table, std::string_view attr, const NoiseSpec& spec);

/// y_j = ln x_j, z_j = y_j + e_j with e_j ~ N(mean, sigma^2); the published
/// cells are the log-scale z_j. Every non-missing value must be positive.
Table log_multiply_noise(const Table& table, std::string_view attr, const NoiseSpec& spec);

/// Exchanges the cells of every attribute in `attrs` between the rows of each
/// pair. Pair indices must be valid and mutually disjoint.
Table swap_values(const Table& table,
                  const std::vector<std::string>& attrs,
                  const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

/// Picks floor(fraction * n / 2) disjoint row pairs uniformly at random
/// (seeded shuffle, consecutive elements paired) and swaps like swap_values.
Table random_swap(const Table& table,
                  const std::vector<std::string>& attrs,
                  double fraction,
                  std::uint64_t seed);

/// Absolute cutoff or percentile rank (0..100, nearest-rank resolution).
struct Threshold {
    double value = 0.0;
    bool percentile = false;
};

/// Cells below the low threshold become low_label, cells above the high one
/// become high_label. With at least one threshold present the column turns
/// categorical; absent labels default to "<LO" / ">HI" with the resolved
/// cutoff spelled out.
Table code_extremes(const Table& table,
                    std::string_view attr,
                    std::optional<Threshold> low,
                    std::optional<Threshold> high,
                    std::optional<std::string> low_label,
                    std::optional<std::string> high_label);

/// Each cell becomes base * round(cell / base), halves away from zero.
Table round_values(const Table& table, std::string_view attr, double base);

struct RecodeSpec {
    std::string attribute;
    std::vector<double> breakpoints; // strictly increasing, at least 2
    std::vector<std::string> labels; // one per interval
};

/// Replaces each value by the label of its interval [b_i, b_i+1); the last
/// interval is closed. Values outside [b_0, b_m] are errors. The column turns
/// categorical.
Table recode_ranges(const Table& table, const RecodeSpec& spec);

/// Replaces the selected cells by the column mean (continuous) or mode
/// (categorical, ties to the lexicographically least), computed over the
/// non-selected cells.
Table blank_and_impute(const Table& table, std::string_view attr,
                       const std::vector<std::size_t>& rows);

/// Replaces each selected cell by the mean of its quasi-equivalence-class
/// members' values (itself included); singleton classes fall back to the
/// column mean.
Table blur(const Table& table,
           std::string_view attr,
           const std::vector<std::string>& quasi,
           const std::vector<std::size_t>& rows);

/// Fully synthetic look-alike table: same schema and record count, continuous
/// columns drawn from N(mean, sample std^2), categorical columns from the
/// empirical frequencies. Rows colliding with a source record are redrawn a
/// bounded number of times, then nudged on their continuous cells; degenerate
/// (zero-variance) marginals may still reproduce source rows.
Table synthesize(const Table& table, std::uint64_t seed);

} // namespace sdc
