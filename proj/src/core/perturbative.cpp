#include "core/perturbative.hpp"

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace sdc {

namespace {

std::size_t continuous_column(const Table& table, std::string_view attr) {
    std::size_t col = table.attribute_index(attr);
    if (table.schema()[col].data_class != DataClass::continuous) {
        throw_usage("attribute '" + std::string(attr) + "' is categorical; a continuous one is required");
    }
    return col;
}

std::optional<double> column_sample_std(const Table& table, std::size_t col) {
    std::vector<double> values;
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        if (auto v = table.numeric(r, col)) {
            values.push_back(*v);
        }
    }
    if (values.size() < 2) {
        return std::nullopt;
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double require_variance(const NoiseSpec& spec, const char* op) {
    if (!spec.variance) {
        throw_usage(std::string(op) + " requires a variance");
    }
    if (*spec.variance < 0.0) {
        throw_usage("variance must be non-negative");
    }
    return *spec.variance;
}

Table map_continuous(const Table& table, std::size_t col,
                     const std::function<double(std::size_t row, double value)>& f) {
    std::vector<Row> records = table.records();
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (!records[r][col]) {
            continue;
        }
        double x = *table.numeric(r, col);
        double z = f(r, x);
        if (z != x) { // an unchanged value keeps its original spelling
            records[r][col] = format_number(z);
        }
    }
    return Table(table.schema(), std::move(records));
}

} // namespace

Table add_noise(const Table& table, std::string_view attr, const NoiseSpec& spec) {
    std::size_t col = continuous_column(table, attr);
    if (spec.mean != 0.0) {
        throw_usage("add_noise uses zero-mean noise; got mean " + format_number(spec.mean));
    }
    double sigma;
    if (spec.variance) {
        if (*spec.variance < 0.0) {
            throw_usage("variance must be non-negative");
        }
        sigma = std::sqrt(*spec.variance);
    } else {
        // Default: a small perturbation, one tenth of the column's spread.
        sigma = 0.1 * column_sample_std(table, col).value_or(0.0);
    }
    Rng rng(spec.seed);
    return map_continuous(table, col, [&](std::size_t, double x) {
        return x + rng.normal(0.0, sigma);
    });
}

Table multiply_noise(const Table& table, std::string_view attr, const NoiseSpec& spec) {
    std::size_t col = continuous_column(table, attr);
    if (spec.mean != 1.0) {
        throw_usage("multiply_noise uses unit-mean noise; got mean " + format_number(spec.mean));
    }
    double sigma = std::sqrt(require_variance(spec, "multiply_noise"));
    Rng rng(spec.seed);
    return map_continuous(table, col, [&](std::size_t, double x) {
        return x * rng.normal(1.0, sigma);
    });
}

Table log_multiply_noise(const Table& table, std::string_view attr, const NoiseSpec& spec) {
    std::size_t col = continuous_column(table, attr);
    double sigma = std::sqrt(require_variance(spec, "log_multiply_noise"));
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        auto v = table.numeric(r, col);
        if (v && *v <= 0.0) {
            throw_runtime("row " + std::to_string(r + 1) + ", column '" + std::string(attr) +
                          "': value " + format_number(*v) + " is not positive, cannot take its log");
        }
    }
    Rng rng(spec.seed);
    return map_continuous(table, col, [&](std::size_t, double x) {
        return std::log(x) + rng.normal(spec.mean, sigma);
    });
}

Table swap_values(const Table& table,
                  const std::vector<std::string>& attrs,
                  const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    std::vector<std::size_t> cols;
    for (const auto& name : attrs) {
        cols.push_back(table.attribute_index(name));
    }
    std::set<std::size_t> used;
    for (const auto& [a, b] : pairs) {
        if (a >= table.record_count() || b >= table.record_count()) {
            throw_usage("swap pair (" + std::to_string(a) + ", " + std::to_string(b) +
                        ") out of range");
        }
        if (!used.insert(a).second || !used.insert(b).second) {
            throw_usage("swap pairs overlap on record " + std::to_string(used.count(a) ? b : a));
        }
    }
    std::vector<Row> records = table.records();
    for (const auto& [a, b] : pairs) {
        for (std::size_t c : cols) {
            std::swap(records[a][c], records[b][c]);
        }
    }
    return Table(table.schema(), std::move(records));
}

Table random_swap(const Table& table,
                  const std::vector<std::string>& attrs,
                  double fraction,
                  std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw_usage("fraction must lie in [0, 1]");
    }
    for (const auto& name : attrs) {
        table.attribute_index(name);
    }
    std::size_t n = table.record_count();
    auto pair_count = static_cast<std::size_t>(fraction * static_cast<double>(n) / 2.0);
    if (pair_count == 0) {
        return table;
    }
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) {
        indices[i] = i;
    }
    Rng rng(seed);
    rng.shuffle(indices);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(pair_count);
    for (std::size_t i = 0; i < pair_count; ++i) {
        pairs.emplace_back(indices[2 * i], indices[2 * i + 1]);
    }
    return swap_values(table, attrs, pairs);
}

namespace {

double resolve_threshold(const Table& table, std::size_t col, const Threshold& t) {
    if (!t.percentile) {
        return t.value;
    }
    if (!(t.value >= 0.0 && t.value <= 100.0)) {
        throw_usage("percentile must lie in [0, 100]");
    }
    std::vector<double> values;
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        if (auto v = table.numeric(r, col)) {
            values.push_back(*v);
        }
    }
    if (values.empty()) {
        throw_runtime("cannot resolve a percentile on an all-missing column");
    }
    std::sort(values.begin(), values.end());
    // Nearest-rank: the ceil(p/100 * n)-th smallest value, 1-based.
    auto rank = static_cast<std::size_t>(
        std::ceil(t.value / 100.0 * static_cast<double>(values.size())));
    if (rank == 0) {
        rank = 1;
    }
    return values[rank - 1];
}

} // namespace

Table code_extremes(const Table& table,
                    std::string_view attr,
                    std::optional<Threshold> low,
                    std::optional<Threshold> high,
                    std::optional<std::string> low_label,
                    std::optional<std::string> high_label) {
    std::size_t col = continuous_column(table, attr);
    if (!low && !high) {
        return table; // nothing to code, class unchanged
    }
    std::optional<double> lo, hi;
    if (low) {
        lo = resolve_threshold(table, col, *low);
    }
    if (high) {
        hi = resolve_threshold(table, col, *high);
    }
    if (lo && hi && *lo > *hi) {
        throw_runtime("low threshold " + format_number(*lo) + " exceeds high threshold " +
                      format_number(*hi));
    }
    std::string lo_text = low_label ? *low_label : (lo ? "<" + format_number(*lo) : "");
    std::string hi_text = high_label ? *high_label : (hi ? ">" + format_number(*hi) : "");

    std::vector<Row> records = table.records();
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (!records[r][col]) {
            continue;
        }
        double x = *table.numeric(r, col);
        if (lo && x < *lo) {
            records[r][col] = lo_text;
        } else if (hi && x > *hi) {
            records[r][col] = hi_text;
        }
    }
    Schema schema = table.schema();
    schema[col].data_class = DataClass::categorical;
    schema[col].bounds.reset();
    schema[col].hierarchy.reset();
    return Table(std::move(schema), std::move(records));
}

Table round_values(const Table& table, std::string_view attr, double base) {
    std::size_t col = continuous_column(table, attr);
    if (!(base > 0.0)) {
        throw_usage("rounding base must be positive");
    }
    return map_continuous(table, col, [&](std::size_t, double x) {
        return base * std::round(x / base);
    });
}

Table recode_ranges(const Table& table, const RecodeSpec& spec) {
    std::size_t col = continuous_column(table, spec.attribute);
    if (spec.breakpoints.size() < 2) {
        throw_usage("recode needs at least two breakpoints");
    }
    for (std::size_t i = 1; i < spec.breakpoints.size(); ++i) {
        if (!(spec.breakpoints[i - 1] < spec.breakpoints[i])) {
            throw_usage("breakpoints must be strictly increasing");
        }
    }
    if (spec.labels.size() != spec.breakpoints.size() - 1) {
        throw_usage("expected " + std::to_string(spec.breakpoints.size() - 1) + " labels, got " +
                    std::to_string(spec.labels.size()));
    }

    std::vector<Row> records = table.records();
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (!records[r][col]) {
            continue;
        }
        double x = *table.numeric(r, col);
        if (x < spec.breakpoints.front() || x > spec.breakpoints.back()) {
            throw_runtime("row " + std::to_string(r + 1) + ", column '" + spec.attribute +
                          "': value " + format_number(x) + " outside [" +
                          format_number(spec.breakpoints.front()) + ", " +
                          format_number(spec.breakpoints.back()) + "]");
        }
        // Half-open intervals, last one closed.
        std::size_t interval = spec.labels.size() - 1;
        for (std::size_t i = 0; i + 1 < spec.breakpoints.size(); ++i) {
            if (x < spec.breakpoints[i + 1]) {
                interval = i;
                break;
            }
        }
        records[r][col] = spec.labels[interval];
    }
    Schema schema = table.schema();
    schema[col].data_class = DataClass::categorical;
    schema[col].bounds.reset();
    schema[col].hierarchy.reset();
    return Table(std::move(schema), std::move(records));
}

Table blank_and_impute(const Table& table, std::string_view attr,
                       const std::vector<std::size_t>& rows) {
    std::size_t col = table.attribute_index(attr);
    const AttributeMeta& meta = table.schema()[col];
    std::set<std::size_t> selected;
    for (std::size_t r : rows) {
        if (r >= table.record_count()) {
            throw_usage("record index " + std::to_string(r) + " out of range");
        }
        selected.insert(r);
    }
    if (selected.empty()) {
        return table;
    }

    Cell replacement;
    if (meta.data_class == DataClass::continuous) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t r = 0; r < table.record_count(); ++r) {
            if (selected.count(r)) {
                continue;
            }
            if (auto v = table.numeric(r, col)) {
                sum += *v;
                ++n;
            }
        }
        if (n == 0) {
            throw_runtime("no donor values left in '" + meta.name + "' to impute from");
        }
        replacement = format_number(sum / static_cast<double>(n));
    } else {
        std::map<std::string, std::size_t> freq;
        for (std::size_t r = 0; r < table.record_count(); ++r) {
            if (!selected.count(r) && table.cell(r, col)) {
                ++freq[*table.cell(r, col)];
            }
        }
        if (freq.empty()) {
            throw_runtime("no donor values left in '" + meta.name + "' to impute from");
        }
        // Mode; ties resolve to the lexicographically least (map order).
        std::size_t best = 0;
        for (const auto& [value, n] : freq) {
            if (n > best) {
                best = n;
                replacement = value;
            }
        }
    }

    std::vector<Row> records = table.records();
    for (std::size_t r : selected) {
        if (records[r][col] && records[r][col] != replacement) {
            if (meta.data_class == DataClass::continuous &&
                *table.numeric(r, col) == *parse_number(*replacement)) {
                continue; // numerically unchanged, keep the original spelling
            }
            records[r][col] = replacement;
        }
    }
    return Table(table.schema(), std::move(records));
}

Table blur(const Table& table,
           std::string_view attr,
           const std::vector<std::string>& quasi,
           const std::vector<std::size_t>& rows) {
    std::size_t col = continuous_column(table, attr);
    std::vector<std::size_t> quasi_cols;
    for (const auto& name : quasi) {
        quasi_cols.push_back(table.attribute_index(name));
    }
    std::set<std::size_t> selected;
    for (std::size_t r : rows) {
        if (r >= table.record_count()) {
            throw_usage("record index " + std::to_string(r) + " out of range");
        }
        selected.insert(r);
    }

    std::map<std::vector<Cell>, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        std::vector<Cell> key;
        for (std::size_t c : quasi_cols) {
            key.push_back(table.cell(r, c));
        }
        groups[std::move(key)].push_back(r);
    }

    double global_sum = 0.0;
    std::size_t global_n = 0;
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        if (auto v = table.numeric(r, col)) {
            global_sum += *v;
            ++global_n;
        }
    }

    std::vector<Row> records = table.records();
    for (const auto& [key, members] : groups) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t r : members) {
            if (auto v = table.numeric(r, col)) {
                sum += *v;
                ++n;
            }
        }
        for (std::size_t r : members) {
            if (!selected.count(r) || !records[r][col]) {
                continue;
            }
            double mean;
            if (members.size() == 1) {
                if (global_n == 0) {
                    throw_runtime("no values available for the global-mean fallback");
                }
                mean = global_sum / static_cast<double>(global_n);
            } else {
                mean = sum / static_cast<double>(n); // n >= 1: this cell is a member
            }
            if (mean != *table.numeric(r, col)) {
                records[r][col] = format_number(mean);
            }
        }
    }
    return Table(table.schema(), std::move(records));
}

Table synthesize(const Table& table, std::uint64_t seed) {
    struct ColumnModel {
        DataClass cls = DataClass::categorical;
        bool all_missing = false;
        double mean = 0.0;
        double std = 0.0;
        // Categorical: cumulative counts over lexicographically sorted values.
        std::vector<std::pair<std::string, std::size_t>> freq;
        std::size_t total = 0;
    };

    std::vector<ColumnModel> models;
    for (std::size_t c = 0; c < table.attribute_count(); ++c) {
        ColumnModel m;
        m.cls = table.schema()[c].data_class;
        if (m.cls == DataClass::continuous) {
            std::vector<double> values;
            for (std::size_t r = 0; r < table.record_count(); ++r) {
                if (auto v = table.numeric(r, c)) {
                    values.push_back(*v);
                }
            }
            if (values.empty()) {
                m.all_missing = true;
            } else {
                for (double v : values) {
                    m.mean += v;
                }
                m.mean /= static_cast<double>(values.size());
                if (values.size() >= 2) {
                    double ss = 0.0;
                    for (double v : values) {
                        ss += (v - m.mean) * (v - m.mean);
                    }
                    m.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
                }
            }
        } else {
            std::map<std::string, std::size_t> freq;
            for (std::size_t r = 0; r < table.record_count(); ++r) {
                if (table.cell(r, c)) {
                    ++freq[*table.cell(r, c)];
                }
            }
            if (freq.empty()) {
                m.all_missing = true;
            }
            for (const auto& [value, n] : freq) {
                m.total += n;
                m.freq.emplace_back(value, m.total);
            }
        }
        models.push_back(std::move(m));
    }

    std::set<Row> source_rows(table.records().begin(), table.records().end());
    Rng rng(seed);

    auto draw_row = [&] {
        Row row;
        row.reserve(models.size());
        for (const auto& m : models) {
            if (m.all_missing) {
                row.emplace_back(std::nullopt);
            } else if (m.cls == DataClass::continuous) {
                row.emplace_back(format_number(rng.normal(m.mean, m.std)));
            } else {
                std::size_t pick = static_cast<std::size_t>(rng.below(m.total)) + 1;
                auto it = std::lower_bound(
                    m.freq.begin(), m.freq.end(), pick,
                    [](const auto& entry, std::size_t p) { return entry.second < p; });
                row.emplace_back(it->first);
            }
        }
        return row;
    };

    constexpr int kMaxRetries = 16;
    std::vector<Row> records;
    records.reserve(table.record_count());
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        Row row = draw_row();
        for (int attempt = 0; attempt < kMaxRetries && source_rows.count(row); ++attempt) {
            row = draw_row();
        }
        if (source_rows.count(row)) {
            // Last resort: nudge the continuous cells. Zero-variance columns
            // stay put, so fully degenerate tables may keep source rows.
            for (std::size_t c = 0; c < models.size(); ++c) {
                const auto& m = models[c];
                if (m.cls == DataClass::continuous && !m.all_missing && row[c]) {
                    double x = *parse_number(*row[c]);
                    row[c] = format_number(x + rng.normal(0.0, 0.01 * m.std));
                }
            }
        }
        records.push_back(std::move(row));
    }
    return Table(table.schema(), std::move(records));
}

} // namespace sdc
