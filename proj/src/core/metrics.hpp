#pragma once

#include "core/nonperturbative.hpp"
#include "core/table.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sdc {

/// Distance in [0, 1] between the two tables' distributions of `attr`:
/// two-sample Kolmogorov-Smirnov statistic for continuous attributes,
/// total-variation distance of the value frequencies for categorical ones.
/// Missing cells are excluded; both columns need at least one value.
double distribution_distance(const Table& original, const Table& privatized,
                             std::string_view attr);

struct GaugeResult {
    double baseline_accuracy = 0.0;
    double privatized_accuracy = 0.0;
    std::size_t evaluated_records = 0;
    std::size_t folds = 0;
};

/// 1-nearest-neighbor classification accuracy on both tables under identical
/// fold assignments, Euclidean distance on features standardized by the
/// ORIGINAL table's means and stds. folds = 0 means leave-one-out. Rows with
/// a missing feature or label in either table are left out of the evaluation.
GaugeResult separability_gauge(const Table& original,
                               const Table& privatized,
                               std::string_view label_attr,
                               const std::vector<std::string>& feature_attrs,
                               std::size_t folds,
                               std::uint64_t seed);

struct ReportConfig {
    /// Attributes to measure; empty means every attribute shared by both
    /// schemas with an unchanged class.
    std::vector<std::string> attributes;
    /// Anonymity section (runs on the privatized table) when non-empty.
    std::vector<std::string> quasi;
    std::optional<std::string> sensitive;
    std::size_t k = 2;
    std::optional<std::size_t> l;
    /// Classifier gauge when label is set.
    std::optional<std::string> gauge_label;
    std::vector<std::string> gauge_features;
    std::size_t gauge_folds = 0; // 0 = leave-one-out
    std::uint64_t seed = 0;
};

struct UtilityReport {
    struct AttributeEntry {
        std::string name;
        DataClass data_class = DataClass::categorical;
        bool class_changed = false; // recoded/coded columns: no comparable stats
        std::optional<double> mean_delta;
        std::optional<double> std_delta;
        std::optional<double> distance;
    };

    std::vector<AttributeEntry> attributes;
    std::size_t records_original = 0;
    std::size_t records_privatized = 0;
    std::size_t records_suppressed = 0;
    std::optional<std::size_t> cells_suppressed; // only when record counts match
    std::optional<GaugeResult> gauge;
    std::optional<AnonymityAssessment> anonymity;

    /// Narrative header plus a machine-readable `[metrics]` key=value block.
    std::string render() const;
};

UtilityReport build_report(const Table& original, const Table& privatized,
                           const ReportConfig& config);

/// Plot-ready CSV of (x, y, label) triples, header `x,y,label`, source row
/// order. x and y must be continuous.
void scatter_export(const Table& table, std::string_view x_attr, std::string_view y_attr,
                    std::string_view label_attr, std::ostream& sink);
void scatter_export_file(const Table& table, std::string_view x_attr, std::string_view y_attr,
                         std::string_view label_attr, const std::string& path);

} // namespace sdc
