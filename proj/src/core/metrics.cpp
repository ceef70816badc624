#include "core/metrics.hpp"

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace sdc {

namespace {

std::vector<double> numeric_column(const Table& table, std::size_t col) {
    std::vector<double> values;
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        if (auto v = table.numeric(r, col)) {
            values.push_back(*v);
        }
    }
    return values;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size());
    double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) {
            ++i;
        }
        while (j < b.size() && b[j] <= x) {
            ++j;
        }
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

std::map<std::string, std::size_t> value_counts(const Table& table, std::size_t col) {
    std::map<std::string, std::size_t> freq;
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        if (table.cell(r, col)) {
            ++freq[*table.cell(r, col)];
        }
    }
    return freq;
}

} // namespace

double distribution_distance(const Table& original, const Table& privatized,
                             std::string_view attr) {
    std::size_t ca = original.attribute_index(attr);
    std::size_t cb = privatized.attribute_index(attr);
    DataClass cls = original.schema()[ca].data_class;
    if (cls != privatized.schema()[cb].data_class) {
        throw_usage("attribute '" + std::string(attr) + "' has different classes in the two tables");
    }
    if (cls == DataClass::continuous) {
        auto a = numeric_column(original, ca);
        auto b = numeric_column(privatized, cb);
        if (a.empty() || b.empty()) {
            throw_usage("attribute '" + std::string(attr) + "' has no values to compare");
        }
        return ks_statistic(std::move(a), std::move(b));
    }
    auto fa = value_counts(original, ca);
    auto fb = value_counts(privatized, cb);
    double na = 0.0, nb = 0.0;
    for (const auto& [v, n] : fa) {
        na += static_cast<double>(n);
    }
    for (const auto& [v, n] : fb) {
        nb += static_cast<double>(n);
    }
    if (na == 0.0 || nb == 0.0) {
        throw_usage("attribute '" + std::string(attr) + "' has no values to compare");
    }
    std::set<std::string> support;
    for (const auto& [v, n] : fa) {
        support.insert(v);
    }
    for (const auto& [v, n] : fb) {
        support.insert(v);
    }
    double tv = 0.0;
    for (const auto& v : support) {
        double pa = fa.count(v) ? static_cast<double>(fa.at(v)) / na : 0.0;
        double pb = fb.count(v) ? static_cast<double>(fb.at(v)) / nb : 0.0;
        tv += std::fabs(pa - pb);
    }
    return tv / 2.0;
}

GaugeResult separability_gauge(const Table& original,
                               const Table& privatized,
                               std::string_view label_attr,
                               const std::vector<std::string>& feature_attrs,
                               std::size_t folds,
                               std::uint64_t seed) {
    if (feature_attrs.empty()) {
        throw_usage("the gauge needs at least one feature attribute");
    }
    std::size_t label_a = original.attribute_index(label_attr);
    std::size_t label_b = privatized.attribute_index(label_attr);
    if (original.schema()[label_a].data_class != DataClass::categorical) {
        throw_usage("label attribute must be categorical");
    }
    std::vector<std::size_t> feat_a, feat_b;
    for (const auto& name : feature_attrs) {
        std::size_t fa = original.attribute_index(name);
        std::size_t fb = privatized.attribute_index(name);
        if (original.schema()[fa].data_class != DataClass::continuous ||
            privatized.schema()[fb].data_class != DataClass::continuous) {
            throw_usage("gauge feature '" + name + "' must be continuous in both tables");
        }
        feat_a.push_back(fa);
        feat_b.push_back(fb);
    }
    if (original.record_count() != privatized.record_count()) {
        throw_usage("the gauge needs tables with matching record counts");
    }

    // Rows usable in both tables: full features and a label.
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < original.record_count(); ++r) {
        bool ok = original.cell(r, label_a).has_value() && privatized.cell(r, label_b).has_value();
        for (std::size_t i = 0; ok && i < feat_a.size(); ++i) {
            ok = original.numeric(r, feat_a[i]).has_value() &&
                 privatized.numeric(r, feat_b[i]).has_value();
        }
        if (ok) {
            rows.push_back(r);
        }
    }
    std::size_t n = rows.size();
    if (folds == 0) {
        folds = n; // leave-one-out
    }
    if (n < folds || folds < 2) {
        throw_usage("too few complete records (" + std::to_string(n) + ") for " +
                    std::to_string(folds) + " folds");
    }
    std::set<std::string> distinct_labels;
    for (std::size_t r : rows) {
        distinct_labels.insert(*original.cell(r, label_a));
    }
    if (distinct_labels.size() < 2) {
        throw_usage("the gauge needs at least two label classes");
    }

    // Standardization constants come from the original table for both sides,
    // so distortion shows up instead of being normalized away.
    std::vector<double> mean(feat_a.size(), 0.0), scale(feat_a.size(), 1.0);
    for (std::size_t i = 0; i < feat_a.size(); ++i) {
        double sum = 0.0;
        for (std::size_t r : rows) {
            sum += *original.numeric(r, feat_a[i]);
        }
        mean[i] = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t r : rows) {
            double d = *original.numeric(r, feat_a[i]) - mean[i];
            ss += d * d;
        }
        double std = n >= 2 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        scale[i] = std > 0.0 ? std : 1.0;
    }

    auto standardized = [&](const Table& t, const std::vector<std::size_t>& feats) {
        std::vector<std::vector<double>> points(n, std::vector<double>(feats.size()));
        for (std::size_t idx = 0; idx < n; ++idx) {
            for (std::size_t i = 0; i < feats.size(); ++i) {
                points[idx][i] = (*t.numeric(rows[idx], feats[i]) - mean[i]) / scale[i];
            }
        }
        return points;
    };
    auto labels_of = [&](const Table& t, std::size_t col) {
        std::vector<std::string> labels(n);
        for (std::size_t idx = 0; idx < n; ++idx) {
            labels[idx] = *t.cell(rows[idx], col);
        }
        return labels;
    };

    // Identical fold assignment for both tables: seeded shuffle, round-robin.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<std::size_t> fold(n);
    for (std::size_t i = 0; i < n; ++i) {
        fold[order[i]] = i % folds;
    }

    auto accuracy = [&](const std::vector<std::vector<double>>& points,
                        const std::vector<std::string>& labels) {
        std::size_t correct = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_j = n;
            for (std::size_t j = 0; j < n; ++j) {
                if (fold[j] == fold[i]) {
                    continue; // train on out-of-fold rows only
                }
                double d = 0.0;
                for (std::size_t f = 0; f < points[i].size(); ++f) {
                    double diff = points[i][f] - points[j][f];
                    d += diff * diff;
                }
                if (d < best) { // ties keep the lowest j
                    best = d;
                    best_j = j;
                }
            }
            if (best_j < n && labels[best_j] == labels[i]) {
                ++correct;
            }
        }
        return static_cast<double>(correct) / static_cast<double>(n);
    };

    GaugeResult out;
    out.evaluated_records = n;
    out.folds = folds;
    out.baseline_accuracy = accuracy(standardized(original, feat_a), labels_of(original, label_a));
    out.privatized_accuracy =
        accuracy(standardized(privatized, feat_b), labels_of(privatized, label_b));
    return out;
}

std::string UtilityReport::render() const {
    std::ostringstream out;
    out << "sdc utility report\n";
    out << "==================\n";
    out << "records: " << records_original << " -> " << records_privatized;
    if (records_suppressed > 0) {
        out << " (" << records_suppressed << " suppressed)";
    }
    out << '\n';
    for (const auto& e : attributes) {
        out << "  " << e.name << " (" << to_string(e.data_class) << ")";
        if (e.class_changed) {
            out << ": class changed by the pipeline, no comparable statistics";
        } else {
            if (e.mean_delta) {
                out << ": mean_delta=" << format_number(*e.mean_delta);
            }
            if (e.std_delta) {
                out << " std_delta=" << format_number(*e.std_delta);
            }
            if (e.distance) {
                out << (e.data_class == DataClass::continuous ? " ks=" : " tv=")
                    << format_number(*e.distance);
            }
        }
        out << '\n';
    }
    if (gauge) {
        out << "classifier gauge (1-NN, " << gauge->folds << " folds, "
            << gauge->evaluated_records << " records): baseline "
            << format_number(gauge->baseline_accuracy) << " -> privatized "
            << format_number(gauge->privatized_accuracy) << '\n';
    }
    if (anonymity) {
        out << "anonymity assessment of the privatized table:\n";
        std::istringstream lines(anonymity->render());
        std::string line;
        while (std::getline(lines, line)) {
            out << "  " << line << '\n';
        }
    }

    out << "\n[metrics]\n";
    out << "records.original=" << records_original << '\n';
    out << "records.privatized=" << records_privatized << '\n';
    out << "records.suppressed=" << records_suppressed << '\n';
    if (cells_suppressed) {
        out << "cells.suppressed=" << *cells_suppressed << '\n';
    }
    for (const auto& e : attributes) {
        if (e.class_changed) {
            out << "attr." << e.name << ".class_changed=1\n";
            continue;
        }
        if (e.mean_delta) {
            out << "attr." << e.name << ".mean_delta=" << format_number(*e.mean_delta) << '\n';
        }
        if (e.std_delta) {
            out << "attr." << e.name << ".std_delta=" << format_number(*e.std_delta) << '\n';
        }
        if (e.distance) {
            out << "attr." << e.name << (e.data_class == DataClass::continuous ? ".ks=" : ".tv=")
                << format_number(*e.distance) << '\n';
        }
    }
    if (gauge) {
        out << "gauge.baseline_accuracy=" << format_number(gauge->baseline_accuracy) << '\n';
        out << "gauge.privatized_accuracy=" << format_number(gauge->privatized_accuracy) << '\n';
    }
    if (anonymity) {
        out << "anonymity.k_achieved=" << anonymity->k_achieved << '\n';
        out << "anonymity.k_pass=" << (anonymity->k_pass ? 1 : 0) << '\n';
        for (const auto& [name, l] : anonymity->l_achieved) {
            out << "anonymity.l_achieved." << name << "=" << l << '\n';
        }
        if (anonymity->l_pass) {
            out << "anonymity.l_pass=" << (*anonymity->l_pass ? 1 : 0) << '\n';
        }
    }
    return out.str();
}

UtilityReport build_report(const Table& original, const Table& privatized,
                           const ReportConfig& config) {
    UtilityReport report;
    report.records_original = original.record_count();
    report.records_privatized = privatized.record_count();
    if (privatized.record_count() < original.record_count()) {
        report.records_suppressed = original.record_count() - privatized.record_count();
    }

    std::vector<std::string> attrs = config.attributes;
    if (attrs.empty()) {
        for (const auto& meta : original.schema()) {
            if (privatized.find_attribute(meta.name)) {
                attrs.push_back(meta.name);
            }
        }
        if (attrs.empty()) {
            throw_usage("the two tables share no attributes");
        }
    }

    for (const auto& name : attrs) {
        std::size_t ca = original.attribute_index(name);
        std::size_t cb = privatized.attribute_index(name);
        UtilityReport::AttributeEntry entry;
        entry.name = name;
        entry.data_class = original.schema()[ca].data_class;
        if (original.schema()[ca].data_class != privatized.schema()[cb].data_class) {
            entry.class_changed = true;
            report.attributes.push_back(std::move(entry));
            continue;
        }
        if (entry.data_class == DataClass::continuous) {
            ColumnStats sa = column_stats(original, name);
            ColumnStats sb = column_stats(privatized, name);
            if (sa.mean && sb.mean) {
                entry.mean_delta = *sb.mean - *sa.mean;
            }
            if (sa.sample_std && sb.sample_std) {
                entry.std_delta = *sb.sample_std - *sa.sample_std;
            }
            if (sa.count > 0 && sb.count > 0) {
                entry.distance = distribution_distance(original, privatized, name);
            }
        } else {
            ColumnStats sa = column_stats(original, name);
            ColumnStats sb = column_stats(privatized, name);
            if (sa.count > 0 && sb.count > 0) {
                entry.distance = distribution_distance(original, privatized, name);
            }
        }
        report.attributes.push_back(std::move(entry));
    }

    if (original.record_count() == privatized.record_count()) {
        std::size_t suppressed = 0;
        for (const auto& name : attrs) {
            std::size_t ca = original.attribute_index(name);
            std::size_t cb = privatized.attribute_index(name);
            for (std::size_t r = 0; r < original.record_count(); ++r) {
                if (original.cell(r, ca) && !privatized.cell(r, cb)) {
                    ++suppressed;
                }
            }
        }
        report.cells_suppressed = suppressed;
    }

    if (config.gauge_label) {
        report.gauge = separability_gauge(original, privatized, *config.gauge_label,
                                          config.gauge_features, config.gauge_folds, config.seed);
    }

    if (!config.quasi.empty()) {
        if (config.sensitive && config.l) {
            report.anonymity =
                verify_l_diversity(privatized, config.quasi, *config.sensitive, config.k, *config.l);
        } else {
            report.anonymity = verify_k_anonymity(privatized, config.quasi, config.k);
        }
    }
    return report;
}

void scatter_export(const Table& table, std::string_view x_attr, std::string_view y_attr,
                    std::string_view label_attr, std::ostream& sink) {
    std::size_t cx = table.attribute_index(x_attr);
    std::size_t cy = table.attribute_index(y_attr);
    std::size_t cl = table.attribute_index(label_attr);
    if (table.schema()[cx].data_class != DataClass::continuous ||
        table.schema()[cy].data_class != DataClass::continuous) {
        throw_usage("scatter axes must be continuous attributes");
    }
    sink << "x,y,label\n";
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        const Cell& x = table.cell(r, cx);
        const Cell& y = table.cell(r, cy);
        const Cell& l = table.cell(r, cl);
        auto write_cell = [&](const Cell& c) {
            if (!c) {
                return;
            }
            if (c->find_first_of(",\"\n\r") == std::string::npos) {
                sink << *c;
                return;
            }
            sink << '"';
            for (char ch : *c) {
                if (ch == '"') {
                    sink << "\"\"";
                } else {
                    sink << ch;
                }
            }
            sink << '"';
        };
        write_cell(x);
        sink << ',';
        write_cell(y);
        sink << ',';
        write_cell(l);
        sink << '\n';
    }
    if (!sink) {
        throw_runtime("write failure while exporting scatter data");
    }
}

void scatter_export_file(const Table& table, std::string_view x_attr, std::string_view y_attr,
                         std::string_view label_attr, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw_runtime("cannot open '" + path + "' for writing");
    }
    scatter_export(table, x_attr, y_attr, label_attr, out);
}

} // namespace sdc
