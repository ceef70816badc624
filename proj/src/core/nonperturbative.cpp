#include "core/nonperturbative.hpp"

#include "core/error.hpp"
#include "core/hierarchy.hpp"
#include "core/text.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sdc {

Table suppress_cells(const Table& table, const CellSelector& selector) {
    std::vector<Row> records = table.records();
    for (std::size_t r = 0; r < records.size(); ++r) {
        for (std::size_t c = 0; c < records[r].size(); ++c) {
            if (selector(r, table.schema()[c], records[r][c])) {
                records[r][c] = std::nullopt;
            }
        }
    }
    return Table(table.schema(), std::move(records));
}

Table suppress_records(const Table& table, const std::vector<std::size_t>& rows) {
    std::set<std::size_t> drop;
    for (std::size_t r : rows) {
        if (r >= table.record_count()) {
            throw_usage("record index " + std::to_string(r) + " out of range (table has " +
                        std::to_string(table.record_count()) + " records)");
        }
        drop.insert(r);
    }
    std::vector<Row> records;
    records.reserve(table.record_count() - drop.size());
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        if (!drop.count(r)) {
            records.push_back(table.records()[r]);
        }
    }
    return Table(table.schema(), std::move(records));
}

Table generalize(const Table& table, std::string_view attr, std::size_t level) {
    std::size_t col = table.attribute_index(attr);
    const AttributeMeta& meta = table.schema()[col];
    if (!meta.hierarchy) {
        throw_usage("attribute '" + meta.name + "' has no generalization hierarchy");
    }
    if (level > meta.hierarchy->depth()) {
        throw_usage("attribute '" + meta.name + "' has hierarchy depth " +
                    std::to_string(meta.hierarchy->depth()) + ", level " +
                    std::to_string(level) + " requested");
    }
    if (level == 0) {
        return table;
    }
    std::vector<Row> records = table.records();
    for (auto& row : records) {
        if (row[col]) {
            row[col] = meta.hierarchy->label(*row[col], level);
        }
    }
    return Table(table.schema(), std::move(records));
}

namespace {

std::vector<std::size_t> resolve_attrs(const Table& table, const std::vector<std::string>& names) {
    std::vector<std::size_t> cols;
    std::set<std::string> seen;
    for (const auto& name : names) {
        cols.push_back(table.attribute_index(name));
        if (!seen.insert(name).second) {
            throw_usage("attribute '" + name + "' listed twice");
        }
    }
    return cols;
}

std::vector<std::size_t> sensitive_columns(const Table& table,
                                           const std::optional<std::string>& extra,
                                           const std::vector<std::string>& quasi) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < table.attribute_count(); ++i) {
        const AttributeMeta& meta = table.schema()[i];
        bool is_quasi_arg = std::find(quasi.begin(), quasi.end(), meta.name) != quasi.end();
        if (is_quasi_arg) {
            continue;
        }
        if (meta.kind == AttributeKind::sensitive || (extra && meta.name == *extra)) {
            cols.push_back(i);
        }
    }
    return cols;
}

AnonymityAssessment assess(const Table& table,
                           const std::vector<std::string>& quasi,
                           std::size_t k,
                           const std::optional<std::string>& sensitive) {
    auto quasi_cols = resolve_attrs(table, quasi);
    auto sens_cols = sensitive_columns(table, sensitive, quasi);

    std::map<std::vector<Cell>, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        std::vector<Cell> key;
        key.reserve(quasi_cols.size());
        for (std::size_t c : quasi_cols) {
            key.push_back(table.cell(r, c));
        }
        groups[std::move(key)].push_back(r);
    }

    AnonymityAssessment out;
    out.quasi = quasi;
    out.k_required = k;
    out.sensitive = sensitive;
    out.k_achieved = 0;
    bool first = true;
    for (auto& [key, rows] : groups) {
        EquivalenceClass cls;
        cls.key = key;
        cls.rows = rows;
        for (std::size_t c : sens_cols) {
            std::set<Cell> distinct;
            for (std::size_t r : rows) {
                distinct.insert(table.cell(r, c));
            }
            cls.distinct_sensitive[table.schema()[c].name] = distinct.size();
        }
        if (first || rows.size() < out.k_achieved) {
            out.k_achieved = rows.size();
        }
        first = false;
        out.classes.push_back(std::move(cls));
    }
    for (std::size_t c : sens_cols) {
        const std::string& name = table.schema()[c].name;
        std::size_t lmin = 0;
        bool lfirst = true;
        for (const auto& cls : out.classes) {
            std::size_t d = cls.distinct_sensitive.at(name);
            if (lfirst || d < lmin) {
                lmin = d;
            }
            lfirst = false;
        }
        out.l_achieved[name] = lmin;
    }
    out.k_pass = true;
    for (const auto& cls : out.classes) {
        if (cls.rows.size() < k) {
            out.k_pass = false;
            break;
        }
    }
    return out;
}

std::string render_key(const std::vector<std::string>& quasi, const std::vector<Cell>& key) {
    if (quasi.empty()) {
        return "(all records)";
    }
    std::string out = "(";
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += quasi[i] + "=" + (key[i] ? *key[i] : "<missing>");
    }
    out += ")";
    return out;
}

} // namespace

std::string AnonymityAssessment::render() const {
    std::ostringstream out;
    out << "quasi set: " << (quasi.empty() ? "(empty)" : join(quasi, ", ")) << '\n';
    out << "classes: " << classes.size() << '\n';
    out << "k_achieved: " << k_achieved << " (required " << k_required << ") -> "
        << (k_pass ? "pass" : "FAIL") << '\n';
    for (const auto& [name, l] : l_achieved) {
        out << "l_achieved[" << name << "]: " << l;
        if (sensitive && *sensitive == name && l_required) {
            out << " (required " << *l_required << ") -> " << (*l_pass ? "pass" : "FAIL");
        }
        out << '\n';
    }
    // Violating classes first, then the rest; capped so huge tables stay readable.
    constexpr std::size_t kMaxListed = 25;
    std::size_t listed = 0;
    for (const auto& cls : classes) {
        bool k_bad = cls.rows.size() < k_required;
        bool l_bad = sensitive && l_required &&
                     cls.distinct_sensitive.count(*sensitive) &&
                     cls.distinct_sensitive.at(*sensitive) < *l_required;
        if (!k_bad && !l_bad) {
            continue;
        }
        if (listed == kMaxListed) {
            out << "  ...\n";
            break;
        }
        out << "  class " << render_key(quasi, cls.key) << " size=" << cls.rows.size();
        if (l_bad) {
            out << " distinct[" << *sensitive << "]=" << cls.distinct_sensitive.at(*sensitive);
        }
        out << "  <- violates\n";
        ++listed;
    }
    if (listed == 0 && classes.size() <= kMaxListed) {
        for (const auto& cls : classes) {
            out << "  class " << render_key(quasi, cls.key) << " size=" << cls.rows.size();
            if (sensitive && cls.distinct_sensitive.count(*sensitive)) {
                out << " distinct[" << *sensitive << "]=" << cls.distinct_sensitive.at(*sensitive);
            }
            out << '\n';
        }
    }
    return out.str();
}

AnonymityAssessment verify_k_anonymity(const Table& table,
                                       const std::vector<std::string>& quasi,
                                       std::size_t k) {
    if (k < 1) {
        throw_usage("k must be at least 1");
    }
    return assess(table, quasi, k, std::nullopt);
}

AnonymityAssessment verify_l_diversity(const Table& table,
                                       const std::vector<std::string>& quasi,
                                       const std::string& sensitive,
                                       std::size_t k,
                                       std::size_t l) {
    if (k < 1) {
        throw_usage("k must be at least 1");
    }
    if (l < 1) {
        throw_usage("l must be at least 1");
    }
    table.attribute_index(sensitive);
    if (std::find(quasi.begin(), quasi.end(), sensitive) != quasi.end()) {
        throw_usage("sensitive attribute '" + sensitive + "' must not be in the quasi set");
    }
    AnonymityAssessment out = assess(table, quasi, k, sensitive);
    out.l_required = l;
    bool pass = out.k_pass;
    for (const auto& cls : out.classes) {
        if (cls.distinct_sensitive.at(sensitive) < l) {
            pass = false;
        }
    }
    out.l_pass = pass;
    return out;
}

std::string EnforcementReport::render() const {
    std::ostringstream out;
    out << "generalization levels:";
    if (levels.empty()) {
        out << " (none)";
    }
    for (const auto& [name, level] : levels) {
        out << ' ' << name << "=" << level;
    }
    out << '\n';
    out << "suppressed records: " << suppressed_rows.size();
    for (std::size_t r : suppressed_rows) {
        out << ' ' << r;
    }
    out << '\n';
    return out.str();
}

std::pair<Table, EnforcementReport> enforce_k_anonymity(const Table& table,
                                                        const std::vector<std::string>& quasi,
                                                        std::size_t k) {
    if (k < 2) {
        throw_usage("enforcement requires k >= 2");
    }
    if (k > table.record_count()) {
        throw_runtime("k = " + std::to_string(k) + " exceeds the record count " +
                      std::to_string(table.record_count()) +
                      "; unachievable without suppressing everything");
    }
    auto quasi_cols = resolve_attrs(table, quasi);
    (void)quasi_cols;

    // Quasi attributes in schema order for deterministic tie-breaking.
    std::vector<std::string> ordered;
    for (const auto& meta : table.schema()) {
        if (std::find(quasi.begin(), quasi.end(), meta.name) != quasi.end()) {
            ordered.push_back(meta.name);
        }
    }

    std::map<std::string, std::size_t> levels;
    for (const auto& name : ordered) {
        levels[name] = 0;
    }

    auto apply_levels = [&](const std::map<std::string, std::size_t>& lv) {
        Table out = table;
        for (const auto& [name, level] : lv) {
            if (level > 0) {
                out = generalize(out, name, level);
            }
        }
        return out;
    };
    auto violating_count = [&](const Table& t) {
        AnonymityAssessment a = verify_k_anonymity(t, quasi, k);
        std::size_t n = 0;
        for (const auto& cls : a.classes) {
            if (cls.rows.size() < k) {
                n += cls.rows.size();
            }
        }
        return n;
    };

    while (true) {
        Table current = apply_levels(levels);
        std::size_t violating = violating_count(current);
        if (violating == 0) {
            break;
        }
        std::string best;
        std::size_t best_removed = 0;
        for (const auto& name : ordered) {
            const AttributeMeta& meta = table.schema()[table.attribute_index(name)];
            if (!meta.hierarchy || levels[name] >= meta.hierarchy->depth()) {
                continue;
            }
            auto trial = levels;
            ++trial[name];
            std::size_t removed = violating - violating_count(apply_levels(trial));
            if (best.empty() || removed > best_removed) {
                best = name;
                best_removed = removed;
            }
        }
        if (best.empty()) {
            break; // nothing left to generalize; fall through to suppression
        }
        ++levels[best];
    }

    Table generalized = apply_levels(levels);
    AnonymityAssessment assessment = verify_k_anonymity(generalized, quasi, k);
    EnforcementReport report;
    for (const auto& name : ordered) {
        report.levels.emplace_back(name, levels[name]);
    }
    for (const auto& cls : assessment.classes) {
        if (cls.rows.size() < k) {
            report.suppressed_rows.insert(report.suppressed_rows.end(), cls.rows.begin(),
                                          cls.rows.end());
        }
    }
    std::sort(report.suppressed_rows.begin(), report.suppressed_rows.end());
    Table result = suppress_records(generalized, report.suppressed_rows);
    return {std::move(result), std::move(report)};
}

} // namespace sdc
