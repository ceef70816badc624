#include "core/table.hpp"

#include "core/error.hpp"
#include "core/hierarchy.hpp"
#include "core/text.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sdc {

std::string_view to_string(DataClass cls) {
    return cls == DataClass::categorical ? "categorical" : "continuous";
}

std::string_view to_string(AttributeKind kind) {
    switch (kind) {
    case AttributeKind::pii: return "pii";
    case AttributeKind::quasi: return "quasi";
    case AttributeKind::sensitive: return "sensitive";
    case AttributeKind::non_sensitive: return "non_sensitive";
    }
    return "non_sensitive";
}

DataClass parse_data_class(std::string_view text) {
    if (text == "categorical") return DataClass::categorical;
    if (text == "continuous") return DataClass::continuous;
    throw_usage("unknown data class '" + std::string(text) + "' (expected categorical or continuous)");
}

AttributeKind parse_attribute_kind(std::string_view text) {
    if (text == "pii") return AttributeKind::pii;
    if (text == "quasi") return AttributeKind::quasi;
    if (text == "sensitive") return AttributeKind::sensitive;
    if (text == "non_sensitive" || text == "non-sensitive") return AttributeKind::non_sensitive;
    throw_usage("unknown attribute kind '" + std::string(text) + "'");
}

Table::Table(Schema schema, std::vector<Row> records)
    : schema_(std::move(schema)), records_(std::move(records)) {
    for (const auto& row : records_) {
        if (row.size() != schema_.size()) {
            throw_usage("record has " + std::to_string(row.size()) + " cells, schema has " +
                        std::to_string(schema_.size()) + " attributes");
        }
    }
}

std::size_t Table::attribute_index(std::string_view name) const {
    auto found = find_attribute(name);
    if (!found) {
        throw_usage("unknown attribute '" + std::string(name) + "'");
    }
    return *found;
}

std::optional<std::size_t> Table::find_attribute(std::string_view name) const {
    for (std::size_t i = 0; i < schema_.size(); ++i) {
        if (schema_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<double> Table::numeric(std::size_t row, std::size_t col) const {
    const Cell& c = records_[row][col];
    if (!c) {
        return std::nullopt;
    }
    auto parsed = parse_number(*c);
    if (!parsed) {
        throw_runtime("cell '" + *c + "' in continuous column '" + schema_[col].name +
                      "' is not numeric");
    }
    return parsed;
}

// --- schema descriptor ------------------------------------------------------

Schema load_schema_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw_usage("cannot open schema file '" + path + "'");
    }
    std::filesystem::path base = std::filesystem::path(path).parent_path();

    Schema schema;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        auto fields = split(body, ',');
        if (fields.size() < 3) {
            throw_usage(path + ":" + std::to_string(line_no) +
                        ": expected 'name,kind,class[,key=value...]'");
        }
        AttributeMeta meta;
        meta.name = std::string(trim(fields[0]));
        if (meta.name.empty()) {
            throw_usage(path + ":" + std::to_string(line_no) + ": empty attribute name");
        }
        if (!seen.insert(meta.name).second) {
            throw_usage(path + ":" + std::to_string(line_no) + ": duplicate attribute '" +
                        meta.name + "'");
        }
        meta.kind = parse_attribute_kind(trim(fields[1]));
        meta.data_class = parse_data_class(trim(fields[2]));
        for (std::size_t i = 3; i < fields.size(); ++i) {
            std::string_view option = trim(fields[i]);
            if (option.empty()) {
                continue;
            }
            size_t eq = option.find('=');
            if (eq == std::string_view::npos) {
                throw_usage(path + ":" + std::to_string(line_no) + ": bad option '" +
                            std::string(option) + "' (expected key=value)");
            }
            std::string_view key = trim(option.substr(0, eq));
            std::string_view value = trim(option.substr(eq + 1));
            if (key == "hierarchy") {
                std::filesystem::path h(value);
                if (h.is_relative()) {
                    h = base / h;
                }
                meta.hierarchy = std::make_shared<GeneralizationHierarchy>(
                    GeneralizationHierarchy::load_file(h.string(), meta.name));
            } else if (key == "bounds") {
                auto parts = split(value, ':');
                if (parts.size() != 2) {
                    throw_usage(path + ":" + std::to_string(line_no) +
                                ": bounds expect 'lo:hi'");
                }
                auto lo = parse_number(trim(parts[0]));
                auto hi = parse_number(trim(parts[1]));
                if (!lo || !hi || *lo > *hi) {
                    throw_usage(path + ":" + std::to_string(line_no) + ": bad bounds '" +
                                std::string(value) + "'");
                }
                if (meta.data_class != DataClass::continuous) {
                    throw_usage(path + ":" + std::to_string(line_no) +
                                ": bounds are only valid on continuous attributes");
                }
                meta.bounds = Bounds{*lo, *hi};
            } else {
                throw_usage(path + ":" + std::to_string(line_no) + ": unknown option '" +
                            std::string(key) + "'");
            }
        }
        schema.push_back(std::move(meta));
    }
    if (schema.empty()) {
        throw_usage("schema file '" + path + "' declares no attributes");
    }
    return schema;
}

// --- CSV --------------------------------------------------------------------

namespace {

// One parsed CSV record; empty unquoted fields collapse to the missing marker
// later, the parser keeps raw strings. For single-column tables a blank line
// IS a record (one missing cell), otherwise blank lines are skipped; this
// keeps load(emit(t)) an identity for every table.
std::vector<std::vector<std::string>> parse_csv(std::istream& in, bool blank_is_record) {
    std::string content;
    {
        std::ostringstream buf;
        buf << in.rdbuf();
        content = buf.str();
    }
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false; // row has content (handles blank-line skipping)

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        if (row.empty() && field.empty() && !field_started && !blank_is_record) {
            return; // blank line
        }
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        field_started = false;
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field.empty()) {
                in_quotes = true;
                field_started = true;
            } else {
                field += c; // stray quote inside an unquoted field, taken literally
            }
            break;
        case ',':
            end_field();
            field_started = true;
            break;
        case '\r':
            if (i + 1 < content.size() && content[i + 1] == '\n') {
                ++i;
            }
            end_row();
            break;
        case '\n':
            end_row();
            break;
        default:
            field += c;
            field_started = true;
            break;
        }
    }
    if (in_quotes) {
        throw_usage("unterminated quoted field at end of CSV input");
    }
    if (field_started || !row.empty() || !field.empty()) {
        end_row();
    }
    return rows;
}

bool needs_quoting(const std::string& value) {
    return value.find_first_of(",\"\n\r") != std::string::npos;
}

void write_field(std::ostream& out, const Cell& cell) {
    if (!cell) {
        return;
    }
    if (!needs_quoting(*cell)) {
        out << *cell;
        return;
    }
    out << '"';
    for (char c : *cell) {
        if (c == '"') {
            out << "\"\"";
        } else {
            out << c;
        }
    }
    out << '"';
}

} // namespace

Table load_table(std::istream& source, const Schema& schema) {
    auto raw = parse_csv(source, schema.size() == 1);
    if (raw.empty()) {
        throw_usage("CSV input has no header row");
    }
    const auto& header = raw.front();
    if (header.size() != schema.size()) {
        throw_usage("header has " + std::to_string(header.size()) + " columns, schema declares " +
                    std::to_string(schema.size()));
    }
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (header[i] != schema[i].name) {
            throw_usage("header column " + std::to_string(i + 1) + " is '" + header[i] +
                        "', schema declares '" + schema[i].name + "'");
        }
    }

    std::vector<Row> records;
    records.reserve(raw.size() - 1);
    for (std::size_t r = 1; r < raw.size(); ++r) {
        const auto& fields = raw[r];
        if (fields.size() != schema.size()) {
            throw_usage("row " + std::to_string(r) + " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(schema.size()));
        }
        Row row;
        row.reserve(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string& value = fields[c];
            if (value.empty()) {
                row.emplace_back(std::nullopt);
                continue;
            }
            const AttributeMeta& meta = schema[c];
            if (meta.data_class == DataClass::continuous) {
                auto num = parse_number(value);
                if (!num) {
                    throw_usage("row " + std::to_string(r) + ", column '" + meta.name +
                                "': cannot parse '" + value + "' as a number");
                }
                if (meta.bounds && (*num < meta.bounds->lo || *num > meta.bounds->hi)) {
                    throw_usage("row " + std::to_string(r) + ", column '" + meta.name + "': value " +
                                value + " outside declared bounds [" + format_number(meta.bounds->lo) +
                                ", " + format_number(meta.bounds->hi) + "]");
                }
            }
            if (meta.hierarchy && !meta.hierarchy->contains(value)) {
                throw_usage("row " + std::to_string(r) + ", column '" + meta.name + "': value '" +
                            value + "' is missing from hierarchy level 0");
            }
            row.emplace_back(value);
        }
        records.push_back(std::move(row));
    }
    return Table(schema, std::move(records));
}

Table load_table_file(const std::string& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw_usage("cannot open table file '" + path + "'");
    }
    return load_table(in, schema);
}

void emit_table(const Table& table, std::ostream& sink) {
    const Schema& schema = table.schema();
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (i > 0) {
            sink << ',';
        }
        write_field(sink, Cell(schema[i].name));
    }
    sink << '\n';
    for (const auto& row : table.records()) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                sink << ',';
            }
            write_field(sink, row[i]);
        }
        sink << '\n';
    }
    if (!sink) {
        throw_runtime("write failure while emitting table");
    }
}

void emit_table_file(const Table& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw_runtime("cannot open '" + path + "' for writing");
    }
    emit_table(table, out);
    out.flush();
    if (!out) {
        throw_runtime("write failure on '" + path + "'");
    }
}

// --- partitions ---------------------------------------------------------------

Partition partition_horizontal(const Table& table, const std::vector<std::size_t>& piece_sizes) {
    std::size_t total = 0;
    for (std::size_t s : piece_sizes) {
        total += s;
    }
    if (total != table.record_count()) {
        throw_usage("piece sizes sum to " + std::to_string(total) + ", table has " +
                    std::to_string(table.record_count()) + " records");
    }
    Partition out;
    out.axis = PartitionAxis::horizontal;
    std::size_t offset = 0;
    for (std::size_t s : piece_sizes) {
        std::vector<Row> rows(table.records().begin() + static_cast<std::ptrdiff_t>(offset),
                              table.records().begin() + static_cast<std::ptrdiff_t>(offset + s));
        out.pieces.emplace_back(table.schema(), std::move(rows));
        offset += s;
    }
    return out;
}

Partition partition_vertical(const Table& table,
                             const std::vector<std::vector<std::string>>& groups) {
    std::map<std::string, std::size_t> uses;
    std::size_t named = 0;
    for (const auto& group : groups) {
        for (const auto& name : group) {
            table.attribute_index(name);
            ++uses[name];
            ++named;
        }
    }
    for (const auto& [name, n] : uses) {
        if (n > 1) {
            throw_usage("attribute '" + name + "' appears in more than one group");
        }
    }
    if (named != table.attribute_count()) {
        for (const auto& meta : table.schema()) {
            if (uses.find(meta.name) == uses.end()) {
                throw_usage("groups do not cover attribute '" + meta.name + "'");
            }
        }
    }

    Partition out;
    out.axis = PartitionAxis::vertical;
    for (const auto& group : groups) {
        std::vector<std::size_t> cols;
        Schema piece_schema;
        for (const auto& name : group) {
            std::size_t idx = table.attribute_index(name);
            cols.push_back(idx);
            piece_schema.push_back(table.schema()[idx]);
        }
        std::vector<Row> rows;
        rows.reserve(table.record_count());
        for (const auto& row : table.records()) {
            Row piece_row;
            piece_row.reserve(cols.size());
            for (std::size_t c : cols) {
                piece_row.push_back(row[c]);
            }
            rows.push_back(std::move(piece_row));
        }
        out.pieces.emplace_back(std::move(piece_schema), std::move(rows));
    }
    return out;
}

// --- column stats -------------------------------------------------------------

ColumnStats column_stats(const Table& table, std::string_view attr) {
    std::size_t col = table.attribute_index(attr);
    const AttributeMeta& meta = table.schema()[col];
    ColumnStats stats;

    if (meta.data_class == DataClass::continuous) {
        std::vector<double> values;
        for (std::size_t r = 0; r < table.record_count(); ++r) {
            auto v = table.numeric(r, col);
            if (v) {
                values.push_back(*v);
            } else {
                ++stats.missing;
            }
        }
        stats.count = values.size();
        if (!values.empty()) {
            double sum = 0.0;
            double lo = values.front();
            double hi = values.front();
            for (double v : values) {
                sum += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            double mean = sum / static_cast<double>(values.size());
            stats.mean = mean;
            stats.min = lo;
            stats.max = hi;
            if (values.size() >= 2) {
                double ss = 0.0;
                for (double v : values) {
                    ss += (v - mean) * (v - mean);
                }
                stats.sample_std = std::sqrt(ss / static_cast<double>(values.size() - 1));
            }
        }
    } else {
        std::map<std::string, std::size_t> freq;
        for (const auto& row : table.records()) {
            if (row[col]) {
                ++freq[*row[col]];
            } else {
                ++stats.missing;
            }
        }
        for (auto& [value, n] : freq) {
            stats.count += n;
            stats.frequencies.emplace_back(value, n);
        }
    }
    return stats;
}

std::string render_inspection(const Table& table) {
    std::ostringstream out;
    out << "records: " << table.record_count() << '\n';
    out << "attributes: " << table.attribute_count() << '\n';
    for (const auto& meta : table.schema()) {
        out << "  " << meta.name << "  kind=" << to_string(meta.kind)
            << "  class=" << to_string(meta.data_class);
        if (meta.hierarchy) {
            out << "  hierarchy_depth=" << meta.hierarchy->depth();
        }
        if (meta.bounds) {
            out << "  bounds=[" << format_number(meta.bounds->lo) << ", "
                << format_number(meta.bounds->hi) << "]";
        }
        out << '\n';
        ColumnStats stats = column_stats(table, meta.name);
        out << "    count=" << stats.count << " missing=" << stats.missing;
        if (meta.data_class == DataClass::continuous) {
            out << " mean=" << (stats.mean ? format_number(*stats.mean) : "undefined")
                << " std=" << (stats.sample_std ? format_number(*stats.sample_std) : "undefined")
                << " min=" << (stats.min ? format_number(*stats.min) : "undefined")
                << " max=" << (stats.max ? format_number(*stats.max) : "undefined");
        } else {
            out << " distinct=" << stats.frequencies.size();
        }
        out << '\n';
        if (meta.data_class == DataClass::categorical && !stats.frequencies.empty()) {
            std::size_t shown = 0;
            out << "    values:";
            for (const auto& [value, n] : stats.frequencies) {
                if (shown == 8) {
                    out << " ...";
                    break;
                }
                out << ' ' << value << '=' << n;
                ++shown;
            }
            out << '\n';
        }
    }
    return out.str();
}

} // namespace sdc
