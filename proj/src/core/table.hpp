#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sdc {

class GeneralizationHierarchy;

/// Continuous cells parse as finite numbers; categorical cells are opaque tokens.
enum class DataClass { categorical, continuous };

enum class AttributeKind { pii, quasi, sensitive, non_sensitive };

std::string_view to_string(DataClass cls);
std::string_view to_string(AttributeKind kind);
DataClass parse_data_class(std::string_view text);
AttributeKind parse_attribute_kind(std::string_view text);

struct Bounds {
    double lo = 0.0;
    double hi = 0.0;
};

struct AttributeMeta {
    std::string name;
    AttributeKind kind = AttributeKind::non_sensitive;
    DataClass data_class = DataClass::categorical;
    std::shared_ptr<const GeneralizationHierarchy> hierarchy;
    std::optional<Bounds> bounds;
};

using Schema = std::vector<AttributeMeta>;

/// A cell is a token, or nullopt for the missing marker. Missing cells load
/// from and emit to empty CSV fields.
using Cell = std::optional<std::string>;
using Row = std::vector<Cell>;

/// Rectangular microdata: ordered records over typed, role-tagged attributes.
/// Immutable after construction; operations return fresh tables.
class Table {
public:
    Table(Schema schema, std::vector<Row> records);

    const Schema& schema() const { return schema_; }
    const std::vector<Row>& records() const { return records_; }

    std::size_t record_count() const { return records_.size(); }
    std::size_t attribute_count() const { return schema_.size(); }

    const AttributeMeta& attribute(std::size_t index) const { return schema_[index]; }
    const Cell& cell(std::size_t row, std::size_t col) const { return records_[row][col]; }

    /// Index of a named attribute; throws a usage error when unknown.
    std::size_t attribute_index(std::string_view name) const;
    std::optional<std::size_t> find_attribute(std::string_view name) const;

    /// Parsed numeric value of a continuous cell; nullopt when missing.
    std::optional<double> numeric(std::size_t row, std::size_t col) const;

private:
    Schema schema_;
    std::vector<Row> records_;
};

/// Schema descriptor file: one line per attribute,
///   name,kind,class[,hierarchy=PATH][,bounds=LO:HI]
/// Relative hierarchy paths resolve against the schema file's directory.
Schema load_schema_file(const std::string& path);

/// Loads RFC 4180 style CSV (header row mandatory, comma separated, double
/// quotes with quote doubling). Header names must match the schema in order.
/// Empty fields become the missing marker; continuous cells must parse as
/// finite numbers and respect declared bounds; hierarchy-backed columns must
/// be covered at hierarchy level 0.
Table load_table(std::istream& source, const Schema& schema);
Table load_table_file(const std::string& path, const Schema& schema);

/// Emits header plus records; quotes a field only when it contains a comma,
/// quote or line break. load_table(emit_table(t)) reproduces t exactly.
void emit_table(const Table& table, std::ostream& sink);
void emit_table_file(const Table& table, const std::string& path);

enum class PartitionAxis { horizontal, vertical };

struct Partition {
    PartitionAxis axis = PartitionAxis::horizontal;
    std::vector<Table> pieces;
};

/// Splits by rows; piece_sizes must sum to the record count.
Partition partition_horizontal(const Table& table, const std::vector<std::size_t>& piece_sizes);

/// Splits by columns; groups must cover the schema exactly and disjointly.
Partition partition_vertical(const Table& table,
                             const std::vector<std::vector<std::string>>& groups);

struct ColumnStats {
    std::size_t count = 0;   // non-missing cells
    std::size_t missing = 0;
    // Continuous only; nullopt when undefined (mean needs 1 value, std needs 2).
    std::optional<double> mean;
    std::optional<double> sample_std;
    std::optional<double> min;
    std::optional<double> max;
    // Categorical only; sorted by value, counts sum to `count`.
    std::vector<std::pair<std::string, std::size_t>> frequencies;
};

ColumnStats column_stats(const Table& table, std::string_view attr);

/// Schema plus per-column stats, one block per attribute (cli `inspect`).
std::string render_inspection(const Table& table);

} // namespace sdc
