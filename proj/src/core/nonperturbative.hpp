#pragma once

#include "core/table.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace sdc {

using CellSelector = std::function<bool(std::size_t row, const AttributeMeta& attr, const Cell& cell)>;

/// Replaces selected cells by the missing marker; every other cell and the
/// schema stay untouched.
Table suppress_cells(const Table& table, const CellSelector& selector);

/// Removes the listed records (0-based); survivor order is preserved.
Table suppress_records(const Table& table, const std::vector<std::size_t>& rows);

/// Replaces each cell of `attr` by its hierarchy label at `level`
/// (level 0 is the identity). Missing cells stay missing.
Table generalize(const Table& table, std::string_view attr, std::size_t level);

/// One quasi-tuple group. The key keeps the quasi cells in caller order;
/// a missing quasi value forms its own group. distinct_sensitive also counts
/// the missing marker as a value of its own.
struct EquivalenceClass {
    std::vector<Cell> key;
    std::vector<std::size_t> rows;
    std::map<std::string, std::size_t> distinct_sensitive;
};

struct AnonymityAssessment {
    std::vector<std::string> quasi;
    std::vector<EquivalenceClass> classes;
    std::size_t k_achieved = 0; // 0 on empty tables
    std::map<std::string, std::size_t> l_achieved;

    std::size_t k_required = 0;
    bool k_pass = false;
    std::optional<std::string> sensitive;
    std::optional<std::size_t> l_required;
    std::optional<bool> l_pass;

    std::string render() const;
};

/// Groups records by the quasi tuple; passes iff every class has >= k members.
/// Distinct sensitive counts cover every schema attribute of kind sensitive.
AnonymityAssessment verify_k_anonymity(const Table& table,
                                       const std::vector<std::string>& quasi,
                                       std::size_t k);

/// Distinct l-diversity: k-anonymity must pass and every class must carry at
/// least l distinct values of `sensitive` (which must not be a quasi attribute).
AnonymityAssessment verify_l_diversity(const Table& table,
                                       const std::vector<std::string>& quasi,
                                       const std::string& sensitive,
                                       std::size_t k,
                                       std::size_t l);

struct EnforcementReport {
    // Final generalization level for every quasi attribute, schema order.
    std::vector<std::pair<std::string, std::size_t>> levels;
    // Input-table indices of the records suppressed after generalization.
    std::vector<std::size_t> suppressed_rows;

    std::string render() const;
};

/// Greedy full-domain enforcement: while violations remain and some quasi
/// attribute can still be generalized, raise by one level the attribute whose
/// single-level generalization removes the most violating records (ties go to
/// the leftmost in schema order); then suppress the records still violating.
/// k must be at least 2 and no greater than the record count.
std::pair<Table, EnforcementReport> enforce_k_anonymity(const Table& table,
                                                        const std::vector<std::string>& quasi,
                                                        std::size_t k);

} // namespace sdc
