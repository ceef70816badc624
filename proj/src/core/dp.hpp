#pragma once

#include "core/table.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdc {

enum class QueryKind { count, sum, mean };

/// Pure single-comparison row filter. Continuous attributes compare
/// numerically, categorical ones as strings (only == and != make sense there).
/// Rows with a missing cell in the filtered attribute never match.
struct RowFilter {
    enum class Op { eq, ne, lt, le, gt, ge };

    std::string attribute;
    Op op = Op::eq;
    std::string literal;

    bool matches(const Table& table, std::size_t row) const;
    std::string render() const;
};

/// Aggregate query descriptor. Text grammar (cli `dp-query`):
///   count | sum(Attr) | mean(Attr) [hint N] [where Attr OP value]
/// sum/mean require declared bounds on the attribute (schema `bounds=lo:hi`)
/// unless set here; mean requires a public n_hint.
struct DpQuery {
    QueryKind kind = QueryKind::count;
    std::string attribute;
    std::optional<RowFilter> filter;
    std::optional<Bounds> bounds;
    std::optional<std::size_t> n_hint;

    static DpQuery parse(std::string_view text);
    std::string render() const;
};

struct Sensitivity {
    double delta_f = 0.0;
};

/// Worst-case change of the query answer between neighbor tables (one record
/// added or removed): count -> 1, sum -> max(|lo|, |hi|),
/// mean -> (hi - lo) / n_hint.
Sensitivity sensitivity(const DpQuery& query, std::size_t n_hint);

/// b = delta_f / epsilon, exactly.
double laplace_scale(const Sensitivity& s, double epsilon);

/// One seeded draw from Laplace(0, b); b = 0 returns exactly 0.
double sample_laplace(double scale, std::uint64_t seed);

/// True (pre-noise) answer. Sum/mean contributions are clamped to the bounds;
/// a mean over zero matching rows answers the bounds midpoint.
double evaluate_query(const Table& table, const DpQuery& query);

/// Resolves missing query bounds from the attribute's declared bounds and
/// validates the query against the schema.
DpQuery bind_query(const DpQuery& query, const Table& table);

struct LedgerEntry {
    std::string timestamp;
    std::string query;
    double epsilon = 0.0;
    double answer = 0.0;
};

/// Budget accounting for sequential composition: charges add up linearly and
/// must never exceed the total. Single-writer; concurrent use of one ledger
/// is not supported.
class BudgetLedger {
public:
    explicit BudgetLedger(double total_epsilon);

    double total() const { return total_; }
    double spent() const { return spent_; }
    double remaining() const { return total_ - spent_; }
    const std::vector<LedgerEntry>& log() const { return log_; }

    /// Appends the entry; throws a budget error (leaving the ledger
    /// untouched) when the charge would exceed the total.
    void charge(LedgerEntry entry);

    /// Append-only text file: `total_epsilon=..` header, then one
    /// tab-separated record per query (timestamp, query, epsilon, answer).
    static BudgetLedger load_file(const std::string& path);
    void save_file(const std::string& path) const;

private:
    double total_;
    double spent_ = 0.0;
    std::vector<LedgerEntry> log_;
};

/// Writes the header of a fresh ledger file.
void create_ledger_file(const std::string& path, double total_epsilon);

/// Appends one entry to an existing ledger file.
void append_ledger_entry(const std::string& path, const LedgerEntry& entry);

struct DpAnswer {
    double value = 0.0;
    double scale = 0.0;
    double epsilon = 0.0;
    LedgerEntry entry;
};

/// f(t) + Laplace(0, delta_f / epsilon); charges epsilon against the ledger
/// first and refuses (budget error, ledger unchanged) when it cannot.
DpAnswer dp_answer(const Table& table,
                   const DpQuery& query,
                   double epsilon,
                   BudgetLedger& ledger,
                   std::uint64_t seed);

/// Two tables differing by exactly one record (added or removed).
struct NeighborPair {
    Table d1;
    Table d2;
};

/// Validates the neighbor invariant: identical schemas, record counts off by
/// one, and the smaller table's records a sub-multiset of the larger's.
void validate_neighbors(const NeighborPair& pair);

struct IndistinguishabilityReport {
    double epsilon = 0.0;
    std::size_t trials = 0;
    double bin_width = 0.0;
    std::size_t mass_floor = 0;
    std::size_t bins_compared = 0;
    double max_ratio = 0.0;       // largest per-bin frequency ratio seen
    double max_allowed = 0.0;     // e^eps * (1 + slack) on the worst bin
    bool pass = false;

    std::string render() const;
};

/// Empirical check of the e^eps bound on outcome frequencies: runs the
/// mechanism `trials` times per table, bins the outcomes, and compares
/// per-bin frequency ratios wherever both bins hold at least 50 samples,
/// allowing sampling slack of 4*sqrt(1/c1 + 1/c2). The check can only
/// falsify, never prove, the bound (bins stand in for all outcome sets).
/// `noise_scale_factor` deliberately mis-scales the noise; it exists so the
/// checker itself can be validated against a broken mechanism.
IndistinguishabilityReport check_indistinguishability(const NeighborPair& pair,
                                                      const DpQuery& query,
                                                      double epsilon,
                                                      std::size_t trials,
                                                      double bin_width,
                                                      std::uint64_t seed,
                                                      double noise_scale_factor = 1.0);

} // namespace sdc
