#include "core/dp.hpp"

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/text.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace sdc {

// --- row filter ---------------------------------------------------------------

namespace {

std::string_view op_text(RowFilter::Op op) {
    switch (op) {
    case RowFilter::Op::eq: return "==";
    case RowFilter::Op::ne: return "!=";
    case RowFilter::Op::lt: return "<";
    case RowFilter::Op::le: return "<=";
    case RowFilter::Op::gt: return ">";
    case RowFilter::Op::ge: return ">=";
    }
    return "==";
}

std::optional<RowFilter::Op> parse_op(std::string_view text) {
    if (text == "==") return RowFilter::Op::eq;
    if (text == "!=") return RowFilter::Op::ne;
    if (text == "<") return RowFilter::Op::lt;
    if (text == "<=") return RowFilter::Op::le;
    if (text == ">") return RowFilter::Op::gt;
    if (text == ">=") return RowFilter::Op::ge;
    return std::nullopt;
}

} // namespace

bool RowFilter::matches(const Table& table, std::size_t row) const {
    std::size_t col = table.attribute_index(attribute);
    const Cell& cell = table.cell(row, col);
    if (!cell) {
        return false;
    }
    if (table.schema()[col].data_class == DataClass::continuous) {
        auto lhs = table.numeric(row, col);
        auto rhs = parse_number(literal);
        if (!rhs) {
            throw_usage("filter literal '" + literal + "' is not numeric");
        }
        switch (op) {
        case Op::eq: return *lhs == *rhs;
        case Op::ne: return *lhs != *rhs;
        case Op::lt: return *lhs < *rhs;
        case Op::le: return *lhs <= *rhs;
        case Op::gt: return *lhs > *rhs;
        case Op::ge: return *lhs >= *rhs;
        }
    }
    switch (op) {
    case Op::eq: return *cell == literal;
    case Op::ne: return *cell != literal;
    default:
        throw_usage("categorical filters support only == and !=");
    }
    return false;
}

std::string RowFilter::render() const {
    return attribute + " " + std::string(op_text(op)) + " " + literal;
}

// --- query ----------------------------------------------------------------------

DpQuery DpQuery::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) {
        tokens.push_back(tok);
    }
    if (tokens.empty()) {
        throw_usage("empty query");
    }

    DpQuery q;
    std::string head = tokens[0];
    std::size_t next = 1;

    auto take_attr = [&](std::string_view kind_name, std::string body) {
        // Accept "sum(Attr)" in one token or "sum (Attr)" split across two.
        if (body.empty() && next < tokens.size()) {
            body = tokens[next++];
        }
        if (body.size() < 3 || body.front() != '(' || body.back() != ')') {
            throw_usage(std::string(kind_name) + " expects an attribute: " +
                        std::string(kind_name) + "(Attr)");
        }
        return body.substr(1, body.size() - 2);
    };

    if (head == "count") {
        q.kind = QueryKind::count;
    } else if (head.rfind("sum", 0) == 0) {
        q.kind = QueryKind::sum;
        q.attribute = take_attr("sum", head.substr(3));
    } else if (head.rfind("mean", 0) == 0) {
        q.kind = QueryKind::mean;
        q.attribute = take_attr("mean", head.substr(4));
    } else {
        throw_usage("unknown query kind '" + head + "' (expected count, sum or mean)");
    }

    while (next < tokens.size()) {
        if (tokens[next] == "hint") {
            if (next + 1 >= tokens.size()) {
                throw_usage("hint expects a record count");
            }
            auto n = parse_number(tokens[next + 1]);
            if (!n || *n < 1 || *n != std::floor(*n)) {
                throw_usage("hint expects a positive integer, got '" + tokens[next + 1] + "'");
            }
            q.n_hint = static_cast<std::size_t>(*n);
            next += 2;
        } else if (tokens[next] == "where") {
            if (next + 4 > tokens.size()) {
                throw_usage("where expects: where Attr OP value");
            }
            RowFilter f;
            f.attribute = tokens[next + 1];
            auto op = parse_op(tokens[next + 2]);
            if (!op) {
                throw_usage("unknown comparison '" + tokens[next + 2] + "'");
            }
            f.op = *op;
            f.literal = tokens[next + 3];
            q.filter = std::move(f);
            next += 4;
        } else {
            throw_usage("unexpected token '" + tokens[next] + "' in query");
        }
    }
    return q;
}

std::string DpQuery::render() const {
    std::string out;
    switch (kind) {
    case QueryKind::count: out = "count"; break;
    case QueryKind::sum: out = "sum(" + attribute + ")"; break;
    case QueryKind::mean: out = "mean(" + attribute + ")"; break;
    }
    if (n_hint) {
        out += " hint " + std::to_string(*n_hint);
    }
    if (filter) {
        out += " where " + filter->render();
    }
    return out;
}

DpQuery bind_query(const DpQuery& query, const Table& table) {
    DpQuery bound = query;
    if (bound.kind != QueryKind::count) {
        std::size_t col = table.attribute_index(bound.attribute);
        const AttributeMeta& meta = table.schema()[col];
        if (meta.data_class != DataClass::continuous) {
            throw_usage("attribute '" + bound.attribute + "' is categorical; sum/mean need a continuous one");
        }
        if (!bound.bounds) {
            bound.bounds = meta.bounds;
        }
        if (!bound.bounds) {
            throw_usage("attribute '" + bound.attribute +
                        "' has no declared bounds; sum/mean queries require them");
        }
    }
    if (bound.kind == QueryKind::mean && !bound.n_hint) {
        throw_usage("mean queries require a public record-count hint");
    }
    if (bound.filter) {
        table.attribute_index(bound.filter->attribute);
    }
    return bound;
}

Sensitivity sensitivity(const DpQuery& query, std::size_t n_hint) {
    switch (query.kind) {
    case QueryKind::count:
        return {1.0};
    case QueryKind::sum:
        if (!query.bounds) {
            throw_usage("sum sensitivity requires bounds");
        }
        return {std::max(std::fabs(query.bounds->lo), std::fabs(query.bounds->hi))};
    case QueryKind::mean:
        if (!query.bounds) {
            throw_usage("mean sensitivity requires bounds");
        }
        if (n_hint == 0) {
            throw_usage("mean sensitivity requires a positive n_hint");
        }
        return {(query.bounds->hi - query.bounds->lo) / static_cast<double>(n_hint)};
    }
    throw_usage("unknown query kind");
}

double laplace_scale(const Sensitivity& s, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw_usage("epsilon must be positive");
    }
    if (s.delta_f < 0.0) {
        throw_usage("sensitivity must be non-negative");
    }
    return s.delta_f / epsilon;
}

double sample_laplace(double scale, std::uint64_t seed) {
    Rng rng(seed);
    return rng.laplace(scale);
}

double evaluate_query(const Table& table, const DpQuery& query) {
    double sum = 0.0;
    std::size_t matched = 0;
    std::optional<std::size_t> col;
    if (query.kind != QueryKind::count) {
        col = table.attribute_index(query.attribute);
    }
    for (std::size_t r = 0; r < table.record_count(); ++r) {
        if (query.filter && !query.filter->matches(table, r)) {
            continue;
        }
        if (query.kind == QueryKind::count) {
            ++matched;
            continue;
        }
        auto v = table.numeric(r, *col);
        if (!v) {
            continue;
        }
        double x = std::clamp(*v, query.bounds->lo, query.bounds->hi);
        sum += x;
        ++matched;
    }
    switch (query.kind) {
    case QueryKind::count:
        return static_cast<double>(matched);
    case QueryKind::sum:
        return sum;
    case QueryKind::mean:
        if (matched == 0) {
            return (query.bounds->lo + query.bounds->hi) / 2.0;
        }
        return sum / static_cast<double>(matched);
    }
    return 0.0;
}

// --- ledger ---------------------------------------------------------------------

BudgetLedger::BudgetLedger(double total_epsilon) : total_(total_epsilon) {
    if (!(total_epsilon > 0.0)) {
        throw_usage("ledger total epsilon must be positive");
    }
}

void BudgetLedger::charge(LedgerEntry entry) {
    if (!(entry.epsilon > 0.0)) {
        throw_usage("charged epsilon must be positive");
    }
    if (spent_ + entry.epsilon > total_) {
        throw_budget("budget exhausted: spent " + format_number(spent_) + " of " +
                     format_number(total_) + ", refusing a further " +
                     format_number(entry.epsilon));
    }
    spent_ += entry.epsilon;
    log_.push_back(std::move(entry));
}

BudgetLedger BudgetLedger::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw_usage("cannot open ledger file '" + path + "'");
    }
    std::optional<double> total;
    std::vector<LedgerEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line.rfind("total_epsilon=", 0) == 0) {
            total = parse_number(line.substr(14));
            if (!total) {
                throw_usage(path + ":" + std::to_string(line_no) + ": bad total_epsilon");
            }
            continue;
        }
        auto fields = split(line, '\t');
        if (fields.size() != 4) {
            throw_usage(path + ":" + std::to_string(line_no) +
                        ": expected timestamp, query, epsilon, answer");
        }
        LedgerEntry e;
        e.timestamp = fields[0];
        e.query = fields[1];
        auto eps = parse_number(fields[2]);
        auto ans = parse_number(fields[3]);
        if (!eps || !ans) {
            throw_usage(path + ":" + std::to_string(line_no) + ": bad epsilon or answer");
        }
        e.epsilon = *eps;
        e.answer = *ans;
        entries.push_back(std::move(e));
    }
    if (!total) {
        throw_usage("ledger file '" + path + "' has no total_epsilon header");
    }
    BudgetLedger ledger(*total);
    for (auto& e : entries) {
        ledger.charge(std::move(e));
    }
    return ledger;
}

void BudgetLedger::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw_runtime("cannot open ledger file '" + path + "' for writing");
    }
    out << "# sdc dp budget ledger (append-only)\n";
    out << "total_epsilon=" << format_number(total_) << '\n';
    for (const auto& e : log_) {
        out << e.timestamp << '\t' << e.query << '\t' << format_number(e.epsilon) << '\t'
            << format_number(e.answer) << '\n';
    }
    if (!out) {
        throw_runtime("write failure on ledger file '" + path + "'");
    }
}

void create_ledger_file(const std::string& path, double total_epsilon) {
    BudgetLedger(total_epsilon).save_file(path);
}

void append_ledger_entry(const std::string& path, const LedgerEntry& entry) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) {
        throw_runtime("cannot open ledger file '" + path + "' for appending");
    }
    out << entry.timestamp << '\t' << entry.query << '\t' << format_number(entry.epsilon) << '\t'
        << format_number(entry.answer) << '\n';
    if (!out) {
        throw_runtime("write failure on ledger file '" + path + "'");
    }
}

namespace {

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

DpAnswer dp_answer(const Table& table,
                   const DpQuery& query,
                   double epsilon,
                   BudgetLedger& ledger,
                   std::uint64_t seed) {
    if (!(epsilon > 0.0)) {
        throw_usage("epsilon must be positive");
    }
    DpQuery bound = bind_query(query, table);
    if (ledger.spent() + epsilon > ledger.total()) {
        throw_budget("budget exhausted: remaining " + format_number(ledger.remaining()) +
                     ", requested " + format_number(epsilon));
    }
    Sensitivity s = sensitivity(bound, bound.n_hint.value_or(0));
    double b = laplace_scale(s, epsilon);
    double truth = evaluate_query(table, bound);
    double noisy = truth + sample_laplace(b, seed);

    DpAnswer answer;
    answer.value = noisy;
    answer.scale = b;
    answer.epsilon = epsilon;
    answer.entry = LedgerEntry{utc_timestamp(), bound.render(), epsilon, noisy};
    ledger.charge(answer.entry);
    return answer;
}

// --- neighbor check ---------------------------------------------------------------

void validate_neighbors(const NeighborPair& pair) {
    const Table& a = pair.d1;
    const Table& b = pair.d2;
    if (a.attribute_count() != b.attribute_count()) {
        throw_usage("neighbor tables must share a schema");
    }
    for (std::size_t i = 0; i < a.attribute_count(); ++i) {
        if (a.schema()[i].name != b.schema()[i].name ||
            a.schema()[i].data_class != b.schema()[i].data_class) {
            throw_usage("neighbor tables must share a schema");
        }
    }
    std::size_t na = a.record_count();
    std::size_t nb = b.record_count();
    if (na + 1 != nb && nb + 1 != na) {
        throw_usage("neighbor tables must differ by exactly one record (got " +
                    std::to_string(na) + " and " + std::to_string(nb) + ")");
    }
    const Table& small = na < nb ? a : b;
    const Table& large = na < nb ? b : a;
    std::map<Row, long> counts;
    for (const auto& row : large.records()) {
        ++counts[row];
    }
    for (const auto& row : small.records()) {
        if (--counts[row] < 0) {
            throw_usage("neighbor tables must differ by exactly one record; the smaller "
                        "table holds a record the larger one lacks");
        }
    }
}

std::string IndistinguishabilityReport::render() const {
    std::ostringstream out;
    out << "empirical indistinguishability check\n";
    out << "  interpretation: outcome sets R are taken as histogram bins of the noisy\n";
    out << "  answers; the check is a falsifier, not a prover, of the e^eps bound.\n";
    out << "  epsilon=" << format_number(epsilon) << " trials=" << trials
        << " bin_width=" << format_number(bin_width) << " mass_floor=" << mass_floor << '\n';
    out << "  bins_compared=" << bins_compared << " max_ratio=" << format_number(max_ratio)
        << " max_allowed=" << format_number(max_allowed) << '\n';
    out << "  result: " << (pass ? "pass" : "FAIL") << '\n';
    return out.str();
}

IndistinguishabilityReport check_indistinguishability(const NeighborPair& pair,
                                                      const DpQuery& query,
                                                      double epsilon,
                                                      std::size_t trials,
                                                      double bin_width,
                                                      std::uint64_t seed,
                                                      double noise_scale_factor) {
    validate_neighbors(pair);
    if (trials < 10000) {
        throw_usage("at least 10000 trials are required");
    }
    if (!(bin_width > 0.0)) {
        throw_usage("bin width must be positive");
    }
    DpQuery q1 = bind_query(query, pair.d1);
    Sensitivity s = sensitivity(q1, q1.n_hint.value_or(0));
    double b = laplace_scale(s, epsilon) * noise_scale_factor;
    double f1 = evaluate_query(pair.d1, q1);
    double f2 = evaluate_query(pair.d2, bind_query(query, pair.d2));

    Rng rng(seed);
    std::map<long long, std::size_t> h1, h2;
    for (std::size_t t = 0; t < trials; ++t) {
        double outcome = f1 + rng.laplace(b);
        ++h1[static_cast<long long>(std::floor(outcome / bin_width))];
    }
    for (std::size_t t = 0; t < trials; ++t) {
        double outcome = f2 + rng.laplace(b);
        ++h2[static_cast<long long>(std::floor(outcome / bin_width))];
    }

    IndistinguishabilityReport report;
    report.epsilon = epsilon;
    report.trials = trials;
    report.bin_width = bin_width;
    report.mass_floor = 50;
    report.pass = true;
    double bound_at_max = 0.0;
    for (const auto& [bin, c1] : h1) {
        auto it = h2.find(bin);
        if (it == h2.end()) {
            continue;
        }
        std::size_t c2 = it->second;
        if (c1 < report.mass_floor || c2 < report.mass_floor) {
            continue;
        }
        ++report.bins_compared;
        double ratio = c1 > c2 ? static_cast<double>(c1) / static_cast<double>(c2)
                               : static_cast<double>(c2) / static_cast<double>(c1);
        double slack = 4.0 * std::sqrt(1.0 / static_cast<double>(c1) +
                                       1.0 / static_cast<double>(c2));
        double allowed = std::exp(epsilon) * (1.0 + slack);
        if (ratio > allowed) {
            report.pass = false;
        }
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            bound_at_max = allowed;
        }
    }
    report.max_allowed = bound_at_max;
    if (report.bins_compared == 0) {
        report.pass = false; // nothing comparable, refuse to claim a pass
    }
    return report;
}

} // namespace sdc
