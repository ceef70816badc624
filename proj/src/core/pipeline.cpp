#include "core/pipeline.hpp"

#include "core/error.hpp"
#include "core/hierarchy.hpp"
#include "core/nonperturbative.hpp"
#include "core/perturbative.hpp"
#include "core/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace sdc {

namespace {

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& part : split(text, ',')) {
        auto t = trim(part);
        if (!t.empty()) {
            out.emplace_back(t);
        }
    }
    return out;
}

std::uint64_t parse_seed_value(std::string_view text, const std::string& where) {
    std::uint64_t value = 0;
    auto t = trim(text);
    if (t.empty()) {
        throw_usage(where + ": empty seed");
    }
    for (char c : t) {
        if (c < '0' || c > '9') {
            throw_usage(where + ": seed must be a non-negative integer, got '" + std::string(t) + "'");
        }
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return value;
}

std::size_t parse_count(const std::string& text, const std::string& where) {
    auto n = parse_number(trim(text));
    if (!n || *n < 0 || *n != std::floor(*n)) {
        throw_usage(where + ": expected a non-negative integer, got '" + text + "'");
    }
    return static_cast<std::size_t>(*n);
}

} // namespace

PipelineConfig PipelineConfig::parse(std::istream& in, const std::string& origin) {
    PipelineConfig config;
    PipelineStep* current = nullptr;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        std::string where = origin + ":" + std::to_string(line_no);

        size_t colon = body.find(':');
        size_t equals = body.find('=');
        if (colon != std::string_view::npos && (equals == std::string_view::npos || colon < equals)) {
            std::string key{trim(body.substr(0, colon))};
            std::string value{trim(body.substr(colon + 1))};
            if (key == "step") {
                if (value.empty()) {
                    throw_usage(where + ": step needs a method name");
                }
                PipelineStep step;
                step.method = value;
                step.index = config.steps.size();
                config.steps.push_back(std::move(step));
                current = &config.steps.back();
                continue;
            }
            if (current) {
                throw_usage(where + ": header key '" + key + "' after the first step");
            }
            if (key == "input") {
                config.input = value;
            } else if (key == "schema") {
                config.schema = value;
            } else if (key == "output") {
                config.output = value;
            } else if (key == "report") {
                config.report = value;
            } else if (key == "seed") {
                config.seed = parse_seed_value(value, where);
                config.seed_set = true;
            } else if (key == "report_quasi") {
                config.report_quasi = parse_name_list(value);
            } else if (key == "report_sensitive") {
                config.report_sensitive = value;
            } else if (key == "report_k") {
                config.report_k = parse_count(value, where);
            } else if (key == "report_l") {
                config.report_l = parse_count(value, where);
            } else if (key == "report_label") {
                config.report_label = value;
            } else if (key == "report_features") {
                config.report_features = parse_name_list(value);
            } else if (key == "report_folds") {
                config.report_folds = parse_count(value, where);
            } else {
                throw_usage(where + ": unknown header key '" + key + "'");
            }
            continue;
        }

        if (equals != std::string_view::npos) {
            if (!current) {
                throw_usage(where + ": parameter outside a step block");
            }
            std::string key{trim(body.substr(0, equals))};
            std::string value{trim(body.substr(equals + 1))};
            if (key.empty()) {
                throw_usage(where + ": empty parameter name");
            }
            if (!current->params.emplace(key, value).second) {
                throw_usage(where + ": duplicate parameter '" + key + "'");
            }
            continue;
        }
        throw_usage(where + ": expected 'key: value', 'step: method' or 'param = value'");
    }

    if (config.input.empty() || config.schema.empty()) {
        throw_usage(origin + ": config needs input: and schema:");
    }
    return config;
}

PipelineConfig PipelineConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw_usage("cannot open config file '" + path + "'");
    }
    return parse(in, path);
}

// --- step parameter access ---------------------------------------------------

namespace {

class Params {
public:
    Params(const PipelineStep& step) : step_(step) {}

    const std::string* find(const std::string& key) const {
        auto it = step_.params.find(key);
        return it == step_.params.end() ? nullptr : &it->second;
    }
    std::string require(const std::string& key) const {
        const std::string* v = find(key);
        if (!v) {
            throw_usage("step " + std::to_string(step_.index + 1) + " (" + step_.method +
                        "): missing parameter '" + key + "'");
        }
        used_.insert(key);
        return *v;
    }
    std::optional<std::string> optional(const std::string& key) const {
        const std::string* v = find(key);
        if (!v) {
            return std::nullopt;
        }
        used_.insert(key);
        return *v;
    }
    double require_number(const std::string& key) const {
        auto v = parse_number(require(key));
        if (!v) {
            throw_usage(context() + ": parameter '" + key + "' must be numeric");
        }
        return *v;
    }
    std::optional<double> optional_number(const std::string& key) const {
        auto v = optional(key);
        if (!v) {
            return std::nullopt;
        }
        auto n = parse_number(*v);
        if (!n) {
            throw_usage(context() + ": parameter '" + key + "' must be numeric");
        }
        return n;
    }
    std::vector<std::size_t> optional_rows(const std::string& key) const {
        auto v = optional(key);
        std::vector<std::size_t> rows;
        if (!v) {
            return rows;
        }
        for (const auto& part : split(*v, ',')) {
            auto t = trim(part);
            if (t.empty()) {
                continue;
            }
            auto n = parse_number(t);
            if (!n || *n < 0 || *n != std::floor(*n)) {
                throw_usage(context() + ": '" + key + "' expects 0-based record indices");
            }
            rows.push_back(static_cast<std::size_t>(*n));
        }
        return rows;
    }
    void reject_unknown() const {
        for (const auto& [key, value] : step_.params) {
            if (!used_.count(key)) {
                throw_usage(context() + ": unknown parameter '" + key + "'");
            }
        }
    }
    std::string context() const {
        return "step " + std::to_string(step_.index + 1) + " (" + step_.method + ")";
    }

private:
    const PipelineStep& step_;
    mutable std::set<std::string> used_;
};

const AttributeMeta& require_attr(const Schema& schema, const std::string& name,
                                  const std::string& context) {
    for (const auto& meta : schema) {
        if (meta.name == name) {
            return meta;
        }
    }
    throw_usage(context + ": unknown attribute '" + name + "'");
}

const AttributeMeta& require_continuous(const Schema& schema, const std::string& name,
                                        const std::string& context) {
    const AttributeMeta& meta = require_attr(schema, name, context);
    if (meta.data_class != DataClass::continuous) {
        throw_usage(context + ": attribute '" + name + "' must be continuous");
    }
    return meta;
}

std::optional<Threshold> parse_threshold(const std::optional<std::string>& text,
                                         const std::string& context) {
    if (!text) {
        return std::nullopt;
    }
    std::string_view t = trim(*text);
    Threshold out;
    if (!t.empty() && (t.front() == 'p' || t.front() == 'P')) {
        auto v = parse_number(t.substr(1));
        if (v && *v >= 0.0 && *v <= 100.0) {
            out.value = *v;
            out.percentile = true;
            return out;
        }
    }
    auto v = parse_number(t);
    if (!v) {
        throw_usage(context + ": threshold must be a number or pNN percentile, got '" +
                    std::string(t) + "'");
    }
    out.value = *v;
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const std::string& text,
                                                             const std::string& context) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& part : split(text, ',')) {
        auto t = trim(part);
        if (t.empty()) {
            continue;
        }
        auto ab = split(t, ':');
        if (ab.size() != 2) {
            throw_usage(context + ": pairs expect 'a:b,c:d' row indices");
        }
        auto a = parse_number(trim(ab[0]));
        auto b = parse_number(trim(ab[1]));
        if (!a || !b || *a < 0 || *b < 0 || *a != std::floor(*a) || *b != std::floor(*b)) {
            throw_usage(context + ": pairs expect 0-based record indices");
        }
        pairs.emplace_back(static_cast<std::size_t>(*a), static_cast<std::size_t>(*b));
    }
    return pairs;
}

} // namespace

void validate_step(const PipelineStep& step, const Schema& schema) {
    Params p(step);
    const std::string ctx = p.context();
    const std::string& m = step.method;

    if (m == "suppress_cells") {
        const AttributeMeta& meta = require_attr(schema, p.require("attr"), ctx);
        int modes = 0;
        if (p.optional("rows")) {
            p.optional_rows("rows");
            ++modes;
        }
        if (p.optional("equals")) {
            ++modes;
        }
        if (auto e = p.optional("extremes")) {
            if (*e != "both" && *e != "high" && *e != "low") {
                throw_usage(ctx + ": extremes must be both, high or low");
            }
            if (meta.data_class != DataClass::continuous) {
                throw_usage(ctx + ": extremes need a continuous attribute");
            }
            ++modes;
        }
        if (modes != 1) {
            throw_usage(ctx + ": exactly one of rows=, equals=, extremes= is required");
        }
    } else if (m == "suppress_records") {
        p.require("rows");
        p.optional_rows("rows");
    } else if (m == "generalize") {
        const AttributeMeta& meta = require_attr(schema, p.require("attr"), ctx);
        std::size_t level = parse_count(p.require("level"), ctx);
        if (!meta.hierarchy) {
            throw_usage(ctx + ": attribute '" + meta.name + "' has no hierarchy");
        }
        if (level > meta.hierarchy->depth()) {
            throw_usage(ctx + ": level " + std::to_string(level) + " exceeds hierarchy depth " +
                        std::to_string(meta.hierarchy->depth()));
        }
    } else if (m == "enforce_k_anonymity") {
        auto quasi = parse_name_list(p.require("quasi"));
        if (quasi.empty()) {
            throw_usage(ctx + ": quasi must name at least one attribute");
        }
        for (const auto& name : quasi) {
            require_attr(schema, name, ctx);
        }
        if (parse_count(p.require("k"), ctx) < 2) {
            throw_usage(ctx + ": k must be at least 2");
        }
    } else if (m == "add_noise" || m == "multiply_noise" || m == "log_multiply_noise") {
        require_continuous(schema, p.require("attr"), ctx);
        auto sigma = p.optional_number("sigma");
        auto variance = p.optional_number("variance");
        if (sigma && variance) {
            throw_usage(ctx + ": give sigma= or variance=, not both");
        }
        if ((sigma && *sigma < 0.0) || (variance && *variance < 0.0)) {
            throw_usage(ctx + ": noise spread must be non-negative");
        }
        if (m != "add_noise" && !sigma && !variance) {
            throw_usage(ctx + ": sigma= or variance= is required");
        }
        if (m == "log_multiply_noise") {
            p.optional_number("mu");
        }
    } else if (m == "swap_values") {
        auto attrs = parse_name_list(p.require("attrs"));
        if (attrs.empty()) {
            throw_usage(ctx + ": attrs must name at least one attribute");
        }
        for (const auto& name : attrs) {
            require_attr(schema, name, ctx);
        }
        auto pairs = parse_pairs(p.require("pairs"), ctx);
        std::set<std::size_t> used;
        for (const auto& [a, b] : pairs) {
            if (!used.insert(a).second || !used.insert(b).second) {
                throw_usage(ctx + ": swap pairs overlap");
            }
        }
    } else if (m == "random_swap") {
        auto attrs = parse_name_list(p.require("attrs"));
        if (attrs.empty()) {
            throw_usage(ctx + ": attrs must name at least one attribute");
        }
        for (const auto& name : attrs) {
            require_attr(schema, name, ctx);
        }
        double fraction = p.require_number("fraction");
        if (!(fraction >= 0.0 && fraction <= 1.0)) {
            throw_usage(ctx + ": fraction must lie in [0, 1]");
        }
    } else if (m == "code_extremes") {
        require_continuous(schema, p.require("attr"), ctx);
        auto low = parse_threshold(p.optional("low"), ctx);
        auto high = parse_threshold(p.optional("high"), ctx);
        if (!low && !high) {
            throw_usage(ctx + ": at least one of low=, high= is required");
        }
        if (low && high && !low->percentile && !high->percentile && low->value > high->value) {
            throw_usage(ctx + ": low threshold exceeds high threshold");
        }
        p.optional("low_label");
        p.optional("high_label");
    } else if (m == "round_values") {
        require_continuous(schema, p.require("attr"), ctx);
        if (!(p.require_number("base") > 0.0)) {
            throw_usage(ctx + ": base must be positive");
        }
    } else if (m == "recode_ranges") {
        require_continuous(schema, p.require("attr"), ctx);
        auto breaks = parse_name_list(p.require("breaks"));
        std::vector<double> breakpoints;
        for (const auto& b : breaks) {
            auto v = parse_number(b);
            if (!v) {
                throw_usage(ctx + ": breaks must be numbers");
            }
            breakpoints.push_back(*v);
        }
        if (breakpoints.size() < 2) {
            throw_usage(ctx + ": at least two breakpoints are required");
        }
        for (std::size_t i = 1; i < breakpoints.size(); ++i) {
            if (!(breakpoints[i - 1] < breakpoints[i])) {
                throw_usage(ctx + ": breaks must be strictly increasing");
            }
        }
        auto labels = split(p.require("labels"), '|');
        if (labels.size() != breakpoints.size() - 1) {
            throw_usage(ctx + ": expected " + std::to_string(breakpoints.size() - 1) +
                        " labels separated by '|', got " + std::to_string(labels.size()));
        }
    } else if (m == "blank_and_impute") {
        require_attr(schema, p.require("attr"), ctx);
        p.require("rows");
        p.optional_rows("rows");
    } else if (m == "blur") {
        require_continuous(schema, p.require("attr"), ctx);
        for (const auto& name : parse_name_list(p.require("quasi"))) {
            require_attr(schema, name, ctx);
        }
        auto rows = p.optional("rows");
        if (rows && *rows != "all") {
            p.optional_rows("rows");
        }
    } else if (m == "synthesize") {
        // no parameters
    } else {
        throw_usage(ctx + ": unknown method '" + m + "'");
    }
    p.reject_unknown();
}

Table apply_step(const Table& table, const PipelineStep& step, std::uint64_t sub_seed) {
    Params p(step);
    const std::string ctx = p.context();
    const std::string& m = step.method;

    if (m == "suppress_cells") {
        std::string attr = p.require("attr");
        std::size_t col = table.attribute_index(attr);
        if (auto rows_text = p.optional("rows")) {
            auto rows = p.optional_rows("rows");
            std::set<std::size_t> selected(rows.begin(), rows.end());
            for (std::size_t r : selected) {
                if (r >= table.record_count()) {
                    throw_runtime(ctx + ": record index " + std::to_string(r) + " out of range");
                }
            }
            return suppress_cells(table, [&](std::size_t r, const AttributeMeta& meta, const Cell&) {
                return meta.name == attr && selected.count(r) > 0;
            });
        }
        if (auto value = p.optional("equals")) {
            return suppress_cells(table, [&](std::size_t, const AttributeMeta& meta, const Cell& cell) {
                return meta.name == attr && cell && *cell == *value;
            });
        }
        std::string mode = *p.optional("extremes");
        ColumnStats stats = column_stats(table, attr);
        std::optional<double> lo = stats.min, hi = stats.max;
        return suppress_cells(table, [&](std::size_t r, const AttributeMeta& meta, const Cell& cell) {
            if (meta.name != attr || !cell) {
                return false;
            }
            double v = *table.numeric(r, col);
            bool is_low = lo && v == *lo && (mode == "both" || mode == "low");
            bool is_high = hi && v == *hi && (mode == "both" || mode == "high");
            return is_low || is_high;
        });
    }
    if (m == "suppress_records") {
        return suppress_records(table, p.optional_rows("rows"));
    }
    if (m == "generalize") {
        return generalize(table, p.require("attr"), parse_count(p.require("level"), ctx));
    }
    if (m == "enforce_k_anonymity") {
        auto [result, report] =
            enforce_k_anonymity(table, parse_name_list(p.require("quasi")),
                                parse_count(p.require("k"), ctx));
        return result;
    }
    if (m == "add_noise" || m == "multiply_noise" || m == "log_multiply_noise") {
        NoiseSpec spec;
        spec.seed = sub_seed;
        if (auto sigma = p.optional_number("sigma")) {
            spec.variance = *sigma * *sigma;
        } else if (auto variance = p.optional_number("variance")) {
            spec.variance = *variance;
        }
        std::string attr = p.require("attr");
        if (m == "add_noise") {
            spec.mean = 0.0;
            return add_noise(table, attr, spec);
        }
        if (m == "multiply_noise") {
            spec.mean = 1.0;
            return multiply_noise(table, attr, spec);
        }
        spec.mean = p.optional_number("mu").value_or(0.0);
        return log_multiply_noise(table, attr, spec);
    }
    if (m == "swap_values") {
        return swap_values(table, parse_name_list(p.require("attrs")),
                           parse_pairs(p.require("pairs"), ctx));
    }
    if (m == "random_swap") {
        return random_swap(table, parse_name_list(p.require("attrs")),
                           p.require_number("fraction"), sub_seed);
    }
    if (m == "code_extremes") {
        return code_extremes(table, p.require("attr"), parse_threshold(p.optional("low"), ctx),
                             parse_threshold(p.optional("high"), ctx), p.optional("low_label"),
                             p.optional("high_label"));
    }
    if (m == "round_values") {
        return round_values(table, p.require("attr"), p.require_number("base"));
    }
    if (m == "recode_ranges") {
        RecodeSpec spec;
        spec.attribute = p.require("attr");
        for (const auto& b : parse_name_list(p.require("breaks"))) {
            spec.breakpoints.push_back(*parse_number(b));
        }
        for (const auto& l : split(p.require("labels"), '|')) {
            spec.labels.emplace_back(trim(l));
        }
        return recode_ranges(table, spec);
    }
    if (m == "blank_and_impute") {
        return blank_and_impute(table, p.require("attr"), p.optional_rows("rows"));
    }
    if (m == "blur") {
        std::vector<std::size_t> rows;
        auto rows_text = p.optional("rows");
        if (!rows_text || *rows_text == "all") {
            for (std::size_t r = 0; r < table.record_count(); ++r) {
                rows.push_back(r);
            }
        } else {
            rows = p.optional_rows("rows");
        }
        return blur(table, p.require("attr"), parse_name_list(p.require("quasi")), rows);
    }
    if (m == "synthesize") {
        return synthesize(table, sub_seed);
    }
    throw_usage(ctx + ": unknown method '" + m + "'");
}

PipelineOutcome run_pipeline(const PipelineConfig& config, const Table& input) {
    for (const auto& step : config.steps) {
        validate_step(step, input.schema());
    }

    std::ostringstream summary;
    Table current = input;
    for (const auto& step : config.steps) {
        current = apply_step(current, step, config.seed + step.index);
        summary << "step " << (step.index + 1) << ": " << step.method << " -> "
                << current.record_count() << " records\n";
    }

    ReportConfig rc;
    rc.quasi = config.report_quasi;
    rc.sensitive = config.report_sensitive;
    rc.k = config.report_k;
    rc.l = config.report_l;
    rc.gauge_label = config.report_label;
    rc.gauge_features = config.report_features;
    rc.gauge_folds = config.report_folds;
    rc.seed = config.seed;

    PipelineOutcome outcome{current, build_report(input, current, rc), summary.str()};
    return outcome;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& explicit_seed) {
    if (explicit_seed) {
        return *explicit_seed;
    }
    if (const char* env = std::getenv("SDC_SEED")) {
        return parse_seed_value(env, "SDC_SEED");
    }
    return 0;
}

std::string run_pipeline_files(const PipelineConfig& config,
                               const std::optional<std::uint64_t>& seed_override) {
    PipelineConfig effective = config;
    if (seed_override) {
        effective.seed = *seed_override;
        effective.seed_set = true;
    } else if (!effective.seed_set) {
        effective.seed = resolve_seed(std::nullopt);
        effective.seed_set = true;
    }
    if (effective.output.empty()) {
        throw_usage("config needs output: to run a pipeline");
    }

    Schema schema = load_schema_file(effective.schema);
    Table input = load_table_file(effective.input, schema);
    PipelineOutcome outcome = run_pipeline(effective, input);

    // Output first, report last; on any write failure remove what was written.
    std::vector<std::string> written;
    try {
        emit_table_file(outcome.output, effective.output);
        written.push_back(effective.output);
        if (!effective.report.empty()) {
            std::ofstream out(effective.report, std::ios::binary);
            if (!out) {
                throw_runtime("cannot open report file '" + effective.report + "' for writing");
            }
            out << outcome.report.render();
            out.flush();
            if (!out) {
                throw_runtime("write failure on report file '" + effective.report + "'");
            }
            written.push_back(effective.report);
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& path : written) {
            std::filesystem::remove(path, ec);
        }
        std::filesystem::remove(effective.output, ec);
        throw;
    }

    std::ostringstream summary;
    summary << outcome.summary;
    summary << "wrote " << effective.output;
    if (!effective.report.empty()) {
        summary << " and " << effective.report;
    }
    summary << " (seed " << effective.seed << ")\n";
    return summary.str();
}

// --- iris demo -----------------------------------------------------------------

namespace {

const std::vector<std::string> kIrisAttrs = {"sepal_length", "sepal_width", "petal_length",
                                             "petal_width"};

Schema iris_schema() {
    Schema schema;
    for (const auto& name : kIrisAttrs) {
        schema.push_back(AttributeMeta{name, AttributeKind::quasi, DataClass::continuous,
                                       nullptr, std::nullopt});
    }
    schema.push_back(AttributeMeta{"species", AttributeKind::sensitive, DataClass::categorical,
                                   nullptr, std::nullopt});
    return schema;
}

Table load_iris(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) {
        throw_usage("cannot open iris file '" + path + "'");
    }
    std::string first_line;
    std::getline(probe, first_line);
    probe.close();

    Schema schema = iris_schema();
    auto first_field = split(first_line, ',');
    bool headerless = !first_field.empty() && parse_number(trim(first_field.front())).has_value();
    if (!headerless) {
        return load_table_file(path, schema);
    }
    // UCI iris.data ships without a header; prepend the canonical one.
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffered;
    buffered << "sepal_length,sepal_width,petal_length,petal_width,species\n" << in.rdbuf();
    std::istringstream stream(buffered.str());
    return load_table(stream, schema);
}

} // namespace

std::string iris_demo(const std::string& iris_csv, const std::string& out_dir,
                      std::uint64_t seed, double sigma_scale) {
    if (sigma_scale < 0.0) {
        throw_usage("sigma scale must be non-negative");
    }
    Table original = load_iris(iris_csv);

    std::ostringstream summary;
    if (original.record_count() != 150) {
        summary << "warning: expected 150 records, found " << original.record_count() << "\n";
    }

    Table privatized = original;
    for (std::size_t i = 0; i < kIrisAttrs.size(); ++i) {
        ColumnStats stats = column_stats(original, kIrisAttrs[i]);
        double sigma = sigma_scale * stats.sample_std.value_or(0.0);
        NoiseSpec spec;
        spec.mean = 0.0;
        spec.variance = sigma * sigma;
        spec.seed = seed + i;
        privatized = add_noise(privatized, kIrisAttrs[i], spec);
    }

    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);
    scatter_export_file(original, "petal_length", "petal_width", "species",
                        (dir / "original_scatter.csv").string());
    scatter_export_file(privatized, "petal_length", "petal_width", "species",
                        (dir / "privatized_scatter.csv").string());
    emit_table_file(privatized, (dir / "privatized.csv").string());

    ReportConfig rc;
    rc.gauge_label = "species";
    rc.gauge_features = {"petal_length", "petal_width"};
    rc.gauge_folds = 0; // leave-one-out
    rc.seed = seed;
    UtilityReport report = build_report(original, privatized, rc);
    {
        std::ofstream out(dir / "report.txt", std::ios::binary);
        if (!out) {
            throw_runtime("cannot write iris report");
        }
        out << report.render();
    }

    summary << "records: " << original.record_count() << "\n";
    summary << "gauge baseline " << format_number(report.gauge->baseline_accuracy)
            << " -> privatized " << format_number(report.gauge->privatized_accuracy) << "\n";
    summary << "outputs in " << out_dir << ": original_scatter.csv, privatized_scatter.csv, "
            << "privatized.csv, report.txt\n";
    return summary.str();
}

} // namespace sdc
