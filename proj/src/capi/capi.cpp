#include "sdc/sdc.h"

#include "core/dp.hpp"
#include "core/error.hpp"
#include "core/metrics.hpp"
#include "core/nonperturbative.hpp"
#include "core/perturbative.hpp"
#include "core/pipeline.hpp"
#include "core/table.hpp"
#include "core/text.hpp"

#include <sys/file.h>
#include <fcntl.h>
#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <sstream>
#include <string>

struct sdc_schema {
    sdc::Schema value;
};

struct sdc_table {
    sdc::Table value;
};

namespace {

thread_local std::string g_last_error;

sdc_status status_of(const sdc::Error& e) {
    switch (e.kind()) {
    case sdc::ErrorKind::usage: return SDC_ERROR_USAGE;
    case sdc::ErrorKind::runtime: return SDC_ERROR_RUNTIME;
    case sdc::ErrorKind::budget: return SDC_ERROR_BUDGET;
    }
    return SDC_ERROR_RUNTIME;
}

char* copy_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out) {
        std::memcpy(out, text.c_str(), text.size() + 1);
    }
    return out;
}

template <typename Fn>
sdc_status guarded(Fn&& fn) {
    try {
        fn();
        return SDC_OK;
    } catch (const sdc::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SDC_ERROR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return SDC_ERROR_RUNTIME;
    }
}

sdc_status usage_failure(const char* message) {
    g_last_error = message;
    return SDC_ERROR_USAGE;
}

std::vector<std::string> to_strings(const char* const* items, size_t count) {
    std::vector<std::string> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        if (!items[i]) {
            sdc::throw_usage("NULL entry in string list");
        }
        out.emplace_back(items[i]);
    }
    return out;
}

std::vector<std::size_t> to_rows(const int64_t* rows, size_t count) {
    std::vector<std::size_t> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        if (rows[i] < 0) {
            sdc::throw_usage("record indices must be non-negative");
        }
        out.push_back(static_cast<std::size_t>(rows[i]));
    }
    return out;
}

// Exclusive advisory lock held for the lifetime of the object.
class FileLock {
public:
    explicit FileLock(const std::string& path) {
        fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
        if (fd_ < 0) {
            sdc::throw_runtime("cannot open lock target '" + path + "'");
        }
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            fd_ = -1;
            sdc::throw_runtime("cannot lock '" + path + "'");
        }
    }
    ~FileLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

} // namespace

extern "C" {

const char* sdc_version(void) {
    return "1.0.0";
}

const char* sdc_last_error(void) {
    return g_last_error.c_str();
}

void sdc_string_free(char* text) {
    std::free(text);
}

sdc_status sdc_schema_load(const char* path, sdc_schema** out) {
    if (!path || !out) {
        return usage_failure("sdc_schema_load: NULL argument");
    }
    return guarded([&] { *out = new sdc_schema{sdc::load_schema_file(path)}; });
}

void sdc_schema_free(sdc_schema* schema) {
    delete schema;
}

sdc_status sdc_table_load(const char* csv_path, const sdc_schema* schema, sdc_table** out) {
    if (!csv_path || !schema || !out) {
        return usage_failure("sdc_table_load: NULL argument");
    }
    return guarded([&] { *out = new sdc_table{sdc::load_table_file(csv_path, schema->value)}; });
}

sdc_status sdc_table_emit(const sdc_table* table, const char* csv_path) {
    if (!table || !csv_path) {
        return usage_failure("sdc_table_emit: NULL argument");
    }
    return guarded([&] { sdc::emit_table_file(table->value, csv_path); });
}

void sdc_table_free(sdc_table* table) {
    delete table;
}

int64_t sdc_table_records(const sdc_table* table) {
    return table ? static_cast<int64_t>(table->value.record_count()) : -1;
}

int64_t sdc_table_attributes(const sdc_table* table) {
    return table ? static_cast<int64_t>(table->value.attribute_count()) : -1;
}

sdc_status sdc_table_attribute_name(const sdc_table* table, int64_t index, char** out) {
    if (!table || !out) {
        return usage_failure("sdc_table_attribute_name: NULL argument");
    }
    return guarded([&] {
        if (index < 0 || static_cast<std::size_t>(index) >= table->value.attribute_count()) {
            sdc::throw_usage("attribute index out of range");
        }
        *out = copy_string(table->value.schema()[static_cast<std::size_t>(index)].name);
    });
}

sdc_status sdc_table_cell(const sdc_table* table, int64_t row, const char* attr, char** out) {
    if (!table || !attr || !out) {
        return usage_failure("sdc_table_cell: NULL argument");
    }
    return guarded([&] {
        if (row < 0 || static_cast<std::size_t>(row) >= table->value.record_count()) {
            sdc::throw_usage("record index out of range");
        }
        std::size_t col = table->value.attribute_index(attr);
        const sdc::Cell& cell = table->value.cell(static_cast<std::size_t>(row), col);
        *out = cell ? copy_string(*cell) : nullptr;
    });
}

sdc_status sdc_table_inspect(const sdc_table* table, char** out) {
    if (!table || !out) {
        return usage_failure("sdc_table_inspect: NULL argument");
    }
    return guarded([&] { *out = copy_string(sdc::render_inspection(table->value)); });
}

// --- non-perturbative -----------------------------------------------------------

sdc_status sdc_suppress_cells(const sdc_table* table, const char* attr, const char* selector,
                              sdc_table** out) {
    if (!table || !attr || !selector || !out) {
        return usage_failure("sdc_suppress_cells: NULL argument");
    }
    return guarded([&] {
        sdc::PipelineStep step;
        step.method = "suppress_cells";
        step.params["attr"] = attr;
        std::string_view text(selector);
        size_t eq = text.find('=');
        if (eq == std::string_view::npos) {
            sdc::throw_usage("selector must look like rows=..., equals=... or extremes=...");
        }
        step.params[std::string(text.substr(0, eq))] = std::string(text.substr(eq + 1));
        sdc::validate_step(step, table->value.schema());
        *out = new sdc_table{sdc::apply_step(table->value, step, 0)};
    });
}

sdc_status sdc_suppress_records(const sdc_table* table, const int64_t* rows, size_t row_count,
                                sdc_table** out) {
    if (!table || (!rows && row_count > 0) || !out) {
        return usage_failure("sdc_suppress_records: NULL argument");
    }
    return guarded([&] {
        *out = new sdc_table{sdc::suppress_records(table->value, to_rows(rows, row_count))};
    });
}

sdc_status sdc_generalize(const sdc_table* table, const char* attr, int64_t level,
                          sdc_table** out) {
    if (!table || !attr || !out) {
        return usage_failure("sdc_generalize: NULL argument");
    }
    return guarded([&] {
        if (level < 0) {
            sdc::throw_usage("level must be non-negative");
        }
        *out = new sdc_table{
            sdc::generalize(table->value, attr, static_cast<std::size_t>(level))};
    });
}

sdc_status sdc_verify_k_anonymity(const sdc_table* table, const char* const* quasi,
                                  size_t quasi_count, int64_t k, int* pass,
                                  int64_t* k_achieved, char** assessment) {
    if (!table || (!quasi && quasi_count > 0)) {
        return usage_failure("sdc_verify_k_anonymity: NULL argument");
    }
    return guarded([&] {
        if (k < 1) {
            sdc::throw_usage("k must be at least 1");
        }
        auto result = sdc::verify_k_anonymity(table->value, to_strings(quasi, quasi_count),
                                              static_cast<std::size_t>(k));
        if (pass) {
            *pass = result.k_pass ? 1 : 0;
        }
        if (k_achieved) {
            *k_achieved = static_cast<int64_t>(result.k_achieved);
        }
        if (assessment) {
            *assessment = copy_string(result.render());
        }
    });
}

sdc_status sdc_verify_l_diversity(const sdc_table* table, const char* const* quasi,
                                  size_t quasi_count, const char* sensitive, int64_t k,
                                  int64_t l, int* pass, int64_t* k_achieved,
                                  int64_t* l_achieved, char** assessment) {
    if (!table || (!quasi && quasi_count > 0) || !sensitive) {
        return usage_failure("sdc_verify_l_diversity: NULL argument");
    }
    return guarded([&] {
        if (k < 1 || l < 1) {
            sdc::throw_usage("k and l must be at least 1");
        }
        auto result = sdc::verify_l_diversity(table->value, to_strings(quasi, quasi_count),
                                              sensitive, static_cast<std::size_t>(k),
                                              static_cast<std::size_t>(l));
        if (pass) {
            *pass = (result.l_pass && *result.l_pass) ? 1 : 0;
        }
        if (k_achieved) {
            *k_achieved = static_cast<int64_t>(result.k_achieved);
        }
        if (l_achieved) {
            *l_achieved = static_cast<int64_t>(result.l_achieved.at(sensitive));
        }
        if (assessment) {
            *assessment = copy_string(result.render());
        }
    });
}

sdc_status sdc_enforce_k_anonymity(const sdc_table* table, const char* const* quasi,
                                   size_t quasi_count, int64_t k, sdc_table** out,
                                   char** report) {
    if (!table || (!quasi && quasi_count > 0) || !out) {
        return usage_failure("sdc_enforce_k_anonymity: NULL argument");
    }
    return guarded([&] {
        if (k < 2) {
            sdc::throw_usage("enforcement requires k >= 2");
        }
        auto [result, enforcement] = sdc::enforce_k_anonymity(
            table->value, to_strings(quasi, quasi_count), static_cast<std::size_t>(k));
        *out = new sdc_table{std::move(result)};
        if (report) {
            *report = copy_string(enforcement.render());
        }
    });
}

// --- perturbative ------------------------------------------------------------------

namespace {

sdc::NoiseSpec noise_spec(double mean, double variance, uint64_t seed) {
    sdc::NoiseSpec spec;
    spec.mean = mean;
    if (variance >= 0.0) {
        spec.variance = variance;
    }
    spec.seed = seed;
    return spec;
}

} // namespace

sdc_status sdc_add_noise(const sdc_table* table, const char* attr, double variance,
                         uint64_t seed, sdc_table** out) {
    if (!table || !attr || !out) {
        return usage_failure("sdc_add_noise: NULL argument");
    }
    return guarded([&] {
        *out = new sdc_table{sdc::add_noise(table->value, attr, noise_spec(0.0, variance, seed))};
    });
}

sdc_status sdc_multiply_noise(const sdc_table* table, const char* attr, double variance,
                              uint64_t seed, sdc_table** out) {
    if (!table || !attr || !out) {
        return usage_failure("sdc_multiply_noise: NULL argument");
    }
    return guarded([&] {
        *out = new sdc_table{
            sdc::multiply_noise(table->value, attr, noise_spec(1.0, variance, seed))};
    });
}

sdc_status sdc_log_multiply_noise(const sdc_table* table, const char* attr, double mean,
                                  double variance, uint64_t seed, sdc_table** out) {
    if (!table || !attr || !out) {
        return usage_failure("sdc_log_multiply_noise: NULL argument");
    }
    return guarded([&] {
        *out = new sdc_table{
            sdc::log_multiply_noise(table->value, attr, noise_spec(mean, variance, seed))};
    });
}

sdc_status sdc_swap_values(const sdc_table* table, const char* const* attrs, size_t attr_count,
                           const int64_t* pair_rows, size_t pair_count, sdc_table** out) {
    if (!table || (!attrs && attr_count > 0) || (!pair_rows && pair_count > 0) || !out) {
        return usage_failure("sdc_swap_values: NULL argument");
    }
    return guarded([&] {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        pairs.reserve(pair_count);
        for (size_t i = 0; i < pair_count; ++i) {
            int64_t a = pair_rows[2 * i];
            int64_t b = pair_rows[2 * i + 1];
            if (a < 0 || b < 0) {
                sdc::throw_usage("record indices must be non-negative");
            }
            pairs.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        }
        *out = new sdc_table{
            sdc::swap_values(table->value, to_strings(attrs, attr_count), pairs)};
    });
}

sdc_status sdc_random_swap(const sdc_table* table, const char* const* attrs, size_t attr_count,
                           double fraction, uint64_t seed, sdc_table** out) {
    if (!table || (!attrs && attr_count > 0) || !out) {
        return usage_failure("sdc_random_swap: NULL argument");
    }
    return guarded([&] {
        *out = new sdc_table{
            sdc::random_swap(table->value, to_strings(attrs, attr_count), fraction, seed)};
    });
}

sdc_status sdc_code_extremes(const sdc_table* table, const char* attr, const char* low,
                             const char* high, const char* low_label, const char* high_label,
                             sdc_table** out) {
    if (!table || !attr || !out) {
        return usage_failure("sdc_code_extremes: NULL argument");
    }
    return guarded([&] {
        sdc::PipelineStep step;
        step.method = "code_extremes";
        step.params["attr"] = attr;
        if (low) {
            step.params["low"] = low;
        }
        if (high) {
            step.params["high"] = high;
        }
        if (low_label) {
            step.params["low_label"] = low_label;
        }
        if (high_label) {
            step.params["high_label"] = high_label;
        }
        sdc::validate_step(step, table->value.schema());
        *out = new sdc_table{sdc::apply_step(table->value, step, 0)};
    });
}

sdc_status sdc_round_values(const sdc_table* table, const char* attr, double base,
                            sdc_table** out) {
    if (!table || !attr || !out) {
        return usage_failure("sdc_round_values: NULL argument");
    }
    return guarded([&] { *out = new sdc_table{sdc::round_values(table->value, attr, base)}; });
}

sdc_status sdc_recode_ranges(const sdc_table* table, const char* attr, const double* breaks,
                             size_t break_count, const char* const* labels, size_t label_count,
                             sdc_table** out) {
    if (!table || !attr || (!breaks && break_count > 0) || (!labels && label_count > 0) || !out) {
        return usage_failure("sdc_recode_ranges: NULL argument");
    }
    return guarded([&] {
        sdc::RecodeSpec spec;
        spec.attribute = attr;
        spec.breakpoints.assign(breaks, breaks + break_count);
        spec.labels = to_strings(labels, label_count);
        *out = new sdc_table{sdc::recode_ranges(table->value, spec)};
    });
}

sdc_status sdc_blank_and_impute(const sdc_table* table, const char* attr, const int64_t* rows,
                                size_t row_count, sdc_table** out) {
    if (!table || !attr || (!rows && row_count > 0) || !out) {
        return usage_failure("sdc_blank_and_impute: NULL argument");
    }
    return guarded([&] {
        *out = new sdc_table{
            sdc::blank_and_impute(table->value, attr, to_rows(rows, row_count))};
    });
}

sdc_status sdc_blur(const sdc_table* table, const char* attr, const char* const* quasi,
                    size_t quasi_count, const int64_t* rows, size_t row_count, sdc_table** out) {
    if (!table || !attr || (!quasi && quasi_count > 0) || (!rows && row_count > 0) || !out) {
        return usage_failure("sdc_blur: NULL argument");
    }
    return guarded([&] {
        *out = new sdc_table{sdc::blur(table->value, attr, to_strings(quasi, quasi_count),
                                       to_rows(rows, row_count))};
    });
}

sdc_status sdc_synthesize(const sdc_table* table, uint64_t seed, sdc_table** out) {
    if (!table || !out) {
        return usage_failure("sdc_synthesize: NULL argument");
    }
    return guarded([&] { *out = new sdc_table{sdc::synthesize(table->value, seed)}; });
}

// --- differential privacy ------------------------------------------------------------

sdc_status sdc_dp_query(const sdc_table* table, const char* query, double epsilon,
                        const char* ledger_path, double total_epsilon, uint64_t seed,
                        double* answer, double* remaining) {
    if (!table || !query || !ledger_path) {
        return usage_failure("sdc_dp_query: NULL argument");
    }
    return guarded([&] {
        sdc::DpQuery parsed = sdc::DpQuery::parse(query);
        FileLock lock(ledger_path); // single-writer contract for the ledger file

        sdc::BudgetLedger ledger = [&] {
            std::error_code ec;
            bool exists = std::filesystem::exists(ledger_path, ec) &&
                          std::filesystem::file_size(ledger_path, ec) > 0;
            if (!exists) {
                if (total_epsilon <= 0.0) {
                    sdc::throw_usage("new ledger '" + std::string(ledger_path) +
                                     "' needs a positive total epsilon");
                }
                sdc::create_ledger_file(ledger_path, total_epsilon);
                return sdc::BudgetLedger(total_epsilon);
            }
            sdc::BudgetLedger loaded = sdc::BudgetLedger::load_file(ledger_path);
            if (total_epsilon > 0.0 && total_epsilon != loaded.total()) {
                sdc::throw_usage("ledger '" + std::string(ledger_path) + "' has total epsilon " +
                                 sdc::format_number(loaded.total()) + ", not " +
                                 sdc::format_number(total_epsilon));
            }
            return loaded;
        }();

        try {
            sdc::DpAnswer result = sdc::dp_answer(table->value, parsed, epsilon, ledger, seed);
            sdc::append_ledger_entry(ledger_path, result.entry);
            if (answer) {
                *answer = result.value;
            }
            if (remaining) {
                *remaining = ledger.remaining();
            }
        } catch (const sdc::Error& e) {
            if (e.kind() == sdc::ErrorKind::budget && remaining) {
                *remaining = ledger.remaining();
            }
            throw;
        }
    });
}

// --- utility ------------------------------------------------------------------------

sdc_status sdc_distribution_distance(const sdc_table* original, const sdc_table* privatized,
                                     const char* attr, double* out) {
    if (!original || !privatized || !attr || !out) {
        return usage_failure("sdc_distribution_distance: NULL argument");
    }
    return guarded([&] {
        *out = sdc::distribution_distance(original->value, privatized->value, attr);
    });
}

sdc_status sdc_build_report(const sdc_table* original, const sdc_table* privatized,
                            const char* options, char** out) {
    if (!original || !privatized || !out) {
        return usage_failure("sdc_build_report: NULL argument");
    }
    return guarded([&] {
        sdc::ReportConfig config;
        if (options) {
            std::string text(options);
            for (char& c : text) {
                if (c == ';') {
                    c = '\n';
                }
            }
            std::istringstream in(text);
            std::string line;
            while (std::getline(in, line)) {
                std::string_view body = sdc::trim(line);
                if (body.empty()) {
                    continue;
                }
                size_t eq = body.find('=');
                if (eq == std::string_view::npos) {
                    sdc::throw_usage("report options expect key=value, got '" +
                                     std::string(body) + "'");
                }
                std::string key{sdc::trim(body.substr(0, eq))};
                std::string value{sdc::trim(body.substr(eq + 1))};
                auto parse_list = [](const std::string& v) {
                    std::vector<std::string> items;
                    for (const auto& part : sdc::split(v, ',')) {
                        auto t = sdc::trim(part);
                        if (!t.empty()) {
                            items.emplace_back(t);
                        }
                    }
                    return items;
                };
                auto parse_count = [&](const std::string& v) {
                    auto n = sdc::parse_number(v);
                    if (!n || *n < 0) {
                        sdc::throw_usage("report option '" + key + "' expects a non-negative number");
                    }
                    return static_cast<std::size_t>(*n);
                };
                if (key == "attrs") {
                    config.attributes = parse_list(value);
                } else if (key == "quasi") {
                    config.quasi = parse_list(value);
                } else if (key == "sensitive") {
                    config.sensitive = value;
                } else if (key == "k") {
                    config.k = parse_count(value);
                } else if (key == "l") {
                    config.l = parse_count(value);
                } else if (key == "label") {
                    config.gauge_label = value;
                } else if (key == "features") {
                    config.gauge_features = parse_list(value);
                } else if (key == "folds") {
                    config.gauge_folds = parse_count(value);
                } else if (key == "seed") {
                    config.seed = parse_count(value);
                } else {
                    sdc::throw_usage("unknown report option '" + key + "'");
                }
            }
        }
        sdc::UtilityReport report = sdc::build_report(original->value, privatized->value, config);
        *out = copy_string(report.render());
    });
}

sdc_status sdc_scatter_export(const sdc_table* table, const char* x_attr, const char* y_attr,
                              const char* label_attr, const char* csv_path) {
    if (!table || !x_attr || !y_attr || !label_attr || !csv_path) {
        return usage_failure("sdc_scatter_export: NULL argument");
    }
    return guarded([&] {
        sdc::scatter_export_file(table->value, x_attr, y_attr, label_attr, csv_path);
    });
}

// --- pipeline & demo -------------------------------------------------------------------

sdc_status sdc_pipeline_run(const char* config_path, const uint64_t* seed_override,
                            char** summary) {
    if (!config_path) {
        return usage_failure("sdc_pipeline_run: NULL argument");
    }
    return guarded([&] {
        sdc::PipelineConfig config = sdc::PipelineConfig::parse_file(config_path);
        std::optional<std::uint64_t> override;
        if (seed_override) {
            override = *seed_override;
        }
        std::string text = sdc::run_pipeline_files(config, override);
        if (summary) {
            *summary = copy_string(text);
        }
    });
}

sdc_status sdc_iris_demo(const char* iris_csv, const char* out_dir, uint64_t seed,
                         double sigma_scale, char** summary) {
    if (!iris_csv || !out_dir) {
        return usage_failure("sdc_iris_demo: NULL argument");
    }
    return guarded([&] {
        std::string text = sdc::iris_demo(iris_csv, out_dir, seed, sigma_scale);
        if (summary) {
            *summary = copy_string(text);
        }
    });
}

} // extern "C"
