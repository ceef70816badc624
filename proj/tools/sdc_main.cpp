// sdc - statistical disclosure control toolkit, command-line driver.
// Thin argument-parsing layer over the libsdc C API.

#include "sdc/sdc.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace {

// Exit-code contract: 0 success / verification pass, 1 runtime or
// verification failure, 2 usage or validation error.
int exit_code(sdc_status status) {
    switch (status) {
    case SDC_OK: return 0;
    case SDC_ERROR_USAGE: return 2;
    case SDC_ERROR_RUNTIME: return 1;
    case SDC_ERROR_BUDGET: return 1;
    }
    return 1;
}

int fail(sdc_status status) {
    std::fprintf(stderr, "error: %s\n", sdc_last_error());
    return exit_code(status);
}

void print_and_free(char* text) {
    if (text) {
        std::fputs(text, stdout);
        sdc_string_free(text);
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    for (char c : text) {
        if (c == ',') {
            if (!item.empty()) {
                out.push_back(item);
            }
            item.clear();
        } else {
            item += c;
        }
    }
    if (!item.empty()) {
        out.push_back(item);
    }
    return out;
}

std::vector<const char*> c_list(const std::vector<std::string>& items) {
    std::vector<const char*> out;
    out.reserve(items.size());
    for (const auto& s : items) {
        out.push_back(s.c_str());
    }
    return out;
}

// --seed flag, SDC_SEED environment fallback, default 0.
uint64_t resolve_seed(const std::optional<uint64_t>& flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("SDC_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') {
            return static_cast<uint64_t>(v);
        }
        std::fprintf(stderr, "warning: ignoring non-numeric SDC_SEED '%s'\n", env);
    }
    return 0;
}

struct TableHandle {
    sdc_table* table = nullptr;
    sdc_schema* schema = nullptr;

    ~TableHandle() {
        sdc_table_free(table);
        sdc_schema_free(schema);
    }

    sdc_status load(const std::string& csv, const std::string& schema_path) {
        sdc_status s = sdc_schema_load(schema_path.c_str(), &schema);
        if (s != SDC_OK) {
            return s;
        }
        return sdc_table_load(csv.c_str(), schema, &table);
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistical disclosure control toolkit"};
    app.require_subcommand(1);

    // inspect
    std::string in_table, in_schema;
    auto* inspect = app.add_subcommand("inspect", "show schema and per-column statistics");
    inspect->add_option("table", in_table, "CSV file")->required();
    inspect->add_option("--schema", in_schema, "schema descriptor")->required();

    // anonymize
    std::string cfg_path;
    std::optional<uint64_t> seed_flag;
    auto* anonymize = app.add_subcommand("anonymize", "run a pipeline config");
    anonymize->add_option("--config", cfg_path, "pipeline config file")->required();
    anonymize->add_option("--seed", seed_flag, "seed override");

    // verify
    std::string v_table, v_schema, v_quasi, v_sensitive;
    uint64_t v_k = 2;
    std::optional<uint64_t> v_l;
    auto* verify = app.add_subcommand("verify", "check k-anonymity / l-diversity");
    verify->add_option("table", v_table, "CSV file")->required();
    verify->add_option("--schema", v_schema, "schema descriptor")->required();
    verify->add_option("--quasi", v_quasi, "comma-separated quasi attributes")->required();
    verify->add_option("--sensitive", v_sensitive, "sensitive attribute (for l-diversity)");
    verify->add_option("--k", v_k, "required k (default 2)");
    verify->add_option("--l", v_l, "required distinct l (needs --sensitive)");

    // dp-query
    std::string q_table, q_schema, q_text, q_ledger;
    double q_epsilon = 0.0, q_total = -1.0;
    std::optional<uint64_t> q_seed;
    auto* dp = app.add_subcommand("dp-query", "answer a query with the Laplace mechanism");
    dp->add_option("table", q_table, "CSV file")->required();
    dp->add_option("--schema", q_schema, "schema descriptor")->required();
    dp->add_option("--query", q_text, "count | sum(Attr) | mean(Attr) [hint N] [where ...]")
        ->required();
    dp->add_option("--epsilon", q_epsilon, "epsilon to charge")->required();
    dp->add_option("--ledger", q_ledger, "budget ledger file")->required();
    dp->add_option("--total", q_total, "total epsilon when creating a fresh ledger");
    dp->add_option("--seed", q_seed, "seed override");

    // report
    std::string r_original, r_privatized, r_schema, r_out, r_quasi, r_sensitive, r_label,
        r_features;
    std::optional<uint64_t> r_k, r_l, r_folds, r_seed;
    auto* report = app.add_subcommand("report", "privacy-utility report for two tables");
    report->add_option("original", r_original, "original CSV")->required();
    report->add_option("privatized", r_privatized, "privatized CSV")->required();
    report->add_option("--schema", r_schema, "schema descriptor")->required();
    report->add_option("--out", r_out, "write the report here instead of stdout");
    report->add_option("--quasi", r_quasi, "quasi attributes for the anonymity section");
    report->add_option("--sensitive", r_sensitive, "sensitive attribute");
    report->add_option("--k", r_k, "k for the anonymity section");
    report->add_option("--l", r_l, "l for the anonymity section");
    report->add_option("--label", r_label, "gauge label attribute");
    report->add_option("--features", r_features, "gauge feature attributes");
    report->add_option("--folds", r_folds, "gauge folds (default leave-one-out)");
    report->add_option("--seed", r_seed, "gauge seed");

    // iris-demo
    std::string i_iris, i_out = "iris_out";
    std::optional<uint64_t> i_seed;
    double i_scale = 1.0;
    auto* iris = app.add_subcommand("iris-demo", "noise-addition demo on the iris table");
    iris->add_option("iris", i_iris, "iris CSV (headered or raw UCI)")->required();
    iris->add_option("--out", i_out, "output directory (default iris_out)");
    iris->add_option("--seed", i_seed, "seed override");
    iris->add_option("--sigma-scale", i_scale, "noise sigma as a multiple of each std (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (inspect->parsed()) {
        TableHandle h;
        sdc_status s = h.load(in_table, in_schema);
        if (s != SDC_OK) {
            return fail(s);
        }
        char* text = nullptr;
        s = sdc_table_inspect(h.table, &text);
        if (s != SDC_OK) {
            return fail(s);
        }
        std::printf("table: %s\n", in_table.c_str());
        print_and_free(text);
        return 0;
    }

    if (anonymize->parsed()) {
        uint64_t seed_value = 0;
        const uint64_t* override_ptr = nullptr;
        if (seed_flag) {
            seed_value = *seed_flag;
            override_ptr = &seed_value;
        }
        char* summary = nullptr;
        sdc_status s = sdc_pipeline_run(cfg_path.c_str(), override_ptr, &summary);
        if (s != SDC_OK) {
            return fail(s);
        }
        print_and_free(summary);
        return 0;
    }

    if (verify->parsed()) {
        if (v_l && v_sensitive.empty()) {
            std::fprintf(stderr, "error: --l needs --sensitive\n");
            return 2;
        }
        TableHandle h;
        sdc_status s = h.load(v_table, v_schema);
        if (s != SDC_OK) {
            return fail(s);
        }
        auto quasi = split_list(v_quasi);
        auto quasi_c = c_list(quasi);
        int pass = 0;
        char* assessment = nullptr;
        if (v_l) {
            s = sdc_verify_l_diversity(h.table, quasi_c.data(), quasi_c.size(),
                                       v_sensitive.c_str(), static_cast<int64_t>(v_k),
                                       static_cast<int64_t>(*v_l), &pass, nullptr, nullptr,
                                       &assessment);
        } else {
            s = sdc_verify_k_anonymity(h.table, quasi_c.data(), quasi_c.size(),
                                       static_cast<int64_t>(v_k), &pass, nullptr, &assessment);
        }
        if (s != SDC_OK) {
            return fail(s);
        }
        print_and_free(assessment);
        std::printf("verification: %s\n", pass ? "pass" : "FAIL");
        return pass ? 0 : 1;
    }

    if (dp->parsed()) {
        TableHandle h;
        sdc_status s = h.load(q_table, q_schema);
        if (s != SDC_OK) {
            return fail(s);
        }
        double answer = 0.0, remaining = -1.0;
        s = sdc_dp_query(h.table, q_text.c_str(), q_epsilon, q_ledger.c_str(), q_total,
                         resolve_seed(q_seed), &answer, &remaining);
        if (s == SDC_ERROR_BUDGET) {
            std::fprintf(stderr, "error: %s\n", sdc_last_error());
            std::printf("refused: remaining budget %.17g\n", remaining);
            return 1;
        }
        if (s != SDC_OK) {
            return fail(s);
        }
        std::printf("%.17g\n", answer);
        std::fprintf(stderr, "remaining budget: %.17g\n", remaining);
        return 0;
    }

    if (report->parsed()) {
        TableHandle original;
        sdc_status s = original.load(r_original, r_schema);
        if (s != SDC_OK) {
            return fail(s);
        }
        sdc_table* privatized = nullptr;
        s = sdc_table_load(r_privatized.c_str(), original.schema, &privatized);
        if (s != SDC_OK) {
            return fail(s);
        }
        std::string options;
        auto add_option = [&](const std::string& key, const std::string& value) {
            if (!value.empty()) {
                options += key + "=" + value + "\n";
            }
        };
        add_option("quasi", r_quasi);
        add_option("sensitive", r_sensitive);
        add_option("label", r_label);
        add_option("features", r_features);
        if (r_k) {
            options += "k=" + std::to_string(*r_k) + "\n";
        }
        if (r_l) {
            options += "l=" + std::to_string(*r_l) + "\n";
        }
        if (r_folds) {
            options += "folds=" + std::to_string(*r_folds) + "\n";
        }
        options += "seed=" + std::to_string(resolve_seed(r_seed)) + "\n";
        char* text = nullptr;
        s = sdc_build_report(original.table, privatized, options.c_str(), &text);
        sdc_table_free(privatized);
        if (s != SDC_OK) {
            return fail(s);
        }
        if (!r_out.empty()) {
            std::FILE* f = std::fopen(r_out.c_str(), "wb");
            if (!f || std::fputs(text, f) == EOF) {
                if (f) {
                    std::fclose(f);
                }
                sdc_string_free(text);
                std::fprintf(stderr, "error: cannot write '%s'\n", r_out.c_str());
                return 1;
            }
            std::fclose(f);
            sdc_string_free(text);
            std::printf("wrote %s\n", r_out.c_str());
        } else {
            print_and_free(text);
        }
        return 0;
    }

    if (iris->parsed()) {
        char* summary = nullptr;
        sdc_status s = sdc_iris_demo(i_iris.c_str(), i_out.c_str(), resolve_seed(i_seed), i_scale,
                                     &summary);
        if (s != SDC_OK) {
            return fail(s);
        }
        print_and_free(summary);
        return 0;
    }

    return 2;
}
