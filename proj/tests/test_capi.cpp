#include "sdc/sdc.h"

#include "support/paths.hpp"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

using testsupport::data_file;
using testsupport::TempDir;

namespace {

struct Loaded {
    sdc_schema* schema = nullptr;
    sdc_table* table = nullptr;
    ~Loaded() {
        sdc_table_free(table);
        sdc_schema_free(schema);
    }
};

Loaded load(const std::string& fixture) {
    Loaded out;
    REQUIRE(sdc_schema_load(data_file(fixture + ".schema").c_str(), &out.schema) == SDC_OK);
    REQUIRE(sdc_table_load(data_file(fixture + ".csv").c_str(), out.schema, &out.table) == SDC_OK);
    return out;
}

std::string take_string(char* text) {
    REQUIRE(text != nullptr);
    std::string out(text);
    sdc_string_free(text);
    return out;
}

} // namespace

TEST_CASE("c api: load, read cells, emit") {
    Loaded fig2 = load("fig2");
    CHECK(sdc_table_records(fig2.table) == 10);
    CHECK(sdc_table_attributes(fig2.table) == 10);

    char* name = nullptr;
    REQUIRE(sdc_table_attribute_name(fig2.table, 4, &name) == SDC_OK);
    CHECK(take_string(name) == "Age");

    char* cell = nullptr;
    REQUIRE(sdc_table_cell(fig2.table, 0, "City", &cell) == SDC_OK);
    CHECK(take_string(cell) == "Music City");

    CHECK(sdc_table_cell(fig2.table, 99, "City", &cell) == SDC_ERROR_USAGE);
    CHECK(std::string(sdc_last_error()).find("out of range") != std::string::npos);

    TempDir dir;
    REQUIRE(sdc_table_emit(fig2.table, dir.file("copy.csv").c_str()) == SDC_OK);
    sdc_table* again = nullptr;
    REQUIRE(sdc_table_load(dir.file("copy.csv").c_str(), fig2.schema, &again) == SDC_OK);
    CHECK(sdc_table_records(again) == 10);
    sdc_table_free(again);

    char* inspection = nullptr;
    REQUIRE(sdc_table_inspect(fig2.table, &inspection) == SDC_OK);
    std::string text = take_string(inspection);
    CHECK(text.find("Diagnosis") != std::string::npos);
    CHECK(text.find("kind=sensitive") != std::string::npos);
}

TEST_CASE("c api: null arguments are usage errors") {
    CHECK(sdc_schema_load(nullptr, nullptr) == SDC_ERROR_USAGE);
    CHECK(sdc_table_load(nullptr, nullptr, nullptr) == SDC_ERROR_USAGE);
    CHECK(sdc_table_records(nullptr) == -1);
    sdc_schema* schema = nullptr;
    CHECK(sdc_schema_load(data_file("nope.schema").c_str(), &schema) == SDC_ERROR_USAGE);
}

TEST_CASE("c api: suppression, generalization and verification") {
    Loaded zip = load("zip");
    int64_t drop[] = {1};
    sdc_table* anonymized = nullptr;
    REQUIRE(sdc_suppress_records(zip.table, drop, 1, &anonymized) == SDC_OK);
    CHECK(sdc_table_records(anonymized) == 4);

    int pass = -1;
    int64_t k_achieved = 0;
    const char* quasi[] = {"ZipCode"};
    REQUIRE(sdc_verify_k_anonymity(anonymized, quasi, 1, 2, &pass, &k_achieved, nullptr) == SDC_OK);
    CHECK(pass == 1);
    CHECK(k_achieved == 2);
    REQUIRE(sdc_verify_k_anonymity(zip.table, quasi, 1, 2, &pass, &k_achieved, nullptr) == SDC_OK);
    CHECK(pass == 0);
    CHECK(k_achieved == 1);
    sdc_table_free(anonymized);

    sdc_table* enforced = nullptr;
    char* report = nullptr;
    REQUIRE(sdc_enforce_k_anonymity(zip.table, quasi, 1, 2, &enforced, &report) == SDC_OK);
    CHECK(sdc_table_records(enforced) == 4);
    CHECK(take_string(report).find("suppressed records: 1") != std::string::npos);
    sdc_table_free(enforced);

    Loaded fig5 = load("fig5");
    const char* lname[] = {"Lname"};
    int64_t l_achieved = 0;
    char* assessment = nullptr;
    REQUIRE(sdc_verify_l_diversity(fig5.table, lname, 1, "Diagnosis", 2, 2, &pass, &k_achieved,
                                   &l_achieved, &assessment) == SDC_OK);
    CHECK(pass == 0);
    CHECK(k_achieved == 2);
    CHECK(l_achieved == 1);
    CHECK(take_string(assessment).find("Smith") != std::string::npos);

    Loaded birthdate = load("birthdate");
    sdc_table* general = nullptr;
    REQUIRE(sdc_generalize(birthdate.table, "Birthdate", 1, &general) == SDC_OK);
    char* cell = nullptr;
    REQUIRE(sdc_table_cell(general, 0, "Birthdate", &cell) == SDC_OK);
    CHECK(take_string(cell) == "1961-01");
    sdc_table_free(general);
    CHECK(sdc_generalize(birthdate.table, "Birthdate", 9, &general) == SDC_ERROR_USAGE);
}

TEST_CASE("c api: suppress_cells selector grammar") {
    Loaded fig2 = load("fig2");
    sdc_table* out = nullptr;
    REQUIRE(sdc_suppress_cells(fig2.table, "Income", "extremes=both", &out) == SDC_OK);
    char* cell = nullptr;
    REQUIRE(sdc_table_cell(out, 7, "Income", &cell) == SDC_OK);
    CHECK(cell == nullptr); // 80000.00 blanked
    sdc_table_free(out);

    REQUIRE(sdc_suppress_cells(fig2.table, "Diagnosis", "equals=HIV", &out) == SDC_OK);
    REQUIRE(sdc_table_cell(out, 2, "Diagnosis", &cell) == SDC_OK);
    CHECK(cell == nullptr);
    sdc_table_free(out);

    CHECK(sdc_suppress_cells(fig2.table, "Income", "bogus", &out) == SDC_ERROR_USAGE);
    CHECK(sdc_suppress_cells(fig2.table, "Income", "mode=weird", &out) == SDC_ERROR_USAGE);
}

TEST_CASE("c api: perturbative operations") {
    Loaded fig2 = load("fig2");

    sdc_table* noised = nullptr;
    REQUIRE(sdc_add_noise(fig2.table, "Age", 4.0, 11, &noised) == SDC_OK);
    sdc_table* noised_again = nullptr;
    REQUIRE(sdc_add_noise(fig2.table, "Age", 4.0, 11, &noised_again) == SDC_OK);
    char *a = nullptr, *b = nullptr;
    REQUIRE(sdc_table_cell(noised, 0, "Age", &a) == SDC_OK);
    REQUIRE(sdc_table_cell(noised_again, 0, "Age", &b) == SDC_OK);
    CHECK(take_string(a) == take_string(b));
    sdc_table_free(noised);
    sdc_table_free(noised_again);

    CHECK(sdc_add_noise(fig2.table, "City", 1.0, 1, &noised) == SDC_ERROR_USAGE);
    CHECK(sdc_multiply_noise(fig2.table, "Age", -1.0, 1, &noised) == SDC_ERROR_USAGE);

    const char* attrs[] = {"Age", "Income"};
    int64_t pairs[] = {0, 1};
    sdc_table* swapped = nullptr;
    REQUIRE(sdc_swap_values(fig2.table, attrs, 2, pairs, 1, &swapped) == SDC_OK);
    char* cell = nullptr;
    REQUIRE(sdc_table_cell(swapped, 0, "Age", &cell) == SDC_OK);
    CHECK(take_string(cell) == "48");
    sdc_table_free(swapped);

    sdc_table* coded = nullptr;
    REQUIRE(sdc_code_extremes(fig2.table, "Income", nullptr, "75000", nullptr, nullptr, &coded) ==
            SDC_OK);
    REQUIRE(sdc_table_cell(coded, 7, "Income", &cell) == SDC_OK);
    CHECK(take_string(cell) == ">75000");
    sdc_table_free(coded);

    double breaks[] = {0.0, 45.0, 120.0};
    const char* labels[] = {"young", "older"};
    sdc_table* recoded = nullptr;
    REQUIRE(sdc_recode_ranges(fig2.table, "Age", breaks, 3, labels, 2, &recoded) == SDC_OK);
    REQUIRE(sdc_table_cell(recoded, 0, "Age", &cell) == SDC_OK);
    CHECK(take_string(cell) == "older");
    sdc_table_free(recoded);

    sdc_table* rounded = nullptr;
    REQUIRE(sdc_round_values(fig2.table, "Income", 1000.0, &rounded) == SDC_OK);
    sdc_table_free(rounded);

    int64_t impute_rows[] = {0};
    sdc_table* imputed = nullptr;
    REQUIRE(sdc_blank_and_impute(fig2.table, "Age", impute_rows, 1, &imputed) == SDC_OK);
    sdc_table_free(imputed);

    const char* gender[] = {"Gender"};
    int64_t blur_rows[] = {0, 1};
    sdc_table* blurred = nullptr;
    REQUIRE(sdc_blur(fig2.table, "Income", gender, 1, blur_rows, 2, &blurred) == SDC_OK);
    sdc_table_free(blurred);

    sdc_table* synth = nullptr;
    REQUIRE(sdc_synthesize(fig2.table, 5, &synth) == SDC_OK);
    CHECK(sdc_table_records(synth) == 10);
    sdc_table_free(synth);

    sdc_table* shuffled = nullptr;
    REQUIRE(sdc_random_swap(fig2.table, attrs, 2, 0.5, 3, &shuffled) == SDC_OK);
    sdc_table_free(shuffled);

    sdc_table* logged = nullptr;
    REQUIRE(sdc_log_multiply_noise(fig2.table, "Income", 0.0, 0.01, 2, &logged) == SDC_OK);
    sdc_table_free(logged);
}

TEST_CASE("c api: dp query with a persistent ledger") {
    Loaded fig2 = load("fig2");
    TempDir dir;
    std::string ledger = dir.file("ledger.txt");

    double answer = 0.0, remaining = 0.0;
    REQUIRE(sdc_dp_query(fig2.table, "count", 0.4, ledger.c_str(), 1.0, 5, &answer, &remaining) ==
            SDC_OK);
    CHECK(remaining == doctest::Approx(0.6));

    // Same seed, fresh ledger: same answer (mechanism is seed-deterministic).
    double answer2 = 0.0;
    std::string other = dir.file("other.txt");
    REQUIRE(sdc_dp_query(fig2.table, "count", 0.4, other.c_str(), 1.0, 5, &answer2, nullptr) ==
            SDC_OK);
    CHECK(answer == answer2);

    REQUIRE(sdc_dp_query(fig2.table, "count", 0.4, ledger.c_str(), -1.0, 6, &answer, &remaining) ==
            SDC_OK);
    CHECK(remaining == doctest::Approx(0.2));

    // Third 0.4 exceeds the 1.0 total: refused, ledger intact, remaining reported.
    CHECK(sdc_dp_query(fig2.table, "count", 0.4, ledger.c_str(), -1.0, 7, &answer, &remaining) ==
          SDC_ERROR_BUDGET);
    CHECK(remaining == doctest::Approx(0.2));
    std::string text = testsupport::read_file(ledger);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4); // comment + total + 2 entries

    // Mismatched total on an existing ledger.
    CHECK(sdc_dp_query(fig2.table, "count", 0.1, ledger.c_str(), 2.0, 8, &answer, &remaining) ==
          SDC_ERROR_USAGE);

    // Bounded queries pull bounds from the schema; Age has none in fig2.
    CHECK(sdc_dp_query(fig2.table, "sum(Age)", 0.1, ledger.c_str(), -1.0, 9, &answer,
                       &remaining) == SDC_ERROR_USAGE);
}

TEST_CASE("c api: report, distance and scatter") {
    Loaded fig2 = load("fig2");
    sdc_table* noised = nullptr;
    REQUIRE(sdc_add_noise(fig2.table, "Age", 25.0, 3, &noised) == SDC_OK);

    double d = -1.0;
    REQUIRE(sdc_distribution_distance(fig2.table, noised, "Age", &d) == SDC_OK);
    CHECK(d > 0.0);
    CHECK(d <= 1.0);

    char* report = nullptr;
    REQUIRE(sdc_build_report(fig2.table, noised, "quasi=Gender;k=2;seed=1", &report) == SDC_OK);
    std::string text = take_string(report);
    CHECK(text.find("anonymity.k_achieved=5") != std::string::npos);
    CHECK(text.find("attr.Age.ks=") != std::string::npos);

    CHECK(sdc_build_report(fig2.table, noised, "mystery=1", &report) == SDC_ERROR_USAGE);

    TempDir dir;
    REQUIRE(sdc_scatter_export(fig2.table, "Age", "Income", "Diagnosis",
                               dir.file("scatter.csv").c_str()) == SDC_OK);
    std::string scatter = testsupport::read_file(dir.file("scatter.csv"));
    CHECK(scatter.rfind("x,y,label\n", 0) == 0);
    CHECK(std::count(scatter.begin(), scatter.end(), '\n') == 11);

    sdc_table_free(noised);
}

TEST_CASE("c api: pipeline run and iris demo") {
    TempDir dir;
    std::string cfg = dir.file("p.cfg");
    testsupport::write_file(cfg, "input: " + data_file("zip.csv") + "\n" +
                                     "schema: " + data_file("zip.schema") + "\n" +
                                     "output: " + dir.file("out.csv") + "\n" +
                                     "seed: 2\n"
                                     "step: enforce_k_anonymity\n"
                                     "quasi = ZipCode\n"
                                     "k = 2\n");
    char* summary = nullptr;
    REQUIRE(sdc_pipeline_run(cfg.c_str(), nullptr, &summary) == SDC_OK);
    CHECK(take_string(summary).find("enforce_k_anonymity") != std::string::npos);
    CHECK(testsupport::read_file(dir.file("out.csv")) == "ZipCode\n20001\n20001\n20005\n20005\n");

    uint64_t seed = 3;
    REQUIRE(sdc_iris_demo(data_file("iris.csv").c_str(), dir.file("iris").c_str(), seed, 1.0,
                          &summary) == SDC_OK);
    CHECK(take_string(summary).find("gauge baseline") != std::string::npos);
    CHECK(std::filesystem::exists(dir.file("iris") + "/privatized_scatter.csv"));

    CHECK(sdc_pipeline_run(dir.file("missing.cfg").c_str(), nullptr, &summary) ==
          SDC_ERROR_USAGE);
}
