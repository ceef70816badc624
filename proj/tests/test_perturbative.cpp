#include "core/perturbative.hpp"

#include "core/error.hpp"
#include "core/table.hpp"
#include "core/text.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"
#include "support/reference_rng.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace sdc;
using testsupport::data_file;
using testsupport::ReferenceRng;

namespace {

Table numeric_table(const std::vector<std::optional<double>>& values, const char* name = "X") {
    Schema schema{{name, AttributeKind::quasi, DataClass::continuous, nullptr, std::nullopt}};
    std::vector<Row> rows;
    for (const auto& v : values) {
        rows.push_back(Row{v ? Cell{format_number(*v)} : Cell{std::nullopt}});
    }
    return Table(schema, std::move(rows));
}

std::vector<std::optional<double>> numeric_column(const Table& t, const char* name = "X") {
    std::size_t col = t.attribute_index(name);
    std::vector<std::optional<double>> out;
    for (std::size_t r = 0; r < t.record_count(); ++r) {
        out.push_back(t.numeric(r, col));
    }
    return out;
}

Table load_fig2() {
    Schema schema = load_schema_file(data_file("fig2.schema"));
    return load_table_file(data_file("fig2.csv"), schema);
}

} // namespace

TEST_CASE("zero-variance additive noise is the identity on values") {
    Table t = numeric_table({1.0, 2.0, 3.0});
    NoiseSpec spec;
    spec.variance = 0.0;
    spec.seed = 9;
    Table out = add_noise(t, "X", spec);
    CHECK(numeric_column(out) == numeric_column(t));
}

TEST_CASE("additive noise equals the documented seeded draws") {
    Table t = numeric_table({1.0, 2.0, 3.0});
    NoiseSpec spec;
    spec.variance = 1.0;
    spec.seed = 42;
    Table out = add_noise(t, "X", spec);

    ReferenceRng ref(42);
    std::vector<double> expected{1.0 + ref.normal(0.0, 1.0), 2.0 + ref.normal(0.0, 1.0),
                                 3.0 + ref.normal(0.0, 1.0)};
    auto got = numeric_column(out);
    for (int i = 0; i < 3; ++i) {
        CHECK(*got[i] == expected[i]);
    }
}

TEST_CASE("additive noise skips missing cells without consuming draws") {
    Table t = numeric_table({1.0, std::nullopt, 3.0});
    NoiseSpec spec;
    spec.variance = 4.0;
    spec.seed = 5;
    Table out = add_noise(t, "X", spec);
    ReferenceRng ref(5);
    auto got = numeric_column(out);
    CHECK(*got[0] == 1.0 + ref.normal(0.0, 2.0));
    CHECK(!got[1]);
    CHECK(*got[2] == 3.0 + ref.normal(0.0, 2.0));
}

TEST_CASE("additive noise rejects categorical attributes and nonzero means") {
    Table fig2 = load_fig2();
    NoiseSpec spec;
    spec.variance = 1.0;
    CHECK_THROWS_AS(add_noise(fig2, "City", spec), Error);
    spec.mean = 1.0;
    CHECK_THROWS_AS(add_noise(fig2, "Age", spec), Error);
}

TEST_CASE("additive noise default sigma is a tenth of the sample std") {
    Table t = numeric_table({10.0, 20.0, 30.0}); // std 10
    NoiseSpec spec;
    spec.seed = 3;
    Table out = add_noise(t, "X", spec);
    ReferenceRng ref(3);
    auto got = numeric_column(out);
    CHECK(*got[0] == 10.0 + ref.normal(0.0, 1.0));
}

TEST_CASE("multiplicative noise multiplies by unit-mean draws") {
    Table t = numeric_table({1.0, 2.0, 3.0});
    NoiseSpec spec;
    spec.mean = 1.0;
    spec.variance = 0.0;
    spec.seed = 8;
    CHECK(numeric_column(multiply_noise(t, "X", spec)) == numeric_column(t));

    spec.variance = 0.25;
    Table out = multiply_noise(t, "X", spec);
    ReferenceRng ref(8);
    auto got = numeric_column(out);
    CHECK(*got[0] == 1.0 * ref.normal(1.0, 0.5));
    CHECK(*got[1] == 2.0 * ref.normal(1.0, 0.5));

    spec.mean = 0.0;
    CHECK_THROWS_AS(multiply_noise(t, "X", spec), Error);
    spec.mean = 1.0;
    spec.variance.reset();
    CHECK_THROWS_AS(multiply_noise(t, "X", spec), Error);
}

TEST_CASE("multiplicative noise keeps the mean of a constant column") {
    const double c = 7.5;
    const std::size_t n = 4000;
    Table t = numeric_table(std::vector<std::optional<double>>(n, c));
    NoiseSpec spec;
    spec.mean = 1.0;
    spec.variance = 0.04; // sigma 0.2
    spec.seed = 77;
    auto got = numeric_column(multiply_noise(t, "X", spec));
    double sum = 0.0;
    for (const auto& v : got) {
        sum += *v;
    }
    double mean = sum / double(n);
    CHECK(std::fabs(mean - c) < 3.0 * std::fabs(c) * 0.2 / std::sqrt(double(n)));
}

TEST_CASE("log multiplicative noise publishes log-scale values") {
    NoiseSpec spec;
    spec.variance = 0.0;
    spec.seed = 1;
    Table ones = numeric_table({1.0});
    CHECK(*numeric_column(log_multiply_noise(ones, "X", spec))[0] == 0.0);

    Table e = numeric_table({std::exp(1.0)});
    CHECK(*numeric_column(log_multiply_noise(e, "X", spec))[0] == doctest::Approx(1.0));

    Table with_zero = numeric_table({1.0, 0.0});
    try {
        log_multiply_noise(with_zero, "X", spec);
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::runtime);
        CHECK(std::string(err.what()).find("row 2") != std::string::npos);
    }

    // e_j ~ N(mu, sigma^2) on the log scale, seeded.
    spec.variance = 0.09;
    spec.mean = 0.5;
    spec.seed = 21;
    Table t = numeric_table({2.0, 4.0});
    ReferenceRng ref(21);
    auto got = numeric_column(log_multiply_noise(t, "X", spec));
    CHECK(*got[0] == std::log(2.0) + ref.normal(0.5, 0.3));
    CHECK(*got[1] == std::log(4.0) + ref.normal(0.5, 0.3));
}

TEST_CASE("swap_values reproduces the paper's A/B example") {
    Schema schema{{"Age", AttributeKind::quasi, DataClass::continuous, nullptr, std::nullopt},
                  {"Income", AttributeKind::non_sensitive, DataClass::continuous, nullptr,
                   std::nullopt}};
    Table t(schema, {Row{Cell{"20"}, Cell{"10000"}}, Row{Cell{"30"}, Cell{"30000"}}});
    Table out = swap_values(t, {"Age", "Income"}, {{0, 1}});
    CHECK(*out.cell(0, 0) == "30");
    CHECK(*out.cell(0, 1) == "30000");
    CHECK(*out.cell(1, 0) == "20");
    CHECK(*out.cell(1, 1) == "10000");
}

TEST_CASE("swap_values edge cases") {
    Table t = load_fig2();
    CHECK(swap_values(t, {"Age"}, {}).records() == t.records());
    CHECK_THROWS_AS(swap_values(t, {"Age"}, {{0, 10}}), Error);
    CHECK_THROWS_AS(swap_values(t, {"Age"}, {{0, 1}, {1, 2}}), Error);
    CHECK_THROWS_AS(swap_values(t, {"Age"}, {{3, 3}}), Error);
}

TEST_CASE("swapping preserves per-attribute multisets") {
    std::mt19937_64 gen(404);
    testsupport::RandomTableOptions opt;
    opt.max_rows = 50;
    opt.with_continuous = true;
    for (int i = 0; i < 40; ++i) {
        Table t = testsupport::random_table(gen, opt);
        auto before = testsupport::sorted_columns(t);
        Table swapped = random_swap(t, {"Q0", "Value"}, 0.6, 1000 + i);
        CHECK(testsupport::sorted_columns(swapped) == before);
    }
}

TEST_CASE("random_swap is seeded and fraction 0 is the identity") {
    Table t = load_fig2();
    CHECK(random_swap(t, {"Age", "Income"}, 0.0, 3).records() == t.records());
    Table a = random_swap(t, {"Age", "Income"}, 0.5, 3);
    Table b = random_swap(t, {"Age", "Income"}, 0.5, 3);
    Table c = random_swap(t, {"Age", "Income"}, 0.5, 4);
    CHECK(a.records() == b.records());
    CHECK(a.records() != c.records());
    CHECK_THROWS_AS(random_swap(t, {"Age"}, 1.5, 3), Error);
}

TEST_CASE("code_extremes codes the fig2 income above 75000") {
    Table t = load_fig2();
    Table out = code_extremes(t, "Income", std::nullopt, Threshold{75000.0, false}, std::nullopt,
                              std::nullopt);
    std::size_t income = out.attribute_index("Income");
    CHECK(out.schema()[income].data_class == DataClass::categorical);
    std::size_t coded = 0;
    for (std::size_t r = 0; r < out.record_count(); ++r) {
        if (*out.cell(r, income) == ">75000") {
            ++coded;
            CHECK(r == 7); // the 80000.00 record
        } else {
            CHECK(parse_number(*out.cell(r, income)).has_value());
        }
    }
    CHECK(coded == 1);
}

TEST_CASE("code_extremes without thresholds is the identity, class unchanged") {
    Table t = load_fig2();
    Table out = code_extremes(t, "Income", std::nullopt, std::nullopt, std::nullopt, std::nullopt);
    CHECK(out.records() == t.records());
    CHECK(out.schema()[out.attribute_index("Income")].data_class == DataClass::continuous);
}

TEST_CASE("code_extremes percentile thresholds match a sort-based oracle") {
    Schema schema = load_schema_file(data_file("iris.schema"));
    Table iris = load_table_file(data_file("iris.csv"), schema);
    Table out = code_extremes(iris, "sepal_length", Threshold{5.0, true}, Threshold{95.0, true},
                              std::string("LO"), std::string("HI"));

    // Oracle: sort, nearest-rank percentiles, count strict outliers.
    std::vector<double> values;
    std::size_t col = iris.attribute_index("sepal_length");
    for (std::size_t r = 0; r < iris.record_count(); ++r) {
        values.push_back(*iris.numeric(r, col));
    }
    std::sort(values.begin(), values.end());
    auto rank = [&](double p) {
        std::size_t k = std::size_t(std::ceil(p / 100.0 * double(values.size())));
        return values[std::max<std::size_t>(k, 1) - 1];
    };
    double lo = rank(5.0), hi = rank(95.0);
    std::size_t expected = 0;
    for (double v : values) {
        if (v < lo || v > hi) {
            ++expected;
        }
    }
    std::size_t coded = 0;
    for (std::size_t r = 0; r < out.record_count(); ++r) {
        const Cell& cell = out.cell(r, out.attribute_index("sepal_length"));
        if (*cell == "LO" || *cell == "HI") {
            ++coded;
        }
    }
    CHECK(coded == expected);
    CHECK(coded > 0);
}

TEST_CASE("code_extremes rejects inverted thresholds") {
    Table t = load_fig2();
    CHECK_THROWS_AS(code_extremes(t, "Income", Threshold{50000.0, false},
                                  Threshold{20000.0, false}, std::nullopt, std::nullopt),
                    Error);
}

TEST_CASE("rounding to a base") {
    Table t = numeric_table({12345.0});
    CHECK(*numeric_column(round_values(t, "X", 1000.0))[0] == 12000.0);

    Table already = numeric_table({2000.0, 3000.0});
    CHECK(numeric_column(round_values(already, "X", 1000.0)) == numeric_column(already));

    CHECK_THROWS_AS(round_values(t, "X", 0.0), Error);

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> dist(-1e4, 1e4);
    std::vector<std::optional<double>> values;
    for (int i = 0; i < 200; ++i) {
        values.push_back(dist(gen));
    }
    Table big = numeric_table(values);
    auto rounded = numeric_column(round_values(big, "X", 7.5));
    for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(std::fabs(*rounded[i] - *values[i]) <= 7.5 / 2.0 + 1e-9);
    }
}

TEST_CASE("rounding halves away from zero") {
    Table t = numeric_table({15.0, -15.0, 25.0});
    auto got = numeric_column(round_values(t, "X", 10.0));
    CHECK(*got[0] == 20.0);
    CHECK(*got[1] == -20.0);
    CHECK(*got[2] == 30.0);
}

TEST_CASE("recode_ranges reproduces the age bands") {
    Table t = numeric_table({17.0, 19.0, 25.0, 30.0}, "Age");
    RecodeSpec spec;
    spec.attribute = "Age";
    spec.breakpoints = {16.0, 19.0, 30.0};
    spec.labels = {"16 - 19", "20 - 30"};
    Table out = recode_ranges(t, spec);
    CHECK(out.schema()[0].data_class == DataClass::categorical);
    CHECK(*out.cell(0, 0) == "16 - 19");
    CHECK(*out.cell(1, 0) == "20 - 30"); // half-open rule: 19 joins the second interval
    CHECK(*out.cell(2, 0) == "20 - 30");
    CHECK(*out.cell(3, 0) == "20 - 30"); // last interval closed
}

TEST_CASE("recode_ranges single interval and domain errors") {
    Table t = numeric_table({1.0, 2.0, 3.0});
    RecodeSpec spec;
    spec.attribute = "X";
    spec.breakpoints = {0.0, 10.0};
    spec.labels = {"all"};
    Table out = recode_ranges(t, spec);
    for (std::size_t r = 0; r < out.record_count(); ++r) {
        CHECK(*out.cell(r, 0) == "all");
    }

    spec.breakpoints = {2.0, 10.0};
    CHECK_THROWS_AS(recode_ranges(t, spec), Error); // value 1 below the range
    spec.breakpoints = {10.0, 0.0};
    CHECK_THROWS_AS(recode_ranges(t, spec), Error);
    spec.breakpoints = {0.0, 10.0};
    spec.labels = {"a", "b"};
    CHECK_THROWS_AS(recode_ranges(t, spec), Error);
}

TEST_CASE("blank_and_impute fills from the untouched cells") {
    Table t = numeric_table({1.0, 2.0, 3.0});
    Table out = blank_and_impute(t, "X", {2});
    CHECK(*numeric_column(out)[2] == 1.5);

    CHECK(blank_and_impute(t, "X", {}).records() == t.records());
    CHECK_THROWS_AS(blank_and_impute(t, "X", {0, 1, 2}), Error);

    Table fig2 = load_fig2();
    Table mode = blank_and_impute(fig2, "Diagnosis", {0});
    // Donors: 3x Cancer, 4x HIV, 2x Diabetic -> HIV.
    CHECK(*mode.cell(0, mode.attribute_index("Diagnosis")) == "HIV");
}

TEST_CASE("blank_and_impute matches recomputation on random selections") {
    std::mt19937_64 gen(606);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::optional<double>> values;
        for (int i = 0; i < 30; ++i) {
            values.push_back(dist(gen));
        }
        Table t = numeric_table(values);
        std::vector<std::size_t> selection;
        for (std::size_t r = 0; r < values.size(); ++r) {
            if (gen() % 3 == 0) {
                selection.push_back(r);
            }
        }
        if (selection.size() == values.size() || selection.empty()) {
            continue;
        }
        double sum = 0.0;
        std::size_t n = 0;
        std::set<std::size_t> sel(selection.begin(), selection.end());
        for (std::size_t r = 0; r < values.size(); ++r) {
            if (!sel.count(r)) {
                sum += *values[r];
                ++n;
            }
        }
        double expected = sum / double(n);
        auto got = numeric_column(blank_and_impute(t, "X", selection));
        for (std::size_t r : selection) {
            CHECK(*got[r] == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("blur replaces with class means and falls back to the global mean") {
    Schema schema{{"G", AttributeKind::quasi, DataClass::categorical, nullptr, std::nullopt},
                  {"V", AttributeKind::non_sensitive, DataClass::continuous, nullptr,
                   std::nullopt}};
    Table t(schema, {Row{Cell{"a"}, Cell{"10"}}, Row{Cell{"a"}, Cell{"20"}},
                     Row{Cell{"b"}, Cell{"100"}}, Row{Cell{"c"}, Cell{"7"}},
                     Row{Cell{"c"}, Cell{"7"}}});
    Table out = blur(t, "V", {"G"}, {0, 2, 3});
    std::size_t v = out.attribute_index("V");
    CHECK(*out.numeric(0, v) == doctest::Approx(15.0));  // class {a}: mean(10, 20)
    CHECK(*out.numeric(1, v) == 20.0);                   // not selected
    CHECK(*out.numeric(2, v) == doctest::Approx(28.8));  // singleton: global mean
    CHECK(*out.numeric(3, v) == 7.0);                    // all members equal
    CHECK_THROWS_AS(blur(t, "G", {"G"}, {0}), Error);    // categorical target
}

TEST_CASE("blur class means match a brute-force grouping oracle") {
    std::mt19937_64 gen(707);
    testsupport::RandomTableOptions opt;
    opt.max_rows = 40;
    opt.with_continuous = true;
    opt.missing_rate = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Table t = testsupport::random_table(gen, opt);
        if (t.record_count() == 0) {
            continue;
        }
        std::vector<std::size_t> all;
        for (std::size_t r = 0; r < t.record_count(); ++r) {
            all.push_back(r);
        }
        Table out = blur(t, "Value", {"Q0"}, all);
        std::size_t q = t.attribute_index("Q0");
        std::size_t v = t.attribute_index("Value");
        double global_sum = 0.0;
        std::size_t global_n = 0;
        for (std::size_t r = 0; r < t.record_count(); ++r) {
            if (auto x = t.numeric(r, v)) {
                global_sum += *x;
                ++global_n;
            }
        }
        for (std::size_t r = 0; r < t.record_count(); ++r) {
            if (!t.cell(r, v)) {
                CHECK(!out.cell(r, v));
                continue;
            }
            double sum = 0.0;
            std::size_t n = 0, members = 0;
            for (std::size_t j = 0; j < t.record_count(); ++j) {
                if (t.cell(j, q) == t.cell(r, q)) {
                    ++members;
                    if (auto x = t.numeric(j, v)) {
                        sum += *x;
                        ++n;
                    }
                }
            }
            double expected = members == 1 ? global_sum / double(global_n) : sum / double(n);
            CHECK(*out.numeric(r, v) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("synthesize keeps degenerate columns fixed") {
    Table t = numeric_table({5.0, 5.0, 5.0});
    Table out = synthesize(t, 42);
    CHECK(numeric_column(out) == numeric_column(t));
}

TEST_CASE("synthesize is seeded and preserves schema and shape") {
    Table fig2 = load_fig2();
    Table a = synthesize(fig2, 9);
    Table b = synthesize(fig2, 9);
    Table c = synthesize(fig2, 10);
    CHECK(a.records() == b.records());
    CHECK(a.records() != c.records());
    CHECK(a.record_count() == fig2.record_count());
    CHECK(a.attribute_count() == fig2.attribute_count());
}

TEST_CASE("synthesize avoids verbatim copies of non-degenerate rows") {
    std::mt19937_64 gen(808);
    testsupport::RandomTableOptions opt;
    opt.max_rows = 30;
    opt.with_continuous = true;
    opt.missing_rate = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        Table t = testsupport::random_table(gen, opt);
        if (t.record_count() < 2) {
            continue; // a single record makes the marginals degenerate
        }
        Table out = synthesize(t, 5000 + trial);
        std::set<Row> source(t.records().begin(), t.records().end());
        for (const auto& row : out.records()) {
            CHECK(!source.count(row)); // continuous marginal has spread here
        }
    }
}

TEST_CASE("synthetic categorical frequencies stay near the source") {
    // Binomial bound: within 3*sqrt(p(1-p)/n) per category.
    const std::size_t n = 5000;
    std::vector<Row> rows;
    for (std::size_t i = 0; i < n; ++i) {
        rows.push_back(Row{Cell{i % 10 < 7 ? "yes" : "no"}});
    }
    Schema schema{{"C", AttributeKind::quasi, DataClass::categorical, nullptr, std::nullopt}};
    Table t(schema, std::move(rows));
    Table out = synthesize(t, 31);
    ColumnStats stats = column_stats(out, "C");
    double p_yes = 0.0;
    for (const auto& [value, count] : stats.frequencies) {
        if (value == "yes") {
            p_yes = double(count) / double(n);
        }
    }
    CHECK(std::fabs(p_yes - 0.7) < 3.0 * std::sqrt(0.7 * 0.3 / double(n)));
}

TEST_CASE("every randomized operation touches only its target column") {
    Table fig2 = load_fig2();
    NoiseSpec spec;
    spec.variance = 100.0;
    spec.seed = 12;
    Table noised = add_noise(fig2, "Age", spec);
    for (std::size_t c = 0; c < fig2.attribute_count(); ++c) {
        if (fig2.schema()[c].name == "Age") {
            continue;
        }
        for (std::size_t r = 0; r < fig2.record_count(); ++r) {
            CHECK(noised.cell(r, c) == fig2.cell(r, c));
        }
    }
}
