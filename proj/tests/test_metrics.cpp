#include "core/metrics.hpp"

#include "core/error.hpp"
#include "core/perturbative.hpp"
#include "core/rng.hpp"
#include "core/table.hpp"
#include "core/text.hpp"
#include "support/paths.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace sdc;
using testsupport::data_file;

namespace {

Table numeric_table(const std::vector<double>& values, const char* name = "X") {
    Schema schema{{name, AttributeKind::quasi, DataClass::continuous, nullptr, std::nullopt}};
    std::vector<Row> rows;
    for (double v : values) {
        rows.push_back(Row{Cell{format_number(v)}});
    }
    return Table(schema, std::move(rows));
}

Table categorical_table(const std::vector<std::string>& values, const char* name = "C") {
    Schema schema{{name, AttributeKind::quasi, DataClass::categorical, nullptr, std::nullopt}};
    std::vector<Row> rows;
    for (const auto& v : values) {
        rows.push_back(Row{Cell{v}});
    }
    return Table(schema, std::move(rows));
}

Table load_iris() {
    Schema schema = load_schema_file(data_file("iris.schema"));
    return load_table_file(data_file("iris.csv"), schema);
}

// Two synthetic blobs far apart: label by blob.
Table blob_table(double separation, std::size_t n, std::uint64_t seed) {
    Schema schema{{"f1", AttributeKind::quasi, DataClass::continuous, nullptr, std::nullopt},
                  {"f2", AttributeKind::quasi, DataClass::continuous, nullptr, std::nullopt},
                  {"label", AttributeKind::sensitive, DataClass::categorical, nullptr,
                   std::nullopt}};
    Rng rng(seed);
    std::vector<Row> rows;
    for (std::size_t i = 0; i < n; ++i) {
        double center = (i % 2 == 0) ? 0.0 : separation;
        rows.push_back(Row{Cell{format_number(center + rng.normal(0.0, 1.0))},
                           Cell{format_number(center + rng.normal(0.0, 1.0))},
                           Cell{i % 2 == 0 ? "A" : "B"}});
    }
    return Table(schema, std::move(rows));
}

} // namespace

TEST_CASE("identical columns have zero distance") {
    Table t = numeric_table({1, 2, 3, 4});
    CHECK(distribution_distance(t, t, "X") == 0.0);
    Table c = categorical_table({"a", "b", "b"});
    CHECK(distribution_distance(c, c, "C") == 0.0);
}

TEST_CASE("disjoint supports have distance one") {
    Table a = numeric_table({1, 2, 3});
    Table b = numeric_table({10, 20, 30});
    CHECK(distribution_distance(a, b, "X") == 1.0);
    Table ca = categorical_table({"a", "a"});
    Table cb = categorical_table({"b", "c"});
    CHECK(distribution_distance(ca, cb, "C") == 1.0);
}

TEST_CASE("KS statistic matches a naive CDF sweep") {
    Rng rng(515);
    std::vector<double> xs, ys;
    for (int i = 0; i < 1000; ++i) {
        xs.push_back(rng.normal(0.0, 1.0));
        ys.push_back(rng.normal(3.0, 1.0));
    }
    Table a = numeric_table(xs);
    Table b = numeric_table(ys);
    double got = distribution_distance(a, b, "X");

    // Oracle: evaluate both empirical CDFs at every pooled point.
    double expected = 0.0;
    std::vector<double> pooled = xs;
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    for (double p : pooled) {
        double fa = double(std::count_if(xs.begin(), xs.end(), [&](double v) { return v <= p; })) /
                    double(xs.size());
        double fb = double(std::count_if(ys.begin(), ys.end(), [&](double v) { return v <= p; })) /
                    double(ys.size());
        expected = std::max(expected, std::fabs(fa - fb));
    }
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    CHECK(got > 0.8); // N(0,1) vs N(3,1) are far apart
}

TEST_CASE("total variation distance by hand") {
    Table a = categorical_table({"x", "x", "y", "y"});
    Table b = categorical_table({"x", "y", "y", "y"});
    // p = (.5, .5), q = (.25, .75) -> tv = 0.25
    CHECK(distribution_distance(a, b, "C") == doctest::Approx(0.25));
}

TEST_CASE("distance rejects class mismatches and empty columns") {
    Table a = numeric_table({1});
    Table b = categorical_table({"1"}, "X");
    CHECK_THROWS_AS(distribution_distance(a, b, "X"), Error);
    Schema schema{{"X", AttributeKind::quasi, DataClass::continuous, nullptr, std::nullopt}};
    Table empty(schema, {Row{std::nullopt}});
    CHECK_THROWS_AS(distribution_distance(a, empty, "X"), Error);
}

TEST_CASE("gauge on identical tables returns identical accuracies") {
    Table iris = load_iris();
    GaugeResult r = separability_gauge(iris, iris, "species",
                                       {"petal_length", "petal_width"}, 0, 1);
    CHECK(r.baseline_accuracy == r.privatized_accuracy);
    CHECK(r.evaluated_records == 150);
    CHECK(r.baseline_accuracy > 0.9);
}

TEST_CASE("well-separated blobs classify almost perfectly") {
    Table blobs = blob_table(10.0, 200, 99);
    GaugeResult r = separability_gauge(blobs, blobs, "label", {"f1", "f2"}, 0, 1);
    CHECK(r.baseline_accuracy >= 0.99);
}

TEST_CASE("noise at one sample std drops the iris gauge") {
    Table iris = load_iris();
    std::size_t below = 0;
    const int seeds = 10;
    GaugeResult base = separability_gauge(iris, iris, "species",
                                          {"petal_length", "petal_width"}, 0, 1);
    for (int s = 0; s < seeds; ++s) {
        Table priv = iris;
        int i = 0;
        for (const char* attr : {"petal_length", "petal_width"}) {
            ColumnStats stats = column_stats(iris, attr);
            NoiseSpec spec;
            spec.variance = *stats.sample_std * *stats.sample_std;
            spec.seed = std::uint64_t(s * 10 + i++);
            priv = add_noise(priv, attr, spec);
        }
        GaugeResult r = separability_gauge(iris, priv, "species",
                                           {"petal_length", "petal_width"}, 0, 1);
        if (r.privatized_accuracy < base.baseline_accuracy) {
            ++below;
        }
    }
    CHECK(below == seeds);
}

TEST_CASE("gauge validates labels, features and fold counts") {
    Table iris = load_iris();
    CHECK_THROWS_AS(separability_gauge(iris, iris, "petal_width", {"petal_length"}, 0, 1), Error);
    CHECK_THROWS_AS(separability_gauge(iris, iris, "species", {"species"}, 0, 1), Error);
    CHECK_THROWS_AS(separability_gauge(iris, iris, "species", {}, 0, 1), Error);
    CHECK_THROWS_AS(separability_gauge(iris, iris, "species", {"petal_length"}, 151, 1), Error);

    Schema schema{{"f", AttributeKind::quasi, DataClass::continuous, nullptr, std::nullopt},
                  {"label", AttributeKind::sensitive, DataClass::categorical, nullptr,
                   std::nullopt}};
    Table degenerate(schema, {Row{Cell{"1"}, Cell{"a"}}, Row{Cell{"2"}, Cell{"a"}}});
    CHECK_THROWS_AS(separability_gauge(degenerate, degenerate, "label", {"f"}, 0, 1), Error);
}

TEST_CASE("k-fold gauge is deterministic in the seed") {
    Table iris = load_iris();
    GaugeResult a = separability_gauge(iris, iris, "species", {"petal_length"}, 5, 42);
    GaugeResult b = separability_gauge(iris, iris, "species", {"petal_length"}, 5, 42);
    CHECK(a.baseline_accuracy == b.baseline_accuracy);
    CHECK(a.folds == 5);
}

TEST_CASE("identity report is all zeros") {
    Table iris = load_iris();
    ReportConfig config;
    UtilityReport report = build_report(iris, iris, config);
    CHECK(report.records_original == 150);
    CHECK(report.records_privatized == 150);
    CHECK(report.records_suppressed == 0);
    CHECK(*report.cells_suppressed == 0);
    for (const auto& entry : report.attributes) {
        if (entry.mean_delta) {
            CHECK(*entry.mean_delta == 0.0);
        }
        if (entry.std_delta) {
            CHECK(*entry.std_delta == 0.0);
        }
        REQUIRE(entry.distance);
        CHECK(*entry.distance == 0.0);
    }
    std::string text = report.render();
    CHECK(text.find("[metrics]") != std::string::npos);
    CHECK(text.find("records.original=150") != std::string::npos);
}

TEST_CASE("report is byte-identical across runs and carries the anonymity section") {
    Schema schema = load_schema_file(data_file("fig2.schema"));
    Table fig2 = load_table_file(data_file("fig2.csv"), schema);
    NoiseSpec spec;
    spec.variance = 25.0;
    spec.seed = 5;
    Table priv = add_noise(fig2, "Age", spec);

    ReportConfig config;
    config.quasi = {"Gender"};
    config.k = 2;
    config.sensitive = "Diagnosis";
    config.l = 2;
    config.seed = 5;
    UtilityReport r1 = build_report(fig2, priv, config);
    UtilityReport r2 = build_report(fig2, priv, config);
    CHECK(r1.render() == r2.render());
    REQUIRE(r1.anonymity);
    CHECK(r1.anonymity->k_achieved == 5);
    CHECK(r1.render().find("anonymity.k_achieved=5") != std::string::npos);
}

TEST_CASE("report distances stay in range on a mixed pipeline") {
    Schema schema = load_schema_file(data_file("fig2.schema"));
    Table fig2 = load_table_file(data_file("fig2.csv"), schema);
    Table priv = synthesize(fig2, 77);
    ReportConfig config;
    UtilityReport report = build_report(fig2, priv, config);
    for (const auto& entry : report.attributes) {
        if (entry.distance) {
            CHECK(*entry.distance >= 0.0);
            CHECK(*entry.distance <= 1.0);
        }
    }
}

TEST_CASE("scatter export writes plot-ready rows") {
    Table iris = load_iris();
    std::ostringstream out;
    scatter_export(iris, "petal_length", "petal_width", "species", out);
    std::string text = out.str();
    std::size_t lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == 151);
    CHECK(text.rfind("x,y,label\n", 0) == 0);
    CHECK(text.find("1.4,0.2,Iris-setosa") != std::string::npos);
    CHECK_THROWS_AS(scatter_export(iris, "species", "petal_width", "petal_length", out), Error);
}

TEST_CASE("reloaded scatter export matches the source column stats") {
    Table iris = load_iris();
    testsupport::TempDir dir;
    scatter_export_file(iris, "petal_length", "petal_width", "species", dir.file("s.csv"));
    Schema schema{{"x", AttributeKind::quasi, DataClass::continuous, nullptr, std::nullopt},
                  {"y", AttributeKind::quasi, DataClass::continuous, nullptr, std::nullopt},
                  {"label", AttributeKind::sensitive, DataClass::categorical, nullptr,
                   std::nullopt}};
    Table back = load_table_file(dir.file("s.csv"), schema);
    REQUIRE(back.record_count() == 150);
    ColumnStats sx = column_stats(back, "x");
    ColumnStats orig = column_stats(iris, "petal_length");
    CHECK(*sx.mean == *orig.mean);
    CHECK(*sx.sample_std == *orig.sample_std);
    ColumnStats sl = column_stats(back, "label");
    ColumnStats species = column_stats(iris, "species");
    CHECK(sl.frequencies == species.frequencies);
}

TEST_CASE("scatter export of a privatized table differs only in numeric cells") {
    Table iris = load_iris();
    NoiseSpec spec;
    spec.variance = 1.0;
    spec.seed = 4;
    Table priv = add_noise(iris, "petal_length", spec);
    std::ostringstream a, b;
    scatter_export(iris, "petal_length", "petal_width", "species", a);
    scatter_export(priv, "petal_length", "petal_width", "species", b);
    std::istringstream ia(a.str()), ib(b.str());
    std::string la, lb;
    while (std::getline(ia, la) && std::getline(ib, lb)) {
        auto tail = [](const std::string& s) { return s.substr(s.find(',')); };
        CHECK(tail(la) == tail(lb)); // y and label agree, x may differ
    }
}
