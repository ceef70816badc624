#pragma once

#include "core/metrics.hpp"
#include "core/table.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sdc {

/// One anonymization step: a method name plus its parameters.
struct PipelineStep {
    std::string method;
    std::map<std::string, std::string> params;
    std::size_t index = 0; // 0-based position; sub-seed = pipeline seed + index
};

/// Declarative pipeline description. Text format, one statement per line:
///
///   # comment
///   input: PATH          schema: PATH         output: PATH
///   report: PATH         seed: N
///   report_quasi: a,b    report_sensitive: x  report_k: 2   report_l: 2
///   report_label: y      report_features: p,q report_folds: N
///
///   step: METHOD
///   param = value
///   ...
///
/// Steps run in file order. Relative paths resolve against the process
/// working directory.
struct PipelineConfig {
    std::string input;
    std::string schema;
    std::string output;
    std::string report;
    std::uint64_t seed = 0;
    bool seed_set = false;

    std::vector<std::string> report_quasi;
    std::optional<std::string> report_sensitive;
    std::size_t report_k = 2;
    std::optional<std::size_t> report_l;
    std::optional<std::string> report_label;
    std::vector<std::string> report_features;
    std::size_t report_folds = 0;

    std::vector<PipelineStep> steps;

    static PipelineConfig parse(std::istream& in, const std::string& origin);
    static PipelineConfig parse_file(const std::string& path);
};

/// Checks one step's parameters against the schema without touching records:
/// unknown methods, unknown/missing parameters, class mismatches, bad levels
/// and malformed numbers all fail here.
void validate_step(const PipelineStep& step, const Schema& schema);

/// Runs one step. Data-dependent failures (log of a non-positive value,
/// impossible k, empty donor pool) surface here as runtime errors.
Table apply_step(const Table& table, const PipelineStep& step, std::uint64_t sub_seed);

struct PipelineOutcome {
    Table output;
    UtilityReport report;
    std::string summary; // one line per step for the CLI
};

/// Validates every step, then applies them in order with sub-seed
/// seed + index. Does not write any file.
PipelineOutcome run_pipeline(const PipelineConfig& config, const Table& input);

/// Full file-to-file run: load, validate, transform, write the privatized
/// CSV, write the report last. On failure no partial outputs are left
/// behind. `seed_override` (when set) wins over the config seed; with
/// neither present the SDC_SEED environment variable, then 0, applies.
std::string run_pipeline_files(const PipelineConfig& config,
                               const std::optional<std::uint64_t>& seed_override);

/// Noise-addition demo on the Fisher iris table: privatizes the four
/// measurements with sigma = sigma_scale * sample std (sub-seed = seed +
/// attribute index), writes original/privatized petal scatter CSVs, the
/// privatized table and a utility report with the petal-feature gauge into
/// out_dir. Accepts the headerless UCI file as well as a headered CSV.
/// A row count other than 150 is warned about, not fatal.
std::string iris_demo(const std::string& iris_csv, const std::string& out_dir,
                      std::uint64_t seed, double sigma_scale);

/// Resolves a seed: explicit value, else SDC_SEED from the environment, else 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& explicit_seed);

} // namespace sdc
