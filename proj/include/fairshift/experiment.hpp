#pragma once

// The experiment pipeline behind the command-line tool: config loading with
// dotted-key overrides, cached data preparation, per-method training over
// repetitions, re-evaluation, hyperparameter sweeps and cross-method reports.
//
// Artifacts live under output_dir and are addressed by a hash of the
// effective config:
//
//   prepared-<hash>/       encoded.csv, splits.json, manifest.json
//   results/<method>-<hash>/
//                          result_rep<i>.json, history_rep<i>.csv,
//                          metrics.json, metrics_reps.csv
//   sweeps/<param>-<hash>.{json,txt}
//   report.{json,txt}

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fairshift/dataset.hpp"
#include "fairshift/metrics.hpp"
#include "fairshift/robust_optimizer.hpp"
#include "fairshift/serialize.hpp"

namespace fairshift {

enum class Method { lr, fair_lr, rflearn1_minus, rflearn1, rflearn2_minus, rflearn2 };

std::string_view method_name(Method method);
// Display name used in tables, e.g. "RFLearn1-".
std::string_view method_label(Method method);
Method parse_method(std::string_view name);
// Row order of the comparison table.
const std::vector<Method>& all_methods();

struct Hyperparameters {
    double beta = 1.0;
    double sigma = 0.2;
    std::optional<double> delta;
    std::optional<double> rho;
    std::optional<std::size_t> k_clusters;
    std::size_t numeric_bins = 8;
    PenaltyForm penalty_form = PenaltyForm::paper_literal;
    std::size_t kmeans_max_iter = 100;
    double fairness_threshold = kDefaultFairnessThreshold;
};

struct ExperimentConfig {
    std::filesystem::path dataset_path;
    Schema schema;
    BiasSpec bias;
    Method method = Method::lr;
    Hyperparameters hyperparameters;
    TrainConfig training;
    std::size_t repetitions = 1;
    std::filesystem::path output_dir = "runs";

    void validate() const;
};

// Parses a config file; malformed JSON is a ValidationError naming the byte offset.
Json load_config_json(const std::filesystem::path& path);

// "a.b.c=value". The value is parsed as JSON when possible, else taken as a string.
void apply_override(Json& config, const std::string& assignment);

// Relative dataset paths resolve against `base_dir`.
ExperimentConfig config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
// Canonical form used for hashing and embedded in artifacts. Excludes output_dir.
Json config_to_json(const ExperimentConfig& cfg);

struct PreparedData {
    std::filesystem::path dir;
    EncodedDataset data;
    std::vector<std::vector<std::size_t>> train_rows;  // per repetition
    std::vector<std::size_t> test_rows;
    Json manifest;

    SplitResult split(std::size_t rep) const;
};

std::string prepare_key(const ExperimentConfig& cfg);
// Reuses a complete cache for the same key; otherwise builds and writes it.
PreparedData prepare(const ExperimentConfig& cfg);
// Throws ValidationError naming the missing artifact if the cache is absent.
PreparedData load_prepared(const ExperimentConfig& cfg);

struct RepetitionOutcome {
    std::size_t rep = 0;
    std::optional<TrainResult> result;
    std::optional<MetricsReport> metrics;
    Json diagnostics;
    std::string error;  // set when the fit failed numerically
};

// Training config for one repetition: base seed plus rep, penalty from the hyperparameters.
TrainConfig repetition_train_config(const ExperimentConfig& cfg, std::size_t rep);
RepetitionOutcome run_repetition(const ExperimentConfig& cfg, const SplitResult& split, std::size_t rep);

struct TrainSummary {
    std::filesystem::path dir;
    std::optional<MetricsReport> mean;
    std::vector<MetricsReport> per_rep;
    std::vector<std::pair<std::size_t, std::string>> failures;
};

std::filesystem::path results_dir(const ExperimentConfig& cfg);
TrainSummary train(const ExperimentConfig& cfg);
// Recomputes metrics from the persisted models and writes evaluation.json.
TrainSummary evaluate(const ExperimentConfig& cfg);

struct SweepSummary {
    std::filesystem::path json_path;
    std::filesystem::path text_path;
    std::string parameter;
    std::vector<double> values;
    std::vector<MetricsReport> rows;
    std::string table;
};

SweepSummary sweep(const ExperimentConfig& cfg, const std::string& parameter, const std::vector<double>& values);

struct ReportSummary {
    std::string table;
    Json json;
};

// `dir` may be an output_dir (results/ is scanned) or a single results directory.
ReportSummary report(const std::filesystem::path& dir);

}  // namespace fairshift
