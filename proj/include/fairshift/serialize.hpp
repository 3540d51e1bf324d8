#pragma once

// JSON forms of the persisted types plus small file helpers. Doubles go
// through nlohmann::json's shortest round-trip formatting, so write -> read
// reproduces values exactly.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fairshift/dataset.hpp"
#include "fairshift/fair_model.hpp"
#include "fairshift/metrics.hpp"
#include "fairshift/robust_optimizer.hpp"
#include "fairshift/selection.hpp"

namespace fairshift {

using Json = nlohmann::ordered_json;

Json to_json(const Schema& schema);
Schema schema_from_json(const Json& j);

Json to_json(const BiasSpec& spec);
BiasSpec bias_spec_from_json(const Json& j);

Json to_json(const FeatureBlock& block);
FeatureBlock feature_block_from_json(const Json& j);

Json to_json(const SelectionEstimate& est);
SelectionEstimate selection_estimate_from_json(const Json& j);

Json to_json(const ClusterModel& model);
ClusterModel cluster_model_from_json(const Json& j);

Json to_json(const ModelParams& params);
ModelParams model_params_from_json(const Json& j);

Json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const Json& j, const TrainConfig& defaults = {});

Json to_json(const TrainResult& result);
TrainResult train_result_from_json(const Json& j);

Json to_json(const MetricsReport& report);
MetricsReport metrics_report_from_json(const Json& j);

// round,objective_after_model_step,objective,covariance,lp_value,lp_status,step_halvings
std::string history_csv(const TrainResult& result);

// Writes to a temporary sibling, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);
Json read_json_file(const std::filesystem::path& path);

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

}  // namespace fairshift
