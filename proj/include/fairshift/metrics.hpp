#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairshift/dataset.hpp"
#include "fairshift/fair_model.hpp"
#include "fairshift/robust_optimizer.hpp"

namespace fairshift {

inline constexpr double kDefaultFairnessThreshold = 0.05;

double accuracy(std::span<const int> predictions, std::span<const int> labels);

// |P(yhat = 1 | a = 1) - P(yhat = 1 | a = 0)|
double risk_difference(std::span<const int> predictions, std::span<const int> protected_attr);

// Same gap with each sample counted with weight v_i.
double weighted_risk_difference(std::span<const int> predictions, std::span<const int> protected_attr,
                                std::span<const double> v);

struct MetricsReport {
    std::string method;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double train_rd = 0.0;
    double test_rd = 0.0;
    std::optional<double> weighted_train_rd;
    double fairness_threshold = kDefaultFairnessThreshold;
    bool train_fair = false;
    bool test_fair = false;
    std::map<std::string, std::string> hyperparameters;
    std::size_t repetitions = 1;
    std::string aggregation = "mean";
};

MetricsReport evaluate(const TrainResult& result, const EncodedDataset& train, const EncodedDataset& test,
                       double fairness_threshold = kDefaultFairnessThreshold);

// Arithmetic mean over repetitions; fairness verdicts recomputed on the means.
MetricsReport average(const std::vector<MetricsReport>& reports);

// Aligned text table with the columns
//   Method | Training Acc | Test Acc | Training RD | Test RD
// `label_column` names the first column (e.g. "Method", "delta", "rho").
std::string format_table(const std::vector<MetricsReport>& rows, const std::string& label_column = "Method",
                         const std::vector<std::string>& labels = {});

}  // namespace fairshift
