#pragma once

// Logistic regression with per-sample weights and a boundary-fairness penalty.
//
//   loss(w; v)  = (1/N) sum_i v_i * nll(w.x_i, y_i)
//   C(w; v)     = (1/N) sum_i (a_i - a_bar) * v_i * w.x_i,   a_bar unweighted
//   objective   = loss + beta * (C - sigma)^2                 (paper_literal)
//               = loss + beta * max(|C| - sigma, 0)^2         (hinge_squared)

#include <span>
#include <string>
#include <vector>

#include "fairshift/dataset.hpp"

namespace fairshift {

struct ModelParams {
    std::vector<double> w;  // last coordinate multiplies the bias column
    std::vector<std::string> feature_names;

    static ModelParams zeros(const EncodedDataset& data);
    void validate() const;
};

enum class PenaltyForm { paper_literal, hinge_squared };

std::string_view penalty_form_name(PenaltyForm form);
PenaltyForm parse_penalty_form(std::string_view name);

struct PenaltyConfig {
    double beta = 1.0;
    double sigma = 0.2;
    PenaltyForm form = PenaltyForm::paper_literal;

    void validate() const;
};

// Positive per-sample weights v_i = P(s=1) / P(s=1 | x_i, a_i).
class WeightVector {
public:
    WeightVector() = default;
    explicit WeightVector(std::vector<double> values);
    static WeightVector ones(std::size_t n);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }
    WeightVector scaled(double factor) const;

    bool operator==(const WeightVector&) const = default;

private:
    std::vector<double> values_;
};

struct Prediction {
    int label = 0;
    double probability = 0.0;
};

double logistic(double z);
// -[y ln p + (1 - y) ln(1 - p)] with p = logistic(z), stable for any z.
double logistic_nll(double z, int y);

double decision_value(const ModelParams& params, std::span<const double> x);
// Label 1 iff w.x >= 0.
Prediction predict(const ModelParams& params, std::span<const double> x);

std::vector<double> decision_values(const ModelParams& params, const EncodedDataset& data);
std::vector<int> predict_labels(const ModelParams& params, const EncodedDataset& data);

double weighted_loss(const ModelParams& params, const EncodedDataset& data, const WeightVector& v);
double boundary_covariance(const ModelParams& params, const EncodedDataset& data, const WeightVector& v);
double penalty_objective(const ModelParams& params, const EncodedDataset& data, const WeightVector& v,
                         const PenaltyConfig& cfg);
std::vector<double> gradient(const ModelParams& params, const EncodedDataset& data, const WeightVector& v,
                             const PenaltyConfig& cfg);

// Value and gradient in one pass, with separate weights for the loss term
// and the covariance term (the unweighted-fairness variants pass ones for
// the latter).
struct ObjectiveEvaluation {
    double loss = 0.0;
    double covariance = 0.0;
    double penalty = 0.0;
    double value = 0.0;
    std::vector<double> grad;  // empty unless requested
};

class PenalizedObjective {
public:
    PenalizedObjective(const EncodedDataset& data, std::span<const double> loss_weights,
                       std::span<const double> fairness_weights, PenaltyConfig cfg);

    ObjectiveEvaluation evaluate(std::span<const double> w, bool with_gradient) const;
    double a_bar() const { return a_bar_; }

private:
    const EncodedDataset& data_;
    std::span<const double> loss_weights_;
    std::span<const double> fairness_weights_;
    PenaltyConfig cfg_;
    double a_bar_ = 0.0;
    std::vector<double> fair_coeff_;  // (a_i - a_bar) * fairness weight_i / N
    std::vector<double> cov_direction_;  // sum_i fair_coeff_i x_i, independent of w
    mutable std::vector<double> z_;
    mutable std::vector<double> residual_;
};

double mean_protected(const EncodedDataset& data);

}  // namespace fairshift
