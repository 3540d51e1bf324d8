#include <algorithm>
#include <cmath>

#include "fairshift/fair_model.hpp"
#include "fairshift/kernels.hpp"

namespace fairshift {

namespace {

void check_lengths(const ModelParams& params, const EncodedDataset& data, const WeightVector& v) {
    if (params.w.size() != data.dim()) {
        throw ValidationError("model has " + std::to_string(params.w.size()) + " weights, data has " +
                              std::to_string(data.dim()) + " features");
    }
    if (v.size() != data.size()) {
        throw ValidationError("weight vector length " + std::to_string(v.size()) + " != sample count " +
                              std::to_string(data.size()));
    }
}

bool single_group(const EncodedDataset& data) {
    const auto& a = data.protected_attr;
    return std::all_of(a.begin(), a.end(), [&](int x) { return x == a.front(); });
}

}  // namespace

ModelParams ModelParams::zeros(const EncodedDataset& data) {
    return ModelParams{std::vector<double>(data.dim(), 0.0), data.feature_names};
}

void ModelParams::validate() const {
    for (double x : w) {
        if (!std::isfinite(x)) {
            throw NumericError("model weights contain a non-finite value");
        }
    }
    if (!feature_names.empty() && feature_names.size() != w.size()) {
        throw ValidationError("model feature names do not match weight count");
    }
}

std::string_view penalty_form_name(PenaltyForm form) {
    return form == PenaltyForm::paper_literal ? "paper_literal" : "hinge_squared";
}

PenaltyForm parse_penalty_form(std::string_view name) {
    if (name == "paper_literal") return PenaltyForm::paper_literal;
    if (name == "hinge_squared") return PenaltyForm::hinge_squared;
    throw ValidationError("unknown penalty form '" + std::string(name) + "'");
}

void PenaltyConfig::validate() const {
    if (!(std::isfinite(beta) && beta >= 0.0 && std::isfinite(sigma) && sigma >= 0.0)) {
        throw ValidationError("penalty beta and sigma must be finite and nonnegative");
    }
}

WeightVector::WeightVector(std::vector<double> values) : values_(std::move(values)) {
    for (double x : values_) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw ValidationError("adversarial weights must be positive and finite");
        }
    }
}

WeightVector WeightVector::ones(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0)); }

WeightVector WeightVector::scaled(double factor) const {
    std::vector<double> out(values_);
    for (double& x : out) {
        x *= factor;
    }
    return WeightVector(std::move(out));
}

double logistic(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double logistic_nll(double z, int y) {
    // softplus(z) - y z, softplus(z) = max(z, 0) + log1p(exp(-|z|))
    const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    return softplus - (y == 1 ? z : 0.0);
}

double decision_value(const ModelParams& params, std::span<const double> x) {
    if (x.size() != params.w.size()) {
        throw ValidationError("decision_value: dimension mismatch");
    }
    return kernels::dot(params.w, x);
}

Prediction predict(const ModelParams& params, std::span<const double> x) {
    const double z = decision_value(params, x);
    return {z >= 0.0 ? 1 : 0, logistic(z)};
}

std::vector<double> decision_values(const ModelParams& params, const EncodedDataset& data) {
    if (params.w.size() != data.dim()) {
        throw ValidationError("decision_values: dimension mismatch");
    }
    std::vector<double> z(data.size());
    kernels::matvec(data.features.values(), data.dim(), params.w, z);
    return z;
}

std::vector<int> predict_labels(const ModelParams& params, const EncodedDataset& data) {
    const auto z = decision_values(params, data);
    std::vector<int> out(z.size());
    std::transform(z.begin(), z.end(), out.begin(), [](double v) { return v >= 0.0 ? 1 : 0; });
    return out;
}

double mean_protected(const EncodedDataset& data) {
    double s = 0.0;
    for (int a : data.protected_attr) {
        s += a;
    }
    return s / static_cast<double>(data.size());
}

double weighted_loss(const ModelParams& params, const EncodedDataset& data, const WeightVector& v) {
    check_lengths(params, data, v);
    const auto z = decision_values(params, data);
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        total += v[i] * logistic_nll(z[i], data.labels[i]);
    }
    return total / static_cast<double>(data.size());
}

double boundary_covariance(const ModelParams& params, const EncodedDataset& data, const WeightVector& v) {
    check_lengths(params, data, v);
    if (single_group(data)) {
        warn("all samples share one protected group; boundary covariance is identically 0");
        return 0.0;
    }
    const double a_bar = mean_protected(data);
    const auto z = decision_values(params, data);
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        total += (data.protected_attr[i] - a_bar) * v[i] * z[i];
    }
    return total / static_cast<double>(data.size());
}

double penalty_objective(const ModelParams& params, const EncodedDataset& data, const WeightVector& v,
                         const PenaltyConfig& cfg) {
    check_lengths(params, data, v);
    return PenalizedObjective(data, v.values(), v.values(), cfg).evaluate(params.w, false).value;
}

std::vector<double> gradient(const ModelParams& params, const EncodedDataset& data, const WeightVector& v,
                             const PenaltyConfig& cfg) {
    check_lengths(params, data, v);
    return PenalizedObjective(data, v.values(), v.values(), cfg).evaluate(params.w, true).grad;
}

PenalizedObjective::PenalizedObjective(const EncodedDataset& data, std::span<const double> loss_weights,
                                       std::span<const double> fairness_weights, PenaltyConfig cfg)
    : data_(data), loss_weights_(loss_weights), fairness_weights_(fairness_weights), cfg_(cfg) {
    cfg_.validate();
    if (loss_weights.size() != data.size() || fairness_weights.size() != data.size()) {
        throw ValidationError("objective weights do not match the sample count");
    }
    const double n = static_cast<double>(data.size());
    a_bar_ = mean_protected(data);
    fair_coeff_.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        fair_coeff_[i] = (data.protected_attr[i] - a_bar_) * fairness_weights[i] / n;
    }
    // C is linear in w: C = <cov_direction, w>.
    cov_direction_.assign(data.dim(), 0.0);
    kernels::matvec_transposed_accumulate(data.features.values(), data.dim(), fair_coeff_, cov_direction_);
    z_.resize(data.size());
    residual_.resize(data.size());
}

ObjectiveEvaluation PenalizedObjective::evaluate(std::span<const double> w, bool with_gradient) const {
    if (w.size() != data_.dim()) {
        throw ValidationError("objective: dimension mismatch");
    }
    const double n = static_cast<double>(data_.size());
    kernels::matvec(data_.features.values(), data_.dim(), w, z_);

    ObjectiveEvaluation out;
    double loss = 0.0;
    double cov = 0.0;
    for (std::size_t i = 0; i < z_.size(); ++i) {
        const double z = z_[i];
        const int y = data_.labels[i];
        loss += loss_weights_[i] * logistic_nll(z, y);
        cov += fair_coeff_[i] * z;
        residual_[i] = loss_weights_[i] * (logistic(z) - y) / n;
    }
    out.loss = loss / n;
    out.covariance = cov;

    double dpenalty = 0.0;  // d penalty / d C
    if (cfg_.form == PenaltyForm::paper_literal) {
        const double e = cov - cfg_.sigma;
        out.penalty = cfg_.beta * e * e;
        dpenalty = 2.0 * cfg_.beta * e;
    } else {
        const double e = std::max(std::abs(cov) - cfg_.sigma, 0.0);
        out.penalty = cfg_.beta * e * e;
        dpenalty = e > 0.0 ? 2.0 * cfg_.beta * e * (cov > 0.0 ? 1.0 : -1.0) : 0.0;
    }
    out.value = out.loss + out.penalty;

    if (with_gradient) {
        out.grad.assign(data_.dim(), 0.0);
        kernels::matvec_transposed_accumulate(data_.features.values(), data_.dim(), residual_, out.grad);
        if (dpenalty != 0.0) {
            kernels::axpy(dpenalty, cov_direction_, out.grad);
        }
    }
    return out;
}

}  // namespace fairshift
