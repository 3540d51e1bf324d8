#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairshift/robust_optimizer.hpp"

namespace fairshift {

namespace {

constexpr std::size_t kMaxHalvings = 60;

// One gradient step with step-halving until the objective does not increase.
// `step` carries over between calls: each attempt starts at twice the last
// accepted size, capped at the learning rate. Returns false once a step no
// longer changes w; throws NumericError if halving never stops the objective
// from increasing.
bool descent_step(const PenalizedObjective& objective, std::vector<double>& w, ObjectiveEvaluation& current,
                  double learning_rate, double& carried_step, std::size_t& halvings) {
    std::vector<double> trial(w.size());
    double step = std::min(learning_rate, 2.0 * carried_step);
    for (std::size_t h = 0; h <= kMaxHalvings; ++h) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            trial[j] = w[j] - step * current.grad[j];
        }
        if (trial == w) {
            return false;  // the step no longer moves w: stationary to working precision
        }
        ObjectiveEvaluation next = objective.evaluate(trial, true);
        if (std::isfinite(next.value) && next.value <= current.value) {
            w.swap(trial);
            current = std::move(next);
            carried_step = step;
            return true;
        }
        step *= 0.5;
        ++halvings;
    }
    throw NumericError("no step size down to learning_rate * 2^-" + std::to_string(kMaxHalvings) +
                       " kept the objective from increasing; the learning rate is too large");
}

}  // namespace

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ValidationError("learning_rate must be positive");
    }
    if (inner_gd_steps == 0 || outer_rounds == 0) {
        throw ValidationError("inner_gd_steps and outer_rounds must be positive");
    }
    if (!(tolerance > 0.0)) {
        throw ValidationError("tolerance must be positive");
    }
    penalty.validate();
}

InnerLPProblem build_inner_problem(const EncodedDataset& data, const ModelParams& params, const RatioBounds& bounds,
                                   double sigma, FairnessWeighting weighting) {
    if (bounds.size() != data.size()) {
        throw ValidationError("ratio bounds do not match the sample count");
    }
    const auto z = decision_values(params, data);
    const double a_bar = mean_protected(data);
    const std::size_t m = bounds.variable_count();

    InnerLPProblem p;
    p.sigma = sigma;
    p.scale = 1.0 / static_cast<double>(data.size());
    p.loss_coeffs.assign(m, 0.0);
    p.fairness_coeffs.assign(m, 0.0);
    p.lo.assign(m, 0.0);
    p.hi.assign(m, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::size_t j = bounds.tied_groups ? (*bounds.tied_groups)[i] : i;
        p.loss_coeffs[j] += logistic_nll(z[i], data.labels[i]);
        if (weighting == FairnessWeighting::weighted) {
            p.fairness_coeffs[j] += (data.protected_attr[i] - a_bar) * z[i];
        }
        p.lo[j] = bounds.lo[i];
        p.hi[j] = bounds.hi[i];
    }
    return p;
}

WeightVector expand_weights(const RatioBounds& bounds, const std::vector<double>& variables) {
    if (!bounds.tied_groups) {
        return WeightVector(variables);
    }
    std::vector<double> v(bounds.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = variables.at((*bounds.tied_groups)[i]);
    }
    return WeightVector(std::move(v));
}

TrainResult fit(const EncodedDataset& data, const RatioBounds& bounds, const TrainConfig& cfg,
                FairnessWeighting weighting) {
    cfg.validate();
    bounds.validate();
    if (bounds.size() != data.size()) {
        throw ValidationError("ratio bounds cover " + std::to_string(bounds.size()) + " samples, data has " +
                              std::to_string(data.size()));
    }

    TrainResult result;
    result.method = weighting == FairnessWeighting::weighted ? "robust" : "robust_unweighted_fairness";
    result.params = ModelParams::zeros(data);
    result.weights = WeightVector(bounds.nominal);
    const std::vector<double> ones(data.size(), 1.0);

    auto make_objective = [&](const WeightVector& v) {
        const std::span<const double> fair =
            weighting == FairnessWeighting::weighted ? v.values() : std::span<const double>(ones);
        return PenalizedObjective(data, v.values(), fair, cfg.penalty);
    };

    result.initial_objective = make_objective(result.weights).evaluate(result.params.w, false).value;
    double previous = result.initial_objective;

    for (std::size_t round = 0; round < cfg.outer_rounds; ++round) {
        RoundRecord rec;
        rec.round = round;
        {
            const PenalizedObjective objective = make_objective(result.weights);
            ObjectiveEvaluation current = objective.evaluate(result.params.w, true);
            double step = cfg.learning_rate;
            for (std::size_t s = 0; s < cfg.inner_gd_steps; ++s) {
                if (!descent_step(objective, result.params.w, current, cfg.learning_rate, step, rec.step_halvings)) {
                    break;
                }
            }
            if (!std::isfinite(current.value)) {
                std::ostringstream msg;
                msg << "objective became non-finite in round " << round << " (learning_rate "
                    << cfg.learning_rate << ")";
                throw NumericError(msg.str());
            }
            rec.objective_after_model_step = current.value;
        }

        const InnerLPProblem lp = build_inner_problem(data, result.params, bounds, cfg.penalty.sigma, weighting);
        const InnerLPSolution sol = solve_inner_lp(lp);
        result.weights = expand_weights(bounds, sol.values);
        rec.lp_status = sol.status;
        rec.lp_value = sol.objective;

        const ObjectiveEvaluation after = make_objective(result.weights).evaluate(result.params.w, false);
        if (!std::isfinite(after.value)) {
            throw NumericError("objective became non-finite after the adversary step in round " +
                               std::to_string(round));
        }
        rec.objective = after.value;
        rec.covariance = after.covariance;
        result.history.push_back(rec);

        if (round > 0 && std::abs(after.value - previous) < cfg.tolerance) {
            result.converged = true;
            break;
        }
        previous = after.value;
    }
    result.params.validate();
    return result;
}

TrainResult fit_baseline(const EncodedDataset& data, BaselineMethod method, const RatioBounds* bounds,
                         const TrainConfig& cfg) {
    switch (method) {
        case BaselineMethod::lr: {
            TrainConfig plain = cfg;
            plain.penalty.beta = 0.0;
            TrainResult r = fit(data, RatioBounds::fixed(data.size()), plain);
            r.method = "lr";
            return r;
        }
        case BaselineMethod::fair_lr: {
            TrainResult r = fit(data, RatioBounds::fixed(data.size()), cfg);
            r.method = "fair_lr";
            return r;
        }
        case BaselineMethod::minus_variant: {
            if (bounds == nullptr) {
                throw ValidationError("the unweighted-fairness variant needs ratio bounds");
            }
            return fit(data, *bounds, cfg, FairnessWeighting::unweighted);
        }
    }
    throw ValidationError("unknown baseline method");
}

}  // namespace fairshift
