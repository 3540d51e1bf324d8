#pragma once

// Alternating minimax training. The model step runs gradient descent on the
// penalized objective with the adversarial weights fixed; the adversary step
// solves a box-constrained LP with one two-sided coupling constraint:
//
//   maximize   scale * sum_j l_j v_j
//   subject to lo_j <= v_j <= hi_j,  |scale * sum_j g_j v_j| <= sigma
//
// where l_j are (group-summed) per-sample losses and g_j the (group-summed)
// terms (a_i - a_bar) w.x_i.

#include <cstdint>
#include <string>
#include <vector>

#include "fairshift/dataset.hpp"
#include "fairshift/fair_model.hpp"
#include "fairshift/selection.hpp"

namespace fairshift {

struct InnerLPProblem {
    std::vector<double> loss_coeffs;
    std::vector<double> fairness_coeffs;
    std::vector<double> lo;
    std::vector<double> hi;
    double sigma = 0.0;
    double scale = 1.0;

    std::size_t size() const { return loss_coeffs.size(); }
    void validate() const;
};

enum class LpStatus { optimal, infeasible_relaxed };

std::string_view lp_status_name(LpStatus status);

struct InnerLPSolution {
    std::vector<double> values;
    double objective = 0.0;
    LpStatus status = LpStatus::optimal;
};

// Exact solver. Starts from the box maximum v = hi and, if the coupling
// constraint is violated, lowers the coordinates that move sum g_j v_j toward
// the feasible band in increasing order of loss given up per unit of
// constraint (the breakpoints l_j / |g_j| of the Lagrangian). At most one
// coordinate ends strictly inside its box. Ties go to the smaller index.
InnerLPSolution solve_inner_lp(const InnerLPProblem& problem);

enum class FairnessWeighting {
    weighted,    // covariance and LP coupling use the adversarial weights
    unweighted,  // covariance uses v = 1; the adversary only sees the box
};

InnerLPProblem build_inner_problem(const EncodedDataset& data, const ModelParams& params, const RatioBounds& bounds,
                                   double sigma, FairnessWeighting weighting = FairnessWeighting::weighted);

// Expands a per-variable LP solution back to per-sample weights.
WeightVector expand_weights(const RatioBounds& bounds, const std::vector<double>& variables);

struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t inner_gd_steps = 200;
    std::size_t outer_rounds = 20;
    double tolerance = 1e-6;
    std::uint64_t seed = 0;
    PenaltyConfig penalty;

    void validate() const;
};

struct RoundRecord {
    std::size_t round = 0;
    double objective_after_model_step = 0.0;  // at the previous round's weights
    double objective = 0.0;                   // after the adversary step
    double covariance = 0.0;
    double lp_value = 0.0;
    LpStatus lp_status = LpStatus::optimal;
    std::size_t step_halvings = 0;
};

struct TrainResult {
    ModelParams params;
    WeightVector weights;
    std::vector<RoundRecord> history;
    double initial_objective = 0.0;
    bool converged = false;
    std::string method;
};

TrainResult fit(const EncodedDataset& data, const RatioBounds& bounds, const TrainConfig& cfg,
                FairnessWeighting weighting = FairnessWeighting::weighted);

enum class BaselineMethod { lr, fair_lr, minus_variant };

TrainResult fit_baseline(const EncodedDataset& data, BaselineMethod method, const RatioBounds* bounds,
                         const TrainConfig& cfg);

}  // namespace fairshift
