#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairshift/robust_optimizer.hpp"

namespace fairshift {

std::string_view lp_status_name(LpStatus status) {
    return status == LpStatus::optimal ? "optimal" : "infeasible_relaxed";
}

void InnerLPProblem::validate() const {
    const std::size_t m = loss_coeffs.size();
    if (m == 0) {
        throw ValidationError("inner LP needs at least one variable");
    }
    if (fairness_coeffs.size() != m || lo.size() != m || hi.size() != m) {
        throw ValidationError("inner LP coefficient vectors differ in length");
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (!(lo[j] > 0.0 && lo[j] <= hi[j] && std::isfinite(hi[j]))) {
            throw ValidationError("inner LP box " + std::to_string(j) + " is not 0 < lo <= hi");
        }
        if (!(loss_coeffs[j] >= 0.0) || !std::isfinite(loss_coeffs[j]) || !std::isfinite(fairness_coeffs[j])) {
            throw ValidationError("inner LP coefficient " + std::to_string(j) + " is invalid");
        }
    }
    if (!(sigma >= 0.0) || !(scale > 0.0) || !std::isfinite(scale)) {
        throw ValidationError("inner LP needs sigma >= 0 and scale > 0");
    }
}

InnerLPSolution solve_inner_lp(const InnerLPProblem& p) {
    p.validate();
    const std::size_t m = p.size();
    const double band = p.sigma / p.scale;  // feasible: -band <= G <= band

    InnerLPSolution sol;
    sol.values = p.hi;
    double g_total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        g_total += p.fairness_coeffs[j] * p.hi[j];
    }

    if (std::abs(g_total) > band) {
        // direction = +1: G too large, lower coordinates with g_j > 0.
        const double direction = g_total > 0.0 ? 1.0 : -1.0;
        const double target = direction * band;
        std::vector<std::size_t> movable;
        for (std::size_t j = 0; j < m; ++j) {
            if (direction * p.fairness_coeffs[j] > 0.0 && p.hi[j] > p.lo[j]) {
                movable.push_back(j);
            }
        }
        // Breakpoint l_j / |g_j|, compared by cross-multiplication to avoid
        // dividing by tiny |g_j|.
        std::stable_sort(movable.begin(), movable.end(), [&](std::size_t x, std::size_t y) {
            return p.loss_coeffs[x] * std::abs(p.fairness_coeffs[y]) <
                   p.loss_coeffs[y] * std::abs(p.fairness_coeffs[x]);
        });
        bool reached = false;
        for (std::size_t j : movable) {
            const double g = p.fairness_coeffs[j];
            const double full = g * (p.hi[j] - p.lo[j]);  // change in G if moved to lo
            const double excess = g_total - target;       // sign matches direction
            if (std::abs(full) >= std::abs(excess)) {
                sol.values[j] = std::clamp(p.hi[j] - excess / g, p.lo[j], p.hi[j]);
                g_total = target;
                reached = true;
                break;
            }
            sol.values[j] = p.lo[j];
            g_total -= full;
        }
        sol.status = reached ? LpStatus::optimal : LpStatus::infeasible_relaxed;
    }

    double obj = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        obj += p.loss_coeffs[j] * sol.values[j];
    }
    sol.objective = p.scale * obj;
    return sol;
}

}  // namespace fairshift
