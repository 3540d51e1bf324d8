#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "fairshift/selection.hpp"

namespace fairshift {

DiscretizationConfig DiscretizationConfig::for_dataset(const EncodedDataset& data, std::size_t numeric_bins) {
    DiscretizationConfig cfg;
    cfg.numeric_bins = numeric_bins;
    cfg.roles.assign(data.dim(), CoordinateRole::verbatim);
    for (const auto& block : data.blocks) {
        if (block.kind == ColumnKind::numeric) {
            for (std::size_t j = 0; j < block.width; ++j) {
                cfg.roles[block.offset + j] = CoordinateRole::numeric;
            }
        }
    }
    cfg.roles[data.bias_index()] = CoordinateRole::skip;
    cfg.validate();
    return cfg;
}

void DiscretizationConfig::validate() const {
    if (numeric_bins < 1) {
        throw ValidationError("numeric_bins must be >= 1");
    }
}

std::string discretize_key(std::span<const double> x, int a, const DiscretizationConfig& cfg) {
    if (!cfg.roles.empty() && cfg.roles.size() != x.size()) {
        throw ValidationError("discretization roles do not match the feature width");
    }
    std::string key;
    key.reserve(x.size() * 2 + 3);
    char buf[32];
    bool first = true;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const CoordinateRole role = cfg.roles.empty() ? CoordinateRole::verbatim : cfg.roles[j];
        if (role == CoordinateRole::skip) {
            continue;
        }
        if (!first) {
            key.push_back(',');
        }
        first = false;
        if (role == CoordinateRole::numeric) {
            const auto bins = static_cast<double>(cfg.numeric_bins);
            const double b = std::clamp(std::floor(x[j] * bins), 0.0, bins - 1.0);
            std::snprintf(buf, sizeof buf, "%.0f", b);
        } else {
            std::snprintf(buf, sizeof buf, "%.17g", x[j]);
        }
        key.append(buf);
    }
    if (cfg.include_protected) {
        key.push_back('|');
        key.append(std::to_string(a));
    }
    return key;
}

double selection_error_bound(std::size_t m_prime, double delta, double p0, std::size_t target_size) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ValidationError("delta must lie in (0, 1)");
    }
    if (m_prime == 0 || target_size == 0 || !(p0 > 0.0)) {
        throw ValidationError("selection error bound needs m' >= 1, p0 > 0 and a nonempty target sample");
    }
    const double numerator = std::log(2.0 * static_cast<double>(m_prime)) + std::log(1.0 / delta);
    return std::sqrt(numerator / (p0 * static_cast<double>(target_size)));
}

SelectionEstimate estimate_density_ratio(const EncodedDataset& train, const EncodedDataset& pool,
                                         std::size_t target_size, const DiscretizationConfig& cfg, double delta) {
    cfg.validate();
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ValidationError("delta must lie in (0, 1)");
    }
    if (pool.size() == 0 || target_size == 0 || target_size > pool.size()) {
        throw ValidationError("density-ratio pool is empty or smaller than the target sample");
    }

    std::vector<std::string> train_keys;
    train_keys.reserve(train.size());
    std::unordered_map<std::string, std::size_t> train_counts;
    for (std::size_t i = 0; i < train.size(); ++i) {
        train_keys.push_back(discretize_key(train.features.row(i), train.protected_attr[i], cfg));
        ++train_counts[train_keys.back()];
    }
    std::unordered_map<std::string, std::size_t> pool_counts;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        ++pool_counts[discretize_key(pool.features.row(i), pool.protected_attr[i], cfg)];
    }

    SelectionEstimate est;
    est.delta = delta;
    est.pool_size = pool.size();
    est.target_size = target_size;
    est.p_floor = 1.0 / static_cast<double>(pool.size());
    est.m_prime = train_counts.size();

    std::size_t min_count = pool.size();
    for (const auto& [key, count] : pool_counts) {
        min_count = std::min(min_count, count);
    }
    est.p0 = std::max(static_cast<double>(min_count) / static_cast<double>(pool.size()), est.p_floor);
    est.epsilon = selection_error_bound(est.m_prime, delta, est.p0, target_size);

    est.p_hat.resize(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        const auto it = pool_counts.find(train_keys[i]);
        if (it == pool_counts.end()) {
            est.p_hat[i] = 1.0;
            ++est.unseen_in_pool;
            continue;
        }
        const double ratio = static_cast<double>(train_counts[train_keys[i]]) / static_cast<double>(it->second);
        est.p_hat[i] = std::clamp(ratio, est.p_floor, 1.0);
    }
    if (est.unseen_in_pool > 0) {
        warn(std::to_string(est.unseen_in_pool) + " training samples have keys absent from the pool; p_hat set to 1");
    }
    return est;
}

void RatioBounds::validate() const {
    const std::size_t n = lo.size();
    if (hi.size() != n || nominal.size() != n || n == 0) {
        throw ValidationError("ratio bounds have inconsistent lengths");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lo[i] > 0.0 && lo[i] <= hi[i]) || !std::isfinite(hi[i])) {
            throw ValidationError("ratio bound " + std::to_string(i) + " is not a valid positive interval");
        }
        if (nominal[i] < lo[i] || nominal[i] > hi[i]) {
            throw ValidationError("nominal ratio " + std::to_string(i) + " lies outside its bounds");
        }
    }
    if (tied_groups) {
        const auto& g = *tied_groups;
        if (g.size() != n) {
            throw ValidationError("tied group vector has the wrong length");
        }
        const std::size_t k = variable_count();
        std::vector<std::size_t> first(k, n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t& f = first[g[i]];
            if (f == n) {
                f = i;
            } else if (lo[i] != lo[f] || hi[i] != hi[f] || nominal[i] != nominal[f]) {
                throw ValidationError("ratio bounds differ within tied group " + std::to_string(g[i]));
            }
        }
    }
}

std::size_t RatioBounds::variable_count() const {
    if (!tied_groups) {
        return lo.size();
    }
    std::size_t k = 0;
    for (std::size_t g : *tied_groups) {
        k = std::max(k, g + 1);
    }
    return k;
}

RatioBounds RatioBounds::fixed(std::size_t n, double value) {
    RatioBounds b;
    b.lo.assign(n, value);
    b.hi.assign(n, value);
    b.nominal.assign(n, value);
    return b;
}

RatioBounds ratio_bounds_rflearn1(const SelectionEstimate& est) {
    if (!(est.epsilon >= 0.0) || !(est.p_floor > 0.0)) {
        throw ValidationError("selection estimate is missing epsilon or p_floor");
    }
    RatioBounds b;
    const std::size_t n = est.p_hat.size();
    b.lo.resize(n);
    b.hi.resize(n);
    b.nominal.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = est.p_hat[i];
        if (!(p > 0.0 && p <= 1.0)) {
            throw ValidationError("p_hat[" + std::to_string(i) + "] is outside (0, 1]");
        }
        b.lo[i] = 1.0 / std::min(1.0, p + est.epsilon);
        b.hi[i] = 1.0 / std::max(est.p_floor, p - est.epsilon);
        b.nominal[i] = 1.0 / p;
    }
    return b;
}

RatioBounds ratio_bounds_rflearn2(const ClusterModel& clusters, double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw ValidationError("rho must lie in [0, 1)");
    }
    const std::size_t n = clusters.assignment.size();
    RatioBounds b;
    b.lo.assign(n, 1.0 - rho);
    b.hi.assign(n, 1.0 + rho);
    b.nominal.assign(n, 1.0);
    b.tied_groups = clusters.assignment;
    return b;
}

}  // namespace fairshift
