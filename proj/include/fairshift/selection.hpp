#pragma once

// Selection-probability estimation and the adversary's weight bounds.
//
// With unlabeled target data available, P(s=1|x,a) is estimated per
// discretized point as m_t / n_t (count in the training set over count in the
// pool) and widened by a uniform-convergence radius epsilon. Without target
// data, the training set is clustered and every cluster shares one ratio
// variable constrained to a box of radius rho around 1.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairshift/dataset.hpp"

namespace fairshift {

enum class CoordinateRole : std::uint8_t { verbatim, numeric, skip };

struct DiscretizationConfig {
    std::size_t numeric_bins = 8;
    bool include_protected = true;
    // One entry per feature coordinate. Empty means "every coordinate verbatim".
    std::vector<CoordinateRole> roles;

    // Numeric blocks are binned, one-hot blocks copied, the bias skipped.
    static DiscretizationConfig for_dataset(const EncodedDataset& data, std::size_t numeric_bins = 8);
    void validate() const;
};

std::string discretize_key(std::span<const double> x, int a, const DiscretizationConfig& cfg);

struct SelectionEstimate {
    std::vector<double> p_hat;  // one per training sample, in (0, 1]
    double epsilon = 0.0;
    std::size_t m_prime = 0;    // distinct keys in the training set
    double p0 = 0.0;            // minimum empirical key frequency in the pool
    std::size_t pool_size = 0;
    std::size_t target_size = 0;  // N_D, the unlabeled sample inside the pool
    double p_floor = 0.0;       // 1 / pool_size
    double delta = 0.0;
    std::size_t unseen_in_pool = 0;
};

// sqrt((ln(2 m') + ln(1/delta)) / (p0 * target_size))
double selection_error_bound(std::size_t m_prime, double delta, double p0, std::size_t target_size);

// `pool` is the unlabeled target sample followed by the training set;
// `target_size` is the size of the unlabeled part and enters epsilon.
SelectionEstimate estimate_density_ratio(const EncodedDataset& train, const EncodedDataset& pool,
                                         std::size_t target_size, const DiscretizationConfig& cfg, double delta);

struct ClusterModel {
    Matrix centroids;                  // k x (d - 1 + 1): features without bias, then a
    std::vector<std::size_t> assignment;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<double> sse_history;   // within-cluster SSE after each Lloyd update
    std::size_t iterations = 0;
};

// Points used for clustering: encoded features without the bias column, with
// the protected attribute appended as a final coordinate.
Matrix clustering_points(const EncodedDataset& data);

ClusterModel kmeans(const EncodedDataset& data, std::size_t k, std::uint64_t seed, std::size_t max_iter);
ClusterModel kmeans_points(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t max_iter);

double within_cluster_sse(const Matrix& points, const ClusterModel& model);

struct RatioBounds {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<double> nominal;  // 1/p_hat or 1; the adversary starts here
    std::optional<std::vector<std::size_t>> tied_groups;

    std::size_t size() const { return lo.size(); }
    void validate() const;
    // Number of distinct ratio variables: group count when tied, else size().
    std::size_t variable_count() const;

    static RatioBounds fixed(std::size_t n, double value = 1.0);
};

RatioBounds ratio_bounds_rflearn1(const SelectionEstimate& est);
RatioBounds ratio_bounds_rflearn2(const ClusterModel& clusters, double rho);

}  // namespace fairshift
