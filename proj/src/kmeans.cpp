#include <algorithm>
#include <limits>
#include <random>

#include "fairshift/kernels.hpp"
#include "fairshift/selection.hpp"

namespace fairshift {

namespace {

struct Assignment {
    std::vector<std::size_t> cluster;
    std::vector<double> dist2;
};

// Nearest centroid per point; ties go to the lowest cluster index.
bool assign(const Matrix& points, const Matrix& centroids, Assignment& a) {
    const auto& k = kernels::active();
    const std::size_t dim = points.cols();
    bool changed = false;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const double* p = points.row(i).data();
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centroids.rows(); ++c) {
            const double d = k.squared_distance(p, centroids.row(c).data(), dim);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        if (a.cluster[i] != best) {
            a.cluster[i] = best;
            changed = true;
        }
        a.dist2[i] = best_d;
    }
    return changed;
}

std::vector<std::size_t> cluster_sizes(const Assignment& a, std::size_t k) {
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t c : a.cluster) {
        ++sizes[c];
    }
    return sizes;
}

// Moves the farthest point of a multi-member cluster into each empty cluster.
// Returns false when nothing was empty.
bool reseed_empty(const Matrix& points, Matrix& centroids, Assignment& a) {
    auto sizes = cluster_sizes(a, centroids.rows());
    bool any = false;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] != 0) {
            continue;
        }
        std::size_t far = points.rows();
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.rows(); ++i) {
            if (sizes[a.cluster[i]] > 1 && a.dist2[i] > far_d) {
                far_d = a.dist2[i];
                far = i;
            }
        }
        if (far == points.rows()) {
            throw NumericError("k-means: cannot fill empty cluster");
        }
        --sizes[a.cluster[far]];
        a.cluster[far] = c;
        a.dist2[far] = 0.0;
        sizes[c] = 1;
        std::copy(points.row(far).begin(), points.row(far).end(), centroids.row(c).begin());
        any = true;
    }
    return any;
}

void update_means(const Matrix& points, const Assignment& a, Matrix& centroids) {
    const std::size_t k = centroids.rows();
    Matrix sums(k, points.cols());
    std::vector<std::size_t> counts(k, 0);
    const auto& kt = kernels::active();
    for (std::size_t i = 0; i < points.rows(); ++i) {
        kt.axpy(1.0, points.row(i).data(), sums.row(a.cluster[i]).data(), points.cols());
        ++counts[a.cluster[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            continue;
        }
        const double inv = 1.0 / static_cast<double>(counts[c]);
        auto dst = centroids.row(c);
        auto src = sums.row(c);
        for (std::size_t j = 0; j < dst.size(); ++j) {
            dst[j] = src[j] * inv;
        }
    }
}

double sse(const Matrix& points, const Matrix& centroids, const std::vector<std::size_t>& cluster) {
    const auto& k = kernels::active();
    double total = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        total += k.squared_distance(points.row(i).data(), centroids.row(cluster[i]).data(), points.cols());
    }
    return total;
}

Matrix plus_plus_seeds(const Matrix& points, std::size_t k, std::mt19937_64& rng) {
    const std::size_t n = points.rows();
    const auto& kt = kernels::active();
    Matrix centroids(k, points.cols());
    auto pick = static_cast<std::size_t>(unit_uniform(rng()) * static_cast<double>(n));
    std::copy(points.row(pick).begin(), points.row(pick).end(), centroids.row(0).begin());
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = kt.squared_distance(points.row(i).data(), centroids.row(0).data(), points.cols());
    }
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (double v : d2) {
            total += v;
        }
        if (!(total > 0.0)) {
            throw ValidationError("k-means: k = " + std::to_string(k) + " exceeds the number of distinct points");
        }
        const double target = unit_uniform(rng()) * total;
        double acc = 0.0;
        pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc > target && d2[i] > 0.0) {
                pick = i;
                break;
            }
        }
        if (pick == n) {
            // Rounding left the target past the last positive weight.
            for (std::size_t i = n; i-- > 0;) {
                if (d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        std::copy(points.row(pick).begin(), points.row(pick).end(), centroids.row(c).begin());
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], kt.squared_distance(points.row(i).data(), centroids.row(c).data(), points.cols()));
        }
    }
    return centroids;
}

}  // namespace

Matrix clustering_points(const EncodedDataset& data) {
    const std::size_t d = data.dim() - 1;
    Matrix points(data.size(), d + 1);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto src = data.features.row(i);
        auto dst = points.row(i);
        std::size_t out = 0;
        for (std::size_t j = 0; j < src.size(); ++j) {
            if (j != data.bias_index()) {
                dst[out++] = src[j];
            }
        }
        dst[d] = static_cast<double>(data.protected_attr[i]);
    }
    return points;
}

ClusterModel kmeans(const EncodedDataset& data, std::size_t k, std::uint64_t seed, std::size_t max_iter) {
    return kmeans_points(clustering_points(data), k, seed, max_iter);
}

ClusterModel kmeans_points(const Matrix& points, std::size_t k, std::uint64_t seed, std::size_t max_iter) {
    const std::size_t n = points.rows();
    if (k == 0 || k > n) {
        throw ValidationError("k-means needs 1 <= k <= N (k = " + std::to_string(k) + ", N = " + std::to_string(n) + ")");
    }
    if (max_iter == 0) {
        throw ValidationError("k-means needs max_iter >= 1");
    }

    std::mt19937_64 rng(seed);
    ClusterModel model;
    model.k = k;
    model.seed = seed;
    model.centroids = plus_plus_seeds(points, k, rng);

    Assignment a{std::vector<std::size_t>(n, k), std::vector<double>(n, 0.0)};
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        const bool changed = assign(points, model.centroids, a);
        if (!changed && iter > 0) {
            break;
        }
        reseed_empty(points, model.centroids, a);
        update_means(points, a, model.centroids);
        model.sse_history.push_back(sse(points, model.centroids, a.cluster));
        model.iterations = iter + 1;
    }

    // Final assignment against the returned centroids. Re-seeding an empty
    // cluster can steal points from others, so repeat until nothing is empty.
    for (std::size_t round = 0; round <= k; ++round) {
        assign(points, model.centroids, a);
        if (!reseed_empty(points, model.centroids, a)) {
            model.assignment = std::move(a.cluster);
            return model;
        }
    }
    throw NumericError("k-means: could not produce a partition without empty clusters");
}

double within_cluster_sse(const Matrix& points, const ClusterModel& model) {
    return sse(points, model.centroids, model.assignment);
}

}  // namespace fairshift
