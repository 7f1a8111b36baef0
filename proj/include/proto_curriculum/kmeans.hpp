#ifndef PROTO_CURRICULUM_KMEANS_HPP
#define PROTO_CURRICULUM_KMEANS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embedding.hpp"
#include "errors.hpp"
#include "parallel.hpp"

namespace proto_curriculum {

enum class InitMethod { kmeanspp, random };

inline std::string_view to_string(InitMethod m) {
    return m == InitMethod::kmeanspp ? "kmeanspp" : "random";
}

inline InitMethod parse_init_method(std::string_view s) {
    if (s == "kmeanspp") return InitMethod::kmeanspp;
    if (s == "random") return InitMethod::random;
    throw ConfigError("unknown kmeans init '" + std::string(s) + "' (expected kmeanspp or random)");
}

struct KMeansConfig {
    std::size_t k = 8;
    std::size_t batch_size = 1024;
    // Maximum number of full passes over the data.
    std::size_t max_iters = 100;
    // Convergence threshold on the largest centroid shift between passes,
    // relative to the data's root-mean-square spread.
    double tol = 1e-4;
    std::uint64_t seed = 0;
    InitMethod init = InitMethod::kmeanspp;

    void validate() const {
        if (k < 2) throw ConfigError("kmeans k must be >= 2");
        if (batch_size < 1) throw ConfigError("kmeans batch_size must be >= 1");
        if (max_iters < 1) throw ConfigError("kmeans max_iters must be >= 1");
        if (!(tol >= 0.0)) throw ConfigError("kmeans tol must be >= 0");
    }
};

// Size of the uniformly subsampled pool k-means++ seeds from.
inline constexpr std::size_t kInitPoolSize = 100000;

// Frozen clustering: k float32 centroids plus the nearest-centroid assignment
// of every sample (ties go to the lowest cluster index).
struct ClusterModel {
    std::size_t k = 0;
    std::size_t dim = 0;
    std::vector<float> centroids;            // k x dim, row-major
    std::vector<std::uint32_t> assignments;  // per sample, in [0, k)
    std::vector<std::uint64_t> per_cluster_counts;
    std::vector<std::uint32_t> empty_clusters;
    KMeansConfig config;

    std::span<const float> centroid(std::size_t c) const { return {centroids.data() + c * dim, dim}; }

    std::size_t non_empty_count() const { return k - empty_clusters.size(); }

    // Throws unless the model is internally consistent for n_samples rows.
    void validate(std::size_t n_samples) const {
        if (k < 1 || dim < 1) throw CorruptionError("cluster model has k or dim of zero");
        if (centroids.size() != k * dim) throw LengthMismatchError("centroid block size != k * dim");
        for (float v : centroids) {
            if (!std::isfinite(v)) throw ValidationError("non-finite centroid value");
        }
        if (assignments.size() != n_samples) {
            throw LengthMismatchError("model has " + std::to_string(assignments.size()) +
                                      " assignments for " + std::to_string(n_samples) + " samples");
        }
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            if (assignments[i] >= k) {
                throw CorruptionError("assignment of sample " + std::to_string(i) + " is " +
                                      std::to_string(assignments[i]) + " >= k=" + std::to_string(k));
            }
        }
    }

    friend bool operator==(const ClusterModel& a, const ClusterModel& b) {
        return a.k == b.k && a.dim == b.dim && a.centroids == b.centroids && a.assignments == b.assignments &&
               a.per_cluster_counts == b.per_cluster_counts && a.empty_clusters == b.empty_clusters;
    }
};

namespace detail {

template <class A, class B>
double squared_distance(std::span<const A> a, std::span<const B> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = static_cast<double>(a[j]) - static_cast<double>(b[j]);
        s += d * d;
    }
    return s;
}

// Index of the nearest of k row-major centroids; strict < keeps the lowest index on ties.
template <class C>
std::size_t nearest(std::span<const float> x, const std::vector<C>& centroids, std::size_t k, std::size_t dim,
                    double* best_out = nullptr) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_distance(x, std::span<const C>(centroids.data() + c * dim, dim));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (best_out) *best_out = best_d;
    return best;
}

inline std::vector<std::size_t> init_pool(std::size_t n, std::mt19937_64& gen) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    if (n <= kInitPoolSize) return pool;
    std::vector<std::size_t> picked;
    picked.reserve(kInitPoolSize);
    std::sample(pool.begin(), pool.end(), std::back_inserter(picked), kInitPoolSize, gen);
    return picked;
}

inline std::vector<double> init_centroids(const EmbeddingMatrix& z, const KMeansConfig& cfg,
                                          std::mt19937_64& gen) {
    const std::size_t dim = z.dim();
    const auto pool = init_pool(z.n_samples(), gen);
    std::vector<double> mu(cfg.k * dim);
    auto put = [&](std::size_t c, std::size_t row) {
        const auto x = z.row(row);
        std::copy(x.begin(), x.end(), mu.begin() + static_cast<std::ptrdiff_t>(c * dim));
    };

    if (cfg.init == InitMethod::random || pool.size() <= cfg.k) {
        std::vector<std::size_t> chosen;
        if (pool.size() <= cfg.k) {
            chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(cfg.k));
        } else {
            std::sample(pool.begin(), pool.end(), std::back_inserter(chosen), cfg.k, gen);
            std::shuffle(chosen.begin(), chosen.end(), gen);
        }
        for (std::size_t c = 0; c < cfg.k; ++c) put(c, chosen[c]);
        return mu;
    }

    // k-means++: D^2-weighted seeding over the pool.
    std::uniform_int_distribution<std::size_t> first_dist(0, pool.size() - 1);
    const std::size_t first = first_dist(gen);
    put(0, pool[first]);
    std::vector<double> d2(pool.size(), std::numeric_limits<double>::infinity());
    std::vector<char> used(pool.size(), 0);
    used[first] = 1;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t c = 1; c < cfg.k; ++c) {
        const std::span<const double> last(mu.data() + (c - 1) * dim, dim);
        double total = 0.0;
        for (std::size_t p = 0; p < pool.size(); ++p) {
            d2[p] = std::min(d2[p], squared_distance(z.row(pool[p]), last));
            total += d2[p];
        }
        std::size_t pick = pool.size();
        if (total > 0.0) {
            const double target = unit(gen) * total;
            double acc = 0.0;
            for (std::size_t p = 0; p < pool.size(); ++p) {
                acc += d2[p];
                if (d2[p] > 0.0 && acc > target) {
                    pick = p;
                    break;
                }
            }
            if (pick == pool.size()) {
                // rounding left the target past the running sum; take the last positive weight
                for (std::size_t p = pool.size(); p-- > 0;) {
                    if (d2[p] > 0.0) {
                        pick = p;
                        break;
                    }
                }
            }
        } else {
            // every pool point coincides with a chosen centroid
            for (std::size_t p = 0; p < pool.size(); ++p) {
                if (!used[p]) {
                    pick = p;
                    break;
                }
            }
            if (pick == pool.size()) pick = 0;
        }
        used[pick] = 1;
        put(c, pool[pick]);
    }
    return mu;
}

inline double rms_spread(const EmbeddingMatrix& z) {
    std::vector<double> mean(z.dim(), 0.0);
    for (std::size_t i = 0; i < z.n_samples(); ++i) {
        for (std::size_t j = 0; j < z.dim(); ++j) mean[j] += z.row(i)[j];
    }
    for (double& m : mean) m /= static_cast<double>(z.n_samples());
    double ss = 0.0;
    for (std::size_t i = 0; i < z.n_samples(); ++i) ss += squared_distance(z.row(i), std::span<const double>(mean));
    return std::sqrt(ss / static_cast<double>(z.n_samples()));
}

}  // namespace detail

// Nearest-centroid assignment of every row against float32 centroids.
inline std::vector<std::uint32_t> assign_nearest(const EmbeddingMatrix& z, const std::vector<float>& centroids,
                                                 std::size_t k) {
    if (centroids.size() != k * z.dim()) throw ShapeError("centroid block does not match k x dim");
    std::vector<std::uint32_t> labels(z.n_samples());
    parallel_for_blocks(z.n_samples(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            labels[i] = static_cast<std::uint32_t>(detail::nearest(z.row(i), centroids, k, z.dim()));
        }
    });
    return labels;
}

// Builds a frozen model from centroids: recomputes assignments and counts.
inline ClusterModel freeze_model(const EmbeddingMatrix& z, std::vector<float> centroids, std::size_t k,
                                 const KMeansConfig& config = {}) {
    ClusterModel m;
    m.k = k;
    m.dim = z.dim();
    m.centroids = std::move(centroids);
    m.config = config;
    m.assignments = assign_nearest(z, m.centroids, k);
    m.per_cluster_counts.assign(k, 0);
    for (auto a : m.assignments) ++m.per_cluster_counts[a];
    for (std::size_t c = 0; c < k; ++c) {
        if (m.per_cluster_counts[c] == 0) m.empty_clusters.push_back(static_cast<std::uint32_t>(c));
    }
    m.validate(z.n_samples());
    return m;
}

// Mean squared distance of each sample to the given centroid assignment.
inline double mean_squared_distance(const EmbeddingMatrix& z, const std::vector<float>& centroids,
                                    const std::vector<std::uint32_t>& assignments) {
    double total = 0.0;
    const std::size_t dim = z.dim();
    for (std::size_t i = 0; i < z.n_samples(); ++i) {
        total += detail::squared_distance(z.row(i),
                                          std::span<const float>(centroids.data() + assignments[i] * dim, dim));
    }
    return total / static_cast<double>(z.n_samples());
}

// Seeds the centroids exactly as fit_minibatch_kmeans does before its first pass.
inline std::vector<float> initial_centroids(const EmbeddingMatrix& z, const KMeansConfig& config) {
    config.validate();
    if (config.k > z.n_samples()) throw ConfigError("kmeans k exceeds n_samples");
    std::mt19937_64 gen(config.seed);
    const auto mu = detail::init_centroids(z, config, gen);
    return {mu.begin(), mu.end()};
}

// Mini-batch k-means with per-centroid learning rate 1/count.
//
// Each pass shuffles the samples and walks them in batches of batch_size:
// the batch is assigned against the current centroids, then every member
// pulls its centroid by (x - mu) / count. A cluster that received no points
// during a pass is reseeded to the last batch's point farthest from its
// centroid. Training stops after max_iters passes or once the largest
// centroid shift over a pass falls below tol (relative to the data's RMS
// spread). The result is frozen with one full nearest-centroid pass.
inline ClusterModel fit_minibatch_kmeans(const EmbeddingMatrix& z, const KMeansConfig& config) {
    config.validate();
    const std::size_t n = z.n_samples();
    const std::size_t dim = z.dim();
    const std::size_t k = config.k;
    if (k > n) {
        throw ConfigError("kmeans k=" + std::to_string(k) + " exceeds n_samples=" + std::to_string(n));
    }

    std::mt19937_64 gen(config.seed);
    std::vector<double> mu = detail::init_centroids(z, config, gen);
    double scale = detail::rms_spread(z);
    if (!(scale > 0.0)) scale = 1.0;

    std::vector<std::uint64_t> counts(k, 0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::size_t> labels;
    std::vector<double> label_d2;

    for (std::size_t pass = 0; pass < config.max_iters; ++pass) {
        const std::vector<double> previous = mu;
        std::vector<char> touched(k, 0);
        std::shuffle(order.begin(), order.end(), gen);

        std::size_t last_begin = 0;
        for (std::size_t begin = 0; begin < n; begin += config.batch_size) {
            const std::size_t end = std::min(n, begin + config.batch_size);
            last_begin = begin;
            labels.resize(end - begin);
            label_d2.resize(end - begin);
            for (std::size_t b = begin; b < end; ++b) {
                labels[b - begin] = detail::nearest(z.row(order[b]), mu, k, dim, &label_d2[b - begin]);
            }
            for (std::size_t b = begin; b < end; ++b) {
                const std::size_t c = labels[b - begin];
                touched[c] = 1;
                const double eta = 1.0 / static_cast<double>(++counts[c]);
                const auto x = z.row(order[b]);
                double* m = mu.data() + c * dim;
                for (std::size_t j = 0; j < dim; ++j) m[j] += eta * (static_cast<double>(x[j]) - m[j]);
            }
        }

        // Reseed starved clusters from the final batch, farthest points first.
        std::vector<std::size_t> candidates(labels.size());
        std::iota(candidates.begin(), candidates.end(), std::size_t{0});
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&](std::size_t a, std::size_t b) { return label_d2[a] > label_d2[b]; });
        std::size_t next_candidate = 0;
        for (std::size_t c = 0; c < k; ++c) {
            if (touched[c] || next_candidate >= candidates.size()) continue;
            const auto x = z.row(order[last_begin + candidates[next_candidate++]]);
            std::copy(x.begin(), x.end(), mu.begin() + static_cast<std::ptrdiff_t>(c * dim));
            counts[c] = 1;
        }

        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const std::span<const double> now(mu.data() + c * dim, dim);
            const std::span<const double> before(previous.data() + c * dim, dim);
            shift = std::max(shift, std::sqrt(detail::squared_distance(now, before)));
        }
        if (shift / scale < config.tol) break;
    }

    std::vector<float> frozen(mu.size());
    std::transform(mu.begin(), mu.end(), frozen.begin(), [](double v) { return static_cast<float>(v); });
    return freeze_model(z, std::move(frozen), k, config);
}

}  // namespace proto_curriculum

#endif  // PROTO_CURRICULUM_KMEANS_HPP
