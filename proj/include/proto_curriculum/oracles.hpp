#ifndef PROTO_CURRICULUM_ORACLES_HPP
#define PROTO_CURRICULUM_ORACLES_HPP

// Plain reference implementations used to check the optimized paths. They
// share no kernels with the code they validate and are single-threaded.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "embedding.hpp"
#include "errors.hpp"
#include "kmeans.hpp"
#include "prototypicality.hpp"
#include "sampler.hpp"

namespace proto_curriculum::oracle {

// Nested-loop distances and min-max normalization, float64 throughout.
inline PrototypicalityScores oracle_scores(const EmbeddingMatrix& z, const ClusterModel& model) {
    if (model.dim != z.dim()) throw ShapeError("model dim differs from embedding dim");
    const std::size_t n = z.n_samples();
    const std::size_t dim = z.dim();
    if (model.assignments.size() != n) throw LengthMismatchError("assignment count differs from n_samples");
    for (std::size_t i = 0; i < n; ++i) {
        if (model.assignments[i] >= model.k) throw CorruptionError("assignment index >= k");
    }

    std::vector<double> dist(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = model.assignments[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double diff = static_cast<double>(z.data()[i * dim + j]) -
                                static_cast<double>(model.centroids[c * dim + j]);
            acc += diff * diff;
        }
        dist[i] = std::sqrt(acc);
    }

    PrototypicalityScores s;
    s.cluster_of = model.assignments;
    s.raw.resize(n);
    s.normalized.resize(n);
    s.per_cluster_min.assign(model.k, 0.0);
    s.per_cluster_max.assign(model.k, 0.0);
    for (std::size_t c = 0; c < model.k; ++c) {
        bool any = false;
        double lo = 0.0;
        double hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (model.assignments[i] != c) continue;
            if (!any || dist[i] < lo) lo = dist[i];
            if (!any || dist[i] > hi) hi = dist[i];
            any = true;
        }
        s.per_cluster_min[c] = lo;
        s.per_cluster_max[c] = hi;
        for (std::size_t i = 0; i < n; ++i) {
            if (model.assignments[i] != c) continue;
            double d = 0.0;
            if (hi > lo) d = (dist[i] - lo) / (hi - lo);
            if (d < 0.0) d = 0.0;
            if (d > 1.0) d = 1.0;
            s.normalized[i] = static_cast<float>(d);
            s.raw[i] = static_cast<float>(dist[i]);
        }
    }
    return s;
}

// Term-by-term softmax with no shift, sum in index order. Only usable where
// exp(-d / tau) does not underflow.
inline std::vector<double> oracle_softmax(const std::vector<double>& normalized, double tau) {
    std::vector<double> p(normalized.size());
    if (std::isinf(tau)) {
        for (auto& v : p) v = 1.0 / static_cast<double>(p.size());
        return p;
    }
    double z = 0.0;
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        p[i] = std::exp(-normalized[i] / tau);
        z += p[i];
    }
    for (auto& v : p) v /= z;
    return p;
}

// Exact per-index selection probability of an alias table under a uniform
// slot and a uniform threshold draw, enumerated slot by slot.
inline std::vector<double> oracle_alias_mass(const SamplingDistribution& dist) {
    const std::size_t n = dist.table.size();
    std::vector<double> mass(n, 0.0);
    const auto thresholds = dist.table.thresholds();
    const auto aliases = dist.table.aliases();
    const double slot = 1.0 / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) {
        double keep = thresholds[s];
        if (keep > 1.0) keep = 1.0;
        if (keep < 0.0) keep = 0.0;
        mass[s] += slot * keep;
        mass[aliases[s]] += slot * (1.0 - keep);
    }
    return mass;
}

// Effective size by the unsimplified product form, for small draw counts.
inline double oracle_effective_size(const std::vector<double>& probs, std::uint64_t n_draws) {
    double total = 0.0;
    for (double p : probs) {
        double miss = 1.0;
        for (std::uint64_t t = 0; t < n_draws; ++t) miss *= 1.0 - p;
        total += 1.0 - miss;
    }
    return total;
}

}  // namespace proto_curriculum::oracle

#endif  // PROTO_CURRICULUM_ORACLES_HPP
