#ifndef PROTO_CURRICULUM_PROTOTYPICALITY_HPP
#define PROTO_CURRICULUM_PROTOTYPICALITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "embedding.hpp"
#include "errors.hpp"
#include "kmeans.hpp"
#include "parallel.hpp"

namespace proto_curriculum {

// Per-sample distance to the assigned centroid and its per-cluster min-max
// normalization. normalized = 0 marks the most prototypical member.
struct PrototypicalityScores {
    std::vector<float> normalized;
    std::vector<float> raw;
    std::vector<std::uint32_t> cluster_of;
    // Per-cluster raw-distance extrema; zero for clusters without members.
    std::vector<double> per_cluster_min;
    std::vector<double> per_cluster_max;

    std::size_t size() const { return normalized.size(); }
    std::size_t k() const { return per_cluster_min.size(); }

    void validate() const {
        const std::size_t n = normalized.size();
        if (n == 0) throw ValidationError("scores are empty");
        if (raw.size() != n || cluster_of.size() != n) throw LengthMismatchError("score columns differ in length");
        if (per_cluster_max.size() != per_cluster_min.size()) {
            throw LengthMismatchError("per-cluster min/max lengths differ");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!(normalized[i] >= 0.0f && normalized[i] <= 1.0f)) {
                throw ValidationError("normalized score of sample " + std::to_string(i) + " outside [0, 1]");
            }
            if (!(raw[i] >= 0.0f) || !std::isfinite(raw[i])) {
                throw ValidationError("raw distance of sample " + std::to_string(i) + " is invalid");
            }
            if (!per_cluster_min.empty() && cluster_of[i] >= per_cluster_min.size()) {
                throw CorruptionError("cluster id of sample " + std::to_string(i) + " out of range");
            }
        }
    }

    friend bool operator==(const PrototypicalityScores&, const PrototypicalityScores&) = default;
};

// Distance to the assigned centroid, min-max normalized within each cluster.
// Clusters whose members are all equidistant (singletons included) score 0.
inline PrototypicalityScores score(const EmbeddingMatrix& z, const ClusterModel& model) {
    if (model.dim != z.dim()) {
        throw ShapeError("model dim " + std::to_string(model.dim) + " differs from embedding dim " +
                         std::to_string(z.dim()));
    }
    model.validate(z.n_samples());

    const std::size_t n = z.n_samples();
    std::vector<double> dist(n);
    parallel_for_blocks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            dist[i] = std::sqrt(detail::squared_distance(z.row(i), model.centroid(model.assignments[i])));
        }
    });

    PrototypicalityScores s;
    s.cluster_of = model.assignments;
    s.per_cluster_min.assign(model.k, std::numeric_limits<double>::infinity());
    s.per_cluster_max.assign(model.k, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = s.cluster_of[i];
        s.per_cluster_min[c] = std::min(s.per_cluster_min[c], dist[i]);
        s.per_cluster_max[c] = std::max(s.per_cluster_max[c], dist[i]);
    }
    for (std::size_t c = 0; c < model.k; ++c) {
        if (!std::isfinite(s.per_cluster_min[c])) s.per_cluster_min[c] = s.per_cluster_max[c] = 0.0;
    }

    s.raw.resize(n);
    s.normalized.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = s.cluster_of[i];
        const double lo = s.per_cluster_min[c];
        const double span = s.per_cluster_max[c] - lo;
        const double d = span > 0.0 ? std::clamp((dist[i] - lo) / span, 0.0, 1.0) : 0.0;
        s.raw[i] = static_cast<float>(dist[i]);
        s.normalized[i] = static_cast<float>(d);
    }
    return s;
}

}  // namespace proto_curriculum

#endif  // PROTO_CURRICULUM_PROTOTYPICALITY_HPP
