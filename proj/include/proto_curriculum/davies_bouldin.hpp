#ifndef PROTO_CURRICULUM_DAVIES_BOULDIN_HPP
#define PROTO_CURRICULUM_DAVIES_BOULDIN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "embedding.hpp"
#include "errors.hpp"
#include "kmeans.hpp"

namespace proto_curriculum {

struct DaviesBouldinResult {
    // +infinity when two non-empty clusters share a centroid.
    double index = 0.0;
    bool coincident_centroids = false;
};

// DB = (1/K') sum_k max_{j != k} (s_k + s_j) / ||mu_k - mu_j|| over the K'
// non-empty clusters, with s_k the mean distance of cluster k's members to mu_k.
inline DaviesBouldinResult davies_bouldin(const EmbeddingMatrix& z, const ClusterModel& model) {
    if (model.dim != z.dim()) throw ShapeError("model dim differs from embedding dim");
    model.validate(z.n_samples());

    std::vector<double> scatter(model.k, 0.0);
    std::vector<std::uint64_t> members(model.k, 0);
    for (std::size_t i = 0; i < z.n_samples(); ++i) {
        const auto c = model.assignments[i];
        scatter[c] += std::sqrt(detail::squared_distance(z.row(i), model.centroid(c)));
        ++members[c];
    }
    std::vector<std::size_t> live;
    for (std::size_t c = 0; c < model.k; ++c) {
        if (members[c] > 0) {
            scatter[c] /= static_cast<double>(members[c]);
            live.push_back(c);
        }
    }
    if (live.size() < 2) {
        throw UndefinedIndexError("Davies-Bouldin index needs at least 2 non-empty clusters, got " +
                                  std::to_string(live.size()));
    }

    DaviesBouldinResult result;
    double sum = 0.0;
    for (std::size_t a : live) {
        double worst = 0.0;
        for (std::size_t b : live) {
            if (a == b) continue;
            const double gap = std::sqrt(detail::squared_distance(model.centroid(a), model.centroid(b)));
            if (gap == 0.0) {
                result.coincident_centroids = true;
                result.index = std::numeric_limits<double>::infinity();
                return result;
            }
            worst = std::max(worst, (scatter[a] + scatter[b]) / gap);
        }
        sum += worst;
    }
    result.index = sum / static_cast<double>(live.size());
    return result;
}

struct KSweepEntry {
    ClusterModel model;
    DaviesBouldinResult db;
};

struct KSelection {
    std::size_t best_k = 0;
    std::map<std::size_t, KSweepEntry> models;
};

// Fits one model per k in [k_min, k_max] (seed = base seed XOR k) and picks the
// k with the smallest DB index; ties go to the smaller k.
inline KSelection select_k(const EmbeddingMatrix& z, std::size_t k_min, std::size_t k_max,
                           const KMeansConfig& base_config) {
    if (k_min < 2 || k_min > k_max || k_max > z.n_samples()) {
        throw ConfigError("k sweep needs 2 <= k_min <= k_max <= n_samples (got [" + std::to_string(k_min) + ", " +
                          std::to_string(k_max) + "] for " + std::to_string(z.n_samples()) + " samples)");
    }
    KSelection out;
    double best_db = std::numeric_limits<double>::infinity();
    for (std::size_t k = k_min; k <= k_max; ++k) {
        KMeansConfig cfg = base_config;
        cfg.k = k;
        cfg.seed = base_config.seed ^ static_cast<std::uint64_t>(k);
        ClusterModel model = fit_minibatch_kmeans(z, cfg);
        const DaviesBouldinResult db = davies_bouldin(z, model);
        if (out.best_k == 0 || db.index < best_db) {
            best_db = db.index;
            out.best_k = k;
        }
        out.models.emplace(k, KSweepEntry{std::move(model), db});
    }
    return out;
}

}  // namespace proto_curriculum

#endif  // PROTO_CURRICULUM_DAVIES_BOULDIN_HPP
