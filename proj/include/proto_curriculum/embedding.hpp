#ifndef PROTO_CURRICULUM_EMBEDDING_HPP
#define PROTO_CURRICULUM_EMBEDDING_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace proto_curriculum {

// Dense row-major float32 matrix, one row per sample. Immutable once built.
class EmbeddingMatrix {
public:
    EmbeddingMatrix(std::size_t n_samples, std::size_t dim, std::vector<float> data,
                    std::optional<std::vector<std::string>> sample_ids = std::nullopt)
        : n_samples_(n_samples), dim_(dim), data_(std::move(data)), sample_ids_(std::move(sample_ids)) {
        if (n_samples_ < 1 || dim_ < 1) {
            throw ValidationError("embedding matrix needs n_samples >= 1 and dim >= 1");
        }
        if (data_.size() != n_samples_ * dim_) {
            throw LengthMismatchError("embedding data holds " + std::to_string(data_.size()) +
                                      " values, expected " + std::to_string(n_samples_ * dim_));
        }
        for (std::size_t i = 0; i < data_.size(); ++i) {
            if (!std::isfinite(data_[i])) {
                throw ValidationError("non-finite embedding value at row " + std::to_string(i / dim_));
            }
        }
        if (sample_ids_) {
            if (sample_ids_->size() != n_samples_) {
                throw LengthMismatchError("sample_ids length differs from n_samples");
            }
            std::unordered_set<std::string> seen;
            for (const auto& id : *sample_ids_) {
                if (!seen.insert(id).second) throw ValidationError("duplicate sample id '" + id + "'");
            }
        }
    }

    std::size_t n_samples() const { return n_samples_; }
    std::size_t dim() const { return dim_; }
    std::span<const float> data() const { return data_; }
    std::span<const float> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
    const std::optional<std::vector<std::string>>& sample_ids() const { return sample_ids_; }

    friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

private:
    std::size_t n_samples_;
    std::size_t dim_;
    std::vector<float> data_;
    std::optional<std::vector<std::string>> sample_ids_;
};

// Rows scaled to unit Euclidean norm; all-zero rows are left untouched.
inline EmbeddingMatrix l2_normalize(const EmbeddingMatrix& m) {
    std::vector<float> out(m.data().begin(), m.data().end());
    for (std::size_t i = 0; i < m.n_samples(); ++i) {
        double sq = 0.0;
        for (float v : m.row(i)) sq += static_cast<double>(v) * v;
        if (sq == 0.0) continue;
        const double inv = 1.0 / std::sqrt(sq);
        for (std::size_t j = 0; j < m.dim(); ++j) {
            out[i * m.dim() + j] = static_cast<float>(m.row(i)[j] * inv);
        }
    }
    return EmbeddingMatrix(m.n_samples(), m.dim(), std::move(out), m.sample_ids());
}

struct SyntheticSpec {
    std::size_t n_clusters = 2;
    std::size_t samples_per_cluster = 100;
    std::size_t dim = 2;
    double separation = 10.0;
    double spread = 1.0;
    std::uint64_t seed = 0;
};

// Generating centroid of synthetic cluster c: separation * (1 + c / dim) along
// axis c mod dim. Distinct centroids are therefore at least `separation` apart,
// also when n_clusters exceeds dim.
inline std::vector<double> synthetic_centroid(const SyntheticSpec& spec, std::size_t c) {
    std::vector<double> mu(spec.dim, 0.0);
    const double wrap = static_cast<double>(c / spec.dim);
    mu[c % spec.dim] = spec.separation * (1.0 + wrap);
    return mu;
}

// Generator label of row `row` (rows are grouped by cluster).
inline std::size_t synthetic_label(const SyntheticSpec& spec, std::size_t row) {
    return row / spec.samples_per_cluster;
}

inline EmbeddingMatrix generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_clusters < 1 || spec.samples_per_cluster < 1 || spec.dim < 1) {
        throw ConfigError("synthetic spec needs n_clusters, samples_per_cluster and dim >= 1");
    }
    if (!(spec.separation >= 0.0) || !std::isfinite(spec.separation)) {
        throw ConfigError("synthetic separation must be finite and >= 0");
    }
    if (!(spec.spread > 0.0) || !std::isfinite(spec.spread)) {
        throw ConfigError("synthetic spread must be finite and > 0");
    }
    const std::size_t n = spec.n_clusters * spec.samples_per_cluster;
    std::vector<float> data(n * spec.dim);
    std::mt19937_64 gen(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.spread);
    for (std::size_t c = 0; c < spec.n_clusters; ++c) {
        const auto mu = synthetic_centroid(spec, c);
        for (std::size_t s = 0; s < spec.samples_per_cluster; ++s) {
            float* row = data.data() + (c * spec.samples_per_cluster + s) * spec.dim;
            for (std::size_t j = 0; j < spec.dim; ++j) row[j] = static_cast<float>(mu[j] + noise(gen));
        }
    }
    return EmbeddingMatrix(n, spec.dim, std::move(data));
}

}  // namespace proto_curriculum

#endif  // PROTO_CURRICULUM_EMBEDDING_HPP
