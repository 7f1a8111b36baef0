#ifndef PROTO_CURRICULUM_SAMPLER_HPP
#define PROTO_CURRICULUM_SAMPLER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "prototypicality.hpp"
#include "random.hpp"

namespace proto_curriculum {

inline constexpr double kInfiniteTemperature = std::numeric_limits<double>::infinity();

namespace detail {

// Compensated (Neumaier) summation.
inline double stable_sum(std::span<const double> xs) {
    double sum = 0.0;
    double carry = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + carry;
}

}  // namespace detail

// Walker/Vose alias table: slot s keeps itself with probability threshold[s]
// and yields alias[s] otherwise, so one uniform slot plus one uniform
// threshold gives an O(1) draw.
class AliasTable {
public:
    AliasTable() = default;

    explicit AliasTable(std::span<const double> probs) {
        const std::size_t n = probs.size();
        if (n == 0) throw DomainError("alias table over an empty distribution");
        threshold_.assign(n, 1.0);
        alias_.resize(n);
        std::vector<double> scaled(n);
        std::vector<std::uint64_t> small;
        std::vector<std::uint64_t> large;
        for (std::size_t i = 0; i < n; ++i) {
            alias_[i] = i;
            scaled[i] = probs[i] * static_cast<double>(n);
            (scaled[i] < 1.0 ? small : large).push_back(i);
        }
        // Process in ascending index order.
        std::reverse(small.begin(), small.end());
        std::reverse(large.begin(), large.end());
        while (!small.empty() && !large.empty()) {
            const auto s = small.back();
            small.pop_back();
            const auto l = large.back();
            threshold_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        // Leftovers are exactly 1 up to rounding.
        for (auto i : small) threshold_[i] = 1.0;
        for (auto i : large) threshold_[i] = 1.0;
    }

    std::size_t size() const { return threshold_.size(); }
    std::span<const double> thresholds() const { return threshold_; }
    std::span<const std::uint64_t> aliases() const { return alias_; }

    std::uint64_t pick(std::uint64_t slot_bits, std::uint64_t coin_bits) const {
        const auto slot = rng::to_range(slot_bits, threshold_.size());
        return rng::to_unit(coin_bits) < threshold_[slot] ? slot : alias_[slot];
    }

private:
    std::vector<double> threshold_;
    std::vector<std::uint64_t> alias_;
};

// Temperature softmax P(x_i, tau) over normalized scores plus its draw table.
struct SamplingDistribution {
    double tau = kInfiniteTemperature;
    std::vector<double> probs;
    AliasTable table;

    std::size_t size() const { return probs.size(); }
};

// P_i = exp(-d_i / tau) / sum_j exp(-d_j / tau). The smallest score is
// subtracted first so the largest term is exactly exp(0) = 1.
inline std::vector<double> softmax_probabilities(std::span<const float> normalized, double tau) {
    if (normalized.empty()) throw DomainError("softmax over an empty score vector");
    if (std::isnan(tau) || !(tau > 0.0)) throw DomainError("temperature must be > 0, got " + std::to_string(tau));
    const std::size_t n = normalized.size();
    std::vector<double> p(n);
    if (std::isinf(tau)) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
        return p;
    }
    const double lowest = *std::min_element(normalized.begin(), normalized.end());
    for (std::size_t i = 0; i < n; ++i) p[i] = std::exp(-(static_cast<double>(normalized[i]) - lowest) / tau);
    const double z = detail::stable_sum(p);
    for (double& v : p) v /= z;
    return p;
}

inline SamplingDistribution build_distribution(std::span<const float> normalized, double tau) {
    SamplingDistribution d;
    d.tau = tau;
    d.probs = softmax_probabilities(normalized, tau);
    d.table = AliasTable(d.probs);
    return d;
}

inline SamplingDistribution build_distribution(const PrototypicalityScores& scores, double tau) {
    return build_distribution(std::span<const float>(scores.normalized), tau);
}

struct EpochDrawSpec {
    std::uint64_t epoch = 0;
    std::uint64_t n_draws = 1;
    std::uint64_t master_seed = 0;
};

// Random bits consumed by draw t of an epoch: outputs 2t and 2t+1 of the
// SplitMix64 stream keyed by epoch_seed(master_seed, epoch).
inline std::uint64_t draw_index(const AliasTable& table, std::uint64_t epoch_key, std::uint64_t t) {
    return table.pick(rng::at(epoch_key, 2 * t), rng::at(epoch_key, 2 * t + 1));
}

// n_draws i.i.d. with-replacement draws; draw t depends only on
// (master_seed, epoch, t), so the output is independent of worker count.
inline std::vector<std::uint64_t> draw_epoch(const SamplingDistribution& dist, const EpochDrawSpec& spec) {
    if (spec.n_draws < 1) throw ConfigError("n_draws must be >= 1");
    if (dist.table.size() == 0) throw DomainError("sampling distribution has no draw table");
    const std::uint64_t key = rng::epoch_seed(spec.master_seed, spec.epoch);
    std::vector<std::uint64_t> out(spec.n_draws);
    parallel_for_blocks(out.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) out[t] = draw_index(dist.table, key, t);
    }, 1 << 16);
    return out;
}

}  // namespace proto_curriculum

#endif  // PROTO_CURRICULUM_SAMPLER_HPP
