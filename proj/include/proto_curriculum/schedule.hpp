#ifndef PROTO_CURRICULUM_SCHEDULE_HPP
#define PROTO_CURRICULUM_SCHEDULE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "random.hpp"
#include "sampler.hpp"

namespace proto_curriculum {

// Upper limit of the effective fraction for uniform sampling as N grows.
inline const double kUniformLimitFraction = 1.0 - std::exp(-1.0);

// Expected number of distinct samples after n_draws with-replacement draws:
// sum_i 1 - (1 - p_i)^n_draws, with the power evaluated as
// exp(n_draws * log1p(-p_i)) to keep precision for tiny p_i.
inline double effective_size(std::span<const double> probs, std::uint64_t n_draws) {
    if (n_draws < 1) throw ConfigError("n_draws must be >= 1");
    if (probs.empty()) throw DomainError("effective size of an empty distribution");
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) {
            throw DomainError("probability " + std::to_string(i) + " outside [0, 1]");
        }
    }
    if (std::abs(detail::stable_sum(probs) - 1.0) > 1e-9) throw DomainError("probabilities do not sum to 1");
    const double draws = static_cast<double>(n_draws);
    double total = 0.0;
    double carry = 0.0;
    for (double p : probs) {
        const double seen = -std::expm1(draws * std::log1p(-p));
        const double t = total + seen;
        carry += (total - t) + seen;
        total = t;
    }
    return total + carry;
}

// |D_tau| / |D| for the softmax of `normalized` at temperature tau.
inline double effective_fraction(std::span<const float> normalized, double tau, std::uint64_t n_draws) {
    const auto p = softmax_probabilities(normalized, tau);
    return effective_size(p, n_draws) / static_cast<double>(normalized.size());
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

// Mean and standard error of the distinct-index count over `trials`
// independent epochs of n_draws draws. Trial t reuses the epoch stream
// (seed, epoch = t).
inline MonteCarloEstimate monte_carlo_effective_size(const SamplingDistribution& dist, std::uint64_t n_draws,
                                                     std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw ConfigError("monte carlo trials must be >= 1");
    std::vector<char> seen(dist.size());
    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::fill(seen.begin(), seen.end(), 0);
        const auto idx = draw_epoch(dist, EpochDrawSpec{t, n_draws, seed});
        std::uint64_t unique = 0;
        for (auto i : idx) {
            if (!seen[i]) {
                seen[i] = 1;
                ++unique;
            }
        }
        // Welford update
        const double x = static_cast<double>(unique);
        const double delta = x - mean;
        mean += delta / static_cast<double>(t + 1);
        m2 += delta * (x - mean);
    }
    MonteCarloEstimate est;
    est.mean = mean;
    if (trials > 1) est.standard_error = std::sqrt(m2 / static_cast<double>(trials - 1) / static_cast<double>(trials));
    return est;
}

struct TauBracket {
    double lo = 1e-4;
    double hi = 1e4;
};

struct TauSolution {
    double tau = 0.0;
    double fraction = 0.0;  // effective fraction at the returned tau
    bool saturated = false;
    bool degenerate = false;
    int iterations = 0;
};

inline constexpr int kMaxBisectionIterations = 200;

// Inverts the monotone map tau -> effective fraction by bisection over
// log(tau) inside the bracket, stopping once |fraction - target| < tol.
// Targets above the fraction at bracket.hi saturate to bracket.hi.
inline TauSolution solve_tau(std::span<const float> normalized, double target_fraction, std::uint64_t n_draws,
                             double tol = 1e-4, TauBracket bracket = {}) {
    if (!(tol > 0.0)) throw ConfigError("solver tolerance must be > 0");
    if (!(bracket.lo > 0.0) || !(bracket.hi > bracket.lo) || !std::isfinite(bracket.hi)) {
        throw ConfigError("temperature bracket must satisfy 0 < lo < hi < inf");
    }
    if (normalized.empty()) throw DomainError("cannot solve for tau over empty scores");
    if (!std::isfinite(target_fraction)) throw ConfigError("target fraction must be finite");

    auto fraction_at = [&](double tau) { return effective_fraction(normalized, tau, n_draws); };

    const auto [lo_it, hi_it] = std::minmax_element(normalized.begin(), normalized.end());
    if (*lo_it == *hi_it) {
        const double constant = fraction_at(bracket.hi);
        if (std::abs(constant - target_fraction) < tol) {
            const double mid = 0.5 * (bracket.lo + bracket.hi);
            return TauSolution{mid, constant, false, true, 0};
        }
        throw DegenerateDistributionError("all scores are equal: effective fraction is " + std::to_string(constant) +
                                          " for every temperature, target " + std::to_string(target_fraction));
    }

    const double f_lo = fraction_at(bracket.lo);
    const double f_hi = fraction_at(bracket.hi);
    if (target_fraction >= f_hi) {
        return TauSolution{bracket.hi, f_hi, target_fraction - f_hi >= tol, false, 0};
    }
    if (target_fraction <= f_lo) {
        if (f_lo - target_fraction < tol) return TauSolution{bracket.lo, f_lo, false, false, 0};
        throw OutOfRangeError("target fraction " + std::to_string(target_fraction) + " outside achievable range [" +
                                  std::to_string(f_lo) + ", " + std::to_string(f_hi) + "]",
                              f_lo, f_hi);
    }

    double log_lo = std::log(bracket.lo);
    double log_hi = std::log(bracket.hi);
    TauSolution sol;
    for (int it = 1; it <= kMaxBisectionIterations; ++it) {
        const double tau = std::exp(0.5 * (log_lo + log_hi));
        const double f = fraction_at(tau);
        sol = TauSolution{tau, f, false, false, it};
        if (std::abs(f - target_fraction) < tol) break;
        if (f < target_fraction) {
            log_lo = std::log(tau);
        } else {
            log_hi = std::log(tau);
        }
        if (log_hi - log_lo < 1e-15) break;
    }
    return sol;
}

enum class ScheduleMode { tau_range, effective_size };

inline std::string_view to_string(ScheduleMode m) {
    return m == ScheduleMode::tau_range ? "tau_range" : "effective_size";
}

inline ScheduleMode parse_schedule_mode(std::string_view s) {
    if (s == "tau_range") return ScheduleMode::tau_range;
    if (s == "effective_size") return ScheduleMode::effective_size;
    throw ConfigError("unknown schedule mode '" + std::string(s) + "' (expected tau_range or effective_size)");
}

struct ScheduleEntry {
    std::uint64_t epoch = 0;
    double tau = 0.0;
    double effective_fraction = 0.0;
    std::uint64_t epoch_seed = 0;

    friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct CurriculumSchedule {
    ScheduleMode mode = ScheduleMode::tau_range;
    std::uint64_t total_epochs = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t n_draws = 0;
    double start = 0.0;
    double end = 0.0;
    std::vector<ScheduleEntry> entries;

    friend bool operator==(const CurriculumSchedule&, const CurriculumSchedule&) = default;
};

// Cosine ease from start (epoch 0) to end (epoch T-1); exact at both ends.
inline double cosine_ramp(double start, double end, std::uint64_t epoch, std::uint64_t total_epochs) {
    if (total_epochs <= 1) return end;
    const double phase = std::numbers::pi * static_cast<double>(epoch) / static_cast<double>(total_epochs - 1);
    const double w = epoch + 1 == total_epochs ? 1.0 : 0.5 * (1.0 - std::cos(phase));
    return std::lerp(start, end, w);
}

struct ScheduleParams {
    ScheduleMode mode = ScheduleMode::tau_range;
    double start = 0.07;
    double end = 0.6;
    std::uint64_t total_epochs = 800;
    std::uint64_t master_seed = 0;
    std::uint64_t n_draws = 0;  // 0 = one draw per sample
    double tol = 1e-4;
};

// Per-epoch (tau, effective fraction, seed) records following a cosine ramp of
// tau (tau_range) or of the effective fraction (effective_size).
inline CurriculumSchedule build_schedule(std::span<const float> normalized, const ScheduleParams& params) {
    if (normalized.empty()) throw DomainError("cannot schedule over empty scores");
    if (params.total_epochs < 1) throw ConfigError("total_epochs must be >= 1");
    if (!(params.tol > 0.0)) throw ConfigError("schedule tolerance must be > 0");
    if (!std::isfinite(params.start) || !std::isfinite(params.end) || !(params.start > 0.0) ||
        !(params.start <= params.end)) {
        throw ConfigError("schedule range must satisfy 0 < start <= end");
    }
    if (params.mode == ScheduleMode::effective_size && params.end > kUniformLimitFraction + params.tol) {
        throw ConfigError("effective_size end " + std::to_string(params.end) + " exceeds the uniform limit 1 - 1/e");
    }

    CurriculumSchedule s;
    s.mode = params.mode;
    s.total_epochs = params.total_epochs;
    s.master_seed = params.master_seed;
    s.n_draws = params.n_draws == 0 ? normalized.size() : params.n_draws;
    s.start = params.start;
    s.end = params.end;
    s.entries.reserve(params.total_epochs);

    TauBracket bracket;
    for (std::uint64_t e = 0; e < params.total_epochs; ++e) {
        const double v = cosine_ramp(params.start, params.end, e, params.total_epochs);
        ScheduleEntry entry;
        entry.epoch = e;
        entry.epoch_seed = rng::epoch_seed(params.master_seed, e);
        if (params.mode == ScheduleMode::tau_range) {
            entry.tau = v;
            entry.effective_fraction = effective_fraction(normalized, v, s.n_draws);
        } else {
            TauSolution sol;
            try {
                sol = solve_tau(normalized, v, s.n_draws, params.tol, bracket);
            } catch (const OutOfRangeError& err) {
                throw OutOfRangeError("epoch " + std::to_string(e) + ": " + err.what(), err.achievable_lo,
                                      err.achievable_hi);
            } catch (const DegenerateDistributionError& err) {
                throw DegenerateDistributionError("epoch " + std::to_string(e) + ": " + err.what());
            }
            entry.tau = sol.tau;
            entry.effective_fraction = sol.fraction;
            // Later epochs never search below the current temperature.
            if (!sol.degenerate && sol.tau < bracket.hi) bracket.lo = sol.tau;
        }
        s.entries.push_back(entry);
    }
    return s;
}

}  // namespace proto_curriculum

#endif  // PROTO_CURRICULUM_SCHEDULE_HPP
