// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "proto_curriculum.hpp"
#include "test_support.hpp"

using namespace proto_curriculum;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Check {
public:
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass_ = false;
            failures_ += (failures_.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { notes_ += (notes_.empty() ? "" : "; ") + what; }
    Outcome outcome() const { return {pass_, pass_ ? notes_ : failures_ + (notes_.empty() ? "" : " | " + notes_)}; }

private:
    bool pass_ = true;
    std::string failures_;
    std::string notes_;
};

std::string fmt(const char* f, double v) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

// Chi-square 0.999 quantile for 999 degrees of freedom (scipy.stats.chi2.ppf).
constexpr double kChi2Quantile999Df999 = 1142.8479838910355;

Outcome uniform_limit() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t n = 100000;
    const std::vector<float> scores(n, 0.25f);
    const auto dist = build_distribution(scores, kInfiniteTemperature);
    const double fraction = effective_size(dist.probs, n) / static_cast<double>(n);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // 1 - (1 - 1/N)^N at N = 1e5, evaluated at 30 digits with mpmath
    const double closed_form = 0.632122398233427729;
    c.note("fraction=" + fmt("%.10f", fraction) + " closed_form=" + fmt("%.10f", closed_form));
    c.require(std::abs(fraction - closed_form) < 1e-12, "fraction != 1-(1-1/N)^N");
    c.require(std::abs(fraction - 0.632121) < 1e-6,
              "|fraction - 0.632121| = " + fmt("%.3e", std::abs(fraction - 0.632121)) + " >= 1e-6");
    c.require(seconds < 1.0, "runtime " + fmt("%.3f", seconds) + " s >= 1 s");
    return c.outcome();
}

Outcome analytic_vs_monte_carlo() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const double taus[] = {0.05, 0.2, 1.0, kInfiniteTemperature};
    std::mt19937_64 gen(20240601);
    std::uniform_int_distribution<std::size_t> size(200, 5000);
    double worst_z = 0.0;
    for (int fixture = 0; fixture < 20; ++fixture) {
        const std::size_t n = size(gen);
        const auto scores = test_support::random_scores(n, gen());
        const double tau = taus[fixture % 4];
        const auto dist = build_distribution(scores, tau);
        const double analytic = effective_size(dist.probs, n);
        const auto mc = monte_carlo_effective_size(dist, n, 200, gen());
        const double z = (analytic - mc.mean) / mc.standard_error;
        worst_z = std::max(worst_z, std::abs(z));
        c.require(std::abs(analytic - mc.mean) < 3.0 * mc.standard_error,
                  "fixture " + std::to_string(fixture) + " z=" + fmt("%.2f", z));
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.note("max|z|=" + fmt("%.2f", worst_z) + " runtime=" + fmt("%.2f", seconds) + "s");
    c.require(seconds < 60.0, "runtime >= 60 s");
    return c.outcome();
}

Outcome inversion_round_trip() {
    Check c;
    const auto scores = test_support::synthetic_scores(10, 1000, 77);
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double tau : {0.05, 0.08, 0.2, 0.4, 0.6}) {
        const double f = effective_fraction(scores, tau, scores.size());
        const auto sol = solve_tau(scores, f, scores.size(), 1e-10);
        const double rel = std::abs(sol.tau - tau) / tau;
        worst = std::max(worst, rel);
        c.require(rel < 1e-3, "tau=" + fmt("%g", tau) + " rel err " + fmt("%.2e", rel));
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.note("max rel err=" + fmt("%.2e", worst) + " runtime=" + fmt("%.2f", seconds) + "s");
    c.require(seconds < 5.0, "runtime >= 5 s");
    return c.outcome();
}

Outcome monotonicity() {
    Check c;
    const auto scores = test_support::synthetic_scores(8, 500, 5);
    double previous = -1.0;
    for (int i = 0; i < 50; ++i) {
        const double tau = 0.01 * std::pow(1e4, i / 49.0);
        const double f = effective_fraction(scores, tau, scores.size());
        c.require(f > previous, "fraction not increasing at tau=" + fmt("%g", tau));
        previous = f;
    }
    ScheduleParams tau_range;
    tau_range.total_epochs = 800;
    ScheduleParams eff;
    eff.mode = ScheduleMode::effective_size;
    eff.start = 0.05;
    eff.end = kUniformLimitFraction;
    eff.total_epochs = 60;
    for (const auto& params : {tau_range, eff}) {
        const auto s = build_schedule(scores, params);
        for (std::size_t e = 1; e < s.entries.size(); ++e) {
            c.require(s.entries[e].tau >= s.entries[e - 1].tau,
                      std::string(to_string(params.mode)) + " tau decreases at epoch " + std::to_string(e));
            c.require(s.entries[e].effective_fraction >= s.entries[e - 1].effective_fraction,
                      std::string(to_string(params.mode)) + " fraction decreases at epoch " + std::to_string(e));
        }
    }
    c.note("50-point tau grid, tau_range T=800, effective_size T=60");
    return c.outcome();
}

Outcome softmax_correctness() {
    Check c;
    const auto two = softmax_probabilities(std::vector<float>{0.0f, 1.0f}, 1.0);
    c.require(std::abs(two[0] - 0.73106) < 1e-5 && std::abs(two[1] - 0.26894) < 1e-5, "two-point softmax");
    std::mt19937_64 gen(9);
    std::uniform_int_distribution<int> grid(0, 4096);
    std::uniform_int_distribution<std::size_t> len(2, 500);
    double worst_shift = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<float> s(len(gen));
        for (auto& v : s) v = static_cast<float>(grid(gen)) / 4096.0f;
        std::vector<float> shifted = s;
        for (auto& v : shifted) v += 0.5f;  // exact on the 1/4096 grid
        const double tau = 0.01 + 0.05 * trial;
        const auto p = softmax_probabilities(s, tau);
        const auto q = softmax_probabilities(shifted, tau);
        double total = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            worst_shift = std::max(worst_shift, std::abs(p[i] - q[i]));
            total += p[i];
        }
        c.require(std::abs(total - 1.0) < 1e-12, "probabilities do not sum to 1");
        const auto u = softmax_probabilities(s, kInfiniteTemperature);
        for (double v : u) c.require(v == 1.0 / static_cast<double>(s.size()), "uniform limit not exact");
    }
    c.require(worst_shift < 1e-12, "shift invariance error " + fmt("%.2e", worst_shift));
    c.note("max shift error=" + fmt("%.2e", worst_shift));
    return c.outcome();
}

Outcome sampling_statistics() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const auto scores = test_support::random_scores(1000, 4);
    const auto dist = build_distribution(scores, 0.2);
    const auto mass = oracle::oracle_alias_mass(dist);
    double alias_err = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) alias_err = std::max(alias_err, std::abs(mass[i] - dist.probs[i]));
    c.require(alias_err <= 1e-12, "alias mass error " + fmt("%.2e", alias_err));

    const std::uint64_t draws = 1000000;
    std::vector<std::uint64_t> counts(dist.size(), 0);
    for (auto i : draw_epoch(dist, EpochDrawSpec{0, draws, 31337})) ++counts[i];
    double chi2 = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = dist.probs[i] * static_cast<double>(draws);
        chi2 += std::pow(static_cast<double>(counts[i]) - expected, 2) / expected;
    }
    c.require(chi2 < kChi2Quantile999Df999, "chi2=" + fmt("%.1f", chi2));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.note("alias err=" + fmt("%.2e", alias_err) + " chi2=" + fmt("%.1f", chi2) + " (q999=" +
           fmt("%.1f", kChi2Quantile999Df999) + ") runtime=" + fmt("%.2f", seconds) + "s");
    c.require(seconds < 10.0, "runtime >= 10 s");
    return c.outcome();
}

Outcome scoring() {
    Check c;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto z = generate_synthetic({3 + seed % 4, 150, 6, 8.0, 1.5, seed});
        KMeansConfig cfg;
        cfg.k = 2 + seed % 5;
        cfg.seed = seed;
        const auto model = fit_minibatch_kmeans(z, cfg);
        const auto s = score(z, model);
        const auto ref = oracle::oracle_scores(z, model);
        for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, double(std::abs(s.normalized[i] - ref.normalized[i])));
        for (std::size_t k = 0; k < model.k; ++k) {
            float lo = 2.0f, hi = -1.0f;
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (s.cluster_of[i] != k) continue;
                lo = std::min(lo, s.normalized[i]);
                hi = std::max(hi, s.normalized[i]);
            }
            if (model.per_cluster_counts[k] < 2 || s.per_cluster_max[k] == s.per_cluster_min[k]) continue;
            c.require(lo == 0.0f && hi == 1.0f, "fixture " + std::to_string(seed) + " cluster " + std::to_string(k));
        }
    }
    c.require(worst <= 1e-6, "oracle error " + fmt("%.2e", worst));
    c.note("8 fitted fixtures, max oracle error=" + fmt("%.2e", worst));
    return c.outcome();
}

Outcome clustering() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const SyntheticSpec spec{4, 500, 8, 50.0, 0.5, 2024};
    const auto z = generate_synthetic(spec);
    KMeansConfig base;
    base.seed = 7;
    const auto sel = select_k(z, 2, 8, base);
    c.require(sel.best_k == 4, "best_k=" + std::to_string(sel.best_k));
    const auto& model = sel.models.at(sel.best_k).model;
    std::map<std::uint32_t, std::map<std::size_t, std::size_t>> table;
    for (std::size_t i = 0; i < z.n_samples(); ++i) ++table[model.assignments[i]][synthetic_label(spec, i)];
    std::size_t agree = 0;
    for (const auto& [k, labels] : table) {
        std::size_t best = 0;
        for (const auto& [l, n] : labels) best = std::max(best, n);
        agree += best;
    }
    const double purity = static_cast<double>(agree) / static_cast<double>(z.n_samples());
    c.require(purity >= 0.95, "purity " + fmt("%.3f", purity));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.note("best_k=" + std::to_string(sel.best_k) + " db=" + fmt("%.4f", sel.models.at(sel.best_k).db.index) +
           " purity=" + fmt("%.3f", purity) + " runtime=" + fmt("%.2f", seconds) + "s");
    c.require(seconds < 30.0, "runtime >= 30 s");
    return c.outcome();
}

std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[std::filesystem::relative(entry.path(), dir).string()] = ss.str();
    }
    return out;
}

Outcome determinism() {
    Check c;
    test_support::TempDir dir("acceptance");
    save_embeddings_binary(dir / "emb.bin", generate_synthetic({5, 300, 6, 12.0, 2.0, 8}));
    const json cfg_json = {{"embeddings_path", "emb.bin"},
                           {"output_dir", "out"},
                           {"master_seed", 99},
                           {"k_sweep", {{"k_min", 3}, {"k_max", 6}}},
                           {"kmeans", {{"batch_size", 256}, {"seed", 3}}},
                           {"schedule", {{"mode", "effective_size"}, {"start", 0.2}, {"end", 0.6}, {"total_epochs", 10}}}};
    std::ofstream(dir / "config.json") << cfg_json.dump(2);
    const auto config = load_config(dir / "config.json");
    auto run = [&] {
        cmd_cluster(config);
        cmd_score(config);
        cmd_schedule(config);
        cmd_sample(config, std::nullopt);
    };
    run();
    const auto first = snapshot(config.output_dir);
    run();
    const auto second = snapshot(config.output_dir);
    std::size_t epoch_files = 0;
    for (const auto& [name, bytes] : first) epoch_files += name.rfind("epochs/", 0) == 0;
    c.require(epoch_files == 10, "expected 10 epoch files, got " + std::to_string(epoch_files));
    c.require(first == second, "artifacts differ between runs");
    c.note(std::to_string(first.size()) + " files identical, " + std::to_string(epoch_files) + " epoch files");
    return c.outcome();
}

Outcome schedule_endpoints() {
    Check c;
    const auto scores = test_support::random_scores(1000, 1);
    ScheduleParams p;
    p.start = 0.07;
    p.end = 0.6;
    p.total_epochs = 800;
    const auto s = build_schedule(scores, p);
    c.require(s.entries.front().tau == 0.07, "entry[0].tau=" + fmt("%.17g", s.entries.front().tau));
    c.require(s.entries.back().tau == 0.6, "entry[T-1].tau=" + fmt("%.17g", s.entries.back().tau));
    // exact after a JSON round trip too
    const auto back = schedule_from_json(json::parse(schedule_to_json(s).dump()));
    c.require(back.entries.front().tau == 0.07 && back.entries.back().tau == 0.6, "JSON round trip changed endpoints");
    c.note("entry[0].tau=0.07 entry[799].tau=0.6");
    return c.outcome();
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"uniform-limit reproduction (N=1e5, 0.632121 +/- 1e-6, < 1 s)", uniform_limit},
        {"effective size vs Monte-Carlo (20 fixtures, 3 stderr, < 60 s)", analytic_vs_monte_carlo},
        {"inversion round trip (rel < 1e-3, 1e4 samples, < 5 s)", inversion_round_trip},
        {"monotonicity suites", monotonicity},
        {"softmax correctness", softmax_correctness},
        {"sampling statistics (alias 1e-12, chi-square 0.999, < 10 s)", sampling_statistics},
        {"scoring (min/max 0/1, oracle 1e-6)", scoring},
        {"clustering (4 blobs, k-sweep [2,8] -> 4, purity >= 95%, < 30 s)", clustering},
        {"determinism (byte-identical artifacts, T = 10)", determinism},
        {"schedule endpoints (0.07 -> 0.6 exact)", schedule_endpoints},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s :: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
