// proto-curriculum: cluster embeddings, score prototypicality, build the
// temperature schedule and write per-epoch sample index files.
//
// Exit codes: 0 ok, 2 config error, 3 data/IO error, 4 verification failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "proto_curriculum.hpp"

namespace pc = proto_curriculum;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitVerify = 4;

struct Overrides {
    std::string output_dir;
    std::optional<std::size_t> k;
    std::optional<std::size_t> k_min;
    std::optional<std::size_t> k_max;
    std::optional<std::string> mode;
    std::optional<double> start;
    std::optional<double> end;
    std::optional<std::uint64_t> epochs;
    std::optional<std::uint64_t> n_draws;
    std::optional<std::uint64_t> seed;
    bool normalize_l2 = false;
};

pc::PipelineConfig resolve_config(const std::string& path, const Overrides& o) {
    auto c = pc::load_config(path);
    if (!o.output_dir.empty()) c.output_dir = o.output_dir;
    if (o.k) c.kmeans.k = *o.k;
    if (o.k_min || o.k_max) {
        pc::KSweep sweep = c.k_sweep.value_or(pc::KSweep{});
        if (o.k_min) sweep.k_min = *o.k_min;
        if (o.k_max) sweep.k_max = *o.k_max;
        c.k_sweep = sweep;
    }
    if (o.mode) c.schedule.mode = pc::parse_schedule_mode(*o.mode);
    if (o.start) c.schedule.start = *o.start;
    if (o.end) c.schedule.end = *o.end;
    if (o.epochs) c.schedule.total_epochs = *o.epochs;
    if (o.n_draws) c.schedule.n_draws = *o.n_draws;
    if (o.seed) {
        c.master_seed = *o.seed;
        c.schedule.master_seed = *o.seed;
    }
    if (o.normalize_l2) c.normalize_l2 = true;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prototype-driven curriculum sampler"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    Overrides o;
    app.add_option("--config", config_path, "Pipeline config (JSON)")->required();
    app.add_option("--output-dir", o.output_dir, "Override output_dir");
    app.add_option("--seed", o.seed, "Override master_seed");
    app.add_flag("--normalize-l2", o.normalize_l2, "L2-normalize embeddings before use (default off)");

    auto* cluster = app.add_subcommand("cluster", "Fit mini-batch k-means (optionally sweeping k by Davies-Bouldin)");
    cluster->add_option("--k", o.k, "Override kmeans.k");
    cluster->add_option("--k-min", o.k_min, "Sweep lower bound");
    cluster->add_option("--k-max", o.k_max, "Sweep upper bound");

    auto* score = app.add_subcommand("score", "Write per-sample prototypicality scores");

    auto* schedule = app.add_subcommand("schedule", "Build the per-epoch temperature schedule");
    schedule->add_option("--mode", o.mode, "tau_range or effective_size");
    schedule->add_option("--start", o.start, "Schedule start value");
    schedule->add_option("--end", o.end, "Schedule end value");
    schedule->add_option("--epochs", o.epochs, "Total epochs");
    schedule->add_option("--n-draws", o.n_draws, "Draws per epoch (0 = n_samples)");

    auto* sample = app.add_subcommand("sample", "Write epoch index files");
    std::optional<std::uint64_t> epoch;
    bool all = false;
    auto* epoch_opt = sample->add_option("--epoch", epoch, "Epoch to write");
    auto* all_opt = sample->add_flag("--all", all, "Write every epoch");
    epoch_opt->excludes(all_opt);

    auto* verify = app.add_subcommand("verify", "Check artifacts against the reference oracles");
    pc::VerifyOptions vopt;
    verify->add_option("--trials", vopt.trials, "Monte-Carlo trials per checked epoch");
    verify->add_option("--epochs-checked", vopt.epochs_checked, "Schedule epochs to check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        const auto config = resolve_config(config_path, o);
        nlohmann::json report;
        if (*cluster) {
            report = pc::cmd_cluster(config);
        } else if (*score) {
            report = pc::cmd_score(config);
        } else if (*schedule) {
            report = pc::cmd_schedule(config);
        } else if (*sample) {
            if (!epoch && !all) throw pc::ConfigError("sample needs --epoch N or --all");
            report = pc::cmd_sample(config, all ? std::nullopt : epoch);
        } else if (*verify) {
            report = pc::cmd_verify(config, vopt);
        }
        std::cout << report.dump(2) << "\n";
        return kExitOk;
    } catch (const pc::VerificationFailure& e) {
        std::cout << e.report.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerify;
    } catch (const pc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const pc::OutOfRangeError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const pc::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const pc::Error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitData;
    }
}
