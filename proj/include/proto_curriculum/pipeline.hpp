#ifndef PROTO_CURRICULUM_PIPELINE_HPP
#define PROTO_CURRICULUM_PIPELINE_HPP

// End-to-end pipeline driven by a JSON config: cluster -> score -> schedule
// -> sample, plus verify. Each step reads the previous step's artifacts from
// output_dir, so steps can run in separate processes.
//
// output_dir layout:
//   centroids.bin  assignments.bin  cluster.json
//   scores.bin     scores.json
//   schedule.json  schedule.csv
//   epochs/epoch_NNNN.idx
//   verify.json

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "davies_bouldin.hpp"
#include "embedding.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "kmeans.hpp"
#include "oracles.hpp"
#include "prototypicality.hpp"
#include "sampler.hpp"
#include "schedule.hpp"

namespace proto_curriculum {

using nlohmann::json;

// Raised by verify when a check misses its threshold (CLI exit code 4).
class VerificationFailure : public Error {
public:
    VerificationFailure(const std::string& what, json report) : Error(what), report(std::move(report)) {}
    json report;
};

struct KSweep {
    std::size_t k_min = 2;
    std::size_t k_max = 2;
};

struct PipelineConfig {
    std::filesystem::path embeddings_path;
    EmbeddingFormat format = EmbeddingFormat::binary;
    bool normalize_l2 = false;
    KMeansConfig kmeans;
    std::optional<KSweep> k_sweep;
    ScheduleParams schedule;
    std::uint64_t master_seed = 0;
    std::filesystem::path output_dir;

    // Canonical JSON form; every persisted sidecar carries its hash.
    json to_json() const {
        json j;
        j["embeddings_path"] = embeddings_path.string();
        j["format"] = format == EmbeddingFormat::binary ? "binary" : "csv";
        j["normalize_l2"] = normalize_l2;
        j["kmeans"] = {{"k", kmeans.k},
                       {"batch_size", kmeans.batch_size},
                       {"max_iters", kmeans.max_iters},
                       {"tol", kmeans.tol},
                       {"seed", kmeans.seed},
                       {"init", std::string(to_string(kmeans.init))}};
        if (k_sweep) {
            j["k_sweep"] = {{"k_min", k_sweep->k_min}, {"k_max", k_sweep->k_max}};
        } else {
            j["k_sweep"] = nullptr;
        }
        j["schedule"] = {{"mode", std::string(to_string(schedule.mode))},
                         {"start", schedule.start},
                         {"end", schedule.end},
                         {"total_epochs", schedule.total_epochs},
                         {"n_draws", schedule.n_draws},
                         {"tol", schedule.tol}};
        j["master_seed"] = master_seed;
        j["output_dir"] = output_dir.string();
        return j;
    }
};

namespace detail {

template <class T>
T field_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
    return p.is_absolute() || base.empty() ? p : base / p;
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    write_file(path, std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

inline json read_json(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError(path.string() + ": no such file");
    const auto bytes = read_file(path);
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": invalid JSON: " + e.what());
    }
}

inline std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

// Parses a config document. Relative paths resolve against base_dir.
inline PipelineConfig parse_config(const json& j, const std::filesystem::path& base_dir = {}) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    PipelineConfig c;
    const auto emb = detail::field_or<std::string>(j, "embeddings_path", "");
    if (emb.empty()) throw ConfigError("config field 'embeddings_path' is required");
    c.embeddings_path = detail::resolve(base_dir, emb);
    c.format = parse_embedding_format(detail::field_or<std::string>(j, "format", "binary"));
    c.normalize_l2 = detail::field_or<bool>(j, "normalize_l2", false);
    const auto out = detail::field_or<std::string>(j, "output_dir", "");
    if (out.empty()) throw ConfigError("config field 'output_dir' is required");
    c.output_dir = detail::resolve(base_dir, out);
    c.master_seed = detail::field_or<std::uint64_t>(j, "master_seed", 0);

    const json km = j.contains("kmeans") ? j.at("kmeans") : json::object();
    c.kmeans.k = detail::field_or<std::size_t>(km, "k", c.kmeans.k);
    c.kmeans.batch_size = detail::field_or<std::size_t>(km, "batch_size", c.kmeans.batch_size);
    c.kmeans.max_iters = detail::field_or<std::size_t>(km, "max_iters", c.kmeans.max_iters);
    c.kmeans.tol = detail::field_or<double>(km, "tol", c.kmeans.tol);
    c.kmeans.seed = detail::field_or<std::uint64_t>(km, "seed", c.kmeans.seed);
    c.kmeans.init = parse_init_method(detail::field_or<std::string>(km, "init", "kmeanspp"));

    if (j.contains("k_sweep") && !j.at("k_sweep").is_null()) {
        const json& ks = j.at("k_sweep");
        KSweep sweep;
        sweep.k_min = detail::field_or<std::size_t>(ks, "k_min", 0);
        sweep.k_max = detail::field_or<std::size_t>(ks, "k_max", 0);
        if (sweep.k_min < 2 || sweep.k_max < sweep.k_min) {
            throw ConfigError("k_sweep needs explicit 2 <= k_min <= k_max");
        }
        c.k_sweep = sweep;
    }

    const json sc = j.contains("schedule") ? j.at("schedule") : json::object();
    c.schedule.mode = parse_schedule_mode(detail::field_or<std::string>(sc, "mode", "tau_range"));
    c.schedule.start = detail::field_or<double>(sc, "start", c.schedule.start);
    c.schedule.end = detail::field_or<double>(sc, "end", c.schedule.end);
    c.schedule.total_epochs = detail::field_or<std::uint64_t>(sc, "total_epochs", c.schedule.total_epochs);
    c.schedule.n_draws = detail::field_or<std::uint64_t>(sc, "n_draws", 0);
    c.schedule.tol = detail::field_or<double>(sc, "tol", c.schedule.tol);
    c.schedule.master_seed = c.master_seed;
    return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError(path.string() + ": config file not found");
    json j;
    try {
        j = detail::read_json(path);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(j, path.parent_path());
}

inline std::string config_hash(const PipelineConfig& c) { return detail::hex64(detail::fnv1a(c.to_json().dump())); }

struct ArtifactPaths {
    std::filesystem::path dir;

    std::filesystem::path centroids() const { return dir / "centroids.bin"; }
    std::filesystem::path assignments() const { return dir / "assignments.bin"; }
    std::filesystem::path cluster_json() const { return dir / "cluster.json"; }
    std::filesystem::path scores() const { return dir / "scores.bin"; }
    std::filesystem::path scores_json() const { return dir / "scores.json"; }
    std::filesystem::path schedule_json() const { return dir / "schedule.json"; }
    std::filesystem::path schedule_csv() const { return dir / "schedule.csv"; }
    std::filesystem::path epochs_dir() const { return dir / "epochs"; }
    std::filesystem::path epoch_file(std::uint64_t e) const {
        char name[32];
        std::snprintf(name, sizeof(name), "epoch_%04llu.idx", static_cast<unsigned long long>(e));
        return epochs_dir() / name;
    }
    std::filesystem::path verify_json() const { return dir / "verify.json"; }
};

inline EmbeddingMatrix load_pipeline_embeddings(const PipelineConfig& c) {
    auto z = load_embeddings(c.embeddings_path, c.format);
    return c.normalize_l2 ? l2_normalize(z) : z;
}

// ---- cluster model persistence ---------------------------------------------

inline void save_cluster_model(const ArtifactPaths& paths, const ClusterModel& m,
                               std::optional<DaviesBouldinResult> db, const json& extra = json::object()) {
    save_centroids(paths.centroids(), m);
    save_assignments(paths.assignments(), m.assignments);
    json j = extra;
    j["k"] = m.k;
    j["dim"] = m.dim;
    j["n_samples"] = m.assignments.size();
    j["seed"] = m.config.seed;
    j["config"] = {{"k", m.config.k},
                   {"batch_size", m.config.batch_size},
                   {"max_iters", m.config.max_iters},
                   {"tol", m.config.tol},
                   {"seed", m.config.seed},
                   {"init", std::string(to_string(m.config.init))}};
    j["per_cluster_counts"] = m.per_cluster_counts;
    j["empty_clusters"] = m.empty_clusters;
    if (db && std::isfinite(db->index)) {
        j["db"] = db->index;
    } else {
        j["db"] = nullptr;  // undefined or coincident centroids
    }
    j["db_coincident_centroids"] = db ? db->coincident_centroids : false;
    detail::write_text(paths.cluster_json(), j.dump(2) + "\n");
}

inline ClusterModel load_cluster_model(const ArtifactPaths& paths) {
    const json side = detail::read_json(paths.cluster_json());
    auto block = load_centroids(paths.centroids());
    ClusterModel m;
    m.k = block.k;
    m.dim = block.dim;
    m.centroids = std::move(block.values);
    m.assignments = load_assignments(paths.assignments());
    try {
        if (side.at("k").get<std::size_t>() != m.k || side.at("dim").get<std::size_t>() != m.dim) {
            throw CorruptionError(paths.cluster_json().string() + ": k/dim disagree with centroid block");
        }
        const json& cfg = side.at("config");
        m.config.k = cfg.at("k").get<std::size_t>();
        m.config.batch_size = cfg.at("batch_size").get<std::size_t>();
        m.config.max_iters = cfg.at("max_iters").get<std::size_t>();
        m.config.tol = cfg.at("tol").get<double>();
        m.config.seed = cfg.at("seed").get<std::uint64_t>();
        m.config.init = parse_init_method(cfg.at("init").get<std::string>());
    } catch (const json::exception& e) {
        throw FormatError(paths.cluster_json().string() + ": " + e.what());
    } catch (const ConfigError& e) {
        throw FormatError(paths.cluster_json().string() + ": " + e.what());
    }
    m.validate(m.assignments.size());
    m.per_cluster_counts.assign(m.k, 0);
    for (auto a : m.assignments) ++m.per_cluster_counts[a];
    for (std::size_t c = 0; c < m.k; ++c) {
        if (m.per_cluster_counts[c] == 0) m.empty_clusters.push_back(static_cast<std::uint32_t>(c));
    }
    return m;
}

// ---- schedule persistence --------------------------------------------------

inline json schedule_to_json(const CurriculumSchedule& s) {
    json entries = json::array();
    for (const auto& e : s.entries) {
        entries.push_back({{"epoch", e.epoch},
                           {"tau", e.tau},
                           {"effective_fraction", e.effective_fraction},
                           {"epoch_seed", e.epoch_seed}});
    }
    return {{"mode", std::string(to_string(s.mode))},
            {"total_epochs", s.total_epochs},
            {"master_seed", s.master_seed},
            {"n_draws", s.n_draws},
            {"params", {{"start", s.start}, {"end", s.end}}},
            {"entries", std::move(entries)}};
}

inline CurriculumSchedule schedule_from_json(const json& j, const std::string& origin = "<schedule>") {
    CurriculumSchedule s;
    try {
        s.mode = parse_schedule_mode(j.at("mode").get<std::string>());
        s.total_epochs = j.at("total_epochs").get<std::uint64_t>();
        s.master_seed = j.at("master_seed").get<std::uint64_t>();
        s.n_draws = j.at("n_draws").get<std::uint64_t>();
        s.start = j.at("params").at("start").get<double>();
        s.end = j.at("params").at("end").get<double>();
        for (const auto& e : j.at("entries")) {
            s.entries.push_back(ScheduleEntry{e.at("epoch").get<std::uint64_t>(), e.at("tau").get<double>(),
                                              e.at("effective_fraction").get<double>(),
                                              e.at("epoch_seed").get<std::uint64_t>()});
        }
    } catch (const json::exception& e) {
        throw FormatError(origin + ": " + e.what());
    } catch (const ConfigError& e) {
        throw FormatError(origin + ": " + e.what());
    }
    if (s.entries.size() != s.total_epochs) throw LengthMismatchError(origin + ": entries length != total_epochs");
    for (std::size_t e = 0; e < s.entries.size(); ++e) {
        if (s.entries[e].epoch != e) throw FormatError(origin + ": entries out of order at " + std::to_string(e));
        if (!(s.entries[e].tau > 0.0)) throw ValidationError(origin + ": non-positive tau at epoch " + std::to_string(e));
    }
    if (s.n_draws < 1) throw FormatError(origin + ": field 'n_draws' must be >= 1");
    return s;
}

inline std::string schedule_csv(const CurriculumSchedule& s) {
    std::string out = "epoch,tau,effective_fraction\n";
    for (const auto& e : s.entries) {
        out += std::to_string(e.epoch) + "," + detail::shortest(e.tau) + "," + detail::shortest(e.effective_fraction) +
               "\n";
    }
    return out;
}

// ---- epoch streams (the surface host-language bindings consume) ------------

// Scores plus schedule, loaded eagerly from an output directory.
struct SamplerArtifacts {
    PrototypicalityScores scores;
    CurriculumSchedule schedule;
};

inline SamplerArtifacts load_sampler_artifacts(const std::filesystem::path& output_dir) {
    const ArtifactPaths paths{output_dir};
    SamplerArtifacts a;
    a.scores = load_scores(paths.scores());
    a.schedule = schedule_from_json(detail::read_json(paths.schedule_json()), paths.schedule_json().string());
    return a;
}

inline std::vector<std::uint64_t> epoch_indices(const SamplerArtifacts& a, std::uint64_t epoch) {
    if (epoch >= a.schedule.total_epochs) {
        throw ConfigError("epoch " + std::to_string(epoch) + " out of range [0, " +
                          std::to_string(a.schedule.total_epochs) + ")");
    }
    const auto dist = build_distribution(a.scores, a.schedule.entries[epoch].tau);
    return draw_epoch(dist, EpochDrawSpec{epoch, a.schedule.n_draws, a.schedule.master_seed});
}

// ---- commands --------------------------------------------------------------

inline json cmd_cluster(const PipelineConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto z = load_pipeline_embeddings(c);
    std::filesystem::create_directories(c.output_dir);
    const ArtifactPaths paths{c.output_dir};
    const std::string hash = config_hash(c);

    json report;
    json extra = {{"config_hash", hash}};
    if (c.k_sweep) {
        auto sel = select_k(z, c.k_sweep->k_min, c.k_sweep->k_max, c.kmeans);
        json table = json::array();
        for (const auto& [k, entry] : sel.models) {
            table.push_back({{"k", k},
                             {"db", std::isfinite(entry.db.index) ? json(entry.db.index) : json(nullptr)},
                             {"coincident_centroids", entry.db.coincident_centroids}});
        }
        extra["sweep"] = table;
        extra["best_k"] = sel.best_k;
        const auto& best = sel.models.at(sel.best_k);
        save_cluster_model(paths, best.model, best.db, extra);
        report = {{"k", sel.best_k}, {"best_k", sel.best_k}, {"sweep", table}};
        report["db"] = std::isfinite(best.db.index) ? json(best.db.index) : json(nullptr);
    } else {
        const auto model = fit_minibatch_kmeans(z, c.kmeans);
        std::optional<DaviesBouldinResult> db;
        if (model.non_empty_count() >= 2) db = davies_bouldin(z, model);
        save_cluster_model(paths, model, db, extra);
        report = {{"k", model.k}};
        report["db"] = db && std::isfinite(db->index) ? json(db->index) : json(nullptr);
    }
    report["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report["config_hash"] = hash;
    return report;
}

inline constexpr std::size_t kHistogramBins = 20;

inline std::vector<std::uint64_t> score_histogram(const PrototypicalityScores& s) {
    std::vector<std::uint64_t> bins(kHistogramBins, 0);
    for (float d : s.normalized) {
        auto b = static_cast<std::size_t>(static_cast<double>(d) * kHistogramBins);
        ++bins[std::min(b, kHistogramBins - 1)];
    }
    return bins;
}

inline json cmd_score(const PipelineConfig& c) {
    const auto z = load_pipeline_embeddings(c);
    const ArtifactPaths paths{c.output_dir};
    const auto model = load_cluster_model(paths);
    const auto s = score(z, model);
    save_scores(paths.scores(), s);

    std::vector<double> max_normalized(model.k, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        max_normalized[s.cluster_of[i]] = std::max<double>(max_normalized[s.cluster_of[i]], s.normalized[i]);
    }
    json summary = {{"n_samples", s.size()},
                    {"k", model.k},
                    {"per_cluster_min", s.per_cluster_min},
                    {"per_cluster_max", s.per_cluster_max},
                    {"per_cluster_counts", model.per_cluster_counts},
                    {"per_cluster_max_normalized", max_normalized},
                    {"histogram", {{"bins", kHistogramBins}, {"counts", score_histogram(s)}}},
                    {"config_hash", config_hash(c)}};
    detail::write_text(paths.scores_json(), summary.dump(2) + "\n");
    return summary;
}

inline json cmd_schedule(const PipelineConfig& c) {
    const ArtifactPaths paths{c.output_dir};
    const auto s = load_scores(paths.scores());
    ScheduleParams params = c.schedule;
    params.master_seed = c.master_seed;
    const auto sched = build_schedule(s.normalized, params);
    json j = schedule_to_json(sched);
    j["config_hash"] = config_hash(c);
    detail::write_text(paths.schedule_json(), j.dump(2) + "\n");
    detail::write_text(paths.schedule_csv(), schedule_csv(sched));
    return {{"total_epochs", sched.total_epochs},
            {"mode", std::string(to_string(sched.mode))},
            {"first", {{"tau", sched.entries.front().tau}, {"effective_fraction", sched.entries.front().effective_fraction}}},
            {"last", {{"tau", sched.entries.back().tau}, {"effective_fraction", sched.entries.back().effective_fraction}}}};
}

// Writes epoch files for one epoch, or for all epochs when `epoch` is empty.
inline json cmd_sample(const PipelineConfig& c, std::optional<std::uint64_t> epoch) {
    const ArtifactPaths paths{c.output_dir};
    const auto artifacts = load_sampler_artifacts(c.output_dir);
    std::vector<std::uint64_t> epochs;
    if (epoch) {
        if (*epoch >= artifacts.schedule.total_epochs) {
            throw ConfigError("epoch " + std::to_string(*epoch) + " out of range [0, " +
                              std::to_string(artifacts.schedule.total_epochs) + ")");
        }
        epochs.push_back(*epoch);
    } else {
        for (std::uint64_t e = 0; e < artifacts.schedule.total_epochs; ++e) epochs.push_back(e);
    }
    std::filesystem::create_directories(paths.epochs_dir());
    json written = json::array();
    for (auto e : epochs) {
        const auto idx = epoch_indices(artifacts, e);
        save_indices(paths.epoch_file(e), idx);
        written.push_back(paths.epoch_file(e).filename().string());
    }
    return {{"files", written}, {"n_draws", artifacts.schedule.n_draws}};
}

struct VerifyOptions {
    std::uint64_t trials = 200;
    // Number of schedule epochs (spread evenly, endpoints included) to check.
    std::uint64_t epochs_checked = 3;
    double score_tolerance = 1e-6;
    double alias_tolerance = 1e-12;
    double z_threshold = 3.0;
};

// Re-derives scores with the scalar oracle, enumerates alias-table mass and
// compares the analytic effective size against Monte-Carlo counts. Throws
// VerificationFailure (carrying the report) when any check fails.
inline json cmd_verify(const PipelineConfig& c, const VerifyOptions& opt = {}) {
    if (opt.trials < 1) throw ConfigError("--trials must be >= 1");
    if (opt.epochs_checked < 1) throw ConfigError("epochs_checked must be >= 1");
    const ArtifactPaths paths{c.output_dir};
    const auto z = load_pipeline_embeddings(c);
    const auto model = load_cluster_model(paths);
    const auto schedule =
        schedule_from_json(detail::read_json(paths.schedule_json()), paths.schedule_json().string());

    json report = {{"config_hash", config_hash(c)}, {"trials", opt.trials}};
    bool ok = true;

    std::optional<PrototypicalityScores> stored;
    try {
        stored = load_scores(paths.scores());
    } catch (const DataError& e) {
        report["scores"] = {{"pass", false}, {"error", e.what()}};
        ok = false;
    }
    if (stored) {
        const auto ref = oracle::oracle_scores(z, model);
        double max_err = 0.0;
        std::uint64_t cluster_mismatch = 0;
        if (stored->size() != ref.size()) {
            max_err = std::numeric_limits<double>::infinity();
        } else {
            for (std::size_t i = 0; i < ref.size(); ++i) {
                max_err = std::max(max_err, std::abs(static_cast<double>(stored->normalized[i]) - ref.normalized[i]));
                max_err = std::max(max_err, std::abs(static_cast<double>(stored->raw[i]) - ref.raw[i]));
                if (stored->cluster_of[i] != ref.cluster_of[i]) ++cluster_mismatch;
            }
        }
        const bool pass = max_err <= opt.score_tolerance && cluster_mismatch == 0;
        report["scores"] = {{"pass", pass},
                            {"max_abs_error", std::isfinite(max_err) ? json(max_err) : json(nullptr)},
                            {"cluster_mismatches", cluster_mismatch},
                            {"tolerance", opt.score_tolerance}};
        ok = ok && pass;
    }

    std::vector<std::uint64_t> picks;
    const std::uint64_t total = schedule.total_epochs;
    const std::uint64_t want = std::min(opt.epochs_checked, total);
    for (std::uint64_t i = 0; i < want; ++i) {
        const std::uint64_t e = want == 1 ? total - 1 : i * (total - 1) / (want - 1);
        if (picks.empty() || picks.back() != e) picks.push_back(e);
    }

    json epochs = json::array();
    if (stored) {
        for (auto e : picks) {
            const double tau = schedule.entries[e].tau;
            const auto dist = build_distribution(*stored, tau);
            const auto mass = oracle::oracle_alias_mass(dist);
            double alias_err = 0.0;
            for (std::size_t i = 0; i < mass.size(); ++i) alias_err = std::max(alias_err, std::abs(mass[i] - dist.probs[i]));
            const double analytic = effective_size(dist.probs, schedule.n_draws);
            const auto mc = monte_carlo_effective_size(dist, schedule.n_draws, opt.trials,
                                                       rng::mix64(schedule.master_seed ^ 0x5645524946595ULL));
            double zscore = 0.0;
            bool mc_pass;
            if (mc.standard_error > 0.0) {
                zscore = (analytic - mc.mean) / mc.standard_error;
                mc_pass = std::abs(zscore) <= opt.z_threshold;
            } else {
                mc_pass = std::abs(analytic - mc.mean) < 1e-9;
            }
            const bool alias_pass = alias_err <= opt.alias_tolerance;
            epochs.push_back({{"epoch", e},
                              {"tau", tau},
                              {"alias_max_error", alias_err},
                              {"alias_pass", alias_pass},
                              {"analytic_effective_size", analytic},
                              {"monte_carlo_mean", mc.mean},
                              {"monte_carlo_stderr", mc.standard_error},
                              {"z", zscore},
                              {"monte_carlo_pass", mc_pass}});
            ok = ok && alias_pass && mc_pass;
        }
    }
    report["epochs"] = epochs;
    report["pass"] = ok;
    detail::write_text(paths.verify_json(), report.dump(2) + "\n");
    if (!ok) throw VerificationFailure("verification failed", report);
    return report;
}

}  // namespace proto_curriculum

#endif  // PROTO_CURRICULUM_PIPELINE_HPP
