#include "ssinfer/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace ssinfer {

namespace {

const std::set<std::string> kKnownExperiments = {
    "ricker-scaling", "exp-sl-demo",        "vole-sim-compare",
    "kilpisjarvi-fit", "lyapunov-posterior", "lgssm-oracle",
};

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    nlohmann::json doc = j;
    if (doc.contains("config") && doc["config"].is_object()) {
        // Manifest form: rerun from the embedded config and recorded seed.
        nlohmann::json inner = doc["config"];
        if (!inner.contains("seed") && doc.contains("seed")) inner["seed"] = doc["seed"];
        doc = inner;
    }

    ExperimentConfig cfg;
    cfg.raw = doc;
    if (doc.contains("schema_version") &&
        doc["schema_version"].get<int>() != kConfigSchemaVersion)
        throw std::invalid_argument("config: unsupported schema_version");
    if (!doc.contains("experiment") || !doc["experiment"].is_string())
        throw std::invalid_argument("config: missing experiment tag");
    cfg.experiment = doc["experiment"].get<std::string>();
    if (kKnownExperiments.count(cfg.experiment) == 0)
        throw std::invalid_argument("config: unknown experiment '" + cfg.experiment + "'");
    if (!doc.contains("seed"))
        throw std::invalid_argument("config: seed is required (no entropy defaults)");
    cfg.seed = doc["seed"].get<std::uint64_t>();
    cfg.out_dir = cfg.text("out_dir", cfg.out_dir);
    cfg.threads = static_cast<int>(cfg.integer("threads", 1));
    if (cfg.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

long ExperimentConfig::integer(const std::string& key, long fallback) const {
    if (!raw.contains(key)) return fallback;
    return raw.at(key).get<long>();
}

double ExperimentConfig::number(const std::string& key, double fallback) const {
    if (!raw.contains(key)) return fallback;
    return raw.at(key).get<double>();
}

std::string ExperimentConfig::text(const std::string& key, const std::string& fallback) const {
    if (!raw.contains(key)) return fallback;
    return raw.at(key).get<std::string>();
}

bool ExperimentConfig::flag(const std::string& key, bool fallback) const {
    if (!raw.contains(key)) return fallback;
    return raw.at(key).get<bool>();
}

long ExperimentConfig::budget(const std::string& key, long fallback) const {
    const long v = integer(key, fallback);
    if (v < 1) throw std::invalid_argument("config: budget '" + key + "' must be positive");
    return v;
}

}  // namespace ssinfer
