#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace ssinfer {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

/// Versioned JSON experiment configuration. A seed must always be present:
/// there are no entropy defaults anywhere in the toolkit.
struct ExperimentConfig {
    nlohmann::json raw;
    std::string experiment;
    std::uint64_t seed = 0;
    std::string out_dir = "runs";
    int threads = 1;

    /// Accepts either a plain config or a manifest produced by a previous
    /// run (the embedded config and seed are taken in that case).
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_file(const std::string& path);

    bool has(const std::string& key) const { return raw.contains(key); }
    long integer(const std::string& key, long fallback) const;
    double number(const std::string& key, double fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    /// Positive-integer budget; throws when present but invalid.
    long budget(const std::string& key, long fallback) const;
};

}  // namespace ssinfer
