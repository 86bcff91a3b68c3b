#pragma once

// Provenance record written next to every data file the tool emits.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mdtool {

/// Lowercase hex SHA-256 of the file's bytes.
std::string sha256_file(const std::filesystem::path& path);

class RunManifest {
public:
    explicit RunManifest(std::string subcommand);

    void set(const std::string& key, nlohmann::json value) { config_[key] = std::move(value); }
    void add_input(const std::filesystem::path& path);
    void add_output(const std::string& path) { outputs_.push_back(path); }
    void set_seed(std::uint64_t seed) { seed_ = seed; }

    nlohmann::json to_json() const;
    /// Writes the manifest; the wall clock is read at this point.
    void write(const std::filesystem::path& path) const;

private:
    std::string subcommand_;
    nlohmann::json config_ = nlohmann::json::object();
    std::vector<std::pair<std::string, std::string>> inputs_;
    std::vector<std::string> outputs_;
    std::optional<std::uint64_t> seed_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace mdtool
