#include "run_manifest.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

#include "mdep/errors.hpp"
#include "mdep/serialize.hpp"
#include "mdep_internal/json_emit.hpp"

#ifndef MDEP_VERSION
#define MDEP_VERSION "unknown"
#endif

namespace mdtool {

std::string sha256_file(const std::filesystem::path& path) {
    const std::string bytes = mdep::read_text_file(path);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw mdep::InternalError("SHA-256 digest failed for " + path.string());
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

RunManifest::RunManifest(std::string subcommand)
    : subcommand_(std::move(subcommand)), start_(std::chrono::steady_clock::now()) {}

void RunManifest::add_input(const std::filesystem::path& path) {
    inputs_.emplace_back(path.string(), sha256_file(path));
}

nlohmann::json RunManifest::to_json() const {
    using nlohmann::json;
    json digests = json::object();
    for (const auto& [p, d] : inputs_) digests[p] = "sha256:" + d;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return json{{"subcommand", subcommand_},
                {"configuration", config_},
                {"input_digests", digests},
                {"outputs", outputs_},
                {"seed", seed_ ? json(*seed_) : json(nullptr)},
                {"tool_version", MDEP_VERSION},
                {"wall_clock_seconds", elapsed}};
}

void RunManifest::write(const std::filesystem::path& path) const {
    mdep::write_text_file(path, mdep::detail::dump_json(to_json()));
}

}  // namespace mdtool
