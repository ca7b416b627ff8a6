#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>

namespace levythin::cli {

std::uint64_t fnv1a(const std::string& text);

/// Writes <artifact>.manifest.json. config is hashed in its canonical dump.
void write_manifest(const std::string& artifact, const std::string& command_line,
                    std::uint64_t seed, const nlohmann::json& config,
                    const nlohmann::json& extra = nlohmann::json::object());

}  // namespace levythin::cli
