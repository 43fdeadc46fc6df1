#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace egolayers {

inline constexpr const char* kToolVersion = "0.1.0";

/// Hex SHA-256 of a file's contents; throws DataError when unreadable.
std::string sha256_file(const std::string& path);

// Reproducibility record for one run: effective config, input content
// hashes, outputs written. Saved as <output_dir>/manifest.json.
void write_manifest(const std::string& output_dir, const std::string& subcommand,
                    const nlohmann::json& config_echo, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs);

}  // namespace egolayers
