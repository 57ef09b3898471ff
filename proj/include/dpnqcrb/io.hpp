#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

namespace dpnqcrb {

/// Reads and parses a JSON file. Throws std::invalid_argument carrying
/// "path:line:column: message" on syntax errors and std::system_error when
/// the file cannot be opened.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace dpnqcrb
