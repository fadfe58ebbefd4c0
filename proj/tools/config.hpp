#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace forwardcf::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "a:b:step" (inclusive of b up to rounding), "v1,v2,..." or a single value.
std::vector<double> parse_grid(const std::string& text);

/// A grid given in JSON as a number, an array of numbers or a grid string.
std::vector<double> grid_from_json(const nlohmann::json& value, const std::string& key);

/// defaults <- file <- overrides. Keys absent from `defaults` are rejected so
/// typos in a config file fail loudly.
nlohmann::json merge_config(const nlohmann::json& defaults, const std::optional<std::string>& path,
                            const nlohmann::json& overrides);

/// Creates `dir` if needed; throws ConfigError when it cannot be written to.
void prepare_output_dir(const std::filesystem::path& dir);

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

/// Compact, filesystem-safe rendering of a parameter value ("0.5", "5").
std::string tag(double v);

}  // namespace forwardcf::cli
