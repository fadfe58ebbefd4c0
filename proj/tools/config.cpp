#include "config.hpp"

#include "forwardcf/rational.hpp"

#include <boost/algorithm/string.hpp>

#include <cmath>
#include <fstream>

namespace forwardcf::cli {

namespace {

double parse_number(const std::string& text) {
  const std::string t = boost::algorithm::trim_copy(text);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
  if (used != t.size() || !std::isfinite(v)) throw ConfigError("not a number: '" + text + "'");
  return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  if (boost::algorithm::trim_copy(text).empty()) throw ConfigError("empty grid");
  std::vector<std::string> parts;
  if (text.find(':') != std::string::npos) {
    boost::algorithm::split(parts, text, boost::is_any_of(":"));
    if (parts.size() != 3) throw ConfigError("range grid must look like start:stop:step, got '" + text + "'");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0)) throw ConfigError("range grid step must be positive");
    if (stop < start) throw ConfigError("range grid stop is below start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw ConfigError("range grid has too many points");
    std::vector<double> out;
    out.reserve(count);
    // Snap to 1e-9 so "0:1:0.1" yields 0.3 rather than 0.30000000000000004.
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
    return out;
  }
  boost::algorithm::split(parts, text, boost::is_any_of(","));
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(parse_number(p));
  return out;
}

std::vector<double> grid_from_json(const nlohmann::json& value, const std::string& key) {
  if (value.is_number()) return {value.get<double>()};
  if (value.is_string()) return parse_grid(value.get<std::string>());
  if (value.is_array() && !value.empty()) {
    std::vector<double> out;
    for (const auto& v : value) {
      if (!v.is_number()) throw ConfigError("'" + key + "' must contain only numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  throw ConfigError("'" + key + "' must be a number, a non-empty array or a grid string");
}

nlohmann::json merge_config(const nlohmann::json& defaults, const std::optional<std::string>& path,
                            const nlohmann::json& overrides) {
  nlohmann::json cfg = defaults;
  auto apply = [&](const nlohmann::json& layer, const std::string& origin) {
    for (auto it = layer.begin(); it != layer.end(); ++it) {
      if (!defaults.contains(it.key())) {
        throw ConfigError(origin + ": unknown key '" + it.key() + "'");
      }
      cfg[it.key()] = it.value();
    }
  };
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot read config file " + *path);
    nlohmann::json file;
    try {
      file = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config file " + *path + ": " + e.what());
    }
    if (!file.is_object()) throw ConfigError("config file " + *path + " must hold a JSON object");
    apply(file, *path);
  }
  apply(overrides, "command line");
  return cfg;
}

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("cannot create output directory " + dir.string());
  }
  const auto probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw ConfigError("output directory " + dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw ConfigError("error while writing " + path.string());
}

std::string tag(double v) { return format_decimal(v); }

}  // namespace forwardcf::cli
