#pragma once

// SystemConfig <-> JSON/TOML. TOML is converted to JSON, then read by the
// same code path. Unknown keys throw.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>
#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "mrassoc/config.hpp"
#include "mrassoc/errors.hpp"

namespace mrassoc {

using json = nlohmann::json;

namespace detail {

inline double read_double(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("field '" + key + "' must be a number");
  return j.get<double>();
}

inline long long read_integer(const json& j, const std::string& key) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double d = j.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) {
      return static_cast<long long>(d);
    }
  }
  throw ConfigError("field '" + key + "' must be an integer");
}

inline int read_int(const json& j, const std::string& key) {
  const long long v = read_integer(j, key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError("field '" + key + "' is out of range");
  }
  return static_cast<int>(v);
}

inline std::uint64_t read_seed(const json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const long long s = read_integer(j, key);
  if (s < 0) throw ConfigError(key + " must be non-negative");
  return static_cast<std::uint64_t>(s);
}

inline std::string read_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("field '" + key + "' must be a string");
  return j.get<std::string>();
}

inline json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_to_json(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(toml_to_json(v));
    return out;
  }
  if (const auto* s = node.as_string()) return s->get();
  if (const auto* i = node.as_integer()) return i->get();
  if (const auto* f = node.as_floating_point()) return f->get();
  if (const auto* b = node.as_boolean()) return b->get();
  throw ConfigError("unsupported TOML value (dates and times are not accepted)");
}

}  // namespace detail

inline Geometry geometry_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("'geometry' must be a table/object");
  Geometry g;
  for (const auto& [key, val] : j.items()) {
    const std::string path = "geometry." + key;
    if (key == "track_length_m") g.track_length_m = detail::read_double(val, path);
    else if (key == "bs_offset_m") g.bs_offset_m = detail::read_double(val, path);
    else if (key == "train_length_m") g.train_length_m = detail::read_double(val, path);
    else if (key == "train_width_m") g.train_width_m = detail::read_double(val, path);
    else if (key == "outdoor_depth_m") g.outdoor_depth_m = detail::read_double(val, path);
    else if (key == "outdoor_gap_m") g.outdoor_gap_m = detail::read_double(val, path);
    else if (key == "onboard_fraction") g.onboard_fraction = detail::read_double(val, path);
    else throw ConfigError("unknown configuration key '" + path + "'");
  }
  return g;
}

/// Missing fields keep their defaults; unknown keys throw ConfigError.
/// No semantic validation happens here (see validate_config).
inline SystemConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a table/object");
  SystemConfig c;
  using namespace detail;
  for (const auto& [key, val] : j.items()) {
    if (key == "total_bandwidth_hz") c.total_bandwidth_hz = read_double(val, key);
    else if (key == "bs_tx_power_dbm") c.bs_tx_power_dbm = read_double(val, key);
    else if (key == "mr_tx_power_dbm") c.mr_tx_power_dbm = read_double(val, key);
    else if (key == "noise_psd_dbm_per_mhz") c.noise_psd_dbm_per_mhz = read_double(val, key);
    else if (key == "path_loss_exponent") c.path_loss_exponent = read_double(val, key);
    else if (key == "carrier_wavelength_m") c.carrier_wavelength_m = read_double(val, key);
    else if (key == "half_power_beamwidth_deg") c.half_power_beamwidth_deg = read_double(val, key);
    else if (key == "si_cancellation") c.si_cancellation = read_double(val, key);
    else if (key == "num_mrs") c.num_mrs = read_int(val, key);
    else if (key == "num_users") c.num_users = read_int(val, key);
    else if (key == "bs_bandwidth_fraction") c.bs_bandwidth_fraction = read_double(val, key);
    else if (key == "bs_capacity") {
      if (val.is_null()) c.bs_capacity.reset();
      else c.bs_capacity = read_int(val, key);
    } else if (key == "mr_capacity") {
      if (val.is_null()) c.mr_capacity.reset();
      else c.mr_capacity = read_int(val, key);
    } else if (key == "duplex_mode") {
      const auto s = read_string(val, key);
      if (s == "full") c.duplex_mode = DuplexMode::full;
      else if (s == "half") c.duplex_mode = DuplexMode::half;
      else throw ConfigError("duplex_mode must be \"full\" or \"half\", got \"" + s + "\"");
    } else if (key == "preference_mode") {
      const auto s = read_string(val, key);
      if (s == "utilitarian") c.preference_mode = PreferenceMode::utilitarian;
      else if (s == "selfish") c.preference_mode = PreferenceMode::selfish;
      else throw ConfigError("preference_mode must be \"utilitarian\" or \"selfish\"");
    } else if (key == "fading") {
      const auto s = read_string(val, key);
      if (s == "deterministic") c.fading = FadingModel::deterministic;
      else if (s == "nakagami") c.fading = FadingModel::nakagami;
      else throw ConfigError("fading must be \"deterministic\" or \"nakagami\"");
    } else if (key == "nakagami_m") c.nakagami_m = read_double(val, key);
    else if (key == "penetration_loss_db") c.penetration_loss_db = read_double(val, key);
    else if (key == "min_distance_m") c.min_distance_m = read_double(val, key);
    else if (key == "rng_seed") c.rng_seed = read_seed(val, key);
    else if (key == "non_switch_budget_multiplier") {
      c.non_switch_budget_multiplier = read_int(val, key);
    } else if (key == "visit_cap_multiplier") {
      c.visit_cap_multiplier = read_integer(val, key);
    } else if (key == "geometry") c.geometry = geometry_from_json(val);
    else throw ConfigError("unknown configuration key '" + key + "'");
  }
  return c;
}

inline json to_json(const Geometry& g) {
  return json{{"track_length_m", g.track_length_m},   {"bs_offset_m", g.bs_offset_m},
              {"train_length_m", g.train_length_m},   {"train_width_m", g.train_width_m},
              {"outdoor_depth_m", g.outdoor_depth_m}, {"outdoor_gap_m", g.outdoor_gap_m},
              {"onboard_fraction", g.onboard_fraction}};
}

inline json to_json(const SystemConfig& c) {
  json j{{"total_bandwidth_hz", c.total_bandwidth_hz},
         {"bs_tx_power_dbm", c.bs_tx_power_dbm},
         {"mr_tx_power_dbm", c.mr_tx_power_dbm},
         {"noise_psd_dbm_per_mhz", c.noise_psd_dbm_per_mhz},
         {"path_loss_exponent", c.path_loss_exponent},
         {"carrier_wavelength_m", c.carrier_wavelength_m},
         {"half_power_beamwidth_deg", c.half_power_beamwidth_deg},
         {"si_cancellation", c.si_cancellation},
         {"num_mrs", c.num_mrs},
         {"num_users", c.num_users},
         {"bs_bandwidth_fraction", c.bs_bandwidth_fraction},
         {"duplex_mode", to_string(c.duplex_mode)},
         {"preference_mode", to_string(c.preference_mode)},
         {"fading", to_string(c.fading)},
         {"nakagami_m", c.nakagami_m},
         {"penetration_loss_db", c.penetration_loss_db},
         {"min_distance_m", c.min_distance_m},
         {"rng_seed", c.rng_seed},
         {"non_switch_budget_multiplier", c.non_switch_budget_multiplier},
         {"visit_cap_multiplier", c.visit_cap_multiplier},
         {"geometry", to_json(c.geometry)}};
  j["bs_capacity"] = c.bs_capacity ? json(*c.bs_capacity) : json(nullptr);
  j["mr_capacity"] = c.mr_capacity ? json(*c.mr_capacity) : json(nullptr);
  return j;
}

enum class DocumentFormat { json, toml };

// Parses a JSON or TOML document into a JSON value. With no explicit format
// the text is tried as JSON first when it starts with '{' or '['.
inline json parse_document(std::string_view text, std::optional<DocumentFormat> format = {}) {
  DocumentFormat f;
  if (format) {
    f = *format;
  } else {
    const auto pos = text.find_first_not_of(" \t\r\n");
    f = (pos != std::string_view::npos && (text[pos] == '{' || text[pos] == '['))
            ? DocumentFormat::json
            : DocumentFormat::toml;
  }
  if (f == DocumentFormat::json) {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
  }
  try {
    toml::table t = toml::parse(text);
    return detail::toml_to_json(t);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML parse error: " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(os.str());
  }
}

inline std::optional<DocumentFormat> format_from_extension(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".json") return DocumentFormat::json;
  if (ext == ".toml") return DocumentFormat::toml;
  return std::nullopt;
}

inline json load_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), format_from_extension(path));
}

inline SystemConfig load_config(const std::filesystem::path& path) {
  return config_from_json(load_document(path));
}

/// Interprets an override string: JSON scalars (numbers, true/false, null,
/// quoted strings) are taken as such, anything else as a bare string.
inline json parse_override_value(const std::string& text) {
  try {
    json v = json::parse(text);
    if (!v.is_structured()) return v;
  } catch (const json::parse_error&) {
  }
  return json(text);
}

/// Sets `dotted_key` (e.g. "geometry.train_length_m") inside a config object.
inline void set_dotted(json& root, std::string_view dotted_key, json value) {
  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted_key.find('.', start);
    const std::string part(dotted_key.substr(start, dot - start));
    if (part.empty()) throw ConfigError("malformed key '" + std::string(dotted_key) + "'");
    if (dot == std::string_view::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    if (!node->contains(part)) (*node)[part] = json::object();
    node = &(*node)[part];
    if (!node->is_object()) {
      throw ConfigError("key '" + std::string(dotted_key) + "' descends into a non-table value");
    }
    start = dot + 1;
  }
}

inline SystemConfig with_override(const SystemConfig& base, std::string_view dotted_key,
                                  const json& value) {
  json j = to_json(base);
  set_dotted(j, dotted_key, value);
  return config_from_json(j);
}

}  // namespace mrassoc
