#pragma once

// Sweep harness: one swept config field, a list of values, a set of
// schemes and a number of seeds. Every (value, scheme, seed) cell builds
// its own scenario, runs the scheme and records the metrics; per-value
// means are appended as aggregate rows. Records are sorted by
// (value, scheme, seed) before emission.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "mrassoc/channel.hpp"
#include "mrassoc/config.hpp"
#include "mrassoc/config_io.hpp"
#include "mrassoc/errors.hpp"
#include "mrassoc/game.hpp"
#include "mrassoc/oracle.hpp"
#include "mrassoc/rates.hpp"
#include "mrassoc/scenario.hpp"

namespace mrassoc {

enum class Scheme { cg_fd, cg_hd, nccg_fd, os };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::cg_fd: return "CG-FD";
    case Scheme::cg_hd: return "CG-HD";
    case Scheme::nccg_fd: return "NCCG-FD";
    case Scheme::os: return "OS";
  }
  return "?";
}

inline Scheme scheme_from_string(const std::string& s) {
  if (s == "CG-FD") return Scheme::cg_fd;
  if (s == "CG-HD") return Scheme::cg_hd;
  if (s == "NCCG-FD") return Scheme::nccg_fd;
  if (s == "OS") return Scheme::os;
  throw ConfigError("unknown scheme '" + s + "' (expected CG-FD, CG-HD, NCCG-FD or OS)");
}

/// The config a scheme actually runs with: CG-FD is full duplex with the
/// utilitarian order, CG-HD half duplex, NCCG-FD full duplex with the
/// selfish order. OS searches the full-duplex rates exhaustively.
inline SystemConfig scheme_config(SystemConfig c, Scheme s) {
  c.duplex_mode = s == Scheme::cg_hd ? DuplexMode::half : DuplexMode::full;
  c.preference_mode = s == Scheme::nccg_fd ? PreferenceMode::selfish : PreferenceMode::utilitarian;
  return c;
}

struct CellOutcome {
  Partition partition;
  double total_throughput = 0.0;
  double avg_system_throughput = 0.0;
  double per_user_throughput = 0.0;
  ClassThroughput classes;
  long long switch_count = 0;
  double runtime_ms = 0.0;
};

inline CellOutcome run_scheme(const Scenario& s, Scheme scheme, const OracleLimits& limits = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  CellOutcome out;
  if (scheme == Scheme::os) {
    out.partition = optimal_partition(s, limits).best;
  } else {
    auto r = run_coalition_formation(s);
    out.partition = std::move(r.partition);
    out.switch_count = r.trace.switch_count;
  }
  out.total_throughput = total_utility(out.partition, s.rates);
  out.avg_system_throughput = mean_coalition_utility(out.partition, s.rates);
  out.per_user_throughput = system_average_throughput(out.partition, s.rates);
  out.classes = per_class_throughput(out.partition, s.rates);
  out.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline CellOutcome run_scheme(const SystemConfig& base, Scheme scheme, const OracleLimits& limits = {}) {
  return run_scheme(build_scenario(scheme_config(base, scheme)), scheme, limits);
}

struct SweepSpec {
  std::string parameter;  // config field, dotted for nested (geometry.train_length_m)
  std::vector<double> values;
  SystemConfig base;
  std::vector<Scheme> schemes{Scheme::cg_fd, Scheme::cg_hd, Scheme::nccg_fd};
  int replications = 10;
  std::uint64_t base_seed = 1;
  std::string output;  // path stem; empty means "do not write"
  bool record_timing = false;
  OracleLimits oracle;
  int threads = 1;
};

// One emitted row. Field order is the CSV column order.
struct SweepRecord {
  std::string parameter;
  double value = 0.0;
  Scheme scheme = Scheme::cg_fd;
  std::uint64_t seed = 0;
  double avg_system_throughput = 0.0;          // bit/s, mean coalition utility
  std::optional<double> bs_user_throughput;    // bit/s
  std::optional<double> mr_user_throughput;    // bit/s
  long long switch_count = 0;
  double runtime_ms = 0.0;
  double per_user_throughput = 0.0;            // bit/s, total / N
  double total_throughput = 0.0;               // bit/s
  double bs_tx_power_w = 0.0;
  double mr_tx_power_w = 0.0;
  double bs_tx_power_dbm = 0.0;
  double mr_tx_power_dbm = 0.0;

  bool operator==(const SweepRecord&) const = default;
};

struct AggregateRecord {
  std::string parameter;
  double value = 0.0;
  Scheme scheme = Scheme::cg_fd;
  int replications = 0;
  double avg_system_throughput = 0.0;
  std::optional<double> bs_user_throughput;  // over seeds where the class is non-empty
  std::optional<double> mr_user_throughput;
  double switch_count = 0.0;
  double runtime_ms = 0.0;
  double per_user_throughput = 0.0;
  double total_throughput = 0.0;

  bool operator==(const AggregateRecord&) const = default;
};

struct SkippedCell {
  double value = 0.0;
  Scheme scheme = Scheme::cg_fd;
  std::uint64_t seed = 0;
  std::string reason;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<AggregateRecord> aggregates;
  std::vector<SkippedCell> skipped;
};

inline std::vector<std::uint64_t> sweep_seeds(const SweepSpec& spec) {
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < spec.replications; ++k) seeds.push_back(spec.base_seed + static_cast<std::uint64_t>(k));
  return seeds;
}

inline SystemConfig point_config(const SweepSpec& spec, double value) {
  return with_override(spec.base, spec.parameter, json(value));
}

// Static checks on the spec itself. OS cells beyond the oracle cap make
// the whole spec invalid.
inline void validate_sweep_spec(const SweepSpec& spec) {
  if (spec.values.empty()) throw ConfigError("sweep: value list is empty");
  if (spec.schemes.empty()) throw ConfigError("sweep: no schemes selected");
  if (spec.replications < 1) throw ConfigError("sweep: replications must be >= 1");
  if (spec.parameter.empty()) throw ConfigError("sweep: parameter name is empty");
  point_config(spec, spec.values.front());  // rejects unknown parameter names
  if (std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::os) == spec.schemes.end()) return;
  std::vector<std::string> offending;
  for (double v : spec.values) {
    SystemConfig c;
    try {
      c = point_config(spec, v);
    } catch (const ConfigError&) {
      continue;  // reported as a skipped cell later
    }
    if (c.num_users > spec.oracle.max_users || c.num_mrs > spec.oracle.max_mrs) {
      std::ostringstream os;
      os << spec.parameter << "=" << v << " (N=" << c.num_users << ", n=" << c.num_mrs << ", "
         << assignment_space_size(c.num_users, c.num_mrs) << " assignments)";
      offending.push_back(os.str());
    }
  }
  if (!offending.empty()) {
    std::string msg = "OS requested beyond the oracle cap (N<=" + std::to_string(spec.oracle.max_users) +
                      ", n<=" + std::to_string(spec.oracle.max_mrs) + "):";
    for (const auto& o : offending) msg += "\n  - " + o;
    throw OracleCapError(msg);
  }
}

namespace detail {

struct Cell {
  double value;
  Scheme scheme;
  std::uint64_t seed;
};

inline bool cell_less(double va, Scheme sa, std::uint64_t ea, double vb, Scheme sb, std::uint64_t eb) {
  return std::tie(va, sa, ea) < std::tie(vb, sb, eb);
}

}  // namespace detail

inline std::vector<AggregateRecord> aggregate(const std::vector<SweepRecord>& records) {
  std::map<std::tuple<double, Scheme>, std::vector<const SweepRecord*>> groups;
  for (const auto& r : records) groups[{r.value, r.scheme}].push_back(&r);
  std::vector<AggregateRecord> out;
  for (const auto& [key, rows] : groups) {
    AggregateRecord a;
    a.parameter = rows.front()->parameter;
    a.value = std::get<0>(key);
    a.scheme = std::get<1>(key);
    a.replications = static_cast<int>(rows.size());
    double bs = 0.0, mr = 0.0, sw = 0.0;
    int bs_n = 0, mr_n = 0;
    for (const auto* r : rows) {
      a.avg_system_throughput += r->avg_system_throughput;
      a.runtime_ms += r->runtime_ms;
      a.per_user_throughput += r->per_user_throughput;
      a.total_throughput += r->total_throughput;
      sw += static_cast<double>(r->switch_count);
      if (r->bs_user_throughput) { bs += *r->bs_user_throughput; ++bs_n; }
      if (r->mr_user_throughput) { mr += *r->mr_user_throughput; ++mr_n; }
    }
    const double k = a.replications;
    a.avg_system_throughput /= k;
    a.runtime_ms /= k;
    a.per_user_throughput /= k;
    a.total_throughput /= k;
    a.switch_count = sw / k;
    if (bs_n > 0) a.bs_user_throughput = bs / bs_n;
    if (mr_n > 0) a.mr_user_throughput = mr / mr_n;
    out.push_back(std::move(a));
  }
  return out;
}

/// Runs every (value, scheme, seed) cell. Invalid derived configs become
/// skipped cells; the rest of the sweep continues.
inline SweepResult run_sweep(const SweepSpec& spec) {
  validate_sweep_spec(spec);
  std::vector<detail::Cell> cells;
  for (double v : spec.values) {
    for (Scheme s : spec.schemes) {
      for (auto seed : sweep_seeds(spec)) cells.push_back({v, s, seed});
    }
  }

  std::vector<std::optional<SweepRecord>> rows(cells.size());
  std::vector<std::optional<SkippedCell>> skips(cells.size());
  auto work = [&](std::size_t idx) {
    const auto& cell = cells[idx];
    try {
      SystemConfig c = point_config(spec, cell.value);
      c.rng_seed = cell.seed;
      require_valid(c);
      const CellOutcome o = run_scheme(c, cell.scheme, spec.oracle);
      SweepRecord r;
      r.parameter = spec.parameter;
      r.value = cell.value;
      r.scheme = cell.scheme;
      r.seed = cell.seed;
      r.avg_system_throughput = o.avg_system_throughput;
      r.bs_user_throughput = o.classes.bs_users;
      r.mr_user_throughput = o.classes.mr_users;
      r.switch_count = o.switch_count;
      r.runtime_ms = spec.record_timing ? o.runtime_ms : 0.0;
      r.per_user_throughput = o.per_user_throughput;
      r.total_throughput = o.total_throughput;
      r.bs_tx_power_dbm = c.bs_tx_power_dbm;
      r.mr_tx_power_dbm = c.mr_tx_power_dbm;
      r.bs_tx_power_w = channel::dbm_to_w(c.bs_tx_power_dbm);
      r.mr_tx_power_w = channel::dbm_to_w(c.mr_tx_power_dbm);
      rows[idx] = std::move(r);
    } catch (const std::exception& e) {
      skips[idx] = SkippedCell{cell.value, cell.scheme, cell.seed, e.what()};
    }
  };

  const int threads = std::max(1, spec.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) work(i);
      });
    }
  }

  SweepResult result;
  for (auto& r : rows) {
    if (r) result.records.push_back(std::move(*r));
  }
  for (auto& s : skips) {
    if (s) result.skipped.push_back(std::move(*s));
  }
  std::sort(result.records.begin(), result.records.end(), [](const auto& a, const auto& b) {
    return detail::cell_less(a.value, a.scheme, a.seed, b.value, b.scheme, b.seed);
  });
  std::sort(result.skipped.begin(), result.skipped.end(), [](const auto& a, const auto& b) {
    return detail::cell_less(a.value, a.scheme, a.seed, b.value, b.scheme, b.seed);
  });
  result.aggregates = aggregate(result.records);
  return result;
}

struct DeviationPoint {
  double value = 0.0;
  double os_mean = 0.0;   // mean over seeds of the optimal avg system throughput
  double alg_mean = 0.0;  // same for CG-FD
  double deviation = 0.0; // (os - alg) / os
  std::vector<double> os_per_seed;
  std::vector<double> alg_per_seed;
};

struct DeviationReport {
  std::string parameter;
  std::vector<DeviationPoint> points;
  double average_deviation = 0.0;
};

/// CG-FD against the exhaustive optimum on every sweep point. Refuses up
/// front, listing the offending points, if any point exceeds the cap.
inline DeviationReport compare_with_oracle(SweepSpec spec) {
  spec.schemes = {Scheme::cg_fd, Scheme::os};
  validate_sweep_spec(spec);
  DeviationReport rep;
  rep.parameter = spec.parameter;
  std::vector<double> os, alg;
  for (double v : spec.values) {
    DeviationPoint pt;
    pt.value = v;
    for (auto seed : sweep_seeds(spec)) {
      SystemConfig c = point_config(spec, v);
      c.rng_seed = seed;
      const Scenario s = build_scenario(scheme_config(c, Scheme::cg_fd));
      pt.os_per_seed.push_back(run_scheme(s, Scheme::os, spec.oracle).avg_system_throughput);
      pt.alg_per_seed.push_back(run_scheme(s, Scheme::cg_fd, spec.oracle).avg_system_throughput);
    }
    const double k = static_cast<double>(pt.os_per_seed.size());
    for (double x : pt.os_per_seed) pt.os_mean += x / k;
    for (double x : pt.alg_per_seed) pt.alg_mean += x / k;
    pt.deviation = (pt.os_mean - pt.alg_mean) / pt.os_mean;
    os.push_back(pt.os_mean);
    alg.push_back(pt.alg_mean);
    rep.points.push_back(std::move(pt));
  }
  rep.average_deviation = average_deviation(os, alg);
  return rep;
}

inline nlohmann::json to_json(const DeviationReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"value", p.value},
                   {"os_mean", p.os_mean},
                   {"cg_fd_mean", p.alg_mean},
                   {"deviation", p.deviation},
                   {"os_per_seed", p.os_per_seed},
                   {"cg_fd_per_seed", p.alg_per_seed}});
  }
  return {{"parameter", r.parameter}, {"points", pts}, {"average_deviation", r.average_deviation}};
}

// ---------------------------------------------------------------------------
// Sweep spec files

inline SweepSpec sweep_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("sweep spec must be a table/object");
  SweepSpec spec;
  for (const auto& [key, val] : j.items()) {
    if (key == "parameter") spec.parameter = detail::read_string(val, key);
    else if (key == "values") {
      if (!val.is_array()) throw ConfigError("'values' must be an array of numbers");
      for (const auto& v : val) spec.values.push_back(detail::read_double(v, "values[]"));
    } else if (key == "schemes") {
      if (!val.is_array()) throw ConfigError("'schemes' must be an array of names");
      spec.schemes.clear();
      for (const auto& v : val) spec.schemes.push_back(scheme_from_string(detail::read_string(v, "schemes[]")));
    } else if (key == "replications") spec.replications = detail::read_int(val, key);
    else if (key == "base_seed") spec.base_seed = detail::read_seed(val, key);
    else if (key == "output") spec.output = detail::read_string(val, key);
    else if (key == "record_timing") {
      if (!val.is_boolean()) throw ConfigError("'record_timing' must be a boolean");
      spec.record_timing = val.get<bool>();
    } else if (key == "threads") spec.threads = detail::read_int(val, key);
    else if (key == "oracle") {
      if (!val.is_object()) throw ConfigError("'oracle' must be a table/object");
      for (const auto& [ok, ov] : val.items()) {
        if (ok == "max_users") spec.oracle.max_users = detail::read_int(ov, "oracle.max_users");
        else if (ok == "max_mrs") spec.oracle.max_mrs = detail::read_int(ov, "oracle.max_mrs");
        else throw ConfigError("unknown sweep key 'oracle." + ok + "'");
      }
    } else if (key == "config") spec.base = config_from_json(val);
    else throw ConfigError("unknown sweep key '" + key + "'");
  }
  return spec;
}

inline SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  return sweep_spec_from_json(load_document(path));
}

// ---------------------------------------------------------------------------
// Emission

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline const char* sweep_csv_header() {
  return "parameter,value,scheme,seed,avg_system_throughput,bs_user_throughput,"
         "mr_user_throughput,switch_count,runtime_ms,per_user_throughput,total_throughput,"
         "bs_tx_power_w,mr_tx_power_w,bs_tx_power_dbm,mr_tx_power_dbm";
}

inline const char* aggregate_csv_header() {
  return "parameter,value,scheme,replications,avg_system_throughput,bs_user_throughput,"
         "mr_user_throughput,switch_count,runtime_ms,per_user_throughput,total_throughput";
}

inline std::string optional_field(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string();
}

inline std::string to_csv(const std::vector<SweepRecord>& records) {
  std::string out = sweep_csv_header();
  out += "\r\n";
  for (const auto& r : records) {
    out += csv_field(r.parameter) + ',' + format_number(r.value) + ',' + to_string(r.scheme) + ',' +
           std::to_string(r.seed) + ',' + format_number(r.avg_system_throughput) + ',' +
           optional_field(r.bs_user_throughput) + ',' + optional_field(r.mr_user_throughput) + ',' +
           std::to_string(r.switch_count) + ',' + format_number(r.runtime_ms) + ',' +
           format_number(r.per_user_throughput) + ',' + format_number(r.total_throughput) + ',' +
           format_number(r.bs_tx_power_w) + ',' + format_number(r.mr_tx_power_w) + ',' +
           format_number(r.bs_tx_power_dbm) + ',' + format_number(r.mr_tx_power_dbm) + "\r\n";
  }
  return out;
}

inline std::string to_csv(const std::vector<AggregateRecord>& records) {
  std::string out = aggregate_csv_header();
  out += "\r\n";
  for (const auto& r : records) {
    out += csv_field(r.parameter) + ',' + format_number(r.value) + ',' + to_string(r.scheme) + ',' +
           std::to_string(r.replications) + ',' + format_number(r.avg_system_throughput) + ',' +
           optional_field(r.bs_user_throughput) + ',' + optional_field(r.mr_user_throughput) + ',' +
           format_number(r.switch_count) + ',' + format_number(r.runtime_ms) + ',' +
           format_number(r.per_user_throughput) + ',' + format_number(r.total_throughput) + "\r\n";
  }
  return out;
}

inline json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

inline json to_json(const SweepRecord& r) {
  json j = json::object();
  j["parameter"] = r.parameter;
  j["value"] = r.value;
  j["scheme"] = to_string(r.scheme);
  j["seed"] = r.seed;
  j["avg_system_throughput"] = r.avg_system_throughput;
  j["bs_user_throughput"] = optional_json(r.bs_user_throughput);
  j["mr_user_throughput"] = optional_json(r.mr_user_throughput);
  j["switch_count"] = r.switch_count;
  j["runtime_ms"] = r.runtime_ms;
  j["per_user_throughput"] = r.per_user_throughput;
  j["total_throughput"] = r.total_throughput;
  j["bs_tx_power_w"] = r.bs_tx_power_w;
  j["mr_tx_power_w"] = r.mr_tx_power_w;
  j["bs_tx_power_dbm"] = r.bs_tx_power_dbm;
  j["mr_tx_power_dbm"] = r.mr_tx_power_dbm;
  return j;
}

inline json to_json(const AggregateRecord& r) {
  json j = json::object();
  j["parameter"] = r.parameter;
  j["value"] = r.value;
  j["scheme"] = to_string(r.scheme);
  j["replications"] = r.replications;
  j["avg_system_throughput"] = r.avg_system_throughput;
  j["bs_user_throughput"] = optional_json(r.bs_user_throughput);
  j["mr_user_throughput"] = optional_json(r.mr_user_throughput);
  j["switch_count"] = r.switch_count;
  j["runtime_ms"] = r.runtime_ms;
  j["per_user_throughput"] = r.per_user_throughput;
  j["total_throughput"] = r.total_throughput;
  return j;
}

template <typename Record>
std::string to_json_text(const std::vector<Record>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  return arr.dump(2) + "\n";
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// Writes <stem>.csv, <stem>.json, <stem>_aggregate.{csv,json} and, when
/// cells were skipped, <stem>_skipped.csv. Returns the paths written.
inline std::vector<std::filesystem::path> emit(const SweepResult& result,
                                               const std::filesystem::path& stem) {
  if (result.records.empty()) throw IoError("emit: no records to write");
  if (stem.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(stem.parent_path(), ec);
  }
  const auto with_suffix = [&](const std::string& suffix) {
    return std::filesystem::path(stem.string() + suffix);
  };
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::filesystem::path& p, const std::string& text) {
    write_text_file(p, text);
    written.push_back(p);
  };
  put(with_suffix(".csv"), to_csv(result.records));
  put(with_suffix(".json"), to_json_text(result.records));
  put(with_suffix("_aggregate.csv"), to_csv(result.aggregates));
  put(with_suffix("_aggregate.json"), to_json_text(result.aggregates));
  if (!result.skipped.empty()) {
    std::string text = "value,scheme,seed,reason\r\n";
    for (const auto& s : result.skipped) {
      text += format_number(s.value) + ',' + to_string(s.scheme) + ',' + std::to_string(s.seed) +
              ',' + csv_field(s.reason) + "\r\n";
    }
    put(with_suffix("_skipped.csv"), text);
  }
  return written;
}

// ---------------------------------------------------------------------------
// CSV read-back

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\r' || ch == '\n') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += ch;
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<SweepRecord> sweep_records_from_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw IoError("CSV is empty");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != sweep_csv_header()) throw IoError("unexpected CSV header: " + header);
  auto num = [](const std::string& s) {
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw IoError("bad number in CSV: '" + s + "'");
    return x;
  };
  auto opt = [&](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return num(s);
  };
  std::vector<SweepRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 15) throw IoError("CSV row " + std::to_string(i) + " has " + std::to_string(f.size()) + " fields");
    SweepRecord r;
    r.parameter = f[0];
    r.value = num(f[1]);
    r.scheme = scheme_from_string(f[2]);
    r.seed = std::stoull(f[3]);
    r.avg_system_throughput = num(f[4]);
    r.bs_user_throughput = opt(f[5]);
    r.mr_user_throughput = opt(f[6]);
    r.switch_count = std::stoll(f[7]);
    r.runtime_ms = num(f[8]);
    r.per_user_throughput = num(f[9]);
    r.total_throughput = num(f[10]);
    r.bs_tx_power_w = num(f[11]);
    r.mr_tx_power_w = num(f[12]);
    r.bs_tx_power_dbm = num(f[13]);
    r.mr_tx_power_dbm = num(f[14]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mrassoc
