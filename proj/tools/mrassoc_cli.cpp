// mrassoc: run, sweep and check the relay association game from the shell.
//
//   mrassoc run      [--config FILE] [--scheme CG-FD] [--config.KEY VALUE ...]
//   mrassoc sweep    SPEC [--output STEM] [--threads K] [--config.KEY VALUE ...]
//   mrassoc oracle-compare SPEC [--output FILE] [--config.KEY VALUE ...]
//   mrassoc validate [--config FILE] [--config.KEY VALUE ...]
//
// Exit codes: 0 ok, 1 config error, 2 runtime error, 3 oracle cap refusal.

#include <algorithm>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mrassoc/mrassoc.hpp"

namespace {

using mrassoc::json;

enum Exit { kOk = 0, kConfig = 1, kRuntime = 2, kOracleCap = 3 };

struct Override {
  std::string key;
  std::string value;
};

// Pulls "--config.key value" and "--config.key=value" out of argv before
// CLI11 sees it; everything else is passed through untouched.
std::vector<std::string> split_overrides(int argc, char** argv, std::vector<Override>& out) {
  const std::string prefix = "--config.";
  std::vector<std::string> rest;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a.rfind(prefix, 0) != 0) {
      rest.push_back(std::move(a));
      continue;
    }
    std::string key = a.substr(prefix.size());
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      out.push_back({key.substr(0, eq), key.substr(eq + 1)});
    } else {
      if (i + 1 >= argc) throw mrassoc::ConfigError("missing value for " + a);
      out.push_back({key, argv[++i]});
    }
  }
  return rest;
}

json apply_overrides(json j, const std::vector<Override>& ovs) {
  for (const auto& o : ovs) mrassoc::set_dotted(j, o.key, mrassoc::parse_override_value(o.value));
  return j;
}

mrassoc::SystemConfig resolve_config(const std::string& path, const std::vector<Override>& ovs) {
  json j = path.empty() ? mrassoc::to_json(mrassoc::SystemConfig{}) : mrassoc::load_document(path);
  return mrassoc::config_from_json(apply_overrides(std::move(j), ovs));
}

json partition_json(const mrassoc::Partition& p) {
  json out = json::array();
  for (int i = 0; i < p.num_nodes(); ++i) {
    const auto m = p.members(i);
    out.push_back({{"node", p.is_bs(i) ? std::string("BS") : "MR" + std::to_string(i)},
                   {"index", i},
                   {"members", std::vector<int>(m.begin(), m.end())}});
  }
  return out;
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

int cmd_run(const std::string& config_path, const std::string& scheme_name,
            const std::vector<Override>& ovs) {
  const auto scheme = mrassoc::scheme_from_string(scheme_name);
  const auto cfg = mrassoc::scheme_config(resolve_config(config_path, ovs), scheme);
  const auto s = mrassoc::build_scenario(cfg);

  json doc;
  doc["scheme"] = mrassoc::to_string(scheme);
  doc["config"] = mrassoc::to_json(cfg);
  mrassoc::Partition p;
  if (scheme == mrassoc::Scheme::os) {
    const auto r = mrassoc::optimal_partition(s, {});
    p = r.best;
    doc["oracle"] = {{"enumerated", r.enumerated}, {"best_objective", r.best_objective}};
  } else {
    auto r = mrassoc::run_coalition_formation(s);
    p = std::move(r.partition);
    doc["trace"] = mrassoc::to_json(r.trace);
  }
  const auto cls = mrassoc::per_class_throughput(p, s.rates);
  doc["partition"] = partition_json(p);
  doc["metrics"] = {{"avg_system_throughput", mrassoc::mean_coalition_utility(p, s.rates)},
                    {"per_user_throughput", mrassoc::system_average_throughput(p, s.rates)},
                    {"total_throughput", mrassoc::total_utility(p, s.rates)},
                    {"bs_user_throughput", optional_json(cls.bs_users)},
                    {"mr_user_throughput", optional_json(cls.mr_users)},
                    {"nash_stable", mrassoc::is_nash_stable(p, cfg.preference_mode, s.rates,
                                                            s.capacities())}};
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

mrassoc::SweepSpec resolve_spec(const std::string& path, const std::vector<Override>& ovs) {
  json j = mrassoc::load_document(path);
  if (!ovs.empty()) {
    if (!j.is_object()) throw mrassoc::ConfigError("sweep spec must be a table/object");
    json base = j.contains("config") ? j["config"] : json::object();
    j["config"] = apply_overrides(std::move(base), ovs);
  }
  return mrassoc::sweep_spec_from_json(j);
}

int cmd_sweep(const std::string& spec_path, const std::string& output, int threads,
              const std::vector<Override>& ovs) {
  auto spec = resolve_spec(spec_path, ovs);
  if (!output.empty()) spec.output = output;
  if (threads > 0) spec.threads = threads;
  if (spec.output.empty()) throw mrassoc::ConfigError("no output stem (set 'output' or --output)");
  const auto result = mrassoc::run_sweep(spec);
  for (const auto& sk : result.skipped) {
    std::cerr << "skipped " << mrassoc::format_number(sk.value) << ' ' << mrassoc::to_string(sk.scheme)
              << " seed " << sk.seed << ": " << sk.reason << '\n';
  }
  for (const auto& path : mrassoc::emit(result, spec.output)) std::cout << path.string() << '\n';
  return kOk;
}

int cmd_oracle_compare(const std::string& spec_path, const std::string& output,
                       const std::vector<Override>& ovs) {
  const auto spec = resolve_spec(spec_path, ovs);
  const auto report = mrassoc::compare_with_oracle(spec);
  const std::string text = mrassoc::to_json(report).dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    mrassoc::write_text_file(output, text);
    std::cout << output << '\n';
  }
  return kOk;
}

int cmd_validate(const std::string& config_path, const std::vector<Override>& ovs) {
  const auto cfg = resolve_config(config_path, ovs);
  const auto problems = mrassoc::validate_config(cfg);
  if (problems.empty()) {
    std::cout << "ok\n";
    return kOk;
  }
  for (const auto& p : problems) std::cerr << p << '\n';
  return kConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    std::vector<Override> overrides;
    auto args = split_overrides(argc, argv, overrides);

    CLI::App app{"Coalition-formation user association for train relays"};
    app.require_subcommand(1);

    std::string config_path, scheme = "CG-FD";
    auto* run = app.add_subcommand("run", "run one scenario and print partition, metrics and trace");
    run->add_option("--config", config_path, "config file (TOML or JSON)")->check(CLI::ExistingFile);
    run->add_option("--scheme", scheme, "CG-FD, CG-HD, NCCG-FD or OS");

    std::string spec_path, output;
    int threads = 0;
    auto* sweep = app.add_subcommand("sweep", "run a sweep spec and write CSV/JSON");
    sweep->add_option("spec", spec_path, "sweep spec file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--output", output, "output path stem");
    sweep->add_option("--threads", threads, "worker threads");

    auto* cmp = app.add_subcommand("oracle-compare", "compare CG-FD with the exhaustive optimum");
    cmp->add_option("spec", spec_path, "sweep spec file")->required()->check(CLI::ExistingFile);
    cmp->add_option("--output", output, "write the report here instead of stdout");

    auto* val = app.add_subcommand("validate", "check a config and list violations");
    val->add_option("--config", config_path, "config file (TOML or JSON)")->check(CLI::ExistingFile);

    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? kOk : kConfig;
    }

    if (*run) return cmd_run(config_path, scheme, overrides);
    if (*sweep) return cmd_sweep(spec_path, output, threads, overrides);
    if (*cmp) return cmd_oracle_compare(spec_path, output, overrides);
    return cmd_validate(config_path, overrides);
  } catch (const mrassoc::OracleCapError& e) {
    std::cerr << "oracle cap: " << e.what() << '\n';
    return kOracleCap;
  } catch (const mrassoc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
