#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "mrassoc/experiments.hpp"

using namespace mrassoc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepSpec small_spec() {
  SweepSpec s;
  s.parameter = "si_cancellation";
  s.values = {1e-9, 1e-13, 0.0};
  s.base.num_users = 12;
  s.replications = 3;
  s.schemes = {Scheme::cg_fd, Scheme::cg_hd, Scheme::nccg_fd, Scheme::os};
  return s;
}

}  // namespace

TEST(Schemes, NamesAndConfigs) {
  for (auto s : {Scheme::cg_fd, Scheme::cg_hd, Scheme::nccg_fd, Scheme::os}) {
    EXPECT_EQ(scheme_from_string(to_string(s)), s);
  }
  EXPECT_THROW(scheme_from_string("cg-fd"), ConfigError);
  SystemConfig c;
  EXPECT_EQ(scheme_config(c, Scheme::cg_hd).duplex_mode, DuplexMode::half);
  EXPECT_EQ(scheme_config(c, Scheme::nccg_fd).preference_mode, PreferenceMode::selfish);
  EXPECT_EQ(scheme_config(c, Scheme::nccg_fd).duplex_mode, DuplexMode::full);
  EXPECT_EQ(scheme_config(c, Scheme::cg_fd).preference_mode, PreferenceMode::utilitarian);
}

TEST(Sweep, RecordsSortedAndComplete) {
  const auto r = run_sweep(small_spec());
  EXPECT_EQ(r.records.size(), 3u * 4u * 3u);
  EXPECT_TRUE(r.skipped.empty());
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    const auto& a = r.records[i - 1];
    const auto& b = r.records[i];
    EXPECT_TRUE(std::tie(a.value, a.scheme, a.seed) < std::tie(b.value, b.scheme, b.seed));
  }
  for (const auto& x : r.records) {
    EXPECT_TRUE(std::isfinite(x.avg_system_throughput));
    EXPECT_GT(x.avg_system_throughput, 0.0);
    EXPECT_GE(x.switch_count, 0);
    EXPECT_EQ(x.runtime_ms, 0.0);
    if (x.scheme == Scheme::os) {
      EXPECT_EQ(x.switch_count, 0);
    }
  }
  EXPECT_EQ(r.aggregates.size(), 3u * 4u);
}

TEST(Sweep, OsDominatesCgFdPerSeed) {
  const auto r = run_sweep(small_spec());
  for (const auto& os : r.records) {
    if (os.scheme != Scheme::os) continue;
    for (const auto& cg : r.records) {
      if (cg.scheme == Scheme::cg_fd && cg.value == os.value && cg.seed == os.seed) {
        EXPECT_GE(os.avg_system_throughput, cg.avg_system_throughput * (1 - 1e-12));
      }
    }
  }
}

TEST(Sweep, AggregatesAreSeedMeans) {
  const auto r = run_sweep(small_spec());
  for (const auto& a : r.aggregates) {
    double sum = 0.0, sw = 0.0;
    int k = 0;
    for (const auto& x : r.records) {
      if (x.value == a.value && x.scheme == a.scheme) {
        sum += x.avg_system_throughput;
        sw += static_cast<double>(x.switch_count);
        ++k;
      }
    }
    EXPECT_EQ(k, a.replications);
    EXPECT_NEAR(a.avg_system_throughput, sum / k, 1e-12 * sum);
    EXPECT_NEAR(a.switch_count, sw / k, 1e-12 * (sw + 1));
  }
}

TEST(Sweep, ParallelMatchesSerial) {
  auto spec = small_spec();
  const auto a = run_sweep(spec);
  spec.threads = 3;
  const auto b = run_sweep(spec);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.aggregates, b.aggregates);
}

TEST(Sweep, InvalidCellsAreSkipped) {
  SweepSpec s;
  s.parameter = "bs_bandwidth_fraction";
  s.values = {0.3, 1.0};
  s.base.num_users = 8;
  s.replications = 2;
  s.schemes = {Scheme::cg_fd};
  const auto r = run_sweep(s);
  EXPECT_EQ(r.records.size(), 2u);
  ASSERT_EQ(r.skipped.size(), 2u);
  EXPECT_NE(r.skipped[0].reason.find("BS fraction must be < 1"), std::string::npos);
}

TEST(Sweep, SpecErrors) {
  auto s = small_spec();
  s.values.clear();
  EXPECT_THROW(run_sweep(s), ConfigError);
  s = small_spec();
  s.parameter = "no_such_field";
  EXPECT_THROW(run_sweep(s), ConfigError);
  s = small_spec();
  s.parameter = "num_users";
  s.values = {10, 20, 30};
  try {
    run_sweep(s);
    FAIL() << "expected a refusal";
  } catch (const OracleCapError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("num_users=20"), std::string::npos);
    EXPECT_NE(msg.find("num_users=30"), std::string::npos);
    EXPECT_EQ(msg.find("num_users=10 "), std::string::npos);
  }
}

TEST(Emit, EmptyRecordsAreAnError) {
  EXPECT_THROW(emit(SweepResult{}, "emit_empty/out"), IoError);
}

TEST(Emit, UnwritablePathNamesThePath) {
  auto r = run_sweep(small_spec());
  try {
    emit(r, "/proc/definitely/not/writable/out");
    FAIL() << "expected an I/O error";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/proc/definitely/not/writable/out"), std::string::npos);
  }
}

TEST(Emit, FilesAndHeaders) {
  const auto r = run_sweep(small_spec());
  const auto paths = emit(r, "emit_files/beta");
  ASSERT_EQ(paths.size(), 4u);
  const auto csv = slurp("emit_files/beta.csv");
  EXPECT_EQ(csv.rfind(std::string(sweep_csv_header()) + "\r\n", 0), 0u);
  const auto j = json::parse(slurp("emit_files/beta.json"));
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), r.records.size());
  EXPECT_TRUE(j[0].contains("avg_system_throughput"));
  EXPECT_TRUE(j[0].contains("bs_tx_power_dbm"));
  const auto agg = slurp("emit_files/beta_aggregate.csv");
  EXPECT_EQ(agg.rfind(aggregate_csv_header(), 0), 0u);
}

TEST(Emit, ByteIdenticalReruns) {
  const auto a = run_sweep(small_spec());
  emit(a, "emit_rerun/a");
  auto spec = small_spec();
  spec.threads = 2;
  emit(run_sweep(spec), "emit_rerun/b");
  for (const char* suffix : {".csv", ".json", "_aggregate.csv", "_aggregate.json"}) {
    EXPECT_EQ(slurp(std::string("emit_rerun/a") + suffix), slurp(std::string("emit_rerun/b") + suffix))
        << suffix;
  }
}

TEST(Csv, RoundTripsRecords) {
  const auto r = run_sweep(small_spec());
  EXPECT_EQ(sweep_records_from_csv(to_csv(r.records)), r.records);
}

TEST(Csv, QuotingPerRfc4180) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  const auto rows = parse_csv("x,\"a,b\",\"q\"\"q\"\r\n1,,3\r\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][1], "a,b");
  EXPECT_EQ(rows[0][2], "q\"q");
  EXPECT_EQ(rows[1][1], "");
}

TEST(Csv, NumbersRoundTrip) {
  for (double x : {0.0, 1e-13, 1.0 / 3.0, 2.16e9, -134.0, 4.9406564584124654e-324}) {
    EXPECT_EQ(std::strtod(format_number(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(format_number(1e-13).find(','), std::string::npos);
}

TEST(Csv, RejectsForeignHeader) {
  EXPECT_THROW(sweep_records_from_csv("a,b\r\n1,2\r\n"), IoError);
  EXPECT_THROW(sweep_records_from_csv(""), IoError);
}

TEST(SpecFile, ParsesTomlAndRejectsUnknownKeys) {
  const auto s = sweep_spec_from_json(parse_document(R"(
parameter = "num_mrs"
values = [1, 2, 3]
schemes = ["CG-FD", "OS"]
replications = 4
base_seed = 9
output = "out/x"

[oracle]
max_users = 12

[config]
num_users = 10
)"));
  EXPECT_EQ(s.parameter, "num_mrs");
  EXPECT_EQ(s.values.size(), 3u);
  EXPECT_EQ(s.schemes.size(), 2u);
  EXPECT_EQ(s.replications, 4);
  EXPECT_EQ(s.base_seed, 9u);
  EXPECT_EQ(s.oracle.max_users, 12);
  EXPECT_EQ(s.base.num_users, 10);
  EXPECT_THROW(sweep_spec_from_json(json{{"paramter", "x"}}), ConfigError);
  EXPECT_THROW(sweep_spec_from_json(json{{"oracle", {{"max", 3}}}}), ConfigError);
  EXPECT_THROW(sweep_spec_from_json(json{{"schemes", {"FOO"}}}), ConfigError);
}

TEST(SpecFile, ShippedSweepsLoad) {
  const auto dir = fs::path(__FILE__).parent_path().parent_path() / "configs";
  int n = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind("sweep_", 0) != 0 && name.rfind("oracle_", 0) != 0) continue;
    const auto s = load_sweep_spec(e.path());
    EXPECT_FALSE(s.values.empty()) << name;
    ++n;
  }
  EXPECT_GE(n, 8);
}

TEST(OracleCompare, IdenticalSeriesGiveZeroAndPointsAreNonNegative) {
  SweepSpec s;
  s.parameter = "num_users";
  s.values = {4, 6, 8};
  s.base.num_mrs = 2;
  s.replications = 3;
  const auto rep = compare_with_oracle(s);
  ASSERT_EQ(rep.points.size(), 3u);
  for (const auto& p : rep.points) {
    EXPECT_GE(p.deviation, 0.0);
    EXPECT_LT(p.deviation, 1.0);
    for (std::size_t k = 0; k < p.os_per_seed.size(); ++k) {
      EXPECT_GE(p.os_per_seed[k], p.alg_per_seed[k] * (1 - 1e-12));
    }
  }
  EXPECT_GE(rep.average_deviation, 0.0);
  const auto j = to_json(rep);
  EXPECT_EQ(j["points"].size(), 3u);

  s.values = {12, 16};
  EXPECT_THROW(compare_with_oracle(s), OracleCapError);
}
