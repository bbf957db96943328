#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mrassoc/errors.hpp"

namespace mrassoc {

enum class DuplexMode { full, half };
enum class PreferenceMode { utilitarian, selfish };
enum class FadingModel { deterministic, nakagami };

inline const char* to_string(DuplexMode m) { return m == DuplexMode::full ? "full" : "half"; }
inline const char* to_string(PreferenceMode m) {
  return m == PreferenceMode::utilitarian ? "utilitarian" : "selfish";
}
inline const char* to_string(FadingModel m) {
  return m == FadingModel::deterministic ? "deterministic" : "nakagami";
}

// Layout on a 2-D plane. The track is the x-axis and the train occupies
// x in [0, train_length_m]. The BS sits at (train_length_m / 2, bs_offset_m).
// Outdoor users fill a rectangle on the BS side of the track that spans
// track_length_m along x (centered on the train) and outdoor_depth_m in y,
// starting outdoor_gap_m away from the track.
struct Geometry {
  double track_length_m = 500.0;
  double bs_offset_m = 50.0;
  double train_length_m = 200.0;
  double train_width_m = 3.0;
  double outdoor_depth_m = 100.0;
  double outdoor_gap_m = 5.0;
  // Share of the users placed on board; the first round(N * f) user indices.
  double onboard_fraction = 0.5;

  bool operator==(const Geometry&) const = default;
};

// Single source of truth for one run: physical parameters, game knobs and
// the seed.
struct SystemConfig {
  double total_bandwidth_hz = 2160e6;
  double bs_tx_power_dbm = 30.0;
  double mr_tx_power_dbm = 23.0;
  double noise_psd_dbm_per_mhz = -134.0;
  double path_loss_exponent = 2.0;
  double carrier_wavelength_m = 0.005;
  double half_power_beamwidth_deg = 30.0;
  double si_cancellation = 1e-13;
  int num_mrs = 2;
  int num_users = 40;
  double bs_bandwidth_fraction = 1.0 / 3.0;
  // Unset capacity means "N", i.e. non-binding.
  std::optional<int> bs_capacity;
  std::optional<int> mr_capacity;
  DuplexMode duplex_mode = DuplexMode::full;
  PreferenceMode preference_mode = PreferenceMode::utilitarian;
  FadingModel fading = FadingModel::deterministic;
  double nakagami_m = 3.0;
  double penetration_loss_db = 0.0;
  double min_distance_m = 1.0;
  std::uint64_t rng_seed = 1;
  int non_switch_budget_multiplier = 10;
  // Hard stop for the switch dynamics, in user visits per user.
  long long visit_cap_multiplier = 1000;
  Geometry geometry;

  int effective_bs_capacity() const { return bs_capacity.value_or(num_users); }
  int effective_mr_capacity() const { return mr_capacity.value_or(num_users); }

  bool operator==(const SystemConfig&) const = default;
};

// Returns every violated invariant as a human-readable line; empty when valid.
inline std::vector<std::string> validate_config(const SystemConfig& c) {
  std::vector<std::string> v;
  auto positive = [&](double x, const char* name) {
    if (!(std::isfinite(x) && x > 0.0)) v.push_back(std::string(name) + " must be positive");
  };
  auto finite = [&](double x, const char* name) {
    if (!std::isfinite(x)) v.push_back(std::string(name) + " must be finite");
  };

  positive(c.total_bandwidth_hz, "total_bandwidth_hz");
  finite(c.bs_tx_power_dbm, "bs_tx_power_dbm");
  finite(c.mr_tx_power_dbm, "mr_tx_power_dbm");
  finite(c.noise_psd_dbm_per_mhz, "noise_psd_dbm_per_mhz");
  positive(c.path_loss_exponent, "path_loss_exponent");
  positive(c.carrier_wavelength_m, "carrier_wavelength_m");
  if (!(c.half_power_beamwidth_deg > 0.0 && c.half_power_beamwidth_deg < 180.0)) {
    v.push_back("half_power_beamwidth_deg must lie in (0, 180)");
  }
  if (!(std::isfinite(c.si_cancellation) && c.si_cancellation >= 0.0)) {
    v.push_back("si_cancellation must be >= 0");
  }
  if (c.num_mrs < 1) v.push_back("num_mrs must be >= 1");
  if (c.num_users < 1) v.push_back("num_users must be >= 1");
  if (!(c.bs_bandwidth_fraction > 0.0)) v.push_back("BS fraction must be > 0");
  if (!(c.bs_bandwidth_fraction < 1.0)) v.push_back("BS fraction must be < 1");

  const int y = c.effective_bs_capacity();
  const int z = c.effective_mr_capacity();
  if (y < 1) v.push_back("bs_capacity must be >= 1");
  if (z < 1) v.push_back("mr_capacity must be >= 1");
  if (c.num_mrs >= 1 && c.num_users >= 1 &&
      static_cast<long long>(y) + static_cast<long long>(c.num_mrs) * z < c.num_users) {
    std::ostringstream os;
    os << "capacity infeasible: " << y << "+" << c.num_mrs << "\xC2\xB7" << z << " < "
       << c.num_users;
    v.push_back(os.str());
  }

  if (c.fading == FadingModel::nakagami && !(c.nakagami_m > 0.5)) {
    v.push_back("nakagami_m must be > 0.5");
  }
  if (!(std::isfinite(c.penetration_loss_db) && c.penetration_loss_db >= 0.0)) {
    v.push_back("penetration_loss_db must be >= 0");
  }
  positive(c.min_distance_m, "min_distance_m");
  if (c.non_switch_budget_multiplier < 1) v.push_back("non_switch_budget_multiplier must be >= 1");
  if (c.visit_cap_multiplier < c.non_switch_budget_multiplier) {
    v.push_back("visit_cap_multiplier must be >= non_switch_budget_multiplier");
  }

  const Geometry& g = c.geometry;
  if (!(g.track_length_m >= 0.0)) v.push_back("geometry.track_length_m must be >= 0");
  if (!(g.bs_offset_m >= 0.0)) v.push_back("geometry.bs_offset_m must be >= 0");
  if (!(g.train_length_m >= 0.0)) v.push_back("geometry.train_length_m must be >= 0");
  if (!(g.train_width_m >= 0.0)) v.push_back("geometry.train_width_m must be >= 0");
  if (!(g.outdoor_depth_m >= 0.0)) v.push_back("geometry.outdoor_depth_m must be >= 0");
  if (!(g.outdoor_gap_m >= 0.0)) v.push_back("geometry.outdoor_gap_m must be >= 0");
  if (!(g.onboard_fraction >= 0.0 && g.onboard_fraction <= 1.0)) {
    v.push_back("geometry.onboard_fraction must lie in [0, 1]");
  }
  return v;
}

inline void require_valid(const SystemConfig& c) {
  auto v = validate_config(c);
  if (v.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& s : v) msg += "\n  - " + s;
  throw ConfigError(msg);
}

/// Sub-band fractions indexed by node: MRs 0..n-1 share 1 - alpha_bs
/// equally, the BS (index n) keeps alpha_bs.
inline std::vector<double> bandwidth_fractions(const SystemConfig& c) {
  const int n = c.num_mrs;
  std::vector<double> alpha(static_cast<std::size_t>(n) + 1);
  const double per_mr = (1.0 - c.bs_bandwidth_fraction) / n;
  for (int i = 0; i < n; ++i) alpha[static_cast<std::size_t>(i)] = per_mr;
  alpha[static_cast<std::size_t>(n)] = c.bs_bandwidth_fraction;
  return alpha;
}

}  // namespace mrassoc
