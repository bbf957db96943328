#pragma once

// Link-budget primitives for the mmWave train-ground links. Everything is
// computed in linear units (watts, ratios); dB/dBm only at the edges.

#include <cmath>
#include <numbers>
#include <string>

#include "mrassoc/errors.hpp"

namespace mrassoc::channel {

inline double dbm_to_w(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double w_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Peak gain of the 802.15.3c sector pattern, dB.
inline double peak_gain_db(double half_power_beamwidth_deg) {
  const double s = std::sin(deg_to_rad(half_power_beamwidth_deg / 2.0));
  return 10.0 * std::log10(std::pow(1.6162 / s, 2));
}

// Side-lobe gain, dB. The beamwidth enters in degrees.
inline double side_lobe_gain_db(double half_power_beamwidth_deg) {
  return -0.4111 * std::log(half_power_beamwidth_deg) - 10.579;
}

inline double main_lobe_width_deg(double half_power_beamwidth_deg) {
  return 2.6 * half_power_beamwidth_deg;
}

/// Gain (dB) at angle `theta_deg` off boresight. The main-lobe branch is
/// used up to and including theta_ml/2; the side-lobe level beyond.
inline double antenna_gain_db(double theta_deg, double half_power_beamwidth_deg) {
  if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) {
    throw DomainError("antenna_gain_db: angle must lie in [0, 180] degrees, got " +
                      std::to_string(theta_deg));
  }
  if (!(half_power_beamwidth_deg > 0.0 && half_power_beamwidth_deg < 180.0)) {
    throw DomainError("antenna_gain_db: half-power beamwidth must lie in (0, 180) degrees");
  }
  if (theta_deg <= main_lobe_width_deg(half_power_beamwidth_deg) / 2.0) {
    const double x = 2.0 * theta_deg / half_power_beamwidth_deg;
    return peak_gain_db(half_power_beamwidth_deg) - 3.01 * x * x;
  }
  return side_lobe_gain_db(half_power_beamwidth_deg);
}

// Free-space constant k0 = (lambda / 4 pi)^2.
inline double path_gain_constant(double wavelength_m) {
  const double r = wavelength_m / (4.0 * std::numbers::pi);
  return r * r;
}

struct LinkBudget {
  double tx_power_w = 0.0;
  double tx_gain_linear = 1.0;
  double rx_gain_linear = 1.0;
  double distance_m = 1.0;
  double fading_power = 1.0;
  double extra_loss_linear = 1.0;
  double rx_power_w = 0.0;
};

/// k0 |h0|^2 Gt Gr d^-delta P / extra_loss.
inline double received_power_w(double tx_power_w, double tx_gain_linear, double rx_gain_linear,
                               double distance_m, double fading_power, double extra_loss_linear,
                               double wavelength_m, double path_loss_exponent) {
  if (!(distance_m > 0.0)) {
    throw DomainError("received_power_w: distance must be positive");
  }
  if (tx_power_w < 0.0 || tx_gain_linear < 0.0 || rx_gain_linear < 0.0 || fading_power < 0.0) {
    throw DomainError("received_power_w: powers and gains must be non-negative");
  }
  if (!(extra_loss_linear > 0.0)) {
    throw DomainError("received_power_w: extra loss must be positive (1 = none)");
  }
  return path_gain_constant(wavelength_m) * fading_power * tx_gain_linear * rx_gain_linear *
         std::pow(distance_m, -path_loss_exponent) * tx_power_w / extra_loss_linear;
}

inline LinkBudget make_link_budget(double tx_power_w, double tx_gain_linear, double rx_gain_linear,
                                   double distance_m, double fading_power,
                                   double extra_loss_linear, double wavelength_m,
                                   double path_loss_exponent) {
  return LinkBudget{tx_power_w,
                    tx_gain_linear,
                    rx_gain_linear,
                    distance_m,
                    fading_power,
                    extra_loss_linear,
                    received_power_w(tx_power_w, tx_gain_linear, rx_gain_linear, distance_m,
                                     fading_power, extra_loss_linear, wavelength_m,
                                     path_loss_exponent)};
}

/// Thermal noise over the sub-band alpha * W. N0 is given in dBm/MHz.
inline double noise_power_w(double alpha, double total_bandwidth_hz,
                            double noise_psd_dbm_per_mhz) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("noise_power_w: bandwidth fraction must lie in (0, 1]");
  }
  return dbm_to_w(noise_psd_dbm_per_mhz) * alpha * total_bandwidth_hz / 1e6;
}

inline double snr(double rx_power_w, double noise_w) {
  if (!(noise_w > 0.0)) throw DomainError("snr: noise power must be positive");
  return rx_power_w / noise_w;
}

// Full-duplex relay: the residual self-interference beta * P_relay adds to noise.
inline double sinr_fd(double rx_power_w, double noise_w, double si_cancellation,
                      double relay_tx_power_w) {
  if (!(noise_w > 0.0)) throw DomainError("sinr_fd: noise power must be positive");
  if (si_cancellation < 0.0) throw DomainError("sinr_fd: beta must be non-negative");
  return rx_power_w / (noise_w + si_cancellation * relay_tx_power_w);
}

}  // namespace mrassoc::channel
