#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wban/channel.hpp"
#include "wban/util.hpp"

namespace wban {

using cplx = std::complex<double>;

// Hierarchical PSK constellation. The HP bit pair Gray-selects the quadrant;
// for order 8 the LP bit applies a +/- theta2 offset to the quadrant base
// angle. All points sit on the unit circle.
struct Constellation {
  int order = 4;
  std::vector<double> theta;  // [pi/4] or [pi/4, theta2]
  std::vector<cplx> points;
  std::vector<int> labels;          // label value per point index
  std::vector<int> point_for_label; // inverse map
  int bits_per_symbol = 2;
  int hp_bits_per_symbol = 2;
  int lp_bits_per_symbol = 0;
};

struct NoiseModel {
  // Total complex noise power; -inf disables noise (exact noiseless limit).
  double noise_power_dbm = -117.73;
};

Constellation build_constellation(int order, const std::vector<double>& theta);

std::vector<cplx> modulate(std::span<const std::uint8_t> bits,
                           const Constellation& c);

cplx transmit_symbol(cplx symbol, double tx_power_dbm, const ChannelGain& gain,
                     const NoiseModel& noise, RngStream& rng);

// Coherent ML demapping with known amplitude sqrt(Es); ties break toward the
// lowest point index.
int demodulate_index(cplx received, const Constellation& c, double amplitude);

void demodulate_bits(cplx received, const Constellation& c, double amplitude,
                     std::vector<std::uint8_t>& out);

// Two-branch maximum-ratio detection (equal noise power on both branches).
int demodulate_mrc_index(cplx y1, double a1, cplx y2, double a2,
                         const Constellation& c);

inline double received_amplitude(double tx_power_dbm, const ChannelGain& gain) {
  return std::sqrt(db_to_linear(tx_power_dbm) * gain.power_gain);
}

inline double snr_db(double tx_power_dbm, double gain_db,
                     double noise_power_dbm) {
  return tx_power_dbm + gain_db - noise_power_dbm;
}

// Step policy: returns the theta2 of the highest threshold not exceeding the
// quality; below every threshold, the smallest configured theta2.
double adaptive_theta(double link_quality_db,
                      std::span<const std::pair<double, double>> policy);

}  // namespace wban
