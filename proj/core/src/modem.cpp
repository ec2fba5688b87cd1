#include "wban/modem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wban {

namespace {
constexpr double kPi = std::numbers::pi;
// Gray label per quadrant index (quadrant q has base angle pi/4 + q*pi/2).
constexpr int kQuadrantLabel[4] = {0b00, 0b01, 0b11, 0b10};
}  // namespace

Constellation build_constellation(int order, const std::vector<double>& theta) {
  if (order != 4 && order != 8)
    throw std::invalid_argument("build_constellation: order must be 4 or 8");
  const std::size_t want = order == 4 ? 1 : 2;
  if (theta.size() != want)
    throw std::invalid_argument("build_constellation: wrong theta length");
  if (std::abs(theta[0] - kPi / 4.0) > 1e-9)
    throw std::invalid_argument("build_constellation: theta[0] must be pi/4");
  if (order == 8 && !(theta[1] > 0.0 && theta[1] < kPi / 4.0))
    throw std::invalid_argument("build_constellation: theta2 outside (0, pi/4)");

  Constellation c;
  c.order = order;
  c.theta = theta;
  c.bits_per_symbol = order == 4 ? 2 : 3;
  c.hp_bits_per_symbol = 2;
  c.lp_bits_per_symbol = order == 4 ? 0 : 1;
  c.points.reserve(order);
  c.labels.reserve(order);
  c.point_for_label.assign(order, -1);

  for (int q = 0; q < 4; ++q) {
    const double base = theta[0] + q * (kPi / 2.0);
    if (order == 4) {
      c.points.push_back(std::polar(1.0, base));
      c.labels.push_back(kQuadrantLabel[q]);
    } else {
      for (int lp = 0; lp < 2; ++lp) {
        const double ang = base + (lp == 0 ? theta[1] : -theta[1]);
        c.points.push_back(std::polar(1.0, ang));
        c.labels.push_back(kQuadrantLabel[q] * 2 + lp);
      }
    }
  }
  for (int i = 0; i < order; ++i) c.point_for_label[c.labels[i]] = i;
  return c;
}

std::vector<cplx> modulate(std::span<const std::uint8_t> bits,
                           const Constellation& c) {
  const int k = c.bits_per_symbol;
  if (bits.size() % k != 0)
    throw std::invalid_argument("modulate: bit count not divisible by bits per symbol");
  std::vector<cplx> out;
  out.reserve(bits.size() / k);
  for (std::size_t i = 0; i < bits.size(); i += k) {
    int v = 0;
    for (int b = 0; b < k; ++b) v = (v << 1) | (bits[i + b] & 1);
    out.push_back(c.points[c.point_for_label[v]]);
  }
  return out;
}

cplx transmit_symbol(cplx symbol, double tx_power_dbm, const ChannelGain& gain,
                     const NoiseModel& noise, RngStream& rng) {
  const double amp = received_amplitude(tx_power_dbm, gain);
  const double n0 = std::isinf(noise.noise_power_dbm) && noise.noise_power_dbm < 0
                        ? 0.0
                        : db_to_linear(noise.noise_power_dbm);
  const double s = std::sqrt(n0 / 2.0);
  return amp * symbol + cplx(s * rng.normal(), s * rng.normal());
}

int demodulate_index(cplx received, const Constellation& c, double amplitude) {
  if (!(amplitude > 0.0))
    throw std::invalid_argument("demodulate: amplitude must be positive");
  const cplx z = received / amplitude;
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < c.order; ++i) {
    const double d = std::norm(z - c.points[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

void demodulate_bits(cplx received, const Constellation& c, double amplitude,
                     std::vector<std::uint8_t>& out) {
  const int v = c.labels[demodulate_index(received, c, amplitude)];
  for (int b = c.bits_per_symbol - 1; b >= 0; --b)
    out.push_back(static_cast<std::uint8_t>((v >> b) & 1));
}

int demodulate_mrc_index(cplx y1, double a1, cplx y2, double a2,
                         const Constellation& c) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < c.order; ++i) {
    const double d =
        std::norm(y1 - a1 * c.points[i]) + std::norm(y2 - a2 * c.points[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

double adaptive_theta(double link_quality_db,
                      std::span<const std::pair<double, double>> policy) {
  if (policy.empty())
    throw std::invalid_argument("adaptive_theta: empty policy table");
  double chosen = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [threshold_db, theta2] : policy) {
    if (threshold_db <= link_quality_db) chosen = theta2;
  }
  if (std::isnan(chosen)) {
    chosen = policy.front().second;
    for (const auto& [threshold_db, theta2] : policy)
      chosen = std::min(chosen, theta2);
  }
  return chosen;
}

}  // namespace wban
