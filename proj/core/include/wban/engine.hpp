#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wban/channel.hpp"
#include "wban/modem.hpp"
#include "wban/protocol.hpp"

namespace wban {

struct RelayGeometry {
  double sr_distance_mm = 120.0;
  double rd_distance_mm = 478.63;
};

struct TopologyConfig {
  std::vector<RelayGeometry> relays;
  std::optional<double> sd_distance_mm;  // presence enables the direct link
};

struct ModemConfig {
  int order = 4;
  double theta2 = 0.39269908169872414;  // pi/8, used when order == 8
  bool adaptive = false;
  std::vector<std::pair<double, double>> adaptive_table;  // (quality dB, theta2)
};

struct SimConfig {
  TopologyConfig topology;
  ChannelParams in_body{47.14, 50.0, 4.26, 7.85};
  ChannelParams on_body{35.2, 100.0, 3.11, 6.1};
  ProtocolKind protocol = ProtocolKind::Protocol1;
  double beta = 0.2;
  int buffer_size = 10;
  QualityMode quality_mode = QualityMode::Absolute;
  ModemConfig modem;
  double source_power_dbm = -20.0;
  double relay_power_dbm = -3.0;
  double noise_dbm = -117.73;
  std::int64_t packets = 10000;
  int symbols_per_packet = 128;
  std::uint64_t seed = 1;
  int trials = 1;
  int control_overhead_slots = 0;
};

struct ClassTally {
  std::int64_t bits = 0;
  double errors = 0.0;
  // per-packet error sums for Monte Carlo standard errors
  double sum_e = 0.0;
  double sum_e2 = 0.0;
  std::int64_t packets = 0;

  void add_packet(double e, std::int64_t nbits);
  void pool(const ClassTally& other);
  double ber() const;
  double std_error() const;
};

struct MetricsReport {
  ClassTally hp, lp, overall;
  std::int64_t total_slots = 0;      // includes control overhead
  std::int64_t decision_slots = 0;   // loop iterations
  std::int64_t silent_slots = 0;
  std::int64_t packets_delivered = 0;
  std::vector<std::vector<std::int64_t>> occupancy_counts;  // per relay, 0..L

  double ber_hp() const { return hp.ber(); }
  double ber_lp() const { return lp.ber(); }
  double ber_overall() const { return overall.ber(); }
  double avg_system_delay() const;
  double silent_fraction() const;
  std::vector<double> occupancy_histogram(int relay) const;
  void pool(const MetricsReport& other);
};

MetricsReport run_trial(const SimConfig& config, std::uint64_t seed);
MetricsReport run_simulation(const SimConfig& config, int threads = 1);

enum class SweepAxis { SourcePower, Beta, BufferSize, Theta2 };
const char* sweep_axis_name(SweepAxis axis);
SweepAxis sweep_axis_from_name(const std::string& name);
SimConfig with_axis_value(const SimConfig& config, SweepAxis axis, double value);

std::vector<std::pair<double, MetricsReport>> run_sweep(
    const SimConfig& config, SweepAxis axis, const std::vector<double>& values,
    int threads = 1);

}  // namespace wban
