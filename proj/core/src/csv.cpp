#include "wban/csv.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wban {

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<std::string> metrics_csv_columns() {
  return {"source",        "protocol",       "axis",
          "axis_value",    "beta",           "buffer_size",
          "order",         "theta2",         "source_power_dbm",
          "relay_power_dbm", "noise_dbm",    "packets",
          "total_slots",   "avg_delay_slots", "silent_fraction",
          "ber_hp",        "ber_lp",         "ber_overall",
          "se_ber_hp",     "se_ber_lp",      "se_ber_overall",
          "p_sr_wins",     "occupancy_hist"};
}

void write_csv_preamble(std::ostream& out, bool with_timestamp) {
  if (!with_timestamp) return;
  const auto now = std::chrono::system_clock::now();
  const auto secs =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
  out << "# generated_at_unix=" << secs.count() << "\n";
}

void write_metrics_header(std::ostream& out) {
  const auto cols = metrics_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    out << cols[i] << (i + 1 < cols.size() ? "," : "\n");
}

namespace {

std::string histogram_field(const std::vector<std::vector<double>>& per_relay) {
  std::ostringstream ss;
  ss << '"';
  for (std::size_t r = 0; r < per_relay.size(); ++r) {
    if (r) ss << '|';
    for (std::size_t i = 0; i < per_relay[r].size(); ++i) {
      if (i) ss << ';';
      ss << csv_number(per_relay[r][i]);
    }
  }
  ss << '"';
  return ss.str();
}

void write_common_prefix(std::ostream& out, const std::string& source,
                         const std::string& axis, double axis_value,
                         const SimConfig& cfg) {
  out << source << ',' << protocol_name(cfg.protocol) << ',' << axis << ','
      << csv_number(axis_value) << ',' << csv_number(cfg.beta) << ','
      << cfg.buffer_size << ',' << cfg.modem.order << ','
      << csv_number(cfg.modem.theta2) << ',' << csv_number(cfg.source_power_dbm)
      << ',' << csv_number(cfg.relay_power_dbm) << ','
      << csv_number(cfg.noise_dbm) << ',' << cfg.packets << ',';
}

}  // namespace

void write_metrics_row(std::ostream& out, const std::string& source,
                       const std::string& axis, double axis_value,
                       const SimConfig& cfg, const MetricsReport& report) {
  write_common_prefix(out, source, axis, axis_value, cfg);
  std::vector<std::vector<double>> hist;
  for (std::size_t r = 0; r < report.occupancy_counts.size(); ++r)
    hist.push_back(report.occupancy_histogram(static_cast<int>(r)));
  out << report.total_slots << ',' << csv_number(report.avg_system_delay()) << ','
      << csv_number(report.silent_fraction()) << ','
      << csv_number(report.ber_hp()) << ','
      << (report.lp.bits > 0 ? csv_number(report.ber_lp()) : "nan") << ','
      << csv_number(report.ber_overall()) << ','
      << csv_number(report.hp.std_error()) << ','
      << (report.lp.bits > 0 ? csv_number(report.lp.std_error()) : "nan") << ','
      << csv_number(report.overall.std_error()) << ",nan,"
      << histogram_field(hist) << "\n";
}

void write_oracle_row(std::ostream& out, const std::string& axis,
                      double axis_value, const SimConfig& cfg,
                      const OracleRow& row) {
  write_common_prefix(out, "oracle", axis, axis_value, cfg);
  out << 0 << ',' << csv_number(row.avg_system_delay) << ','
      << csv_number(row.silent_fraction) << ',' << csv_number(row.ber_hp) << ','
      << csv_number(row.ber_lp) << ',' << csv_number(row.ber_overall)
      << ",nan,nan,nan," << csv_number(row.p_sr_wins) << ',';
  out << '"';
  for (std::size_t i = 0; i < row.stationary.size(); ++i) {
    if (i) out << ';';
    out << csv_number(row.stationary[i]);
  }
  out << "\"\n";
}

}  // namespace wban
