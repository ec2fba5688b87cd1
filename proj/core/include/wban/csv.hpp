#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "wban/engine.hpp"

namespace wban {

// Fixed-precision, locale-independent number formatting so identical runs
// produce byte-identical files.
std::string csv_number(double v);

// One shared row schema for simulation and oracle outputs; documented in
// docs/csv_schema.md.
std::vector<std::string> metrics_csv_columns();

void write_csv_preamble(std::ostream& out, bool with_timestamp);
void write_metrics_header(std::ostream& out);
void write_metrics_row(std::ostream& out, const std::string& source,
                       const std::string& axis, double axis_value,
                       const SimConfig& cfg, const MetricsReport& report);

struct OracleRow {
  double avg_system_delay = 0.0;
  double silent_fraction = 0.0;
  double p_sr_wins = 0.0;
  double ber_hp = 0.0;
  double ber_lp = 0.0;
  double ber_overall = 0.0;
  std::vector<double> stationary;
};

void write_oracle_row(std::ostream& out, const std::string& axis,
                      double axis_value, const SimConfig& cfg,
                      const OracleRow& row);

}  // namespace wban
