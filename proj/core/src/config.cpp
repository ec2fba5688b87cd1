#include "wban/config.hpp"

#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace wban {

using nlohmann::json;

json default_config_json() {
  return json{
      {"topology",
       {{"relays", json::array({{{"sr_distance_mm", 120.0},
                                 {"rd_distance_mm", 478.63}}})},
        {"sd_distance_mm", nullptr}}},
      {"channel",
       {{"in_body",
         {{"pl0_db", 47.14}, {"d0_mm", 50.0}, {"exponent", 4.26}, {"sigma_db", 7.85}}},
        {"on_body",
         {{"pl0_db", 35.2}, {"d0_mm", 100.0}, {"exponent", 3.11}, {"sigma_db", 6.1}}}}},
      {"protocol",
       {{"name", "protocol1"},
        {"beta", 0.2},
        {"buffer_size", 10},
        {"quality_mode", "absolute"}}},
      {"modem",
       {{"order", 4},
        {"theta2", std::numbers::pi / 8.0},
        {"adaptive", false},
        {"adaptive_table", json::array()}}},
      {"run",
       {{"source_power_dbm", -20.0},
        {"relay_power_dbm", -3.0},
        {"noise_dbm", -117.73},
        {"packets", 10000},
        {"symbols_per_packet", 128},
        {"seed", 1},
        {"trials", 1},
        {"control_overhead_slots", 0}}}};
}

namespace {

void merge_checked(json& base, const json& user, const std::string& path) {
  if (!user.is_object())
    throw std::invalid_argument("config: expected an object at '" +
                                (path.empty() ? "<root>" : path) + "'");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key()))
      throw std::invalid_argument("config: unknown key '" + key + "'");
    json& slot = base[it.key()];
    if (slot.is_object() && it->is_object())
      merge_checked(slot, *it, key);
    else
      slot = *it;
  }
}

double need_number(const json& doc, const std::string& section,
                   const std::string& key) {
  const json& v = doc.at(section).at(key);
  if (!v.is_number())
    throw std::invalid_argument("config: '" + section + "." + key +
                                "' must be a number");
  return v.get<double>();
}

std::int64_t need_integer(const json& doc, const std::string& section,
                          const std::string& key) {
  const json& v = doc.at(section).at(key);
  if (!v.is_number_integer())
    throw std::invalid_argument("config: '" + section + "." + key +
                                "' must be an integer");
  return v.get<std::int64_t>();
}

ChannelParams channel_from(const json& doc, const std::string& which) {
  const json& c = doc.at("channel").at(which);
  ChannelParams p;
  p.pl0_db = c.at("pl0_db").get<double>();
  p.d0_mm = c.at("d0_mm").get<double>();
  p.exponent = c.at("exponent").get<double>();
  p.sigma_db = c.at("sigma_db").get<double>();
  const std::string prefix = "channel." + which + ".";
  if (!(p.d0_mm > 0.0))
    throw std::invalid_argument("config: '" + prefix + "d0_mm' must be positive");
  if (!(p.sigma_db >= 0.0))
    throw std::invalid_argument("config: '" + prefix + "sigma_db' must be >= 0");
  if (!(p.exponent >= 0.0))
    throw std::invalid_argument("config: '" + prefix + "exponent' must be >= 0");
  return p;
}

}  // namespace

SimConfig config_from_json(const json& user) {
  json doc = default_config_json();
  merge_checked(doc, user, "");

  SimConfig cfg;
  const json& relays = doc.at("topology").at("relays");
  if (!relays.is_array())
    throw std::invalid_argument("config: 'topology.relays' must be an array");
  for (const auto& r : relays) {
    json slot = json{{"sr_distance_mm", 120.0}, {"rd_distance_mm", 478.63}};
    merge_checked(slot, r, "topology.relays[]");
    RelayGeometry g{slot.at("sr_distance_mm").get<double>(),
                    slot.at("rd_distance_mm").get<double>()};
    if (!(g.sr_distance_mm > 0.0) || !(g.rd_distance_mm > 0.0))
      throw std::invalid_argument("config: relay distances must be positive");
    cfg.topology.relays.push_back(g);
  }
  const json& sd = doc.at("topology").at("sd_distance_mm");
  if (!sd.is_null()) {
    const double d = sd.get<double>();
    if (!(d > 0.0))
      throw std::invalid_argument("config: 'topology.sd_distance_mm' must be positive");
    cfg.topology.sd_distance_mm = d;
  }

  cfg.in_body = channel_from(doc, "in_body");
  cfg.on_body = channel_from(doc, "on_body");

  cfg.protocol = protocol_from_name(doc.at("protocol").at("name").get<std::string>());
  cfg.beta = need_number(doc, "protocol", "beta");
  if (!(cfg.beta > 0.0))
    throw std::invalid_argument("config: 'protocol.beta' must be positive");
  cfg.buffer_size = static_cast<int>(need_integer(doc, "protocol", "buffer_size"));
  if (cfg.buffer_size < 1)
    throw std::invalid_argument("config: 'protocol.buffer_size' must be >= 1");
  const std::string mode = doc.at("protocol").at("quality_mode").get<std::string>();
  if (mode == "fading")
    cfg.quality_mode = QualityMode::Fading;
  else if (mode == "absolute")
    cfg.quality_mode = QualityMode::Absolute;
  else
    throw std::invalid_argument(
        "config: 'protocol.quality_mode' must be 'fading' or 'absolute'");

  cfg.modem.order = static_cast<int>(need_integer(doc, "modem", "order"));
  if (cfg.modem.order != 4 && cfg.modem.order != 8)
    throw std::invalid_argument("config: 'modem.order' must be 4 or 8");
  cfg.modem.theta2 = need_number(doc, "modem", "theta2");
  if (cfg.modem.order == 8 &&
      !(cfg.modem.theta2 > 0.0 && cfg.modem.theta2 < std::numbers::pi / 4.0))
    throw std::invalid_argument("config: 'modem.theta2' outside (0, pi/4)");
  cfg.modem.adaptive = doc.at("modem").at("adaptive").get<bool>();
  for (const auto& row : doc.at("modem").at("adaptive_table")) {
    if (!row.is_array() || row.size() != 2)
      throw std::invalid_argument(
          "config: 'modem.adaptive_table' rows must be [quality_db, theta2]");
    cfg.modem.adaptive_table.emplace_back(row[0].get<double>(), row[1].get<double>());
  }

  cfg.source_power_dbm = need_number(doc, "run", "source_power_dbm");
  cfg.relay_power_dbm = need_number(doc, "run", "relay_power_dbm");
  cfg.noise_dbm = need_number(doc, "run", "noise_dbm");
  cfg.packets = need_integer(doc, "run", "packets");
  if (cfg.packets < 1)
    throw std::invalid_argument("config: 'run.packets' must be >= 1");
  cfg.symbols_per_packet =
      static_cast<int>(need_integer(doc, "run", "symbols_per_packet"));
  if (cfg.symbols_per_packet < 1)
    throw std::invalid_argument("config: 'run.symbols_per_packet' must be >= 1");
  cfg.seed = doc.at("run").at("seed").get<std::uint64_t>();
  cfg.trials = static_cast<int>(need_integer(doc, "run", "trials"));
  if (cfg.trials < 1)
    throw std::invalid_argument("config: 'run.trials' must be >= 1");
  cfg.control_overhead_slots =
      static_cast<int>(need_integer(doc, "run", "control_overhead_slots"));
  if (cfg.control_overhead_slots < 0)
    throw std::invalid_argument("config: 'run.control_overhead_slots' must be >= 0");
  return cfg;
}

json config_to_json(const SimConfig& cfg) {
  json relays = json::array();
  for (const auto& r : cfg.topology.relays)
    relays.push_back({{"sr_distance_mm", r.sr_distance_mm},
                      {"rd_distance_mm", r.rd_distance_mm}});
  json table = json::array();
  for (const auto& [q, t] : cfg.modem.adaptive_table)
    table.push_back(json::array({q, t}));
  return json{
      {"topology",
       {{"relays", relays},
        {"sd_distance_mm", cfg.topology.sd_distance_mm
                               ? json(*cfg.topology.sd_distance_mm)
                               : json(nullptr)}}},
      {"channel",
       {{"in_body",
         {{"pl0_db", cfg.in_body.pl0_db},
          {"d0_mm", cfg.in_body.d0_mm},
          {"exponent", cfg.in_body.exponent},
          {"sigma_db", cfg.in_body.sigma_db}}},
        {"on_body",
         {{"pl0_db", cfg.on_body.pl0_db},
          {"d0_mm", cfg.on_body.d0_mm},
          {"exponent", cfg.on_body.exponent},
          {"sigma_db", cfg.on_body.sigma_db}}}}},
      {"protocol",
       {{"name", protocol_name(cfg.protocol)},
        {"beta", cfg.beta},
        {"buffer_size", cfg.buffer_size},
        {"quality_mode",
         cfg.quality_mode == QualityMode::Fading ? "fading" : "absolute"}}},
      {"modem",
       {{"order", cfg.modem.order},
        {"theta2", cfg.modem.theta2},
        {"adaptive", cfg.modem.adaptive},
        {"adaptive_table", table}}},
      {"run",
       {{"source_power_dbm", cfg.source_power_dbm},
        {"relay_power_dbm", cfg.relay_power_dbm},
        {"noise_dbm", cfg.noise_dbm},
        {"packets", cfg.packets},
        {"symbols_per_packet", cfg.symbols_per_packet},
        {"seed", cfg.seed},
        {"trials", cfg.trials},
        {"control_overhead_slots", cfg.control_overhead_slots}}}};
}

SimConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  return config_from_json(doc);
}

std::string serialize_config(const SimConfig& cfg) {
  return config_to_json(cfg).dump(2) + "\n";
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override must look like section.key=value: " +
                                assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (!node->is_object() || !node->contains(key))
      throw std::invalid_argument("override references unknown key '" + path + "'");
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  json parsed = json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? json(value) : parsed;
}

}  // namespace wban
