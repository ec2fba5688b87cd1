#include "wban/engine.hpp"

#include <cmath>
#include <deque>
#include <future>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace wban {

void ClassTally::add_packet(double e, std::int64_t nbits) {
  bits += nbits;
  errors += e;
  sum_e += e;
  sum_e2 += e * e;
  packets += 1;
}

void ClassTally::pool(const ClassTally& other) {
  bits += other.bits;
  errors += other.errors;
  sum_e += other.sum_e;
  sum_e2 += other.sum_e2;
  packets += other.packets;
}

double ClassTally::ber() const {
  return bits > 0 ? errors / static_cast<double>(bits) : 0.0;
}

double ClassTally::std_error() const {
  if (packets < 2 || bits == 0) return 0.0;
  const double n = static_cast<double>(packets);
  const double mean = sum_e / n;
  const double var = std::max(0.0, sum_e2 / n - mean * mean);
  const double bits_per_packet = static_cast<double>(bits) / n;
  return std::sqrt(var / n) / bits_per_packet;
}

double MetricsReport::avg_system_delay() const {
  return packets_delivered > 0
             ? static_cast<double>(total_slots) / packets_delivered
             : 0.0;
}

double MetricsReport::silent_fraction() const {
  return decision_slots > 0
             ? static_cast<double>(silent_slots) / decision_slots
             : 0.0;
}

std::vector<double> MetricsReport::occupancy_histogram(int relay) const {
  const auto& counts = occupancy_counts.at(relay);
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  std::vector<double> h(counts.size(), 0.0);
  if (total > 0)
    for (std::size_t i = 0; i < counts.size(); ++i)
      h[i] = static_cast<double>(counts[i]) / total;
  return h;
}

void MetricsReport::pool(const MetricsReport& other) {
  hp.pool(other.hp);
  lp.pool(other.lp);
  overall.pool(other.overall);
  total_slots += other.total_slots;
  decision_slots += other.decision_slots;
  silent_slots += other.silent_slots;
  packets_delivered += other.packets_delivered;
  if (occupancy_counts.empty()) {
    occupancy_counts = other.occupancy_counts;
  } else {
    for (std::size_t r = 0; r < occupancy_counts.size(); ++r)
      for (std::size_t i = 0; i < occupancy_counts[r].size(); ++i)
        occupancy_counts[r][i] += other.occupancy_counts[r][i];
  }
}

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_config(const SimConfig& cfg) {
  if (cfg.packets < 1) throw std::invalid_argument("config: packets must be >= 1");
  if (cfg.buffer_size < 1) throw std::invalid_argument("config: buffer_size must be >= 1");
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.symbols_per_packet < 1)
    throw std::invalid_argument("config: symbols_per_packet must be >= 1");
  if (!(cfg.beta > 0.0)) throw std::invalid_argument("config: beta must be positive");
  if (cfg.control_overhead_slots < 0)
    throw std::invalid_argument("config: control_overhead_slots must be >= 0");
  const std::size_t n = cfg.topology.relays.size();
  switch (cfg.protocol) {
    case ProtocolKind::Protocol1:
    case ProtocolKind::Protocol1Star:
      if (n != 1) throw std::invalid_argument("config: protocol requires exactly one relay");
      break;
    case ProtocolKind::ModifiedProtocol1:
      if (n != 1) throw std::invalid_argument("config: protocol requires exactly one relay");
      if (!cfg.topology.sd_distance_mm)
        throw std::invalid_argument("config: modified_protocol1 requires an SD link");
      break;
    case ProtocolKind::Direct:
      if (!cfg.topology.sd_distance_mm)
        throw std::invalid_argument("config: direct scenario requires an SD link");
      break;
    case ProtocolKind::ConventionalDf:
      if (n < 1) throw std::invalid_argument("config: conventional_df requires a relay");
      if (!cfg.topology.sd_distance_mm)
        throw std::invalid_argument("config: conventional_df requires an SD link");
      break;
    default:
      if (n < 1) throw std::invalid_argument("config: at least one relay required");
      break;
  }
  // validates order/theta2 pairing up front
  if (cfg.modem.order == 8)
    build_constellation(8, {kPi / 4.0, cfg.modem.theta2});
  else
    build_constellation(cfg.modem.order, {kPi / 4.0});
  if (cfg.modem.adaptive && cfg.modem.adaptive_table.empty())
    throw std::invalid_argument("config: adaptive modulation needs a policy table");
}

struct StoredPacket {
  std::uint64_t id;
  std::vector<std::uint8_t> bits;
};

class TrialRunner {
 public:
  TrialRunner(const SimConfig& cfg, std::uint64_t seed)
      : cfg_(cfg),
        ch_rng_(derive_seed(seed, 1)),
        noise_rng_(derive_seed(seed, 2)),
        bit_rng_(derive_seed(seed, 3)),
        noise_{cfg.noise_dbm} {
    const std::size_t n = cfg.topology.relays.size();
    sr_links_.reserve(n);
    rd_links_.reserve(n);
    for (const auto& r : cfg.topology.relays) {
      sr_links_.push_back({cfg.in_body,
                           {LinkKind::InBodyToOnBody, r.sr_distance_mm}});
      rd_links_.push_back({cfg.on_body,
                           {LinkKind::OnBodyToOnBody, r.rd_distance_mm}});
    }
    if (cfg.topology.sd_distance_mm)
      sd_link_ = LinkModel{cfg.in_body,
                           {LinkKind::InBodyToOnBody, *cfg.topology.sd_distance_mm}};
    for (const auto& l : sr_links_) sr_pl_.push_back(path_loss_db(l.params, l.geometry));
    for (const auto& l : rd_links_) rd_pl_.push_back(path_loss_db(l.params, l.geometry));
    if (sd_link_) sd_pl_ = path_loss_db(sd_link_->params, sd_link_->geometry);

    buffers_.resize(n);
    last_delivered_.assign(n, 0);
    rep_.occupancy_counts.assign(std::max<std::size_t>(n, 0),
                                 std::vector<std::int64_t>(cfg.buffer_size + 1, 0));
  }

  MetricsReport run() {
    switch (cfg_.protocol) {
      case ProtocolKind::MaxMin: run_max_min(); break;
      case ProtocolKind::Direct: run_direct(); break;
      case ProtocolKind::ConventionalDf: run_conventional_df(); break;
      default: run_buffer_aided(); break;
    }
    return std::move(rep_);
  }

 private:
  int bits_per_symbol() const { return cfg_.modem.order == 4 ? 2 : 3; }
  std::int64_t bits_per_packet() const {
    return static_cast<std::int64_t>(cfg_.symbols_per_packet) * bits_per_symbol();
  }

  const Constellation& constellation_for(double link_gain_db) {
    double theta2 = cfg_.modem.theta2;
    if (cfg_.modem.adaptive && cfg_.modem.order == 8)
      theta2 = adaptive_theta(link_gain_db, cfg_.modem.adaptive_table);
    auto it = constellations_.find(theta2);
    if (it == constellations_.end()) {
      std::vector<double> theta = cfg_.modem.order == 4
                                      ? std::vector<double>{kPi / 4.0}
                                      : std::vector<double>{kPi / 4.0, theta2};
      it = constellations_
               .emplace(theta2, build_constellation(cfg_.modem.order, theta))
               .first;
    }
    return it->second;
  }

  std::vector<std::uint8_t> random_bits() {
    std::vector<std::uint8_t> bits(bits_per_packet());
    for (auto& b : bits) b = bit_rng_.coin() ? 1 : 0;
    return bits;
  }

  std::vector<std::uint8_t> send_packet(const std::vector<std::uint8_t>& bits,
                                        double tx_power_dbm,
                                        const ChannelGain& gain) {
    const Constellation& c = constellation_for(gain.gain_db);
    const double amp = received_amplitude(tx_power_dbm, gain);
    const auto symbols = modulate(bits, c);
    std::vector<std::uint8_t> out;
    out.reserve(bits.size());
    for (const auto& s : symbols) {
      const cplx y = transmit_symbol(s, tx_power_dbm, gain, noise_, noise_rng_);
      demodulate_bits(y, c, amp, out);
    }
    return out;
  }

  void score_packet(const std::vector<std::uint8_t>& decoded,
                    const std::vector<std::uint8_t>& original) {
    const int k = bits_per_symbol();
    double e_hp = 0.0, e_lp = 0.0;
    std::int64_t n_hp = 0, n_lp = 0;
    for (std::size_t i = 0; i < original.size(); ++i) {
      const bool err = decoded[i] != original[i];
      if (static_cast<int>(i % k) < 2) {
        ++n_hp;
        if (err) e_hp += 1.0;
      } else {
        ++n_lp;
        if (err) e_lp += 1.0;
      }
    }
    rep_.hp.add_packet(e_hp, n_hp);
    if (n_lp > 0) rep_.lp.add_packet(e_lp, n_lp);
    rep_.overall.add_packet(e_hp + e_lp, n_hp + n_lp);
  }

  // Expected-value scoring for packets the destination never receives.
  void score_lost_packet() {
    const int k = bits_per_symbol();
    const std::int64_t n_total = bits_per_packet();
    const std::int64_t n_hp = n_total / k * 2;
    const std::int64_t n_lp = n_total - n_hp;
    rep_.hp.add_packet(n_hp * 0.5, n_hp);
    if (n_lp > 0) rep_.lp.add_packet(n_lp * 0.5, n_lp);
    rep_.overall.add_packet(n_total * 0.5, n_total);
  }

  double quality_of(const ChannelGain& g, double pl) const {
    return cfg_.quality_mode == QualityMode::Absolute
               ? g.power_gain
               : db_to_linear(g.gain_db + pl);
  }

  void draw_all_gains() {
    const std::size_t n = sr_links_.size();
    sr_gain_.resize(n);
    rd_gain_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      sr_gain_[i] = draw_gain(sr_links_[i].params, sr_links_[i].geometry, ch_rng_);
    for (std::size_t i = 0; i < n; ++i)
      rd_gain_[i] = draw_gain(rd_links_[i].params, rd_links_[i].geometry, ch_rng_);
    if (sd_link_)
      sd_gain_ = draw_gain(sd_link_->params, sd_link_->geometry, ch_rng_);
  }

  SlotSnapshot make_snapshot() const {
    SlotSnapshot s;
    const std::size_t n = sr_links_.size();
    s.q_sr.resize(n);
    s.q_rd.resize(n);
    s.occupancy.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      s.q_sr[i] = quality_of(sr_gain_[i], sr_pl_[i]);
      s.q_rd[i] = quality_of(rd_gain_[i], rd_pl_[i]);
      s.occupancy[i] = static_cast<int>(buffers_[i].size());
    }
    if (sd_link_) s.q_sd = quality_of(sd_gain_, sd_pl_);
    s.buffer_size = cfg_.buffer_size;
    s.beta = cfg_.beta;
    return s;
  }

  void record_occupancy() {
    for (std::size_t i = 0; i < buffers_.size(); ++i)
      rep_.occupancy_counts[i][buffers_[i].size()] += 1;
  }

  void advance_clock(int slots = 1) {
    rep_.total_slots +=
        static_cast<std::int64_t>(slots) * (1 + cfg_.control_overhead_slots);
    rep_.decision_slots += slots;
  }

  void check_occupancy(std::size_t relay, int before) const {
    const int after = static_cast<int>(buffers_[relay].size());
    if (after < 0 || after > cfg_.buffer_size || std::abs(after - before) > 1)
      throw std::runtime_error("engine: buffer occupancy invariant violated");
  }

  void run_buffer_aided() {
    while (rep_.packets_delivered < cfg_.packets) {
      draw_all_gains();
      record_occupancy();
      const Action action = decide(cfg_.protocol, make_snapshot());
      switch (action.kind) {
        case Action::Kind::Receive: {
          const std::size_t n = action.relay;
          if (buffers_[n].size() >= static_cast<std::size_t>(cfg_.buffer_size))
            throw std::runtime_error("engine: receive into a full buffer");
          const int before = static_cast<int>(buffers_[n].size());
          const std::uint64_t id = next_id_++;
          auto original = random_bits();
          auto decoded = send_packet(original, cfg_.source_power_dbm, sr_gain_[n]);
          originals_.emplace(id, std::move(original));
          buffers_[n].push_back({id, std::move(decoded)});
          check_occupancy(n, before);
          break;
        }
        case Action::Kind::Transmit: {
          const std::size_t n = action.relay;
          if (buffers_[n].empty())
            throw std::runtime_error("engine: transmit from an empty buffer");
          const int before = static_cast<int>(buffers_[n].size());
          StoredPacket pkt = std::move(buffers_[n].front());
          buffers_[n].pop_front();
          check_occupancy(n, before);
          if (last_delivered_[n] != 0 && pkt.id + 1 <= last_delivered_[n])
            throw std::runtime_error("engine: FIFO delivery order violated");
          last_delivered_[n] = pkt.id + 1;
          auto decoded = send_packet(pkt.bits, cfg_.relay_power_dbm, rd_gain_[n]);
          auto it = originals_.find(pkt.id);
          if (it == originals_.end())
            throw std::runtime_error("engine: packet delivered twice");
          score_packet(decoded, it->second);
          originals_.erase(it);
          rep_.packets_delivered += 1;
          break;
        }
        case Action::Kind::Direct: {
          auto original = random_bits();
          auto decoded = send_packet(original, cfg_.source_power_dbm, sd_gain_);
          score_packet(decoded, original);
          rep_.packets_delivered += 1;
          break;
        }
        case Action::Kind::Silent:
          rep_.silent_slots += 1;
          break;
      }
      advance_clock();
    }
  }

  void run_max_min() {
    while (rep_.packets_delivered < cfg_.packets) {
      draw_all_gains();
      record_occupancy();
      const int n = decide_max_min(make_snapshot());
      const auto original = random_bits();
      const auto at_relay = send_packet(original, cfg_.source_power_dbm, sr_gain_[n]);
      const bool crc_ok = at_relay == original;  // ideal error detection
      draw_all_gains();  // fresh block fade for the second hop
      record_occupancy();
      if (crc_ok) {
        const auto decoded = send_packet(original, cfg_.relay_power_dbm, rd_gain_[n]);
        score_packet(decoded, original);
      } else {
        score_lost_packet();
      }
      rep_.packets_delivered += 1;
      advance_clock(2);
    }
  }

  void run_conventional_df() {
    while (rep_.packets_delivered < cfg_.packets) {
      draw_all_gains();
      record_occupancy();
      const int n = decide_max_min(make_snapshot());
      const auto original = random_bits();
      const Constellation& c = constellation_for(sr_gain_[n].gain_db);
      const auto symbols = modulate(original, c);
      // source broadcast: relay and destination observe the same symbols
      std::vector<std::uint8_t> at_relay;
      at_relay.reserve(original.size());
      std::vector<cplx> y_sd(symbols.size());
      const double amp_sr = received_amplitude(cfg_.source_power_dbm, sr_gain_[n]);
      const double amp_sd = received_amplitude(cfg_.source_power_dbm, sd_gain_);
      for (std::size_t i = 0; i < symbols.size(); ++i) {
        const cplx y_r =
            transmit_symbol(symbols[i], cfg_.source_power_dbm, sr_gain_[n], noise_, noise_rng_);
        demodulate_bits(y_r, c, amp_sr, at_relay);
        y_sd[i] = transmit_symbol(symbols[i], cfg_.source_power_dbm, sd_gain_, noise_, noise_rng_);
      }
      const bool crc_ok = at_relay == original;
      draw_all_gains();
      record_occupancy();
      std::vector<std::uint8_t> decoded;
      decoded.reserve(original.size());
      if (crc_ok) {
        const double amp_rd = received_amplitude(cfg_.relay_power_dbm, rd_gain_[n]);
        for (std::size_t i = 0; i < symbols.size(); ++i) {
          const cplx y_d =
              transmit_symbol(symbols[i], cfg_.relay_power_dbm, rd_gain_[n], noise_, noise_rng_);
          const int idx = demodulate_mrc_index(y_sd[i], amp_sd, y_d, amp_rd, c);
          const int v = c.labels[idx];
          for (int b = c.bits_per_symbol - 1; b >= 0; --b)
            decoded.push_back(static_cast<std::uint8_t>((v >> b) & 1));
        }
      } else {
        for (std::size_t i = 0; i < symbols.size(); ++i)
          demodulate_bits(y_sd[i], c, amp_sd, decoded);
      }
      score_packet(decoded, original);
      rep_.packets_delivered += 1;
      advance_clock(2);
    }
  }

  void run_direct() {
    while (rep_.packets_delivered < cfg_.packets) {
      draw_all_gains();
      record_occupancy();
      const auto original = random_bits();
      const auto decoded = send_packet(original, cfg_.source_power_dbm, sd_gain_);
      score_packet(decoded, original);
      rep_.packets_delivered += 1;
      advance_clock();
    }
  }

  const SimConfig& cfg_;
  RngStream ch_rng_, noise_rng_, bit_rng_;
  NoiseModel noise_;
  std::vector<LinkModel> sr_links_, rd_links_;
  std::optional<LinkModel> sd_link_;
  std::vector<double> sr_pl_, rd_pl_;
  double sd_pl_ = 0.0;
  std::vector<ChannelGain> sr_gain_, rd_gain_;
  ChannelGain sd_gain_;
  std::vector<std::deque<StoredPacket>> buffers_;
  std::vector<std::uint64_t> last_delivered_;  // id+1 of the newest delivery
  std::unordered_map<std::uint64_t, std::vector<std::uint8_t>> originals_;
  std::map<double, Constellation> constellations_;
  std::uint64_t next_id_ = 0;
  MetricsReport rep_;
};

}  // namespace

MetricsReport run_trial(const SimConfig& config, std::uint64_t seed) {
  validate_config(config);
  return TrialRunner(config, seed).run();
}

MetricsReport run_simulation(const SimConfig& config, int threads) {
  validate_config(config);
  std::vector<std::uint64_t> seeds(config.trials);
  for (int t = 0; t < config.trials; ++t)
    seeds[t] = derive_seed(config.seed, 1000 + static_cast<std::uint64_t>(t));

  std::vector<MetricsReport> results(config.trials);
  if (threads <= 1 || config.trials == 1) {
    for (int t = 0; t < config.trials; ++t)
      results[t] = TrialRunner(config, seeds[t]).run();
  } else {
    std::vector<std::future<MetricsReport>> futures;
    futures.reserve(config.trials);
    for (int t = 0; t < config.trials; ++t)
      futures.push_back(std::async(std::launch::async, [&, t] {
        return TrialRunner(config, seeds[t]).run();
      }));
    for (int t = 0; t < config.trials; ++t) results[t] = futures[t].get();
  }
  MetricsReport pooled = std::move(results[0]);
  for (int t = 1; t < config.trials; ++t) pooled.pool(results[t]);
  return pooled;
}

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::SourcePower: return "source_power";
    case SweepAxis::Beta: return "beta";
    case SweepAxis::BufferSize: return "buffer_size";
    case SweepAxis::Theta2: return "theta2";
  }
  throw std::logic_error("sweep_axis_name: unreachable");
}

SweepAxis sweep_axis_from_name(const std::string& name) {
  for (SweepAxis a : {SweepAxis::SourcePower, SweepAxis::Beta,
                      SweepAxis::BufferSize, SweepAxis::Theta2})
    if (name == sweep_axis_name(a)) return a;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

SimConfig with_axis_value(const SimConfig& config, SweepAxis axis, double value) {
  SimConfig out = config;
  switch (axis) {
    case SweepAxis::SourcePower:
      if (!std::isfinite(value))
        throw std::invalid_argument("sweep: source power must be finite");
      out.source_power_dbm = value;
      break;
    case SweepAxis::Beta:
      if (!(value > 0.0)) throw std::invalid_argument("sweep: beta must be positive");
      out.beta = value;
      break;
    case SweepAxis::BufferSize: {
      const int l = static_cast<int>(value);
      if (l < 1 || static_cast<double>(l) != value)
        throw std::invalid_argument("sweep: buffer_size must be a positive integer");
      out.buffer_size = l;
      break;
    }
    case SweepAxis::Theta2:
      if (config.modem.order != 8)
        throw std::invalid_argument("sweep: theta2 sweep requires order 8");
      if (!(value > 0.0 && value < kPi / 4.0))
        throw std::invalid_argument("sweep: theta2 outside (0, pi/4)");
      out.modem.theta2 = value;
      break;
  }
  return out;
}

std::vector<std::pair<double, MetricsReport>> run_sweep(
    const SimConfig& config, SweepAxis axis, const std::vector<double>& values,
    int threads) {
  if (values.empty()) throw std::invalid_argument("sweep: empty value list");
  std::vector<std::pair<double, MetricsReport>> rows;
  rows.reserve(values.size());
  for (double v : values)
    rows.emplace_back(v, run_simulation(with_axis_value(config, axis, v), threads));
  return rows;
}

}  // namespace wban
