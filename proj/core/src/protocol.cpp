#include "wban/protocol.hpp"

#include <stdexcept>

namespace wban {

const char* protocol_name(ProtocolKind p) {
  switch (p) {
    case ProtocolKind::Protocol1: return "protocol1";
    case ProtocolKind::Protocol1Star: return "protocol1_star";
    case ProtocolKind::ModifiedProtocol1: return "modified_protocol1";
    case ProtocolKind::MaxMin: return "max_min";
    case ProtocolKind::Protocol2: return "protocol2";
    case ProtocolKind::ModifiedProtocol2: return "modified_protocol2";
    case ProtocolKind::Direct: return "direct";
    case ProtocolKind::ConventionalDf: return "conventional_df";
  }
  throw std::logic_error("protocol_name: unreachable");
}

ProtocolKind protocol_from_name(const std::string& name) {
  for (ProtocolKind p : {ProtocolKind::Protocol1, ProtocolKind::Protocol1Star,
                         ProtocolKind::ModifiedProtocol1, ProtocolKind::MaxMin,
                         ProtocolKind::Protocol2, ProtocolKind::ModifiedProtocol2,
                         ProtocolKind::Direct, ProtocolKind::ConventionalDf})
    if (name == protocol_name(p)) return p;
  throw std::invalid_argument("unknown protocol: " + name);
}

bool is_buffer_aided(ProtocolKind p) {
  switch (p) {
    case ProtocolKind::Protocol1:
    case ProtocolKind::Protocol1Star:
    case ProtocolKind::ModifiedProtocol1:
    case ProtocolKind::Protocol2:
    case ProtocolKind::ModifiedProtocol2:
      return true;
    default:
      return false;
  }
}

namespace {

void check_snapshot(const SlotSnapshot& s) {
  const std::size_t n = s.q_sr.size();
  if (n == 0 || s.q_rd.size() != n || s.occupancy.size() != n)
    throw std::invalid_argument("snapshot: inconsistent relay counts");
  if (!(s.beta > 0.0)) throw std::invalid_argument("snapshot: beta must be positive");
  if (s.buffer_size < 1) throw std::invalid_argument("snapshot: buffer_size < 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s.q_sr[i] > 0.0) || !(s.q_rd[i] > 0.0))
      throw std::invalid_argument("snapshot: qualities must be positive");
    if (s.occupancy[i] < 0 || s.occupancy[i] > s.buffer_size)
      throw std::invalid_argument("snapshot: occupancy out of range");
  }
  if (s.q_sd && !(*s.q_sd > 0.0))
    throw std::invalid_argument("snapshot: q_sd must be positive");
}

void require_single_relay(const SlotSnapshot& s, const char* who) {
  if (s.q_sr.size() != 1)
    throw std::invalid_argument(std::string(who) + ": requires exactly one relay");
}

}  // namespace

Action decide_protocol1(const SlotSnapshot& s) {
  check_snapshot(s);
  require_single_relay(s, "decide_protocol1");
  const bool sr_wins = s.q_sr[0] >= s.beta * s.q_rd[0];  // equality -> Receive
  const int occ = s.occupancy[0];
  if (occ == 0) return sr_wins ? Action{Action::Kind::Receive, 0} : Action{};
  if (occ == s.buffer_size)
    return sr_wins ? Action{} : Action{Action::Kind::Transmit, 0};
  return sr_wins ? Action{Action::Kind::Receive, 0}
                 : Action{Action::Kind::Transmit, 0};
}

Action decide_protocol1_star(const SlotSnapshot& s) {
  check_snapshot(s);
  require_single_relay(s, "decide_protocol1_star");
  const int occ = s.occupancy[0];
  if (occ == 0) return {Action::Kind::Receive, 0};
  if (occ == s.buffer_size) return {Action::Kind::Transmit, 0};
  return s.q_sr[0] >= s.beta * s.q_rd[0] ? Action{Action::Kind::Receive, 0}
                                         : Action{Action::Kind::Transmit, 0};
}

Action decide_modified_protocol1(const SlotSnapshot& s) {
  check_snapshot(s);
  require_single_relay(s, "decide_modified_protocol1");
  if (!s.q_sd)
    throw std::invalid_argument("decide_modified_protocol1: q_sd required");
  // Raw maximum over all three weights; feasibility only gates execution.
  const double w_sd = *s.q_sd;
  const double w_sr = s.q_sr[0];
  const double w_rd = s.beta * s.q_rd[0];
  if (w_sd >= w_sr && w_sd >= w_rd) return {Action::Kind::Direct, -1};
  if (w_sr >= w_rd)
    return s.occupancy[0] < s.buffer_size ? Action{Action::Kind::Receive, 0}
                                          : Action{};
  return s.occupancy[0] > 0 ? Action{Action::Kind::Transmit, 0} : Action{};
}

int decide_max_min(const SlotSnapshot& s) {
  check_snapshot(s);
  int best = 0;
  double best_q = -1.0;
  for (std::size_t n = 0; n < s.q_sr.size(); ++n) {
    const double q = std::min(s.q_sr[n], s.q_rd[n]);
    if (q > best_q) {
      best_q = q;
      best = static_cast<int>(n);
    }
  }
  return best;
}

Action decide_protocol2(const SlotSnapshot& s) {
  check_snapshot(s);
  const std::size_t n = s.q_sr.size();
  bool best_is_sr = true;
  int best_relay = -1;
  double best_w = -1.0;
  for (std::size_t i = 0; i < n; ++i)
    if (s.q_sr[i] > best_w) {
      best_w = s.q_sr[i];
      best_relay = static_cast<int>(i);
    }
  for (std::size_t i = 0; i < n; ++i)
    if (s.beta * s.q_rd[i] > best_w) {
      best_w = s.beta * s.q_rd[i];
      best_relay = static_cast<int>(i);
      best_is_sr = false;
    }
  if (best_is_sr)
    return s.occupancy[best_relay] < s.buffer_size
               ? Action{Action::Kind::Receive, best_relay}
               : Action{};
  return s.occupancy[best_relay] > 0 ? Action{Action::Kind::Transmit, best_relay}
                                     : Action{};
}

Action decide_modified_protocol2(const SlotSnapshot& s) {
  check_snapshot(s);
  const std::size_t n = s.q_sr.size();
  Action best{};
  double best_w = -1.0;
  for (std::size_t i = 0; i < n; ++i)
    if (s.occupancy[i] < s.buffer_size && s.q_sr[i] > best_w) {
      best_w = s.q_sr[i];
      best = {Action::Kind::Receive, static_cast<int>(i)};
    }
  for (std::size_t i = 0; i < n; ++i)
    if (s.occupancy[i] > 0 && s.beta * s.q_rd[i] > best_w) {
      best_w = s.beta * s.q_rd[i];
      best = {Action::Kind::Transmit, static_cast<int>(i)};
    }
  return best;  // candidate set is never empty for L >= 1, N >= 1
}

Action decide(ProtocolKind p, const SlotSnapshot& s) {
  switch (p) {
    case ProtocolKind::Protocol1: return decide_protocol1(s);
    case ProtocolKind::Protocol1Star: return decide_protocol1_star(s);
    case ProtocolKind::ModifiedProtocol1: return decide_modified_protocol1(s);
    case ProtocolKind::Protocol2: return decide_protocol2(s);
    case ProtocolKind::ModifiedProtocol2: return decide_modified_protocol2(s);
    default:
      throw std::invalid_argument("decide: not a buffer-aided protocol");
  }
}

}  // namespace wban
