#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wban {

enum class ProtocolKind {
  Protocol1,
  Protocol1Star,
  ModifiedProtocol1,
  MaxMin,
  Protocol2,
  ModifiedProtocol2,
  // Scenario baselines (Fig.-style case presets), not selection protocols.
  Direct,
  ConventionalDf,
};

const char* protocol_name(ProtocolKind p);
ProtocolKind protocol_from_name(const std::string& name);
bool is_buffer_aided(ProtocolKind p);

// Per-slot view the decision functions operate on. Qualities are linear and
// already weighted by nothing; beta is applied inside the deciders.
struct SlotSnapshot {
  std::vector<double> q_sr;
  std::vector<double> q_rd;
  std::optional<double> q_sd;
  std::vector<int> occupancy;
  int buffer_size = 1;
  double beta = 0.2;
};

struct Action {
  enum class Kind { Receive, Transmit, Direct, Silent };
  Kind kind = Kind::Silent;
  int relay = -1;

  bool operator==(const Action&) const = default;
};

// Ties resolve to Receive over Transmit, then to the lowest relay index;
// Modified Protocol 1 ranks Direct first on exact ties.
Action decide_protocol1(const SlotSnapshot& s);
Action decide_protocol1_star(const SlotSnapshot& s);
Action decide_modified_protocol1(const SlotSnapshot& s);
int decide_max_min(const SlotSnapshot& s);
Action decide_protocol2(const SlotSnapshot& s);
Action decide_modified_protocol2(const SlotSnapshot& s);

// Dispatch for the buffer-aided kinds (throws for baselines).
Action decide(ProtocolKind p, const SlotSnapshot& s);

}  // namespace wban
