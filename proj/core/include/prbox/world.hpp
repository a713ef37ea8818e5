#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prbox/bit.hpp"

namespace prbox {

using AgentId = std::string;
using BoxId = std::uint32_t;
using Tick = int;
using Cell = int;

struct SpacetimePoint {
  Tick t = 0;
  Cell x = 0;

  friend constexpr bool operator==(const SpacetimePoint&, const SpacetimePoint&) = default;
};

// Unit light speed: one cell per tick.
constexpr bool spacelike_separated(SpacetimePoint p, SpacetimePoint q) {
  const int dt = p.t >= q.t ? p.t - q.t : q.t - p.t;
  const int dx = p.x >= q.x ? p.x - q.x : q.x - p.x;
  return dx > dt;
}

struct Observation {
  Bit input;
  Colour colour;

  friend constexpr bool operator==(const Observation&, const Observation&) = default;
};

// Deterministic answer sheet for a box half that was split before being
// pressed: the colour it will flash for each possible input.
struct BoxProgram {
  Colour on_input_0;
  Colour on_input_1;

  constexpr Colour apply(Bit input) const { return input.value() ? on_input_1 : on_input_0; }

  friend constexpr auto operator<=>(const BoxProgram&, const BoxProgram&) = default;
};

// The unique program consistent with the remote half's observation.
constexpr BoxProgram forced_program(Bit remote_input, Colour remote_colour) {
  const Bit a = bit_of(remote_colour);
  return BoxProgram{colour_of(a ^ (remote_input & kZero)),
                    colour_of(a ^ (remote_input & kOne))};
}

enum class SplitKind : std::uint8_t { press = 0, program = 1, meeting = 2 };

struct SplitEvent {
  Tick tick = 0;
  BoxId box = 0;  // 0 for meeting splits, which are not tied to one box
  SplitKind kind = SplitKind::press;
  std::uint8_t variant = 0;

  friend constexpr bool operator==(const SplitEvent&, const SplitEvent&) = default;
};

// One copy of an agent. Carries everything that copy has locally seen:
// its own observations, programs for halves split but not yet pressed, and
// facts about other agents' halves witnessed at meetings.
struct Branch {
  AgentId agent;
  Cell position = 0;
  std::map<BoxId, Observation> observations;             // own half, one per box
  std::map<BoxId, BoxProgram> box_programs;              // own half, disjoint from observations
  std::map<BoxId, std::map<AgentId, Observation>> witnessed;  // other owners' halves
  std::vector<SplitEvent> lineage;

  std::uint64_t lineage_id() const;  // platform-stable hash of agent + lineage
};

struct AgentConfig {
  AgentId id;
  Cell position = 0;
};

// One box pair: two halves with the same id, one per owner.
struct BoxPairConfig {
  BoxId id = 0;
  AgentId side_a_owner;
  AgentId side_b_owner;
};

struct WorldConfig {
  std::vector<AgentConfig> agents;
  std::vector<BoxPairConfig> boxes;
  std::uint64_t seed = 0;  // carried for samplers layered on top; dynamics draw nothing
};

struct JointView {
  BoxId box = 0;
  Bit input_a;
  Colour colour_a;
  Bit input_b;
  Colour colour_b;
};

struct InteractionRecord {
  Tick tick = 0;
  Cell cell = 0;
  AgentId agent_a;  // earlier in config order
  AgentId agent_b;
  std::uint64_t branch_a = 0;  // lineage ids at interaction time
  std::uint64_t branch_b = 0;
  std::vector<JointView> views;  // common pressed boxes, ascending id
};

struct EventLogEntry {
  SpacetimePoint where;
  std::string kind;  // "press" | "move" | "meet"
  std::string payload;
};

// Displacement rule for a subset of one agent's branches; first matching
// rule wins, unmatched branches stay put.
struct BranchMove {
  AgentId agent;
  std::function<bool(const Branch&)> selector;  // null selects every branch
  int displacement = 0;
};

class World {
 public:
  static World new_world(WorldConfig config);

  // Test and scenario plumbing: a world with explicit branch state.
  static World from_branches(WorldConfig config, std::vector<Branch> branches);

  // Splits every unprogrammed branch of the agent into a green and a red
  // copy; programmed branches just record the forced colour. Purely local.
  void press(const AgentId& agent, BoxId box, Bit input);

  // One tick: apply per-agent displacements (absent agents stay), then run
  // meetings wherever branches of different agents share a cell.
  std::vector<InteractionRecord> advance(const std::map<AgentId, int>& moves);

  // Same, with per-branch displacement rules for travelling-branch setups.
  std::vector<InteractionRecord> advance(const std::vector<BranchMove>& moves);

  // Explicit meeting at every cell the two agents currently share.
  std::vector<InteractionRecord> meet(const AgentId& a, const AgentId& b);

  Tick clock() const { return clock_; }
  std::uint64_t seed() const { return config_.seed; }
  const WorldConfig& config() const { return config_; }
  const std::vector<Branch>& branches_of(const AgentId& agent) const;
  const std::vector<EventLogEntry>& event_log() const { return log_; }
  const std::vector<InteractionRecord>& interaction_records() const { return records_; }

  // Spacetime points of the press events for (agent, box), one per branch
  // that pressed.
  std::vector<SpacetimePoint> press_points(const AgentId& agent, BoxId box) const;

 private:
  struct AgentState {
    AgentConfig config;
    std::vector<Branch> branches;
  };

  World() = default;

  AgentState& agent_state(const AgentId& id);
  const AgentState& agent_state(const AgentId& id) const;
  const BoxPairConfig& box_config(BoxId id) const;
  std::vector<InteractionRecord> run_meetings();
  std::vector<InteractionRecord> meet_at(AgentState& first, AgentState& second, Cell cell);
  void lazy_program_split(AgentState& owners, const AgentState& visitors, Cell cell);
  void apply_displacement(AgentState& state, const std::vector<BranchMove>& rules);

  WorldConfig config_;
  Tick clock_ = 0;
  std::vector<AgentState> agents_;  // config order
  std::map<BoxId, BoxPairConfig> boxes_;
  std::vector<EventLogEntry> log_;
  std::vector<InteractionRecord> records_;
};

// The published compatibility predicate: conjunction of the box constraint
// over every box pressed in both branches; vacuously true with none.
bool compatible(const Branch& first, const Branch& second);

// Meeting-level consistency: compatible, plus agreement of overlapping
// witnessed facts and programs matching the remote half where determined.
bool strand_consistent(const Branch& first, const Branch& second);

// Deterministic single-line rendering, used by audits and lineage hashing.
std::string serialize_branch(const Branch& branch);
std::string serialize_branch_set(const std::vector<Branch>& branches);

// One event per line: "<tick> <position> <kind> <payload>".
std::string serialize_event_log(const std::vector<EventLogEntry>& log);

std::uint64_t fnv1a64(std::string_view bytes);

// Colours the agent can see across its branches after pressing `input` on
// its lowest-id unpressed box in a freshly built world.
std::set<Colour> counterfactual_report(const std::function<World()>& world_builder,
                                       const AgentId& agent, Bit input);

// One scripted tick: presses applied at the current clock, then one advance.
struct ScenarioStep {
  struct Press {
    AgentId agent;
    BoxId box = 0;
    Bit input;
  };
  std::vector<Press> presses;
  std::vector<BranchMove> moves;
};

// A remote-input-invariance experiment: the two scripts must differ only in
// the remote agent's presses.
struct AuditScenario {
  std::string name;
  WorldConfig config;
  AgentId local_agent;
  AgentId remote_agent;
  std::vector<ScenarioStep> base_script;
  std::vector<ScenarioStep> variant_script;
  bool expect_post_horizon_divergence = true;
};

struct AuditReport {
  std::string scenario;
  bool pass = false;
  // Step index whose advance first made remote influence reach the local
  // agent (via any chain of meetings); -1 if it never does.
  int horizon_step = -1;
  int first_divergence_step = -1;  // -1 when the runs never diverge
  bool post_horizon_divergence = false;
  std::string detail;
};

// Runs the scenario twice with the same seed and compares the local agent's
// serialized branch set after every step. Divergence before the horizon
// fails the audit.
AuditReport locality_audit(std::uint64_t seed, const AuditScenario& scenario);

}  // namespace prbox
