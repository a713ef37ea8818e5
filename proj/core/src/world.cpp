#include "prbox/world.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace prbox {

namespace {

using FactKey = std::pair<BoxId, AgentId>;
using FactMap = std::map<FactKey, Observation>;

// Everything a branch holds to be true, keyed by (box, half owner). Own
// observations override witnessed copies; consistency checks make any
// disagreement unreachable.
FactMap branch_facts(const Branch& b) {
  FactMap facts;
  for (const auto& [box, by_owner] : b.witnessed) {
    for (const auto& [owner, obs] : by_owner) {
      facts[{box, owner}] = obs;
    }
  }
  for (const auto& [box, obs] : b.observations) {
    facts[{box, b.agent}] = obs;
  }
  return facts;
}

std::string serialize_observation(const Observation& o) {
  return "(" + std::to_string(o.input.value()) + "," + to_string(o.colour) + ")";
}

std::string serialize_facts(const FactMap& facts) {
  std::string out;
  for (const auto& [key, obs] : facts) {
    out += std::to_string(key.first) + "@" + key.second + ":" + serialize_observation(obs) + ";";
  }
  return out;
}

char kind_char(SplitKind k) {
  switch (k) {
    case SplitKind::press: return 'p';
    case SplitKind::program: return 'g';
    case SplitKind::meeting: return 'm';
  }
  return '?';
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t Branch::lineage_id() const {
  std::string rep = agent;
  for (const auto& e : lineage) {
    rep += '|';
    rep += kind_char(e.kind);
    rep += ':' + std::to_string(e.box) + ':' + std::to_string(e.variant) + '@' +
           std::to_string(e.tick);
  }
  return fnv1a64(rep);
}

std::string serialize_branch(const Branch& b) {
  std::string out = "agent=" + b.agent + " pos=" + std::to_string(b.position) + " obs[";
  bool first = true;
  for (const auto& [box, o] : b.observations) {
    if (!first) out += ' ';
    first = false;
    out += std::to_string(box) + ":" + serialize_observation(o);
  }
  out += "] prog[";
  first = true;
  for (const auto& [box, prog] : b.box_programs) {
    if (!first) out += ' ';
    first = false;
    out += std::to_string(box) + ":{" + to_string(prog.on_input_0) + "," +
           to_string(prog.on_input_1) + "}";
  }
  out += "] wit[";
  first = true;
  for (const auto& [box, by_owner] : b.witnessed) {
    for (const auto& [owner, o] : by_owner) {
      if (!first) out += ' ';
      first = false;
      out += std::to_string(box) + "@" + owner + ":" + serialize_observation(o);
    }
  }
  out += "] lin[";
  first = true;
  for (const auto& e : b.lineage) {
    if (!first) out += ' ';
    first = false;
    out += kind_char(e.kind);
    out += ':' + std::to_string(e.box) + ':' + std::to_string(e.variant) + '@' +
           std::to_string(e.tick);
  }
  out += "]";
  return out;
}

std::string serialize_branch_set(const std::vector<Branch>& branches) {
  // Set semantics: storage order is an engine detail, so sort the lines.
  std::vector<std::string> lines;
  lines.reserve(branches.size());
  for (const auto& b : branches) lines.push_back(serialize_branch(b));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

std::string serialize_event_log(const std::vector<EventLogEntry>& log) {
  std::string out;
  for (const auto& e : log) {
    out += std::to_string(e.where.t) + " " + std::to_string(e.where.x) + " " + e.kind + " " +
           e.payload + "\n";
  }
  return out;
}

bool compatible(const Branch& first, const Branch& second) {
  for (const auto& [box, obs] : first.observations) {
    const auto it = second.observations.find(box);
    if (it == second.observations.end()) continue;
    if (!pr_constraint(obs.input, it->second.input, obs.colour, it->second.colour)) {
      return false;
    }
  }
  return true;
}

bool strand_consistent(const Branch& first, const Branch& second) {
  const FactMap f1 = branch_facts(first);
  FactMap pool = branch_facts(second);
  // Overlapping facts must agree exactly.
  for (const auto& [key, obs] : f1) {
    const auto it = pool.find(key);
    if (it != pool.end() && !(it->second == obs)) return false;
    pool[key] = obs;
  }
  // Boxes with both halves determined must satisfy the constraint.
  for (auto it = pool.begin(); it != pool.end();) {
    const BoxId box = it->first.first;
    std::vector<Observation> sides;
    while (it != pool.end() && it->first.first == box) {
      sides.push_back(it->second);
      ++it;
    }
    if (sides.size() == 2 &&
        !pr_constraint(sides[0].input, sides[1].input, sides[0].colour, sides[1].colour)) {
      return false;
    }
  }
  // A program must match the remote half wherever the pool determines it.
  const auto programs_fit = [&pool](const Branch& holder) {
    for (const auto& [box, prog] : holder.box_programs) {
      for (auto it = pool.lower_bound({box, AgentId{}});
           it != pool.end() && it->first.first == box; ++it) {
        if (it->first.second == holder.agent) continue;
        if (!(prog == forced_program(it->second.input, it->second.colour))) return false;
      }
    }
    return true;
  };
  return programs_fit(first) && programs_fit(second);
}

World World::new_world(WorldConfig config) {
  World w;
  if (config.agents.empty()) {
    throw std::invalid_argument("new_world: at least one agent required");
  }
  for (const auto& agent : config.agents) {
    for (const auto& other : w.agents_) {
      if (other.config.id == agent.id) {
        throw std::invalid_argument("new_world: duplicate agent id " + agent.id);
      }
    }
    Branch initial;
    initial.agent = agent.id;
    initial.position = agent.position;
    w.agents_.push_back(AgentState{agent, {initial}});
  }
  for (const auto& box : config.boxes) {
    if (w.boxes_.count(box.id)) {
      throw std::invalid_argument("new_world: duplicate box id " + std::to_string(box.id));
    }
    if (box.side_a_owner == box.side_b_owner) {
      throw std::invalid_argument("new_world: box " + std::to_string(box.id) +
                                  " has both halves owned by one agent");
    }
    for (const AgentId& owner : {box.side_a_owner, box.side_b_owner}) {
      bool known = false;
      for (const auto& st : w.agents_) known = known || st.config.id == owner;
      if (!known) {
        throw std::invalid_argument("new_world: box " + std::to_string(box.id) +
                                    " owned by unknown agent " + owner);
      }
    }
    w.boxes_.emplace(box.id, box);
  }
  w.config_ = std::move(config);
  return w;
}

World World::from_branches(WorldConfig config, std::vector<Branch> branches) {
  World w = new_world(std::move(config));
  for (auto& st : w.agents_) st.branches.clear();
  for (auto& b : branches) {
    w.agent_state(b.agent).branches.push_back(std::move(b));
  }
  for (const auto& st : w.agents_) {
    if (st.branches.empty()) {
      throw std::invalid_argument("from_branches: agent " + st.config.id + " has no branch");
    }
  }
  return w;
}

World::AgentState& World::agent_state(const AgentId& id) {
  for (auto& st : agents_) {
    if (st.config.id == id) return st;
  }
  throw std::invalid_argument("unknown agent " + id);
}

const World::AgentState& World::agent_state(const AgentId& id) const {
  for (const auto& st : agents_) {
    if (st.config.id == id) return st;
  }
  throw std::invalid_argument("unknown agent " + id);
}

const BoxPairConfig& World::box_config(BoxId id) const {
  const auto it = boxes_.find(id);
  if (it == boxes_.end()) {
    throw std::invalid_argument("unknown box " + std::to_string(id));
  }
  return it->second;
}

const std::vector<Branch>& World::branches_of(const AgentId& agent) const {
  return agent_state(agent).branches;
}

std::vector<SpacetimePoint> World::press_points(const AgentId& agent, BoxId box) const {
  std::vector<SpacetimePoint> points;
  const std::string prefix = "agent=" + agent + " box=" + std::to_string(box) + " ";
  for (const auto& entry : log_) {
    if (entry.kind == "press" && entry.payload.rfind(prefix, 0) == 0) {
      points.push_back(entry.where);
    }
  }
  return points;
}

void World::press(const AgentId& agent, BoxId box, Bit input) {
  AgentState& state = agent_state(agent);
  const BoxPairConfig& pair = box_config(box);
  if (pair.side_a_owner != agent && pair.side_b_owner != agent) {
    throw std::invalid_argument("press: agent " + agent + " owns no half of box " +
                                std::to_string(box));
  }
  for (const Branch& b : state.branches) {
    if (b.observations.count(box)) {
      throw std::logic_error("press: box " + std::to_string(box) +
                             " already pressed; boxes are one-time use");
    }
  }
  std::vector<Branch> next;
  next.reserve(state.branches.size() * 2);
  for (Branch& b : state.branches) {
    log_.push_back({{clock_, b.position},
                    "press",
                    "agent=" + agent + " box=" + std::to_string(box) +
                        " input=" + std::to_string(input.value())});
    const auto prog_it = b.box_programs.find(box);
    if (prog_it != b.box_programs.end()) {
      // Determined half: the branch records the forced colour, no split.
      const Colour c = prog_it->second.apply(input);
      Branch kept = std::move(b);
      kept.box_programs.erase(box);
      kept.observations.emplace(box, Observation{input, c});
      next.push_back(std::move(kept));
    } else {
      Branch green = b;
      green.observations.emplace(box, Observation{input, Colour::green});
      green.lineage.push_back({clock_, box, SplitKind::press, 0});
      Branch red = std::move(b);
      red.observations.emplace(box, Observation{input, Colour::red});
      red.lineage.push_back({clock_, box, SplitKind::press, 1});
      next.push_back(std::move(green));
      next.push_back(std::move(red));
    }
  }
  state.branches = std::move(next);
}

std::vector<InteractionRecord> World::advance(const std::map<AgentId, int>& moves) {
  std::vector<BranchMove> rules;
  for (const auto& [id, displacement] : moves) {
    rules.push_back(BranchMove{id, nullptr, displacement});
  }
  return advance(rules);
}

std::vector<InteractionRecord> World::advance(const std::vector<BranchMove>& moves) {
  for (const auto& rule : moves) {
    if (rule.displacement < -1 || rule.displacement > 1) {
      throw std::invalid_argument("advance: displacement exceeds light speed");
    }
    agent_state(rule.agent);
  }
  for (auto& st : agents_) {
    std::vector<const BranchMove*> mine;
    for (const auto& rule : moves) {
      if (rule.agent == st.config.id) mine.push_back(&rule);
    }
    if (mine.empty()) continue;
    for (Branch& b : st.branches) {
      int displacement = 0;
      for (const BranchMove* rule : mine) {
        if (!rule->selector || rule->selector(b)) {
          displacement = rule->displacement;
          break;
        }
      }
      if (displacement != 0) {
        b.position += displacement;
        log_.push_back({{clock_ + 1, b.position},
                        "move",
                        "agent=" + st.config.id + " d=" + std::to_string(displacement)});
      }
    }
  }
  ++clock_;
  return run_meetings();
}

std::vector<InteractionRecord> World::run_meetings() {
  std::vector<InteractionRecord> out;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    for (std::size_t j = i + 1; j < agents_.size(); ++j) {
      std::set<Cell> first_cells;
      for (const auto& b : agents_[i].branches) first_cells.insert(b.position);
      std::set<Cell> common;
      for (const auto& b : agents_[j].branches) {
        if (first_cells.count(b.position)) common.insert(b.position);
      }
      for (const Cell cell : common) {
        auto records = meet_at(agents_[i], agents_[j], cell);
        out.insert(out.end(), records.begin(), records.end());
      }
    }
  }
  return out;
}

std::vector<InteractionRecord> World::meet(const AgentId& a, const AgentId& b) {
  if (a == b) throw std::invalid_argument("meet: two distinct agents required");
  AgentState& first = agent_state(a);
  AgentState& second = agent_state(b);
  std::set<Cell> first_cells;
  for (const auto& br : first.branches) first_cells.insert(br.position);
  std::set<Cell> common;
  for (const auto& br : second.branches) {
    if (first_cells.count(br.position)) common.insert(br.position);
  }
  if (common.empty()) {
    throw std::invalid_argument("meet: agents " + a + " and " + b + " share no cell");
  }
  std::vector<InteractionRecord> out;
  for (const Cell cell : common) {
    auto records = meet_at(first, second, cell);
    out.insert(out.end(), records.begin(), records.end());
  }
  return out;
}

// Creates the two constraint-consistent programs on every undetermined,
// co-located branch of the owning side, once any visitor at the cell carries
// a determination of the remote half.
void World::lazy_program_split(AgentState& owners, const AgentState& visitors, Cell cell) {
  for (const auto& [box_id, pair] : boxes_) {
    const AgentId& owner_id = owners.config.id;
    if (pair.side_a_owner != owner_id && pair.side_b_owner != owner_id) continue;
    const AgentId& other = pair.side_a_owner == owner_id ? pair.side_b_owner : pair.side_a_owner;
    bool pressed = false;
    for (const auto& b : owners.branches) pressed = pressed || b.observations.count(box_id) > 0;
    if (pressed) continue;

    bool found = false;
    Bit remote_input;
    for (const auto& vb : visitors.branches) {
      if (vb.position != cell) continue;
      const Observation* det = nullptr;
      if (vb.agent == other) {
        const auto it = vb.observations.find(box_id);
        if (it != vb.observations.end()) det = &it->second;
      }
      if (det == nullptr) {
        const auto wit = vb.witnessed.find(box_id);
        if (wit != vb.witnessed.end()) {
          const auto it = wit->second.find(other);
          if (it != wit->second.end()) det = &it->second;
        }
      }
      if (det == nullptr) continue;
      if (found && !(remote_input == det->input)) {
        throw std::logic_error("lazy split: conflicting remote inputs for box " +
                               std::to_string(box_id));
      }
      remote_input = det->input;
      found = true;
    }
    if (!found) continue;

    std::vector<Branch> next;
    next.reserve(owners.branches.size() * 2);
    for (Branch& b : owners.branches) {
      if (b.position != cell || b.box_programs.count(box_id)) {
        next.push_back(std::move(b));
        continue;
      }
      Branch green = b;
      green.box_programs.emplace(box_id, forced_program(remote_input, Colour::green));
      green.lineage.push_back({clock_, box_id, SplitKind::program, 0});
      Branch red = std::move(b);
      red.box_programs.emplace(box_id, forced_program(remote_input, Colour::red));
      red.lineage.push_back({clock_, box_id, SplitKind::program, 1});
      next.push_back(std::move(green));
      next.push_back(std::move(red));
    }
    owners.branches = std::move(next);
  }
}

std::vector<InteractionRecord> World::meet_at(AgentState& first, AgentState& second, Cell cell) {
  lazy_program_split(first, second, cell);
  lazy_program_split(second, first, cell);

  const auto at_cell = [cell](const AgentState& st) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < st.branches.size(); ++k) {
      if (st.branches[k].position == cell) idx.push_back(k);
    }
    return idx;
  };
  const auto first_idx = at_cell(first);
  const auto second_idx = at_cell(second);

  std::vector<InteractionRecord> out;
  std::map<std::size_t, std::vector<std::size_t>> partners_first, partners_second;
  for (const auto fi : first_idx) {
    for (const auto si : second_idx) {
      const Branch& bf = first.branches[fi];
      const Branch& bs = second.branches[si];
      if (!strand_consistent(bf, bs)) continue;
      partners_first[fi].push_back(si);
      partners_second[si].push_back(fi);
      InteractionRecord rec{clock_,          cell,
                            first.config.id, second.config.id,
                            bf.lineage_id(), bs.lineage_id(),
                            {}};
      for (const auto& [box, obs] : bf.observations) {
        const auto it = bs.observations.find(box);
        if (it == bs.observations.end()) continue;
        rec.views.push_back(JointView{box, obs.input, obs.colour, it->second.input,
                                      it->second.colour});
      }
      out.push_back(std::move(rec));
    }
  }

  // A branch absorbs each partner's facts; distinct incoming fact bundles
  // split it, one copy per bundle. Both sides are computed before either
  // side mutates.
  const auto bundles_for = [](const AgentState& side,
                              const std::map<std::size_t, std::vector<std::size_t>>& partners,
                              const AgentState& other) {
    std::map<std::size_t, std::vector<FactMap>> bundles;
    for (const auto& [bi, partner_list] : partners) {
      const Branch& receiver = side.branches[bi];
      const FactMap mine = branch_facts(receiver);
      std::vector<FactMap> list;
      std::vector<std::string> seen;
      for (const auto pj : partner_list) {
        const FactMap theirs = branch_facts(other.branches[pj]);
        FactMap transfer;
        for (const auto& [key, obs] : theirs) {
          if (key.second == receiver.agent) continue;
          if (mine.count(key)) continue;
          transfer[key] = obs;
        }
        std::string sig = serialize_facts(transfer);
        if (std::find(seen.begin(), seen.end(), sig) == seen.end()) {
          seen.push_back(std::move(sig));
          list.push_back(std::move(transfer));
        }
      }
      bundles[bi] = std::move(list);
    }
    return bundles;
  };
  const auto first_bundles = bundles_for(first, partners_first, second);
  const auto second_bundles = bundles_for(second, partners_second, first);

  const auto rebuild = [this](AgentState& st,
                              const std::map<std::size_t, std::vector<FactMap>>& bundles) {
    std::vector<Branch> next;
    next.reserve(st.branches.size());
    const auto absorb = [](Branch& b, const FactMap& facts) {
      for (const auto& [key, obs] : facts) b.witnessed[key.first][key.second] = obs;
    };
    for (std::size_t k = 0; k < st.branches.size(); ++k) {
      const auto it = bundles.find(k);
      if (it == bundles.end() || it->second.empty()) {
        next.push_back(std::move(st.branches[k]));
        continue;
      }
      const auto& list = it->second;
      if (list.size() == 1) {
        Branch b = std::move(st.branches[k]);
        absorb(b, list[0]);
        next.push_back(std::move(b));
      } else {
        for (std::size_t v = 0; v < list.size(); ++v) {
          Branch b = st.branches[k];
          b.lineage.push_back({clock_, 0, SplitKind::meeting, static_cast<std::uint8_t>(v)});
          absorb(b, list[v]);
          next.push_back(std::move(b));
        }
      }
    }
    st.branches = std::move(next);
  };
  rebuild(first, first_bundles);
  rebuild(second, second_bundles);

  log_.push_back({{clock_, cell},
                  "meet",
                  "agents=" + first.config.id + "," + second.config.id +
                      " records=" + std::to_string(out.size())});
  records_.insert(records_.end(), out.begin(), out.end());
  return out;
}

std::set<Colour> counterfactual_report(const std::function<World()>& world_builder,
                                       const AgentId& agent, Bit input) {
  World w = world_builder();
  std::vector<BoxId> owned;
  for (const auto& box : w.config().boxes) {
    if (box.side_a_owner == agent || box.side_b_owner == agent) owned.push_back(box.id);
  }
  std::sort(owned.begin(), owned.end());
  const std::vector<Branch>& branches = w.branches_of(agent);
  std::optional<BoxId> target;
  for (const BoxId id : owned) {
    bool pressed = false;
    for (const auto& b : branches) pressed = pressed || b.observations.count(id) > 0;
    if (!pressed) {
      target = id;
      break;
    }
  }
  if (!target) {
    throw std::invalid_argument("counterfactual_report: agent " + agent +
                                " has no unpressed box");
  }
  w.press(agent, *target, input);
  std::set<Colour> colours;
  for (const Branch& b : w.branches_of(agent)) {
    const auto it = b.observations.find(*target);
    if (it != b.observations.end()) colours.insert(it->second.colour);
  }
  return colours;
}

namespace {

struct ScriptRun {
  std::vector<std::string> snapshots;
  std::string records;
};

std::string serialize_records(const std::vector<InteractionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += std::to_string(r.tick) + "@" + std::to_string(r.cell) + " " + r.agent_a + "/" +
           r.agent_b + " " + std::to_string(r.branch_a) + ":" + std::to_string(r.branch_b);
    for (const auto& v : r.views) {
      out += " [" + std::to_string(v.box) + ":" + std::to_string(v.input_a.value()) + "," +
             to_string(v.colour_a) + "/" + std::to_string(v.input_b.value()) + "," +
             to_string(v.colour_b) + "]";
    }
    out += '\n';
  }
  return out;
}

ScriptRun run_script(std::uint64_t seed, WorldConfig config, const AgentId& local,
                     const std::vector<ScenarioStep>& script) {
  config.seed = seed;
  World w = World::new_world(std::move(config));
  ScriptRun run;
  for (const auto& step : script) {
    for (const auto& press : step.presses) {
      w.press(press.agent, press.box, press.input);
    }
    w.advance(step.moves);
    run.snapshots.push_back(serialize_branch_set(w.branches_of(local)));
  }
  run.records = serialize_records(w.interaction_records());
  return run;
}

// Step index at which influence originating at the remote agent can first
// have reached the local agent, chasing co-location transitively.
int taint_horizon(WorldConfig config, const AgentId& local, const AgentId& remote,
                  const std::vector<ScenarioStep>& script) {
  World w = World::new_world(std::move(config));
  std::set<AgentId> tainted{remote};
  for (std::size_t k = 0; k < script.size(); ++k) {
    for (const auto& press : script[k].presses) {
      w.press(press.agent, press.box, press.input);
    }
    w.advance(script[k].moves);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& a : w.config().agents) {
        for (const auto& b : w.config().agents) {
          if (a.id == b.id || tainted.count(a.id) == 0 || tainted.count(b.id) > 0) continue;
          std::set<Cell> cells;
          for (const auto& br : w.branches_of(a.id)) cells.insert(br.position);
          bool shared = false;
          for (const auto& br : w.branches_of(b.id)) shared = shared || cells.count(br.position);
          if (shared) {
            tainted.insert(b.id);
            changed = true;
          }
        }
      }
    }
    if (tainted.count(local)) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace

AuditReport locality_audit(std::uint64_t seed, const AuditScenario& scenario) {
  if (scenario.base_script.size() != scenario.variant_script.size()) {
    throw std::invalid_argument("locality_audit: scripts must have equal length");
  }
  const ScriptRun base = run_script(seed, scenario.config, scenario.local_agent,
                                    scenario.base_script);
  const ScriptRun variant = run_script(seed, scenario.config, scenario.local_agent,
                                       scenario.variant_script);
  const int horizon = taint_horizon(scenario.config, scenario.local_agent,
                                    scenario.remote_agent, scenario.base_script);

  AuditReport report;
  report.scenario = scenario.name;
  report.horizon_step = horizon;
  for (std::size_t k = 0; k < base.snapshots.size(); ++k) {
    if (base.snapshots[k] != variant.snapshots[k]) {
      report.first_divergence_step = static_cast<int>(k);
      break;
    }
  }
  const bool pre_horizon_ok =
      report.first_divergence_step == -1 ||
      (horizon >= 0 && report.first_divergence_step >= horizon);
  if (horizon >= 0) {
    report.post_horizon_divergence =
        (report.first_divergence_step >= horizon && report.first_divergence_step != -1) ||
        base.records != variant.records;
  }
  report.pass = pre_horizon_ok &&
                (!scenario.expect_post_horizon_divergence || report.post_horizon_divergence);
  if (!pre_horizon_ok) {
    report.detail = "local branch state diverged at step " +
                    std::to_string(report.first_divergence_step) + ", before horizon " +
                    std::to_string(horizon);
  } else if (scenario.expect_post_horizon_divergence && !report.post_horizon_divergence) {
    report.detail = "expected post-horizon divergence was not observed";
  } else {
    report.detail = "local state invariant before horizon";
  }
  return report;
}

}  // namespace prbox
