#include "prbox/harness.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "prbox/boxes.hpp"

namespace prbox {

std::string model_name(Model model) {
  switch (model) {
    case Model::ideal: return "ideal";
    case Model::noisy: return "noisy";
    case Model::lhv_optimal: return "lhv_optimal";
    case Model::parallel_lives: return "parallel_lives";
    case Model::planted_signalling: return "planted_signalling";
  }
  throw std::logic_error("model_name: unknown model");
}

std::optional<Model> model_from_name(const std::string& name) {
  if (name == "ideal") return Model::ideal;
  if (name == "noisy") return Model::noisy;
  if (name == "lhv" || name == "lhv_optimal") return Model::lhv_optimal;
  if (name == "pl" || name == "parallel_lives") return Model::parallel_lives;
  return std::nullopt;
}

WorldConfig standard_trial_config(std::uint64_t seed) {
  WorldConfig config;
  config.agents = {AgentConfig{"alice", -1}, AgentConfig{"bob", +1}};
  config.boxes = {BoxPairConfig{1, "alice", "bob"}};
  config.seed = seed;
  return config;
}

std::vector<InteractionRecord> pl_meeting_records(std::uint64_t seed, std::uint64_t trial,
                                                  Bit x, Bit y) {
  World world = World::new_world(standard_trial_config(seed ^ (trial + 1)));
  world.press("alice", 1, x);
  world.press("bob", 1, y);
  const auto alice_press = world.press_points("alice", 1);
  const auto bob_press = world.press_points("bob", 1);
  if (alice_press.size() != 1 || bob_press.size() != 1 ||
      !spacelike_separated(alice_press.front(), bob_press.front())) {
    throw std::logic_error("trial presses must be spacelike separated");
  }
  auto records = world.advance(std::map<AgentId, int>{{"alice", +1}, {"bob", -1}});
  if (records.size() != 2) {
    throw std::logic_error("trial meeting must produce exactly two interaction records");
  }
  for (const auto& record : records) {
    if (record.views.size() != 1) {
      throw std::logic_error("trial record must cover exactly the one common box");
    }
    const auto& v = record.views.front();
    if (!pr_constraint(v.input_a, v.input_b, v.colour_a, v.colour_b)) {
      throw std::logic_error("interaction record violates the box constraint");
    }
  }
  return records;
}

namespace {

TrialRecord pl_trial(std::uint64_t seed, std::uint64_t trial, Bit x, Bit y) {
  const auto records = pl_meeting_records(seed, trial, x, y);
  RandomStream pick(seed, trial, Side::joint, Purpose::record_pick);
  const auto& view = records[pick.next_below(records.size())].views.front();
  return TrialRecord{Model::parallel_lives,
                     trial,
                     1,
                     view.input_a,
                     view.colour_a,
                     view.input_b,
                     view.colour_b,
                     pr_constraint(view.input_a, view.input_b, view.colour_a, view.colour_b)};
}

TrialRecord make_trial(Model model, double p, std::uint64_t seed, std::uint64_t trial) {
  RandomStream alice_in(seed, trial, Side::alice, Purpose::input_choice);
  RandomStream bob_in(seed, trial, Side::bob, Purpose::input_choice);
  const Bit x(alice_in.next_bool() ? 1u : 0u);
  const Bit y(bob_in.next_bool() ? 1u : 0u);

  if (model == Model::parallel_lives) {
    return pl_trial(seed, trial, x, y);
  }

  OutcomePair pair{};
  switch (model) {
    case Model::ideal: {
      RandomStream rng(seed, trial, Side::joint, Purpose::box_draw);
      pair = ideal_pr_sample(x, y, rng);
      break;
    }
    case Model::noisy: {
      RandomStream rng(seed, trial, Side::joint, Purpose::box_draw);
      pair = noisy_pr_sample(NoisyBoxSpec{p}, x, y, rng);
      break;
    }
    case Model::lhv_optimal: {
      RandomStream rng(seed, trial, Side::joint, Purpose::shared_bits);
      pair = optimal_lhv_sample(draw_shared(rng), x, y);
      break;
    }
    case Model::planted_signalling: {
      RandomStream rng(seed, trial, Side::joint, Purpose::box_draw);
      pair = ideal_pr_sample(x, y, rng);
      pair.bob = colour_of(x);  // the planted leak
      break;
    }
    case Model::parallel_lives:
      break;  // handled above
  }
  return TrialRecord{model,       trial, 1, x, pair.alice, y, pair.bob,
                     pr_constraint(x, y, pair.alice, pair.bob)};
}

ZComparison z_compare(std::uint64_t n0, std::uint64_t green0, std::uint64_t n1,
                      std::uint64_t green1) {
  ZComparison c;
  c.n0 = n0;
  c.n1 = n1;
  c.green0 = green0;
  c.green1 = green1;
  c.rate0 = n0 ? static_cast<double>(green0) / static_cast<double>(n0) : 0.0;
  c.rate1 = n1 ? static_cast<double>(green1) / static_cast<double>(n1) : 0.0;
  c.delta = std::abs(c.rate0 - c.rate1);
  const double pooled = static_cast<double>(green0 + green1) / static_cast<double>(n0 + n1);
  const double se = std::sqrt(pooled * (1.0 - pooled) *
                              (1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1)));
  c.z = se > 0.0 ? (c.rate0 - c.rate1) / se : 0.0;
  return c;
}

}  // namespace

NoSignallingReport no_signalling_test(const std::vector<TrialRecord>& records) {
  std::uint64_t n[2][2] = {};      // [x][y]
  std::uint64_t agreen[2][2] = {};  // alice green by [x][y]
  std::uint64_t bgreen[2][2] = {};  // bob green by [x][y]
  for (const auto& r : records) {
    const unsigned x = r.alice_input.value();
    const unsigned y = r.bob_input.value();
    n[x][y] += 1;
    agreen[x][y] += r.alice_colour == Colour::green ? 1 : 0;
    bgreen[x][y] += r.bob_colour == Colour::green ? 1 : 0;
  }
  for (unsigned x = 0; x < 2; ++x) {
    for (unsigned y = 0; y < 2; ++y) {
      if (n[x][y] == 0) {
        throw std::invalid_argument("no_signalling_test: missing input-pair stratum (" +
                                    std::to_string(x) + "," + std::to_string(y) + ")");
      }
    }
  }
  NoSignallingReport report;
  for (unsigned own = 0; own < 2; ++own) {
    report.alice[own] = z_compare(n[own][0], agreen[own][0], n[own][1], agreen[own][1]);
    report.bob[own] = z_compare(n[0][own], bgreen[0][own], n[1][own], bgreen[1][own]);
  }
  report.pass = true;
  for (unsigned own = 0; own < 2; ++own) {
    report.pass = report.pass && std::abs(report.alice[own].z) < report.threshold &&
                  std::abs(report.bob[own].z) < report.threshold;
  }
  return report;
}

RunOutput run_protocol(const RunParams& params) {
  if (params.trials == 0) {
    throw std::invalid_argument("run_protocol: n_trials must be at least 1");
  }
  if (params.p && params.model != Model::noisy) {
    throw std::invalid_argument("run_protocol: p applies to the noisy model only");
  }
  const double p = params.p.value_or(quantum_bound_p());
  if (params.model == Model::noisy) {
    validate(NoisyBoxSpec{p});
  }

  std::vector<TrialRecord> records(params.trials);
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers = std::min<unsigned>(hw == 0 ? 1 : hw, 8);
  if (workers <= 1 || params.trials < 2000) {
    for (std::uint64_t t = 0; t < params.trials; ++t) {
      records[t] = make_trial(params.model, p, params.seed, t);
    }
  } else {
    const std::uint64_t chunk = (params.trials + workers - 1) / workers;
    std::vector<std::future<void>> futures;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = std::min(params.trials, lo + chunk);
      if (lo >= hi) break;
      futures.push_back(std::async(std::launch::async, [&, lo, hi] {
        for (std::uint64_t t = lo; t < hi; ++t) {
          records[t] = make_trial(params.model, p, params.seed, t);
        }
      }));
    }
    for (auto& f : futures) f.get();
  }

  RunReport report;
  report.model = model_name(params.model);
  if (params.model == Model::noisy) report.p = p;
  report.trials = params.trials;
  report.seed = params.seed;
  report.seed_source = params.seed_source;
  for (const auto& r : records) {
    const unsigned x = r.alice_input.value();
    const unsigned y = r.bob_input.value();
    auto& cell = report.by_pair[x][y];
    cell.n += 1;
    cell.satisfied += r.satisfied ? 1 : 0;
    cell.alice_green += r.alice_colour == Colour::green ? 1 : 0;
    cell.bob_green += r.bob_colour == Colour::green ? 1 : 0;
    report.satisfied_total += r.satisfied ? 1 : 0;
  }
  for (unsigned own = 0; own < 2; ++own) {
    report.alice_marginal[own].n = report.by_pair[own][0].n + report.by_pair[own][1].n;
    report.alice_marginal[own].green =
        report.by_pair[own][0].alice_green + report.by_pair[own][1].alice_green;
    report.bob_marginal[own].n = report.by_pair[0][own].n + report.by_pair[1][own].n;
    report.bob_marginal[own].green =
        report.by_pair[0][own].bob_green + report.by_pair[1][own].bob_green;
  }
  report.nosignal = no_signalling_test(records);

  const double n = static_cast<double>(params.trials);
  switch (params.model) {
    case Model::ideal:
    case Model::parallel_lives:
      report.expected_rate = 1.0;
      report.rate_tolerance = 0.0;
      break;
    case Model::noisy:
      report.expected_rate = p;
      report.rate_tolerance = 4.0 * std::sqrt(p * (1.0 - p) / n);
      break;
    case Model::lhv_optimal:
      report.expected_rate = 0.75;
      report.rate_tolerance = 4.0 * std::sqrt(0.75 * 0.25 / n);
      break;
    case Model::planted_signalling:
      report.expected_rate = 0.5;
      report.rate_tolerance = 4.0 * std::sqrt(0.25 / n);
      break;
  }
  const double rate = static_cast<double>(report.satisfied_total) / n;
  report.rate_ok = report.rate_tolerance == 0.0
                       ? report.satisfied_total ==
                             static_cast<std::uint64_t>(report.expected_rate * n + 0.5)
                       : std::abs(rate - report.expected_rate) <= report.rate_tolerance;
  report.pass = report.rate_ok && report.nosignal.pass;
  return RunOutput{std::move(report), std::move(records)};
}

EprReport epr_scenario(std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) {
    throw std::invalid_argument("epr_scenario: n_trials must be at least 1");
  }
  EprReport report;
  report.trials = trials;
  report.seed = seed;
  const Bit x = kOne;  // the scenario conditions on Alice pressing 1
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    RandomStream bob_in(seed, trial, Side::bob, Purpose::input_choice);
    const Bit y(bob_in.next_bool() ? 1u : 0u);
    for (const auto& record : pl_meeting_records(seed, trial, x, y)) {
      const auto& v = record.views.front();
      const EprPrediction prediction = epr_prediction(x, v.colour_a);
      report.records_checked += 1;
      report.agreements += v.colour_b == prediction.on_input(y) ? 1 : 0;
      if (y == kOne) {
        if (v.colour_a == Colour::green && v.colour_b == Colour::red) {
          report.green_alice_red_bob += 1;
        }
        if (v.colour_a == Colour::red && v.colour_b == Colour::green) {
          report.red_alice_green_bob += 1;
        }
      }
    }
  }
  report.pass = report.records_checked > 0 && report.agreements == report.records_checked;
  return report;
}

BellReport bell_report(std::uint64_t trials, std::uint64_t seed) {
  BellReport report;
  const BellBound bound = bell_bound();
  report.lhv_bound = bound.bound;
  report.witness = bound.witness;
  report.quantum_bound = quantum_bound_p();
  report.perfect = 1.0;
  report.ordering_ok = bound.bound.to_double() < report.quantum_bound &&
                       report.quantum_bound < report.perfect;
  report.trials = trials;
  report.seed = seed;
  bool rows_ok = true;
  if (trials > 0) {
    const auto add_row = [&](Model model, std::optional<double> p, const std::string& label,
                             double expected, double tolerance) {
      RunParams params;
      params.model = model;
      params.trials = trials;
      params.seed = seed;
      params.p = p;
      const RunOutput out = run_protocol(params);
      const double rate =
          static_cast<double>(out.report.satisfied_total) / static_cast<double>(trials);
      const bool ok = tolerance == 0.0 ? out.report.satisfied_total == trials
                                       : std::abs(rate - expected) <= tolerance;
      rows_ok = rows_ok && ok;
      report.rows.push_back(BellRow{label, rate, expected, tolerance, ok});
    };
    const double n = static_cast<double>(trials);
    const double qb = quantum_bound_p();
    add_row(Model::lhv_optimal, std::nullopt, "lhv_optimal", 0.75,
            4.0 * std::sqrt(0.75 * 0.25 / n));
    add_row(Model::noisy, qb, "noisy(p_quant)", qb, 4.0 * std::sqrt(qb * (1.0 - qb) / n));
    add_row(Model::ideal, std::nullopt, "ideal", 1.0, 0.0);
    add_row(Model::parallel_lives, std::nullopt, "parallel_lives", 1.0, 0.0);
  }
  report.pass = report.ordering_ok && rows_ok;
  return report;
}

CounterfactualReport counterfactual_scenario(Bit input) {
  CounterfactualReport report;
  report.input = input;
  report.colours = counterfactual_report(
      [] { return World::new_world(standard_trial_config(kDefaultSeed)); }, "alice", input);
  report.pass = report.colours == std::set<Colour>{Colour::green, Colour::red};
  return report;
}

AuditRunReport run_locality_audits(std::uint64_t seed) {
  AuditRunReport report;
  report.seed = seed;
  report.pass = true;
  for (const auto& scenario : standard_audit_scenarios()) {
    report.scenarios.push_back(locality_audit(seed, scenario));
    report.pass = report.pass && report.scenarios.back().pass;
  }
  return report;
}

namespace {

// Selects the branches whose observation of `box` has the given colour.
std::function<bool(const Branch&)> saw(BoxId box, Colour colour) {
  return [box, colour](const Branch& b) {
    const auto it = b.observations.find(box);
    return it != b.observations.end() && it->second.colour == colour;
  };
}

ScenarioStep step_press(std::vector<ScenarioStep::Press> presses,
                        std::vector<BranchMove> moves = {}) {
  return ScenarioStep{std::move(presses), std::move(moves)};
}

ScenarioStep step_move(std::vector<BranchMove> moves) {
  return ScenarioStep{{}, std::move(moves)};
}

}  // namespace

std::vector<AuditScenario> standard_audit_scenarios() {
  std::vector<AuditScenario> scenarios;

  const auto two_agents = [](Cell alice, Cell bob) {
    WorldConfig config;
    config.agents = {AgentConfig{"alice", alice}, AgentConfig{"bob", bob}};
    config.boxes = {BoxPairConfig{1, "alice", "bob"}};
    return config;
  };

  {
    // Both press far apart, walk together, meet. Alice must be untouched by
    // Bob's input until the meeting tick.
    AuditScenario s;
    s.name = "press-input-variant";
    s.config = two_agents(-3, +3);
    s.local_agent = "alice";
    s.remote_agent = "bob";
    const auto script = [&](Bit bob_input) {
      std::vector<ScenarioStep> steps;
      steps.push_back(step_press({{"alice", 1, kOne}, {"bob", 1, bob_input}},
                                 {{"alice", nullptr, +1}, {"bob", nullptr, -1}}));
      steps.push_back(step_move({{"alice", nullptr, +1}, {"bob", nullptr, -1}}));
      steps.push_back(step_move({{"alice", nullptr, +1}, {"bob", nullptr, -1}}));
      return steps;
    };
    s.base_script = script(kZero);
    s.variant_script = script(kOne);
    scenarios.push_back(std::move(s));
  }

  {
    // Remote press versus no press at all, never meeting.
    AuditScenario s;
    s.name = "press-versus-silence";
    s.config = two_agents(-3, +3);
    s.local_agent = "alice";
    s.remote_agent = "bob";
    const auto script = [&](bool bob_presses) {
      std::vector<ScenarioStep> steps;
      std::vector<ScenarioStep::Press> first{{"alice", 1, kOne}};
      if (bob_presses) first.push_back({"bob", 1, kOne});
      steps.push_back(step_press(std::move(first)));
      steps.push_back(step_move({}));
      steps.push_back(step_move({}));
      return steps;
    };
    s.base_script = script(false);
    s.variant_script = script(true);
    s.expect_post_horizon_divergence = false;
    scenarios.push_back(std::move(s));
  }

  {
    // Only the branch of Alice that saw green travels to Bob; her whole
    // branch set, traveller included, must be invariant until arrival.
    AuditScenario s;
    s.name = "travelling-branch";
    s.config = two_agents(-3, +3);
    s.local_agent = "alice";
    s.remote_agent = "bob";
    const auto script = [&](Bit bob_input) {
      std::vector<ScenarioStep> steps;
      steps.push_back(step_press({{"alice", 1, kOne}, {"bob", 1, bob_input}}));
      for (int i = 0; i < 6; ++i) {
        steps.push_back(step_move({{"alice", saw(1, Colour::green), +1}}));
      }
      return steps;
    };
    s.base_script = script(kZero);
    s.variant_script = script(kOne);
    scenarios.push_back(std::move(s));
  }

  {
    // Mirror image of the first scenario: Bob local, Alice's input varied.
    AuditScenario s;
    s.name = "press-input-variant-bob-local";
    s.config = two_agents(-3, +3);
    s.local_agent = "bob";
    s.remote_agent = "alice";
    const auto script = [&](Bit alice_input) {
      std::vector<ScenarioStep> steps;
      steps.push_back(step_press({{"alice", 1, alice_input}, {"bob", 1, kZero}},
                                 {{"alice", nullptr, +1}, {"bob", nullptr, -1}}));
      steps.push_back(step_move({{"alice", nullptr, +1}, {"bob", nullptr, -1}}));
      steps.push_back(step_move({{"alice", nullptr, +1}, {"bob", nullptr, -1}}));
      return steps;
    };
    s.base_script = script(kZero);
    s.variant_script = script(kOne);
    scenarios.push_back(std::move(s));
  }

  {
    // A boxless courier witnesses Alice's press and carries it to Bob. Bob
    // must be untouched until the courier arrives, well after the courier
    // itself was affected.
    AuditScenario s;
    s.name = "courier-carries-press";
    s.config.agents = {AgentConfig{"alice", 0}, AgentConfig{"bob", 5},
                       AgentConfig{"courier", 2}};
    s.config.boxes = {BoxPairConfig{1, "alice", "bob"}};
    s.local_agent = "bob";
    s.remote_agent = "alice";
    const auto script = [&](Bit alice_input) {
      std::vector<ScenarioStep> steps;
      steps.push_back(step_press({{"alice", 1, alice_input}}, {{"courier", nullptr, -1}}));
      steps.push_back(step_move({{"courier", nullptr, -1}}));  // courier reaches alice
      for (int i = 0; i < 5; ++i) {
        steps.push_back(step_move({{"courier", nullptr, +1}}));
      }
      return steps;
    };
    s.base_script = script(kZero);
    s.variant_script = script(kOne);
    scenarios.push_back(std::move(s));
  }

  {
    // Two box pairs pressed on both sides; only the second remote input
    // differs.
    AuditScenario s;
    s.name = "two-pair-second-input";
    s.config = two_agents(-2, +2);
    s.config.boxes = {BoxPairConfig{1, "alice", "bob"}, BoxPairConfig{2, "alice", "bob"}};
    s.local_agent = "alice";
    s.remote_agent = "bob";
    const auto script = [&](Bit bob_second) {
      std::vector<ScenarioStep> steps;
      steps.push_back(step_press(
          {{"alice", 1, kOne}, {"alice", 2, kZero}, {"bob", 1, kZero}, {"bob", 2, bob_second}},
          {{"alice", nullptr, +1}, {"bob", nullptr, -1}}));
      steps.push_back(step_move({{"alice", nullptr, +1}, {"bob", nullptr, -1}}));
      return steps;
    };
    s.base_script = script(kZero);
    s.variant_script = script(kOne);
    scenarios.push_back(std::move(s));
  }

  {
    // Bob never presses before the meeting; his branches get programmed at
    // it and press afterwards. Pre-meeting he must not depend on Alice's
    // input, post-meeting he must.
    AuditScenario s;
    s.name = "programmed-press-after-meeting";
    s.config = two_agents(-3, +3);
    s.local_agent = "bob";
    s.remote_agent = "alice";
    const auto script = [&](Bit alice_input) {
      std::vector<ScenarioStep> steps;
      steps.push_back(step_press({{"alice", 1, alice_input}},
                                 {{"alice", nullptr, +1}, {"bob", nullptr, -1}}));
      steps.push_back(step_move({{"alice", nullptr, +1}, {"bob", nullptr, -1}}));
      steps.push_back(step_move({{"alice", nullptr, +1}, {"bob", nullptr, -1}}));
      steps.push_back(step_press({{"bob", 1, kOne}}));
      return steps;
    };
    s.base_script = script(kZero);
    s.variant_script = script(kOne);
    scenarios.push_back(std::move(s));
  }

  return scenarios;
}

}  // namespace prbox
