// Acceptance gate: one line per criterion, exit 0 only if every line passes.
// Each check recomputes its expected numbers from first principles where
// possible instead of trusting the library's own aggregation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "prbox/boxes.hpp"
#include "prbox/harness.hpp"
#include "prbox/lhv.hpp"
#include "prbox/world.hpp"

namespace {

using namespace prbox;

int g_index = 0;
int g_failures = 0;

void report(const std::string& name, bool ok, double seconds, double limit_seconds) {
  ++g_index;
  const bool timed_out = limit_seconds > 0.0 && seconds >= limit_seconds;
  const bool pass = ok && !timed_out;
  if (!pass) ++g_failures;
  std::printf("[%2d/11] %s  %-62s (%.3f s%s)\n", g_index, pass ? "PASS" : "FAIL", name.c_str(),
              seconds, timed_out ? ", over budget" : "");
}

template <typename Fn>
void criterion(const std::string& name, double limit_seconds, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    std::printf("        exception: %s\n", e.what());
    ok = false;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  report(name, ok, elapsed.count(), limit_seconds);
}

// Success count of strategy index i, derived straight from the constraint.
int oracle_count(unsigned i) {
  const Bit a0((i >> 3) & 1u), a1((i >> 2) & 1u), b0((i >> 1) & 1u), b1(i & 1u);
  int n = 0;
  for (unsigned x = 0; x < 2; ++x) {
    for (unsigned y = 0; y < 2; ++y) {
      const Bit a = x ? a1 : a0;
      const Bit b = y ? b1 : b0;
      if (pr_constraint(Bit(x), Bit(y), colour_of(a), colour_of(b))) ++n;
    }
  }
  return n;
}

bool check_bound() {
  int best = 0;
  bool any_perfect = false;
  for (unsigned i = 0; i < 16; ++i) {
    const int n = oracle_count(i);
    best = n > best ? n : best;
    any_perfect = any_perfect || n == 4;
  }
  const BellBound bound = bell_bound();
  return best == 3 && !any_perfect && bound.bound == Rational(3, 4) &&
         score_strategy(bound.witness).success == Rational(3, 4);
}

bool check_histogram() {
  std::map<int, int> oracle;
  for (unsigned i = 0; i < 16; ++i) ++oracle[oracle_count(i)];
  std::map<Rational, int> scored;
  for (const DeterministicStrategy& s : enumerate_strategies()) {
    ++scored[score_strategy(s).success];
  }
  return oracle.size() == 2 && oracle.at(3) == 8 && oracle.at(1) == 8 && scored.size() == 2 &&
         scored.at(Rational(3, 4)) == 8 && scored.at(Rational(1, 4)) == 8;
}

bool check_lhv_construction() {
  for (const InputPair& pair : kInputPairs) {
    int satisfied = 0, alice_green = 0, bob_green = 0;
    for (unsigned hidden = 0; hidden < 8; ++hidden) {
      const SharedRandomness shared{Bit((hidden >> 2) & 1u), Bit((hidden >> 1) & 1u),
                                    Bit(hidden & 1u)};
      const OutcomePair outcome = optimal_lhv_sample(shared, pair.x, pair.y);
      satisfied += pr_constraint(pair.x, pair.y, outcome) ? 1 : 0;
      alice_green += outcome.alice == Colour::green ? 1 : 0;
      bob_green += outcome.bob == Colour::green ? 1 : 0;
    }
    if (satisfied != 6 || alice_green != 4 || bob_green != 4) return false;
  }
  return true;
}

bool check_noisy_rate() {
  RunParams params;
  params.model = Model::noisy;
  params.trials = 1000000;
  params.seed = kDefaultSeed;
  params.p = quantum_bound_p();
  const RunOutput output = run_protocol(params);
  std::uint64_t satisfied = 0;
  for (const TrialRecord& record : output.records) satisfied += record.satisfied ? 1 : 0;
  if (satisfied != output.report.satisfied_total) return false;
  const double rate = static_cast<double>(satisfied) / static_cast<double>(params.trials);
  std::printf("        rate %.6f vs %.6f\n", rate, quantum_bound_p());
  return std::abs(rate - quantum_bound_p()) <= 0.002;
}

bool check_parallel_lives_perfect() {
  RunParams params;
  params.model = Model::parallel_lives;
  params.trials = 100000;
  params.seed = kDefaultSeed;
  const RunOutput output = run_protocol(params);
  for (const TrialRecord& record : output.records) {
    if (!record.satisfied) return false;
    if (!pr_constraint(record.alice_input, record.bob_input, record.alice_colour,
                       record.bob_colour)) {
      return false;
    }
  }
  return output.report.satisfied_total == params.trials;
}

bool check_no_signalling() {
  for (const Model model :
       {Model::ideal, Model::noisy, Model::lhv_optimal, Model::parallel_lives}) {
    RunParams params;
    params.model = model;
    params.trials = 100000;
    params.seed = kDefaultSeed;
    if (model == Model::noisy) params.p = quantum_bound_p();
    const RunOutput output = run_protocol(params);
    double worst = 0.0;
    for (const ZComparison& cmp : output.report.nosignal.alice) {
      worst = std::max(worst, std::abs(cmp.z));
    }
    for (const ZComparison& cmp : output.report.nosignal.bob) {
      worst = std::max(worst, std::abs(cmp.z));
    }
    std::printf("        %-14s worst |z| = %.3f\n", model_name(model).c_str(), worst);
    if (!output.report.nosignal.pass || worst >= kZThreshold) return false;
  }
  RunParams planted;
  planted.model = Model::planted_signalling;
  planted.trials = 100000;
  planted.seed = kDefaultSeed;
  const RunOutput leak = run_protocol(planted);
  std::printf("        planted fixture detected: %s\n", leak.report.nosignal.pass ? "no" : "yes");
  return !leak.report.nosignal.pass;
}

bool check_locality_audit() {
  const AuditRunReport report = run_locality_audits(kDefaultSeed);
  for (const AuditReport& audit : report.scenarios) {
    std::printf("        %-32s %s\n", audit.scenario.c_str(), audit.pass ? "ok" : audit.detail.c_str());
  }
  return report.pass && report.scenarios.size() >= 6;
}

bool check_epr() {
  const EprReport report = epr_scenario(10000, kDefaultSeed);
  return report.pass && report.records_checked == report.agreements &&
         report.records_checked == 2 * report.trials;
}

bool check_counterfactual() {
  const std::set<Colour> both = {Colour::green, Colour::red};
  return counterfactual_scenario(kZero).colours == both &&
         counterfactual_scenario(kOne).colours == both &&
         counterfactual_scenario(kZero).pass && counterfactual_scenario(kOne).pass;
}

bool check_bijection() {
  for (unsigned n_boxes = 1; n_boxes <= 3; ++n_boxes) {
    WorldConfig config;
    config.agents = {{"alice", -1}, {"bob", 1}};
    for (unsigned i = 1; i <= n_boxes; ++i) {
      config.boxes.push_back(BoxPairConfig{i, "alice", "bob"});
    }
    World world = World::new_world(config);
    for (unsigned box = 1; box <= n_boxes; ++box) {
      world.press("alice", box, Bit(box % 2u));
      world.press("bob", box, Bit((box >> 1) % 2u));
    }
    const auto& alices = world.branches_of("alice");
    const auto& bobs = world.branches_of("bob");
    const std::size_t expected = std::size_t{1} << n_boxes;
    if (alices.size() != expected || bobs.size() != expected) return false;
    for (const Branch& a : alices) {
      std::size_t partners = 0;
      for (const Branch& b : bobs) partners += compatible(a, b) ? 1 : 0;
      if (partners != 1) return false;
    }
    for (const Branch& b : bobs) {
      std::size_t partners = 0;
      for (const Branch& a : alices) partners += compatible(a, b) ? 1 : 0;
      if (partners != 1) return false;
    }
  }
  return true;
}

bool check_determinism() {
  const auto fingerprint = [](std::uint64_t seed) {
    std::string bytes;
    for (const Model model :
         {Model::ideal, Model::noisy, Model::lhv_optimal, Model::parallel_lives}) {
      RunParams params;
      params.model = model;
      params.trials = 20000;
      params.seed = seed;
      if (model == Model::noisy) params.p = quantum_bound_p();
      bytes += to_json(run_protocol(params).report);
    }
    bytes += to_json(bell_report(5000, seed));
    bytes += to_json(epr_scenario(2000, seed));
    bytes += to_json(run_locality_audits(seed));
    return fnv1a64(bytes);
  };
  const std::uint64_t first = fingerprint(kDefaultSeed);
  const std::uint64_t second = fingerprint(kDefaultSeed);
  const std::uint64_t other = fingerprint(kDefaultSeed + 1);
  std::printf("        hash %016llx, rerun %016llx\n",
              static_cast<unsigned long long>(first), static_cast<unsigned long long>(second));
  return first == second && first != other;
}

}  // namespace

int main() {
  std::printf("acceptance checks, seed %llu\n", static_cast<unsigned long long>(kDefaultSeed));

  criterion("exhaustive strategy maximum is 3/4 and nothing is perfect", 1.0, check_bound);
  criterion("strategy scores split 8 at 3/4 and 8 at 1/4", 1.0, check_histogram);
  criterion("three shared bits give 6/8 success and 4/8 green everywhere", 1.0,
            check_lhv_construction);
  criterion("noisy box at the quantum bound over 1e6 samples (+/- 0.002)", 5.0, check_noisy_rate);
  criterion("1e5 branching-world trials satisfy the constraint per record", 30.0,
            check_parallel_lives_perfect);
  criterion("all sixteen z-statistics under 4; planted leak caught", 60.0, check_no_signalling);
  criterion("local branch state invariant under remote input (6+ scenarios)", 0.0,
            check_locality_audit);
  criterion("1e4 conditioned meetings match the remote prediction exactly", 0.0, check_epr);
  criterion("a fresh press always shows both colours across branches", 0.0, check_counterfactual);
  criterion("every branch has exactly one partner in 1-3 pair worlds", 0.0, check_bijection);
  criterion("regenerated reports hash identically", 0.0, check_determinism);

  if (g_failures == 0) {
    std::printf("all 11 criteria passed\n");
    return 0;
  }
  std::printf("%d of 11 criteria FAILED\n", g_failures);
  return 1;
}
