#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prbox/bit.hpp"
#include "prbox/lhv.hpp"
#include "prbox/rational.hpp"
#include "prbox/world.hpp"

namespace prbox {

inline constexpr std::uint64_t kDefaultSeed = 1729;
inline constexpr std::uint64_t kDefaultTrials = 100000;
inline constexpr double kZThreshold = 4.0;

enum class Model : std::uint8_t {
  ideal,
  noisy,
  lhv_optimal,
  parallel_lives,
  planted_signalling,  // test fixture: bob's colour leaks alice's input
};

std::string model_name(Model model);
// Accepts the CLI spellings ideal | noisy | lhv | pl.
std::optional<Model> model_from_name(const std::string& name);

struct TrialRecord {
  Model model = Model::ideal;
  std::uint64_t trial = 0;
  BoxId box = 1;
  Bit alice_input;
  Colour alice_colour = Colour::green;
  Bit bob_input;
  Colour bob_colour = Colour::green;
  bool satisfied = false;
};

struct RunParams {
  Model model = Model::ideal;
  std::uint64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  std::string seed_source = "default";  // "flag" | "env" | "default"
  std::optional<double> p;              // noisy model only
};

struct PairStats {
  std::uint64_t n = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t alice_green = 0;
  std::uint64_t bob_green = 0;
};

struct MarginalStats {
  std::uint64_t n = 0;
  std::uint64_t green = 0;
};

// One side's own-input stratum, split by the remote input.
struct ZComparison {
  std::uint64_t n0 = 0, n1 = 0;
  std::uint64_t green0 = 0, green1 = 0;
  double rate0 = 0.0, rate1 = 0.0;
  double delta = 0.0;
  double z = 0.0;
};

struct NoSignallingReport {
  std::array<ZComparison, 2> alice;  // by alice's own input
  std::array<ZComparison, 2> bob;    // by bob's own input
  double threshold = kZThreshold;
  bool pass = false;
};

struct RunReport {
  std::string model;
  std::optional<double> p;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string seed_source = "default";
  std::array<std::array<PairStats, 2>, 2> by_pair;  // [x][y]
  std::uint64_t satisfied_total = 0;
  std::array<MarginalStats, 2> alice_marginal;  // by own input
  std::array<MarginalStats, 2> bob_marginal;
  NoSignallingReport nosignal;
  double expected_rate = 0.0;
  double rate_tolerance = 0.0;  // 0 means the rate must match exactly
  bool rate_ok = false;
  bool pass = false;
};

struct RunOutput {
  RunReport report;
  std::vector<TrialRecord> records;
};

// The testing protocol: uniform independent inputs per side per trial, one
// box-pair use per trial. Parallel-lives trials build a fresh world, check
// the presses are spacelike separated, advance to the meeting and sample
// one interaction record.
RunOutput run_protocol(const RunParams& params);

// Two-proportion z-tests of each side's colour distribution across the two
// remote inputs. Throws if any input pair is missing from the records.
NoSignallingReport no_signalling_test(const std::vector<TrialRecord>& records);

struct EprReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string seed_source = "default";
  std::uint64_t records_checked = 0;
  std::uint64_t agreements = 0;
  // Both-press-1 narrative tallies: each Alice pairs with the opposite Bob.
  std::uint64_t green_alice_red_bob = 0;
  std::uint64_t red_alice_green_bob = 0;
  bool pass = false;
};

// Parallel-lives trials with Alice's input fixed to 1: every meeting
// outcome must equal the prediction available to her before the meeting.
EprReport epr_scenario(std::uint64_t trials, std::uint64_t seed);

struct BellRow {
  std::string label;
  double rate = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

struct BellReport {
  Rational lhv_bound;  // 3/4 exact
  DeterministicStrategy witness;
  double quantum_bound = 0.0;
  double perfect = 1.0;
  bool ordering_ok = false;
  std::vector<BellRow> rows;  // empirical rows; empty when trials == 0
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string seed_source = "default";
  bool pass = false;
};

// Exact bounds, the witness strategy, and (with trials > 0) empirical rates
// for each model, with the strict ordering lhv < quantum < perfect asserted.
BellReport bell_report(std::uint64_t trials, std::uint64_t seed);

struct CounterfactualReport {
  Bit input;
  std::set<Colour> colours;
  bool pass = false;  // colour set is exactly {green, red}
};

CounterfactualReport counterfactual_scenario(Bit input);

struct AuditRunReport {
  std::uint64_t seed = 0;
  std::string seed_source = "default";
  std::vector<AuditReport> scenarios;
  bool pass = false;
};

// The fixed scenario matrix behind the locality audit.
std::vector<AuditScenario> standard_audit_scenarios();
AuditRunReport run_locality_audits(std::uint64_t seed);

// The two-agent, one-pair world used by trials and scenarios:
// alice at cell -1, bob at cell +1, box pair 1 between them.
WorldConfig standard_trial_config(std::uint64_t seed);

// Raw interaction records of one parallel-lives trial (both presses at tick
// 0, meeting at tick 1). Exposed for scenario drivers and tests.
std::vector<InteractionRecord> pl_meeting_records(std::uint64_t seed, std::uint64_t trial,
                                                  Bit x, Bit y);

std::string to_json(const RunReport& report);
std::string to_csv(const RunReport& report);
std::string to_json_nosignal(const RunReport& report);
std::string to_csv_nosignal(const RunReport& report);
std::string to_json(const EprReport& report);
std::string to_csv(const EprReport& report);
std::string to_json(const BellReport& report);
std::string to_csv(const BellReport& report);
std::string to_json(const CounterfactualReport& report);
std::string to_csv(const CounterfactualReport& report);
std::string to_json(const AuditRunReport& report);
std::string to_csv(const AuditRunReport& report);

}  // namespace prbox
