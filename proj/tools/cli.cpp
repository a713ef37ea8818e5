#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "prbox/harness.hpp"

namespace prbox {

namespace {

struct SeedChoice {
  std::uint64_t value = kDefaultSeed;
  std::string source = "default";
};

// Precedence: --seed flag, then PRBOX_SEED, then the built-in default. The
// source is echoed into report meta either way.
SeedChoice resolve_seed(bool flag_given, std::uint64_t flag_value) {
  if (flag_given) return SeedChoice{flag_value, "flag"};
  if (const char* env = std::getenv("PRBOX_SEED")) {
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw CLI::ValidationError("PRBOX_SEED", "must be a decimal 64-bit integer");
    }
    return SeedChoice{static_cast<std::uint64_t>(parsed), "env"};
  }
  return SeedChoice{};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open output file " + out_path);
  }
  out << text;
}

struct CommonOptions {
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--format", common.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", common.out, "write the report to this path instead of stdout");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"correlated two-party boxes: exact analysis, samplers, and a branching-world simulation"};
  app.require_subcommand(1);

  CommonOptions bell_common, run_common, nosignal_common, epr_common, cf_common, audit_common;

  auto* bell = app.add_subcommand("bell-bound",
                                  "exact classical bound, witness strategy, comparison table");
  std::uint64_t bell_trials = 0;
  std::uint64_t bell_seed = kDefaultSeed;
  bell->add_option("--trials", bell_trials,
                   "also measure empirical rates over this many trials");
  auto* bell_seed_opt = bell->add_option("--seed", bell_seed, "random seed");
  add_common(bell, bell_common);

  auto* run = app.add_subcommand("run", "drive the testing protocol for one model");
  std::string run_model;
  std::uint64_t run_trials = kDefaultTrials;
  std::uint64_t run_seed = kDefaultSeed;
  double run_p = 0.0;
  run->add_option("--model", run_model, "ideal | noisy | lhv | pl")
      ->required()
      ->check(CLI::IsMember({"ideal", "noisy", "lhv", "pl"}));
  run->add_option("--trials", run_trials, "number of trials")->capture_default_str();
  auto* run_seed_opt = run->add_option("--seed", run_seed, "random seed");
  auto* run_p_opt = run->add_option("--p", run_p,
                                    "working probability for the noisy model");
  add_common(run, run_common);

  auto* nosignal = app.add_subcommand("nosignal",
                                      "two-proportion z-tests of remote-input independence");
  std::string nosignal_model = "ideal";
  std::uint64_t nosignal_trials = kDefaultTrials;
  std::uint64_t nosignal_seed = kDefaultSeed;
  double nosignal_p = 0.0;
  nosignal->add_option("--model", nosignal_model, "ideal | noisy | lhv | pl")
      ->required()
      ->check(CLI::IsMember({"ideal", "noisy", "lhv", "pl"}));
  nosignal->add_option("--trials", nosignal_trials, "number of trials")->capture_default_str();
  auto* nosignal_seed_opt = nosignal->add_option("--seed", nosignal_seed, "random seed");
  auto* nosignal_p_opt = nosignal->add_option("--p", nosignal_p,
                                              "working probability for the noisy model");
  add_common(nosignal, nosignal_common);

  auto* epr = app.add_subcommand("epr",
                                 "meeting outcomes versus the pre-meeting prediction");
  std::uint64_t epr_trials = 10000;
  std::uint64_t epr_seed = kDefaultSeed;
  epr->add_option("--trials", epr_trials, "number of trials")->capture_default_str();
  auto* epr_seed_opt = epr->add_option("--seed", epr_seed, "random seed");
  add_common(epr, epr_common);

  auto* cf = app.add_subcommand("counterfactual",
                                "colour set across branches after a fresh press");
  int cf_input = 0;
  cf->add_option("--input", cf_input, "button to press")
      ->required()
      ->check(CLI::IsMember({0, 1}));
  add_common(cf, cf_common);

  auto* audit = app.add_subcommand("audit-locality",
                                   "remote-input invariance over the scenario matrix");
  std::uint64_t audit_seed = kDefaultSeed;
  auto* audit_seed_opt = audit->add_option("--seed", audit_seed, "random seed");
  add_common(audit, audit_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (bell->parsed()) {
      const SeedChoice seed = resolve_seed(bell_seed_opt->count() > 0, bell_seed);
      BellReport report = bell_report(bell_trials, seed.value);
      report.seed_source = seed.source;
      emit(bell_common.format == "json" ? to_json(report) : to_csv(report), bell_common.out);
      return report.pass ? 0 : 1;
    }
    if (run->parsed()) {
      const SeedChoice seed = resolve_seed(run_seed_opt->count() > 0, run_seed);
      RunParams params;
      params.model = *model_from_name(run_model);
      params.trials = run_trials;
      params.seed = seed.value;
      params.seed_source = seed.source;
      if (run_p_opt->count() > 0) params.p = run_p;
      const RunOutput output = run_protocol(params);
      emit(run_common.format == "json" ? to_json(output.report) : to_csv(output.report),
           run_common.out);
      return output.report.pass ? 0 : 1;
    }
    if (nosignal->parsed()) {
      const SeedChoice seed = resolve_seed(nosignal_seed_opt->count() > 0, nosignal_seed);
      RunParams params;
      params.model = *model_from_name(nosignal_model);
      params.trials = nosignal_trials;
      params.seed = seed.value;
      params.seed_source = seed.source;
      if (nosignal_p_opt->count() > 0) params.p = nosignal_p;
      const RunOutput output = run_protocol(params);
      emit(nosignal_common.format == "json" ? to_json_nosignal(output.report)
                                            : to_csv_nosignal(output.report),
           nosignal_common.out);
      return output.report.nosignal.pass ? 0 : 1;
    }
    if (epr->parsed()) {
      const SeedChoice seed = resolve_seed(epr_seed_opt->count() > 0, epr_seed);
      EprReport report = epr_scenario(epr_trials, seed.value);
      report.seed_source = seed.source;
      emit(epr_common.format == "json" ? to_json(report) : to_csv(report), epr_common.out);
      return report.pass ? 0 : 1;
    }
    if (cf->parsed()) {
      const CounterfactualReport report =
          counterfactual_scenario(Bit(static_cast<unsigned>(cf_input)));
      emit(cf_common.format == "json" ? to_json(report) : to_csv(report), cf_common.out);
      return report.pass ? 0 : 1;
    }
    if (audit->parsed()) {
      const SeedChoice seed = resolve_seed(audit_seed_opt->count() > 0, audit_seed);
      AuditRunReport report = run_locality_audits(seed.value);
      report.seed_source = seed.source;
      emit(audit_common.format == "json" ? to_json(report) : to_csv(report), audit_common.out);
      return report.pass ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("prbox");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_storage.size());
  for (const auto& arg : argv_storage) argv.push_back(arg.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace prbox
