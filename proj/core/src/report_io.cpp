#include <cstdio>
#include <string>

#include "json.hpp"
#include "prbox/harness.hpp"

namespace prbox {

namespace {

using nlohmann::json;  // std::map-backed, so object keys serialize sorted

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

double ratio(std::uint64_t part, std::uint64_t whole) {
  return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

json meta_block(const std::string& command, std::uint64_t trials, std::uint64_t seed,
                const std::string& seed_source) {
  json meta;
  meta["command"] = command;
  meta["format_version"] = 1;
  meta["trials"] = trials;
  meta["seed"] = seed;
  meta["seed_source"] = seed_source;
  return meta;
}

json nosignal_block(const NoSignallingReport& ns) {
  json block;
  const auto side = [](const std::array<ZComparison, 2>& comparisons) {
    json s;
    for (unsigned own = 0; own < 2; ++own) {
      const ZComparison& c = comparisons[own];
      json entry;
      entry["n_remote0"] = c.n0;
      entry["n_remote1"] = c.n1;
      entry["green_rate_remote0"] = c.rate0;
      entry["green_rate_remote1"] = c.rate1;
      entry["delta"] = c.delta;
      entry["z"] = c.z;
      s["input" + std::to_string(own)] = std::move(entry);
    }
    return s;
  };
  block["alice"] = side(ns.alice);
  block["bob"] = side(ns.bob);
  block["threshold"] = ns.threshold;
  block["pass"] = ns.pass;
  return block;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_json(const RunReport& r) {
  json j;
  j["meta"] = meta_block("run", r.trials, r.seed, r.seed_source);
  j["meta"]["model"] = r.model;
  if (r.p) j["meta"]["p"] = *r.p;
  j["rates"]["overall"] = ratio(r.satisfied_total, r.trials);
  j["rates"]["expected"] = r.expected_rate;
  j["rates"]["tolerance"] = r.rate_tolerance;
  for (unsigned x = 0; x < 2; ++x) {
    for (unsigned y = 0; y < 2; ++y) {
      const PairStats& cell = r.by_pair[x][y];
      json entry;
      entry["n"] = cell.n;
      entry["satisfied"] = cell.satisfied;
      entry["rate"] = ratio(cell.satisfied, cell.n);
      j["rates"]["by_pair"]["x" + std::to_string(x) + "y" + std::to_string(y)] =
          std::move(entry);
    }
  }
  const auto marginal_block = [](const std::array<MarginalStats, 2>& side) {
    json s;
    for (unsigned own = 0; own < 2; ++own) {
      json entry;
      entry["n"] = side[own].n;
      entry["green"] = side[own].green;
      entry["green_rate"] = ratio(side[own].green, side[own].n);
      s["input" + std::to_string(own)] = std::move(entry);
    }
    return s;
  };
  j["marginals"]["alice"] = marginal_block(r.alice_marginal);
  j["marginals"]["bob"] = marginal_block(r.bob_marginal);
  j["nosignal"] = nosignal_block(r.nosignal);
  j["verdict"] = verdict(r.pass);
  return dump(j);
}

std::string to_csv(const RunReport& r) {
  std::string out =
      "model,p,trials,seed,x,y,n,satisfied,satisfaction_rate,"
      "alice_green,alice_green_rate,bob_green,bob_green_rate,verdict\n";
  for (unsigned x = 0; x < 2; ++x) {
    for (unsigned y = 0; y < 2; ++y) {
      const PairStats& cell = r.by_pair[x][y];
      out += r.model + ',' + (r.p ? fmt(*r.p) : "") + ',' + std::to_string(r.trials) + ',' +
             std::to_string(r.seed) + ',' + std::to_string(x) + ',' + std::to_string(y) + ',' +
             std::to_string(cell.n) + ',' + std::to_string(cell.satisfied) + ',' +
             fmt(ratio(cell.satisfied, cell.n)) + ',' + std::to_string(cell.alice_green) + ',' +
             fmt(ratio(cell.alice_green, cell.n)) + ',' + std::to_string(cell.bob_green) + ',' +
             fmt(ratio(cell.bob_green, cell.n)) + ',' + verdict(r.pass) + '\n';
    }
  }
  return out;
}

std::string to_json_nosignal(const RunReport& r) {
  json j;
  j["meta"] = meta_block("nosignal", r.trials, r.seed, r.seed_source);
  j["meta"]["model"] = r.model;
  if (r.p) j["meta"]["p"] = *r.p;
  j["nosignal"] = nosignal_block(r.nosignal);
  j["verdict"] = verdict(r.nosignal.pass);
  return dump(j);
}

std::string to_csv_nosignal(const RunReport& r) {
  std::string out =
      "side,own_input,n_remote0,green_rate_remote0,n_remote1,green_rate_remote1,delta,z,"
      "verdict\n";
  const auto side_rows = [&](const std::string& name,
                             const std::array<ZComparison, 2>& comparisons) {
    for (unsigned own = 0; own < 2; ++own) {
      const ZComparison& c = comparisons[own];
      out += name + ',' + std::to_string(own) + ',' + std::to_string(c.n0) + ',' +
             fmt(c.rate0) + ',' + std::to_string(c.n1) + ',' + fmt(c.rate1) + ',' +
             fmt(c.delta) + ',' + fmt(c.z) + ',' + verdict(r.nosignal.pass) + '\n';
    }
  };
  side_rows("alice", r.nosignal.alice);
  side_rows("bob", r.nosignal.bob);
  return out;
}

std::string to_json(const EprReport& r) {
  json j;
  j["meta"] = meta_block("epr", r.trials, r.seed, r.seed_source);
  j["epr"]["records_checked"] = r.records_checked;
  j["epr"]["agreements"] = r.agreements;
  j["epr"]["agreement_rate"] = ratio(r.agreements, r.records_checked);
  j["epr"]["green_alice_red_bob"] = r.green_alice_red_bob;
  j["epr"]["red_alice_green_bob"] = r.red_alice_green_bob;
  j["verdict"] = verdict(r.pass);
  return dump(j);
}

std::string to_csv(const EprReport& r) {
  std::string out = "key,value\n";
  out += "trials," + std::to_string(r.trials) + '\n';
  out += "seed," + std::to_string(r.seed) + '\n';
  out += "records_checked," + std::to_string(r.records_checked) + '\n';
  out += "agreements," + std::to_string(r.agreements) + '\n';
  out += "agreement_rate," + fmt(ratio(r.agreements, r.records_checked)) + '\n';
  out += "green_alice_red_bob," + std::to_string(r.green_alice_red_bob) + '\n';
  out += "red_alice_green_bob," + std::to_string(r.red_alice_green_bob) + '\n';
  out += "verdict," + verdict(r.pass) + '\n';
  return out;
}

std::string to_json(const BellReport& r) {
  json j;
  j["meta"] = meta_block("bell-bound", r.trials, r.seed, r.seed_source);
  j["bounds"]["lhv"] = r.lhv_bound.to_string();
  j["bounds"]["lhv_value"] = r.lhv_bound.to_double();
  j["bounds"]["quantum"] = r.quantum_bound;
  j["bounds"]["perfect"] = r.perfect;
  j["bounds"]["ordering_ok"] = r.ordering_ok;
  j["witness"]["a0"] = r.witness.a0.value();
  j["witness"]["a1"] = r.witness.a1.value();
  j["witness"]["b0"] = r.witness.b0.value();
  j["witness"]["b1"] = r.witness.b1.value();
  j["witness"]["success"] = score_strategy(r.witness).success.to_string();
  json rows = json::array();
  for (const auto& row : r.rows) {
    json entry;
    entry["label"] = row.label;
    entry["rate"] = row.rate;
    entry["expected"] = row.expected;
    entry["tolerance"] = row.tolerance;
    entry["ok"] = row.ok;
    rows.push_back(std::move(entry));
  }
  j["empirical"] = std::move(rows);
  j["verdict"] = verdict(r.pass);
  return dump(j);
}

std::string to_csv(const BellReport& r) {
  std::string out = "row,rate,expected,tolerance,ok\n";
  out += "lhv_bound," + fmt(r.lhv_bound.to_double()) + ',' + fmt(0.75) + ",0,true\n";
  out += "quantum_bound," + fmt(r.quantum_bound) + ',' + fmt(r.quantum_bound) + ",0,true\n";
  out += "perfect," + fmt(r.perfect) + ',' + fmt(1.0) + ",0,true\n";
  for (const auto& row : r.rows) {
    out += row.label + ',' + fmt(row.rate) + ',' + fmt(row.expected) + ',' +
           fmt(row.tolerance) + ',' + (row.ok ? "true" : "false") + '\n';
  }
  return out;
}

std::string to_json(const CounterfactualReport& r) {
  json j;
  j["meta"]["command"] = "counterfactual";
  j["meta"]["format_version"] = 1;
  j["meta"]["input"] = r.input.value();
  json colours = json::array();
  for (const Colour c : r.colours) colours.push_back(to_string(c));
  j["colours"] = std::move(colours);
  j["verdict"] = verdict(r.pass);
  return dump(j);
}

std::string to_csv(const CounterfactualReport& r) {
  std::string out = "key,value\n";
  out += "input," + std::to_string(r.input.value()) + '\n';
  std::string colours;
  for (const Colour c : r.colours) {
    if (!colours.empty()) colours += ';';
    colours += to_string(c);
  }
  out += "colours," + colours + '\n';
  out += "verdict," + verdict(r.pass) + '\n';
  return out;
}

std::string to_json(const AuditRunReport& r) {
  json j;
  j["meta"]["command"] = "audit-locality";
  j["meta"]["format_version"] = 1;
  j["meta"]["seed"] = r.seed;
  j["meta"]["seed_source"] = r.seed_source;
  json scenarios = json::array();
  for (const auto& s : r.scenarios) {
    json entry;
    entry["name"] = s.scenario;
    entry["horizon_step"] = s.horizon_step;
    entry["first_divergence_step"] = s.first_divergence_step;
    entry["post_horizon_divergence"] = s.post_horizon_divergence;
    entry["pass"] = s.pass;
    entry["detail"] = s.detail;
    scenarios.push_back(std::move(entry));
  }
  j["scenarios"] = std::move(scenarios);
  j["verdict"] = verdict(r.pass);
  return dump(j);
}

std::string to_csv(const AuditRunReport& r) {
  std::string out = "scenario,horizon_step,first_divergence_step,post_horizon_divergence,pass\n";
  for (const auto& s : r.scenarios) {
    out += s.scenario + ',' + std::to_string(s.horizon_step) + ',' +
           std::to_string(s.first_divergence_step) + ',' +
           (s.post_horizon_divergence ? "true" : "false") + ',' + (s.pass ? "true" : "false") +
           '\n';
  }
  return out;
}

}  // namespace prbox
