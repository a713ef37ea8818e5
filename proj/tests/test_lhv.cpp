#include <array>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "prbox/lhv.hpp"

namespace prbox {
namespace {

// Oracle used throughout this file: count satisfied pairs straight from the
// constraint definition, bypassing score_strategy.
int oracle_satisfied_count(const DeterministicStrategy& s) {
  int n = 0;
  for (const InputPair& pair : kInputPairs) {
    const Colour a = colour_of(s.alice_answer(pair.x));
    const Colour b = colour_of(s.bob_answer(pair.y));
    if (pr_constraint(pair.x, pair.y, a, b)) ++n;
  }
  return n;
}

TEST_CASE("enumeration lists all 16 strategies in lexicographic order") {
  const std::vector<DeterministicStrategy> all = enumerate_strategies();
  REQUIRE(all.size() == 16);
  for (unsigned i = 0; i < 16; ++i) {
    CHECK(all[i].index() == i);
    CHECK(all[i].a0.value() == ((i >> 3) & 1u));
    CHECK(all[i].a1.value() == ((i >> 2) & 1u));
    CHECK(all[i].b0.value() == ((i >> 1) & 1u));
    CHECK(all[i].b1.value() == (i & 1u));
  }
}

TEST_CASE("score_strategy agrees with the direct constraint count") {
  for (const DeterministicStrategy& s : enumerate_strategies()) {
    const StrategyScore score = score_strategy(s);
    CHECK(score.strategy == s);
    CHECK(score.satisfied_count() == oracle_satisfied_count(s));
    CHECK(score.success == Rational(score.satisfied_count(), 4));
    for (unsigned i = 0; i < 4; ++i) {
      const InputPair& pair = kInputPairs[i];
      const bool expect = pr_constraint(pair.x, pair.y,
                                        colour_of(s.alice_answer(pair.x)),
                                        colour_of(s.bob_answer(pair.y)));
      CHECK(score.satisfied[i] == expect);
    }
  }
}

TEST_CASE("score histogram is exactly eight at 3/4 and eight at 1/4") {
  std::map<Rational, int> histogram;
  for (const DeterministicStrategy& s : enumerate_strategies()) {
    ++histogram[score_strategy(s).success];
  }
  REQUIRE(histogram.size() == 2);
  CHECK(histogram.at(Rational(3, 4)) == 8);
  CHECK(histogram.at(Rational(1, 4)) == 8);
}

TEST_CASE("classical bound is exactly 3/4 with an attaining witness") {
  const BellBound result = bell_bound();
  CHECK(result.bound == Rational(3, 4));
  CHECK(score_strategy(result.witness).success == Rational(3, 4));

  // Oracle: maximum over a fresh enumeration, no strategy at 4/4.
  int best = 0;
  for (const DeterministicStrategy& s : enumerate_strategies()) {
    const int n = oracle_satisfied_count(s);
    CHECK(n < 4);
    if (n > best) best = n;
  }
  CHECK(best == 3);
}

TEST_CASE("each selector value sacrifices exactly its own input pair") {
  for (unsigned selector = 0; selector < 4; ++selector) {
    const StrategyScore score = score_strategy(selected_strategy(selector));
    CHECK(score.satisfied_count() == 3);
    for (unsigned i = 0; i < 4; ++i) {
      CHECK(score.satisfied[i] == (i != selector));
    }
  }
}

TEST_CASE("shared-bit sampler: 6/8 success and 4/8 green for every fixed input pair") {
  for (const InputPair& pair : kInputPairs) {
    int satisfied = 0;
    int alice_green = 0;
    int bob_green = 0;
    for (unsigned hidden = 0; hidden < 8; ++hidden) {
      const SharedRandomness shared{Bit((hidden >> 2) & 1u), Bit((hidden >> 1) & 1u),
                                    Bit(hidden & 1u)};
      const OutcomePair outcome = optimal_lhv_sample(shared, pair.x, pair.y);
      if (pr_constraint(pair.x, pair.y, outcome)) ++satisfied;
      if (outcome.alice == Colour::green) ++alice_green;
      if (outcome.bob == Colour::green) ++bob_green;
    }
    CHECK(satisfied == 6);
    CHECK(alice_green == 4);
    CHECK(bob_green == 4);
  }
}

TEST_CASE("flip complements both outputs and preserves satisfaction") {
  for (const InputPair& pair : kInputPairs) {
    for (unsigned selector = 0; selector < 4; ++selector) {
      const SharedRandomness plain{Bit((selector >> 1) & 1u), Bit(selector & 1u), kZero};
      const SharedRandomness flipped{plain.selector_hi, plain.selector_lo, kOne};
      const OutcomePair a = optimal_lhv_sample(plain, pair.x, pair.y);
      const OutcomePair b = optimal_lhv_sample(flipped, pair.x, pair.y);
      CHECK(b.alice == complement(a.alice));
      CHECK(b.bob == complement(a.bob));
      CHECK(pr_constraint(pair.x, pair.y, a) == pr_constraint(pair.x, pair.y, b));
    }
  }
}

TEST_CASE("draw_shared consumes hi, lo, flip in that order") {
  RandomStream sampler_rng(12, 7, Side::joint, Purpose::shared_bits);
  RandomStream shadow_rng(12, 7, Side::joint, Purpose::shared_bits);
  const SharedRandomness shared = draw_shared(sampler_rng);
  const Bit hi = shadow_rng.next_bool() ? kOne : kZero;
  const Bit lo = shadow_rng.next_bool() ? kOne : kZero;
  const Bit flip = shadow_rng.next_bool() ? kOne : kZero;
  CHECK(shared.selector_hi == hi);
  CHECK(shared.selector_lo == lo);
  CHECK(shared.flip == flip);
  CHECK(sampler_rng.draws_taken() == 3);
}

TEST_CASE("no shared-bit assignment satisfies all four pairs") {
  // The sampler is a mixture of deterministic strategies, so each hidden
  // value must lose at least one input pair.
  for (unsigned hidden = 0; hidden < 8; ++hidden) {
    const SharedRandomness shared{Bit((hidden >> 2) & 1u), Bit((hidden >> 1) & 1u),
                                  Bit(hidden & 1u)};
    int satisfied = 0;
    for (const InputPair& pair : kInputPairs) {
      if (pr_constraint(pair.x, pair.y, optimal_lhv_sample(shared, pair.x, pair.y))) {
        ++satisfied;
      }
    }
    CHECK(satisfied == 3);
  }
}

TEST_CASE("remote prediction matches the constraint table") {
  // Input 0 on either side forces agreement; both inputs 1 force difference.
  const EprPrediction g0 = epr_prediction(kZero, Colour::green);
  CHECK(g0.on_input_0 == Colour::green);
  CHECK(g0.on_input_1 == Colour::green);

  const EprPrediction r0 = epr_prediction(kZero, Colour::red);
  CHECK(r0.on_input_0 == Colour::red);
  CHECK(r0.on_input_1 == Colour::red);

  const EprPrediction g1 = epr_prediction(kOne, Colour::green);
  CHECK(g1.on_input_0 == Colour::green);
  CHECK(g1.on_input_1 == Colour::red);

  const EprPrediction r1 = epr_prediction(kOne, Colour::red);
  CHECK(r1.on_input_0 == Colour::red);
  CHECK(r1.on_input_1 == Colour::green);
}

TEST_CASE("prediction is the unique colour satisfying the constraint") {
  for (unsigned x = 0; x < 2; ++x) {
    for (unsigned a = 0; a < 2; ++a) {
      const Colour alice = colour_of(Bit(a));
      const EprPrediction prediction = epr_prediction(Bit(x), alice);
      for (unsigned y = 0; y < 2; ++y) {
        std::set<Colour> valid;
        for (Colour bob : {Colour::green, Colour::red}) {
          if (pr_constraint(Bit(x), Bit(y), alice, bob)) valid.insert(bob);
        }
        REQUIRE(valid.size() == 1);
        CHECK(prediction.on_input(Bit(y)) == *valid.begin());
      }
    }
  }
}

}  // namespace
}  // namespace prbox
