#pragma once

#include <array>
#include <vector>

#include "prbox/bit.hpp"
#include "prbox/random_stream.hpp"
#include "prbox/rational.hpp"

namespace prbox {

struct InputPair {
  Bit x;
  Bit y;

  friend constexpr bool operator==(const InputPair&, const InputPair&) = default;
};

// Canonical lexicographic order of the four input pairs. Every per-pair
// array below is indexed in this order.
inline constexpr std::array<InputPair, 4> kInputPairs = {
    InputPair{kZero, kZero}, InputPair{kZero, kOne},
    InputPair{kOne, kZero}, InputPair{kOne, kOne}};

constexpr unsigned pair_index(Bit x, Bit y) { return x.value() * 2u + y.value(); }

// Four hidden bits fixing both parties' answers in advance.
struct DeterministicStrategy {
  Bit a0, a1, b0, b1;

  constexpr Bit alice_answer(Bit x) const { return x.value() ? a1 : a0; }
  constexpr Bit bob_answer(Bit y) const { return y.value() ? b1 : b0; }
  constexpr unsigned index() const {
    return a0.value() * 8u + a1.value() * 4u + b0.value() * 2u + b1.value();
  }

  friend constexpr bool operator==(const DeterministicStrategy&,
                                   const DeterministicStrategy&) = default;
};

struct StrategyScore {
  DeterministicStrategy strategy;
  std::array<bool, 4> satisfied;  // kInputPairs order
  Rational success;               // |satisfied| / 4, exact

  constexpr int satisfied_count() const {
    int n = 0;
    for (bool s : satisfied) n += s ? 1 : 0;
    return n;
  }
};

// All 16 strategies, lexicographic on (a0, a1, b0, b1).
std::vector<DeterministicStrategy> enumerate_strategies();

StrategyScore score_strategy(const DeterministicStrategy& s);

struct BellBound {
  Rational bound;  // 3/4
  DeterministicStrategy witness;
};

// Exhaustive maximum over the 16 strategies, with a witness attaining it.
BellBound bell_bound();

// The three pre-shared bits of the optimal classical box. The selector
// names the one input pair the chosen strategy sacrifices; flip complements
// both outputs to keep the marginals unbiased.
struct SharedRandomness {
  Bit selector_hi, selector_lo, flip;

  constexpr unsigned selector() const {
    return selector_hi.value() * 2u + selector_lo.value();
  }
};

// Draw order: selector_hi, selector_lo, flip.
SharedRandomness draw_shared(RandomStream& rng);

// Strategy sacrificing exactly kInputPairs[selector]; fails that pair only.
DeterministicStrategy selected_strategy(unsigned selector);

OutcomePair optimal_lhv_sample(const SharedRandomness& shared, Bit x, Bit y);

// Bob's colour for each input he might press, forced by the constraint once
// Alice's input and colour are fixed.
struct EprPrediction {
  Colour on_input_0;
  Colour on_input_1;

  constexpr Colour on_input(Bit y) const { return y.value() ? on_input_1 : on_input_0; }

  friend constexpr bool operator==(const EprPrediction&, const EprPrediction&) = default;
};

EprPrediction epr_prediction(Bit alice_input, Colour alice_colour);

}  // namespace prbox
