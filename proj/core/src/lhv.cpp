#include "prbox/lhv.hpp"

#include <stdexcept>

namespace prbox {

std::vector<DeterministicStrategy> enumerate_strategies() {
  std::vector<DeterministicStrategy> out;
  out.reserve(16);
  for (unsigned code = 0; code < 16; ++code) {
    out.push_back(DeterministicStrategy{Bit((code >> 3) & 1u), Bit((code >> 2) & 1u),
                                        Bit((code >> 1) & 1u), Bit(code & 1u)});
  }
  return out;
}

StrategyScore score_strategy(const DeterministicStrategy& s) {
  StrategyScore score{s, {}, Rational(0)};
  int hits = 0;
  for (unsigned i = 0; i < kInputPairs.size(); ++i) {
    const auto [x, y] = kInputPairs[i];
    const bool ok = (s.alice_answer(x) ^ s.bob_answer(y)) == (x & y);
    score.satisfied[i] = ok;
    hits += ok ? 1 : 0;
  }
  score.success = Rational(hits, 4);
  return score;
}

BellBound bell_bound() {
  BellBound best{Rational(0), DeterministicStrategy{}};
  for (const auto& s : enumerate_strategies()) {
    const Rational value = score_strategy(s).success;
    if (value > best.bound) {
      best = BellBound{value, s};
    }
  }
  return best;
}

SharedRandomness draw_shared(RandomStream& rng) {
  const Bit hi(rng.next_bool() ? 1u : 0u);
  const Bit lo(rng.next_bool() ? 1u : 0u);
  const Bit flip(rng.next_bool() ? 1u : 0u);
  return SharedRandomness{hi, lo, flip};
}

DeterministicStrategy selected_strategy(unsigned selector) {
  // One strategy per jettisoned input pair, each verified by score_strategy
  // to fail exactly that pair.
  switch (selector) {
    case 0: return DeterministicStrategy{kZero, kOne, kOne, kZero};    // fails (0,0)
    case 1: return DeterministicStrategy{kZero, kZero, kZero, kOne};   // fails (0,1)
    case 2: return DeterministicStrategy{kZero, kOne, kZero, kZero};   // fails (1,0)
    case 3: return DeterministicStrategy{kZero, kZero, kZero, kZero};  // fails (1,1)
    default: throw std::invalid_argument("selected_strategy: selector must be < 4");
  }
}

OutcomePair optimal_lhv_sample(const SharedRandomness& shared, Bit x, Bit y) {
  const DeterministicStrategy s = selected_strategy(shared.selector());
  const Bit a = s.alice_answer(x) ^ shared.flip;
  const Bit b = s.bob_answer(y) ^ shared.flip;
  return OutcomePair{colour_of(a), colour_of(b)};
}

EprPrediction epr_prediction(Bit alice_input, Colour alice_colour) {
  const Bit a = bit_of(alice_colour);
  return EprPrediction{colour_of(a ^ (alice_input & kZero)),
                       colour_of(a ^ (alice_input & kOne))};
}

}  // namespace prbox
