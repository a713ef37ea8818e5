#pragma once

#include <cmath>
#include <stdexcept>

#include "prbox/bit.hpp"
#include "prbox/random_stream.hpp"

namespace prbox {

// Outcome pair forced by Alice's draw. Her bit is drawn uniformly and Bob's
// is the unique one satisfying the defining constraint, so each side's
// marginal is exactly unbiased while the joint correlation is perfect.
constexpr OutcomePair ideal_pr_outcome(Bit x, Bit y, Bit alice_draw) {
  const Bit a = alice_draw;
  const Bit b = a ^ (x & y);
  return OutcomePair{colour_of(a), colour_of(b)};
}

// Nonlocal reference oracle: reads both inputs. Ground truth for tests and
// the stateless harness models, never used inside the branching world.
inline OutcomePair ideal_pr_sample(Bit x, Bit y, RandomStream& rng) {
  return ideal_pr_outcome(x, y, Bit(rng.next_bool() ? 1u : 0u));
}

struct NoisyBoxSpec {
  // Probability that one use of the pair satisfies the defining constraint.
  double p = 1.0;
};

inline void validate(const NoisyBoxSpec& spec) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw std::invalid_argument("NoisyBoxSpec: p must lie in [0, 1]");
  }
}

// Draw a uniformly, then satisfy or flip b. The opposite correlation is
// produced with probability 1-p; both marginals stay exactly uniform.
// Draw order is fixed (a first, then the working coin) for reproducibility.
inline OutcomePair noisy_pr_sample(const NoisyBoxSpec& spec, Bit x, Bit y, RandomStream& rng) {
  validate(spec);
  const Bit a = Bit(rng.next_bool() ? 1u : 0u);
  const bool works = rng.bernoulli(spec.p);
  const Bit b = a ^ (x & y) ^ (works ? kZero : kOne);
  return OutcomePair{colour_of(a), colour_of(b)};
}

// Best success rate any quantum strategy reaches on the same game,
// (2 + sqrt 2)/4 = cos^2(pi/8). A constant here, not a derivation.
inline double quantum_bound_p() { return (2.0 + std::sqrt(2.0)) / 4.0; }

}  // namespace prbox
