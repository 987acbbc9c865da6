#pragma once

#include <vector>

#include "centipede/error.hpp"

namespace centipede {

// Prior over cognitive levels 0..k_max: Poisson(tau) truncated at k_max and
// renormalized (not lump-capped), so probs is exactly a distribution.
struct LevelPrior {
  double tau = 0.0;
  std::vector<double> probs;  // size k_max+1, sums to 1

  int k_max() const { return static_cast<int>(probs.size()) - 1; }
};

LevelPrior poisson_prior(double tau, int k_max);

// A level-k player's belief about the opponent: the prior truncated strictly
// below k, renormalized.  Defined for k >= 1; size is k.
std::vector<double> truncated_belief(const LevelPrior& prior, int k);

// Bayes: posterior(k) proportional to prior(k) * reach(k).  `reach` holds
// each level's probability of the conditioning event; level 0 mixes fully,
// so the normalizer can only vanish on invalid input.
std::vector<double> posterior_levels(const LevelPrior& prior,
                                     const std::vector<double>& reach);

}  // namespace centipede
