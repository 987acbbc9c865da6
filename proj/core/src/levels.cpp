#include "centipede/levels.hpp"

#include <algorithm>
#include <cmath>

namespace centipede {

LevelPrior poisson_prior(double tau, int k_max) {
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw ValidationError("poisson prior requires tau >= 0");
  if (k_max < 0) throw ValidationError("poisson prior requires k_max >= 0");

  LevelPrior out;
  out.tau = tau;
  out.probs.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  if (tau == 0.0) {
    out.probs[0] = 1.0;
    return out;
  }
  // log-space to stay finite for large tau or k_max
  std::vector<double> lp(out.probs.size());
  for (int k = 0; k <= k_max; ++k)
    lp[static_cast<std::size_t>(k)] = -tau + k * std::log(tau) - std::lgamma(k + 1.0);
  const double m = *std::max_element(lp.begin(), lp.end());
  double z = 0.0;
  for (double& v : lp) {
    v = std::exp(v - m);
    z += v;
  }
  for (std::size_t k = 0; k < lp.size(); ++k) out.probs[k] = lp[k] / z;
  return out;
}

std::vector<double> truncated_belief(const LevelPrior& prior, int k) {
  if (k < 1 || k > prior.k_max() + 1)
    throw ValidationError("truncated_belief requires 1 <= k <= k_max+1");
  // level 1's belief is structurally degenerate at level 0, independent of
  // the prior's own mass there
  if (k == 1) return {1.0};
  std::vector<double> b(prior.probs.begin(), prior.probs.begin() + k);
  double z = 0.0;
  for (double v : b) z += v;
  if (z <= 0.0) throw ValidationError("truncated_belief: zero mass below k");
  for (double& v : b) v /= z;
  return b;
}

std::vector<double> posterior_levels(const LevelPrior& prior,
                                     const std::vector<double>& reach) {
  if (reach.size() != prior.probs.size())
    throw ValidationError("posterior_levels: reach length must match prior");
  std::vector<double> post(reach.size());
  double z = 0.0;
  for (std::size_t k = 0; k < reach.size(); ++k) {
    if (reach[k] < -1e-15)
      throw ValidationError("posterior_levels: negative reach probability");
    post[k] = prior.probs[k] * std::max(reach[k], 0.0);
    z += post[k];
  }
  if (z <= 0.0) throw ValidationError("posterior_levels: all-zero weight vector");
  for (double& v : post) v /= z;
  return post;
}

}  // namespace centipede
