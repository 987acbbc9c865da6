#pragma once

#include <string>
#include <vector>

#include "centipede/solvers.hpp"

namespace centipede {

// Probability of the game ending at each node 1..2D+1.
struct TerminalDistribution {
  std::vector<double> probs;
};

std::vector<double> terminal_cdf(const TerminalDistribution& d);

// Exact enumeration over level pairs (k1, k2) weighted prior(k1)*prior(k2);
// within a pair the node distribution follows from the two players'
// behavioral (DR) or strategy-mixture (RS/FS) probabilities.  AQRE skips the
// level sum.  The solution must match the game and form.
TerminalDistribution terminal_distribution(const CentipedeGame& game, Form form,
                                           const Solution& sol,
                                           const LevelPrior& prior);

// max_j |CDF1(j) - CDF2(j)|, final node included (where both CDFs are 1)
double supnorm(const TerminalDistribution& a, const TerminalDistribution& b);

struct ScanPoint {
  double c = 0.0;
  double supnorm = 0.0;      // meaningful only when status == "ok"
  std::string status = "ok"; // or the per-point error message
};

struct DesignScan {
  Family family{};
  ModelSpec model{};
  Form form_a{}, form_b{};
  std::vector<ScanPoint> points;  // in grid order
};

// S(c) over a grid: solve both forms, compare terminal CDFs.  Out-of-range c
// is recorded per point, not a global abort.  Points are independent and may
// be computed on `threads` workers; output order always matches grid order.
DesignScan design_scan(Family family, const ModelSpec& model, Form form_a,
                       Form form_b, const std::vector<double>& c_grid, int D,
                       Rescale rescale, const SolverConfig& cfg = {},
                       int threads = 1, double pi = 2.0);

}  // namespace centipede
