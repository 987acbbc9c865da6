#pragma once

#include <array>
#include <string>
#include <vector>

#include "centipede/data.hpp"

namespace centipede {

// Terminal node per (pair, game) under each elicitation: columns DR, RS, FS.
// DR is read off the observed path; RS/FS are computed from the pair's
// elicited strategies (FS reduced first).
struct MatchedPanel {
  std::vector<std::string> pair_ids;
  std::vector<std::string> game_ids;
  std::vector<std::array<int, 3>> cells;  // [row] = {DR, RS, FS}
  int skipped = 0;  // pair-games missing any of the three records
};

MatchedPanel matched_terminal_nodes(const Dataset& data);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // e.g. all-tied input
};

// Friedman test on an n-by-k panel: within-row mid-ranks, tie-corrected Q,
// p from chi-square with k-1 df.  Fully tied rows make the correction
// denominator vanish; that degenerate case reports Q = 0, p = 1.
TestResult friedman(const std::vector<std::vector<double>>& panel);

// Wilcoxon signed-rank, two-sided.  Zero differences are dropped; tied
// absolute differences get mid-ranks.  Small samples (n <= 25 after drops)
// use the exact conditional permutation distribution of W+ given the
// observed ranks; larger samples use the tie-corrected normal approximation
// with continuity correction.
TestResult wilcoxon_signed_rank(const std::vector<double>& x,
                                const std::vector<double>& y);

// Mann-Whitney rank-sum, two-sided, mid-ranks on ties.  Exact conditional
// distribution of U for n+m <= 26, else tie-corrected normal approximation
// with continuity correction.
TestResult rank_sum(const std::vector<double>& x, const std::vector<double>& y);

// Two-sample Kolmogorov-Smirnov p-value from a sup-norm distance:
// lambda = sqrt(nm/(n+m)) * S, p = 2 * sum_j (-1)^{j-1} exp(-2 j^2 lambda^2),
// summed to |term| < 1e-12 and clamped to [0, 1].
double ks_two_sample_pvalue(double S, int n, int m);

// min(1, comparisons * p)
double bonferroni(double p, int comparisons);

}  // namespace centipede
