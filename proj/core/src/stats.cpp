#include "centipede/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include <boost/math/distributions/chi_squared.hpp>

namespace centipede {

namespace {

// mid-ranks (1-based; ties share the average of their positions)
std::vector<double> midranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[order[t]] = rank;
    i = j + 1;
  }
  return r;
}

// sum of (t^3 - t) over tie groups
double tie_term(const std::vector<double>& v) {
  std::map<double, int> groups;
  for (double x : v) ++groups[x];
  double s = 0.0;
  for (auto& [val, t] : groups) s += static_cast<double>(t) * t * t - t;
  return s;
}

double chi2_upper_tail(double x, int df) {
  if (x <= 0.0) return 1.0;
  const boost::math::chi_squared dist(static_cast<double>(df));
  return boost::math::cdf(boost::math::complement(dist, x));
}

double two_sided_normal_p(double z) {
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

// two-sided tail with continuity correction, statistic `s` around mean `mu`
double normal_two_sided(double s, double mu, double var) {
  if (var <= 0.0) return 1.0;
  const double dev = std::max(0.0, std::fabs(s - mu) - 0.5);
  return std::min(1.0, two_sided_normal_p(dev / std::sqrt(var)));
}

constexpr double kExactSlack = 1e-9;

}  // namespace

MatchedPanel matched_terminal_nodes(const Dataset& data) {
  data.validate();
  // group rows by (pair, game); std::map keeps output order canonical
  std::map<std::pair<std::string, std::string>, std::vector<const Observation*>> groups;
  for (const auto& row : data.rows)
    groups[{row.pair_id, row.game_id}].push_back(&row);

  MatchedPanel panel;
  for (const auto& [key, rows] : groups) {
    const auto& [pair_id, game_id] = key;
    const int D = data.games.at(game_id).stages / 2;

    std::optional<int> dr_terminal;
    int dr_pass_count = 0;
    std::optional<int> rs_m1, rs_m2, fs_m1, fs_m2;
    for (const Observation* row : rows) {
      switch (row->form) {
        case Form::DirectResponse:
          if (row->take)
            dr_terminal = dr_terminal ? std::min(*dr_terminal, row->node) : row->node;
          else
            ++dr_pass_count;
          break;
        case Form::ReducedStrategy:
          (row->role == 1 ? rs_m1 : rs_m2) = row->strategy;
          break;
        case Form::FullStrategy:
          (row->role == 1 ? fs_m1 : fs_m2) = fs_to_rs(row->strategy, D);
          break;
      }
    }
    if (!dr_terminal && dr_pass_count == 2 * D) dr_terminal = 2 * D + 1;
    if (!dr_terminal || !rs_m1 || !rs_m2 || !fs_m1 || !fs_m2) {
      ++panel.skipped;
      continue;
    }
    panel.pair_ids.push_back(pair_id);
    panel.game_ids.push_back(game_id);
    panel.cells.push_back({*dr_terminal, terminal_node(*rs_m1, *rs_m2, D),
                           terminal_node(*fs_m1, *fs_m2, D)});
  }
  return panel;
}

TestResult friedman(const std::vector<std::vector<double>>& panel) {
  const std::size_t n = panel.size();
  if (n < 2) throw ValidationError("friedman requires at least 2 rows");
  const std::size_t k = panel[0].size();
  if (k < 2) throw ValidationError("friedman requires at least 2 columns");
  for (const auto& row : panel)
    if (row.size() != k) throw ValidationError("friedman panel is ragged");

  std::vector<double> colsum(k, 0.0);
  double ties = 0.0;
  for (const auto& row : panel) {
    const auto r = midranks(row);
    for (std::size_t j = 0; j < k; ++j) colsum[j] += r[j];
    ties += tie_term(row);
  }
  const double kk = static_cast<double>(k), nn = static_cast<double>(n);
  const double denom = nn * kk * (kk + 1.0) - ties / (kk - 1.0);
  if (denom <= 1e-12)  // every row fully tied
    return {0.0, 1.0, true};
  double num = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double d = colsum[j] - nn * (kk + 1.0) / 2.0;
    num += d * d;
  }
  const double Q = 12.0 * num / denom;
  return {Q, chi2_upper_tail(Q, static_cast<int>(k) - 1), false};
}

TestResult wilcoxon_signed_rank(const std::vector<double>& x,
                                const std::vector<double>& y) {
  if (x.size() != y.size())
    throw ValidationError("wilcoxon_signed_rank requires equal-length samples");
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) d.push_back(x[i] - y[i]);
  const std::size_t n = d.size();
  if (n == 0) return {0.0, 1.0, true};  // all differences zero

  std::vector<double> ad(n);
  for (std::size_t i = 0; i < n; ++i) ad[i] = std::fabs(d[i]);
  const auto r = midranks(ad);
  double W = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0.0) W += r[i];

  if (n <= 25) {
    // exact permutation distribution of W+ conditional on the observed
    // ranks; doubled ranks are integers, so a subset-sum table is exact
    std::vector<long long> r2(n);
    long long total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      r2[i] = std::llround(2.0 * r[i]);
      total2 += r2[i];
    }
    std::vector<double> dp(static_cast<std::size_t>(total2) + 1, 0.0);
    dp[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (long long s = total2; s >= r2[i]; --s)
        dp[static_cast<std::size_t>(s)] += dp[static_cast<std::size_t>(s - r2[i])];
    const double mu2 = 0.5 * static_cast<double>(total2);
    const double dev = std::fabs(2.0 * W - mu2);
    double count = 0.0, all = 0.0;
    for (long long s = 0; s <= total2; ++s) {
      all += dp[static_cast<std::size_t>(s)];
      if (std::fabs(static_cast<double>(s) - mu2) >= dev - kExactSlack)
        count += dp[static_cast<std::size_t>(s)];
    }
    return {W, count / all, false};
  }

  const double nn = static_cast<double>(n);
  const double mu = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term(ad) / 48.0;
  return {W, normal_two_sided(W, mu, var), false};
}

TestResult rank_sum(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || y.empty())
    throw ValidationError("rank_sum requires two non-empty samples");
  const std::size_t n = x.size(), m = y.size(), N = n + m;
  std::vector<double> pooled(x);
  pooled.insert(pooled.end(), y.begin(), y.end());
  const auto r = midranks(pooled);
  double Rx = 0.0;
  for (std::size_t i = 0; i < n; ++i) Rx += r[i];
  const double U = Rx - static_cast<double>(n) * (static_cast<double>(n) + 1.0) / 2.0;

  if (N <= 26) {
    // exact conditional distribution of the chosen-sample rank sum
    std::vector<long long> r2(N);
    long long total2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      r2[i] = std::llround(2.0 * r[i]);
      total2 += r2[i];
    }
    // dp[c][s]: subsets of size c with doubled rank sum s
    std::vector<std::vector<double>> dp(
        n + 1, std::vector<double>(static_cast<std::size_t>(total2) + 1, 0.0));
    dp[0][0] = 1.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t c = std::min(i + 1, n); c >= 1; --c)
        for (long long s = total2; s >= r2[i]; --s)
          dp[c][static_cast<std::size_t>(s)] += dp[c - 1][static_cast<std::size_t>(s - r2[i])];
    const double base = static_cast<double>(n) * (static_cast<double>(n) + 1.0);
    const double muU2 = static_cast<double>(n) * static_cast<double>(m);
    const double dev = std::fabs(2.0 * U - muU2);
    double count = 0.0, all = 0.0;
    for (long long s = 0; s <= total2; ++s) {
      const double mass = dp[n][static_cast<std::size_t>(s)];
      if (mass == 0.0) continue;
      all += mass;
      if (std::fabs(static_cast<double>(s) - base - muU2) >= dev - kExactSlack)
        count += mass;
    }
    return {U, count / all, false};
  }

  const double nn = static_cast<double>(n), mm = static_cast<double>(m),
               NN = static_cast<double>(N);
  const double mu = nn * mm / 2.0;
  const double var =
      nn * mm / 12.0 * ((NN + 1.0) - tie_term(pooled) / (NN * (NN - 1.0)));
  if (var <= 0.0) return {U, 1.0, true};  // all pooled values identical
  return {U, normal_two_sided(U, mu, var), false};
}

double ks_two_sample_pvalue(double S, int n, int m) {
  if (!(S >= 0.0 && S <= 1.0)) throw ValidationError("ks p-value requires S in [0,1]");
  if (n < 1 || m < 1) throw ValidationError("ks p-value requires n, m >= 1");
  const double lambda =
      std::sqrt(static_cast<double>(n) * m / (static_cast<double>(n) + m)) * S;
  if (lambda < 0.01) return 1.0;  // series limit; deviation from 1 is ~0 here
  double p = 0.0;
  double sign = 1.0;
  for (int j = 1;; ++j) {
    const double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
    p += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

double bonferroni(double p, int comparisons) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("bonferroni requires p in [0,1]");
  if (comparisons < 1) throw ValidationError("bonferroni requires comparisons >= 1");
  return std::min(1.0, static_cast<double>(comparisons) * p);
}

}  // namespace centipede
