#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "centipede/data.hpp"
#include "centipede/solvers.hpp"

namespace centipede {

struct FitResult {
  SolverKind kind{};
  std::optional<double> tau;     // DCH/QDCH
  std::optional<double> lambda;  // QDCH/AQRE
  double log_likelihood = 0.0;
  int n_obs = 0;
  bool boundary = false;  // optimum pinned at a search-box edge
  std::optional<double> se_tau, se_lambda;
  int bootstrap_replicates = 0;
  std::uint64_t bootstrap_seed = 0;
  int bootstrap_failures = 0;
};

struct FitConfig {
  int k_max = 50;
  // coarse-grid search boxes (grids are log-spaced)
  double tau_lo = 0.05, tau_hi = 12.0;
  double lambda_lo = 1e-4, lambda_hi = 1.0;
  int grid_1d = 25;  // one-parameter grid points
  int grid_2d = 10;  // two-parameter grid points per axis
  double rel_tol = 1e-6;
  int max_evals = 20000;
  SolverConfig solver{};
  int threads = 1;
};

// Sum over observations of the log of the model's aggregated choice
// probability: DR nodes use the posterior over the actor's level given that
// actor's own earlier passes; RS/FS strategies use the prior-weighted
// mixture.  Each (game, form) is solved once per call.
double loglik(SolverKind kind, const ModelSpec& params, const Dataset& data,
              const SolverConfig& cfg = {});

// Per-unit log-likelihood contributions in dataset order, with DR rows
// aggregated to terminal-node path units (the unit of observation used by
// the Vuong test).  RS/FS rows are their own units.
std::vector<double> per_unit_loglik(SolverKind kind, const ModelSpec& params,
                                    const Dataset& data,
                                    const SolverConfig& cfg = {});

// Maximum likelihood: coarse log-spaced grid, then derivative-free local
// refinement (golden-section for one parameter, Nelder-Mead for two) to
// relative tolerance cfg.rel_tol.  Returns the best optimum across starts.
FitResult fit(SolverKind kind, const Dataset& data, const FitConfig& cfg = {});

struct BootstrapResult {
  std::optional<double> se_tau, se_lambda;
  int replicates = 0;
  int failures = 0;  // replicates that failed to refit (excluded)
  std::uint64_t seed = 0;
};

// Resample-with-replacement standard errors, warm-started at the original
// estimates and refined locally only.  DR data resample whole (pair, game)
// paths; RS/FS resample strategy rows; resampling is stratified by form.
// Replicate r draws from the stream (seed, r): fixed seed gives bit-identical
// results under any thread count.
BootstrapResult bootstrap_se(SolverKind kind, const Dataset& data,
                             const FitResult& warm, int B = 1000,
                             std::uint64_t seed = 0, const FitConfig& cfg = {});

// Likelihood-ratio test: statistic 2(ll_full - ll_restricted), chi-square
// upper tail with df degrees of freedom.
std::pair<double, double> lrt(double ll_restricted, double ll_full, int df);

// Vuong non-nested comparison on per-unit log-likelihoods:
// V = sum(m_i) / (sqrt(n) * sd(m_i)), two-sided normal p.
std::pair<double, double> vuong(const std::vector<double>& ll_a,
                                const std::vector<double>& ll_b);

}  // namespace centipede
