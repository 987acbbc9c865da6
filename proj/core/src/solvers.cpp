#include "centipede/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace centipede {

const char* to_string(SolverKind k) {
  switch (k) {
    case SolverKind::DCH: return "dch";
    case SolverKind::QDCH: return "qdch";
    case SolverKind::AQRE: return "aqre";
  }
  return "?";
}

SolverKind solver_kind_from_string(const std::string& s) {
  if (s == "dch") return SolverKind::DCH;
  if (s == "qdch") return SolverKind::QDCH;
  if (s == "aqre") return SolverKind::AQRE;
  throw ValidationError("unknown model '" + s + "' (expected dch|qdch|aqre)");
}

namespace {

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> softmax(const std::vector<double>& eu, double lambda) {
  std::vector<double> out(eu.size());
  double m = -1e308;
  for (double v : eu) m = std::max(m, lambda * v);
  double z = 0.0;
  for (std::size_t s = 0; s < eu.size(); ++s) {
    out[s] = std::exp(lambda * eu[s] - m);
    z += out[s];
  }
  for (double& v : out) v /= z;
  return out;
}

// Argmax mixture under the configured tie policy.  `cls` maps a strategy to
// its reduced class (identity for RS), so FS ties resolve class-wise and the
// winning class mixes uniformly -- keeping the FS solution a lift of RS.
template <class ClassOf>
std::vector<double> argmax_mix(const std::vector<double>& eu, ClassOf cls,
                               const SolverConfig& cfg) {
  double best = *std::max_element(eu.begin(), eu.end());
  const double slack = cfg.tie_tolerance * std::max(1.0, std::fabs(best));
  std::vector<int> members;
  for (int s = 0; s < static_cast<int>(eu.size()); ++s)
    if (eu[static_cast<std::size_t>(s)] >= best - slack) members.push_back(s);

  std::vector<double> out(eu.size(), 0.0);
  if (cfg.tie_break == TieBreak::Uniform) {
    for (int s : members) out[static_cast<std::size_t>(s)] = 1.0 / static_cast<double>(members.size());
    return out;
  }
  int winner = cls(members.front());
  for (int s : members) {
    const int c = cls(s);
    if (cfg.tie_break == TieBreak::PreferPass ? c > winner : c < winner) winner = c;
  }
  int n = 0;
  for (int s : members)
    if (cls(s) == winner) ++n;
  for (int s : members)
    if (cls(s) == winner) out[static_cast<std::size_t>(s)] = 1.0 / n;
  return out;
}

Profile uniform_profile(const CentipedeGame& game, Form form) {
  const int D = game.half_stages();
  Profile p;
  for (int r = 0; r < 2; ++r) {
    if (form == Form::DirectResponse)
      p[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(D), 0.5);
    else {
      const int n = form == Form::ReducedStrategy ? rs_count(D) : fs_count(D);
      p[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(n), 1.0 / n);
    }
  }
  return p;
}

// One hierarchy level's DR response.  `take` holds all lower levels' take
// probabilities; belief is the level's truncated prior over them.  Opponent
// hazards are aggregated with sequential Bayes updates (conditioning on the
// passes that let play reach each node), which reproduces the exact
// level-pair mixture by the chain rule.  lambda < 0 means exact best
// response (DCH); otherwise agent-form logit.
Profile dr_level_response(const CentipedeGame& game,
                          const std::vector<Profile>& take,
                          const std::vector<double>& belief, double lambda,
                          const SolverConfig& cfg) {
  const int D = game.half_stages();
  Profile prof;
  for (int role = 1; role <= 2; ++role) {
    const int opp = 3 - role;
    std::vector<double> w = belief;
    std::vector<double> haz(static_cast<std::size_t>(D));
    for (int i = 0; i < D; ++i) {
      double num = 0.0, den = 0.0;
      for (std::size_t m = 0; m < w.size(); ++m) {
        num += w[m] * take[m][static_cast<std::size_t>(opp - 1)][static_cast<std::size_t>(i)];
        den += w[m];
      }
      haz[static_cast<std::size_t>(i)] = num / den;
      for (std::size_t m = 0; m < w.size(); ++m)
        w[m] *= 1.0 - take[m][static_cast<std::size_t>(opp - 1)][static_cast<std::size_t>(i)];
    }

    std::vector<double> mine(static_cast<std::size_t>(D));
    double V = game.payoff(role, 2 * D + 1);
    for (int j = 2 * D; j >= 1; --j) {
      if (mover(j) == role) {
        const int i = (j - role) / 2;
        const double ut = game.payoff(role, j), uc = V;
        double p;
        if (lambda >= 0.0) {
          p = logistic(lambda * (ut - uc));
        } else {
          const double slack =
              cfg.tie_tolerance * std::max({1.0, std::fabs(ut), std::fabs(uc)});
          if (ut > uc + slack)
            p = 1.0;
          else if (uc > ut + slack)
            p = 0.0;
          else
            p = cfg.tie_break == TieBreak::PreferPass
                    ? 0.0
                    : (cfg.tie_break == TieBreak::PreferTake ? 1.0 : 0.5);
        }
        mine[static_cast<std::size_t>(i)] = p;
        V = p * ut + (1.0 - p) * uc;
      } else {
        const double h = haz[static_cast<std::size_t>((j - opp) / 2)];
        V = h * game.payoff(role, j) + (1.0 - h) * V;
      }
    }
    prof[static_cast<std::size_t>(role - 1)] = std::move(mine);
  }
  return prof;
}

// Shared DCH/QDCH hierarchy walk; lambda < 0 selects exact best response.
Solution hierarchy_solve(const CentipedeGame& game, Form form,
                         const LevelPrior& prior, double lambda,
                         const SolverConfig& cfg) {
  const int D = game.half_stages();
  Solution sol;
  sol.kind = lambda < 0.0 ? SolverKind::DCH : SolverKind::QDCH;
  sol.form = form;
  sol.half_stages = D;
  sol.tau = prior.tau;
  sol.lambda = std::max(lambda, 0.0);
  sol.levels.reserve(prior.probs.size());
  sol.levels.push_back(uniform_profile(game, form));

  std::vector<std::vector<std::vector<double>>> u;  // [role-1][s][s'] own-vs-opp
  if (form != Form::DirectResponse) {
    auto [u1, u2] = strategy_payoff_matrix(game, form);
    // transpose player 2's matrix so both are indexed [own][opp]
    std::vector u2t(u2.size(), std::vector<double>(u2.size()));
    for (std::size_t a = 0; a < u2.size(); ++a)
      for (std::size_t b = 0; b < u2.size(); ++b) u2t[b][a] = u2[a][b];
    u = {std::move(u1), std::move(u2t)};
  }
  const auto cls = [&](int s) {
    return form == Form::FullStrategy ? fs_to_rs(s, D) : s;
  };

  for (int k = 1; k <= prior.k_max(); ++k) {
    const auto belief = truncated_belief(prior, k);
    if (form == Form::DirectResponse) {
      sol.levels.push_back(dr_level_response(game, sol.levels, belief, lambda, cfg));
      continue;
    }
    Profile prof;
    for (int r = 0; r < 2; ++r) {
      const std::size_t n = u[static_cast<std::size_t>(r)].size();
      std::vector<double> oppbar(n, 0.0);
      for (std::size_t m = 0; m < belief.size(); ++m)
        for (std::size_t s = 0; s < n; ++s)
          oppbar[s] += belief[m] * sol.levels[m][static_cast<std::size_t>(1 - r)][s];
      std::vector<double> eu(n, 0.0);
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t)
          eu[s] += u[static_cast<std::size_t>(r)][s][t] * oppbar[t];
      prof[static_cast<std::size_t>(r)] =
          lambda < 0.0 ? argmax_mix(eu, cls, cfg) : softmax(eu, lambda);
    }
    sol.levels.push_back(std::move(prof));
  }
  return sol;
}

}  // namespace

Solution dch_solve(const CentipedeGame& game, Form form, const LevelPrior& prior,
                   const SolverConfig& cfg) {
  return hierarchy_solve(game, form, prior, -1.0, cfg);
}

Solution qdch_solve(const CentipedeGame& game, Form form, const LevelPrior& prior,
                    double lambda, const SolverConfig& cfg) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ValidationError("qdch_solve requires lambda >= 0");
  return hierarchy_solve(game, form, prior, lambda, cfg);
}

namespace {

// Logit fixed-point map at a given lambda.  DR: agent-form on the tree.
// RS/FS: static logit response on the strategy matrices.
struct QreMap {
  const CentipedeGame& game;
  Form form;
  std::vector<std::vector<std::vector<double>>> u;  // as in hierarchy_solve

  explicit QreMap(const CentipedeGame& g, Form f) : game(g), form(f) {
    if (form != Form::DirectResponse) {
      auto [u1, u2] = strategy_payoff_matrix(game, form);
      std::vector u2t(u2.size(), std::vector<double>(u2.size()));
      for (std::size_t a = 0; a < u2.size(); ++a)
        for (std::size_t b = 0; b < u2.size(); ++b) u2t[b][a] = u2[a][b];
      u = {std::move(u1), std::move(u2t)};
    }
  }

  Profile apply(const Profile& p, double lambda) const {
    const int D = game.half_stages();
    Profile out;
    if (form == Form::DirectResponse) {
      // continuation value of each role from every node onward
      const int T = 2 * D + 1;
      std::array<std::vector<double>, 2> W;
      for (int r = 1; r <= 2; ++r) {
        auto& w = W[static_cast<std::size_t>(r - 1)];
        w.assign(static_cast<std::size_t>(T) + 1, 0.0);
        w[static_cast<std::size_t>(T)] = game.payoff(r, T);
        for (int j = 2 * D; j >= 1; --j) {
          const int mv = mover(j);
          const double pt = p[static_cast<std::size_t>(mv - 1)][static_cast<std::size_t>((j - mv) / 2)];
          w[static_cast<std::size_t>(j)] =
              pt * game.payoff(r, j) + (1.0 - pt) * w[static_cast<std::size_t>(j + 1)];
        }
      }
      for (int r = 0; r < 2; ++r) out[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(D), 0.0);
      for (int j = 1; j <= 2 * D; ++j) {
        const int mv = mover(j);
        const double ut = game.payoff(mv, j);
        const double uc = W[static_cast<std::size_t>(mv - 1)][static_cast<std::size_t>(j + 1)];
        out[static_cast<std::size_t>(mv - 1)][static_cast<std::size_t>((j - mv) / 2)] =
            logistic(lambda * (ut - uc));
      }
      return out;
    }
    for (int r = 0; r < 2; ++r) {
      const std::size_t n = u[static_cast<std::size_t>(r)].size();
      std::vector<double> eu(n, 0.0);
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t)
          eu[s] += u[static_cast<std::size_t>(r)][s][t] * p[static_cast<std::size_t>(1 - r)][t];
      out[static_cast<std::size_t>(r)] = softmax(eu, lambda);
    }
    return out;
  }
};

double profile_distance(const Profile& a, const Profile& b) {
  double d = 0.0;
  for (int r = 0; r < 2; ++r)
    for (std::size_t i = 0; i < a[static_cast<std::size_t>(r)].size(); ++i)
      d = std::max(d, std::fabs(a[static_cast<std::size_t>(r)][i] - b[static_cast<std::size_t>(r)][i]));
  return d;
}

}  // namespace

Solution aqre_solve(const CentipedeGame& game, Form form, double lambda,
                    const SolverConfig& cfg) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ValidationError("aqre_solve requires lambda >= 0");

  Solution sol;
  sol.kind = SolverKind::AQRE;
  sol.form = form;
  sol.half_stages = game.half_stages();
  sol.lambda = lambda;

  Profile prof = uniform_profile(game, form);
  if (lambda == 0.0) {
    sol.levels = {std::move(prof)};  // exact: logit at lambda 0 is uniform
    return sol;
  }

  const QreMap map(game, form);
  const auto iterate = [&](Profile start, double lam, double damping,
                           double& residual) {
    // a contraction improves far faster than 1% per 3000 sweeps; anything
    // slower cannot reach tolerance within any budget, so bail early (this
    // is how rungs at a fold of the logit branch fail cheaply)
    double best = std::numeric_limits<double>::infinity();
    int last_improvement = 0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
      Profile next = map.apply(start, lam);
      residual = profile_distance(start, next);
      if (residual < cfg.fp_tolerance) return std::pair{std::move(start), true};
      if (residual < 0.99 * best) {
        best = residual;
        last_improvement = it;
      } else if (it - last_improvement >= 3000) {
        break;
      }
      for (int r = 0; r < 2; ++r)
        for (std::size_t i = 0; i < start[static_cast<std::size_t>(r)].size(); ++i)
          start[static_cast<std::size_t>(r)][i] =
              (1.0 - damping) * start[static_cast<std::size_t>(r)][i] +
              damping * next[static_cast<std::size_t>(r)][i];
    }
    return std::pair{std::move(start), false};
  };

  double lam_good = 0.0;
  double next_lam = std::min(cfg.lambda_start, lambda);
  double damping = cfg.damping;
  double worst_accepted = 0.0, last_residual = 0.0;
  int steps = 0;
  while (lam_good < lambda) {
    if (++steps > cfg.max_rungs)
      throw ConvergenceError(
          "aqre_solve: homotopy rung budget exhausted (best residual " +
              std::to_string(std::max(worst_accepted, last_residual)) +
              " at lambda " + std::to_string(lam_good) + ")",
          std::max(worst_accepted, last_residual), lam_good);
    double residual = 0.0;
    auto [cand, ok] = iterate(prof, next_lam, damping, residual);
    last_residual = residual;
    if (ok) {
      prof = std::move(cand);
      lam_good = next_lam;
      worst_accepted = std::max(worst_accepted, residual);
      next_lam = std::min(lambda, lam_good * cfg.lambda_factor);
    } else {
      const double gap = next_lam - lam_good;
      const double ref = std::max(lam_good, cfg.lambda_start);
      if (gap > 1e-4 * ref) {
        next_lam = lam_good + 0.5 * gap;  // bisect the rung and retry
      } else if (damping > 1e-3) {
        // tiny steps still fail: the damped map oscillates at this lambda
        // (sharp logit), so under-relax harder and resume normal stepping
        damping *= 0.5;
        next_lam = std::min(
            lambda, std::max(lam_good * cfg.lambda_factor, cfg.lambda_start));
      } else {
        throw ConvergenceError(
            "aqre_solve: fixed point failed to converge near lambda=" +
                std::to_string(next_lam) + " (residual " +
                std::to_string(residual) + ")",
            residual, lam_good);
      }
    }
  }

  sol.levels = {std::move(prof)};
  sol.residual = worst_accepted;  // largest accepted-rung residual
  sol.homotopy_steps = steps;
  return sol;
}

Profile aggregate_choice_probs(const Solution& sol, const LevelPrior& prior) {
  if (sol.kind == SolverKind::AQRE) return sol.levels.at(0);
  if (prior.probs.size() != sol.levels.size())
    throw ValidationError("aggregate_choice_probs: prior size does not match solution levels");

  Profile out;
  if (sol.form == Form::DirectResponse) {
    const std::size_t D = sol.levels[0][0].size();
    for (int r = 0; r < 2; ++r) {
      std::vector<double> w = prior.probs;
      auto& probs = out[static_cast<std::size_t>(r)];
      probs.assign(D, 0.0);
      for (std::size_t i = 0; i < D; ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
          num += w[k] * sol.levels[k][static_cast<std::size_t>(r)][i];
          den += w[k];
        }
        probs[i] = num / den;
        for (std::size_t k = 0; k < w.size(); ++k)
          w[k] *= 1.0 - sol.levels[k][static_cast<std::size_t>(r)][i];
      }
    }
    return out;
  }
  for (int r = 0; r < 2; ++r) {
    const std::size_t n = sol.levels[0][static_cast<std::size_t>(r)].size();
    out[static_cast<std::size_t>(r)].assign(n, 0.0);
    for (std::size_t k = 0; k < prior.probs.size(); ++k)
      for (std::size_t s = 0; s < n; ++s)
        out[static_cast<std::size_t>(r)][s] += prior.probs[k] * sol.levels[k][static_cast<std::size_t>(r)][s];
  }
  return out;
}

Solution solve_model(const CentipedeGame& game, Form form, const ModelSpec& model,
                     const SolverConfig& cfg) {
  switch (model.kind) {
    case SolverKind::DCH:
      return dch_solve(game, form, poisson_prior(model.tau, model.k_max), cfg);
    case SolverKind::QDCH:
      return qdch_solve(game, form, poisson_prior(model.tau, model.k_max),
                        model.lambda, cfg);
    case SolverKind::AQRE:
      return aqre_solve(game, form, model.lambda, cfg);
  }
  throw ValidationError("unhandled solver kind");
}

}  // namespace centipede
