#pragma once

#include <array>
#include <string>
#include <vector>

#include "centipede/game.hpp"
#include "centipede/levels.hpp"

namespace centipede {

enum class SolverKind { DCH, QDCH, AQRE };

const char* to_string(SolverKind k);
SolverKind solver_kind_from_string(const std::string& s);

// Resolution of exact expected-utility ties under DCH best response.
// PreferPass keeps the latest take node among tied optima and is the
// convention reproducing the published design table; Uniform mixes evenly
// over the argmax set.  Ties only arise on a measure-zero set of c.
enum class TieBreak { PreferPass, Uniform, PreferTake };

struct SolverConfig {
  TieBreak tie_break = TieBreak::PreferPass;
  double tie_tolerance = 1e-12;  // relative, on expected-utility scale

  // logit-equilibrium homotopy / fixed-point controls
  double fp_tolerance = 1e-12;
  int max_iterations = 200000;  // damped sweeps per homotopy rung
  double damping = 0.5;         // under-relaxation weight on the update
  double lambda_start = 1e-3;   // first rung above lambda = 0
  double lambda_factor = 1.4;   // geometric rung spacing
  int max_rungs = 4000;         // total rung budget including bisections
};

// One behavioral layer, per role:
//   DR     probs[r][i] = take probability at role r+1's own node i (0-based)
//   RS/FS  probs[r][s] = probability of strategy index s
using Profile = std::array<std::vector<double>, 2>;

struct Solution {
  SolverKind kind{};
  Form form{};
  int half_stages = 0;  // D
  double tau = 0.0;     // prior parameter (DCH/QDCH), echoed from the request
  double lambda = 0.0;  // QDCH/AQRE
  // DCH/QDCH: one profile per level 0..k_max.  AQRE: a single level-free
  // profile.  Level 0 is exactly uniform in every form.
  std::vector<Profile> levels;
  double residual = 0.0;    // AQRE: final fixed-point residual
  int homotopy_steps = 0;   // AQRE: rungs traversed from lambda = 0

  const Profile& level(int k) const { return levels.at(static_cast<std::size_t>(k)); }
};

// Level-by-level best response to the truncated-belief mixture of lower
// levels.  DR uses Bayes-updated opponent hazards (the opponent's level
// posterior conditions on the passes that let play reach each node), which
// reproduces the exact level-pair mixture.
Solution dch_solve(const CentipedeGame& game, Form form, const LevelPrior& prior,
                   const SolverConfig& cfg = {});

// Same hierarchy with logit instead of argmax responses; own future behavior
// enters expectations at its logit probabilities (agent form).  Approaches
// dch_solve as lambda -> infinity away from ties.
Solution qdch_solve(const CentipedeGame& game, Form form, const LevelPrior& prior,
                    double lambda, const SolverConfig& cfg = {});

// Logit equilibrium: agent form on the game tree for DR, static logit QRE on
// the strategy matrix for RS/FS.  The principal branch is traced from the
// uniform profile at lambda = 0 by geometric homotopy with damped
// fixed-point iteration; rungs bisect on failure.  Throws ConvergenceError
// (with best residual and lambda reached) if the budget runs out.
Solution aqre_solve(const CentipedeGame& game, Form form, double lambda,
                    const SolverConfig& cfg = {});

// Posterior-weighted choice probabilities at every history.
//   DCH/QDCH, DR:    take probability per own node, each role's level
//                    posterior conditioning on its own earlier passes.
//   DCH/QDCH, RS/FS: prior-weighted strategy mixture (empty history).
//   AQRE:            identity pass-through of the level-free profile.
Profile aggregate_choice_probs(const Solution& sol, const LevelPrior& prior);

// Model selector shared by prediction, estimation, and simulation.
struct ModelSpec {
  SolverKind kind = SolverKind::DCH;
  double tau = 1.25;    // DCH/QDCH
  double lambda = 0.0;  // QDCH/AQRE
  int k_max = 50;       // level cap for the Poisson prior
};

Solution solve_model(const CentipedeGame& game, Form form, const ModelSpec& model,
                     const SolverConfig& cfg = {});

}  // namespace centipede
