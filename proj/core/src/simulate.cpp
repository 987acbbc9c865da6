#include "centipede/simulate.hpp"

#include <cmath>

#include "centipede/rng.hpp"

namespace centipede {

namespace {

int draw_index(SplitMix64& rng, const std::vector<double>& probs) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;  // guard against rounding
}

std::string subject_id(int role, int idx) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%d-%03d", role, idx + 1);
  return buf;
}

}  // namespace

Dataset simulate(const SimConfig& cfg) {
  if (cfg.games.empty()) throw ValidationError("simulate: no games configured");
  if (cfg.forms.empty()) throw ValidationError("simulate: no forms configured");
  const int n = cfg.subjects_per_role;
  if (n < static_cast<int>(cfg.games.size()))
    throw ValidationError(
        "simulate: round-robin without repetition needs subjects_per_role >= number of games");

  Dataset out;
  std::vector<CentipedeGame> games;
  games.reserve(cfg.games.size());
  for (const auto& ng : cfg.games) {
    games.push_back(make_game(ng.spec));
    out.games.emplace(ng.id, ng.spec);
  }

  // one solve per (game, form)
  std::vector<std::vector<Solution>> sols(cfg.games.size());
  for (std::size_t g = 0; g < cfg.games.size(); ++g)
    for (const Form form : cfg.forms)
      sols[g].push_back(solve_model(games[g], form, cfg.model, cfg.solver));

  const bool leveled = cfg.model.kind != SolverKind::AQRE;
  const LevelPrior prior =
      leveled ? poisson_prior(cfg.model.tau, cfg.model.k_max) : LevelPrior{0.0, {1.0}};

  // subject levels: stream (seed, role, subject)
  std::array<std::vector<int>, 2> level;
  for (int r = 0; r < 2; ++r) {
    level[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(n), 0);
    if (!leveled) continue;
    for (int i = 0; i < n; ++i) {
      SplitMix64 rng = rng_stream(cfg.seed, static_cast<std::uint64_t>(r + 1),
                                  static_cast<std::uint64_t>(i));
      level[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] =
          draw_index(rng, prior.probs);
    }
  }

  const auto layer = [&](const Solution& sol, int role, int lv) -> const std::vector<double>& {
    const Profile& p = leveled ? sol.level(lv) : sol.levels[0];
    return p[static_cast<std::size_t>(role - 1)];
  };

  Observation base;
  base.session_id = cfg.session_id;
  for (int i = 0; i < n; ++i) {
    for (std::size_t g = 0; g < cfg.games.size(); ++g) {
      const int j = (i + static_cast<int>(g)) % n;  // player 2's index this game
      const CentipedeGame& game = games[g];
      const int D = game.half_stages();
      base.pair_id = subject_id(1, i) + "x" + subject_id(2, j);
      base.game_id = cfg.games[g].id;
      const std::array<int, 2> lv{level[0][static_cast<std::size_t>(i)],
                                  level[1][static_cast<std::size_t>(j)]};
      const std::array<int, 2> subj{i, j};

      for (std::size_t fi = 0; fi < cfg.forms.size(); ++fi) {
        const Form form = cfg.forms[fi];
        const Solution& sol = sols[g][fi];
        base.form = form;
        // choice stream per (seed, role, subject, form-tag, game)
        std::array<SplitMix64, 2> rng;
        for (int r = 0; r < 2; ++r)
          rng[static_cast<std::size_t>(r)] = rng_stream(
              cfg.seed, static_cast<std::uint64_t>(r + 1),
              static_cast<std::uint64_t>(subj[static_cast<std::size_t>(r)]),
              0x10 + static_cast<std::uint64_t>(form),
              static_cast<std::uint64_t>(g));

        if (form == Form::DirectResponse) {
          for (int node = 1; node <= 2 * D; ++node) {
            const int r = mover(node);
            const auto& take = layer(sol, r, lv[static_cast<std::size_t>(r - 1)]);
            const double pt = take[static_cast<std::size_t>((node - r) / 2)];
            const bool takes = rng[static_cast<std::size_t>(r - 1)].uniform() < pt;
            base.subject_id = subject_id(r, subj[static_cast<std::size_t>(r - 1)]);
            base.role = r;
            base.is_node = true;
            base.node = node;
            base.take = takes;
            base.strategy = 0;
            out.rows.push_back(base);
            if (takes) break;
          }
        } else {
          for (int r = 1; r <= 2; ++r) {
            const auto& mix = layer(sol, r, lv[static_cast<std::size_t>(r - 1)]);
            base.subject_id = subject_id(r, subj[static_cast<std::size_t>(r - 1)]);
            base.role = r;
            base.is_node = false;
            base.node = 0;
            base.take = false;
            base.strategy = draw_index(rng[static_cast<std::size_t>(r - 1)], mix);
            out.rows.push_back(base);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace centipede
