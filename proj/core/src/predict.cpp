#include "centipede/predict.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace centipede {

std::vector<double> terminal_cdf(const TerminalDistribution& d) {
  std::vector<double> cdf(d.probs.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < d.probs.size(); ++j) {
    acc += d.probs[j];
    cdf[j] = acc;
  }
  return cdf;
}

namespace {

// node distribution given one behavioral/mixture layer per role
void accumulate_pair(const CentipedeGame& game, Form form, const Profile& a,
                     const Profile& b, double w, std::vector<double>& dist) {
  const int D = game.half_stages();
  if (form == Form::DirectResponse) {
    double reach = w;
    for (int j = 1; j <= 2 * D; ++j) {
      const int mv = mover(j);
      const auto& probs = mv == 1 ? a[0] : b[1];
      const double pt = probs[static_cast<std::size_t>((j - mv) / 2)];
      dist[static_cast<std::size_t>(j - 1)] += reach * pt;
      reach *= 1.0 - pt;
    }
    dist[static_cast<std::size_t>(2 * D)] += reach;
    return;
  }
  const auto& m1 = a[0];
  const auto& m2 = b[1];
  const auto red = [&](int s) { return form == Form::ReducedStrategy ? s : fs_to_rs(s, D); };
  for (std::size_t s1 = 0; s1 < m1.size(); ++s1)
    for (std::size_t s2 = 0; s2 < m2.size(); ++s2) {
      const int t = terminal_node(red(static_cast<int>(s1)), red(static_cast<int>(s2)), D);
      dist[static_cast<std::size_t>(t - 1)] += w * m1[s1] * m2[s2];
    }
}

}  // namespace

TerminalDistribution terminal_distribution(const CentipedeGame& game, Form form,
                                           const Solution& sol,
                                           const LevelPrior& prior) {
  if (sol.form != form)
    throw ValidationError("terminal_distribution: solution form does not match");
  if (sol.half_stages != game.half_stages())
    throw ValidationError("terminal_distribution: solution was computed for a different game size");

  TerminalDistribution d;
  d.probs.assign(static_cast<std::size_t>(game.terminal_count()), 0.0);

  if (sol.kind == SolverKind::AQRE) {
    accumulate_pair(game, form, sol.levels[0], sol.levels[0], 1.0, d.probs);
    return d;
  }
  if (prior.probs.size() != sol.levels.size())
    throw ValidationError("terminal_distribution: prior size does not match solution levels");
  for (std::size_t k1 = 0; k1 < prior.probs.size(); ++k1)
    for (std::size_t k2 = 0; k2 < prior.probs.size(); ++k2)
      accumulate_pair(game, form, sol.levels[k1], sol.levels[k2],
                      prior.probs[k1] * prior.probs[k2], d.probs);
  return d;
}

double supnorm(const TerminalDistribution& a, const TerminalDistribution& b) {
  if (a.probs.size() != b.probs.size())
    throw ValidationError("supnorm: distributions have different lengths");
  double s = 0.0, ca = 0.0, cb = 0.0;
  for (std::size_t j = 0; j < a.probs.size(); ++j) {
    ca += a.probs[j];
    cb += b.probs[j];
    s = std::max(s, std::fabs(ca - cb));
  }
  return s;
}

DesignScan design_scan(Family family, const ModelSpec& model, Form form_a,
                       Form form_b, const std::vector<double>& c_grid, int D,
                       Rescale rescale, const SolverConfig& cfg, int threads,
                       double pi) {
  if (c_grid.empty()) throw ValidationError("design_scan: empty c grid");
  DesignScan scan;
  scan.family = family;
  scan.model = model;
  scan.form_a = form_a;
  scan.form_b = form_b;
  scan.points.resize(c_grid.size());

  const auto eval_point = [&](std::size_t i) {
    ScanPoint& pt = scan.points[i];
    pt.c = c_grid[i];
    try {
      GameSpec spec;
      spec.family = family;
      spec.c = c_grid[i];
      spec.pi = pi;
      spec.stages = 2 * D;
      spec.rescale = rescale;
      const CentipedeGame game = make_game(spec);
      const LevelPrior prior = poisson_prior(
          model.kind == SolverKind::AQRE ? 0.0 : model.tau, model.k_max);
      const Solution sa = solve_model(game, form_a, model, cfg);
      const Solution sb = solve_model(game, form_b, model, cfg);
      pt.supnorm = supnorm(terminal_distribution(game, form_a, sa, prior),
                           terminal_distribution(game, form_b, sb, prior));
      pt.status = "ok";
    } catch (const std::exception& e) {
      pt.supnorm = std::nan("");
      pt.status = e.what();
    }
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(c_grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < c_grid.size(); ++i) eval_point(i);
    return scan;
  }
  std::atomic<std::size_t> cursor{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = cursor.fetch_add(1); i < c_grid.size(); i = cursor.fetch_add(1))
        eval_point(i);
    });
  for (auto& th : pool) th.join();
  return scan;
}

}  // namespace centipede
