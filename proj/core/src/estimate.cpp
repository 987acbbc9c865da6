#include "centipede/estimate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "centipede/rng.hpp"

namespace centipede {

void Dataset::validate() const {
  struct PathCheck {
    std::map<int, bool> nodes;  // node -> take
  };
  std::map<std::pair<std::string, std::string>, PathCheck> paths;

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Observation& row = rows[i];
    const auto where = [&] { return "observation " + std::to_string(i + 1) + ": "; };
    const auto it = games.find(row.game_id);
    if (it == games.end())
      throw ValidationError(where() + "unknown game_id '" + row.game_id + "'");
    const int D = it->second.stages / 2;
    if (row.role != 1 && row.role != 2)
      throw ValidationError(where() + "role must be 1 or 2");
    switch (row.form) {
      case Form::DirectResponse: {
        if (!row.is_node)
          throw ValidationError(where() + "dr rows must be node records");
        if (row.node < 1 || row.node > 2 * D)
          throw ValidationError(where() + "node out of range");
        if (mover(row.node) != row.role)
          throw ValidationError(where() + "node parity does not match role");
        auto& pc = paths[{row.pair_id, row.game_id}];
        if (pc.nodes.count(row.node))
          throw ValidationError(where() + "duplicate node in path");
        pc.nodes[row.node] = row.take;
        break;
      }
      case Form::ReducedStrategy:
        if (row.is_node)
          throw ValidationError(where() + "rs rows must be strategy records");
        if (row.strategy < 0 || row.strategy >= rs_count(D))
          throw ValidationError(where() + "reduced strategy out of range");
        break;
      case Form::FullStrategy:
        if (row.is_node)
          throw ValidationError(where() + "fs rows must be strategy records");
        if (row.strategy < 0 || row.strategy >= fs_count(D))
          throw ValidationError(where() + "full strategy out of range");
        break;
    }
  }
  for (const auto& [key, pc] : paths) {
    int expected = 1, takes = 0, last = 0;
    for (const auto& [node, take] : pc.nodes) {  // std::map: ascending
      if (node != expected)
        throw ValidationError("pair '" + key.first + "' game '" + key.second +
                              "': path skips node " + std::to_string(expected));
      ++expected;
      takes += take ? 1 : 0;
      last = node;
    }
    if (takes > 1 || (takes == 1 && !pc.nodes.at(last)))
      throw ValidationError("pair '" + key.first + "' game '" + key.second +
                            "': take must be unique and terminal");
  }
}

namespace {

double chi2_upper_tail(double x, int df) {
  if (x <= 0.0) return 1.0;
  const boost::math::chi_squared dist(static_cast<double>(df));
  return boost::math::cdf(boost::math::complement(dist, x));
}

constexpr int form_slot(Form f) {
  return f == Form::DirectResponse ? 0 : (f == Form::ReducedStrategy ? 1 : 2);
}

// Dataset collapsed to sufficient statistics: per (game, form), counts per
// (role, history/strategy, action).  Likelihood cost becomes independent of
// the raw row count, and bootstrap replicates are count rebuilds.
struct Collapsed {
  struct Cell {
    int game = -1;
    Form form{};
    int width = 0;  // slots in this cell
  };
  // DR cell layout: ((role-1)*D + own_node)*2 + (take?1:0)
  // RS/FS layout:   (role-1)*n_strats + strategy
  std::vector<std::string> game_ids;
  std::vector<CentipedeGame> games;
  std::vector<Cell> cells;
  std::vector<std::vector<int>> cell_of;  // [game][form_slot] -> cell index or -1

  struct Unit {
    int cell = 0;
    std::vector<int> slots;  // one increment each
  };
  std::array<std::vector<int>, 3> units_by_form;  // indices into `units`
  std::vector<Unit> units;                        // in dataset first-encounter order

  std::vector<double> base_counts;  // flat across cells
  std::vector<int> cell_offset;
  int n_obs = 0;

  double* counts_at(std::vector<double>& buf, int cell) {
    return buf.data() + cell_offset[static_cast<std::size_t>(cell)];
  }
};

Collapsed collapse(const Dataset& data) {
  data.validate();
  Collapsed c;
  std::map<std::string, int> game_index;
  for (const auto& [id, spec] : data.games) {
    game_index[id] = static_cast<int>(c.games.size());
    c.game_ids.push_back(id);
    c.games.push_back(make_game(spec));
  }
  c.cell_of.assign(c.games.size(), std::vector<int>(3, -1));

  const auto cell_for = [&](int g, Form f) {
    int& idx = c.cell_of[static_cast<std::size_t>(g)][static_cast<std::size_t>(form_slot(f))];
    if (idx < 0) {
      const int D = c.games[static_cast<std::size_t>(g)].half_stages();
      const int width = f == Form::DirectResponse
                            ? 2 * D * 2
                            : 2 * (f == Form::ReducedStrategy ? rs_count(D) : fs_count(D));
      idx = static_cast<int>(c.cells.size());
      c.cells.push_back({g, f, width});
    }
    return idx;
  };

  std::map<std::pair<std::string, std::string>, int> path_unit;
  for (const Observation& row : data.rows) {
    const int g = game_index.at(row.game_id);
    const int D = c.games[static_cast<std::size_t>(g)].half_stages();
    const int cell = cell_for(g, row.form);
    int slot;
    if (row.form == Form::DirectResponse) {
      const int i = (row.node - row.role) / 2;
      slot = ((row.role - 1) * D + i) * 2 + (row.take ? 1 : 0);
    } else {
      const int n = row.form == Form::ReducedStrategy ? rs_count(D) : fs_count(D);
      slot = (row.role - 1) * n + row.strategy;
    }
    if (row.form == Form::DirectResponse) {
      auto [it, fresh] = path_unit.try_emplace({row.pair_id, row.game_id},
                                               static_cast<int>(c.units.size()));
      if (fresh) {
        c.units.push_back({cell, {}});
        c.units_by_form[0].push_back(it->second);
      }
      c.units[static_cast<std::size_t>(it->second)].slots.push_back(slot);
    } else {
      c.units_by_form[static_cast<std::size_t>(form_slot(row.form))].push_back(
          static_cast<int>(c.units.size()));
      c.units.push_back({cell, {slot}});
    }
    ++c.n_obs;
  }

  c.cell_offset.resize(c.cells.size());
  int total = 0;
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    c.cell_offset[i] = total;
    total += c.cells[i].width;
  }
  c.base_counts.assign(static_cast<std::size_t>(total), 0.0);
  for (const auto& unit : c.units)
    for (int slot : unit.slots)
      c.base_counts[static_cast<std::size_t>(c.cell_offset[static_cast<std::size_t>(unit.cell)] + slot)] += 1.0;
  return c;
}

// ln choice probability per slot, one solve per (game, form) cell
std::vector<double> log_prob_tables(const Collapsed& c, SolverKind kind,
                                    const ModelSpec& params, const SolverConfig& cfg) {
  ModelSpec m = params;
  m.kind = kind;
  const LevelPrior prior =
      kind == SolverKind::AQRE ? LevelPrior{0.0, {1.0}} : poisson_prior(m.tau, m.k_max);

  std::vector<double> logp(c.base_counts.size(), 0.0);
  for (std::size_t ci = 0; ci < c.cells.size(); ++ci) {
    const auto& cell = c.cells[ci];
    const CentipedeGame& game = c.games[static_cast<std::size_t>(cell.game)];
    const Solution sol = solve_model(game, cell.form, m, cfg);
    const Profile agg = aggregate_choice_probs(sol, prior);
    double* out = logp.data() + c.cell_offset[ci];
    if (cell.form == Form::DirectResponse) {
      const int D = game.half_stages();
      for (int r = 0; r < 2; ++r)
        for (int i = 0; i < D; ++i) {
          const double pt = agg[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
          out[(r * D + i) * 2 + 0] = std::log1p(-pt);
          out[(r * D + i) * 2 + 1] = std::log(pt);
        }
    } else {
      const std::size_t n = agg[0].size();
      for (int r = 0; r < 2; ++r)
        for (std::size_t s = 0; s < n; ++s)
          out[static_cast<std::size_t>(r) * n + s] =
              std::log(agg[static_cast<std::size_t>(r)][s]);
    }
  }
  return logp;
}

double ll_of_counts(const std::vector<double>& counts, const std::vector<double>& logp) {
  double ll = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0.0) continue;
    if (!std::isfinite(logp[i]))
      throw ConvergenceError("zero-probability observation in likelihood", 0.0, 0.0);
    ll += counts[i] * logp[i];
  }
  return ll;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] =
        std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  return g;
}

// golden-section maximizer on [lo, hi] in log space
template <class F>
double golden_max(F&& f, double lo, double hi, double rel_tol, int max_iter) {
  constexpr double invphi = 0.6180339887498949;
  double a = std::log(lo), b = std::log(hi);
  double c1 = b - invphi * (b - a), c2 = a + invphi * (b - a);
  double f1 = f(std::exp(c1)), f2 = f(std::exp(c2));
  for (int it = 0; it < max_iter && (b - a) > rel_tol; ++it) {
    if (f1 >= f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - invphi * (b - a);
      f1 = f(std::exp(c1));
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + invphi * (b - a);
      f2 = f(std::exp(c2));
    }
  }
  return std::exp(0.5 * (a + b));
}

// Nelder-Mead maximizer in 2-d log-parameter space
template <class F>
std::array<double, 2> nelder_mead_max(F&& f, std::array<double, 2> start,
                                      double step, double tol, int max_evals) {
  using Pt = std::array<double, 2>;
  struct Vertex {
    Pt x;
    double fx;
  };
  int evals = 0;
  const auto eval = [&](const Pt& x) {
    ++evals;
    return f(x);
  };
  std::array<Vertex, 3> simplex;
  simplex[0] = {start, eval(start)};
  simplex[1] = {{start[0] + step, start[1]}, 0.0};
  simplex[1].fx = eval(simplex[1].x);
  simplex[2] = {{start[0], start[1] + step}, 0.0};
  simplex[2].fx = eval(simplex[2].x);

  const auto order = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.fx > b.fx; });
  };
  order();
  while (evals < max_evals) {
    const double size = std::max(
        std::max(std::fabs(simplex[1].x[0] - simplex[0].x[0]),
                 std::fabs(simplex[1].x[1] - simplex[0].x[1])),
        std::max(std::fabs(simplex[2].x[0] - simplex[0].x[0]),
                 std::fabs(simplex[2].x[1] - simplex[0].x[1])));
    if (size < tol) break;
    const Pt centroid{0.5 * (simplex[0].x[0] + simplex[1].x[0]),
                      0.5 * (simplex[0].x[1] + simplex[1].x[1])};
    const auto blend = [&](double t) {
      return Pt{centroid[0] + t * (centroid[0] - simplex[2].x[0]),
                centroid[1] + t * (centroid[1] - simplex[2].x[1])};
    };
    const Pt xr = blend(1.0);
    const double fr = eval(xr);
    if (fr > simplex[0].fx) {
      const Pt xe = blend(2.0);
      const double fe = eval(xe);
      simplex[2] = fe > fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr > simplex[1].fx) {
      simplex[2] = {xr, fr};
    } else {
      const Pt xc = blend(-0.5);
      const double fc = eval(xc);
      if (fc > simplex[2].fx) {
        simplex[2] = {xc, fc};
      } else {
        for (int i = 1; i < 3; ++i) {
          simplex[static_cast<std::size_t>(i)].x = {
              0.5 * (simplex[0].x[0] + simplex[static_cast<std::size_t>(i)].x[0]),
              0.5 * (simplex[0].x[1] + simplex[static_cast<std::size_t>(i)].x[1])};
          simplex[static_cast<std::size_t>(i)].fx = eval(simplex[static_cast<std::size_t>(i)].x);
        }
      }
    }
    order();
  }
  return simplex[0].x;
}

struct Objective {
  const Collapsed& c;
  SolverKind kind;
  const FitConfig& cfg;
  const std::vector<double>* counts;  // defaults to base counts

  double operator()(double tau, double lambda) const {
    ModelSpec m;
    m.kind = kind;
    m.tau = tau;
    m.lambda = lambda;
    m.k_max = cfg.k_max;
    try {
      const auto logp = log_prob_tables(c, kind, m, cfg.solver);
      return ll_of_counts(counts ? *counts : c.base_counts, logp);
    } catch (const ConvergenceError&) {
      return -1e300;  // steer the search away from non-convergent points
    }
  }
};

struct LocalFit {
  double tau = 0.0, lambda = 0.0, ll = -1e300;
  bool boundary = false;
};

bool near_edge(double v, double lo, double hi) {
  return v <= lo * (1.0 + 1e-5) || v >= hi * (1.0 - 1e-5);
}

// local refinement around a start point (used by fit and by bootstrap replicates)
LocalFit refine(const Objective& obj, SolverKind kind, const FitConfig& cfg,
                double tau0, double lambda0, bool local_only) {
  LocalFit out;
  const double span = local_only ? 2.0 : 4.0;
  if (kind == SolverKind::DCH) {
    const double lo = std::max(cfg.tau_lo, tau0 / span), hi = std::min(cfg.tau_hi, tau0 * span);
    out.tau = golden_max([&](double t) { return obj(t, 0.0); }, lo, hi, cfg.rel_tol, 200);
    out.ll = obj(out.tau, 0.0);
    out.boundary = near_edge(out.tau, cfg.tau_lo, cfg.tau_hi);
  } else if (kind == SolverKind::AQRE) {
    const double lo = std::max(cfg.lambda_lo, lambda0 / span),
                 hi = std::min(cfg.lambda_hi, lambda0 * span);
    out.lambda = golden_max([&](double l) { return obj(0.0, l); }, lo, hi, cfg.rel_tol, 200);
    out.ll = obj(0.0, out.lambda);
    out.boundary = near_edge(out.lambda, cfg.lambda_lo, cfg.lambda_hi);
  } else {
    const auto boxed = [&](const std::array<double, 2>& x) {
      const double tau = std::exp(x[0]), lambda = std::exp(x[1]);
      if (tau < cfg.tau_lo || tau > cfg.tau_hi || lambda < cfg.lambda_lo ||
          lambda > cfg.lambda_hi)
        return -1e300;
      return obj(tau, lambda);
    };
    const auto best = nelder_mead_max(boxed, {std::log(tau0), std::log(lambda0)},
                                      local_only ? 0.15 : 0.35, cfg.rel_tol,
                                      local_only ? 250 : 600);
    out.tau = std::exp(best[0]);
    out.lambda = std::exp(best[1]);
    out.ll = obj(out.tau, out.lambda);
    out.boundary = near_edge(out.tau, cfg.tau_lo, cfg.tau_hi) ||
                   near_edge(out.lambda, cfg.lambda_lo, cfg.lambda_hi);
  }
  return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> cursor{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

double loglik(SolverKind kind, const ModelSpec& params, const Dataset& data,
              const SolverConfig& cfg) {
  const Collapsed c = collapse(data);
  const auto logp = log_prob_tables(c, kind, params, cfg);
  return ll_of_counts(c.base_counts, logp);
}

std::vector<double> per_unit_loglik(SolverKind kind, const ModelSpec& params,
                                    const Dataset& data, const SolverConfig& cfg) {
  const Collapsed c = collapse(data);
  const auto logp = log_prob_tables(c, kind, params, cfg);
  std::vector<double> out;
  out.reserve(c.units.size());
  for (const auto& unit : c.units) {
    double ll = 0.0;
    for (int slot : unit.slots) {
      const double lp = logp[static_cast<std::size_t>(
          c.cell_offset[static_cast<std::size_t>(unit.cell)] + slot)];
      if (!std::isfinite(lp))
        throw ConvergenceError("zero-probability observation in likelihood", 0.0, 0.0);
      ll += lp;
    }
    out.push_back(ll);
  }
  return out;
}

FitResult fit(SolverKind kind, const Dataset& data, const FitConfig& cfg) {
  if (data.rows.empty()) throw ValidationError("fit requires a non-empty dataset");
  const Collapsed c = collapse(data);
  const Objective obj{c, kind, cfg, nullptr};

  FitResult res;
  res.kind = kind;
  res.n_obs = c.n_obs;

  if (kind == SolverKind::QDCH) {
    const auto taus = log_grid(cfg.tau_lo, cfg.tau_hi, cfg.grid_2d);
    const auto lambdas = log_grid(cfg.lambda_lo, cfg.lambda_hi, cfg.grid_2d);
    struct GridPt {
      double tau, lambda, ll;
    };
    std::vector<GridPt> grid(taus.size() * lambdas.size());
    parallel_for(static_cast<int>(grid.size()), cfg.threads, [&](int i) {
      const double tau = taus[static_cast<std::size_t>(i) / lambdas.size()];
      const double lambda = lambdas[static_cast<std::size_t>(i) % lambdas.size()];
      grid[static_cast<std::size_t>(i)] = {tau, lambda, obj(tau, lambda)};
    });
    std::vector<std::size_t> order(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return grid[a].ll > grid[b].ll; });
    LocalFit best;
    for (int s = 0; s < 3 && s < static_cast<int>(order.size()); ++s) {
      const auto& g = grid[order[static_cast<std::size_t>(s)]];
      const LocalFit lf = refine(obj, kind, cfg, g.tau, g.lambda, false);
      if (lf.ll > best.ll) best = lf;
    }
    // the refined optimum can never fall below the best grid start
    const auto& g0 = grid[order[0]];
    if (g0.ll > best.ll) best = {g0.tau, g0.lambda, g0.ll, false};
    res.tau = best.tau;
    res.lambda = best.lambda;
    res.log_likelihood = best.ll;
    res.boundary = best.boundary;
    return res;
  }

  const bool is_tau = kind == SolverKind::DCH;
  const auto pts = log_grid(is_tau ? cfg.tau_lo : cfg.lambda_lo,
                            is_tau ? cfg.tau_hi : cfg.lambda_hi, cfg.grid_1d);
  std::vector<double> lls(pts.size());
  parallel_for(static_cast<int>(pts.size()), cfg.threads, [&](int i) {
    const double v = pts[static_cast<std::size_t>(i)];
    lls[static_cast<std::size_t>(i)] = is_tau ? obj(v, 0.0) : obj(0.0, v);
  });
  std::size_t bi = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (lls[i] > lls[bi]) bi = i;
  // refine inside the bracket formed by the best grid point's neighbors
  const double lo = pts[bi > 0 ? bi - 1 : 0];
  const double hi = pts[bi + 1 < pts.size() ? bi + 1 : pts.size() - 1];
  const double arg = golden_max(
      [&](double v) { return is_tau ? obj(v, 0.0) : obj(0.0, v); },
      std::min(lo, hi * 0.999999), std::max(hi, lo * 1.000001), cfg.rel_tol, 200);
  const double ll_arg = is_tau ? obj(arg, 0.0) : obj(0.0, arg);
  const bool grid_better = lls[bi] > ll_arg;
  const double est = grid_better ? pts[bi] : arg;
  res.log_likelihood = grid_better ? lls[bi] : ll_arg;
  if (is_tau) {
    res.tau = est;
    res.boundary = near_edge(est, cfg.tau_lo, cfg.tau_hi);
  } else {
    res.lambda = est;
    res.boundary = near_edge(est, cfg.lambda_lo, cfg.lambda_hi);
  }
  return res;
}

BootstrapResult bootstrap_se(SolverKind kind, const Dataset& data,
                             const FitResult& warm, int B, std::uint64_t seed,
                             const FitConfig& cfg) {
  if (B <= 0) throw ValidationError("bootstrap_se requires B >= 1");
  if (warm.kind != kind)
    throw ValidationError("bootstrap_se: warm start was fit for a different model");
  const Collapsed c = collapse(data);
  const double tau0 = warm.tau.value_or(1.0);
  const double lambda0 = warm.lambda.value_or(0.05);

  struct Rep {
    double tau = 0.0, lambda = 0.0;
    bool ok = false;
  };
  std::vector<Rep> reps(static_cast<std::size_t>(B));

  parallel_for(B, cfg.threads, [&](int r) {
    SplitMix64 rng = rng_stream(seed, 0xB007u, static_cast<std::uint64_t>(r));
    std::vector<double> counts(c.base_counts.size(), 0.0);
    for (const auto& pool : c.units_by_form) {
      const std::size_t nf = pool.size();
      for (std::size_t i = 0; i < nf; ++i) {
        const auto& unit = c.units[static_cast<std::size_t>(pool[static_cast<std::size_t>(rng.below(nf))])];
        for (int slot : unit.slots)
          counts[static_cast<std::size_t>(
              c.cell_offset[static_cast<std::size_t>(unit.cell)] + slot)] += 1.0;
      }
    }
    const Objective obj{c, kind, cfg, &counts};
    try {
      const LocalFit lf = refine(obj, kind, cfg, tau0, lambda0, true);
      if (lf.ll <= -1e299) return;
      reps[static_cast<std::size_t>(r)] = {lf.tau, lf.lambda, true};
    } catch (const std::exception&) {
      // failed replicate: recorded below, excluded from the SE
    }
  });

  BootstrapResult out;
  out.replicates = B;
  out.seed = seed;
  const auto sd_of = [&](auto get) -> std::optional<double> {
    std::vector<double> v;
    for (const auto& rep : reps)
      if (rep.ok) v.push_back(get(rep));
    if (v.size() < 2) return std::nullopt;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
  };
  for (const auto& rep : reps)
    if (!rep.ok) ++out.failures;
  if (kind != SolverKind::AQRE) out.se_tau = sd_of([](const Rep& r) { return r.tau; });
  if (kind != SolverKind::DCH) out.se_lambda = sd_of([](const Rep& r) { return r.lambda; });
  return out;
}

std::pair<double, double> lrt(double ll_restricted, double ll_full, int df) {
  if (df < 1) throw ValidationError("lrt requires df >= 1");
  if (ll_full < ll_restricted - 1e-9)
    throw ValidationError("lrt: full model log-likelihood is below the restricted one");
  const double stat = std::max(0.0, 2.0 * (ll_full - ll_restricted));
  return {stat, chi2_upper_tail(stat, df)};
}

std::pair<double, double> vuong(const std::vector<double>& ll_a,
                                const std::vector<double>& ll_b) {
  if (ll_a.size() != ll_b.size())
    throw ValidationError("vuong requires equal-length vectors");
  const std::size_t n = ll_a.size();
  if (n < 2) throw ValidationError("vuong requires n >= 2");
  std::vector<double> m(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = ll_a[i] - ll_b[i];
    mean += m[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : m) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (static_cast<double>(n) - 1.0));
  if (!(sd > 0.0))
    throw ValidationError("vuong: zero variance of pointwise differences (degenerate)");
  const double V = std::sqrt(static_cast<double>(n)) * mean / sd;
  return {V, std::erfc(std::fabs(V) / std::sqrt(2.0))};
}

}  // namespace centipede
