// Command-line front end: solve | scan | fit | simulate | test.
// Exit codes: 0 success, 1 missing file, 2 validation/schema error,
// 3 solver non-convergence.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "centipede/estimate.hpp"
#include "centipede/io.hpp"
#include "centipede/predict.hpp"
#include "centipede/simulate.hpp"
#include "centipede/stats.hpp"

namespace {

using namespace centipede;

struct Logger {
  bool quiet = false;
  bool json = false;

  void info(const std::string& msg) const {
    if (quiet) return;
    if (json)
      std::cerr << "{\"level\":\"info\",\"msg\":\"" << msg << "\"}\n";
    else
      std::cerr << "[info] " << msg << "\n";
  }
  void error(const std::string& msg) const {
    if (json)
      std::cerr << "{\"level\":\"error\",\"msg\":\"" << msg << "\"}\n";
    else
      std::cerr << "[error] " << msg << "\n";
  }
};

struct SolveArgs {
  std::string family, form = "rs", model = "dch", out = "solution.json";
  double c = 0.5, pi = 2.0, tau = 1.25, lambda = 0.0;
  double rescale_a = 1.0, rescale_b = 0.0;
  int stages = 6, kmax = 50;
  int max_iterations = SolverConfig{}.max_iterations;
  int max_rungs = SolverConfig{}.max_rungs;
};

struct ScanArgs {
  std::string family, model = "dch", pair = "rs-dr", out = "scan.csv";
  double c_min = 0.0, c_max = 0.0, step = 0.01, pi = 2.0, tau = 1.25, lambda = 0.0;
  double rescale_a = 1.0, rescale_b = 0.0;
  int stages = 6, kmax = 50;
};

struct FitArgs {
  std::string data, games, model = "dch", out = "fit.json";
  int kmax = 50, bootstrap = 0;
  std::uint64_t seed = 0;
};

struct SimArgs {
  std::string config, out = "data.csv";
  std::optional<std::uint64_t> seed;
};

struct TestArgs {
  std::string data, games, tests = "friedman,signedrank,ranksum,ks", out = "tests.json";
};

ModelSpec model_spec(const std::string& model, double tau, double lambda, int kmax) {
  ModelSpec m;
  m.kind = solver_kind_from_string(model);
  m.tau = tau;
  m.lambda = lambda;
  m.k_max = kmax;
  if (m.kind != SolverKind::DCH && !(lambda >= 0.0))
    throw ValidationError("model '" + model + "' requires --lambda >= 0");
  if (m.kind != SolverKind::AQRE && !(tau >= 0.0))
    throw ValidationError("model '" + model + "' requires --tau >= 0");
  return m;
}

std::string default_games_path(const std::string& data_path) {
  return data_path + ".games.json";
}

void run_solve(const SolveArgs& a, const Logger& log, int /*threads*/) {
  GameSpec spec;
  spec.family = family_from_string(a.family);
  spec.c = a.c;
  spec.pi = a.pi;
  spec.stages = a.stages;
  spec.rescale = {a.rescale_a, a.rescale_b};
  const CentipedeGame game = make_game(spec);
  const ModelSpec m = model_spec(a.model, a.tau, a.lambda, a.kmax);
  SolverConfig cfg;
  cfg.max_iterations = a.max_iterations;
  cfg.max_rungs = a.max_rungs;
  const Solution sol = solve_model(game, form_from_string(a.form), m, cfg);
  write_solution_json(a.out, sol);
  log.info("wrote " + a.out);
}

void run_scan(const ScanArgs& a, const Logger& log, int threads) {
  if (!(a.step > 0.0)) throw ValidationError("scan requires --step > 0");
  if (a.c_max < a.c_min) throw ValidationError("scan requires --c-max >= --c-min");
  if (a.step > a.c_max - a.c_min)
    throw ValidationError("scan step exceeds the [c-min, c-max] range (empty grid)");
  // index-based grid: no accumulated floating-point drift in the c column
  const int last = static_cast<int>(std::floor((a.c_max - a.c_min) / a.step + 1e-9));
  std::vector<double> grid;
  for (int i = 0; i <= last; ++i) grid.push_back(a.c_min + i * a.step);
  if (grid.empty()) throw ValidationError("scan grid is empty");

  const auto dash = a.pair.find('-');
  if (dash == std::string::npos)
    throw ValidationError("scan --pair must look like rs-dr");
  const Form fa = form_from_string(a.pair.substr(0, dash));
  const Form fb = form_from_string(a.pair.substr(dash + 1));

  const ModelSpec m = model_spec(a.model, a.tau, a.lambda, a.kmax);
  const DesignScan scan =
      design_scan(family_from_string(a.family), m, fa, fb, grid, a.stages / 2,
                  {a.rescale_a, a.rescale_b}, {}, threads, a.pi);
  write_scan_csv(a.out, scan);
  int errors = 0;
  for (const auto& pt : scan.points) errors += pt.status == "ok" ? 0 : 1;
  log.info("wrote " + a.out + " (" + std::to_string(scan.points.size()) +
           " points, " + std::to_string(errors) + " errors)");
}

void run_fit(const FitArgs& a, const Logger& log, int threads) {
  const std::string games = a.games.empty() ? default_games_path(a.data) : a.games;
  const Dataset data = dataset_from_csv_file(a.data, games);
  const SolverKind kind = solver_kind_from_string(a.model);
  FitConfig cfg;
  cfg.k_max = a.kmax;
  cfg.threads = threads;
  FitResult res = fit(kind, data, cfg);
  log.info("fit: ll=" + format_double(res.log_likelihood));
  if (a.bootstrap > 0) {
    const BootstrapResult bs = bootstrap_se(kind, data, res, a.bootstrap, a.seed, cfg);
    res.se_tau = bs.se_tau;
    res.se_lambda = bs.se_lambda;
    res.bootstrap_replicates = bs.replicates;
    res.bootstrap_seed = bs.seed;
    res.bootstrap_failures = bs.failures;
  }
  write_fit_json(a.out, res);
  log.info("wrote " + a.out);
}

void run_simulate(const SimArgs& a, const Logger& log, int /*threads*/) {
  SimConfig cfg = sim_config_from_json_file(a.config);
  if (a.seed) cfg.seed = *a.seed;
  const Dataset data = simulate(cfg);
  write_dataset_csv(a.out, data);
  write_games_json(default_games_path(a.out), cfg.games);
  log.info("wrote " + a.out + " (" + std::to_string(data.rows.size()) + " rows) and " +
           default_games_path(a.out));
}

// terminal-node EDF sup-distance between two integer samples
double edf_supnorm(const std::vector<double>& x, const std::vector<double>& y) {
  int hi = 1;
  for (double v : x) hi = std::max(hi, static_cast<int>(v));
  for (double v : y) hi = std::max(hi, static_cast<int>(v));
  double s = 0.0, cx = 0.0, cy = 0.0;
  for (int node = 1; node <= hi; ++node) {
    for (double v : x) cx += v == node ? 1.0 : 0.0;
    for (double v : y) cy += v == node ? 1.0 : 0.0;
    s = std::max(s, std::fabs(cx / static_cast<double>(x.size()) -
                              cy / static_cast<double>(y.size())));
  }
  return s;
}

void run_test(const TestArgs& a, const Logger& log) {
  const std::string games = a.games.empty() ? default_games_path(a.data) : a.games;
  const Dataset data = dataset_from_csv_file(a.data, games);
  const MatchedPanel panel = matched_terminal_nodes(data);
  if (panel.skipped > 0)
    log.info(std::to_string(panel.skipped) + " incomplete pair-games skipped");
  if (panel.cells.empty())
    throw ValidationError("no complete (DR, RS, FS) pair-games in the dataset");

  std::set<std::string> wanted;
  {
    std::string item;
    std::istringstream in(a.tests);
    while (std::getline(in, item, ',')) {
      if (item != "friedman" && item != "signedrank" && item != "ranksum" && item != "ks")
        throw ValidationError("unknown test '" + item +
                              "' (expected friedman|signedrank|ranksum|ks)");
      wanted.insert(item);
    }
    if (wanted.empty()) throw ValidationError("--tests selected nothing");
  }

  // scopes: each game, then the pooled panel
  std::map<std::string, std::vector<std::array<int, 3>>> scopes;
  for (std::size_t i = 0; i < panel.cells.size(); ++i)
    scopes[panel.game_ids[i]].push_back(panel.cells[i]);
  scopes["all"] = panel.cells;

  static const std::array<std::pair<const char*, std::array<int, 2>>, 3> kPairs{{
      {"rs-dr", {1, 0}},
      {"fs-dr", {2, 0}},
      {"rs-fs", {1, 2}},
  }};

  std::ostringstream out;
  out << "[\n";
  bool first = true;
  const auto emit = [&](const std::string& scope, const std::string& test,
                        const std::string& pair, std::size_t nrows, const TestResult& r,
                        std::optional<double> adjusted) {
    if (!first) out << ",\n";
    first = false;
    out << "  {\"scope\":\"" << scope << "\",\"test\":\"" << test << "\"";
    if (!pair.empty()) out << ",\"pair\":\"" << pair << "\"";
    out << ",\"n\":" << nrows << ",\"statistic\":" << format_double(r.statistic)
        << ",\"p\":" << format_double(r.p_value);
    if (adjusted) out << ",\"p_bonferroni\":" << format_double(*adjusted);
    if (r.degenerate) out << ",\"degenerate\":true";
    out << "}";
  };

  for (const auto& [scope, cells] : scopes) {
    if (cells.size() < 2) continue;
    std::array<std::vector<double>, 3> col;
    for (const auto& c : cells)
      for (int f = 0; f < 3; ++f)
        col[static_cast<std::size_t>(f)].push_back(c[static_cast<std::size_t>(f)]);

    if (wanted.count("friedman")) {
      std::vector<std::vector<double>> m;
      for (const auto& c : cells)
        m.push_back({static_cast<double>(c[0]), static_cast<double>(c[1]),
                     static_cast<double>(c[2])});
      emit(scope, "friedman", "", cells.size(), friedman(m), std::nullopt);
    }
    for (const auto& [pair_name, idx] : kPairs) {
      const auto& x = col[static_cast<std::size_t>(idx[0])];
      const auto& y = col[static_cast<std::size_t>(idx[1])];
      if (wanted.count("signedrank")) {
        const TestResult r = wilcoxon_signed_rank(x, y);
        emit(scope, "signedrank", pair_name, cells.size(), r, bonferroni(r.p_value, 3));
      }
      if (wanted.count("ranksum")) {
        const TestResult r = rank_sum(x, y);
        emit(scope, "ranksum", pair_name, cells.size(), r, bonferroni(r.p_value, 3));
      }
      if (wanted.count("ks")) {
        const double S = edf_supnorm(x, y);
        TestResult r;
        r.statistic = S;
        r.p_value = ks_two_sample_pvalue(S, static_cast<int>(x.size()),
                                         static_cast<int>(y.size()));
        emit(scope, "ks", pair_name, cells.size(), r, std::nullopt);
      }
    }
  }
  out << "\n]\n";

  std::ofstream file(a.out);
  if (!file) throw IoError("cannot open '" + a.out + "' for writing");
  file << out.str();
  log.info("wrote " + a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"centipede: solvers, design scans, estimation, and simulation "
               "for centipede-game choice experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // allow global flags after the subcommand name

  int threads = 1;
  Logger log;
  app.add_option("--threads", threads, "parallelism cap")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", log.quiet, "suppress progress on stderr");
  app.add_flag("--json-logs", log.json, "emit stderr diagnostics as JSON lines");

  SolveArgs so;
  auto* solve = app.add_subcommand("solve", "solve one game and write the solution");
  solve->add_option("--family", so.family)->required();
  solve->add_option("--c", so.c)->required();
  solve->add_option("--pi", so.pi);
  solve->add_option("--stages", so.stages);
  solve->add_option("--form", so.form)->required();
  solve->add_option("--model", so.model)->required();
  solve->add_option("--tau", so.tau);
  solve->add_option("--lambda", so.lambda);
  solve->add_option("--kmax", so.kmax);
  solve->add_option("--rescale-a", so.rescale_a);
  solve->add_option("--rescale-b", so.rescale_b);
  solve->add_option("--max-iterations", so.max_iterations, "fixed-point sweeps per rung");
  solve->add_option("--max-rungs", so.max_rungs, "homotopy rung budget");
  solve->add_option("--out", so.out);

  ScanArgs sc;
  auto* scan = app.add_subcommand("scan", "sup-norm design scan over c");
  scan->add_option("--family", sc.family)->required();
  scan->add_option("--c-min", sc.c_min)->required();
  scan->add_option("--c-max", sc.c_max)->required();
  scan->add_option("--step", sc.step);
  scan->add_option("--model", sc.model)->required();
  scan->add_option("--tau", sc.tau);
  scan->add_option("--lambda", sc.lambda);
  scan->add_option("--kmax", sc.kmax);
  scan->add_option("--pair", sc.pair, "form pair, e.g. rs-dr | rs-fs | fs-dr");
  scan->add_option("--stages", sc.stages);
  scan->add_option("--pi", sc.pi);
  scan->add_option("--rescale-a", sc.rescale_a);
  scan->add_option("--rescale-b", sc.rescale_b);
  scan->add_option("--out", sc.out);

  FitArgs fi;
  auto* fitc = app.add_subcommand("fit", "maximum-likelihood fit on a dataset CSV");
  fitc->add_option("--data", fi.data)->required();
  fitc->add_option("--games", fi.games, "games JSON (default: <data>.games.json)");
  fitc->add_option("--model", fi.model)->required();
  fitc->add_option("--kmax", fi.kmax);
  fitc->add_option("--bootstrap", fi.bootstrap, "bootstrap replicates (0 = off)");
  fitc->add_option("--seed", fi.seed);
  fitc->add_option("--out", fi.out);

  SimArgs si;
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  sim->add_option("--config", si.config)->required();
  std::uint64_t sim_seed = 0;
  auto* seed_opt = sim->add_option("--seed", sim_seed, "override the config seed");
  sim->add_option("--out", si.out);

  TestArgs te;
  auto* test = app.add_subcommand("test", "nonparametric tests on matched terminal nodes");
  test->add_option("--data", te.data)->required();
  test->add_option("--games", te.games, "games JSON (default: <data>.games.json)");
  test->add_option("--tests", te.tests, "comma list: friedman,signedrank,ranksum,ks");
  test->add_option("--out", te.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help/version exit 0; bad arguments exit 2
  }

  try {
    if (*solve) run_solve(so, log, threads);
    if (*scan) run_scan(sc, log, threads);
    if (*fitc) run_fit(fi, log, threads);
    if (*sim) {
      if (*seed_opt) si.seed = sim_seed;
      run_simulate(si, log, threads);
    }
    if (*test) run_test(te, log);
  } catch (const IoError& e) {
    log.error(e.what());
    return 1;
  } catch (const ConvergenceError& e) {
    log.error(std::string(e.what()) + " (residual " + format_double(e.residual) +
              " at lambda " + format_double(e.lambda_reached) + ")");
    return 3;
  } catch (const ValidationError& e) {
    log.error(e.what());
    return 2;
  } catch (const std::exception& e) {
    log.error(e.what());
    return 2;
  }
  return 0;
}
