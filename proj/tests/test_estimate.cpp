#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "centipede/estimate.hpp"
#include "centipede/simulate.hpp"

using namespace centipede;

namespace {

Observation rs_row(const std::string& pair, int role, const std::string& game, int m) {
  Observation o;
  o.session_id = "s";
  o.subject_id = pair + (role == 1 ? "a" : "b");
  o.pair_id = pair;
  o.role = role;
  o.game_id = game;
  o.form = Form::ReducedStrategy;
  o.is_node = false;
  o.strategy = m;
  return o;
}

Observation dr_row(const std::string& pair, int role, const std::string& game,
                   int node, bool take) {
  Observation o;
  o.session_id = "s";
  o.subject_id = pair + (role == 1 ? "a" : "b");
  o.pair_id = pair;
  o.role = role;
  o.game_id = game;
  o.form = Form::DirectResponse;
  o.is_node = true;
  o.node = node;
  o.take = take;
  return o;
}

Dataset small_mixed_dataset() {
  Dataset d;
  d.games["lin"] = default_game_set()[0].spec;
  d.games["con"] = default_game_set()[5].spec;
  d.rows.push_back(rs_row("p1", 1, "lin", 0));
  d.rows.push_back(rs_row("p1", 2, "lin", 3));
  d.rows.push_back(rs_row("p2", 1, "con", 2));
  d.rows.push_back(dr_row("p3", 1, "lin", 1, false));
  d.rows.push_back(dr_row("p3", 2, "lin", 2, false));
  d.rows.push_back(dr_row("p3", 1, "lin", 3, true));
  d.rows.push_back(dr_row("p4", 1, "con", 1, true));
  Observation fs = rs_row("p5", 2, "lin", 6);
  fs.form = Form::FullStrategy;
  d.rows.push_back(fs);
  d.rows.push_back(rs_row("p6", 2, "con", 1));
  d.rows.push_back(rs_row("p7", 1, "lin", 1));
  return d;
}

}  // namespace

TEST_CASE("uniform mixtures give n log(1/4) on reduced-strategy data") {
  Dataset d;
  d.games["g"] = default_game_set()[0].spec;
  for (int i = 0; i < 9; ++i)
    d.rows.push_back(rs_row("p" + std::to_string(i), 1 + (i % 2), "g", i % 4));
  ModelSpec ms{SolverKind::QDCH, 1.7, 0.0, 10};  // lambda = 0: uniform everywhere
  CHECK(loglik(SolverKind::QDCH, ms, d) ==
        doctest::Approx(9.0 * std::log(0.25)).epsilon(1e-12));
}

TEST_CASE("a single take at node 1 under a level-0 prior gives log(1/2)") {
  Dataset d;
  d.games["g"] = default_game_set()[0].spec;
  d.rows.push_back(dr_row("p1", 1, "g", 1, true));
  ModelSpec ms{SolverKind::DCH, 0.0, 0.0, 0};
  CHECK(loglik(SolverKind::DCH, ms, d) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("loglik matches a direct per-row summation oracle") {
  auto d = small_mixed_dataset();
  ModelSpec ms{SolverKind::DCH, 1.25, 0.0, 20};
  auto prior = poisson_prior(1.25, 20);

  double want = 0.0;
  for (const auto& o : d.rows) {
    auto g = make_game(d.games.at(o.game_id));
    auto sol = dch_solve(g, o.form, prior);
    if (!o.is_node) {
      double p = 0.0;
      for (int k = 0; k <= prior.k_max(); ++k)
        p += prior.probs[static_cast<std::size_t>(k)] *
             sol.level(k)[static_cast<std::size_t>(o.role - 1)]
                         [static_cast<std::size_t>(o.strategy)];
      want += std::log(p);
    } else {
      // posterior over the actor's level conditions on its own earlier passes
      std::vector<double> w(prior.probs);
      for (int i = o.role; i < o.node; i += 2) {
        int own = (i - o.role) / 2;
        for (int k = 0; k <= prior.k_max(); ++k)
          w[static_cast<std::size_t>(k)] *=
              1.0 - sol.level(k)[static_cast<std::size_t>(o.role - 1)]
                                [static_cast<std::size_t>(own)];
      }
      double z = std::accumulate(w.begin(), w.end(), 0.0), p = 0.0;
      int own = (o.node - o.role) / 2;
      for (int k = 0; k <= prior.k_max(); ++k)
        p += w[static_cast<std::size_t>(k)] / z *
             sol.level(k)[static_cast<std::size_t>(o.role - 1)]
                         [static_cast<std::size_t>(own)];
      want += std::log(o.take ? p : 1.0 - p);
    }
  }
  CHECK(loglik(SolverKind::DCH, ms, d) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("level-0 mixing floors every observation's probability") {
  auto d = small_mixed_dataset();
  ModelSpec ms{SolverKind::DCH, 1.25, 0.0, 20};
  auto prior = poisson_prior(1.25, 20);
  double floor = static_cast<double>(d.rows.size()) * std::log(prior.probs[0] / 8.0);
  CHECK(loglik(SolverKind::DCH, ms, d) >= floor);
}

TEST_CASE("per-unit contributions aggregate paths and sum to the total") {
  auto d = small_mixed_dataset();
  ModelSpec ms{SolverKind::DCH, 1.25, 0.0, 20};
  auto units = per_unit_loglik(SolverKind::DCH, ms, d);
  // p3's three node rows collapse into one path unit: 10 rows -> 8 units
  CHECK(units.size() == 8);
  double total = std::accumulate(units.begin(), units.end(), 0.0);
  CHECK(total == doctest::Approx(loglik(SolverKind::DCH, ms, d)).epsilon(1e-10));
}

TEST_CASE("dataset validation rejects inconsistent rows") {
  Dataset ok = small_mixed_dataset();
  CHECK_NOTHROW(ok.validate());

  Dataset bad1 = ok;
  bad1.rows[0].game_id = "nope";
  CHECK_THROWS_AS(bad1.validate(), ValidationError);

  Dataset bad2 = ok;
  bad2.rows[0].role = 3;
  CHECK_THROWS_AS(bad2.validate(), ValidationError);

  Dataset bad3 = ok;
  bad3.rows[3].node = 2;  // role-1 row at an even node
  CHECK_THROWS_AS(bad3.validate(), ValidationError);

  Dataset bad4 = ok;
  bad4.rows[0].strategy = 4;  // reduced set has indices 0..3
  CHECK_THROWS_AS(bad4.validate(), ValidationError);

  // a take that is not the path's last node
  Dataset bad5 = ok;
  bad5.rows[3].take = true;  // p3 role 1 takes node 1 yet node 3 row exists
  CHECK_THROWS_AS(bad5.validate(), ValidationError);

  // gap in the path: nodes must be contiguous from 1
  Dataset bad6 = ok;
  bad6.rows.push_back(dr_row("p9", 2, "lin", 4, true));
  CHECK_THROWS_AS(bad6.validate(), ValidationError);
}

TEST_CASE("fitting recovers the generating prior parameter") {
  SimConfig sc;
  sc.games = default_game_set();
  sc.forms = {Form::ReducedStrategy};
  sc.model = {SolverKind::DCH, 1.25, 0.0, 50};
  sc.subjects_per_role = 5000;
  sc.seed = 42;
  auto data = simulate(sc);
  CHECK(data.rows.size() == 5000u * 6u * 2u);

  FitConfig fc;
  fc.threads = 4;
  auto fit1 = fit(SolverKind::DCH, data, fc);
  REQUIRE(fit1.tau.has_value());
  CHECK(std::abs(*fit1.tau - 1.25) <= 0.05);
  CHECK(fit1.log_likelihood <= 0.0);
  CHECK(fit1.n_obs == 60000);
  CHECK(!fit1.boundary);

  // the optimum cannot be below any coarse grid start
  ModelSpec probe{SolverKind::DCH, 0.8, 0.0, 50};
  CHECK(fit1.log_likelihood >= loglik(SolverKind::DCH, probe, data) - 1e-9);
  probe.tau = 2.0;
  CHECK(fit1.log_likelihood >= loglik(SolverKind::DCH, probe, data) - 1e-9);
}

TEST_CASE("uniform data pins the precision parameter at the lower boundary") {
  Dataset d;
  d.games["g"] = default_game_set()[0].spec;
  for (int i = 0; i < 16; ++i)
    d.rows.push_back(rs_row("p" + std::to_string(i), 1 + (i % 2), "g", i % 4));
  FitConfig fc;
  fc.threads = 4;
  auto res = fit(SolverKind::QDCH, d, fc);
  REQUIRE(res.lambda.has_value());
  CHECK(res.boundary);
  CHECK(*res.lambda <= fc.lambda_lo * 1.0001);
  // the lambda floor keeps choice probabilities ~1e-2 away from exactly
  // uniform on hundred-unit payoffs; the ll deficit is second order
  CHECK(res.log_likelihood == doctest::Approx(16.0 * std::log(0.25)).epsilon(1e-4));
}

TEST_CASE("bootstrap standard errors are reproducible and shrink with n") {
  SimConfig sc;
  sc.games = default_game_set();
  sc.forms = {Form::ReducedStrategy};
  sc.model = {SolverKind::DCH, 1.25, 0.0, 50};
  sc.subjects_per_role = 300;
  sc.seed = 7;
  auto data = simulate(sc);

  FitConfig fc;
  fc.threads = 4;
  auto base = fit(SolverKind::DCH, data, fc);

  CHECK_THROWS_AS(bootstrap_se(SolverKind::DCH, data, base, 0, 5, fc), ValidationError);

  auto b1 = bootstrap_se(SolverKind::DCH, data, base, 60, 5, fc);
  auto b2 = bootstrap_se(SolverKind::DCH, data, base, 60, 5, fc);
  REQUIRE(b1.se_tau.has_value());
  CHECK(*b1.se_tau == *b2.se_tau);  // bitwise
  CHECK(*b1.se_tau > 0.0);
  CHECK(b1.failures == 0);

  // a single-threaded pass must agree bitwise with the parallel one
  FitConfig fc1 = fc;
  fc1.threads = 1;
  auto b3 = bootstrap_se(SolverKind::DCH, data, base, 60, 5, fc1);
  CHECK(*b1.se_tau == *b3.se_tau);

  // duplicating every row doubles n and shrinks the SE by about 1/sqrt(2)
  Dataset doubled = data;
  doubled.rows.insert(doubled.rows.end(), data.rows.begin(), data.rows.end());
  auto based = fit(SolverKind::DCH, doubled, fc);
  auto bd = bootstrap_se(SolverKind::DCH, doubled, based, 60, 5, fc);
  REQUIRE(bd.se_tau.has_value());
  double ratio = *bd.se_tau / *b1.se_tau;
  CHECK(ratio > (1.0 / std::sqrt(2.0)) * 0.8);
  CHECK(ratio < (1.0 / std::sqrt(2.0)) * 1.2);
}

TEST_CASE("likelihood-ratio test") {
  auto [s0, p0] = lrt(-100.0, -100.0, 1);
  CHECK(s0 == 0.0);
  CHECK(p0 == doctest::Approx(1.0));

  auto [s1, p1] = lrt(-101.92, -100.0, 1);
  CHECK(s1 == doctest::Approx(3.84));
  CHECK(p1 == doctest::Approx(0.05).epsilon(0.01));

  auto [s2, p2] = lrt(-443.05, -100.0, 1);
  CHECK(s2 == doctest::Approx(686.1));
  CHECK(p2 < 0.001);

  CHECK_THROWS_AS(lrt(-99.0, -100.0, 1), ValidationError);
  CHECK_THROWS_AS(lrt(-100.0, -99.0, 0), ValidationError);
}

TEST_CASE("vuong statistic matches hand computation") {
  std::vector<double> a = {-1.0, -1.2, -0.8, -1.1, -0.9, -1.3};
  std::vector<double> b = {-1.4, -1.1, -1.3, -1.2, -1.5, -1.2};
  std::vector<double> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = a[i] - b[i];
  double mean = std::accumulate(m.begin(), m.end(), 0.0) / 6.0;
  double ss = 0.0;
  for (double v : m) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / 5.0);
  double v_want = std::sqrt(6.0) * mean / sd;

  auto [v, p] = vuong(a, b);
  CHECK(v == doctest::Approx(v_want).epsilon(1e-12));
  CHECK(p == doctest::Approx(std::erfc(std::abs(v_want) / std::sqrt(2.0))).epsilon(1e-12));

  // the published pooled comparison value lands below the 0.001 mark
  CHECK(std::erfc(4.347 / std::sqrt(2.0)) < 0.001);

  CHECK_THROWS_AS(vuong(a, std::vector<double>(5, -1.0)), ValidationError);
  CHECK_THROWS_AS(vuong(a, a), ValidationError);  // zero variance
}
