#include <doctest.h>

#include <cmath>
#include <vector>

#include "centipede/game.hpp"
#include "centipede/levels.hpp"
#include "centipede/predict.hpp"
#include "centipede/solvers.hpp"

using namespace centipede;

namespace {

double form_gap(const NamedGame& ng, const ModelSpec& ms, Form a, Form b) {
  auto g = make_game(ng.spec);
  auto prior = poisson_prior(ms.tau, ms.k_max);
  auto da = terminal_distribution(g, a, solve_model(g, a, ms), prior);
  auto db = terminal_distribution(g, b, solve_model(g, b, ms), prior);
  return supnorm(da, db);
}

double max_abs_profile_gap(const Solution& a, const Solution& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.levels.size(); ++k)
    for (int r = 0; r < 2; ++r) {
      const auto& va = a.levels[k][static_cast<std::size_t>(r)];
      const auto& vb = b.levels[k][static_cast<std::size_t>(r)];
      for (std::size_t i = 0; i < va.size(); ++i)
        worst = std::max(worst, std::abs(va[i] - vb[i]));
    }
  return worst;
}

}  // namespace

TEST_CASE("lambda = 0 gives uniform choice for every level and form") {
  auto g = make_game(default_game_set()[2].spec);
  auto prior = poisson_prior(1.25, 6);
  for (Form f : {Form::DirectResponse, Form::ReducedStrategy, Form::FullStrategy}) {
    auto sol = qdch_solve(g, f, prior, 0.0);
    for (const auto& lvl : sol.levels)
      for (int r = 0; r < 2; ++r) {
        const auto& v = lvl[static_cast<std::size_t>(r)];
        double want = f == Form::DirectResponse ? 0.5 : 1.0 / static_cast<double>(v.size());
        for (double p : v) CHECK(p == doctest::Approx(want).epsilon(1e-15));
      }
  }
}

TEST_CASE("negative lambda is rejected") {
  auto g = make_game(default_game_set()[0].spec);
  auto prior = poisson_prior(1.25, 6);
  CHECK_THROWS_AS(qdch_solve(g, Form::ReducedStrategy, prior, -0.1), ValidationError);
}

TEST_CASE("level-1 reduced-strategy mixture is the softmax against uniform") {
  // Small Linear in experiment units; level 1 faces the level-0 uniform
  // opponent, so its mixture is a 4-entry softmax of row means
  auto g = make_game(default_game_set()[0].spec);
  auto prior = poisson_prior(1.25, 6);
  const double lambda = 0.05;
  auto sol = qdch_solve(g, Form::ReducedStrategy, prior, lambda);
  auto [u1, u2] = strategy_payoff_matrix(g, Form::ReducedStrategy);
  for (int role = 1; role <= 2; ++role) {
    const auto& u = role == 1 ? u1 : u2;
    std::vector<double> eu(4, 0.0);
    for (int m = 0; m < 4; ++m)
      for (int o = 0; o < 4; ++o)
        eu[static_cast<std::size_t>(m)] +=
            0.25 * (role == 1 ? u[static_cast<std::size_t>(m)][static_cast<std::size_t>(o)]
                              : u[static_cast<std::size_t>(o)][static_cast<std::size_t>(m)]);
    double mx = *std::max_element(eu.begin(), eu.end());
    double z = 0.0;
    for (double e : eu) z += std::exp(lambda * (e - mx));
    for (int m = 0; m < 4; ++m) {
      double want = std::exp(lambda * (eu[static_cast<std::size_t>(m)] - mx)) / z;
      CHECK(sol.level(1)[static_cast<std::size_t>(role - 1)][static_cast<std::size_t>(m)] ==
            doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("published QDCH design cells at tau 2.60, lambda 0.05") {
  ModelSpec ms{SolverKind::QDCH, 2.60, 0.05, 50};
  auto games = default_game_set();
  // frozen full-precision sup-norms per game: rs-dr, fs-dr, rs-fs
  const double frozen[6][3] = {
      {0.23448570827239534, 0.18901657468304256, 0.37123390750396312},
      {0.071617160366960753, 0.086103326702724303, 0.13451345281166086},
      {0.32580637629020792, 0.22108251573686571, 0.10472386055334221},
      {0.079762138524972048, 0.19691887716919632, 0.11715673864422427},
      {0.071643160959592112, 0.024918781616181773, 0.096561942575773885},
      {0.31571651410026147, 0.049918632075099167, 0.36563514617536064}};
  for (int i = 0; i < 6; ++i) {
    const auto& ng = games[static_cast<std::size_t>(i)];
    CHECK(form_gap(ng, ms, Form::ReducedStrategy, Form::DirectResponse) ==
          doctest::Approx(frozen[i][0]).epsilon(1e-9));
    CHECK(form_gap(ng, ms, Form::FullStrategy, Form::DirectResponse) ==
          doctest::Approx(frozen[i][1]).epsilon(1e-9));
    CHECK(form_gap(ng, ms, Form::ReducedStrategy, Form::FullStrategy) ==
          doctest::Approx(frozen[i][2]).epsilon(1e-9));
  }
  // the published large-constant RS-vs-FS cell is reproduced on the nose
  CHECK(std::abs(frozen[5][2] - 0.367) < 0.005);
}

TEST_CASE("large lambda approaches the best-response hierarchy") {
  ModelSpec qd{SolverKind::QDCH, 1.25, 1e4, 20};
  for (std::size_t gi : {0u, 1u, 2u, 4u, 5u}) {  // skip the exp-4 knife edge
    auto ng = default_game_set()[gi];
    // raw units keep expected-utility gaps O(1) so the logit saturates
    ng.spec.rescale = {1.0, 0.0};
    auto g = make_game(ng.spec);
    auto prior = poisson_prior(1.25, 20);
    for (Form f : {Form::DirectResponse, Form::ReducedStrategy, Form::FullStrategy}) {
      auto q = qdch_solve(g, f, prior, 1e4);
      auto d = dch_solve(g, f, prior);
      CHECK(max_abs_profile_gap(q, d) < 1e-3);
    }
  }
}

TEST_CASE("degenerate level-1 prior at large lambda is the uniform best response") {
  // prior mass only at level 1: the aggregate is level 1's response to the
  // level-0 uniform opponent
  auto g = make_game(default_game_set()[4].spec);
  LevelPrior prior;
  prior.tau = 0.0;  // informational only; masses set directly
  prior.probs = {0.0, 1.0};
  auto q = qdch_solve(g, Form::ReducedStrategy, prior, 1e6);
  auto d = dch_solve(g, Form::ReducedStrategy, prior);
  CHECK(max_abs_profile_gap(q, d) < 1e-6);
  // and that response is a pure strategy on this generic game
  for (int r = 0; r < 2; ++r) {
    double mx = 0.0;
    for (double p : d.level(1)[static_cast<std::size_t>(r)]) mx = std::max(mx, p);
    CHECK(mx == doctest::Approx(1.0));
  }
}

TEST_CASE("scaling payoffs by s and lambda by 1/s leaves QDCH unchanged") {
  for (std::size_t gi : {0u, 3u, 5u}) {
    auto base = default_game_set()[gi];
    auto scaled = base;
    scaled.spec.rescale.a = base.spec.rescale.a * 10.0;
    scaled.spec.rescale.b = base.spec.rescale.b * 10.0;
    auto prior = poisson_prior(2.6, 30);
    for (Form f : {Form::DirectResponse, Form::ReducedStrategy, Form::FullStrategy}) {
      auto a = qdch_solve(make_game(base.spec), f, prior, 0.05);
      auto b = qdch_solve(make_game(scaled.spec), f, prior, 0.005);
      CHECK(max_abs_profile_gap(a, b) < 1e-8);
    }
  }
}

TEST_CASE("direct-response aggregation matches a hand-rolled Bayes update") {
  // P1's second own node (game node 3): posterior over levels conditions on
  // P1 having passed at node 1
  auto g = make_game(default_game_set()[0].spec);
  auto prior = poisson_prior(1.25, 10);
  auto sol = qdch_solve(g, Form::DirectResponse, prior, 0.02);
  auto agg = aggregate_choice_probs(sol, prior);
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= prior.k_max(); ++k) {
    double pass1 = 1.0 - sol.level(k)[0][0];
    double w = prior.probs[static_cast<std::size_t>(k)] * pass1;
    num += w * sol.level(k)[0][1];
    den += w;
  }
  CHECK(agg[0][1] == doctest::Approx(num / den).epsilon(1e-12));
  // the empty history uses the prior itself
  double root = 0.0;
  for (int k = 0; k <= prior.k_max(); ++k)
    root += prior.probs[static_cast<std::size_t>(k)] * sol.level(k)[0][0];
  CHECK(agg[0][0] == doctest::Approx(root).epsilon(1e-12));
}
