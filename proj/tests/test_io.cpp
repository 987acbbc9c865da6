#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "centipede/io.hpp"
#include "centipede/levels.hpp"
#include "centipede/predict.hpp"

using namespace centipede;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TmpDir {
  fs::path dir;
  TmpDir() {
    dir = fs::temp_directory_path() /
          ("centipede-io-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TmpDir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("format_double renders shortest round-trip decimals") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(4.0) == "4");
  CHECK(format_double(0.25066694795062651) == "0.2506669479506265");
  CHECK(format_double(std::nan("")) == "nan");
  // parse-back identity on an awkward value
  const double x = 1.0 / 3.0;
  CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("game spec json round-trip") {
  TmpDir t;
  GameSpec spec;
  spec.family = Family::Exponential;
  spec.c = 2.5;
  spec.pi = 2.0;
  spec.stages = 6;
  spec.rescale = {4.0, 0.0};
  write_game_spec_json(t / "g.json", spec);
  auto back = game_spec_from_json_file(t / "g.json");
  CHECK(back.family == Family::Exponential);
  CHECK(back.c == 2.5);
  CHECK(back.pi == 2.0);
  CHECK(back.stages == 6);
  CHECK(back.rescale.a == 4.0);
  CHECK(back.rescale.b == 0.0);

  GameSpec custom;
  custom.family = Family::Custom;
  custom.stages = 4;
  custom.payoffs = {{4, 1}, {2, 8}, {16, 4}, {8, 32}, {64, 16}};
  write_game_spec_json(t / "c.json", custom);
  auto cback = game_spec_from_json_file(t / "c.json");
  CHECK(cback.family == Family::Custom);
  REQUIRE(cback.payoffs.size() == 5);
  CHECK(cback.payoffs[2].first == 16.0);

  write_text(t / "bad.json", "{\"c\": 0.5}");
  CHECK_THROWS_AS(game_spec_from_json_file(t / "bad.json"), ValidationError);
  write_text(t / "mangled.json", "{not json");
  CHECK_THROWS_AS(game_spec_from_json_file(t / "mangled.json"), ValidationError);
  CHECK_THROWS_AS(game_spec_from_json_file(t / "missing.json"), IoError);
}

TEST_CASE("games table json: explicit list and the built-in battery") {
  TmpDir t;
  write_games_json(t / "games.json", default_game_set());
  auto games = games_from_json_file(t / "games.json");
  REQUIRE(games.size() == 6);
  CHECK(games[0].id == "linear-0.5");
  CHECK(games[3].spec.family == Family::Exponential);

  write_text(t / "default.json", "{\"games\": \"default\"}");
  auto def = games_from_json_file(t / "default.json");
  REQUIRE(def.size() == 6);
  CHECK(def[5].id == "const-0.8");

  write_text(t / "empty.json", "{\"games\": []}");
  CHECK_THROWS_AS(games_from_json_file(t / "empty.json"), ValidationError);
}

TEST_CASE("prior json round-trip preserves exact probabilities") {
  TmpDir t;
  auto prior = poisson_prior(1.25, 10);
  write_prior_json(t / "p.json", prior);
  auto back = prior_from_json_file(t / "p.json");
  CHECK(back.tau == prior.tau);
  REQUIRE(back.probs.size() == prior.probs.size());
  for (std::size_t k = 0; k < prior.probs.size(); ++k)
    CHECK(back.probs[k] == prior.probs[k]);  // bitwise via shortest round-trip

  write_text(t / "tau.json", "{\"tau\": 2.0, \"k_max\": 3}");
  auto synth = prior_from_json_file(t / "tau.json");
  CHECK(synth.probs == poisson_prior(2.0, 3).probs);

  write_text(t / "badsum.json",
             "{\"tau\": 1.0, \"k_max\": 1, \"probs\": [0.9, 0.3]}");
  CHECK_THROWS_AS(prior_from_json_file(t / "badsum.json"), ValidationError);
}

TEST_CASE("solution json keys follow the form's strategy labels") {
  TmpDir t;
  auto g = make_game(default_game_set()[0].spec);
  auto prior = poisson_prior(1.25, 3);

  write_solution_json(t / "rs.json", dch_solve(g, Form::ReducedStrategy, prior));
  auto rs = json::parse(read_text(t / "rs.json"));
  CHECK(rs["kind"] == "dch");
  CHECK(rs["form"] == "rs");
  CHECK(rs["stages"] == 6);
  CHECK(rs["tau"] == 1.25);
  REQUIRE(rs["levels"].size() == 4);
  CHECK(rs["levels"][0]["p1"].contains("T"));
  CHECK(rs["levels"][0]["p1"].contains("PPP"));
  CHECK(rs["levels"][0]["level"] == 0);
  CHECK(rs["levels"][0]["p1"]["PT"].get<double>() == 0.25);

  write_solution_json(t / "dr.json", dch_solve(g, Form::DirectResponse, prior));
  auto dr = json::parse(read_text(t / "dr.json"));
  CHECK(dr["levels"][0]["p1"].contains("1"));
  CHECK(dr["levels"][0]["p2"].contains("2"));
  CHECK(!dr["levels"][0]["p1"].contains("2"));

  write_solution_json(t / "aqre.json", aqre_solve(g, Form::FullStrategy, 0.01));
  auto aq = json::parse(read_text(t / "aqre.json"));
  CHECK(aq["kind"] == "aqre");
  CHECK(aq["lambda"] == 0.01);
  CHECK(aq.contains("residual"));
  CHECK(aq.contains("homotopy_steps"));
  CHECK(aq["profile"]["p2"].contains("TPT"));
  CHECK(!aq.contains("levels"));
}

TEST_CASE("dataset csv round-trip") {
  TmpDir t;
  SimConfig sc;
  sc.games = default_game_set();
  sc.forms = {Form::DirectResponse, Form::ReducedStrategy, Form::FullStrategy};
  sc.model = {SolverKind::DCH, 1.25, 0.0, 10};
  sc.subjects_per_role = 8;
  sc.seed = 5;
  auto data = simulate(sc);

  write_dataset_csv(t / "d.csv", data);
  write_games_json(t / "d.games.json", sc.games);
  auto back = dataset_from_csv_file(t / "d.csv", t / "d.games.json");
  REQUIRE(back.rows.size() == data.rows.size());
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    CHECK(back.rows[i].subject_id == data.rows[i].subject_id);
    CHECK(back.rows[i].pair_id == data.rows[i].pair_id);
    CHECK(back.rows[i].role == data.rows[i].role);
    CHECK(back.rows[i].form == data.rows[i].form);
    CHECK(back.rows[i].is_node == data.rows[i].is_node);
    CHECK(back.rows[i].node == data.rows[i].node);
    CHECK(back.rows[i].take == data.rows[i].take);
    CHECK(back.rows[i].strategy == data.rows[i].strategy);
  }
}

TEST_CASE("dataset csv errors carry line numbers") {
  TmpDir t;
  write_games_json(t / "g.json", default_game_set());
  const std::string header =
      "session_id,subject_id,pair_id,role,game_id,form,record_type,node,choice";

  write_text(t / "bad-header.csv", "a,b,c\n");
  try {
    dataset_from_csv_file(t / "bad-header.csv", t / "g.json");
    FAIL("expected error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }

  write_text(t / "bad-field.csv",
             header + "\ns,a,p,1,linear-0.5,rs,strategy,,T\ns,a,p,1,nope,rs,strategy,,T\n");
  try {
    dataset_from_csv_file(t / "bad-field.csv", t / "g.json");
    FAIL("expected error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("nope") != std::string::npos);
  }

  write_text(t / "bad-label.csv", header + "\ns,a,p,1,linear-0.5,rs,strategy,,PTP\n");
  CHECK_THROWS_AS(dataset_from_csv_file(t / "bad-label.csv", t / "g.json"),
                  ValidationError);

  write_text(t / "short.csv", header + "\ns,a,p,1\n");
  try {
    dataset_from_csv_file(t / "short.csv", t / "g.json");
    FAIL("expected error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("9 fields") != std::string::npos);
  }

  CHECK_THROWS_AS(dataset_from_csv_file(t / "nothere.csv", t / "g.json"), IoError);

  // windows line endings are tolerated
  write_text(t / "crlf.csv", header + "\r\ns,a,p,1,linear-0.5,rs,strategy,,PT\r\n");
  auto d = dataset_from_csv_file(t / "crlf.csv", t / "g.json");
  CHECK(d.rows.size() == 1);
  CHECK(d.rows[0].strategy == 1);
}

TEST_CASE("scan csv escapes statuses and blanks failed values") {
  TmpDir t;
  DesignScan scan;
  scan.points.push_back({0.5, 0.25, "ok"});
  scan.points.push_back({1.5, std::nan(""), "linear family needs c in (0, 1), got 1.5"});
  write_scan_csv(t / "s.csv", scan);
  auto text = read_text(t / "s.csv");
  CHECK(text.find("c,supnorm,status") == 0);
  CHECK(text.find("0.5,0.25,ok\n") != std::string::npos);
  // the error row has an empty supnorm column and no stray commas
  CHECK(text.find("1.5,,linear family needs c in (0; 1); got 1.5\n") != std::string::npos);
}

TEST_CASE("cdf csv enumerates nodes") {
  TmpDir t;
  TerminalDistribution a{{0.5, 0.5}}, b{{0.25, 0.75}};
  write_cdf_csv(t / "cdf.csv", a, b);
  CHECK(read_text(t / "cdf.csv") == "node,cdf_a,cdf_b\n1,0.5,0.25\n2,1,1\n");
  CHECK_THROWS_AS(write_cdf_csv(t / "x.csv", a, TerminalDistribution{{1.0}}),
                  ValidationError);
}

TEST_CASE("fit json uses null for absent parameters") {
  TmpDir t;
  FitResult fit;
  fit.kind = SolverKind::DCH;
  fit.tau = 1.3;
  fit.log_likelihood = -12.5;
  fit.n_obs = 10;
  write_fit_json(t / "f.json", fit);
  auto j = json::parse(read_text(t / "f.json"));
  CHECK(j["model"] == "dch");
  CHECK(j["tau"] == 1.3);
  CHECK(j["lambda"].is_null());
  CHECK(j["se_tau"].is_null());
  CHECK(!j.contains("bootstrap"));

  fit.kind = SolverKind::QDCH;
  fit.lambda = 0.05;
  fit.se_tau = 0.2;
  fit.se_lambda = 0.01;
  fit.bootstrap_replicates = 100;
  fit.bootstrap_seed = 9;
  fit.bootstrap_failures = 1;
  write_fit_json(t / "f2.json", fit);
  auto j2 = json::parse(read_text(t / "f2.json"));
  CHECK(j2["lambda"] == 0.05);
  CHECK(j2["bootstrap"]["replicates"] == 100);
  CHECK(j2["bootstrap"]["seed"] == 9);
  CHECK(j2["bootstrap"]["failures"] == 1);
}

TEST_CASE("sim config json") {
  TmpDir t;
  write_text(t / "sim.json", R"({
    "session_id": "lab",
    "games": "default",
    "forms": ["dr", "rs"],
    "model": {"kind": "qdch", "tau": 2.6, "lambda": 0.05, "k_max": 30},
    "subjects_per_role": 12,
    "seed": 99
  })");
  auto cfg = sim_config_from_json_file(t / "sim.json");
  CHECK(cfg.session_id == "lab");
  CHECK(cfg.games.size() == 6);
  REQUIRE(cfg.forms.size() == 2);
  CHECK(cfg.forms[1] == Form::ReducedStrategy);
  CHECK(cfg.model.kind == SolverKind::QDCH);
  CHECK(cfg.model.tau == 2.6);
  CHECK(cfg.model.lambda == 0.05);
  CHECK(cfg.model.k_max == 30);
  CHECK(cfg.subjects_per_role == 12);
  CHECK(cfg.seed == 99);

  write_text(t / "custom.json", R"({
    "games": [{"id": "mini", "family": "linear", "c": 0.5, "stages": 4}],
    "forms": ["rs"],
    "model": {"kind": "dch", "tau": 1.0},
    "subjects_per_role": 4
  })");
  auto mini = sim_config_from_json_file(t / "custom.json");
  REQUIRE(mini.games.size() == 1);
  CHECK(mini.games[0].id == "mini");
  CHECK(mini.games[0].spec.stages == 4);
  CHECK(mini.model.k_max == 50);  // default cap
  CHECK(mini.seed == 0);

  write_text(t / "noforms.json", R"({
    "games": "default", "model": {"kind": "dch"}, "subjects_per_role": 4
  })");
  CHECK_THROWS_AS(sim_config_from_json_file(t / "noforms.json"), ValidationError);
}
