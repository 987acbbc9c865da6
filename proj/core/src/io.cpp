#include "centipede/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace centipede {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

json parse_json(const std::string& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

const json& need(const json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end())
    throw ValidationError(path + ": missing required key '" + key + "'");
  return *it;
}

GameSpec game_spec_from_json(const json& j, const std::string& path) {
  GameSpec spec;
  spec.family = family_from_string(need(j, "family", path).get<std::string>());
  if (spec.family != Family::Custom) spec.c = need(j, "c", path).get<double>();
  else if (j.contains("c")) spec.c = j["c"].get<double>();
  if (j.contains("pi")) spec.pi = j["pi"].get<double>();
  spec.stages = need(j, "stages", path).get<int>();
  if (j.contains("rescale")) {
    const json& r = j["rescale"];
    spec.rescale.a = need(r, "a", path).get<double>();
    spec.rescale.b = need(r, "b", path).get<double>();
  }
  if (j.contains("payoffs")) {
    for (const auto& pair : j["payoffs"]) {
      if (!pair.is_array() || pair.size() != 2)
        throw ValidationError(path + ": each payoffs entry must be [X, Y]");
      spec.payoffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
  }
  return spec;
}

json game_spec_to_json(const GameSpec& spec) {
  json j;
  j["family"] = to_string(spec.family);
  j["c"] = spec.c;
  if (spec.family == Family::Exponential) j["pi"] = spec.pi;
  j["stages"] = spec.stages;
  j["rescale"] = {{"a", spec.rescale.a}, {"b", spec.rescale.b}};
  if (spec.family == Family::Custom) {
    json pays = json::array();
    for (const auto& [x, y] : spec.payoffs) pays.push_back({x, y});
    j["payoffs"] = std::move(pays);
  }
  return j;
}

void dump_to(const std::string& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json profile_to_json(const Solution& sol, const Profile& prof) {
  const int D = sol.half_stages;
  json out;
  for (int r = 0; r < 2; ++r) {
    json side;
    const auto& v = prof[static_cast<std::size_t>(r)];
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::string key;
      if (sol.form == Form::DirectResponse)
        key = std::to_string(own_node(r + 1, static_cast<int>(i)));
      else if (sol.form == Form::ReducedStrategy)
        key = rs_label(static_cast<int>(i), D);
      else
        key = fs_label(static_cast<int>(i), D);
      side[key] = v[i];
    }
    out[r == 0 ? "p1" : "p2"] = std::move(side);
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

GameSpec game_spec_from_json_file(const std::string& path) {
  return game_spec_from_json(parse_json(path), path);
}

void write_game_spec_json(const std::string& path, const GameSpec& spec) {
  dump_to(path, game_spec_to_json(spec));
}

std::vector<NamedGame> games_from_json_file(const std::string& path) {
  const json j = parse_json(path);
  const json& games = need(j, "games", path);
  if (games.is_string() && games.get<std::string>() == "default")
    return default_game_set();
  if (!games.is_array() || games.empty())
    throw ValidationError(path + ": 'games' must be a non-empty array or \"default\"");
  std::vector<NamedGame> out;
  for (const auto& entry : games) {
    NamedGame ng;
    ng.id = need(entry, "id", path).get<std::string>();
    ng.spec = game_spec_from_json(entry, path);
    out.push_back(std::move(ng));
  }
  return out;
}

void write_games_json(const std::string& path, const std::vector<NamedGame>& games) {
  json arr = json::array();
  for (const auto& ng : games) {
    json j = game_spec_to_json(ng.spec);
    j["id"] = ng.id;
    arr.push_back(std::move(j));
  }
  dump_to(path, json{{"games", std::move(arr)}});
}

LevelPrior prior_from_json_file(const std::string& path) {
  const json j = parse_json(path);
  LevelPrior prior;
  prior.tau = need(j, "tau", path).get<double>();
  const int k_max = need(j, "k_max", path).get<int>();
  if (j.contains("probs")) {
    prior.probs = j["probs"].get<std::vector<double>>();
    if (static_cast<int>(prior.probs.size()) != k_max + 1)
      throw ValidationError(path + ": probs must have k_max+1 entries");
    double z = 0.0;
    for (double p : prior.probs) {
      if (p < 0.0) throw ValidationError(path + ": negative prior probability");
      z += p;
    }
    if (std::fabs(z - 1.0) > 1e-9)
      throw ValidationError(path + ": prior probabilities must sum to 1");
  } else {
    prior = poisson_prior(prior.tau, k_max);
  }
  return prior;
}

void write_prior_json(const std::string& path, const LevelPrior& prior) {
  dump_to(path, json{{"tau", prior.tau},
                     {"k_max", prior.k_max()},
                     {"probs", prior.probs}});
}

void write_solution_json(const std::string& path, const Solution& sol) {
  json j;
  j["kind"] = to_string(sol.kind);
  j["form"] = to_string(sol.form);
  j["stages"] = 2 * sol.half_stages;
  if (sol.kind == SolverKind::AQRE) {
    j["lambda"] = sol.lambda;
    j["profile"] = profile_to_json(sol, sol.levels.at(0));
    j["residual"] = sol.residual;
    j["homotopy_steps"] = sol.homotopy_steps;
  } else {
    j["tau"] = sol.tau;
    if (sol.kind == SolverKind::QDCH) j["lambda"] = sol.lambda;
    json levels = json::array();
    for (std::size_t k = 0; k < sol.levels.size(); ++k) {
      json lk = profile_to_json(sol, sol.levels[k]);
      lk["level"] = static_cast<int>(k);
      levels.push_back(std::move(lk));
    }
    j["levels"] = std::move(levels);
  }
  dump_to(path, j);
}

Dataset dataset_from_csv_file(const std::string& data_path,
                              const std::string& games_path) {
  Dataset data;
  for (const auto& ng : games_from_json_file(games_path))
    data.games.emplace(ng.id, ng.spec);

  auto in = open_in(data_path);
  std::string line;
  int line_no = 0;
  const auto fail = [&](const std::string& msg) -> ValidationError {
    return ValidationError(data_path + " line " + std::to_string(line_no) + ": " + msg);
  };
  static const char* kHeader =
      "session_id,subject_id,pair_id,role,game_id,form,record_type,node,choice";
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kHeader) throw fail("expected header '" + std::string(kHeader) + "'");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 9) throw fail("expected 9 fields, got " + std::to_string(f.size()));
    Observation row;
    row.session_id = f[0];
    row.subject_id = f[1];
    row.pair_id = f[2];
    try {
      row.role = std::stoi(f[3]);
    } catch (const std::exception&) {
      throw fail("role must be an integer");
    }
    row.game_id = f[4];
    const auto git = data.games.find(row.game_id);
    if (git == data.games.end()) throw fail("unknown game_id '" + row.game_id + "'");
    const int D = git->second.stages / 2;
    try {
      row.form = form_from_string(f[5]);
      if (f[6] == "node") {
        row.is_node = true;
        try {
          row.node = std::stoi(f[7]);
        } catch (const std::exception&) {
          throw ValidationError("node must be an integer");
        }
        if (f[8] != "T" && f[8] != "P") throw ValidationError("choice must be T or P");
        row.take = f[8] == "T";
      } else if (f[6] == "strategy") {
        row.is_node = false;
        if (!f[7].empty()) throw ValidationError("strategy rows must leave node empty");
        row.strategy = row.form == Form::ReducedStrategy ? rs_index(f[8], D)
                       : row.form == Form::FullStrategy
                           ? fs_index(f[8], D)
                           : throw ValidationError("dr rows must be node records");
      } else {
        throw ValidationError("record_type must be node or strategy");
      }
    } catch (const ValidationError& e) {
      throw fail(e.what());
    }
    data.rows.push_back(std::move(row));
  }
  if (line_no == 0) throw ValidationError(data_path + ": empty file (missing header)");
  try {
    data.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(data_path + ": " + e.what());
  }
  return data;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  auto out = open_out(path);
  out << "session_id,subject_id,pair_id,role,game_id,form,record_type,node,choice\n";
  for (const auto& row : data.rows) {
    const int D = data.games.at(row.game_id).stages / 2;
    out << row.session_id << ',' << row.subject_id << ',' << row.pair_id << ','
        << row.role << ',' << row.game_id << ',' << to_string(row.form) << ',';
    if (row.is_node) {
      out << "node," << row.node << ',' << (row.take ? 'T' : 'P') << '\n';
    } else {
      out << "strategy,,"
          << (row.form == Form::ReducedStrategy ? rs_label(row.strategy, D)
                                                : fs_label(row.strategy, D))
          << '\n';
    }
  }
}

void write_scan_csv(const std::string& path, const DesignScan& scan) {
  auto out = open_out(path);
  out << "c,supnorm,status\n";
  for (const auto& pt : scan.points) {
    std::string status = pt.status;
    for (char& ch : status)
      if (ch == ',' || ch == '\n') ch = ';';
    out << format_double(pt.c) << ','
        << (pt.status == "ok" ? format_double(pt.supnorm) : std::string{}) << ','
        << status << '\n';
  }
}

void write_cdf_csv(const std::string& path, const TerminalDistribution& a,
                   const TerminalDistribution& b) {
  if (a.probs.size() != b.probs.size())
    throw ValidationError("write_cdf_csv: distributions have different lengths");
  auto out = open_out(path);
  out << "node,cdf_a,cdf_b\n";
  const auto ca = terminal_cdf(a), cb = terminal_cdf(b);
  for (std::size_t j = 0; j < ca.size(); ++j)
    out << (j + 1) << ',' << format_double(ca[j]) << ',' << format_double(cb[j]) << '\n';
}

void write_fit_json(const std::string& path, const FitResult& fit) {
  json j;
  j["model"] = to_string(fit.kind);
  j["tau"] = fit.tau ? json(*fit.tau) : json(nullptr);
  j["lambda"] = fit.lambda ? json(*fit.lambda) : json(nullptr);
  j["log_likelihood"] = fit.log_likelihood;
  j["n_obs"] = fit.n_obs;
  j["boundary"] = fit.boundary;
  j["se_tau"] = fit.se_tau ? json(*fit.se_tau) : json(nullptr);
  j["se_lambda"] = fit.se_lambda ? json(*fit.se_lambda) : json(nullptr);
  if (fit.bootstrap_replicates > 0)
    j["bootstrap"] = {{"replicates", fit.bootstrap_replicates},
                      {"seed", fit.bootstrap_seed},
                      {"failures", fit.bootstrap_failures}};
  dump_to(path, j);
}

SimConfig sim_config_from_json_file(const std::string& path) {
  const json j = parse_json(path);
  SimConfig cfg;
  if (j.contains("session_id")) cfg.session_id = j["session_id"].get<std::string>();

  const json& games = need(j, "games", path);
  if (games.is_string() && games.get<std::string>() == "default") {
    cfg.games = default_game_set();
  } else if (games.is_array()) {
    for (const auto& entry : games) {
      NamedGame ng;
      ng.id = need(entry, "id", path).get<std::string>();
      ng.spec = game_spec_from_json(entry, path);
      cfg.games.push_back(std::move(ng));
    }
  } else {
    throw ValidationError(path + ": 'games' must be an array or \"default\"");
  }

  for (const auto& f : need(j, "forms", path))
    cfg.forms.push_back(form_from_string(f.get<std::string>()));

  const json& model = need(j, "model", path);
  cfg.model.kind = solver_kind_from_string(need(model, "kind", path).get<std::string>());
  if (model.contains("tau")) cfg.model.tau = model["tau"].get<double>();
  if (model.contains("lambda")) cfg.model.lambda = model["lambda"].get<double>();
  if (model.contains("k_max")) cfg.model.k_max = model["k_max"].get<int>();

  cfg.subjects_per_role = need(j, "subjects_per_role", path).get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  return cfg;
}

}  // namespace centipede
