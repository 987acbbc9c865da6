#pragma once

#include <string>
#include <vector>

#include "centipede/data.hpp"
#include "centipede/estimate.hpp"
#include "centipede/predict.hpp"
#include "centipede/simulate.hpp"

namespace centipede {

// Shortest decimal rendering that round-trips the exact double; used for all
// CSV numeric fields so artifacts are byte-stable across runs and schedules.
std::string format_double(double x);

// game spec JSON: {family, c, pi?, stages, rescale: {a, b}, payoffs?}
GameSpec game_spec_from_json_file(const std::string& path);
void write_game_spec_json(const std::string& path, const GameSpec& spec);

// games table JSON: {"games": [{"id": ..., <spec fields>}, ...]};
// the string "default" in place of the array selects the built-in six games
std::vector<NamedGame> games_from_json_file(const std::string& path);
void write_games_json(const std::string& path, const std::vector<NamedGame>& games);

// prior JSON: {tau, k_max, probs[]}
LevelPrior prior_from_json_file(const std::string& path);
void write_prior_json(const std::string& path, const LevelPrior& prior);

// Solution JSON: per-level tables keyed by form-specific strategy labels
// (DR keys are node numbers); AQRE emits the level-free profile plus lambda,
// residual, and homotopy step count.
void write_solution_json(const std::string& path, const Solution& sol);

// dataset CSV (long format):
//   session_id,subject_id,pair_id,role,game_id,form,record_type,node,choice
// `choice` is T/P for node records and a strategy label for strategy records.
Dataset dataset_from_csv_file(const std::string& data_path,
                              const std::string& games_path);
void write_dataset_csv(const std::string& path, const Dataset& data);

void write_scan_csv(const std::string& path, const DesignScan& scan);     // c,supnorm,status
void write_cdf_csv(const std::string& path, const TerminalDistribution& a,
                   const TerminalDistribution& b);                        // node,cdf_a,cdf_b
void write_fit_json(const std::string& path, const FitResult& fit);

// simulation config JSON: {session_id?, games, forms, model: {kind, tau?,
// lambda?, k_max?}, subjects_per_role, seed?}
SimConfig sim_config_from_json_file(const std::string& path);

}  // namespace centipede
