#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "centipede/data.hpp"
#include "centipede/solvers.hpp"

namespace centipede {

struct SimConfig {
  std::string session_id = "sim";
  std::vector<NamedGame> games;
  std::vector<Form> forms;
  ModelSpec model{};
  int subjects_per_role = 0;
  std::uint64_t seed = 0;
  SolverConfig solver{};
};

// Draw each subject's level once (held fixed across games and forms), pair
// player-1 subject i with player-2 subject (i+g) mod n in game g (round-robin
// without repetition; the same pairing is reused across forms), and sample
// paths/strategies from the solved model.  Row order is canonical: by
// player-1 subject, then game, then form.  Streams derive from
// (seed, role, subject[, form, game]), so adding games or forms never
// perturbs earlier draws.
Dataset simulate(const SimConfig& cfg);

}  // namespace centipede
