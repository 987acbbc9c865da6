#pragma once

#include <map>
#include <string>
#include <vector>

#include "centipede/game.hpp"

namespace centipede {

// One observed choice.  DR produces one row per decision node actually
// reached; RS/FS produce one strategy row per subject-game.
struct Observation {
  std::string session_id;
  std::string subject_id;
  std::string pair_id;
  int role = 1;  // 1 or 2
  std::string game_id;
  Form form = Form::DirectResponse;
  bool is_node = true;  // node record (DR) vs strategy record (RS/FS)
  int node = 0;         // DR: game node of the decision
  bool take = false;    // DR: action at that node
  int strategy = 0;     // RS/FS: 0-based strategy index for the form
};

struct Dataset {
  std::vector<Observation> rows;
  std::map<std::string, GameSpec> games;  // game_id -> spec

  // Referenced games exist; node parity matches role; strategy indices are
  // in range; each (pair_id, game_id) DR record set forms a consistent path
  // (contiguous nodes from 1, at most one take, only at the last node).
  void validate() const;
};

}  // namespace centipede
