#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "centipede/error.hpp"

namespace centipede {

enum class Family { Linear, Exponential, Constant, Custom };

enum class Form { DirectResponse, ReducedStrategy, FullStrategy };

const char* to_string(Family f);
const char* to_string(Form f);  // "dr" / "rs" / "fs"
Family family_from_string(const std::string& s);
Form form_from_string(const std::string& s);

// Positive affine map applied to every payoff: x -> a*x + b.
struct Rescale {
  double a = 1.0;
  double b = 0.0;
};

struct GameSpec {
  Family family = Family::Linear;
  double c = 0.5;
  double pi = 2.0;  // exponential multiplier; ignored by other families
  int stages = 6;   // 2D decision nodes, D per player, D >= 2
  Rescale rescale{};
  // Custom family only: explicit (X_j, Y_j) pairs for nodes 1..stages+1,
  // given before rescaling.
  std::vector<std::pair<double, double>> payoffs{};
};

// Alternating-move two-player centipede.  Player 1 moves at odd nodes,
// Player 2 at even nodes; "take" at node j ends the game at node j and
// passing everywhere ends it at node 2D+1.
class CentipedeGame {
 public:
  explicit CentipedeGame(GameSpec spec);

  const GameSpec& spec() const { return spec_; }
  int stages() const { return spec_.stages; }            // 2D
  int half_stages() const { return spec_.stages / 2; }   // D
  int terminal_count() const { return spec_.stages + 1; }

  // payoff to `role` (1 or 2) when the game ends at `node` (1..2D+1)
  double payoff(int role, int node) const {
    return pay_[static_cast<std::size_t>(node - 1)][static_cast<std::size_t>(role - 1)];
  }

 private:
  GameSpec spec_;
  std::vector<std::array<double, 2>> pay_;  // [node-1][role-1]
};

// Validates the fields (error messages name the violated bound), evaluates the
// family's payoff formula, applies the rescale, and checks mover-dominance:
// for odd j <= 2D-1, X_j > X_{j+1}; for even j <= 2D, Y_j > Y_{j+1}.
CentipedeGame make_game(const GameSpec& spec);

// The mover at a node: 1 at odd nodes, 2 at even.
inline int mover(int node) { return (node % 2 == 1) ? 1 : 2; }

// game node of a role's i-th own decision node (i is 0-based)
inline int own_node(int role, int i) { return 2 * i + (role == 1 ? 1 : 2); }

// --- strategy bookkeeping -------------------------------------------------
// Reduced strategies (RS): index m in 0..D; m < D means "take at own node
// m+1", m == D means always pass.  Text labels "T", "PT", "PPT", "PPP" (D=3).
// Full strategies (FS): index s in 0..2^D-1, enumerated lexicographically in
// the label alphabet T < P; character i of the label is the plan at own node
// i+1, so bit (D-1-i) of s is 1 iff the plan passes there.

inline int rs_count(int D) { return D + 1; }
inline int fs_count(int D) { return 1 << D; }

std::string rs_label(int m, int D);
std::string fs_label(int s, int D);
int rs_index(const std::string& label, int D);
int fs_index(const std::string& label, int D);

// reduced class of a full plan: position of the first T, or D if all-pass
int fs_to_rs(int s, int D);
std::string reduce_strategy(const std::string& full);

// Terminal node reached by reduced strategies (0-based indices m1, m2):
// the earlier of the two planned take nodes; both-pass gives 2D+1.
int terminal_node(int m1, int m2, int D);
int terminal_node(const std::string& s1, const std::string& s2, int D);

// Payoff matrices over the form's strategy set; entry [s1][s2] is the payoff
// at the induced terminal node.  DirectResponse has no static strategy set
// and is rejected.
std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>>
strategy_payoff_matrix(const CentipedeGame& game, Form form);

// The six-game experimental battery in its final payoff units: linear games
// mapped by 100x+50, exponential by 4x, constant by 250x.
struct NamedGame {
  std::string id;
  GameSpec spec;
};
std::vector<NamedGame> default_game_set();

}  // namespace centipede
