#include "centipede/game.hpp"

#include <cmath>
#include <sstream>

namespace centipede {

const char* to_string(Family f) {
  switch (f) {
    case Family::Linear: return "linear";
    case Family::Exponential: return "exponential";
    case Family::Constant: return "constant";
    case Family::Custom: return "custom";
  }
  return "?";
}

const char* to_string(Form f) {
  switch (f) {
    case Form::DirectResponse: return "dr";
    case Form::ReducedStrategy: return "rs";
    case Form::FullStrategy: return "fs";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "linear") return Family::Linear;
  if (s == "exponential" || s == "exp") return Family::Exponential;
  if (s == "constant" || s == "const") return Family::Constant;
  if (s == "custom") return Family::Custom;
  throw ValidationError("unknown family '" + s +
                        "' (expected linear|exponential|constant|custom)");
}

Form form_from_string(const std::string& s) {
  if (s == "dr") return Form::DirectResponse;
  if (s == "rs") return Form::ReducedStrategy;
  if (s == "fs") return Form::FullStrategy;
  throw ValidationError("unknown form '" + s + "' (expected dr|rs|fs)");
}

namespace {

[[noreturn]] void bound_error(const std::string& what) {
  throw ValidationError(what);
}

std::pair<double, double> raw_payoff(const GameSpec& s, int j) {
  const bool p1_moves = (j % 2 == 1);
  switch (s.family) {
    case Family::Linear: {
      const double big = 1.0 + (j - 1) * s.c, small = (j - 1) * s.c;
      return p1_moves ? std::pair{big, small} : std::pair{small, big};
    }
    case Family::Exponential: {
      const double big = s.c * std::pow(s.pi, j - 1), small = std::pow(s.pi, j - 1);
      return p1_moves ? std::pair{big, small} : std::pair{small, big};
    }
    case Family::Constant: {
      const double small = std::pow(s.c, j - 1), big = 2.0 - small;
      return p1_moves ? std::pair{big, small} : std::pair{small, big};
    }
    case Family::Custom:
      return s.payoffs[static_cast<std::size_t>(j - 1)];
  }
  bound_error("unhandled family");
}

}  // namespace

CentipedeGame::CentipedeGame(GameSpec spec) : spec_(std::move(spec)) {
  const GameSpec& s = spec_;
  if (s.stages < 4 || s.stages % 2 != 0)
    bound_error("stages must be even and >= 4, got " + std::to_string(s.stages));
  switch (s.family) {
    case Family::Linear:
      if (!(s.c > 0.0 && s.c < 1.0))
        bound_error("linear family requires 0 < c < 1");
      break;
    case Family::Constant:
      if (!(s.c > 0.0 && s.c < 1.0))
        bound_error("constant family requires 0 < c < 1");
      break;
    case Family::Exponential:
      if (!(s.c > 1.0)) bound_error("exponential family requires c > 1");
      if (!(s.pi > 1.0 && s.pi < s.c))
        bound_error("exponential family requires 1 < pi < c");
      break;
    case Family::Custom:
      if (static_cast<int>(s.payoffs.size()) != s.stages + 1)
        bound_error("custom family needs exactly stages+1 payoff pairs, got " +
                    std::to_string(s.payoffs.size()));
      break;
  }
  if (!(s.rescale.a > 0.0)) bound_error("rescale slope a must be > 0");

  pay_.resize(static_cast<std::size_t>(s.stages) + 1);
  for (int j = 1; j <= s.stages + 1; ++j) {
    auto [x, y] = raw_payoff(s, j);
    x = s.rescale.a * x + s.rescale.b;
    y = s.rescale.a * y + s.rescale.b;
    if (!std::isfinite(x) || !std::isfinite(y))
      bound_error("non-finite payoff at node " + std::to_string(j));
    pay_[static_cast<std::size_t>(j - 1)] = {x, y};
  }
  // Mover-dominance makes "take" myopically safe for the mover and pins the
  // unique Nash outcome at node 1.
  for (int j = 1; j <= s.stages; ++j) {
    const int r = mover(j);
    if (!(payoff(r, j) > payoff(r, j + 1)))
      bound_error("mover-dominance violated at node " + std::to_string(j) +
                  ": mover's take payoff must exceed the next node's");
  }
}

CentipedeGame make_game(const GameSpec& spec) { return CentipedeGame(spec); }

std::string rs_label(int m, int D) {
  if (m < 0 || m > D) throw ValidationError("reduced-strategy index out of range");
  if (m == D) return std::string(static_cast<std::size_t>(D), 'P');
  return std::string(static_cast<std::size_t>(m), 'P') + "T";
}

std::string fs_label(int s, int D) {
  if (s < 0 || s >= fs_count(D)) throw ValidationError("full-strategy index out of range");
  std::string out(static_cast<std::size_t>(D), 'T');
  for (int i = 0; i < D; ++i)
    if ((s >> (D - 1 - i)) & 1) out[static_cast<std::size_t>(i)] = 'P';
  return out;
}

int rs_index(const std::string& label, int D) {
  for (int m = 0; m <= D; ++m)
    if (label == rs_label(m, D)) return m;
  throw ValidationError("invalid reduced-strategy label '" + label + "'");
}

int fs_index(const std::string& label, int D) {
  if (static_cast<int>(label.size()) != D)
    throw ValidationError("full-strategy label '" + label + "' must have length " +
                          std::to_string(D));
  int s = 0;
  for (int i = 0; i < D; ++i) {
    const char ch = label[static_cast<std::size_t>(i)];
    if (ch != 'T' && ch != 'P')
      throw ValidationError("full-strategy label '" + label + "' may contain only T and P");
    if (ch == 'P') s |= 1 << (D - 1 - i);
  }
  return s;
}

int fs_to_rs(int s, int D) {
  for (int i = 0; i < D; ++i)
    if (((s >> (D - 1 - i)) & 1) == 0) return i;  // first T
  return D;
}

std::string reduce_strategy(const std::string& full) {
  const int D = static_cast<int>(full.size());
  return rs_label(fs_to_rs(fs_index(full, D), D), D);
}

int terminal_node(int m1, int m2, int D) {
  if (m1 < 0 || m1 > D || m2 < 0 || m2 > D)
    throw ValidationError("reduced-strategy index out of range");
  const int t1 = (m1 < D) ? own_node(1, m1) : 2 * D + 1;
  const int t2 = (m2 < D) ? own_node(2, m2) : 2 * D + 2;
  const int t = std::min(t1, t2);
  return (t > 2 * D) ? 2 * D + 1 : t;
}

int terminal_node(const std::string& s1, const std::string& s2, int D) {
  return terminal_node(rs_index(s1, D), rs_index(s2, D), D);
}

std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>>
strategy_payoff_matrix(const CentipedeGame& game, Form form) {
  if (form == Form::DirectResponse)
    throw ValidationError("strategy_payoff_matrix: DirectResponse has no static strategy set");
  const int D = game.half_stages();
  const int n = (form == Form::ReducedStrategy) ? rs_count(D) : fs_count(D);
  const auto red = [&](int s) {
    return form == Form::ReducedStrategy ? s : fs_to_rs(s, D);
  };
  std::vector u1(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  auto u2 = u1;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int t = terminal_node(red(a), red(b), D);
      u1[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = game.payoff(1, t);
      u2[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = game.payoff(2, t);
    }
  return {std::move(u1), std::move(u2)};
}

std::vector<NamedGame> default_game_set() {
  const Rescale lin{100.0, 50.0}, exp{4.0, 0.0}, cons{250.0, 0.0};
  return {
      {"linear-0.5", {Family::Linear, 0.5, 2.0, 6, lin, {}}},
      {"linear-0.8", {Family::Linear, 0.8, 2.0, 6, lin, {}}},
      {"exp-2.5", {Family::Exponential, 2.5, 2.0, 6, exp, {}}},
      {"exp-4", {Family::Exponential, 4.0, 2.0, 6, exp, {}}},
      {"const-0.4", {Family::Constant, 0.4, 2.0, 6, cons, {}}},
      {"const-0.8", {Family::Constant, 0.8, 2.0, 6, cons, {}}},
  };
}

}  // namespace centipede
