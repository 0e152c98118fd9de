#include <random>

#include "gr1kit/gr1.hpp"

namespace gr1kit::gr1 {
namespace {

// Explicit max-parity game. Player 0 (even) is the system.
struct ParityGame {
  std::vector<int> owner;
  std::vector<int> priority;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<std::vector<std::size_t>> pred;

  std::size_t add(int own, int prio) {
    owner.push_back(own);
    priority.push_back(prio);
    succ.emplace_back();
    pred.emplace_back();
    return owner.size() - 1;
  }
  void edge(std::size_t u, std::size_t v) {
    succ[u].push_back(v);
    pred[v].push_back(u);
  }
};

using Mask = std::vector<char>;

class Zielonka {
 public:
  explicit Zielonka(const ParityGame& g) : g_(g) {}

  // Returns, for every node of `alive`, whether player 0 wins.
  Mask solve(Mask alive) {
    Mask win0(g_.owner.size(), 0);
    solve_into(std::move(alive), win0);
    return win0;
  }

 private:
  // Nodes in `alive` from which `player` forces a visit to `target`.
  Mask attractor(const Mask& alive, const Mask& target, int player) const {
    const std::size_t n = g_.owner.size();
    Mask in(n, 0);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::size_t> work;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      for (std::size_t w : g_.succ[v]) count[v] += alive[w] ? 1 : 0;
      if (target[v]) {
        in[v] = 1;
        work.push_back(v);
      }
    }
    while (!work.empty()) {
      const std::size_t w = work.back();
      work.pop_back();
      for (std::size_t v : g_.pred[w]) {
        if (!alive[v] || in[v]) continue;
        if (g_.owner[v] == player || --count[v] == 0) {
          in[v] = 1;
          work.push_back(v);
        }
      }
    }
    return in;
  }

  void solve_into(Mask alive, Mask& win0) {
    const std::size_t n = g_.owner.size();
    while (true) {
      int top = -1;
      for (std::size_t v = 0; v < n; ++v)
        if (alive[v]) top = std::max(top, g_.priority[v]);
      if (top < 0) return;
      const int player = top % 2;
      Mask target(n, 0);
      for (std::size_t v = 0; v < n; ++v) target[v] = alive[v] && g_.priority[v] == top;
      const Mask a = attractor(alive, target, player);
      Mask rest(n, 0);
      for (std::size_t v = 0; v < n; ++v) rest[v] = alive[v] && !a[v];
      Mask sub_win0(n, 0);
      solve_into(rest, sub_win0);
      Mask opp(n, 0);
      bool any_opp = false;
      for (std::size_t v = 0; v < n; ++v) {
        if (!rest[v]) continue;
        const bool won_by_opp = (player == 0) ? !sub_win0[v] : sub_win0[v];
        opp[v] = won_by_opp;
        any_opp = any_opp || won_by_opp;
      }
      if (!any_opp) {
        if (player == 0)
          for (std::size_t v = 0; v < n; ++v)
            if (alive[v]) win0[v] = 1;
        return;
      }
      const Mask b = attractor(alive, opp, 1 - player);
      for (std::size_t v = 0; v < n; ++v) {
        if (!b[v]) continue;
        if (player == 1) win0[v] = 1;
        alive[v] = 0;
      }
    }
  }

  const ParityGame& g_;
};

}  // namespace

StateSet brute_force_oracle(const GameArena& a, const std::vector<StateSet>& env_live_in,
                            const std::vector<StateSet>& sys_live, std::size_t max_states) {
  const std::size_t n = a.state_count();
  if (n > max_states) throw TooLarge("oracle limited to " + std::to_string(max_states) + " states, arena has " + std::to_string(n));
  if (sys_live.empty()) throw std::invalid_argument("at least one system liveness goal is required");
  std::vector<StateSet> env_live = env_live_in;
  if (env_live.empty()) env_live.push_back(StateSet(n).set());
  const std::size_t ne = env_live.size();
  const std::size_t ns = sys_live.size();

  // Environment positions (s, i, j) carry both goal counters. The system
  // counter wrapping scores 2, the environment counter wrapping scores 1.
  ParityGame g;
  const std::size_t sys_win = g.add(0, 2);
  const std::size_t env_win = g.add(1, 1);
  g.edge(sys_win, sys_win);
  g.edge(env_win, env_win);
  auto env_pos = [&](std::size_t s, std::size_t i, std::size_t j) { return 2 + (s * ne + i) * ns + j; };
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < ne; ++i)
      for (std::size_t j = 0; j < ns; ++j) {
        int prio = 0;
        if (j == 0 && sys_live[0].test(s)) prio = 2;
        else if (i == 0 && env_live[0].test(s)) prio = 1;
        g.add(1, prio);
      }
  for (std::size_t s = 0; s < n; ++s) {
    const auto envs = a.env_moves(static_cast<StateIndex>(s));
    for (std::size_t i = 0; i < ne; ++i)
      for (std::size_t j = 0; j < ns; ++j) {
        const std::size_t u = env_pos(s, i, j);
        if (envs.empty()) {
          g.edge(u, sys_win);
          continue;
        }
        const std::size_t i2 = env_live[i].test(s) ? (i + 1) % ne : i;
        const std::size_t j2 = sys_live[j].test(s) ? (j + 1) % ns : j;
        for (std::size_t k = 0; k < envs.size(); ++k) {
          const std::size_t v = g.add(0, 0);
          g.edge(u, v);
          const auto ys = a.sys_moves_at(static_cast<StateIndex>(s), k);
          if (ys.empty()) g.edge(v, env_win);
          for (Assignment y : ys) g.edge(v, env_pos(a.successor(envs[k], y), i2, j2));
        }
      }
  }
  const Mask win0 = Zielonka(g).solve(Mask(g.owner.size(), 1));
  StateSet out(n);
  for (std::size_t s = 0; s < n; ++s)
    if (win0[env_pos(s, 0, 0)]) out.set(s);
  return out;
}

RandomInstance random_arena(std::uint64_t seed, const RandomArenaParams& p) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t bound) { return rng() % bound; };
  auto chance = [&](double prob) { return static_cast<double>(rng() % 1000000) < prob * 1000000.0; };

  int env_values = 1 + static_cast<int>(pick(static_cast<std::uint64_t>(p.max_env_values)));
  int sys_values = 1 + static_cast<int>(pick(static_cast<std::uint64_t>(p.max_sys_values)));
  while (static_cast<std::size_t>(env_values * sys_values) > p.max_states) {
    if (env_values >= sys_values) --env_values;
    else --sys_values;
  }
  std::vector<speclang::VarDecl> vars = {
      {"e", speclang::Owner::env, speclang::Domain::int_range(0, env_values - 1)},
      {"y", speclang::Owner::sys, speclang::Domain::int_range(0, sys_values - 1)},
  };
  arena::VarSpace space(vars);
  const std::size_t n = space.state_count();

  std::vector<std::vector<Assignment>> env_moves(n);
  std::vector<std::vector<std::vector<Assignment>>> sys_moves(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (Assignment e = 0; e < static_cast<Assignment>(env_values); ++e) {
      if (!chance(p.env_density)) continue;
      env_moves[s].push_back(e);
      std::vector<Assignment> ys;
      for (Assignment y = 0; y < static_cast<Assignment>(sys_values); ++y)
        if (chance(p.sys_density)) ys.push_back(y);
      sys_moves[s].push_back(std::move(ys));
    }
  }
  std::vector<Assignment> env_init;
  StateSet initial(n);
  for (Assignment e = 0; e < static_cast<Assignment>(env_values); ++e) {
    if (!chance(0.5)) continue;
    env_init.push_back(e);
    for (Assignment y = 0; y < static_cast<Assignment>(sys_values); ++y)
      if (chance(0.5)) initial.set(space.compose(e, y));
  }
  auto goals = [&](int count, double density) {
    std::vector<StateSet> out;
    for (int g = 0; g < count; ++g) {
      StateSet set(n);
      for (std::size_t s = 0; s < n; ++s)
        if (chance(density)) set.set(s);
      out.push_back(std::move(set));
    }
    return out;
  };
  RandomInstance inst;
  const int env_goals = static_cast<int>(pick(static_cast<std::uint64_t>(p.max_goals) + 1));
  const int sys_goals = 1 + static_cast<int>(pick(static_cast<std::uint64_t>(p.max_goals)));
  inst.env_live = goals(env_goals, 0.3);
  inst.sys_live = goals(sys_goals, 0.3);
  inst.arena = GameArena::from_relations(std::move(space), std::move(env_moves), std::move(sys_moves), std::move(env_init),
                                         std::move(initial));
  return inst;
}

}  // namespace gr1kit::gr1
