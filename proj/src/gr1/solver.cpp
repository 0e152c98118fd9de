#include <stdexcept>

#include "gr1kit/gr1.hpp"

namespace gr1kit::gr1 {
namespace {

class Solver {
 public:
  Solver(const GameArena& a, const SolveOptions& opts) : a_(a), opts_(opts), n_(a.state_count()) {}

  // States of `candidates` from which every env move has a sys answer into
  // `target`. Env deadlock counts as success.
  StateSet cpre(const StateSet& target, const StateSet& candidates) const {
    StateSet out(n_);
    for (auto s = candidates.find_first(); s != StateSet::npos; s = candidates.find_next(s)) {
      if (controllable(static_cast<StateIndex>(s), target)) out.set(s);
    }
    return out;
  }

  bool controllable(StateIndex s, const StateSet& target) const {
    const auto envs = a_.env_moves(s);
    for (std::size_t k = 0; k < envs.size(); ++k) {
      bool ok = false;
      for (Assignment y : a_.sys_moves_at(s, k)) {
        if (target.test(a_.successor(envs[k], y))) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  }

  SynthesisResult run(std::vector<StateSet> env_live, std::vector<StateSet> sys_live) {
    if (sys_live.empty()) throw std::invalid_argument("at least one system liveness goal is required");
    if (env_live.empty()) env_live.push_back(StateSet(n_).set());
    const std::size_t m = sys_live.size();
    const std::size_t ne = env_live.size();
    const StateSet all = StateSet(n_).set();

    SynthesisResult r;
    r.env_goals = env_live;
    r.sys_goals = sys_live;

    StateSet z = all;
    while (true) {
      StateSet next_z = z;
      std::vector<std::vector<std::uint32_t>> ranks(m);
      std::vector<std::vector<std::vector<StateSet>>> witness(m);
      for (std::size_t j = 0; j < m; ++j) {
        const StateSet goal_part = cpre(z, z & sys_live[j]);
        StateSet y(n_);
        ranks[j].assign(n_, kNoRank);
        witness[j].emplace_back();
        for (std::uint32_t rank = 1;; ++rank) {
          // Iterates only grow, so the fast path keeps the previous iterate and
          // tests only the states outside it. The checked path evaluates the
          // textbook operator on all of z.
          const StateSet start = opts_.check_monotonicity ? (goal_part | cpre(y, z)) : (goal_part | y | cpre(y, z - y));
          StateSet new_y(n_);
          std::vector<StateSet> xs;
          for (std::size_t i = 0; i < ne; ++i) {
            const StateSet escape = z - env_live[i];
            StateSet x = z;
            if (escape.none()) {
              x = start;
            } else {
              while (true) {
                const StateSet cand_x = escape & (opts_.check_monotonicity ? z : x);
                StateSet nx = start | cpre(x, cand_x);
                if (opts_.check_monotonicity && !nx.is_subset_of(x))
                  throw std::logic_error("inner greatest fixpoint iterate grew");
                if (nx == x) break;
                x = std::move(nx);
              }
            }
            new_y |= x;
            xs.push_back(std::move(x));
          }
          if (opts_.check_monotonicity && !y.is_subset_of(new_y)) throw std::logic_error("least fixpoint iterate shrank");
          if (new_y == y) break;
          for (auto s = new_y.find_first(); s != StateSet::npos; s = new_y.find_next(s))
            if (ranks[j][s] == kNoRank) ranks[j][s] = rank;
          witness[j].push_back(std::move(xs));
          y = std::move(new_y);
        }
        next_z &= y;
      }
      if (opts_.check_monotonicity && !next_z.is_subset_of(z)) throw std::logic_error("outer greatest fixpoint iterate grew");
      if (next_z == z) {
        r.y_rank = std::move(ranks);
        r.x_witness = std::move(witness);
        break;
      }
      z = std::move(next_z);
    }
    r.winning = std::move(z);
    r.realizable = is_realizable(r, a_);
    return r;
  }

 private:
  const GameArena& a_;
  SolveOptions opts_;
  std::size_t n_;
};

}  // namespace

SynthesisResult solve(const GameArena& a, const std::vector<StateSet>& env_live, const std::vector<StateSet>& sys_live,
                      const SolveOptions& opts) {
  for (const auto& g : env_live)
    if (g.size() != a.state_count()) throw std::invalid_argument("liveness set size does not match the arena");
  for (const auto& g : sys_live)
    if (g.size() != a.state_count()) throw std::invalid_argument("liveness set size does not match the arena");
  return Solver(a, opts).run(env_live, sys_live);
}

SynthesisResult solve(const GameArena& a, const speclang::SpecDocument& doc, const SolveOptions& opts) {
  std::vector<StateSet> env, sys;
  for (const auto& e : doc.env_liveness) env.push_back(arena::state_predicate(a.space(), e));
  for (const auto& e : doc.sys_liveness) sys.push_back(arena::state_predicate(a.space(), e));
  if (sys.empty()) sys.push_back(StateSet(a.state_count()).set());
  return solve(a, env, sys, opts);
}

bool is_realizable(const SynthesisResult& r, const GameArena& a) {
  const auto& space = a.space();
  const StateSet ok = r.winning & a.initial_states();
  for (Assignment e : a.env_init()) {
    bool found = false;
    for (Assignment y = 0; y < space.sys_assignment_count() && !found; ++y) found = ok.test(space.compose(e, y));
    if (!found) return false;
  }
  return true;
}

}  // namespace gr1kit::gr1
