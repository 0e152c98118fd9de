#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gr1kit/arena.hpp"
#include "gr1kit/speclang.hpp"

namespace gr1kit::gr1 {

using arena::Assignment;
using arena::GameArena;
using arena::StateIndex;
using arena::StateSet;

inline constexpr std::uint32_t kNoRank = std::numeric_limits<std::uint32_t>::max();

class NotRealizable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  /// Recompute every fixpoint iterate on the full state space and throw
  /// std::logic_error if Z grows or Y shrinks between iterations.
  bool check_monotonicity = false;
};

struct SynthesisResult {
  StateSet winning;
  bool realizable = false;
  /// Liveness predicates as state sets. An empty environment list is
  /// replaced by a single all-states goal.
  std::vector<StateSet> env_goals;
  std::vector<StateSet> sys_goals;
  /// y_rank[j][s]: smallest r >= 1 with s in the r-th iterate of the least
  /// fixpoint for system goal j (final outer iteration), kNoRank outside.
  std::vector<std::vector<std::uint32_t>> y_rank;
  /// x_witness[j][r][i]: inner greatest fixpoint for env goal i computed while
  /// building the r-th Y iterate of goal j. Index 0 is unused.
  std::vector<std::vector<std::vector<StateSet>>> x_witness;
};

SynthesisResult solve(const GameArena& a, const std::vector<StateSet>& env_live, const std::vector<StateSet>& sys_live,
                      const SolveOptions& opts = {});
/// Liveness predicates taken from the document's liveness sections.
SynthesisResult solve(const GameArena& a, const speclang::SpecDocument& doc, const SolveOptions& opts = {});

/// For every initial env assignment some initial state lies in `r.winning`.
bool is_realizable(const SynthesisResult& r, const GameArena& a);

struct StrategyEdge {
  Assignment env = 0;
  Assignment sys = 0;
  std::uint32_t next = 0;
};

struct StrategyNode {
  StateIndex state = 0;
  int goal = 0;
  /// Sorted by env assignment.
  std::vector<StrategyEdge> edges;
};

struct StrategyInit {
  Assignment env = 0;
  std::uint32_t node = 0;
};

/// Finite-memory controller: memory is the index of the system goal pursued.
struct Strategy {
  arena::VarSpace space;
  int goals = 1;
  std::vector<StrategyNode> nodes;
  std::vector<StrategyInit> init;

  const StrategyEdge* find_edge(std::uint32_t node, Assignment env) const;
  const StrategyInit* find_init(Assignment env) const;
};

/// Throws NotRealizable if `r` is not realizable.
Strategy extract_strategy(const SynthesisResult& r, const GameArena& a);

std::string strategy_to_json(const Strategy& s);
/// Throws std::runtime_error on malformed input.
Strategy strategy_from_json(const std::string& text);

/// Winning region by degeneralization into a parity game solved with
/// Zielonka's recursive algorithm. Throws TooLarge above `max_states`.
StateSet brute_force_oracle(const GameArena& a, const std::vector<StateSet>& env_live,
                            const std::vector<StateSet>& sys_live, std::size_t max_states = 10000);

struct RandomArenaParams {
  int max_env_values = 12;
  int max_sys_values = 12;
  std::size_t max_states = 200;
  int max_goals = 2;
  /// Per-pair probability that a move is legal.
  double env_density = 0.5;
  double sys_density = 0.4;
};

struct RandomInstance {
  GameArena arena;
  std::vector<StateSet> env_live;
  std::vector<StateSet> sys_live;
};

/// Seeded random game with one env and one sys variable.
RandomInstance random_arena(std::uint64_t seed, const RandomArenaParams& params = {});

}  // namespace gr1kit::gr1
