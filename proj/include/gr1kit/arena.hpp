#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "gr1kit/speclang.hpp"

namespace gr1kit::arena {

using speclang::Valuation;
using StateSet = boost::dynamic_bitset<std::uint64_t>;
using StateIndex = std::uint32_t;
/// Mixed-radix index of an assignment to the environment (or system)
/// variables only.
using Assignment = std::uint32_t;

class CapacityExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Variable layout of a game: environment variables first, then system
/// variables. A state index is the mixed-radix encoding of its valuation with
/// variable 0 as the least significant digit, so
/// `state = env_assignment + env_assignment_count() * sys_assignment`.
class VarSpace {
 public:
  VarSpace() = default;
  /// Throws CapacityExceeded if the valuation space exceeds `max_states`.
  explicit VarSpace(std::vector<speclang::VarDecl> vars, std::uint64_t max_states = std::uint64_t{1} << 24);

  const std::vector<speclang::VarDecl>& vars() const { return vars_; }
  int var_count() const { return static_cast<int>(vars_.size()); }
  int env_var_count() const { return env_vars_; }

  std::uint64_t state_count() const { return env_count_ * sys_count_; }
  std::uint64_t env_assignment_count() const { return env_count_; }
  std::uint64_t sys_assignment_count() const { return sys_count_; }

  StateIndex encode(std::span<const int> valuation) const;
  Valuation decode(StateIndex s) const;
  void decode_into(StateIndex s, std::span<int> out) const;

  StateIndex compose(Assignment env, Assignment sys) const {
    return static_cast<StateIndex>(env + env_count_ * sys);
  }
  Assignment env_part(StateIndex s) const { return static_cast<Assignment>(s % env_count_); }
  Assignment sys_part(StateIndex s) const { return static_cast<Assignment>(s / env_count_); }

  /// Values of the environment (resp. system) variables of an assignment.
  Valuation decode_env(Assignment a) const;
  Valuation decode_sys(Assignment a) const;

  bool operator==(const VarSpace& o) const { return vars_ == o.vars_; }

 private:
  std::vector<speclang::VarDecl> vars_;
  int env_vars_ = 0;
  std::uint64_t env_count_ = 1;
  std::uint64_t sys_count_ = 1;
  std::vector<std::uint64_t> stride_;
};

struct BuildOptions {
  std::uint64_t max_states = std::uint64_t{1} << 24;
};

class GameArena;
GameArena build_arena(const speclang::SpecDocument& doc, const BuildOptions& opts);

/// Explicit two-player game. Each step the environment picks the next values
/// of its variables, then the system picks the next values of its own.
class GameArena {
 public:
  GameArena() = default;

  const VarSpace& space() const { return space_; }
  std::size_t state_count() const { return env_offsets_.empty() ? 0 : env_offsets_.size() - 1; }

  /// Legal next environment assignments at `s`, ascending. Empty means the
  /// environment is deadlocked (the system wins from `s`).
  std::span<const Assignment> env_moves(StateIndex s) const {
    return {env_moves_.data() + env_offsets_[s], env_moves_.data() + env_offsets_[s + 1]};
  }
  /// Legal system responses for the `slot`-th entry of env_moves(s).
  std::span<const Assignment> sys_moves_at(StateIndex s, std::size_t slot) const {
    std::size_t k = env_offsets_[s] + slot;
    return {sys_moves_.data() + sys_offsets_[k], sys_moves_.data() + sys_offsets_[k + 1]};
  }
  /// Legal system responses to env assignment `e` at `s`; empty if `e` is not
  /// a legal environment move there.
  std::span<const Assignment> sys_moves(StateIndex s, Assignment e) const;

  StateIndex successor(Assignment env, Assignment sys) const { return space_.compose(env, sys); }

  /// Environment assignments satisfying the environment initial condition.
  const std::vector<Assignment>& env_init() const { return env_init_; }
  /// States whose env part is in env_init() and which satisfy the system
  /// initial condition.
  const StateSet& initial_states() const { return initial_; }

  std::size_t env_move_count() const { return env_moves_.size(); }
  std::size_t sys_move_count() const { return sys_moves_.size(); }

  /// One line per (state, env move, sys move): `state TAB env TAB sys`.
  void dump(std::ostream& os) const;

  /// Explicit construction. `env_moves[s]` lists env assignments of state s,
  /// `sys_moves[s][k]` the responses to `env_moves[s][k]`. Lists are sorted.
  static GameArena from_relations(VarSpace space, std::vector<std::vector<Assignment>> env_moves,
                                  std::vector<std::vector<std::vector<Assignment>>> sys_moves,
                                  std::vector<Assignment> env_init, StateSet initial_states);

 private:
  friend GameArena build_arena(const speclang::SpecDocument& doc, const BuildOptions& opts);

  VarSpace space_;
  std::vector<std::uint64_t> env_offsets_;
  std::vector<Assignment> env_moves_;
  std::vector<std::uint64_t> sys_offsets_;
  std::vector<Assignment> sys_moves_;
  std::vector<Assignment> env_init_;
  StateSet initial_;
};

/// Enumerates the valuation space of `doc` and computes both move relations by
/// clause evaluation. Throws CapacityExceeded above `opts.max_states`.
GameArena build_arena(const speclang::SpecDocument& doc, const BuildOptions& opts = {});

/// States satisfying a current-step predicate.
StateSet state_predicate(const VarSpace& space, const speclang::Expr& pred);

}  // namespace gr1kit::arena
