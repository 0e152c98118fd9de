#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gr1kit/arena.hpp"
#include "gr1kit/gr1.hpp"

namespace gr1kit::sim {

using arena::Assignment;
using arena::StateIndex;
using arena::VarSpace;

class AdversaryIllegalMove : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class StrategyHole : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EventsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// `step=<n> set <var>=<val>` or `step=<n> human_away=<0|1> duration=<d>`.
struct Event {
  enum class Kind { set, human_away };
  Kind kind = Kind::set;
  int step = 0;
  std::string var;
  int value = 0;
  int duration = 0;
};

/// One event per line, `#` comments. Throws EventsError; events must be
/// sorted by step.
std::vector<Event> parse_events(std::string_view text);

enum class PolicyKind { uniform_random, greedy_min_bl, greedy_max_bl, scripted, interactive, all_moves };

/// Resolves the environment's choices. Greedy policies rank moves by the
/// next value of the variable `BL` (lowest index on ties, or when absent).
class Adversary {
 public:
  static Adversary uniform_random(std::uint64_t seed);
  static Adversary greedy_min_bl();
  static Adversary greedy_max_bl();
  /// Set-events override the named env variables where some legal move
  /// agrees; every other choice is made by `fallback`.
  static Adversary scripted(std::vector<Event> events, std::uint64_t seed,
                            PolicyKind fallback = PolicyKind::uniform_random);
  /// Line-oriented prompt: prints the state and numbered legal moves, reads
  /// an index. End of input ends the run.
  static Adversary interactive(std::istream& in, std::ostream& out);
  /// Marker for exhaustive analysis; cannot drive a simulation.
  static Adversary all_moves();

  PolicyKind kind() const { return kind_; }
  PolicyKind fallback() const { return fallback_; }
  const std::vector<Event>& events() const { return events_; }

  /// Picks a move for the transition producing snapshot `step`, given the
  /// current state (if any) and the legal moves. Returns nullopt only for an
  /// interactive session that reached end of input.
  std::optional<Assignment> choose(int step, std::optional<StateIndex> state, std::span<const Assignment> legal,
                                   const VarSpace& space);

 private:
  Adversary() = default;
  Assignment pick(PolicyKind kind, std::span<const Assignment> legal, const VarSpace& space);
  std::optional<Assignment> ask(std::optional<StateIndex> state, std::span<const Assignment> legal, const VarSpace& space);

  PolicyKind kind_ = PolicyKind::uniform_random;
  PolicyKind fallback_ = PolicyKind::uniform_random;
  std::mt19937_64 rng_;
  std::vector<Event> events_;
  std::istream* in_ = nullptr;
  std::ostream* out_ = nullptr;
};

struct TraceStep {
  int step = 0;
  double time_s = 0;
  speclang::Valuation values;
  bool human_away = false;
  /// Strategy node at this snapshot (unset for traces read from CSV).
  std::optional<std::uint32_t> node;
};

struct Trace {
  VarSpace space;
  double td = 10.0;
  std::vector<TraceStep> steps;
};

struct RunOptions {
  int max_steps = 180;
  double td = 10.0;
  /// Sleep td seconds per step.
  bool pace = false;
  /// Human-away events freeze the loop; set-events are ignored here.
  std::vector<Event> events;
  /// If given, legal env moves come from the arena and a missing strategy
  /// edge raises StrategyHole. Otherwise the strategy's edges are used.
  const arena::GameArena* arena = nullptr;
};

/// Closed-loop run: snapshot 0 is the initial node, each later snapshot is
/// one env choice plus the strategy's response, up to `max_steps`
/// transitions. Stops early on environment deadlock or interactive EOF.
Trace run(const gr1::Strategy& strategy, Adversary& adversary, const RunOptions& opts);

/// Work-delivery traces use the fixed column set
/// `step,time_s,RS,BL,HF,tries,S,O1..,mode,ACT,human_away` plus any further
/// variables; other traces use `step,time_s,<vars>,human_away`.
std::string trace_to_csv(const Trace& t);
/// Columns are matched by name against `space`. Throws std::runtime_error.
Trace trace_from_csv(std::string_view text, const VarSpace& space);

}  // namespace gr1kit::sim
