#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gr1kit/arena.hpp"
#include "gr1kit/gr1.hpp"
#include "gr1kit/sim.hpp"
#include "gr1kit/speclang.hpp"

namespace gr1kit::check {

class AdversaryNotFinite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Violation {
  /// `step <k>`, `node <id>` or similar.
  std::string where;
  /// Clause text or goal identifier.
  std::string clause;
  std::string description;
};

struct Verdict {
  bool passed = true;
  std::vector<Violation> violations;
  /// lasso_check only: recurrence window bound; nullopt when unbounded.
  std::optional<std::uint64_t> window;
  /// lasso_check only: number of product states explored.
  std::size_t product_size = 0;

  void add(std::string where, std::string clause, std::string description);
};

/// Every non-frozen transition against all safety clauses; frozen
/// (human-away) steps must repeat the previous snapshot; snapshot 0 against
/// the safety clauses that only read next-step values.
Verdict check_safety(const sim::Trace& trace, const speclang::SpecDocument& doc);

/// Fails if `window` consecutive steps pass without `goal` holding.
/// Human-away steps neither count nor reset the run.
Verdict check_recurrence(const sim::Trace& trace, const speclang::Expr& goal, const speclang::SpecDocument& doc,
                         std::uint64_t window);

/// Exact liveness on the product of strategy nodes and adversary modes.
/// Supported adversaries: greedy, scripted with a greedy fallback, and
/// all_moves (every strategy edge). Also reports the recurrence window: one
/// more than the longest goal-free path, maximized over system goals.
Verdict lasso_check(const gr1::Strategy& strategy, const sim::Adversary& adversary, const speclang::SpecDocument& doc);

/// Structural closure of a strategy against an arena. With a synthesis
/// result, also checks that node states are winning and the goal-advance
/// rule.
Verdict verify_strategy_closure(const gr1::Strategy& strategy, const arena::GameArena& arena,
                                const gr1::SynthesisResult* result = nullptr);

std::string render_text(const Verdict& v);
std::string render_json(const Verdict& v);

}  // namespace gr1kit::check
