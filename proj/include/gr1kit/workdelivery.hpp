#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gr1kit/speclang.hpp"

namespace gr1kit::workdelivery {

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario parameters. Backlog quantities are in integer units.
struct Params {
  int N = 3;
  int blMax = 30;
  int gammaUnits = 1;
  int deltaUnits = 15;
  int blUpper = 26;
  int kMove = 2;
  int kDrop = 5;
  /// Initial backlog range; a fixed value has blInitLo == blInitHi.
  int blInitLo = 15;
  int blInitHi = 15;
  double tdSeconds = 10.0;
  bool hfInit = false;
};

/// Throws InvalidParams naming the first violated constraint.
void validate(const Params& p);

/// Applies one `key=value` assignment. Throws InvalidParams on unknown keys or
/// malformed values. `blInit` accepts `n` or `lo..hi`.
void apply_param(Params& p, std::string_view assignment);
/// Reads a config file body: one `key=value` per line, `#` comments.
Params parse_config(std::string_view text, Params base = {});

/// The scenario as spec text (with comments) and as a parsed document.
std::string emit_spec_text(const Params& p);
speclang::SpecDocument emit_spec(const Params& p);

enum class Mode { work, wait, refill };
std::string_view to_string(Mode m);

struct WorldState {
  int BL = 0;
  int RS = 0;
  int ACT = 0;
  bool HF = false;
  int tries = 0;
  bool S = false;
  /// O[j-1] is the obstacle flag of interior cell j.
  std::vector<bool> O;
  /// The previous working step left the backlog unchanged.
  bool stalled = false;
};

/// Reads a world state from a valuation over the emitted variables.
WorldState world_state(std::span<const speclang::VarDecl> vars, std::span<const int> values);

/// Backlog values the environment may pick next, ascending.
std::vector<int> backlog_successors(const WorldState& s, const Params& p);

Mode human_mode(const WorldState& s, const Params& p);

}  // namespace gr1kit::workdelivery
