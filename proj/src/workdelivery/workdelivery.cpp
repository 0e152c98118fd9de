#include "gr1kit/workdelivery.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace gr1kit::workdelivery {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParams(what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view key, std::string_view v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw InvalidParams("parameter " + std::string(key) + ": not an integer: '" + std::string(v) + "'");
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  std::string s(v);
  std::istringstream in(s);
  double out = 0;
  in >> out;
  if (!in || !in.eof()) throw InvalidParams("parameter " + std::string(key) + ": not a number: '" + s + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw InvalidParams("parameter " + std::string(key) + ": not a boolean: '" + std::string(v) + "'");
}

// Disjunction of next-step backlog values BL - k*gamma clamped at 0.
std::string reduction(const Params& p, int k_max) {
  const int g = p.gammaUnits;
  if (g == 1) return "BL' <= BL & BL' >= BL - " + std::to_string(k_max);
  std::string out = "(";
  for (int k = 0; k <= k_max; ++k) out += "BL' = BL - " + std::to_string(k * g) + " | ";
  out += "BL' = 0 & BL < " + std::to_string(k_max * g) + ")";
  return out;
}

}  // namespace

void validate(const Params& p) {
  require(p.N >= 1, "N must be at least 1");
  require(p.N <= 16, "N must be at most 16");
  require(p.blMax >= 1, "blMax must be positive");
  require(p.gammaUnits > 0, "gammaUnits must be positive");
  require(p.deltaUnits > 0, "deltaUnits must be positive");
  require(p.deltaUnits <= p.blMax, "deltaUnits must not exceed blMax");
  require(p.blUpper >= 1 && p.blUpper <= p.blMax, "blUpper must lie in 1..blMax");
  require(p.kMove >= 0, "kMove must be non-negative");
  require(p.kMove <= p.kDrop, "kMove must not exceed kDrop");
  require(p.blInitLo <= p.blInitHi, "blInit range is empty");
  require(p.blInitLo >= 0 && p.blInitHi <= p.blMax, "blInit must lie in 0..blMax");
  require(p.tdSeconds > 0, "tdSeconds must be positive");
}

void apply_param(Params& p, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw InvalidParams("expected key=value, got '" + std::string(assignment) + "'");
  const std::string_view key = trim(assignment.substr(0, eq));
  const std::string_view value = trim(assignment.substr(eq + 1));
  if (key == "N") p.N = parse_int(key, value);
  else if (key == "blMax") p.blMax = parse_int(key, value);
  else if (key == "gammaUnits") p.gammaUnits = parse_int(key, value);
  else if (key == "deltaUnits") p.deltaUnits = parse_int(key, value);
  else if (key == "blUpper") p.blUpper = parse_int(key, value);
  else if (key == "kMove") p.kMove = parse_int(key, value);
  else if (key == "kDrop") p.kDrop = parse_int(key, value);
  else if (key == "tdSeconds") p.tdSeconds = parse_double(key, value);
  else if (key == "hfInit") p.hfInit = parse_bool(key, value);
  else if (key == "blInit") {
    const auto dots = value.find("..");
    if (dots == std::string_view::npos) {
      p.blInitLo = p.blInitHi = parse_int(key, value);
    } else {
      p.blInitLo = parse_int(key, trim(value.substr(0, dots)));
      p.blInitHi = parse_int(key, trim(value.substr(dots + 2)));
    }
  } else {
    throw InvalidParams("unknown parameter '" + std::string(key) + "'");
  }
}

Params parse_config(std::string_view text, Params base) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) apply_param(base, line);
    pos = end + 1;
  }
  return base;
}

std::string emit_spec_text(const Params& p) {
  validate(p);
  const std::string n = std::to_string(p.N);
  const std::string bl_max = std::to_string(p.blMax);
  const std::string delta = std::to_string(p.deltaUnits);
  std::ostringstream o;
  o << "# Work delivery between an inventory station (cell 0) and a human\n"
    << "# workstation (cell " << n << "). Backlog in units of " << p.gammaUnits << " per work step.\n";
  o << "[ENV_VARS]\n"
    << "BL : 0.." << bl_max << "\n"
    << "S : bool\n";
  for (int j = 1; j < p.N; ++j) o << "O" << j << " : bool\n";
  o << "stalled : bool\n";

  o << "[SYS_VARS]\n"
    << "RS : 0.." << n << "\n"
    << "ACT : 0.." << n << "\n"
    << "HF : bool\n"
    << "tries : 0..2\n";

  o << "[ENV_INIT]\n";
  if (p.blInitLo == p.blInitHi) o << "BL = " << p.blInitLo << "\n";
  else o << "BL >= " << p.blInitLo << " & BL <= " << p.blInitHi << "\n";
  o << "!stalled\n";

  o << "[SYS_INIT]\n"
    << "RS = 0\n"
    << "ACT <= 1\n";
  if (p.N >= 2) o << "ACT = 1 -> !O1\n";
  o << (p.hfInit ? "HF\n" : "!HF\n")
    << "tries = 0\n"
    << "BL > 0\n"
    << "BL <= " << p.blUpper << "\n";

  const std::string g4 = "HF & (RS != 0 & ACT = 0 | RS = 0 & tries = 1 & !S)";
  o << "[ENV_TRANS]\n"
    << "# obstacles clear after one step\n";
  for (int j = 1; j < p.N; ++j) o << "O" << j << " -> !O" << j << "'\n";
  o << "# a failed first dropoff is followed by a successful one\n"
    << "RS = 0 & HF & tries = 1 & !S -> S'\n"
    << "# refill when the robot reaches the workstation\n"
    << "ACT = " << n << " & RS != " << n << " & BL <= " << p.blMax - p.deltaUnits << " -> BL' = BL + " << delta << "\n"
    << "ACT = " << n << " & RS != " << n << " & BL > " << p.blMax - p.deltaUnits << " -> BL' = " << bl_max << "\n"
    << "ACT = " << n << " & RS = " << n << " -> BL' = BL\n"
    << "# idle human\n"
    << "ACT != " << n << " & BL = 0 -> BL' = 0\n"
    << "# work during dropoff and during motion\n"
    << "ACT != " << n << " & BL > 0 & " << g4 << " -> " << reduction(p, p.kDrop) << "\n"
    << "ACT != " << n << " & BL > 0 & !(" << g4 << ") -> " << reduction(p, p.kMove) << "\n"
    << "# the backlog cannot stay constant for two working steps\n"
    << "stalled & ACT != " << n << " & BL > 0 -> BL' < BL\n"
    << "stalled' <-> ACT != " << n << " & BL > 0 & BL' = BL\n";

  o << "[SYS_TRANS]\n"
    << "RS' = ACT\n"
    << "ACT' <= RS' + 1\n"
    << "ACT' >= RS' - 1\n";
  for (int j = 1; j < p.N; ++j) o << "ACT' = " << j << " & RS' != " << j << " -> !O" << j << "'\n";
  o << "HF' <-> RS = " << n << " & ACT != " << n << " | HF & !(RS = 0 & tries >= 1 & S)\n"
    << "tries' = 2 <-> RS = 0 & HF & tries = 1 & !S\n"
    << "tries' = 1 <-> tries = 0 & RS' = 0 & HF'\n"
    << "tries' = 1 & !S' -> ACT' = 0\n"
    << "BL' > 0\n"
    << "BL' <= " << p.blUpper << "\n";

  o << "[ENV_LIVENESS]\n"
    << "[SYS_LIVENESS]\n"
    << "RS = 0 & HF\n";
  return o.str();
}

speclang::SpecDocument emit_spec(const Params& p) { return speclang::parse_spec(emit_spec_text(p)); }

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::work: return "work";
    case Mode::wait: return "wait";
    case Mode::refill: return "refill";
  }
  return "work";
}

WorldState world_state(std::span<const speclang::VarDecl> vars, std::span<const int> values) {
  WorldState w;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string& name = vars[i].name;
    const int v = values[i];
    if (name == "BL") w.BL = v;
    else if (name == "RS") w.RS = v;
    else if (name == "ACT") w.ACT = v;
    else if (name == "HF") w.HF = v != 0;
    else if (name == "tries") w.tries = v;
    else if (name == "S") w.S = v != 0;
    else if (name == "stalled") w.stalled = v != 0;
    else if (name.size() > 1 && name[0] == 'O') {
      int j = 0;
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), j);
      if (ec == std::errc() && ptr == name.data() + name.size() && j >= 1) {
        if (w.O.size() < static_cast<std::size_t>(j)) w.O.resize(static_cast<std::size_t>(j), false);
        w.O[static_cast<std::size_t>(j - 1)] = v != 0;
      }
    }
  }
  return w;
}

std::vector<int> backlog_successors(const WorldState& s, const Params& p) {
  if (s.ACT == p.N && s.RS != p.N) return {std::min(s.BL + p.deltaUnits, p.blMax)};
  if (s.ACT == p.N) return {s.BL};
  if (s.BL == 0) return {0};
  const bool dropoff = s.HF && ((s.RS != 0 && s.ACT == 0) || (s.RS == 0 && s.tries == 1 && !s.S));
  const int k_max = dropoff ? p.kDrop : p.kMove;
  std::vector<int> out;
  for (int k = s.stalled ? 1 : 0; k <= k_max; ++k) out.push_back(std::max(s.BL - k * p.gammaUnits, 0));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Mode human_mode(const WorldState& s, const Params& p) {
  if (s.RS == p.N) return Mode::refill;
  if (s.BL == 0) return Mode::wait;
  return Mode::work;
}

}  // namespace gr1kit::workdelivery
