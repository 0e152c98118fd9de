#include "gr1kit/sim.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "gr1kit/workdelivery.hpp"

namespace gr1kit::sim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  for (auto w : split(line, ' ')) {
    w = trim(w);
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

int var_index(const VarSpace& space, std::string_view name) {
  for (int i = 0; i < space.var_count(); ++i)
    if (space.vars()[static_cast<std::size_t>(i)].name == name) return i;
  return -1;
}

std::string format_valuation(const VarSpace& space, std::span<const int> v, std::size_t first) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += space.vars()[first + i].name + "=" + std::to_string(v[i]);
  }
  return out;
}

std::string format_number(double d) {
  std::ostringstream o;
  o << d;
  return o.str();
}

}  // namespace

std::vector<Event> parse_events(std::string_view text) {
  std::vector<Event> out;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto w = words(line);
    if (w.empty()) continue;
    auto fail = [&](const std::string& msg) { throw EventsError("events line " + std::to_string(line_no) + ": " + msg); };
    auto key_value = [&](std::string_view word, std::string_view key) -> std::string_view {
      if (word.substr(0, key.size() + 1) != std::string(key) + "=") fail("expected " + std::string(key) + "=...");
      return word.substr(key.size() + 1);
    };
    Event ev;
    auto step = to_int(key_value(w[0], "step"));
    if (!step || *step < 0) fail("bad step");
    ev.step = *step;
    if (w.size() == 3 && w[1] == "set") {
      auto eq = w[2].find('=');
      if (eq == std::string_view::npos || eq == 0) fail("expected <var>=<value>");
      ev.kind = Event::Kind::set;
      ev.var = std::string(w[2].substr(0, eq));
      std::string_view val = w[2].substr(eq + 1);
      if (val == "true") ev.value = 1;
      else if (val == "false") ev.value = 0;
      else if (auto v = to_int(val)) ev.value = *v;
      else fail("bad value");
    } else if (w.size() == 3) {
      auto away = to_int(key_value(w[1], "human_away"));
      auto dur = to_int(key_value(w[2], "duration"));
      if (!away || (*away != 0 && *away != 1)) fail("human_away must be 0 or 1");
      if (!dur || *dur < 0) fail("bad duration");
      ev.kind = Event::Kind::human_away;
      ev.value = *away;
      ev.duration = *dur;
    } else {
      fail("unrecognized event");
    }
    if (!out.empty() && out.back().step > ev.step) fail("events must be ordered by step");
    out.push_back(std::move(ev));
  }
  return out;
}

Adversary Adversary::uniform_random(std::uint64_t seed) {
  Adversary a;
  a.kind_ = PolicyKind::uniform_random;
  a.rng_.seed(seed);
  return a;
}

Adversary Adversary::greedy_min_bl() {
  Adversary a;
  a.kind_ = PolicyKind::greedy_min_bl;
  return a;
}

Adversary Adversary::greedy_max_bl() {
  Adversary a;
  a.kind_ = PolicyKind::greedy_max_bl;
  return a;
}

Adversary Adversary::scripted(std::vector<Event> events, std::uint64_t seed, PolicyKind fallback) {
  if (fallback == PolicyKind::scripted || fallback == PolicyKind::interactive || fallback == PolicyKind::all_moves)
    throw std::invalid_argument("scripted fallback must be random or greedy");
  Adversary a;
  a.kind_ = PolicyKind::scripted;
  a.fallback_ = fallback;
  a.rng_.seed(seed);
  a.events_ = std::move(events);
  return a;
}

Adversary Adversary::interactive(std::istream& in, std::ostream& out) {
  Adversary a;
  a.kind_ = PolicyKind::interactive;
  a.in_ = &in;
  a.out_ = &out;
  return a;
}

Adversary Adversary::all_moves() {
  Adversary a;
  a.kind_ = PolicyKind::all_moves;
  return a;
}

Assignment Adversary::pick(PolicyKind kind, std::span<const Assignment> legal, const VarSpace& space) {
  if (kind == PolicyKind::uniform_random) return legal[rng_() % legal.size()];
  const int bl = var_index(space, "BL");
  if (bl < 0 || bl >= space.env_var_count()) return legal.front();
  const bool want_min = kind == PolicyKind::greedy_min_bl;
  Assignment best = legal.front();
  int best_bl = space.decode_env(best)[static_cast<std::size_t>(bl)];
  for (Assignment e : legal) {
    const int v = space.decode_env(e)[static_cast<std::size_t>(bl)];
    if (want_min ? v < best_bl : v > best_bl) {
      best = e;
      best_bl = v;
    }
  }
  return best;
}

std::optional<Assignment> Adversary::ask(std::optional<StateIndex> state, std::span<const Assignment> legal,
                                         const VarSpace& space) {
  std::ostream& out = *out_;
  const std::size_t ne = static_cast<std::size_t>(space.env_var_count());
  if (state) {
    const auto v = space.decode(*state);
    out << "state: " << format_valuation(space, v, 0) << "\n";
  } else {
    out << "initial environment choice\n";
  }
  for (std::size_t k = 0; k < legal.size(); ++k) {
    const auto env = space.decode_env(legal[k]);
    out << "  [" << k << "] " << format_valuation(space, std::span<const int>(env.data(), ne), 0) << "\n";
  }
  std::string line;
  while (true) {
    out << "env move> " << std::flush;
    if (!std::getline(*in_, line)) return std::nullopt;
    auto t = trim(line);
    if (t == "q" || t == "quit") return std::nullopt;
    if (auto idx = to_int(t); idx && *idx >= 0 && static_cast<std::size_t>(*idx) < legal.size())
      return legal[static_cast<std::size_t>(*idx)];
    out << "enter a number between 0 and " << legal.size() - 1 << ", or q\n";
  }
}

std::optional<Assignment> Adversary::choose(int step, std::optional<StateIndex> state, std::span<const Assignment> legal,
                                            const VarSpace& space) {
  if (legal.empty()) throw std::invalid_argument("no legal environment moves to choose from");
  std::optional<Assignment> choice;
  switch (kind_) {
    case PolicyKind::interactive:
      choice = ask(state, legal, space);
      if (!choice) return std::nullopt;
      break;
    case PolicyKind::all_moves:
      throw std::logic_error("the all-moves adversary cannot drive a simulation");
    case PolicyKind::scripted: {
      std::vector<Assignment> matching(legal.begin(), legal.end());
      bool any = false;
      for (const auto& ev : events_) {
        if (ev.step != step || ev.kind != Event::Kind::set) continue;
        const int idx = var_index(space, ev.var);
        if (idx < 0 || idx >= space.env_var_count()) continue;
        any = true;
        std::vector<Assignment> keep;
        for (Assignment e : matching)
          if (space.decode_env(e)[static_cast<std::size_t>(idx)] == ev.value) keep.push_back(e);
        if (!keep.empty()) matching = std::move(keep);
      }
      choice = any ? pick(fallback_, matching, space) : pick(fallback_, legal, space);
      break;
    }
    default:
      choice = pick(kind_, legal, space);
  }
  if (std::find(legal.begin(), legal.end(), *choice) == legal.end())
    throw AdversaryIllegalMove("adversary chose an illegal environment move");
  return choice;
}

Trace run(const gr1::Strategy& strategy, Adversary& adversary, const RunOptions& opts) {
  if (opts.max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  if (strategy.init.empty()) throw std::invalid_argument("strategy has no initial nodes");
  if (opts.arena && !(opts.arena->space() == strategy.space))
    throw std::invalid_argument("strategy and spec declare different variables");
  const VarSpace& space = strategy.space;
  Trace trace;
  trace.space = space;
  trace.td = opts.td;

  std::vector<Assignment> init_envs;
  for (const auto& i : strategy.init) init_envs.push_back(i.env);
  auto first = adversary.choose(0, std::nullopt, init_envs, space);
  if (!first) return trace;
  std::uint32_t node = strategy.find_init(*first)->node;

  auto snapshot = [&](int step, bool away) {
    TraceStep ts;
    ts.step = step;
    ts.time_s = step * opts.td;
    ts.values = space.decode(strategy.nodes[node].state);
    ts.human_away = away;
    ts.node = node;
    trace.steps.push_back(std::move(ts));
  };
  snapshot(0, false);

  // Steps frozen by human-away events.
  std::vector<char> frozen(static_cast<std::size_t>(opts.max_steps) + 1, 0);
  for (const auto& ev : opts.events) {
    if (ev.kind != Event::Kind::human_away || ev.value == 0) continue;
    for (int k = ev.step; k < ev.step + ev.duration && k <= opts.max_steps; ++k)
      if (k >= 1) frozen[static_cast<std::size_t>(k)] = 1;
  }

  std::vector<Assignment> legal;
  for (int step = 1; step <= opts.max_steps; ++step) {
    if (opts.pace) std::this_thread::sleep_for(std::chrono::duration<double>(opts.td));
    if (frozen[static_cast<std::size_t>(step)]) {
      snapshot(step, true);
      continue;
    }
    const auto& n = strategy.nodes[node];
    legal.clear();
    if (opts.arena) {
      auto moves = opts.arena->env_moves(n.state);
      legal.assign(moves.begin(), moves.end());
      for (Assignment e : legal)
        if (!strategy.find_edge(node, e))
          throw StrategyHole("node " + std::to_string(node) + " has no response to env move " +
                             format_valuation(space, space.decode_env(e), 0));
    } else {
      for (const auto& e : n.edges) legal.push_back(e.env);
    }
    if (legal.empty()) break;
    auto e = adversary.choose(step, n.state, legal, space);
    if (!e) break;
    node = strategy.find_edge(node, *e)->next;
    snapshot(step, false);
  }
  return trace;
}

namespace {

struct Layout {
  std::vector<std::string> header;
  // Variable ordinal per column, or -1 for step/time_s/mode/human_away.
  std::vector<int> column_var;
  bool work_delivery = false;
  int n = 0;
};

Layout layout_for(const VarSpace& space) {
  Layout l;
  const char* required[] = {"RS", "BL", "HF", "tries", "S", "ACT"};
  bool wd = true;
  for (const char* r : required) wd = wd && var_index(space, r) >= 0;
  std::vector<char> used(static_cast<std::size_t>(space.var_count()), 0);
  auto add_var = [&](const std::string& name) {
    const int idx = var_index(space, name);
    l.header.push_back(name);
    l.column_var.push_back(idx);
    if (idx >= 0) used[static_cast<std::size_t>(idx)] = 1;
  };
  auto add_meta = [&](const std::string& name) {
    l.header.push_back(name);
    l.column_var.push_back(-1);
  };
  add_meta("step");
  add_meta("time_s");
  if (wd) {
    l.work_delivery = true;
    l.n = space.vars()[static_cast<std::size_t>(var_index(space, "RS"))].domain.hi;
    for (const char* name : {"RS", "BL", "HF", "tries", "S"}) add_var(name);
    for (int j = 1; j < l.n; ++j)
      if (var_index(space, "O" + std::to_string(j)) >= 0) add_var("O" + std::to_string(j));
    add_meta("mode");
    add_var("ACT");
    add_meta("human_away");
    for (int i = 0; i < space.var_count(); ++i)
      if (!used[static_cast<std::size_t>(i)]) add_var(space.vars()[static_cast<std::size_t>(i)].name);
  } else {
    for (const auto& v : space.vars()) add_var(v.name);
    add_meta("human_away");
  }
  return l;
}

}  // namespace

std::string trace_to_csv(const Trace& t) {
  const Layout l = layout_for(t.space);
  std::string out;
  for (std::size_t c = 0; c < l.header.size(); ++c) {
    if (c) out += ',';
    out += l.header[c];
  }
  out += '\n';
  workdelivery::Params p;
  p.N = l.n;
  for (const auto& s : t.steps) {
    for (std::size_t c = 0; c < l.header.size(); ++c) {
      if (c) out += ',';
      const auto& h = l.header[c];
      if (l.column_var[c] >= 0) out += std::to_string(s.values[static_cast<std::size_t>(l.column_var[c])]);
      else if (h == "step") out += std::to_string(s.step);
      else if (h == "time_s") out += format_number(s.time_s);
      else if (h == "human_away") out += s.human_away ? '1' : '0';
      else if (h == "mode")
        out += workdelivery::to_string(workdelivery::human_mode(workdelivery::world_state(t.space.vars(), s.values), p));
    }
    out += '\n';
  }
  return out;
}

Trace trace_from_csv(std::string_view text, const VarSpace& space) {
  Trace t;
  t.space = space;
  auto lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw std::runtime_error("trace: empty file");
  auto header = split(trim(lines[0]), ',');
  std::vector<int> col_var(header.size(), -1);
  int step_col = -1, time_col = -1, away_col = -1;
  std::vector<char> seen(static_cast<std::size_t>(space.var_count()), 0);
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto h = trim(header[c]);
    if (h == "step") step_col = static_cast<int>(c);
    else if (h == "time_s") time_col = static_cast<int>(c);
    else if (h == "human_away") away_col = static_cast<int>(c);
    else if (const int idx = var_index(space, h); idx >= 0) {
      col_var[c] = idx;
      seen[static_cast<std::size_t>(idx)] = 1;
    }
  }
  if (step_col < 0) throw std::runtime_error("trace: missing step column");
  for (int i = 0; i < space.var_count(); ++i)
    if (!seen[static_cast<std::size_t>(i)]) throw std::runtime_error("trace: missing column for variable " + space.vars()[static_cast<std::size_t>(i)].name);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto cells = split(trim(lines[li]), ',');
    if (cells.size() != header.size()) throw std::runtime_error("trace: line " + std::to_string(li + 1) + " has wrong column count");
    TraceStep s;
    s.values.assign(static_cast<std::size_t>(space.var_count()), 0);
    auto cell_int = [&](std::size_t c) {
      auto v = to_int(trim(cells[c]));
      if (!v) throw std::runtime_error("trace: line " + std::to_string(li + 1) + ": bad integer in column " + std::string(trim(header[c])));
      return *v;
    };
    s.step = cell_int(static_cast<std::size_t>(step_col));
    if (time_col >= 0) {
      std::string cell(trim(cells[static_cast<std::size_t>(time_col)]));
      std::istringstream in(cell);
      if (!(in >> s.time_s)) throw std::runtime_error("trace: line " + std::to_string(li + 1) + ": bad time");
    }
    if (away_col >= 0) s.human_away = cell_int(static_cast<std::size_t>(away_col)) != 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (col_var[c] < 0) continue;
      const int v = cell_int(c);
      const auto& d = space.vars()[static_cast<std::size_t>(col_var[c])].domain;
      if (!d.contains(v)) throw std::runtime_error("trace: line " + std::to_string(li + 1) + ": value out of domain for " + std::string(trim(header[c])));
      s.values[static_cast<std::size_t>(col_var[c])] = v;
    }
    t.steps.push_back(std::move(s));
  }
  if (t.steps.size() >= 2 && t.steps[1].time_s > t.steps[0].time_s && t.steps[1].step > t.steps[0].step)
    t.td = (t.steps[1].time_s - t.steps[0].time_s) / (t.steps[1].step - t.steps[0].step);
  return t;
}

}  // namespace gr1kit::sim
