#include "gr1kit/check.hpp"

#include <algorithm>
#include <json.hpp>
#include <unordered_map>

namespace gr1kit::check {

using speclang::Expr;
using speclang::SpecDocument;
using arena::Assignment;
using arena::StateIndex;

void Verdict::add(std::string where, std::string clause, std::string description) {
  passed = false;
  violations.push_back({std::move(where), std::move(clause), std::move(description)});
}

namespace {

bool holds(const Expr& e, const speclang::Valuation& cur, const speclang::Valuation& next) {
  auto lookup = [&](int v, bool is_next) -> std::int64_t {
    return is_next ? next[static_cast<std::size_t>(v)] : cur[static_cast<std::size_t>(v)];
  };
  return speclang::evaluate(e, lookup) != 0;
}

std::string describe(const arena::VarSpace& space, const speclang::Valuation& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += space.vars()[i].name + "=" + std::to_string(v[i]);
  }
  return out;
}

}  // namespace

Verdict check_safety(const sim::Trace& trace, const SpecDocument& doc) {
  Verdict v;
  if (!(trace.space.vars() == doc.vars)) {
    v.add("trace", "variables", "trace variables do not match the spec");
    return v;
  }
  auto check_pair = [&](std::size_t k, const speclang::Valuation& cur, const speclang::Valuation& next, bool only_invariants) {
    for (const auto* clauses : {&doc.env_safety, &doc.sys_safety}) {
      for (const auto& c : *clauses) {
        if (only_invariants && speclang::has_current_ref(c)) continue;
        if (!holds(c, cur, next)) {
          const bool env = clauses == &doc.env_safety;
          v.add("step " + std::to_string(trace.steps[k].step), speclang::print_expr(c, doc),
                std::string(env ? "environment" : "system") + " safety clause violated");
        }
      }
    }
  };
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& s = trace.steps[k];
    if (k == 0) {
      check_pair(0, s.values, s.values, true);
      continue;
    }
    const auto& prev = trace.steps[k - 1];
    if (s.step <= prev.step || s.time_s < prev.time_s)
      v.add("step " + std::to_string(s.step), "time", "steps and times must increase");
    if (s.human_away) {
      if (s.values != prev.values) v.add("step " + std::to_string(s.step), "human_away", "state changed while the human was away");
      continue;
    }
    check_pair(k, prev.values, s.values, false);
  }
  return v;
}

Verdict check_recurrence(const sim::Trace& trace, const Expr& goal, const SpecDocument& doc, std::uint64_t window) {
  if (window < 1) throw std::invalid_argument("window must be at least 1");
  Verdict v;
  std::uint64_t run = 0;
  int run_start = 0;
  for (const auto& s : trace.steps) {
    if (s.human_away) continue;
    if (holds(goal, s.values, s.values)) {
      run = 0;
      continue;
    }
    if (run == 0) run_start = s.step;
    if (++run == window)
      v.add("step " + std::to_string(s.step), speclang::print_expr(goal, doc),
            "goal absent for " + std::to_string(window) + " consecutive steps since step " + std::to_string(run_start));
  }
  return v;
}

namespace {

struct Product {
  std::vector<std::uint32_t> node;
  std::vector<std::vector<std::uint32_t>> succ;
};

// Iterative Tarjan restricted to `alive`; returns SCCs in reverse
// topological order.
std::vector<std::vector<std::uint32_t>> sccs(const Product& p, const std::vector<char>& alive) {
  const std::size_t n = p.node.size();
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::vector<std::vector<std::uint32_t>> out;
  std::uint32_t counter = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (!alive[root] || index[root] != kUnset) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < p.succ[v].size()) {
        const std::uint32_t w = p.succ[v][i++];
        if (!alive[w]) continue;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::uint32_t> comp;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != done);
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

// A cycle through `start` inside `comp` (BFS back to start).
std::vector<std::uint32_t> find_cycle(const Product& p, const std::vector<std::uint32_t>& comp, std::uint32_t start) {
  std::unordered_map<std::uint32_t, std::uint32_t> parent;
  std::vector<char> in_comp(p.node.size(), 0);
  for (auto v : comp) in_comp[v] = 1;
  std::vector<std::uint32_t> frontier = {start};
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const std::uint32_t v = frontier[head];
    for (std::uint32_t w : p.succ[v]) {
      if (!in_comp[w]) continue;
      if (w == start) {
        std::vector<std::uint32_t> path = {v};
        while (path.back() != start) path.push_back(parent[path.back()]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (parent.count(w) || w == start) continue;
      parent[w] = v;
      frontier.push_back(w);
    }
  }
  return {start};
}

}  // namespace

Verdict lasso_check(const gr1::Strategy& strategy, const sim::Adversary& adversary_in, const SpecDocument& doc) {
  using sim::PolicyKind;
  const PolicyKind kind = adversary_in.kind();
  const bool exhaustive = kind == PolicyKind::all_moves;
  if (kind == PolicyKind::uniform_random || kind == PolicyKind::interactive ||
      (kind == PolicyKind::scripted && adversary_in.fallback() == PolicyKind::uniform_random))
    throw AdversaryNotFinite("lasso check needs a finite-state deterministic adversary");
  if (!(strategy.space.vars() == doc.vars)) throw std::invalid_argument("strategy variables do not match the spec");

  int cap = 0;
  if (kind == PolicyKind::scripted)
    for (const auto& ev : adversary_in.events()) cap = std::max(cap, ev.step);
  sim::Adversary adversary = adversary_in;
  const auto& space = strategy.space;

  Product p;
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  std::vector<int> mode_of;
  std::vector<std::uint32_t> queue;
  auto intern = [&](std::uint32_t node, int mode) {
    const std::uint64_t key = static_cast<std::uint64_t>(node) * static_cast<std::uint64_t>(cap + 1) + static_cast<std::uint64_t>(mode);
    auto [it, inserted] = ids.try_emplace(key, static_cast<std::uint32_t>(p.node.size()));
    if (inserted) {
      p.node.push_back(node);
      p.succ.emplace_back();
      mode_of.push_back(mode);
      queue.push_back(it->second);
    }
    return it->second;
  };

  std::vector<Assignment> envs;
  if (exhaustive) {
    for (const auto& i : strategy.init) intern(i.node, 0);
  } else {
    for (const auto& i : strategy.init) envs.push_back(i.env);
    if (!envs.empty()) intern(strategy.find_init(*adversary.choose(0, std::nullopt, envs, space))->node, 0);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t id = queue[head];
    const std::uint32_t node = p.node[id];
    const int mode = mode_of[id];
    const auto& n = strategy.nodes[node];
    std::vector<std::uint32_t> next;
    if (exhaustive) {
      for (const auto& e : n.edges) next.push_back(intern(e.next, 0));
    } else if (!n.edges.empty()) {
      envs.clear();
      for (const auto& e : n.edges) envs.push_back(e.env);
      const Assignment e = *adversary.choose(mode + 1, n.state, envs, space);
      next.push_back(intern(strategy.find_edge(node, e)->next, std::min(mode + 1, cap)));
    }
    p.succ[id] = std::move(next);
  }

  Verdict v;
  v.product_size = p.node.size();
  const std::size_t n = p.node.size();
  auto eval_goals = [&](const std::vector<Expr>& goals) {
    std::vector<std::vector<char>> out(goals.size(), std::vector<char>(n, 0));
    for (std::size_t id = 0; id < n; ++id) {
      const auto val = space.decode(strategy.nodes[p.node[id]].state);
      for (std::size_t g = 0; g < goals.size(); ++g) out[g][id] = holds(goals[g], val, val);
    }
    return out;
  };
  const auto sys_goal = eval_goals(doc.sys_liveness);
  const auto env_goal = eval_goals(doc.env_liveness);

  std::uint64_t window = 1;
  bool bounded = true;
  for (std::size_t j = 0; j < sys_goal.size(); ++j) {
    std::vector<char> alive(n, 0);
    for (std::size_t id = 0; id < n; ++id) alive[id] = !sys_goal[j][id];
    std::vector<std::uint64_t> longest(n, 0);
    for (const auto& comp : sccs(p, alive)) {
      bool cyclic = comp.size() > 1;
      if (!cyclic)
        for (auto w : p.succ[comp[0]]) cyclic = cyclic || w == comp[0];
      if (cyclic) {
        bounded = false;
        bool fair = true;
        for (const auto& eg : env_goal) {
          bool hit = false;
          for (auto id : comp) hit = hit || eg[id];
          fair = fair && hit;
        }
        if (fair) {
          const auto cycle = find_cycle(p, comp, comp.front());
          std::string desc = "reachable cycle never satisfies the goal:";
          for (auto id : cycle) desc += " [node " + std::to_string(p.node[id]) + ": " + describe(space, space.decode(strategy.nodes[p.node[id]].state)) + "]";
          v.add("node " + std::to_string(p.node[comp.front()]), "goal " + std::to_string(j) + ": " + speclang::print_expr(doc.sys_liveness[j], doc), desc);
        }
        continue;
      }
      // Components arrive in reverse topological order.
      std::uint64_t best = 0;
      for (auto w : p.succ[comp[0]])
        if (alive[w]) best = std::max(best, longest[w]);
      longest[comp[0]] = best + 1;
      window = std::max(window, longest[comp[0]] + 1);
    }
  }
  if (bounded) v.window = window;
  return v;
}

Verdict verify_strategy_closure(const gr1::Strategy& st, const arena::GameArena& a, const gr1::SynthesisResult* r) {
  Verdict v;
  const auto& space = a.space();
  if (!(st.space == space)) {
    v.add("strategy", "variables", "variable-order mismatch between strategy and arena");
    return v;
  }
  if (r && static_cast<int>(r->sys_goals.size()) != st.goals)
    v.add("strategy", "goals", "goal count differs from the synthesis result");
  auto env_text = [&](Assignment e) { return describe(space, space.decode_env(e)); };
  for (std::uint32_t id = 0; id < st.nodes.size(); ++id) {
    const auto& n = st.nodes[id];
    const std::string where = "node " + std::to_string(id);
    if (n.state >= a.state_count()) {
      v.add(where, "state", "state index out of range");
      continue;
    }
    if (r && !r->winning.test(n.state)) v.add(where, "winning", "node state is outside the winning region");
    int expected_goal = n.goal;
    if (r && n.goal < st.goals && r->sys_goals[static_cast<std::size_t>(n.goal)].test(n.state)) expected_goal = (n.goal + 1) % st.goals;
    const auto envs = a.env_moves(n.state);
    for (std::size_t k = 0; k < envs.size(); ++k) {
      const gr1::StrategyEdge* e = st.find_edge(id, envs[k]);
      if (!e) {
        v.add(where, "closure", "missing response to env move " + env_text(envs[k]));
        continue;
      }
      const auto ys = a.sys_moves_at(n.state, k);
      if (!std::binary_search(ys.begin(), ys.end(), e->sys))
        v.add(where, "sys", "illegal system response to env move " + env_text(envs[k]));
      if (e->next >= st.nodes.size()) {
        v.add(where, "next", "dangling successor");
        continue;
      }
      const auto& t = st.nodes[e->next];
      if (t.state != a.successor(e->env, e->sys)) v.add(where, "successor", "successor state does not match env move " + env_text(envs[k]));
      if (r && t.goal != expected_goal) v.add(where, "goal", "goal index does not follow the advance rule");
    }
    for (const auto& e : n.edges)
      if (!std::binary_search(envs.begin(), envs.end(), e.env)) v.add(where, "closure", "edge for illegal env move " + env_text(e.env));
  }
  for (Assignment e : a.env_init()) {
    const gr1::StrategyInit* i = st.find_init(e);
    if (!i) {
      v.add("init", "closure", "no initial node for env assignment " + env_text(e));
      continue;
    }
    if (i->node >= st.nodes.size()) {
      v.add("init", "next", "dangling initial node");
      continue;
    }
    const StateIndex s = st.nodes[i->node].state;
    if (space.env_part(s) != e || !a.initial_states().test(s))
      v.add("init", "initial", "initial node does not satisfy the initial condition for " + env_text(e));
    if (st.nodes[i->node].goal != 0) v.add("init", "goal", "initial node must pursue goal 0");
  }
  return v;
}

std::string render_text(const Verdict& v) {
  std::string out = v.passed ? "PASS" : "FAIL (" + std::to_string(v.violations.size()) + " violations)";
  if (v.product_size) out += "\nproduct states: " + std::to_string(v.product_size);
  if (v.product_size) out += std::string("\nrecurrence window: ") + (v.window ? std::to_string(*v.window) : "unbounded");
  out += '\n';
  for (const auto& x : v.violations) out += x.where + ": " + x.clause + ": " + x.description + "\n";
  return out;
}

std::string render_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["passed"] = v.passed;
  j["violations"] = nlohmann::ordered_json::array();
  for (const auto& x : v.violations) j["violations"].push_back({{"where", x.where}, {"clause", x.clause}, {"description", x.description}});
  if (v.product_size) {
    j["product_states"] = v.product_size;
    j["window"] = v.window ? nlohmann::ordered_json(*v.window) : nlohmann::ordered_json(nullptr);
  }
  return j.dump();
}

}  // namespace gr1kit::check
