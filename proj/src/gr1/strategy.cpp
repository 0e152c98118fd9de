#include <algorithm>
#include <deque>
#include <unordered_map>

#include "gr1kit/gr1.hpp"

namespace gr1kit::gr1 {

const StrategyEdge* Strategy::find_edge(std::uint32_t node, Assignment env) const {
  const auto& edges = nodes.at(node).edges;
  auto it = std::lower_bound(edges.begin(), edges.end(), env, [](const StrategyEdge& e, Assignment v) { return e.env < v; });
  return it != edges.end() && it->env == env ? &*it : nullptr;
}

const StrategyInit* Strategy::find_init(Assignment env) const {
  auto it = std::lower_bound(init.begin(), init.end(), env, [](const StrategyInit& i, Assignment v) { return i.env < v; });
  return it != init.end() && it->env == env ? &*it : nullptr;
}

namespace {

class Extractor {
 public:
  Extractor(const SynthesisResult& r, const GameArena& a) : r_(r), a_(a), goals_(static_cast<int>(r.sys_goals.size())) {}

  Strategy run() {
    Strategy st;
    st.space = a_.space();
    st.goals = goals_;
    const auto& space = a_.space();
    for (Assignment e : a_.env_init()) {
      StateIndex best = 0;
      std::uint32_t best_rank = kNoRank;
      for (Assignment y = 0; y < space.sys_assignment_count(); ++y) {
        StateIndex s = space.compose(e, y);
        if (!a_.initial_states().test(s) || !r_.winning.test(s)) continue;
        if (r_.y_rank[0][s] < best_rank) {
          best_rank = r_.y_rank[0][s];
          best = s;
        }
      }
      if (best_rank == kNoRank) throw NotRealizable("no winning initial state for an initial environment assignment");
      st.init.push_back({e, node_for(best, 0)});
    }
    while (!queue_.empty()) {
      const std::uint32_t id = queue_.front();
      queue_.pop_front();
      expand(id);
    }
    st.nodes = std::move(nodes_);
    return st;
  }

 private:
  std::uint32_t node_for(StateIndex s, int goal) {
    const std::uint64_t key = static_cast<std::uint64_t>(s) * static_cast<std::uint64_t>(goals_) + static_cast<std::uint64_t>(goal);
    auto [it, inserted] = ids_.try_emplace(key, static_cast<std::uint32_t>(nodes_.size()));
    if (inserted) {
      nodes_.push_back({s, goal, {}});
      queue_.push_back(it->second);
    }
    return it->second;
  }

  void expand(std::uint32_t id) {
    const StateIndex s = nodes_[id].state;
    const int j = nodes_[id].goal;
    const auto envs = a_.env_moves(s);
    std::vector<StrategyEdge> edges;
    edges.reserve(envs.size());
    const bool at_goal = r_.sys_goals[static_cast<std::size_t>(j)].test(s);
    for (std::size_t k = 0; k < envs.size(); ++k) {
      const Assignment e = envs[k];
      const auto ys = a_.sys_moves_at(s, k);
      Assignment choice = 0;
      int next_goal = j;
      if (at_goal) {
        next_goal = (j + 1) % goals_;
        choice = min_rank(e, ys, r_.y_rank[static_cast<std::size_t>(next_goal)], kNoRank);
      } else {
        const std::uint32_t rank = r_.y_rank[static_cast<std::size_t>(j)][s];
        choice = min_rank(e, ys, r_.y_rank[static_cast<std::size_t>(j)], rank);
        if (choice == kNone) choice = stay(s, e, ys, r_.x_witness[static_cast<std::size_t>(j)][rank]);
      }
      if (choice == kNone) throw std::logic_error("strategy extraction found no winning response");
      const StateIndex t = a_.successor(e, choice);
      edges.push_back({e, choice, 0});
      targets_.push_back({t, next_goal});
    }
    // Node creation may reallocate nodes_, so resolve targets after the loop.
    for (std::size_t k = 0; k < edges.size(); ++k) edges[k].next = node_for(targets_[k].first, targets_[k].second);
    targets_.clear();
    nodes_[id].edges = std::move(edges);
  }

  // Lowest-index response whose successor has the smallest rank below `bound`.
  Assignment min_rank(Assignment e, std::span<const Assignment> ys, const std::vector<std::uint32_t>& rank,
                      std::uint32_t bound) const {
    Assignment best = kNone;
    std::uint32_t best_rank = bound;
    for (Assignment y : ys) {
      const StateIndex t = a_.successor(e, y);
      if (!r_.winning.test(t)) continue;
      if (rank[t] < best_rank) {
        best_rank = rank[t];
        best = y;
      }
    }
    return best;
  }

  // Lowest-index response staying in the first env-goal witness containing s.
  Assignment stay(StateIndex s, Assignment e, std::span<const Assignment> ys, const std::vector<StateSet>& xs) const {
    for (const auto& x : xs) {
      if (!x.test(s)) continue;
      for (Assignment y : ys)
        if (x.test(a_.successor(e, y))) return y;
      return kNone;
    }
    return kNone;
  }

  static constexpr Assignment kNone = std::numeric_limits<Assignment>::max();

  const SynthesisResult& r_;
  const GameArena& a_;
  int goals_;
  std::vector<StrategyNode> nodes_;
  std::unordered_map<std::uint64_t, std::uint32_t> ids_;
  std::deque<std::uint32_t> queue_;
  std::vector<std::pair<StateIndex, int>> targets_;
};

}  // namespace

Strategy extract_strategy(const SynthesisResult& r, const GameArena& a) {
  if (!r.realizable) throw NotRealizable("specification is unrealizable");
  return Extractor(r, a).run();
}

}  // namespace gr1kit::gr1
