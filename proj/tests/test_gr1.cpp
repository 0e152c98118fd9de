#include <doctest.h>

#include "gr1kit/gr1.hpp"
#include "gr1kit/workdelivery.hpp"

using namespace gr1kit;
using arena::Assignment;
using arena::StateIndex;
using gr1::StateSet;

namespace {

// Independent check of the Strategy invariants against arena and result.
void check_strategy_invariants(const gr1::Strategy& st, const gr1::SynthesisResult& r, const arena::GameArena& a) {
  REQUIRE(st.goals == static_cast<int>(r.sys_goals.size()));
  for (std::uint32_t id = 0; id < st.nodes.size(); ++id) {
    const auto& n = st.nodes[id];
    CHECK(r.winning.test(n.state));
    auto env = a.env_moves(n.state);
    REQUIRE(n.edges.size() == env.size());
    const bool at_goal = r.sys_goals[static_cast<std::size_t>(n.goal)].test(n.state);
    const int expected_goal = at_goal ? (n.goal + 1) % st.goals : n.goal;
    for (std::size_t k = 0; k < env.size(); ++k) {
      const auto& e = n.edges[k];
      CHECK(e.env == env[k]);
      auto ys = a.sys_moves_at(n.state, k);
      CHECK(std::binary_search(ys.begin(), ys.end(), e.sys));
      REQUIRE(e.next < st.nodes.size());
      CHECK(st.nodes[e.next].state == a.successor(e.env, e.sys));
      CHECK(st.nodes[e.next].goal == expected_goal);
    }
  }
  for (Assignment e : a.env_init()) {
    const auto* in = st.find_init(e);
    REQUIRE(in != nullptr);
    CHECK(a.initial_states().test(st.nodes[in->node].state));
    CHECK(a.space().env_part(st.nodes[in->node].state) == e);
    CHECK(st.nodes[in->node].goal == 0);
  }
}

arena::GameArena parse_arena(const char* text, speclang::SpecDocument* doc = nullptr) {
  auto d = speclang::parse_spec(text);
  if (doc) *doc = d;
  return arena::build_arena(d);
}

}  // namespace

TEST_SUITE("gr1") {

TEST_CASE("solver agrees with the parity-game oracle on random arenas") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CAPTURE(seed);
    auto inst = gr1::random_arena(seed);
    CHECK(inst.arena.state_count() <= 200);
    auto r = gr1::solve(inst.arena, inst.env_live, inst.sys_live);
    auto oracle = gr1::brute_force_oracle(inst.arena, inst.env_live, inst.sys_live);
    CHECK(r.winning == oracle);
    auto checked = gr1::solve(inst.arena, inst.env_live, inst.sys_live, {true});
    CHECK(checked.winning == r.winning);
  }
}

TEST_CASE("single self-loop state is winning") {
  arena::VarSpace sp({{"e", speclang::Owner::env, speclang::Domain::int_range(0, 0)},
                      {"y", speclang::Owner::sys, speclang::Domain::int_range(0, 0)}});
  StateSet init(1);
  init.set();
  auto a = arena::GameArena::from_relations(sp, {{0}}, {{{0}}}, {0}, init);
  StateSet all(1);
  all.set();
  auto r = gr1::solve(a, {}, {all});
  CHECK(r.winning == all);
  CHECK(r.realizable);
  auto st = gr1::extract_strategy(r, a);
  REQUIRE(st.nodes.size() == 1);
  REQUIRE(st.nodes[0].edges.size() == 1);
  CHECK(st.nodes[0].edges[0].next == 0);
  check_strategy_invariants(st, r, a);
}

TEST_CASE("env-forced trap is excluded from the winning region") {
  speclang::SpecDocument d;
  auto a = parse_arena("[ENV_VARS] e:bool [SYS_VARS] y:0..2\n[SYS_TRANS]\n"
                       "y = 2 -> y' = 2\ny = 1 & e' -> y' = 2\ny = 1 & !e' -> y' = 0\ny = 0 -> y' <= 1\n"
                       "[SYS_LIVENESS]\ny = 0\n",
                       &d);
  auto r = gr1::solve(a, d);
  const int y = d.find_var("y");
  for (StateIndex s = 0; s < a.state_count(); ++s) CHECK(r.winning.test(s) == (a.space().decode(s)[y] == 0));
  CHECK(r.winning == gr1::brute_force_oracle(a, r.env_goals, r.sys_goals));
  CHECK(r.realizable);  // the system may start at y = 0
  check_strategy_invariants(gr1::extract_strategy(r, a), r, a);
  d.sys_init.push_back(speclang::parse_spec("[SYS_VARS] y:0..2 [SYS_INIT] y = 1").sys_init[0]);
  auto trapped = arena::build_arena(d);
  auto rt = gr1::solve(trapped, d);
  CHECK_FALSE(rt.realizable);
  CHECK_THROWS_AS(gr1::extract_strategy(rt, trapped), gr1::NotRealizable);
}

TEST_CASE("env liveness assumptions let the system win") {
  // Without the assumption env can keep e false and y never reaches 1.
  const char* base = "[ENV_VARS] e:bool [SYS_VARS] y:bool\n[SYS_TRANS]\ny' <-> e'\n[SYS_LIVENESS]\ny\n";
  speclang::SpecDocument d;
  auto a = parse_arena(base, &d);
  auto r = gr1::solve(a, d);
  CHECK(r.winning.none());
  d.env_liveness.push_back(speclang::Expr::variable(0));
  auto r2 = gr1::solve(a, d);
  CHECK(r2.winning.all());
  CHECK(r2.winning == gr1::brute_force_oracle(a, r2.env_goals, r2.sys_goals));
  check_strategy_invariants(gr1::extract_strategy(r2, a), r2, a);
}

TEST_CASE("env deadlock counts as a system win") {
  speclang::SpecDocument d;
  auto a = parse_arena("[ENV_VARS] e:bool [SYS_VARS] y:bool\n[ENV_TRANS]\n!e\n[SYS_LIVENESS]\nfalse\n", &d);
  auto r = gr1::solve(a, d);
  const auto& sp = a.space();
  for (StateIndex s = 0; s < a.state_count(); ++s) CHECK(r.winning.test(s) == (sp.decode(s)[0] == 1));
}

TEST_CASE("realizability semantics") {
  speclang::SpecDocument d;
  auto a = parse_arena("[ENV_VARS] e:bool [SYS_VARS] y:bool\n[ENV_INIT]\ne & !e\n[SYS_LIVENESS]\nfalse\n", &d);
  auto r = gr1::solve(a, d);
  CHECK(r.winning.none());
  CHECK(gr1::is_realizable(r, a));  // no env init assignment exists

  auto b = parse_arena("[ENV_VARS] e:bool [SYS_VARS] y:bool\n[SYS_INIT]\ny <-> e\n[SYS_TRANS]\ny' <-> y\n"
                       "[SYS_LIVENESS]\ny\n",
                       &d);
  auto rb = gr1::solve(b, d);
  CHECK_FALSE(gr1::is_realizable(rb, b));  // e = false forces y = false forever
  auto c = parse_arena("[ENV_VARS] e:bool [SYS_VARS] y:bool\n[SYS_TRANS]\ny' <-> y\n[SYS_LIVENESS]\ny\n", &d);
  auto rc = gr1::solve(c, d);
  CHECK(gr1::is_realizable(rc, c));  // system picks y = true initially
  auto st = gr1::extract_strategy(rc, c);
  check_strategy_invariants(st, rc, c);
  for (const auto& in : st.init) CHECK(c.space().decode(st.nodes[in.node].state)[1] == 1);
}

TEST_CASE("extracted strategies satisfy their invariants on random arenas") {
  int extracted = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CAPTURE(seed);
    auto inst = gr1::random_arena(seed);
    auto r = gr1::solve(inst.arena, inst.env_live, inst.sys_live);
    if (!r.realizable) {
      CHECK_THROWS_AS(gr1::extract_strategy(r, inst.arena), gr1::NotRealizable);
      continue;
    }
    auto st = gr1::extract_strategy(r, inst.arena);
    check_strategy_invariants(st, r, inst.arena);
    auto back = gr1::strategy_from_json(gr1::strategy_to_json(st));
    CHECK(gr1::strategy_to_json(back) == gr1::strategy_to_json(st));
    ++extracted;
  }
  CHECK(extracted > 10);
}

TEST_CASE("y ranks are consistent with the winning region") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto inst = gr1::random_arena(seed);
    auto r = gr1::solve(inst.arena, inst.env_live, inst.sys_live);
    for (std::size_t j = 0; j < r.sys_goals.size(); ++j)
      for (StateIndex s = 0; s < inst.arena.state_count(); ++s)
        CHECK((r.y_rank[j][s] != gr1::kNoRank) == r.winning.test(s));
  }
}

TEST_CASE("solve and extract are deterministic") {
  auto inst = gr1::random_arena(17);
  auto r1 = gr1::solve(inst.arena, inst.env_live, inst.sys_live);
  auto r2 = gr1::solve(inst.arena, inst.env_live, inst.sys_live);
  CHECK(r1.winning == r2.winning);
  CHECK(r1.y_rank == r2.y_rank);
  CHECK(r1.x_witness == r2.x_witness);
  if (r1.realizable)
    CHECK(gr1::strategy_to_json(gr1::extract_strategy(r1, inst.arena)) ==
          gr1::strategy_to_json(gr1::extract_strategy(r2, inst.arena)));
  auto i2 = gr1::random_arena(17);
  CHECK(gr1::solve(i2.arena, i2.env_live, i2.sys_live).winning == r1.winning);
}

TEST_CASE("oracle refuses large arenas") {
  auto inst = gr1::random_arena(3);
  CHECK_THROWS_AS(gr1::brute_force_oracle(inst.arena, inst.env_live, inst.sys_live, 10), gr1::TooLarge);
}

TEST_CASE("strategy JSON rejects malformed input") {
  CHECK_THROWS_AS(gr1::strategy_from_json("{"), std::runtime_error);
  CHECK_THROWS_AS(gr1::strategy_from_json("{\"vars\":[]}"), std::runtime_error);
}

TEST_CASE("work-delivery default is realizable and waits at the station when BL is high") {
  workdelivery::Params p;
  auto d = workdelivery::emit_spec(p);
  auto a = arena::build_arena(d);
  auto r = gr1::solve(a, d, {true});
  CHECK(r.realizable);
  auto st = gr1::extract_strategy(r, a);
  check_strategy_invariants(st, r, a);
  const int RS = d.find_var("RS"), ACT = d.find_var("ACT"), BL = d.find_var("BL");
  const int N = p.N;
  int commitments = 0;
  for (const auto& n : st.nodes)
    for (const auto& e : n.edges) {
      auto next = a.space().decode(a.successor(e.env, e.sys));
      if (next[ACT] == N && next[RS] != N) {
        ++commitments;
        CHECK(next[BL] <= p.blUpper - p.deltaUnits);
      }
    }
  CHECK(commitments > 0);

  auto high = p;
  high.blInitLo = high.blInitHi = 28;
  auto dh = workdelivery::emit_spec(high);
  auto ah = arena::build_arena(dh);
  CHECK_FALSE(gr1::solve(ah, dh).realizable);
}

}
