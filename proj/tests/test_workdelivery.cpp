#include <doctest.h>

#include <algorithm>
#include <deque>

#include "gr1kit/arena.hpp"
#include "gr1kit/gr1.hpp"
#include "gr1kit/workdelivery.hpp"

using namespace gr1kit;
using arena::StateIndex;
namespace wd = workdelivery;

namespace {

wd::WorldState make(int BL, int RS, int ACT, bool HF = false, int tries = 0, bool S = false, bool stalled = false) {
  wd::WorldState w;
  w.BL = BL;
  w.RS = RS;
  w.ACT = ACT;
  w.HF = HF;
  w.tries = tries;
  w.S = S;
  w.O = {false, false};
  w.stalled = stalled;
  return w;
}

// Arena states reachable from the initial states under any legal moves.
std::vector<StateIndex> reachable(const arena::GameArena& a) {
  arena::StateSet seen(a.state_count());
  std::deque<StateIndex> queue;
  for (auto s = a.initial_states().find_first(); s != arena::StateSet::npos; s = a.initial_states().find_next(s)) {
    seen.set(s);
    queue.push_back(static_cast<StateIndex>(s));
  }
  std::vector<StateIndex> out;
  while (!queue.empty()) {
    const StateIndex s = queue.front();
    queue.pop_front();
    out.push_back(s);
    auto env = a.env_moves(s);
    for (std::size_t k = 0; k < env.size(); ++k)
      for (auto y : a.sys_moves_at(s, k)) {
        const StateIndex t = a.successor(env[k], y);
        if (!seen.test(t)) {
          seen.set(t);
          queue.push_back(t);
        }
      }
  }
  return out;
}

}  // namespace

TEST_SUITE("workdelivery") {

TEST_CASE("backlog successor examples") {
  wd::Params p;
  CHECK(wd::backlog_successors(make(20, 1, 2), p) == std::vector<int>{18, 19, 20});
  CHECK(wd::backlog_successors(make(20, 1, 0, true), p) == std::vector<int>{15, 16, 17, 18, 19, 20});
  CHECK(wd::backlog_successors(make(10, 2, 3), p) == std::vector<int>{25});
  CHECK(wd::backlog_successors(make(0, 1, 2), p) == std::vector<int>{0});
  CHECK(wd::backlog_successors(make(20, 3, 3), p) == std::vector<int>{20});
  CHECK(wd::backlog_successors(make(20, 2, 3), p) == std::vector<int>{30});  // clamped refill
  CHECK(wd::backlog_successors(make(1, 1, 2), p) == std::vector<int>{0, 1});  // clamped reduction
  CHECK(wd::backlog_successors(make(20, 1, 2, false, 0, false, true), p) == std::vector<int>{18, 19});
  // Retry at the station after a failed first try is a dropoff.
  CHECK(wd::backlog_successors(make(20, 0, 0, true, 1, false), p).size() == 6);
  CHECK(wd::backlog_successors(make(20, 0, 0, true, 1, true), p).size() == 3);
}

TEST_CASE("arena backlog successors equal the reference semantics on every state") {
  wd::Params p;
  auto d = wd::emit_spec(p);
  auto a = arena::build_arena(d);
  const auto& sp = a.space();
  const int BL = d.find_var("BL");
  for (StateIndex s = 0; s < a.state_count(); ++s) {
    auto cur = sp.decode(s);
    std::vector<int> got;
    for (auto e : a.env_moves(s)) got.push_back(sp.decode_env(e)[static_cast<std::size_t>(BL)]);
    std::sort(got.begin(), got.end());
    got.erase(std::unique(got.begin(), got.end()), got.end());
    const auto expected = wd::backlog_successors(wd::world_state(sp.vars(), cur), p);
    if (got != expected) {
      CAPTURE(s);
      REQUIRE(got == expected);
    }
  }
}

TEST_CASE("human mode") {
  wd::Params p;
  CHECK(wd::human_mode(make(12, 3, 3), p) == wd::Mode::refill);
  CHECK(wd::human_mode(make(0, 3, 3), p) == wd::Mode::refill);
  CHECK(wd::human_mode(make(0, 1, 2), p) == wd::Mode::wait);
  CHECK(wd::human_mode(make(12, 0, 0), p) == wd::Mode::work);
  CHECK(wd::to_string(wd::Mode::wait) == "wait");
}

TEST_CASE("N = 1 has no obstacle variables") {
  wd::Params p;
  p.N = 1;
  auto d = wd::emit_spec(p);
  for (const auto& v : d.vars) CHECK(v.name.rfind('O', 0) != 0);
  CHECK(d.find_var("RS") >= 0);
  CHECK(d.vars[static_cast<std::size_t>(d.find_var("RS"))].domain == speclang::Domain::int_range(0, 1));
}

TEST_CASE("obstacle count follows N") {
  wd::Params p;
  p.N = 5;
  auto d = wd::emit_spec(p);
  CHECK(d.find_var("O4") >= 0);
  CHECK(d.find_var("O5") < 0);
}

TEST_CASE("invalid parameters") {
  auto bad = [](auto mutate) {
    wd::Params p;
    mutate(p);
    CHECK_THROWS_AS(wd::validate(p), wd::InvalidParams);
    CHECK_THROWS_AS(wd::emit_spec(p), wd::InvalidParams);
  };
  bad([](wd::Params& p) { p.gammaUnits = 0; });
  bad([](wd::Params& p) { p.deltaUnits = 31; });
  bad([](wd::Params& p) { p.blUpper = 31; });
  bad([](wd::Params& p) { p.kMove = 6; });
  bad([](wd::Params& p) { p.blInitLo = p.blInitHi = 31; });
  bad([](wd::Params& p) { p.blInitLo = -1; });
  bad([](wd::Params& p) { p.blInitLo = 20, p.blInitHi = 10; });
  bad([](wd::Params& p) { p.N = 0; });
  CHECK_NOTHROW(wd::validate(wd::Params{}));
}

TEST_CASE("parameter assignments and config files") {
  wd::Params p;
  wd::apply_param(p, "blInit=12");
  CHECK(p.blInitLo == 12);
  CHECK(p.blInitHi == 12);
  wd::apply_param(p, "blInit=9..26");
  CHECK(p.blInitLo == 9);
  CHECK(p.blInitHi == 26);
  wd::apply_param(p, "tdSeconds=2.5");
  CHECK(p.tdSeconds == doctest::Approx(2.5));
  wd::apply_param(p, "hfInit=true");
  CHECK(p.hfInit);
  CHECK_THROWS_AS(wd::apply_param(p, "nope=1"), wd::InvalidParams);
  CHECK_THROWS_AS(wd::apply_param(p, "N=abc"), wd::InvalidParams);
  CHECK_THROWS_AS(wd::apply_param(p, "N"), wd::InvalidParams);
  auto c = wd::parse_config("# scenario\nN = 2\n\nblMax=20 # small\ndeltaUnits=10\nblUpper=18\nblInit=5\n");
  CHECK(c.N == 2);
  CHECK(c.blMax == 20);
  CHECK(c.deltaUnits == 10);
  CHECK(c.blInitLo == 5);
  CHECK_THROWS_AS(wd::parse_config("N=2\nbogus=3\n"), wd::InvalidParams);
}

TEST_CASE("emitted text parses to the emitted document") {
  wd::Params p;
  p.blInitLo = 9;
  p.blInitHi = 26;
  CHECK(speclang::parse_spec(wd::emit_spec_text(p)) == wd::emit_spec(p));
  auto d = wd::emit_spec(p);
  REQUIRE(d.sys_liveness.size() == 1);
  CHECK(speclang::print_expr(d.sys_liveness[0], d) == "RS = 0 & HF");
  CHECK(d.env_liveness.empty());
}

TEST_CASE("tries automaton, obstacle lifetime and HF invariant along every legal play") {
  wd::Params p;
  auto d = wd::emit_spec(p);
  auto a = arena::build_arena(d);
  const auto& sp = a.space();
  const auto tries = static_cast<std::size_t>(d.find_var("tries"));
  const auto S = static_cast<std::size_t>(d.find_var("S"));
  const auto HF = static_cast<std::size_t>(d.find_var("HF"));
  const std::size_t O[] = {static_cast<std::size_t>(d.find_var("O1")), static_cast<std::size_t>(d.find_var("O2"))};
  auto states = reachable(a);
  CHECK(states.size() > 1000);
  std::size_t retries = 0;
  for (StateIndex s : states) {
    auto cur = sp.decode(s);
    if (cur[tries] > 0) CHECK(cur[HF] == 1);
    if (cur[tries] == 2) {
      CHECK(cur[S] == 1);
      ++retries;
    }
    auto env = a.env_moves(s);
    for (std::size_t k = 0; k < env.size(); ++k)
      for (auto y : a.sys_moves_at(s, k)) {
        auto next = sp.decode(a.successor(env[k], y));
        // 0 -> {0, 1}, 1 -> {0, 2}, 2 -> {0}
        if (cur[tries] == 0) CHECK(next[tries] <= 1);
        if (cur[tries] == 1) CHECK(next[tries] != 1);
        if (cur[tries] == 2) CHECK(next[tries] == 0);
        for (auto o : O)
          if (cur[o]) CHECK(next[o] == 0);
      }
  }
  CHECK(retries > 0);
}

TEST_CASE("realizability at the edges of the paper band") {
  for (int bl : {9, 26, 27}) {
    CAPTURE(bl);
    wd::Params p;
    p.blInitLo = p.blInitHi = bl;
    auto d = wd::emit_spec(p);
    auto a = arena::build_arena(d);
    CHECK(gr1::solve(a, d).realizable == (bl <= 26));
  }
}

}
