#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "gr1kit/arena.hpp"
#include "gr1kit/workdelivery.hpp"
#include "support.hpp"

using namespace gr1kit;
using arena::Assignment;
using arena::StateIndex;
using speclang::PartialValuation;

namespace {

bool all_hold(const std::vector<speclang::Expr>& clauses, const speclang::Valuation& cur, const PartialValuation& next) {
  return std::all_of(clauses.begin(), clauses.end(),
                     [&](const speclang::Expr& c) { return speclang::eval_expr(c, cur, next); });
}

// Clause-by-clause reference semantics, compared against the built arena.
void check_against_brute_force(const speclang::SpecDocument& d, const arena::GameArena& a) {
  const auto& sp = a.space();
  const int nv = sp.var_count();
  const int ne = sp.env_var_count();
  for (StateIndex s = 0; s < a.state_count(); ++s) {
    const auto cur = sp.decode(s);
    std::vector<Assignment> env_expected;
    for (Assignment e = 0; e < sp.env_assignment_count(); ++e) {
      const auto ev = sp.decode(sp.compose(e, 0));
      PartialValuation next(static_cast<std::size_t>(nv));
      for (int i = 0; i < ne; ++i) next[static_cast<std::size_t>(i)] = ev[static_cast<std::size_t>(i)];
      if (all_hold(d.env_safety, cur, next)) env_expected.push_back(e);
    }
    auto env = a.env_moves(s);
    REQUIRE(std::vector<Assignment>(env.begin(), env.end()) == env_expected);
    for (std::size_t k = 0; k < env.size(); ++k) {
      std::vector<Assignment> sys_expected;
      for (Assignment y = 0; y < sp.sys_assignment_count(); ++y) {
        const auto nv_full = sp.decode(sp.compose(env[k], y));
        PartialValuation next(nv_full.begin(), nv_full.end());
        if (all_hold(d.sys_safety, cur, next)) sys_expected.push_back(y);
      }
      auto sys = a.sys_moves_at(s, k);
      REQUIRE(std::vector<Assignment>(sys.begin(), sys.end()) == sys_expected);
      auto by_env = a.sys_moves(s, env[k]);
      CHECK(std::equal(by_env.begin(), by_env.end(), sys.begin(), sys.end()));
    }
  }
  std::vector<Assignment> init_expected;
  for (Assignment e = 0; e < sp.env_assignment_count(); ++e)
    if (all_hold(d.env_init, sp.decode(sp.compose(e, 0)), {})) init_expected.push_back(e);
  CHECK(a.env_init() == init_expected);
  for (StateIndex s = 0; s < a.state_count(); ++s) {
    const bool expected = std::binary_search(init_expected.begin(), init_expected.end(), sp.env_part(s)) &&
                          all_hold(d.sys_init, sp.decode(s), {});
    CHECK(a.initial_states().test(s) == expected);
  }
}

}  // namespace

TEST_SUITE("arena") {

TEST_CASE("two booleans without clauses") {
  auto d = speclang::parse_spec("[ENV_VARS] e:bool [SYS_VARS] y:bool");
  auto a = arena::build_arena(d);
  CHECK(a.state_count() == 4);
  for (StateIndex s = 0; s < 4; ++s) {
    CHECK(a.env_moves(s).size() == 2);
    CHECK(a.sys_moves(s, 0).size() == 2);
    CHECK(a.sys_moves(s, 1).size() == 2);
  }
  CHECK(a.env_init().size() == 2);
  CHECK(a.initial_states().count() == 4);
}

TEST_CASE("frame clause gives singleton responses") {
  auto d = speclang::parse_spec("[ENV_VARS] e:bool [SYS_VARS] rs:0..3\n[SYS_TRANS]\nrs' = rs\n");
  auto a = arena::build_arena(d);
  const auto& sp = a.space();
  for (StateIndex s = 0; s < a.state_count(); ++s)
    for (Assignment e : a.env_moves(s)) {
      auto ys = a.sys_moves(s, e);
      REQUIRE(ys.size() == 1);
      CHECK(sp.decode_sys(ys[0])[0] == sp.decode(s)[1]);
    }
}

TEST_CASE("obstacle clearance clause") {
  auto d = speclang::parse_spec("[ENV_VARS] o1:bool [SYS_VARS] y:bool\n[ENV_TRANS]\no1 -> !o1'\n");
  auto a = arena::build_arena(d);
  const auto& sp = a.space();
  for (StateIndex s = 0; s < a.state_count(); ++s) {
    auto env = a.env_moves(s);
    if (sp.decode(s)[0] == 1) {
      REQUIRE(env.size() == 1);
      CHECK(sp.decode_env(env[0])[0] == 0);
    } else {
      CHECK(env.size() == 2);
    }
  }
  CHECK(a.sys_moves(sp.encode(std::vector<int>{1, 0}), 1).empty());  // illegal env move
}

TEST_CASE("state index bijection") {
  auto d = speclang::parse_spec("[ENV_VARS] a:-2..3 b:bool [SYS_VARS] c:5..7 d:bool");
  arena::VarSpace sp(d.vars);
  CHECK(sp.state_count() == 6 * 2 * 3 * 2);
  CHECK(sp.env_assignment_count() == 12);
  for (StateIndex s = 0; s < sp.state_count(); ++s) {
    auto v = sp.decode(s);
    CHECK(sp.encode(v) == s);
    CHECK(sp.compose(sp.env_part(s), sp.sys_part(s)) == s);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(d.vars[i].domain.contains(v[i]));
  }
  CHECK(sp.encode(std::vector<int>{-2, 0, 5, 0}) == 0);
  CHECK(sp.encode(std::vector<int>{-1, 0, 5, 0}) == 1);
  CHECK(sp.encode(std::vector<int>{-2, 0, 6, 0}) == 12);
}

TEST_CASE("capacity cap") {
  std::string text = "[ENV_VARS]";
  for (int i = 0; i < 25; ++i) text += " b" + std::to_string(i) + ":bool";
  auto d = speclang::parse_spec(text);
  CHECK_THROWS_AS(arena::build_arena(d), arena::CapacityExceeded);
  auto small = speclang::parse_spec("[ENV_VARS] x:0..99 [SYS_VARS] y:0..99");
  CHECK_THROWS_AS(arena::build_arena(small, {9999}), arena::CapacityExceeded);
  CHECK(arena::build_arena(small, {10000}).state_count() == 10000);
}

TEST_CASE("moves equal brute-force clause evaluation on random small specs") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    CAPTURE(seed);
    testsupport::GenOptions o;
    o.max_env_vars = seed % 2 ? 1 : 2;
    o.max_sys_vars = 3 - o.max_env_vars;
    o.max_range = 4;
    o.max_depth = 3;
    testsupport::DocGen gen(seed, o);
    auto d = gen.document();
    auto a = arena::build_arena(d);
    check_against_brute_force(d, a);
  }
}

TEST_CASE("adding a safety clause never enlarges a move set") {
  using Section = testsupport::DocGen::Section;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CAPTURE(seed);
    testsupport::GenOptions o;
    o.max_env_vars = 2;
    o.max_sys_vars = 1;
    o.max_range = 4;
    testsupport::DocGen gen(seed, o);
    auto d = gen.document();
    auto base = arena::build_arena(d);
    auto more = d;
    if (seed % 2) more.env_safety.push_back(gen.clause(d, Section::env_trans));
    else more.sys_safety.push_back(gen.clause(d, Section::sys_trans));
    auto ext = arena::build_arena(more);
    REQUIRE(ext.state_count() == base.state_count());
    for (StateIndex s = 0; s < base.state_count(); ++s) {
      auto be = base.env_moves(s);
      auto ee = ext.env_moves(s);
      CHECK(std::includes(be.begin(), be.end(), ee.begin(), ee.end()));
      for (Assignment e : ee) {
        auto bs = base.sys_moves(s, e);
        auto es = ext.sys_moves(s, e);
        CHECK(std::includes(bs.begin(), bs.end(), es.begin(), es.end()));
      }
    }
  }
}

TEST_CASE("work-delivery state count by enumeration") {
  auto d = workdelivery::emit_spec(workdelivery::Params{});
  std::uint64_t product = 1;
  for (const auto& v : d.vars) product *= static_cast<std::uint64_t>(v.domain.size());
  CHECK(product == 47616);
  auto a = arena::build_arena(d);
  CHECK(a.state_count() == 47616);
  StateIndex count = 0;
  for (StateIndex s = 0; s < a.state_count(); ++s) count += a.space().encode(a.space().decode(s)) == s;
  CHECK(count == 47616);
}

TEST_CASE("work-delivery adjacency and obstacle blocking") {
  auto d = workdelivery::emit_spec(workdelivery::Params{});
  auto a = arena::build_arena(d);
  const auto& sp = a.space();
  const int RS = d.find_var("RS"), ACT = d.find_var("ACT"), O1 = d.find_var("O1"), BL = d.find_var("BL");
  int checked = 0;
  for (StateIndex s = 0; s < a.state_count(); ++s) {
    auto v = sp.decode(s);
    if (v[RS] != 0 || v[ACT] != 0 || v[BL] != 20) continue;
    auto env = a.env_moves(s);
    for (std::size_t k = 0; k < env.size(); ++k) {
      auto ev = sp.decode(sp.compose(env[k], 0));
      for (Assignment y : a.sys_moves_at(s, k)) {
        auto n = sp.decode(sp.compose(env[k], y));
        CHECK(n[ACT] <= 1);
        if (ev[O1]) CHECK(n[ACT] != 1);
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("dump lists every move triple") {
  auto d = speclang::parse_spec("[ENV_VARS] e:bool [SYS_VARS] y:bool\n[SYS_TRANS]\ny' = e'\n");
  auto a = arena::build_arena(d);
  std::ostringstream os;
  a.dump(os);
  const auto text = os.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 8);
  CHECK(text.find("0\t1\t1\n") != std::string::npos);
}

TEST_CASE("variable order is validated") {
  using speclang::Domain;
  using speclang::Owner;
  std::vector<speclang::VarDecl> vars{{"y", Owner::sys, Domain::boolean_domain()}, {"e", Owner::env, Domain::boolean_domain()}};
  CHECK_THROWS_AS(arena::VarSpace{vars}, std::invalid_argument);
}

}
