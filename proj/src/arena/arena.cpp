#include "gr1kit/arena.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <string>

namespace gr1kit::arena {

using speclang::Expr;
using speclang::Owner;
using speclang::SpecDocument;
using speclang::VarDecl;

VarSpace::VarSpace(std::vector<VarDecl> vars, std::uint64_t max_states) : vars_(std::move(vars)) {
  stride_.resize(vars_.size());
  std::uint64_t product = 1;
  bool seen_sys = false;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].owner == Owner::sys) {
      seen_sys = true;
    } else {
      if (seen_sys) throw std::invalid_argument("environment variables must precede system variables");
      ++env_vars_;
    }
    stride_[i] = product;
    product *= static_cast<std::uint64_t>(vars_[i].domain.size());
    if (product > max_states)
      throw CapacityExceeded("valuation space exceeds " + std::to_string(max_states) + " states");
    if (i + 1 == static_cast<std::size_t>(env_vars_)) env_count_ = product;
  }
  sys_count_ = product / env_count_;
}

StateIndex VarSpace::encode(std::span<const int> valuation) const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    s += static_cast<std::uint64_t>(valuation[i] - vars_[i].domain.lo) * stride_[i];
  return static_cast<StateIndex>(s);
}

void VarSpace::decode_into(StateIndex s, std::span<int> out) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    out[i] = vars_[i].domain.lo + static_cast<int>((s / stride_[i]) % static_cast<std::uint64_t>(vars_[i].domain.size()));
}

Valuation VarSpace::decode(StateIndex s) const {
  Valuation v(vars_.size());
  decode_into(s, v);
  return v;
}

Valuation VarSpace::decode_env(Assignment a) const {
  Valuation full = decode(compose(a, 0));
  full.resize(static_cast<std::size_t>(env_vars_));
  return full;
}

Valuation VarSpace::decode_sys(Assignment a) const {
  Valuation full = decode(compose(0, a));
  return Valuation(full.begin() + env_vars_, full.end());
}

std::span<const Assignment> GameArena::sys_moves(StateIndex s, Assignment e) const {
  auto moves = env_moves(s);
  auto it = std::lower_bound(moves.begin(), moves.end(), e);
  if (it == moves.end() || *it != e) return {};
  return sys_moves_at(s, static_cast<std::size_t>(it - moves.begin()));
}

void GameArena::dump(std::ostream& os) const {
  for (StateIndex s = 0; s < state_count(); ++s) {
    auto envs = env_moves(s);
    for (std::size_t k = 0; k < envs.size(); ++k)
      for (Assignment y : sys_moves_at(s, k)) os << s << '\t' << envs[k] << '\t' << y << '\n';
  }
}

GameArena GameArena::from_relations(VarSpace space, std::vector<std::vector<Assignment>> env_moves,
                                    std::vector<std::vector<std::vector<Assignment>>> sys_moves,
                                    std::vector<Assignment> env_init, StateSet initial_states) {
  const std::size_t n = space.state_count();
  if (env_moves.size() != n || sys_moves.size() != n || initial_states.size() != n)
    throw std::invalid_argument("relation sizes do not match the state count");
  GameArena a;
  a.space_ = std::move(space);
  a.env_offsets_.push_back(0);
  a.sys_offsets_.push_back(0);
  for (std::size_t s = 0; s < n; ++s) {
    if (sys_moves[s].size() != env_moves[s].size()) throw std::invalid_argument("sys relation does not match env moves");
    std::vector<std::size_t> order(env_moves[s].size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return env_moves[s][x] < env_moves[s][y]; });
    for (std::size_t k : order) {
      a.env_moves_.push_back(env_moves[s][k]);
      auto ys = sys_moves[s][k];
      std::sort(ys.begin(), ys.end());
      ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
      a.sys_moves_.insert(a.sys_moves_.end(), ys.begin(), ys.end());
      a.sys_offsets_.push_back(a.sys_moves_.size());
    }
    a.env_offsets_.push_back(a.env_moves_.size());
  }
  std::sort(env_init.begin(), env_init.end());
  a.env_init_ = std::move(env_init);
  a.initial_ = std::move(initial_states);
  return a;
}

namespace {

// Substitutes current-step values and folds constants. Booleans and
// integers share the int64 representation used by evaluate().
Expr fold(const Expr& e, std::span<const int> cur) {
  using speclang::Op;
  auto is_const = [](const Expr& x) { return x.op == Op::int_const || x.op == Op::bool_const; };
  auto truth = [](bool b) { return Expr::bool_const(b); };
  switch (e.op) {
    case Op::int_const:
    case Op::bool_const:
      return e;
    case Op::var:
      return e.next ? e : Expr::int_const(cur[static_cast<std::size_t>(e.var)]);
    case Op::not_: {
      Expr a = fold(e.args[0], cur);
      if (is_const(a)) return truth(a.value == 0);
      return Expr::unary(Op::not_, std::move(a));
    }
    default:
      break;
  }
  Expr l = fold(e.args[0], cur);
  const bool lc = is_const(l);
  switch (e.op) {
    case Op::and_:
      if (lc && l.value == 0) return truth(false);
      break;
    case Op::or_:
      if (lc && l.value != 0) return truth(true);
      break;
    case Op::implies:
      if (lc && l.value == 0) return truth(true);
      break;
    default:
      break;
  }
  Expr r = fold(e.args[1], cur);
  const bool rc = is_const(r);
  if (lc && rc) {
    auto lookup = [](int, bool) -> std::int64_t { return 0; };
    return Expr{e.op == Op::add || e.op == Op::sub ? Op::int_const : Op::bool_const,
                speclang::evaluate(Expr::binary(e.op, std::move(l), std::move(r)), lookup), -1, false, {}};
  }
  switch (e.op) {
    case Op::and_:
      if (lc) return r;
      if (rc) return r.value == 0 ? truth(false) : l;
      break;
    case Op::or_:
      if (lc) return r;
      if (rc) return r.value != 0 ? truth(true) : l;
      break;
    case Op::implies:
      if (lc) return r;
      if (rc) return r.value != 0 ? truth(true) : Expr::unary(Op::not_, std::move(l));
      break;
    case Op::iff:
      if (lc) return l.value != 0 ? r : Expr::unary(Op::not_, std::move(r));
      if (rc) return r.value != 0 ? l : Expr::unary(Op::not_, std::move(l));
      break;
    default:
      break;
  }
  return Expr::binary(e.op, std::move(l), std::move(r));
}

// Clauses grouped by the largest next-step variable they read: a clause is
// checked as soon as the enumeration has bound that variable.
struct Buckets {
  std::vector<Expr> folded;
  std::vector<const Expr*> upfront;
  std::vector<std::vector<const Expr*>> at;

  // Returns false if some clause folds to false.
  bool load(const std::vector<Expr>& clauses, std::span<const int> cur, int first_var) {
    folded.clear();
    upfront.clear();
    for (auto& a : at) a.clear();
    for (const auto& c : clauses) {
      Expr f = fold(c, cur);
      if (f.op == speclang::Op::bool_const) {
        if (f.value == 0) return false;
        continue;
      }
      folded.push_back(std::move(f));
    }
    for (const auto& f : folded) {
      const int m = speclang::max_next_var(f);
      if (m < first_var) upfront.push_back(&f);
      else at[static_cast<std::size_t>(m)].push_back(&f);
    }
    return true;
  }
};

class Builder {
 public:
  Builder(const SpecDocument& doc, const VarSpace& space)
      : doc_(doc),
        space_(space),
        n_(space.var_count()),
        env_n_(space.env_var_count()),
        cur_(static_cast<std::size_t>(n_)),
        nxt_(static_cast<std::size_t>(n_)) {
    env_.at.resize(static_cast<std::size_t>(n_));
    sys_.at.resize(static_cast<std::size_t>(n_));
    std::uint64_t s = 1;
    for (int i = 0; i < n_; ++i) {
      stride_.push_back(s);
      s *= static_cast<std::uint64_t>(space.vars()[static_cast<std::size_t>(i)].domain.size());
    }
  }

  void build(std::vector<std::uint64_t>& env_off, std::vector<Assignment>& env_moves,
             std::vector<std::uint64_t>& sys_off, std::vector<Assignment>& sys_moves) {
    const std::uint64_t n_states = space_.state_count();
    env_off.reserve(n_states + 1);
    env_off.push_back(0);
    sys_off.push_back(0);
    std::vector<Assignment> envs;
    std::vector<Assignment> syss;
    for (std::uint64_t s = 0; s < n_states; ++s) {
      space_.decode_into(static_cast<StateIndex>(s), cur_);
      envs.clear();
      if (env_.load(doc_.env_safety, cur_, 0) && all(env_.upfront)) enumerate(0, env_n_, 1, 0, env_, envs);
      std::sort(envs.begin(), envs.end());
      const bool sys_ok = !envs.empty() && sys_.load(doc_.sys_safety, cur_, env_n_);
      for (Assignment e : envs) {
        set_next_env(e);
        syss.clear();
        if (sys_ok && all(sys_.upfront)) enumerate(env_n_, n_, space_.env_assignment_count(), 0, sys_, syss);
        std::sort(syss.begin(), syss.end());
        env_moves.push_back(e);
        sys_moves.insert(sys_moves.end(), syss.begin(), syss.end());
        sys_off.push_back(sys_moves.size());
      }
      env_off.push_back(env_moves.size());
    }
  }

 private:
  bool all(const std::vector<const Expr*>& clauses) const {
    auto lookup = [this](int v, bool next) -> std::int64_t { return next ? nxt_[static_cast<std::size_t>(v)] : cur_[static_cast<std::size_t>(v)]; };
    for (const Expr* c : clauses)
      if (speclang::evaluate(*c, lookup) == 0) return false;
    return true;
  }

  void set_next_env(Assignment e) {
    for (int i = 0; i < env_n_; ++i) {
      const auto& d = space_.vars()[static_cast<std::size_t>(i)].domain;
      nxt_[static_cast<std::size_t>(i)] = d.lo + static_cast<int>((e / stride_[static_cast<std::size_t>(i)]) % static_cast<std::uint64_t>(d.size()));
    }
  }

  // Binds next-step values of variables [v, end) and records the assignment
  // index (state stride divided by `base`) of every leaf that satisfies all
  // clauses.
  void enumerate(int v, int end, std::uint64_t base, std::uint64_t index, const Buckets& b, std::vector<Assignment>& out) {
    if (v == end) {
      out.push_back(static_cast<Assignment>(index));
      return;
    }
    const auto& d = space_.vars()[static_cast<std::size_t>(v)].domain;
    const std::uint64_t stride = stride_[static_cast<std::size_t>(v)] / base;
    for (int x = d.lo; x <= d.hi; ++x) {
      nxt_[static_cast<std::size_t>(v)] = x;
      if (!all(b.at[static_cast<std::size_t>(v)])) continue;
      enumerate(v + 1, end, base, index + static_cast<std::uint64_t>(x - d.lo) * stride, b, out);
    }
  }

  const SpecDocument& doc_;
  const VarSpace& space_;
  int n_;
  int env_n_;
  std::vector<int> cur_;
  std::vector<int> nxt_;
  std::vector<std::uint64_t> stride_;
  Buckets env_;
  Buckets sys_;
};

}  // namespace

GameArena build_arena(const SpecDocument& doc, const BuildOptions& opts) {
  GameArena a;
  a.space_ = VarSpace(doc.vars, opts.max_states);
  const VarSpace& space = a.space_;
  if (space.state_count() > std::numeric_limits<StateIndex>::max())
    throw CapacityExceeded("valuation space does not fit a 32-bit state index");

  Builder(doc, space).build(a.env_offsets_, a.env_moves_, a.sys_offsets_, a.sys_moves_);

  std::vector<int> cur(static_cast<std::size_t>(space.var_count()));
  auto holds = [&](const std::vector<Expr>& clauses) {
    auto lookup = [&](int v, bool) -> std::int64_t { return cur[static_cast<std::size_t>(v)]; };
    return std::all_of(clauses.begin(), clauses.end(), [&](const Expr& c) { return speclang::evaluate(c, lookup) != 0; });
  };
  a.initial_.resize(space.state_count());
  for (Assignment e = 0; e < space.env_assignment_count(); ++e) {
    space.decode_into(space.compose(e, 0), cur);
    if (!holds(doc.env_init)) continue;
    a.env_init_.push_back(e);
    for (Assignment y = 0; y < space.sys_assignment_count(); ++y) {
      StateIndex s = space.compose(e, y);
      space.decode_into(s, cur);
      if (holds(doc.sys_init)) a.initial_.set(s);
    }
  }
  return a;
}

StateSet state_predicate(const VarSpace& space, const Expr& pred) {
  StateSet out(space.state_count());
  std::vector<int> cur(static_cast<std::size_t>(space.var_count()));
  auto lookup = [&](int v, bool) -> std::int64_t { return cur[static_cast<std::size_t>(v)]; };
  for (StateIndex s = 0; s < space.state_count(); ++s) {
    space.decode_into(s, cur);
    if (speclang::evaluate(pred, lookup) != 0) out.set(s);
  }
  return out;
}

}  // namespace gr1kit::arena
