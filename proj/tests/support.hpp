// Test-only helpers: random spec documents and small utilities.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "gr1kit/speclang.hpp"

namespace testsupport {

using gr1kit::speclang::Domain;
using gr1kit::speclang::Expr;
using gr1kit::speclang::Op;
using gr1kit::speclang::Owner;
using gr1kit::speclang::SpecDocument;
using gr1kit::speclang::VarDecl;

struct GenOptions {
  int max_env_vars = 3;
  int max_sys_vars = 3;
  int max_range = 6;
  int max_depth = 4;
  int max_clauses = 3;
  /// Allow env safety clauses to read next-step system variables.
  bool allow_env_sys_next = false;
  bool allow_negative = true;
};

class DocGen {
 public:
  DocGen(std::uint64_t seed, GenOptions opts = {}) : rng_(seed), o_(opts) {}

  int below(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  bool coin(int percent = 50) { return below(100) < percent; }

  SpecDocument document() {
    SpecDocument d;
    const int ne = below(o_.max_env_vars + 1);
    const int ns = 1 + below(o_.max_sys_vars);
    for (int i = 0; i < ne + ns; ++i) {
      VarDecl v;
      v.name = (i < ne ? "e" : "s") + std::to_string(i);
      v.owner = i < ne ? Owner::env : Owner::sys;
      if (coin()) {
        v.domain = Domain::boolean_domain();
      } else {
        const int lo = o_.allow_negative ? below(7) - 3 : below(4);
        v.domain = Domain::int_range(lo, lo + below(o_.max_range));
      }
      d.vars.push_back(v);
    }
    vars_ = &d.vars;
    auto fill = [&](std::vector<Expr>& out, Section s) {
      const int n = below(o_.max_clauses + 1);
      for (int i = 0; i < n; ++i) out.push_back(boolean(s, o_.max_depth));
    };
    fill(d.env_init, Section::env_init);
    fill(d.sys_init, Section::sys_init);
    fill(d.env_safety, Section::env_trans);
    fill(d.sys_safety, Section::sys_trans);
    fill(d.env_liveness, Section::live);
    fill(d.sys_liveness, Section::live);
    if (d.sys_liveness.empty()) d.sys_liveness.push_back(Expr::bool_const(true));
    return d;
  }

  enum class Section { env_init, sys_init, env_trans, sys_trans, live };

  /// Random boolean clause for a section of `doc`.
  Expr clause(const SpecDocument& doc, Section s) {
    vars_ = &doc.vars;
    return boolean(s, o_.max_depth);
  }

 private:
  // Candidate (ordinal, next) references for a section.
  std::vector<std::pair<int, bool>> refs(Section s, bool want_bool) const {
    std::vector<std::pair<int, bool>> out;
    for (int i = 0; i < static_cast<int>(vars_->size()); ++i) {
      const auto& v = (*vars_)[static_cast<std::size_t>(i)];
      if (v.domain.boolean != want_bool) continue;
      if (s == Section::env_init && v.owner == Owner::sys) continue;
      out.push_back({i, false});
      const bool next_ok = s == Section::sys_trans ||
                           (s == Section::env_trans && (v.owner == Owner::env || o_.allow_env_sys_next));
      if (next_ok) out.push_back({i, true});
    }
    return out;
  }

  Expr integer(Section s, int depth) {
    auto r = refs(s, false);
    if (depth <= 0 || coin(40)) {
      if (r.empty() || coin(25)) return Expr::int_const(below(11) - 5);
      auto [v, n] = r[static_cast<std::size_t>(below(static_cast<int>(r.size())))];
      return Expr::variable(v, n);
    }
    return Expr::binary(coin() ? Op::add : Op::sub, integer(s, depth - 1), Expr::int_const(below(9) - 4));
  }

  Expr boolean(Section s, int depth) {
    if (depth <= 0 || coin(20)) {
      auto r = refs(s, true);
      if (r.empty() || coin(20)) return Expr::bool_const(coin());
      auto [v, n] = r[static_cast<std::size_t>(below(static_cast<int>(r.size())))];
      return Expr::variable(v, n);
    }
    switch (below(9)) {
      case 0: return Expr::unary(Op::not_, boolean(s, depth - 1));
      case 1: return Expr::binary(Op::and_, boolean(s, depth - 1), boolean(s, depth - 1));
      case 2: return Expr::binary(Op::or_, boolean(s, depth - 1), boolean(s, depth - 1));
      case 3: return Expr::binary(Op::implies, boolean(s, depth - 1), boolean(s, depth - 1));
      case 4: return Expr::binary(Op::iff, boolean(s, depth - 1), boolean(s, depth - 1));
      case 5: {
        const Op ops[] = {Op::eq, Op::ne};
        return Expr::binary(ops[below(2)], boolean(s, 0), boolean(s, 0));
      }
      default: {
        const Op ops[] = {Op::eq, Op::ne, Op::lt, Op::le, Op::gt, Op::ge};
        return Expr::binary(ops[below(6)], integer(s, depth - 1), integer(s, depth - 1));
      }
    }
  }

  std::mt19937_64 rng_;
  GenOptions o_;
  const std::vector<VarDecl>* vars_ = nullptr;
};

/// The i-th fuzz input: raw bytes, grammar-alphabet soup, or a mutated
/// valid document, in rotation.
inline std::string fuzz_input(std::mt19937_64& rng, const std::vector<std::string>& valid, int i) {
  static const std::string alphabet = "[]_:.'!&|-<>=()+# \n\tabcxyz019ENV_SYSTRANIT";
  std::string input;
  switch (i % 3) {
    case 0: {
      const auto n = rng() % 200;
      for (std::uint64_t k = 0; k < n; ++k) input += static_cast<char>(rng() % 256);
      break;
    }
    case 1: {
      const auto n = rng() % 200;
      for (std::uint64_t k = 0; k < n; ++k) input += alphabet[rng() % alphabet.size()];
      break;
    }
    default: {
      input = valid[rng() % valid.size()];
      const auto edits = 1 + rng() % 4;
      for (std::uint64_t k = 0; k < edits && !input.empty(); ++k) {
        const auto pos = rng() % input.size();
        switch (rng() % 3) {
          case 0: input.erase(pos, 1 + rng() % 5); break;
          case 1: input.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
          default: input[pos] = static_cast<char>(rng() % 256); break;
        }
      }
    }
  }
  return input;
}

}  // namespace testsupport
