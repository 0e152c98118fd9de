#include <algorithm>
#include <unordered_map>

#include "gr1kit/speclang.hpp"
#include "lexer.hpp"

namespace gr1kit::speclang {
namespace {

using detail::Tok;
using detail::Token;

enum class Section { none, env_vars, sys_vars, env_init, sys_init, env_trans, sys_trans, env_live, sys_live };

Section section_of(const std::string& name) {
  if (name == "ENV_VARS") return Section::env_vars;
  if (name == "SYS_VARS") return Section::sys_vars;
  if (name == "ENV_INIT") return Section::env_init;
  if (name == "SYS_INIT") return Section::sys_init;
  if (name == "ENV_TRANS") return Section::env_trans;
  if (name == "SYS_TRANS") return Section::sys_trans;
  if (name == "ENV_LIVENESS") return Section::env_live;
  return Section::sys_live;
}

bool ends_clause(Tok t) { return t == Tok::newline || t == Tok::section || t == Tok::end; }

constexpr int kMaxDepth = 200;

constexpr int kMaxHeight = 1000;

struct Typed {
  Expr expr;
  bool boolean = true;
  int height = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SpecDocument run() {
    collect_declarations();
    parse_clauses();
    if (doc_.sys_liveness.empty()) doc_.sys_liveness.push_back(Expr::bool_const(true));
    return std::move(doc_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(ErrorKind kind, const Token& at, std::string msg) const {
    std::string text = at.kind == Tok::end ? "<end of input>" : at.kind == Tok::newline ? "<newline>" : at.text;
    if (at.kind == Tok::ident_next) text += "'";
    if (at.kind == Tok::section) text = "[" + text + "]";
    throw SpecError(Diagnostic{kind, at.line, at.column, std::move(text), std::move(msg)});
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(ErrorKind::syntax, peek(), std::string("expected ") + what);
    return take();
  }

  // Pass 1: declarations only. Clause sections are skipped token-wise.
  void collect_declarations() {
    std::vector<VarDecl> env, sys;
    std::unordered_map<std::string, bool> seen;
    Section sec = Section::none;
    pos_ = 0;
    while (peek().kind != Tok::end) {
      const Token& t = peek();
      if (t.kind == Tok::newline) { take(); continue; }
      if (t.kind == Tok::section) { sec = section_of(take().text); continue; }
      if (sec == Section::none) fail(ErrorKind::syntax, t, "expected a section header");
      if (sec != Section::env_vars && sec != Section::sys_vars) {
        while (!ends_clause(peek().kind)) take();
        continue;
      }
      while (!ends_clause(peek().kind)) {
        const Token& name = expect(Tok::ident, "variable name");
        if (seen.count(name.text)) fail(ErrorKind::duplicate_declaration, name, "variable declared twice");
        seen[name.text] = true;
        expect(Tok::colon, "':'");
        VarDecl decl;
        decl.name = name.text;
        decl.owner = sec == Section::env_vars ? Owner::env : Owner::sys;
        if (peek().kind == Tok::kw_bool) {
          take();
          decl.domain = Domain::boolean_domain();
        } else {
          const Token& lo_tok = peek();
          std::int64_t lo = signed_integer();
          expect(Tok::dotdot, "'..'");
          std::int64_t hi = signed_integer();
          if (lo > hi) fail(ErrorKind::syntax, lo_tok, "empty integer range");
          if (hi - lo >= (std::int64_t{1} << 30)) fail(ErrorKind::syntax, lo_tok, "integer range too large");
          decl.domain = Domain::int_range(static_cast<int>(lo), static_cast<int>(hi));
        }
        (decl.owner == Owner::env ? env : sys).push_back(std::move(decl));
      }
    }
    doc_.vars = std::move(env);
    for (auto& d : sys) doc_.vars.push_back(std::move(d));
    for (std::size_t i = 0; i < doc_.vars.size(); ++i) index_[doc_.vars[i].name] = static_cast<int>(i);
  }

  std::int64_t signed_integer() {
    bool neg = false;
    if (peek().kind == Tok::minus) {
      take();
      neg = true;
    }
    const Token& t = expect(Tok::integer, "integer");
    return neg ? -t.ival : t.ival;
  }

  // Pass 2: clauses, resolved and type checked against the declarations.
  void parse_clauses() {
    pos_ = 0;
    section_ = Section::none;
    while (peek().kind != Tok::end) {
      const Token& t = peek();
      if (t.kind == Tok::newline) { take(); continue; }
      if (t.kind == Tok::section) { section_ = section_of(take().text); continue; }
      if (section_ == Section::env_vars || section_ == Section::sys_vars) {
        while (!ends_clause(peek().kind)) take();
        continue;
      }
      const Token& first = peek();
      depth_ = 0;
      Typed clause = parse_iff();
      if (!clause.boolean) fail(ErrorKind::type_mismatch, first, "clause must be a boolean formula");
      if (!ends_clause(peek().kind)) fail(ErrorKind::syntax, peek(), "unexpected token after clause");
      target().push_back(std::move(clause.expr));
    }
  }

  std::vector<Expr>& target() {
    switch (section_) {
      case Section::env_init: return doc_.env_init;
      case Section::sys_init: return doc_.sys_init;
      case Section::env_trans: return doc_.env_safety;
      case Section::sys_trans: return doc_.sys_safety;
      case Section::env_live: return doc_.env_liveness;
      default: return doc_.sys_liveness;
    }
  }

  void descend(const Token& at) {
    if (++depth_ > kMaxDepth) fail(ErrorKind::syntax, at, "expression nested too deeply");
  }

  Typed combine(Op op, Typed lhs, Typed rhs, bool boolean, const Token& at) const {
    int h = std::max(lhs.height, rhs.height) + 1;
    if (h > kMaxHeight) fail(ErrorKind::syntax, at, "expression too large");
    return {Expr::binary(op, std::move(lhs.expr), std::move(rhs.expr)), boolean, h};
  }

  void need_bool(const Typed& t, const Token& op) const {
    if (!t.boolean) fail(ErrorKind::type_mismatch, op, "operand must be boolean");
  }

  Typed parse_iff() {
    Typed lhs = parse_implies();
    while (peek().kind == Tok::dblarrow) {
      const Token& op = take();
      Typed rhs = parse_implies();
      need_bool(lhs, op);
      need_bool(rhs, op);
      lhs = combine(Op::iff, std::move(lhs), std::move(rhs), true, op);
    }
    return lhs;
  }

  Typed parse_implies() {
    Typed lhs = parse_or();
    if (peek().kind == Tok::arrow) {
      const Token& op = take();
      descend(op);
      Typed rhs = parse_implies();
      --depth_;
      need_bool(lhs, op);
      need_bool(rhs, op);
      return combine(Op::implies, std::move(lhs), std::move(rhs), true, op);
    }
    return lhs;
  }

  Typed parse_or() {
    Typed lhs = parse_and();
    while (peek().kind == Tok::pipe) {
      const Token& op = take();
      Typed rhs = parse_and();
      need_bool(lhs, op);
      need_bool(rhs, op);
      lhs = combine(Op::or_, std::move(lhs), std::move(rhs), true, op);
    }
    return lhs;
  }

  Typed parse_and() {
    Typed lhs = parse_not();
    while (peek().kind == Tok::amp) {
      const Token& op = take();
      Typed rhs = parse_not();
      need_bool(lhs, op);
      need_bool(rhs, op);
      lhs = combine(Op::and_, std::move(lhs), std::move(rhs), true, op);
    }
    return lhs;
  }

  Typed parse_not() {
    if (peek().kind == Tok::bang) {
      const Token& op = take();
      descend(op);
      Typed arg = parse_not();
      --depth_;
      need_bool(arg, op);
      int h = arg.height + 1;
      return {Expr::unary(Op::not_, std::move(arg.expr)), true, h};
    }
    return parse_cmp();
  }

  Typed parse_cmp() {
    Typed lhs = parse_arith();
    Op op;
    switch (peek().kind) {
      case Tok::eq: op = Op::eq; break;
      case Tok::ne: op = Op::ne; break;
      case Tok::lt: op = Op::lt; break;
      case Tok::le: op = Op::le; break;
      case Tok::gt: op = Op::gt; break;
      case Tok::ge: op = Op::ge; break;
      default: return lhs;
    }
    const Token& op_tok = take();
    Typed rhs = parse_arith();
    if (lhs.boolean != rhs.boolean) fail(ErrorKind::type_mismatch, op_tok, "comparison between boolean and integer");
    if (lhs.boolean && op != Op::eq && op != Op::ne) fail(ErrorKind::type_mismatch, op_tok, "ordering comparison on booleans");
    return combine(op, std::move(lhs), std::move(rhs), true, op_tok);
  }

  Typed parse_arith() {
    Typed lhs = parse_atom();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const Token& op_tok = take();
      if (lhs.boolean) fail(ErrorKind::type_mismatch, op_tok, "arithmetic on a boolean");
      const Token& lit = peek();
      if (lit.kind != Tok::integer && lit.kind != Tok::minus) {
        if (lit.kind == Tok::ident || lit.kind == Tok::ident_next || lit.kind == Tok::lparen)
          fail(ErrorKind::type_mismatch, lit, "arithmetic offsets must be integer constants");
        fail(ErrorKind::syntax, lit, "expected integer constant");
      }
      std::int64_t v = signed_integer();
      Op op = op_tok.kind == Tok::plus ? Op::add : Op::sub;
      lhs = combine(op, std::move(lhs), Typed{Expr::int_const(v), false, 1}, false, op_tok);
    }
    return lhs;
  }

  Typed parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::integer:
        take();
        return {Expr::int_const(t.ival), false};
      case Tok::minus: {
        take();
        const Token& num = expect(Tok::integer, "integer after '-'");
        return {Expr::int_const(-num.ival), false};
      }
      case Tok::kw_true:
        take();
        return {Expr::bool_const(true), true};
      case Tok::kw_false:
        take();
        return {Expr::bool_const(false), true};
      case Tok::ident:
      case Tok::ident_next:
        return variable(take());
      case Tok::lparen: {
        take();
        descend(t);
        Typed inner = parse_iff();
        --depth_;
        expect(Tok::rparen, "')'");
        return inner;
      }
      default:
        fail(ErrorKind::syntax, t, "expected an operand");
    }
  }

  Typed variable(const Token& t) {
    auto it = index_.find(t.text);
    if (it == index_.end()) fail(ErrorKind::unknown_variable, t, "undeclared variable");
    const int ordinal = it->second;
    const VarDecl& decl = doc_.vars[ordinal];
    const bool next = t.kind == Tok::ident_next;
    const bool state_section = section_ == Section::env_init || section_ == Section::sys_init ||
                               section_ == Section::env_live || section_ == Section::sys_live;
    if (next && state_section) fail(ErrorKind::misplaced_next, t, "next-step reference not allowed in this section");
    if (section_ == Section::env_init && decl.owner == Owner::sys)
      fail(ErrorKind::ownership_violation, t, "environment initial condition references a system variable");
    if (section_ == Section::env_trans && next && decl.owner == Owner::sys)
      fail(ErrorKind::ownership_violation, t, "environment safety references a next-step system variable");
    return {Expr::variable(ordinal, next), decl.domain.boolean};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Section section_ = Section::none;
  int depth_ = 0;
  SpecDocument doc_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace

SpecDocument parse_spec(std::string_view text) {
  Parser parser(detail::lex(text));
  return parser.run();
}

}  // namespace gr1kit::speclang
