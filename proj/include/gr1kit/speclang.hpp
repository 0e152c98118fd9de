#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gr1kit::speclang {

enum class Owner { env, sys };

struct Domain {
  bool boolean = true;
  int lo = 0;
  int hi = 1;

  static Domain boolean_domain() { return {true, 0, 1}; }
  static Domain int_range(int lo, int hi) { return {false, lo, hi}; }

  int size() const { return hi - lo + 1; }
  bool contains(std::int64_t v) const { return v >= lo && v <= hi; }
  bool operator==(const Domain&) const = default;
};

struct VarDecl {
  std::string name;
  Owner owner = Owner::env;
  Domain domain;

  bool operator==(const VarDecl&) const = default;
};

enum class Op {
  int_const,
  bool_const,
  var,
  not_,
  and_,
  or_,
  implies,
  iff,
  eq,
  ne,
  lt,
  le,
  gt,
  ge,
  add,
  sub,
};

/// Expression tree. Variable references carry the ordinal of the variable in
/// the owning document and whether they denote the next-step value (`x'`).
/// Arithmetic nodes (`add`, `sub`) always have an integer constant as their
/// right operand.
struct Expr {
  Op op = Op::bool_const;
  std::int64_t value = 0;
  int var = -1;
  bool next = false;
  std::vector<Expr> args;

  static Expr int_const(std::int64_t v);
  static Expr bool_const(bool v);
  static Expr variable(int ordinal, bool next = false);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  bool operator==(const Expr&) const = default;
};

/// A parsed GR(1) specification. `vars` lists every environment variable
/// before every system variable; within each owner, declaration order is kept.
struct SpecDocument {
  std::vector<VarDecl> vars;
  std::vector<Expr> env_init;
  std::vector<Expr> sys_init;
  std::vector<Expr> env_safety;
  std::vector<Expr> sys_safety;
  std::vector<Expr> env_liveness;
  std::vector<Expr> sys_liveness;

  /// Ordinal of `name`, or -1.
  int find_var(std::string_view name) const;
  int env_var_count() const;

  bool operator==(const SpecDocument&) const = default;
};

enum class ErrorKind {
  syntax,
  unknown_variable,
  type_mismatch,
  ownership_violation,
  duplicate_declaration,
  misplaced_next,
  missing_binding,
};

std::string_view to_string(ErrorKind kind);

struct Diagnostic {
  ErrorKind kind = ErrorKind::syntax;
  int line = 0;
  int column = 0;
  std::string token;
  std::string message;

  std::string format() const;
};

class SpecError : public std::runtime_error {
 public:
  explicit SpecError(Diagnostic diag);
  const Diagnostic& diagnostic() const noexcept { return diag_; }
  ErrorKind kind() const noexcept { return diag_.kind; }

 private:
  Diagnostic diag_;
};

/// Parses and validates spec text. Throws SpecError carrying the first
/// diagnostic. Never throws anything else for any input.
SpecDocument parse_spec(std::string_view text);

/// Canonical text form. All eight section headers are always present.
std::string print_spec(const SpecDocument& doc);

/// Canonical text for a single expression, using `doc` for variable names.
std::string print_expr(const Expr& e, const SpecDocument& doc);
std::string print_expr(const Expr& e, std::span<const VarDecl> vars);

using Valuation = std::vector<int>;
using PartialValuation = std::vector<std::optional<int>>;

/// Evaluates a boolean expression. `current` must bind every variable;
/// next-step references are looked up in `next` and raise a
/// `missing_binding` SpecError when absent. Integer arithmetic is exact.
bool eval_expr(const Expr& e, std::span<const int> current, const PartialValuation& next);

/// Generic evaluator. `lookup(ordinal, is_next)` returns the variable's value
/// (booleans as 0/1). Returns the value of the expression (booleans as 0/1).
template <class Lookup>
std::int64_t evaluate(const Expr& e, const Lookup& lookup) {
  switch (e.op) {
    case Op::int_const:
    case Op::bool_const:
      return e.value;
    case Op::var:
      return lookup(e.var, e.next);
    case Op::not_:
      return evaluate(e.args[0], lookup) == 0 ? 1 : 0;
    case Op::and_:
      return (evaluate(e.args[0], lookup) != 0 && evaluate(e.args[1], lookup) != 0) ? 1 : 0;
    case Op::or_:
      return (evaluate(e.args[0], lookup) != 0 || evaluate(e.args[1], lookup) != 0) ? 1 : 0;
    case Op::implies:
      return (evaluate(e.args[0], lookup) == 0 || evaluate(e.args[1], lookup) != 0) ? 1 : 0;
    case Op::iff:
      return ((evaluate(e.args[0], lookup) != 0) == (evaluate(e.args[1], lookup) != 0)) ? 1 : 0;
    case Op::eq:
      return evaluate(e.args[0], lookup) == evaluate(e.args[1], lookup) ? 1 : 0;
    case Op::ne:
      return evaluate(e.args[0], lookup) != evaluate(e.args[1], lookup) ? 1 : 0;
    case Op::lt:
      return evaluate(e.args[0], lookup) < evaluate(e.args[1], lookup) ? 1 : 0;
    case Op::le:
      return evaluate(e.args[0], lookup) <= evaluate(e.args[1], lookup) ? 1 : 0;
    case Op::gt:
      return evaluate(e.args[0], lookup) > evaluate(e.args[1], lookup) ? 1 : 0;
    case Op::ge:
      return evaluate(e.args[0], lookup) >= evaluate(e.args[1], lookup) ? 1 : 0;
    case Op::add:
      return evaluate(e.args[0], lookup) + evaluate(e.args[1], lookup);
    case Op::sub:
      return evaluate(e.args[0], lookup) - evaluate(e.args[1], lookup);
  }
  return 0;
}

/// Largest ordinal of a next-step reference in `e`, or -1 if there is none.
int max_next_var(const Expr& e);
/// True if `e` references any variable at the current step.
bool has_current_ref(const Expr& e);

}  // namespace gr1kit::speclang
