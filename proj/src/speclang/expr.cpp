#include <algorithm>

#include "gr1kit/speclang.hpp"

namespace gr1kit::speclang {

Expr Expr::int_const(std::int64_t v) {
  Expr e;
  e.op = Op::int_const;
  e.value = v;
  return e;
}

Expr Expr::bool_const(bool v) {
  Expr e;
  e.op = Op::bool_const;
  e.value = v ? 1 : 0;
  return e;
}

Expr Expr::variable(int ordinal, bool next) {
  Expr e;
  e.op = Op::var;
  e.var = ordinal;
  e.next = next;
  return e;
}

Expr Expr::unary(Op op, Expr arg) {
  Expr e;
  e.op = op;
  e.args.push_back(std::move(arg));
  return e;
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  Expr e;
  e.op = op;
  e.args.reserve(2);
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

int SpecDocument::find_var(std::string_view name) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<int>(i);
  return -1;
}

int SpecDocument::env_var_count() const {
  return static_cast<int>(std::count_if(vars.begin(), vars.end(), [](const VarDecl& v) { return v.owner == Owner::env; }));
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::syntax: return "SyntaxError";
    case ErrorKind::unknown_variable: return "UnknownVariable";
    case ErrorKind::type_mismatch: return "TypeMismatch";
    case ErrorKind::ownership_violation: return "OwnershipViolation";
    case ErrorKind::duplicate_declaration: return "DuplicateDeclaration";
    case ErrorKind::misplaced_next: return "MisplacedNext";
    case ErrorKind::missing_binding: return "MissingBinding";
  }
  return "Error";
}

std::string Diagnostic::format() const {
  std::string out;
  if (line > 0) out += std::to_string(line) + ":" + std::to_string(column) + ": ";
  out += std::string(to_string(kind)) + ": " + message;
  if (!token.empty()) out += " (at '" + token + "')";
  return out;
}

SpecError::SpecError(Diagnostic diag) : std::runtime_error(diag.format()), diag_(std::move(diag)) {}

bool eval_expr(const Expr& e, std::span<const int> current, const PartialValuation& next) {
  auto lookup = [&](int var, bool is_next) -> std::int64_t {
    if (!is_next) return current[var];
    if (static_cast<std::size_t>(var) >= next.size() || !next[var])
      throw SpecError(Diagnostic{ErrorKind::missing_binding, 0, 0, "", "no next-step value for variable #" + std::to_string(var)});
    return *next[var];
  };
  return evaluate(e, lookup) != 0;
}

int max_next_var(const Expr& e) {
  int best = (e.op == Op::var && e.next) ? e.var : -1;
  for (const auto& a : e.args) best = std::max(best, max_next_var(a));
  return best;
}

bool has_current_ref(const Expr& e) {
  if (e.op == Op::var) return !e.next;
  return std::any_of(e.args.begin(), e.args.end(), [](const Expr& a) { return has_current_ref(a); });
}

}  // namespace gr1kit::speclang
