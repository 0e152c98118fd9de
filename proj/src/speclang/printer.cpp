#include "gr1kit/speclang.hpp"

namespace gr1kit::speclang {
namespace {

// Binding strength, loosest first.
int precedence(Op op) {
  switch (op) {
    case Op::iff: return 1;
    case Op::implies: return 2;
    case Op::or_: return 3;
    case Op::and_: return 4;
    case Op::not_: return 5;
    case Op::eq:
    case Op::ne:
    case Op::lt:
    case Op::le:
    case Op::gt:
    case Op::ge: return 6;
    case Op::add:
    case Op::sub: return 7;
    default: return 8;
  }
}

const char* symbol(Op op) {
  switch (op) {
    case Op::iff: return " <-> ";
    case Op::implies: return " -> ";
    case Op::or_: return " | ";
    case Op::and_: return " & ";
    case Op::eq: return " = ";
    case Op::ne: return " != ";
    case Op::lt: return " < ";
    case Op::le: return " <= ";
    case Op::gt: return " > ";
    case Op::ge: return " >= ";
    case Op::add: return " + ";
    case Op::sub: return " - ";
    default: return "";
  }
}

class Printer {
 public:
  explicit Printer(std::span<const VarDecl> vars) : vars_(vars) {}

  void print(const Expr& e, std::string& out) const {
    switch (e.op) {
      case Op::int_const:
        out += std::to_string(e.value);
        return;
      case Op::bool_const:
        out += e.value ? "true" : "false";
        return;
      case Op::var:
        out += vars_[e.var].name;
        if (e.next) out += '\'';
        return;
      case Op::not_:
        out += '!';
        child(e.args[0], precedence(e.args[0].op) < precedence(Op::not_), out);
        return;
      default:
        break;
    }
    const int p = precedence(e.op);
    const bool right_assoc = e.op == Op::implies;
    const bool non_assoc = p == 6;
    const int lp = precedence(e.args[0].op);
    const int rp = precedence(e.args[1].op);
    child(e.args[0], right_assoc || non_assoc ? lp <= p : lp < p, out);
    out += symbol(e.op);
    child(e.args[1], right_assoc ? rp < p : rp <= p, out);
  }

 private:
  void child(const Expr& e, bool parens, std::string& out) const {
    if (parens) out += '(';
    print(e, out);
    if (parens) out += ')';
  }

  std::span<const VarDecl> vars_;
};

void section(std::string& out, const char* header, const std::vector<Expr>& clauses, const Printer& pr) {
  out += header;
  out += '\n';
  for (const auto& c : clauses) {
    pr.print(c, out);
    out += '\n';
  }
}

}  // namespace

std::string print_expr(const Expr& e, std::span<const VarDecl> vars) {
  std::string out;
  Printer(vars).print(e, out);
  return out;
}

std::string print_expr(const Expr& e, const SpecDocument& doc) { return print_expr(e, std::span<const VarDecl>(doc.vars)); }

std::string print_spec(const SpecDocument& doc) {
  std::string out;
  for (Owner owner : {Owner::env, Owner::sys}) {
    out += owner == Owner::env ? "[ENV_VARS]\n" : "[SYS_VARS]\n";
    for (const auto& v : doc.vars) {
      if (v.owner != owner) continue;
      out += v.name;
      out += " : ";
      out += v.domain.boolean ? std::string("bool") : std::to_string(v.domain.lo) + ".." + std::to_string(v.domain.hi);
      out += '\n';
    }
  }
  Printer pr(doc.vars);
  section(out, "[ENV_INIT]", doc.env_init, pr);
  section(out, "[SYS_INIT]", doc.sys_init, pr);
  section(out, "[ENV_TRANS]", doc.env_safety, pr);
  section(out, "[SYS_TRANS]", doc.sys_safety, pr);
  section(out, "[ENV_LIVENESS]", doc.env_liveness, pr);
  section(out, "[SYS_LIVENESS]", doc.sys_liveness, pr);
  return out;
}

}  // namespace gr1kit::speclang
