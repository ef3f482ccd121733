#include "parared/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace parared {

std::string to_string(Sort s) {
  switch (s) {
    case Sort::Int: return "int";
    case Sort::Bool: return "bool";
    case Sort::IntArray: return "int[]";
  }
  return "?";
}

Op Expr::op() const { return node_->op; }
Sort Expr::sort() const { return node_->sort; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
std::int64_t Expr::int_value() const { return node_->value; }
bool Expr::bool_value() const { return node_->value != 0; }
const std::string& Expr::name() const { return node_->name; }
ThreadRef Expr::ref() const { return node_->ref; }
const std::vector<VarDecl>& Expr::bound() const { return node_->bound; }
bool Expr::is_true() const { return node_ && node_->op == Op::BoolLit && node_->value != 0; }
bool Expr::is_false() const { return node_ && node_->op == Op::BoolLit && node_->value == 0; }

namespace {

int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  if (!a.valid()) return -1;
  if (!b.valid()) return 1;
  const Node& x = *a.get();
  const Node& y = *b.get();
  if (x.op != y.op) return x.op < y.op ? -1 : 1;
  if (x.sort != y.sort) return x.sort < y.sort ? -1 : 1;
  if (x.value != y.value) return x.value < y.value ? -1 : 1;
  if (int c = x.name.compare(y.name)) return c < 0 ? -1 : 1;
  if (x.ref != y.ref) return x.ref < y.ref ? -1 : 1;
  if (x.bound.size() != y.bound.size()) return x.bound.size() < y.bound.size() ? -1 : 1;
  for (std::size_t i = 0; i < x.bound.size(); ++i) {
    if (int c = x.bound[i].name.compare(y.bound[i].name)) return c < 0 ? -1 : 1;
    if (x.bound[i].sort != y.bound[i].sort) return x.bound[i].sort < y.bound[i].sort ? -1 : 1;
  }
  if (x.args.size() != y.args.size()) return x.args.size() < y.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (int c = compare(x.args[i], y.args[i])) return c;
  }
  return 0;
}

Expr make(Op op, Sort sort, std::vector<Expr> args = {}, std::int64_t value = 0,
          std::string name = {}, ThreadRef ref = ThreadRef::Plain,
          std::vector<VarDecl> bound = {}) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->sort = sort;
  n->value = value;
  n->name = std::move(name);
  n->ref = ref;
  n->args = std::move(args);
  n->bound = std::move(bound);
  return Expr(std::move(n));
}

void require(const Expr& e, Sort s, const char* what) {
  if (!e.valid()) throw TypeError(std::string(what) + ": missing operand");
  if (e.sort() != s) {
    throw TypeError(std::string(what) + ": expected " + to_string(s) + " operand, got " +
                    to_string(e.sort()) + " in '" + to_dsl(e) + "'");
  }
}

bool is_int_lit(const Expr& e) { return e.op() == Op::IntLit; }
bool is_num(const Expr& e) { return e.op() == Op::IntLit || e.op() == Op::LocLit; }

// floor division as in SMT-LIB (Euclidean for positive divisors)
std::int64_t smt_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  std::int64_t r = a % b;
  if (r < 0) q += (b > 0) ? -1 : 1;
  return q;
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

Expr int_lit(std::int64_t v) { return make(Op::IntLit, Sort::Int, {}, v); }
Expr bool_lit(bool v) { return make(Op::BoolLit, Sort::Bool, {}, v ? 1 : 0); }
Expr tru() {
  static const Expr t = bool_lit(true);
  return t;
}
Expr fls() {
  static const Expr f = bool_lit(false);
  return f;
}
Expr loc_lit(std::uint32_t code, std::string name) {
  return make(Op::LocLit, Sort::Int, {}, code, std::move(name));
}
Expr var(std::string name, Sort sort, ThreadRef ref) {
  return make(Op::Var, sort, {}, 0, std::move(name), ref);
}
Expr var(const VarDecl& d) { return var(d.name, d.sort); }

Expr mk_not(const Expr& a) {
  require(a, Sort::Bool, "not");
  if (a.op() == Op::BoolLit) return bool_lit(!a.bool_value());
  if (a.op() == Op::Not) return a.arg(0);
  return make(Op::Not, Sort::Bool, {a});
}

namespace {

Expr mk_nary(Op op, std::vector<Expr> xs) {
  const bool is_and = op == Op::And;
  std::vector<Expr> flat;
  for (auto& x : xs) {
    require(x, Sort::Bool, is_and ? "and" : "or");
    if (x.op() == op) {
      flat.insert(flat.end(), x.args().begin(), x.args().end());
    } else if (x.op() == Op::BoolLit) {
      if (x.bool_value() != is_and) return bool_lit(!is_and);
    } else {
      flat.push_back(x);
    }
  }
  if (flat.empty()) return bool_lit(is_and);
  if (flat.size() == 1) return flat.front();
  return make(op, Sort::Bool, std::move(flat));
}

}  // namespace

Expr mk_and(std::vector<Expr> xs) { return mk_nary(Op::And, std::move(xs)); }
Expr mk_or(std::vector<Expr> xs) { return mk_nary(Op::Or, std::move(xs)); }

Expr implies(const Expr& a, const Expr& b) {
  require(a, Sort::Bool, "=>");
  require(b, Sort::Bool, "=>");
  if (a.is_true()) return b;
  if (a.is_false() || b.is_true()) return tru();
  if (b.is_false()) return mk_not(a);
  return make(Op::Implies, Sort::Bool, {a, b});
}

Expr iff(const Expr& a, const Expr& b) {
  require(a, Sort::Bool, "<=>");
  require(b, Sort::Bool, "<=>");
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  if (a.is_false()) return mk_not(b);
  if (b.is_false()) return mk_not(a);
  if (a == b) return tru();
  return make(Op::Iff, Sort::Bool, {a, b});
}

Expr ite(const Expr& c, const Expr& t, const Expr& e) {
  require(c, Sort::Bool, "ite");
  if (t.sort() != e.sort()) throw TypeError("ite: branches have different sorts");
  if (c.op() == Op::BoolLit) return c.bool_value() ? t : e;
  if (t == e) return t;
  return make(Op::Ite, t.sort(), {c, t, e});
}

Expr eq(const Expr& a, const Expr& b) {
  if (!a.valid() || !b.valid()) throw TypeError("=: missing operand");
  if (a.sort() != b.sort()) {
    throw TypeError("=: operands '" + to_dsl(a) + "' and '" + to_dsl(b) + "' have different sorts");
  }
  const bool lit_a = a.op() == Op::IntLit || a.op() == Op::LocLit || a.op() == Op::BoolLit;
  const bool lit_b = b.op() == Op::IntLit || b.op() == Op::LocLit || b.op() == Op::BoolLit;
  if (lit_a && lit_b) return bool_lit(a.int_value() == b.int_value());
  if (a == b) return tru();
  if (a.sort() == Sort::Bool) {
    if (a.is_true()) return b;
    if (b.is_true()) return a;
  }
  return make(Op::Eq, Sort::Bool, {a, b});
}

Expr ne(const Expr& a, const Expr& b) { return mk_not(eq(a, b)); }

Expr lt(const Expr& a, const Expr& b) {
  require(a, Sort::Int, "<");
  require(b, Sort::Int, "<");
  if (is_num(a) && is_num(b)) {
    return bool_lit(a.int_value() < b.int_value());
  }
  if (a == b) return fls();
  return make(Op::Lt, Sort::Bool, {a, b});
}

Expr le(const Expr& a, const Expr& b) {
  require(a, Sort::Int, "<=");
  require(b, Sort::Int, "<=");
  if (is_num(a) && is_num(b)) {
    return bool_lit(a.int_value() <= b.int_value());
  }
  if (a == b) return tru();
  return make(Op::Le, Sort::Bool, {a, b});
}

Expr gt(const Expr& a, const Expr& b) { return lt(b, a); }
Expr ge(const Expr& a, const Expr& b) { return le(b, a); }

Expr add(const Expr& a, const Expr& b) {
  require(a, Sort::Int, "+");
  require(b, Sort::Int, "+");
  if (is_int_lit(a) && is_int_lit(b)) return int_lit(a.int_value() + b.int_value());
  if (is_int_lit(b) && b.int_value() == 0) return a;
  if (is_int_lit(a) && a.int_value() == 0) return b;
  return make(Op::Add, Sort::Int, {a, b});
}

Expr sub(const Expr& a, const Expr& b) {
  require(a, Sort::Int, "-");
  require(b, Sort::Int, "-");
  if (is_int_lit(a) && is_int_lit(b)) return int_lit(a.int_value() - b.int_value());
  if (is_int_lit(b) && b.int_value() == 0) return a;
  return make(Op::Sub, Sort::Int, {a, b});
}

Expr neg(const Expr& a) {
  require(a, Sort::Int, "-");
  if (is_int_lit(a)) return int_lit(-a.int_value());
  if (a.op() == Op::Neg) return a.arg(0);
  return make(Op::Neg, Sort::Int, {a});
}

Expr mul(const Expr& a, const Expr& b) {
  require(a, Sort::Int, "*");
  require(b, Sort::Int, "*");
  if (is_int_lit(a) && is_int_lit(b)) return int_lit(a.int_value() * b.int_value());
  if (is_int_lit(a) && a.int_value() == 1) return b;
  if (is_int_lit(b) && b.int_value() == 1) return a;
  return make(Op::Mul, Sort::Int, {a, b});
}

Expr div(const Expr& a, const Expr& b) {
  require(a, Sort::Int, "div");
  require(b, Sort::Int, "div");
  if (is_int_lit(a) && is_int_lit(b) && b.int_value() != 0) {
    return int_lit(smt_div(a.int_value(), b.int_value()));
  }
  return make(Op::Div, Sort::Int, {a, b});
}

Expr mod(const Expr& a, const Expr& b) {
  require(a, Sort::Int, "mod");
  require(b, Sort::Int, "mod");
  if (is_int_lit(a) && is_int_lit(b) && b.int_value() != 0) {
    return int_lit(a.int_value() - b.int_value() * smt_div(a.int_value(), b.int_value()));
  }
  return make(Op::Mod, Sort::Int, {a, b});
}

Expr select(const Expr& arr, const Expr& idx) {
  require(arr, Sort::IntArray, "select");
  require(idx, Sort::Int, "select");
  if (arr.op() == Op::ConstArray) return arr.arg(0);
  return make(Op::Select, Sort::Int, {arr, idx});
}

Expr store(const Expr& arr, const Expr& idx, const Expr& val) {
  require(arr, Sort::IntArray, "store");
  require(idx, Sort::Int, "store");
  require(val, Sort::Int, "store");
  return make(Op::Store, Sort::IntArray, {arr, idx, val});
}

Expr const_array(const Expr& val) {
  require(val, Sort::Int, "const");
  return make(Op::ConstArray, Sort::IntArray, {val});
}

Expr app(std::string fn, std::vector<Expr> args, Sort result) {
  return make(Op::App, result, std::move(args), 0, std::move(fn));
}

Expr exists(std::vector<VarDecl> vars, const Expr& body) {
  require(body, Sort::Bool, "exists");
  auto used = free_var_names(body);
  std::erase_if(vars, [&](const VarDecl& v) { return !used.count(v.name); });
  if (vars.empty() || body.op() == Op::BoolLit) return body;
  return make(Op::Exists, Sort::Bool, {body}, 0, {}, ThreadRef::Plain, std::move(vars));
}

Expr forall(std::vector<VarDecl> vars, const Expr& body) {
  require(body, Sort::Bool, "forall");
  auto used = free_var_names(body);
  std::erase_if(vars, [&](const VarDecl& v) { return !used.count(v.name); });
  if (vars.empty() || body.op() == Op::BoolLit) return body;
  return make(Op::Forall, Sort::Bool, {body}, 0, {}, ThreadRef::Plain, std::move(vars));
}

Expr rebuild(const Expr& e, std::vector<Expr> a) {
  switch (e.op()) {
    case Op::IntLit:
    case Op::BoolLit:
    case Op::LocLit:
    case Op::Var: return e;
    case Op::Not: return mk_not(a.at(0));
    case Op::And: return mk_and(std::move(a));
    case Op::Or: return mk_or(std::move(a));
    case Op::Implies: return implies(a.at(0), a.at(1));
    case Op::Iff: return iff(a.at(0), a.at(1));
    case Op::Ite: return ite(a.at(0), a.at(1), a.at(2));
    case Op::Eq: return eq(a.at(0), a.at(1));
    case Op::Lt: return lt(a.at(0), a.at(1));
    case Op::Le: return le(a.at(0), a.at(1));
    case Op::Add: return add(a.at(0), a.at(1));
    case Op::Sub: return sub(a.at(0), a.at(1));
    case Op::Neg: return neg(a.at(0));
    case Op::Mul: return mul(a.at(0), a.at(1));
    case Op::Div: return div(a.at(0), a.at(1));
    case Op::Mod: return mod(a.at(0), a.at(1));
    case Op::Select: return select(a.at(0), a.at(1));
    case Op::Store: return store(a.at(0), a.at(1), a.at(2));
    case Op::ConstArray: return const_array(a.at(0));
    case Op::App: return app(e.name(), std::move(a), e.sort());
    case Op::Exists: return exists(e.bound(), a.at(0));
    case Op::Forall: return forall(e.bound(), a.at(0));
  }
  return e;
}

namespace {

Expr subst_rec(const Expr& e, const VarMapper& f, const std::set<std::string>& shadowed) {
  if (e.op() == Op::Var) {
    if (shadowed.count(e.name())) return e;
    if (auto r = f(e)) return *r;
    return e;
  }
  if (e.args().empty()) return e;
  if (e.op() == Op::Exists || e.op() == Op::Forall) {
    auto inner = shadowed;
    for (const auto& b : e.bound()) inner.insert(b.name);
    return rebuild(e, {subst_rec(e.arg(0), f, inner)});
  }
  std::vector<Expr> kids;
  kids.reserve(e.args().size());
  bool changed = false;
  for (const auto& a : e.args()) {
    kids.push_back(subst_rec(a, f, shadowed));
    changed = changed || kids.back().get() != a.get();
  }
  return changed ? rebuild(e, std::move(kids)) : e;
}

}  // namespace

Expr substitute(const Expr& e, const VarMapper& f) { return subst_rec(e, f, {}); }

Expr substitute(const Expr& e, const std::map<std::string, Expr>& by_name) {
  return substitute(e, [&](const Expr& v) -> std::optional<Expr> {
    auto it = by_name.find(v.name());
    if (it == by_name.end()) return std::nullopt;
    return it->second;
  });
}

Expr inline_function(const Expr& e, const std::string& fn, const std::vector<VarDecl>& formals,
                     const Expr& body) {
  if (e.args().empty()) return e;
  std::vector<Expr> kids;
  kids.reserve(e.args().size());
  for (const auto& a : e.args()) kids.push_back(inline_function(a, fn, formals, body));
  if (e.op() == Op::App && e.name() == fn) {
    if (kids.size() != formals.size()) {
      throw TypeError("application of '" + fn + "' has " + std::to_string(kids.size()) +
                      " arguments, expected " + std::to_string(formals.size()));
    }
    std::map<std::string, Expr> m;
    for (std::size_t i = 0; i < formals.size(); ++i) m.emplace(formals[i].name, kids[i]);
    return substitute(body, m);
  }
  return rebuild(e, std::move(kids));
}

void collect(const Expr& e, const std::function<void(const Expr&)>& visit) {
  visit(e);
  for (const auto& a : e.args()) collect(a, visit);
}

std::map<std::pair<std::string, ThreadRef>, Sort> free_vars(const Expr& e) {
  std::map<std::pair<std::string, ThreadRef>, Sort> out;
  std::function<void(const Expr&, const std::set<std::string>&)> go =
      [&](const Expr& x, const std::set<std::string>& shadow) {
        if (x.op() == Op::Var) {
          if (!shadow.count(x.name())) out.emplace(std::make_pair(x.name(), x.ref()), x.sort());
          return;
        }
        if (x.op() == Op::Exists || x.op() == Op::Forall) {
          auto inner = shadow;
          for (const auto& b : x.bound()) inner.insert(b.name);
          go(x.arg(0), inner);
          return;
        }
        for (const auto& a : x.args()) go(a, shadow);
      };
  go(e, {});
  return out;
}

std::set<std::string> free_var_names(const Expr& e) {
  std::set<std::string> out;
  for (const auto& [k, s] : free_vars(e)) out.insert(k.first);
  return out;
}

bool mentions_app(const Expr& e, const std::string& fn) { return count_apps(e, fn) > 0; }

std::size_t count_apps(const Expr& e, const std::string& fn) {
  std::size_t n = 0;
  collect(e, [&](const Expr& x) {
    if (x.op() == Op::App && x.name() == fn) ++n;
  });
  return n;
}

// -- printing ---------------------------------------------------------------

std::string smt_sort(Sort s) {
  switch (s) {
    case Sort::Int: return "Int";
    case Sort::Bool: return "Bool";
    case Sort::IntArray: return "(Array Int Int)";
  }
  return "?";
}

std::string smt_var_name(const std::string& name, ThreadRef ref) {
  switch (ref) {
    case ThreadRef::Plain: return name;
    case ThreadRef::Self: return name + "@i";
    case ThreadRef::Other: return name + "@j";
  }
  return name;
}

std::string smt_symbol(const std::string& name) {
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && extra.find(c) == std::string::npos) {
      simple = false;
    }
  }
  return simple ? name : "|" + name + "|";
}

namespace {

void smt_rec(const Expr& e, std::ostringstream& os) {
  auto nary = [&](const char* op) {
    os << '(' << op;
    for (const auto& a : e.args()) {
      os << ' ';
      smt_rec(a, os);
    }
    os << ')';
  };
  switch (e.op()) {
    case Op::IntLit:
    case Op::LocLit:
      if (e.int_value() < 0) {
        os << "(- " << -e.int_value() << ')';
      } else {
        os << e.int_value();
      }
      return;
    case Op::BoolLit: os << (e.bool_value() ? "true" : "false"); return;
    case Op::Var: os << smt_symbol(smt_var_name(e.name(), e.ref())); return;
    case Op::Not: nary("not"); return;
    case Op::And: nary("and"); return;
    case Op::Or: nary("or"); return;
    case Op::Implies: nary("=>"); return;
    case Op::Iff: nary("="); return;
    case Op::Ite: nary("ite"); return;
    case Op::Eq: nary("="); return;
    case Op::Lt: nary("<"); return;
    case Op::Le: nary("<="); return;
    case Op::Add: nary("+"); return;
    case Op::Sub: nary("-"); return;
    case Op::Neg: nary("-"); return;
    case Op::Mul: nary("*"); return;
    case Op::Div: nary("div"); return;
    case Op::Mod: nary("mod"); return;
    case Op::Select: nary("select"); return;
    case Op::Store: nary("store"); return;
    case Op::ConstArray:
      os << "((as const (Array Int Int)) ";
      smt_rec(e.arg(0), os);
      os << ')';
      return;
    case Op::App:
      if (e.args().empty()) {
        os << smt_symbol(e.name());
      } else {
        nary(smt_symbol(e.name()).c_str());
      }
      return;
    case Op::Exists:
    case Op::Forall:
      os << '(' << (e.op() == Op::Exists ? "exists" : "forall") << " (";
      for (std::size_t i = 0; i < e.bound().size(); ++i) {
        if (i) os << ' ';
        os << '(' << smt_symbol(e.bound()[i].name) << ' ' << smt_sort(e.bound()[i].sort) << ')';
      }
      os << ") ";
      smt_rec(e.arg(0), os);
      os << ')';
      return;
  }
}

// Precedence levels for the infix printer; higher binds tighter.
int prec(Op op) {
  switch (op) {
    case Op::Implies: return 1;
    case Op::Iff: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Not: return 4;
    case Op::Eq:
    case Op::Lt:
    case Op::Le: return 5;
    case Op::Add:
    case Op::Sub: return 6;
    case Op::Mul:
    case Op::Div:
    case Op::Mod: return 7;
    case Op::Neg: return 8;
    default: return 10;
  }
}

void dsl_rec(const Expr& e, std::ostringstream& os, int ctx);

void dsl_child(const Expr& e, std::ostringstream& os, int min_prec) {
  if (prec(e.op()) < min_prec) {
    os << '(';
    dsl_rec(e, os, 0);
    os << ')';
  } else {
    dsl_rec(e, os, min_prec);
  }
}

void dsl_rec(const Expr& e, std::ostringstream& os, int /*ctx*/) {
  const int p = prec(e.op());
  auto binary = [&](const char* op, int left_min, int right_min) {
    dsl_child(e.arg(0), os, left_min);
    os << ' ' << op << ' ';
    dsl_child(e.arg(1), os, right_min);
  };
  switch (e.op()) {
    case Op::IntLit: os << e.int_value(); return;
    case Op::BoolLit: os << (e.bool_value() ? "true" : "false"); return;
    case Op::LocLit: os << e.name(); return;
    case Op::Var:
      os << e.name();
      if (e.ref() == ThreadRef::Self) os << "[i]";
      if (e.ref() == ThreadRef::Other) os << "[j]";
      return;
    case Op::Not:
      if (e.arg(0).op() == Op::Eq) {
        dsl_child(e.arg(0).arg(0), os, prec(Op::Eq) + 1);
        os << " != ";
        dsl_child(e.arg(0).arg(1), os, prec(Op::Eq) + 1);
        return;
      }
      os << '!';
      dsl_child(e.arg(0), os, prec(Op::Neg) + 1);
      return;
    case Op::And:
    case Op::Or:
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i) os << (e.op() == Op::And ? " && " : " || ");
        dsl_child(e.arg(i), os, p + 1);
      }
      return;
    case Op::Implies: binary("==>", p + 1, p); return;
    case Op::Iff: binary("<==>", p + 1, p + 1); return;
    case Op::Eq: binary("==", p + 1, p + 1); return;
    case Op::Lt: binary("<", p + 1, p + 1); return;
    case Op::Le: binary("<=", p + 1, p + 1); return;
    case Op::Add: binary("+", p, p + 1); return;
    case Op::Sub: binary("-", p, p + 1); return;
    case Op::Mul: binary("*", p, p + 1); return;
    case Op::Div: binary("/", p, p + 1); return;
    case Op::Mod: binary("%", p, p + 1); return;
    case Op::Neg:
      os << '-';
      dsl_child(e.arg(0), os, p + 1);
      return;
    case Op::Ite:
      os << "ite(";
      dsl_rec(e.arg(0), os, 0);
      os << ", ";
      dsl_rec(e.arg(1), os, 0);
      os << ", ";
      dsl_rec(e.arg(2), os, 0);
      os << ')';
      return;
    case Op::Select:
      dsl_child(e.arg(0), os, 10);
      os << '[';
      dsl_rec(e.arg(1), os, 0);
      os << ']';
      return;
    case Op::Store:
      os << "store(";
      dsl_rec(e.arg(0), os, 0);
      os << ", ";
      dsl_rec(e.arg(1), os, 0);
      os << ", ";
      dsl_rec(e.arg(2), os, 0);
      os << ')';
      return;
    case Op::ConstArray:
      os << "const(";
      dsl_rec(e.arg(0), os, 0);
      os << ')';
      return;
    case Op::App:
      os << e.name() << '(';
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i) os << ", ";
        dsl_rec(e.arg(i), os, 0);
      }
      os << ')';
      return;
    case Op::Exists:
    case Op::Forall:
      os << (e.op() == Op::Exists ? "exists " : "forall ");
      for (std::size_t i = 0; i < e.bound().size(); ++i) {
        if (i) os << ", ";
        os << e.bound()[i].name;
      }
      os << " :: (";
      dsl_rec(e.arg(0), os, 0);
      os << ')';
      return;
  }
}

}  // namespace

std::string to_smtlib(const Expr& e) {
  std::ostringstream os;
  smt_rec(e, os);
  return os.str();
}

std::string to_dsl(const Expr& e) {
  if (!e.valid()) return "<null>";
  std::ostringstream os;
  dsl_rec(e, os, 0);
  return os.str();
}

}  // namespace parared
