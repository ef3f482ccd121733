#include "parared/sexpr.hpp"

#include <cctype>

namespace parared {

std::string SExpr::str() const {
  if (!is_list) return atom;
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ' ';
    out += items[i].str();
  }
  return out + ")";
}

std::vector<SExpr> parse_sexprs(std::string_view text) {
  std::vector<std::vector<SExpr>> stack(1);
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      stack.emplace_back();
      ++i;
    } else if (c == ')') {
      if (stack.size() < 2) throw SExprError("unbalanced ')' at offset " + std::to_string(i));
      SExpr list;
      list.is_list = true;
      list.items = std::move(stack.back());
      stack.pop_back();
      stack.back().push_back(std::move(list));
      ++i;
    } else if (c == '|') {
      auto end = text.find('|', i + 1);
      if (end == std::string_view::npos) throw SExprError("unterminated |symbol|");
      SExpr a;
      a.atom = std::string(text.substr(i + 1, end - i - 1));
      stack.back().push_back(std::move(a));
      i = end + 1;
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size()) {
        if (text[j] == '"') {
          if (j + 1 < text.size() && text[j + 1] == '"') {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      if (j >= text.size()) throw SExprError("unterminated string literal");
      SExpr a;
      a.atom = std::string(text.substr(i, j - i + 1));
      stack.back().push_back(std::move(a));
      i = j + 1;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             text[j] != '(' && text[j] != ')' && text[j] != ';') {
        ++j;
      }
      SExpr a;
      a.atom = std::string(text.substr(i, j - i));
      stack.back().push_back(std::move(a));
      i = j;
    }
  }
  if (stack.size() != 1) throw SExprError("unbalanced '(': missing " +
                                          std::to_string(stack.size() - 1) + " closing parens");
  return std::move(stack.front());
}

Sort parse_sort(const SExpr& s) {
  if (s.is_atom("Int")) return Sort::Int;
  if (s.is_atom("Bool")) return Sort::Bool;
  if (s.is_list && s.items.size() == 3 && s.items[0].is_atom("Array") &&
      s.items[1].is_atom("Int") && s.items[2].is_atom("Int")) {
    return Sort::IntArray;
  }
  throw SExprError("unsupported sort " + s.str());
}

namespace {

bool is_numeral(const std::string& a) {
  if (a.empty()) return false;
  for (char c : a) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

using Scope = std::map<std::string, Expr>;

Expr convert(const SExpr& t, const Scope& vars, const std::map<std::string, FunDef>& funs);

std::vector<Expr> convert_args(const SExpr& t, const Scope& vars,
                               const std::map<std::string, FunDef>& funs) {
  std::vector<Expr> out;
  for (std::size_t i = 1; i < t.items.size(); ++i) out.push_back(convert(t.items[i], vars, funs));
  return out;
}

Expr chain(const std::vector<Expr>& a, Expr (*rel)(const Expr&, const Expr&)) {
  std::vector<Expr> parts;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) parts.push_back(rel(a[i], a[i + 1]));
  return mk_and(std::move(parts));
}

Expr fold(const std::vector<Expr>& a, Expr (*f)(const Expr&, const Expr&)) {
  Expr acc = a.at(0);
  for (std::size_t i = 1; i < a.size(); ++i) acc = f(acc, a[i]);
  return acc;
}

Expr apply_fun(const FunDef& f, const std::string& name, std::vector<Expr> args) {
  if (args.size() != f.formals.size()) {
    throw SExprError("function '" + name + "' applied to " + std::to_string(args.size()) +
                     " arguments, expects " + std::to_string(f.formals.size()));
  }
  std::map<std::string, Expr> m;
  for (std::size_t i = 0; i < args.size(); ++i) m.emplace(f.formals[i].name, args[i]);
  return substitute(f.body, m);
}

std::vector<VarDecl> parse_binders(const SExpr& s) {
  if (!s.is_list) throw SExprError("expected binder list, got " + s.str());
  std::vector<VarDecl> out;
  for (const auto& b : s.items) {
    if (!b.is_list || b.items.size() != 2 || b.items[0].is_list) {
      throw SExprError("malformed binder " + b.str());
    }
    out.push_back({b.items[0].atom, parse_sort(b.items[1])});
  }
  return out;
}

Expr convert(const SExpr& t, const Scope& vars, const std::map<std::string, FunDef>& funs) {
  if (!t.is_list) {
    const std::string& a = t.atom;
    if (a == "true") return tru();
    if (a == "false") return fls();
    if (is_numeral(a)) return int_lit(std::stoll(a));
    if (auto it = vars.find(a); it != vars.end()) return it->second;
    if (auto it = funs.find(a); it != funs.end() && it->second.formals.empty()) {
      return it->second.body;
    }
    throw SExprError("unknown symbol '" + a + "'");
  }
  if (t.items.empty()) throw SExprError("empty application");
  const SExpr& head = t.items[0];
  if (head.is_list) {
    // ((as const (Array Int Int)) v)
    if (head.items.size() == 3 && head.items[0].is_atom("as") && head.items[1].is_atom("const")) {
      return const_array(convert(t.items.at(1), vars, funs));
    }
    throw SExprError("unsupported application head " + head.str());
  }
  const std::string& op = head.atom;
  if (op == "let") {
    if (t.items.size() != 3 || !t.items[1].is_list) throw SExprError("malformed let");
    Scope inner = vars;
    for (const auto& b : t.items[1].items) {
      if (!b.is_list || b.items.size() != 2) throw SExprError("malformed let binding");
      inner[b.items[0].atom] = convert(b.items[1], vars, funs);
    }
    return convert(t.items[2], inner, funs);
  }
  if (op == "exists" || op == "forall") {
    if (t.items.size() != 3) throw SExprError("malformed quantifier");
    auto bound = parse_binders(t.items[1]);
    Scope inner = vars;
    for (const auto& b : bound) inner[b.name] = var(b.name, b.sort);
    Expr body = convert(t.items[2], inner, funs);
    return op == "exists" ? exists(bound, body) : forall(bound, body);
  }
  if (op == "!") return convert(t.items.at(1), vars, funs);

  auto a = convert_args(t, vars, funs);
  auto need = [&](std::size_t n) {
    if (a.size() < n) throw SExprError("too few arguments in " + t.str());
  };
  if (op == "and") return mk_and(a);
  if (op == "or") return mk_or(a);
  if (op == "not") {
    need(1);
    return mk_not(a[0]);
  }
  if (op == "=>") {
    need(2);
    Expr acc = a.back();
    for (std::size_t i = a.size() - 1; i-- > 0;) acc = implies(a[i], acc);
    return acc;
  }
  if (op == "xor") {
    need(2);
    return mk_not(iff(a[0], a[1]));
  }
  if (op == "=") {
    need(2);
    if (a[0].sort() == Sort::Bool) {
      std::vector<Expr> parts;
      for (std::size_t i = 0; i + 1 < a.size(); ++i) parts.push_back(iff(a[i], a[i + 1]));
      return mk_and(std::move(parts));
    }
    return chain(a, eq);
  }
  if (op == "distinct") {
    std::vector<Expr> parts;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        parts.push_back(a[i].sort() == Sort::Bool ? mk_not(iff(a[i], a[j])) : ne(a[i], a[j]));
      }
    }
    return mk_and(std::move(parts));
  }
  if (op == "<") return need(2), chain(a, lt);
  if (op == "<=") return need(2), chain(a, le);
  if (op == ">") return need(2), chain(a, gt);
  if (op == ">=") return need(2), chain(a, ge);
  if (op == "+") return need(1), fold(a, add);
  if (op == "*") return need(1), fold(a, mul);
  if (op == "-") {
    need(1);
    if (a.size() == 1) return neg(a[0]);
    return fold(a, sub);
  }
  if (op == "div") return need(2), fold(a, div);
  if (op == "mod") return need(2), mod(a[0], a[1]);
  if (op == "abs") {
    need(1);
    return ite(ge(a[0], int_lit(0)), a[0], neg(a[0]));
  }
  if (op == "ite") {
    need(3);
    return ite(a[0], a[1], a[2]);
  }
  if (op == "select") return need(2), select(a[0], a[1]);
  if (op == "store") return need(3), store(a[0], a[1], a[2]);
  if (auto it = funs.find(op); it != funs.end()) return apply_fun(it->second, op, std::move(a));
  throw SExprError("unsupported operator '" + op + "'");
}

}  // namespace

Expr term_to_expr(const SExpr& t, const std::map<std::string, Expr>& vars,
                  const std::map<std::string, FunDef>& funs) {
  try {
    return convert(t, vars, funs);
  } catch (const TypeError& e) {
    throw SExprError(std::string("ill-sorted term: ") + e.what());
  }
}

std::map<std::string, FunDef> parse_model_defs(std::string_view text) {
  auto top = parse_sexprs(text);
  std::vector<const SExpr*> defs;
  auto scan = [&](const SExpr& s, auto& self) -> void {
    if (!s.is_list || s.items.empty()) return;
    if (s.items[0].is_atom("define-fun")) {
      defs.push_back(&s);
      return;
    }
    for (const auto& c : s.items) self(c, self);
  };
  for (const auto& s : top) scan(s, scan);

  std::map<std::string, FunDef> funs;
  for (const SExpr* d : defs) {
    if (d->items.size() != 5 || d->items[1].is_list) throw SExprError("malformed define-fun");
    FunDef f;
    f.formals = parse_binders(d->items[2]);
    f.result = parse_sort(d->items[3]);
    std::map<std::string, Expr> scope;
    for (const auto& v : f.formals) scope[v.name] = var(v.name, v.sort);
    f.body = term_to_expr(d->items[4], scope, funs);
    funs[d->items[1].atom] = std::move(f);
  }
  return funs;
}

}  // namespace parared
