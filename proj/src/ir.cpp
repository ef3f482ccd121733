#include "parared/ir.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace parared {

Statement Statement::assign(VarDecl target, Expr value) {
  if (value.sort() != target.sort) {
    throw TypeError("assignment to '" + target.name + "' of sort " + to_string(target.sort) +
                    " from '" + to_dsl(value) + "' of sort " + to_string(value.sort()));
  }
  Statement s;
  s.kind_ = StmtKind::Assign;
  s.target_ = std::move(target);
  s.expr_ = std::move(value);
  return s;
}

Statement Statement::assume(Expr cond) {
  if (cond.sort() != Sort::Bool) throw TypeError("assume of non-boolean '" + to_dsl(cond) + "'");
  Statement s;
  s.kind_ = StmtKind::Assume;
  s.expr_ = std::move(cond);
  return s;
}

Statement Statement::havoc(VarDecl target) {
  Statement s;
  s.kind_ = StmtKind::Havoc;
  s.target_ = std::move(target);
  return s;
}

Statement Statement::atomic(std::vector<Statement> body) {
  Statement s;
  s.kind_ = StmtKind::Atomic;
  s.body_ = std::move(body);
  return s;
}

Statement Statement::sync_update(VarDecl target, Expr value) {
  if (value.sort() != target.sort) throw TypeError("sync update of '" + target.name + "' has wrong sort");
  Statement s;
  s.kind_ = StmtKind::SyncUpdate;
  s.target_ = std::move(target);
  s.expr_ = std::move(value);
  return s;
}

bool operator==(const Statement& a, const Statement& b) {
  if (a.kind_ != b.kind_ || !(a.target_ == b.target_)) return false;
  if (a.expr_.valid() != b.expr_.valid()) return false;
  if (a.expr_.valid() && !(a.expr_ == b.expr_)) return false;
  return a.body_ == b.body_;
}

namespace {

void walk(const Statement& st, const std::function<void(const Statement&)>& f) {
  f(st);
  for (const auto& s : st.body()) walk(s, f);
}

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

}  // namespace

std::vector<std::string> write_set(const Statement& st) {
  std::vector<std::string> out;
  walk(st, [&](const Statement& s) {
    if (s.kind() == StmtKind::Assign || s.kind() == StmtKind::Havoc || s.kind() == StmtKind::SyncUpdate) {
      push_unique(out, s.target().name);
    }
  });
  return out;
}

std::vector<std::string> read_set(const Statement& st) {
  std::vector<std::string> out;
  walk(st, [&](const Statement& s) {
    if (s.expr().valid()) {
      for (const auto& n : free_var_names(s.expr())) push_unique(out, n);
    }
  });
  return out;
}

std::vector<Expr> assumptions(const Statement& st) {
  std::vector<Expr> out;
  walk(st, [&](const Statement& s) {
    if (s.kind() == StmtKind::Assume) out.push_back(s.expr());
  });
  return out;
}

std::vector<Expr> array_indices(const Statement& st) {
  std::vector<Expr> out;
  auto add_unique = [&](const Expr& e) {
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  };
  walk(st, [&](const Statement& s) {
    if (!s.expr().valid()) return;
    collect(s.expr(), [&](const Expr& x) {
      if (x.op() == Op::Select || x.op() == Op::Store) add_unique(x.arg(1));
    });
  });
  return out;
}

std::string to_dsl(const Statement& st) {
  switch (st.kind()) {
    case StmtKind::Assign: {
      const Expr& v = st.expr();
      if (v.op() == Op::Store && v.arg(0).op() == Op::Var && v.arg(0).name() == st.target().name &&
          v.arg(0).ref() == ThreadRef::Plain) {
        return st.target().name + "[" + to_dsl(v.arg(1)) + "] := " + to_dsl(v.arg(2));
      }
      return st.target().name + " := " + to_dsl(v);
    }
    case StmtKind::Assume: return "assume " + to_dsl(st.expr());
    case StmtKind::Havoc: return "havoc " + st.target().name;
    case StmtKind::Atomic: {
      std::string out = "atomic { ";
      for (std::size_t i = 0; i < st.body().size(); ++i) {
        if (i) out += "; ";
        out += to_dsl(st.body()[i]);
      }
      return out + " }";
    }
    case StmtKind::SyncUpdate:
      return "forall j != i: " + st.target().name + "[j] := " + to_dsl(st.expr());
  }
  return "?";
}

// -- Program ------------------------------------------------------------------

std::optional<Loc> Program::find_loc(const std::string& n) const {
  auto it = std::find(locations.begin(), locations.end(), n);
  if (it == locations.end()) return std::nullopt;
  return static_cast<Loc>(it - locations.begin());
}

Loc Program::loc(const std::string& n) const {
  if (auto l = find_loc(n)) return *l;
  throw ProgramError("unknown location '" + n + "'");
}

std::optional<std::size_t> Program::global_index(const std::string& v) const {
  for (std::size_t i = 0; i < globals.size(); ++i) {
    if (globals[i].name == v) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Program::local_index(const std::string& v) const {
  for (std::size_t i = 0; i < locals.size(); ++i) {
    if (locals[i].name == v) return i;
  }
  return std::nullopt;
}

bool Program::is_global(const std::string& v) const { return global_index(v).has_value(); }
bool Program::is_local(const std::string& v) const { return local_index(v).has_value(); }

std::optional<Sort> Program::sort_of(const std::string& v) const {
  if (auto i = global_index(v)) return globals[*i].sort;
  if (auto i = local_index(v)) return locals[*i].sort;
  if (v == kPc) return Sort::Int;
  return std::nullopt;
}

std::size_t Program::edge_by_label(const std::string& label) const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].label == label) return i;
  }
  throw ProgramError("unknown statement label '" + label + "'");
}

bool Program::has_arrays() const {
  auto arr = [](const VarDecl& d) { return d.sort == Sort::IntArray; };
  return std::any_of(globals.begin(), globals.end(), arr) || std::any_of(locals.begin(), locals.end(), arr);
}

void Program::validate() const {
  if (locations.empty()) throw ProgramError("program has no locations");
  if (init >= locations.size()) throw ProgramError("init location out of range");
  std::set<std::string> names;
  for (const auto& l : locations) {
    if (!names.insert(l).second) throw ProgramError("duplicate location '" + l + "'");
  }
  std::set<std::string> vars;
  for (const auto& v : globals) {
    if (!vars.insert(v.name).second) throw ProgramError("duplicate variable '" + v.name + "'");
  }
  for (const auto& v : locals) {
    if (!vars.insert(v.name).second) throw ProgramError("duplicate variable '" + v.name + "'");
  }
  if (vars.count(kPc)) throw ProgramError("'pc' is reserved");
  std::set<std::string> labels;
  for (const auto& e : edges) {
    if (e.src >= locations.size() || e.dst >= locations.size()) {
      throw ProgramError("edge '" + e.label + "' references an unknown location");
    }
    if (!labels.insert(e.label).second) throw ProgramError("duplicate edge label '" + e.label + "'");
  }
  for (const auto& [l, f] : asserts) {
    if (l >= locations.size()) throw ProgramError("assert at unknown location");
    (void)f;
  }
}

std::vector<std::size_t> enabled_edges(const Program& p, Loc l) {
  if (l >= p.locations.size()) throw ProgramError("unknown location code " + std::to_string(l));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (p.edges[i].src == l) out.push_back(i);
  }
  return out;
}

std::vector<Statement> enabled(const Program& p, Loc l) {
  std::vector<Statement> out;
  for (auto i : enabled_edges(p, l)) out.push_back(p.edges[i].st);
  return out;
}

// -- symbolic -----------------------------------------------------------------

Expr FreshNames::make(const std::string& base, Sort s) {
  std::string n = "havoc." + base + (tag.empty() ? "" : "." + tag) + "." + std::to_string(counter++);
  made.push_back({n, s});
  return var(n, s);
}

Expr instantiate(const Program& p, const Expr& e, const SymState& s, std::size_t t,
                 std::optional<std::size_t> other) {
  return substitute(e, [&](const Expr& v) -> std::optional<Expr> {
    const std::string& n = v.name();
    if (p.is_global(n)) {
      auto it = s.globals.find(n);
      if (it == s.globals.end()) throw ProgramError("no value for global '" + n + "'");
      return it->second;
    }
    if (n != kPc && !p.is_local(n)) return std::nullopt;
    std::size_t slot = t;
    if (v.ref() == ThreadRef::Other) {
      if (!other) throw ProgramError("reference to " + n + "[j] outside a synchronized update");
      slot = *other;
    }
    const auto& th = s.threads.at(slot);
    auto it = th.find(n);
    if (it == th.end()) throw ProgramError("no value for local '" + n + "'");
    return it->second;
  });
}

namespace {

void store_value(const Program& p, SymState& s, std::size_t t, const std::string& name, Expr v) {
  if (p.is_global(name)) {
    s.globals[name] = std::move(v);
  } else {
    s.threads.at(t)[name] = std::move(v);
  }
}

}  // namespace

Expr sym_exec(const Program& p, const Statement& st, SymState& s, std::size_t t,
              const std::vector<std::size_t>& others, FreshNames& fresh) {
  switch (st.kind()) {
    case StmtKind::Assign:
      store_value(p, s, t, st.target().name, instantiate(p, st.expr(), s, t));
      return tru();
    case StmtKind::Assume: return instantiate(p, st.expr(), s, t);
    case StmtKind::Havoc:
      store_value(p, s, t, st.target().name, fresh.make(st.target().name, st.target().sort));
      return tru();
    case StmtKind::Atomic: {
      std::vector<Expr> guards;
      for (const auto& sub : st.body()) guards.push_back(sym_exec(p, sub, s, t, others, fresh));
      return mk_and(std::move(guards));
    }
    case StmtKind::SyncUpdate: {
      std::vector<std::pair<std::size_t, Expr>> updates;
      for (auto j : others) {
        if (j == t) continue;
        updates.emplace_back(j, instantiate(p, st.expr(), s, t, j));
      }
      for (auto& [j, v] : updates) s.threads.at(j)[st.target().name] = std::move(v);
      return tru();
    }
  }
  return tru();
}

Expr transition_formula(const Program& p, const Statement& st) {
  SymState s;
  for (const auto& g : p.globals) s.globals[g.name] = var(g);
  s.threads.emplace_back();
  for (const auto& l : p.locals) s.threads[0][l.name] = var(l);
  s.threads[0][kPc] = var(kPc, Sort::Int);
  FreshNames fresh;
  Expr guard = sym_exec(p, st, s, 0, {}, fresh);
  std::vector<Expr> parts{guard};
  for (const auto& g : p.globals) parts.push_back(eq(var(g.name + "'", g.sort), s.globals[g.name]));
  for (const auto& l : p.locals) parts.push_back(eq(var(l.name + "'", l.sort), s.threads[0][l.name]));
  return exists(fresh.made, mk_and(std::move(parts)));
}

// -- concrete -----------------------------------------------------------------

std::string to_string(const Value& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (auto b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  const auto& a = std::get<std::vector<std::int64_t>>(v);
  std::string out = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(a[i]);
  }
  return out + "]";
}

std::vector<Value> Domain::values(Sort s) const {
  std::vector<Value> out;
  switch (s) {
    case Sort::Int:
      for (auto v = lo; v <= hi; ++v) out.emplace_back(v);
      break;
    case Sort::Bool:
      out.emplace_back(false);
      out.emplace_back(true);
      break;
    case Sort::IntArray: {
      const auto len = static_cast<std::size_t>(std::max<std::int64_t>(0, index_hi - index_lo + 1));
      std::vector<std::int64_t> cur(len, lo);
      while (true) {
        out.emplace_back(cur);
        std::size_t k = 0;
        while (k < len && cur[k] == hi) cur[k++] = lo;
        if (k == len) break;
        ++cur[k];
      }
      break;
    }
  }
  return out;
}

bool Domain::contains(const Value& v) const {
  if (auto i = std::get_if<std::int64_t>(&v)) return *i >= lo && *i <= hi;
  if (std::holds_alternative<bool>(v)) return true;
  for (auto x : std::get<std::vector<std::int64_t>>(v)) {
    if (x < lo || x > hi) return false;
  }
  return true;
}

std::string to_string(const Program& p, const Configuration& c) {
  std::ostringstream os;
  os << "<";
  for (std::size_t i = 0; i < c.locs.size(); ++i) os << (i ? "," : "") << p.locations.at(c.locs[i]);
  os << ">";
  for (std::size_t g = 0; g < c.globals.size(); ++g) os << ' ' << p.globals[g].name << '=' << to_string(c.globals[g]);
  for (std::size_t t = 0; t < c.locals.size(); ++t) {
    for (std::size_t l = 0; l < c.locals[t].size(); ++l) {
      os << ' ' << p.locals[l].name << '_' << (t + 1) << '=' << to_string(c.locals[t][l]);
    }
  }
  return os.str();
}

namespace {

std::int64_t as_int(const Value& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return *i;
  throw TypeError("expected integer value");
}

bool as_bool(const Value& v) {
  if (auto b = std::get_if<bool>(&v)) return *b;
  throw TypeError("expected boolean value");
}

const std::vector<std::int64_t>& as_array(const Value& v) {
  if (auto a = std::get_if<std::vector<std::int64_t>>(&v)) return *a;
  throw TypeError("expected array value");
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

struct Evaluator {
  const Program& p;
  const Configuration& c;
  std::size_t t;
  std::optional<std::size_t> other;
  const Domain& d;

  std::size_t slot(ThreadRef r) const {
    if (r == ThreadRef::Other) {
      if (!other) throw ProgramError("reference to thread j outside a synchronized update");
      return *other;
    }
    return t;
  }

  std::size_t index(const Value& v) const {
    auto i = as_int(v);
    if (i < d.index_lo || i > d.index_hi) throw Blocked{};
    return static_cast<std::size_t>(i - d.index_lo);
  }

  Value operator()(const Expr& e) const {
    switch (e.op()) {
      case Op::IntLit:
      case Op::LocLit: return e.int_value();
      case Op::BoolLit: return e.bool_value();
      case Op::Var: {
        const std::string& n = e.name();
        if (auto g = p.global_index(n)) return c.globals[*g];
        if (n == kPc) return static_cast<std::int64_t>(c.locs.at(slot(e.ref())));
        if (auto l = p.local_index(n)) return c.locals.at(slot(e.ref()))[*l];
        throw ProgramError("unknown variable '" + n + "'");
      }
      case Op::Not: return !as_bool((*this)(e.arg(0)));
      case Op::And:
        for (const auto& a : e.args()) {
          if (!as_bool((*this)(a))) return false;
        }
        return true;
      case Op::Or:
        for (const auto& a : e.args()) {
          if (as_bool((*this)(a))) return true;
        }
        return false;
      case Op::Implies: return !as_bool((*this)(e.arg(0))) || as_bool((*this)(e.arg(1)));
      case Op::Iff: return as_bool((*this)(e.arg(0))) == as_bool((*this)(e.arg(1)));
      case Op::Ite: return as_bool((*this)(e.arg(0))) ? (*this)(e.arg(1)) : (*this)(e.arg(2));
      case Op::Eq: return (*this)(e.arg(0)) == (*this)(e.arg(1));
      case Op::Lt: return as_int((*this)(e.arg(0))) < as_int((*this)(e.arg(1)));
      case Op::Le: return as_int((*this)(e.arg(0))) <= as_int((*this)(e.arg(1)));
      case Op::Add: return as_int((*this)(e.arg(0))) + as_int((*this)(e.arg(1)));
      case Op::Sub: return as_int((*this)(e.arg(0))) - as_int((*this)(e.arg(1)));
      case Op::Neg: return -as_int((*this)(e.arg(0)));
      case Op::Mul: return as_int((*this)(e.arg(0))) * as_int((*this)(e.arg(1)));
      case Op::Div:
      case Op::Mod: {
        auto a = as_int((*this)(e.arg(0)));
        auto b = as_int((*this)(e.arg(1)));
        if (b == 0) throw Blocked{};
        auto q = floor_div(a, b);
        if (b < 0 && a % b != 0) q += 1;  // SMT-LIB: remainder is non-negative
        return e.op() == Op::Div ? q : a - b * q;
      }
      case Op::Select: {
        auto arr = (*this)(e.arg(0));
        return as_array(arr).at(index((*this)(e.arg(1))));
      }
      case Op::Store: {
        auto arr = as_array((*this)(e.arg(0)));
        arr.at(index((*this)(e.arg(1)))) = as_int((*this)(e.arg(2)));
        return arr;
      }
      case Op::ConstArray: {
        const auto len = static_cast<std::size_t>(std::max<std::int64_t>(0, d.index_hi - d.index_lo + 1));
        return std::vector<std::int64_t>(len, as_int((*this)(e.arg(0))));
      }
      case Op::App: throw ProgramError("cannot evaluate application of '" + e.name() + "'");
      case Op::Exists:
      case Op::Forall: throw ProgramError("cannot evaluate quantified formula");
    }
    throw ProgramError("bad expression");
  }
};

void assign(const Program& p, Configuration& c, std::size_t t, const std::string& name, Value v) {
  if (auto g = p.global_index(name)) {
    c.globals[*g] = std::move(v);
  } else if (auto l = p.local_index(name)) {
    c.locals.at(t)[*l] = std::move(v);
  } else {
    throw ProgramError("assignment to unknown variable '" + name + "'");
  }
}

void exec(const Program& p, const Statement& st, Configuration c, std::size_t t, const Domain& d,
          std::vector<Configuration>& out) {
  switch (st.kind()) {
    case StmtKind::Assign: {
      Value v = Evaluator{p, c, t, std::nullopt, d}(st.expr());
      if (!d.contains(v)) return;
      assign(p, c, t, st.target().name, std::move(v));
      out.push_back(std::move(c));
      return;
    }
    case StmtKind::Assume:
      if (as_bool(Evaluator{p, c, t, std::nullopt, d}(st.expr()))) out.push_back(std::move(c));
      return;
    case StmtKind::Havoc:
      for (auto& v : d.values(st.target().sort)) {
        Configuration n = c;
        assign(p, n, t, st.target().name, std::move(v));
        out.push_back(std::move(n));
      }
      return;
    case StmtKind::Atomic: {
      std::vector<Configuration> cur{std::move(c)};
      for (const auto& sub : st.body()) {
        std::vector<Configuration> next;
        for (auto& x : cur) {
          // a blocked branch does not block its siblings
          try {
            exec(p, sub, std::move(x), t, d, next);
          } catch (const Blocked&) {
          }
        }
        cur = std::move(next);
        if (cur.empty()) return;
      }
      for (auto& x : cur) out.push_back(std::move(x));
      return;
    }
    case StmtKind::SyncUpdate: {
      auto idx = p.local_index(st.target().name);
      if (!idx) throw ProgramError("synchronized update of non-local '" + st.target().name + "'");
      std::vector<Value> vals(c.locals.size());
      for (std::size_t j = 0; j < c.locals.size(); ++j) {
        if (j == t) continue;
        vals[j] = Evaluator{p, c, t, j, d}(st.expr());
        if (!d.contains(vals[j])) return;
      }
      for (std::size_t j = 0; j < c.locals.size(); ++j) {
        if (j != t) c.locals[j][*idx] = std::move(vals[j]);
      }
      out.push_back(std::move(c));
      return;
    }
  }
}

}  // namespace

Value eval(const Program& p, const Expr& e, const Configuration& c, std::size_t t,
           std::optional<std::size_t> other, const Domain& d) {
  return Evaluator{p, c, t, other, d}(e);
}

bool holds(const Program& p, const Expr& e, const Configuration& c, std::size_t t, const Domain& d) {
  return as_bool(eval(p, e, c, t, std::nullopt, d));
}

std::vector<Configuration> indexed_step(const Program& p, const Configuration& c, std::size_t i,
                                        std::size_t edge, const Domain& d) {
  const Edge& e = p.edges.at(edge);
  if (i >= c.locs.size()) throw ProgramError("thread index out of range");
  if (c.locs[i] != e.src) {
    throw ProgramError("thread " + std::to_string(i + 1) + " is at " + p.locations[c.locs[i]] +
                       ", not at " + p.locations[e.src]);
  }
  std::vector<Configuration> out;
  try {
    exec(p, e.st, c, i, d, out);
  } catch (const Blocked&) {
    return {};
  }
  for (auto& n : out) n.locs[i] = e.dst;
  return out;
}

std::string to_string(const Program& p, const Trace& t) {
  std::string out;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k) out += " ";
    out += p.edges.at(t[k].edge).label + "@" + std::to_string(t[k].thread + 1);
  }
  return out.empty() ? "<empty>" : out;
}

}  // namespace parared
