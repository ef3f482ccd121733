#include "parared/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace parared {

ParseError::ParseError(int line, int col, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg),
      line_(line),
      col_(col) {}

namespace {

struct Tok {
  enum Kind { Ident, Int, Sym, End } kind = End;
  std::string text;
  int col = 0;
};

const std::vector<std::string> kSymbols = {"<==>", "==>", ":=", "->", "==", "!=", "<=", ">=", "&&", "||", "<",
                                           ">",    "!",   "+",  "-",  "*",  "/",  "%",  "(",  ")",  "[",  "]",
                                           "{",    "}",   ";",  ":",  ","};

const std::set<std::string> kKeywords = {"assume", "havoc", "skip",  "atomic", "forall", "true",
                                         "false",  "ite",   "store", "const",  "pc"};

std::vector<Tok> lex(const std::string& line, int lineno) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const int col = static_cast<int>(i) + 1;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      out.push_back({Tok::Ident, line.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      out.push_back({Tok::Int, line.substr(i, j - i), col});
      i = j;
      continue;
    }
    bool matched = false;
    for (const auto& s : kSymbols) {
      if (line.compare(i, s.size(), s) == 0) {
        out.push_back({Tok::Sym, s, col});
        i += s.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(lineno, col, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", static_cast<int>(line.size()) + 1});
  return out;
}

std::string strip_comment(const std::string& line) {
  auto h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Parser {
 public:
  Parser(std::vector<Tok> toks, int line, const SourceProgram& prog, const SourceTemplate* tmpl)
      : toks_(std::move(toks)), line_(line), prog_(prog), tmpl_(tmpl) {}

  const Tok& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(const std::string& s) const { return peek().kind != Tok::End && peek().text == s; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, peek().col, msg); }
  [[noreturn]] void fail_at(const Tok& t, const std::string& msg) const { throw ParseError(line_, t.col, msg); }

  Tok next() {
    Tok t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  void expect(const std::string& s) {
    if (!is(s)) fail("expected '" + s + "'" + (at_end() ? " at end of line" : ", found '" + peek().text + "'"));
    next();
  }

  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    return next().text;
  }

  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }

  Sort sort() {
    auto t = ident("sort");
    if (t == "bool") return Sort::Bool;
    if (t == "int") {
      if (is("[")) {
        next();
        expect("]");
        return Sort::IntArray;
      }
      return Sort::Int;
    }
    fail_at(peek(), "unknown sort '" + t + "'");
  }

  // -- expressions

  Expr expr() {
    Expr lhs = disj();
    if (is("==>")) {
      auto t = next();
      return wrap(t, [&] { return implies(lhs, expr()); });
    }
    if (is("<==>")) {
      auto t = next();
      Expr rhs = disj();
      return wrap(t, [&] { return iff(lhs, rhs); });
    }
    return lhs;
  }

  Statement statement();

 private:
  template <class F>
  auto wrap(const Tok& at, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const TypeError& e) {
      fail_at(at, e.what());
    }
  }

  Expr disj() {
    std::vector<Expr> xs{conj()};
    Tok first = peek();
    while (is("||")) {
      next();
      xs.push_back(conj());
    }
    return xs.size() == 1 ? xs[0] : wrap(first, [&] { return mk_or(xs); });
  }

  Expr conj() {
    std::vector<Expr> xs{negation()};
    Tok first = peek();
    while (is("&&")) {
      next();
      xs.push_back(negation());
    }
    return xs.size() == 1 ? xs[0] : wrap(first, [&] { return mk_and(xs); });
  }

  Expr negation() {
    if (is("!")) {
      auto t = next();
      Expr a = negation();
      return wrap(t, [&] { return mk_not(a); });
    }
    return comparison();
  }

  Expr comparison() {
    Expr lhs = sum();
    static const std::set<std::string> ops = {"==", "!=", "<", "<=", ">", ">="};
    if (peek().kind == Tok::Sym && ops.count(peek().text)) {
      auto t = next();
      Expr rhs = sum();
      return wrap(t, [&] {
        if (t.text == "==") return eq(lhs, rhs);
        if (t.text == "!=") return ne(lhs, rhs);
        if (t.text == "<") return lt(lhs, rhs);
        if (t.text == "<=") return le(lhs, rhs);
        if (t.text == ">") return gt(lhs, rhs);
        return ge(lhs, rhs);
      });
    }
    return lhs;
  }

  Expr sum() {
    Expr acc = product();
    while (is("+") || is("-")) {
      auto t = next();
      Expr rhs = product();
      acc = wrap(t, [&] { return t.text == "+" ? add(acc, rhs) : sub(acc, rhs); });
    }
    return acc;
  }

  Expr product() {
    Expr acc = unary();
    while (is("*") || is("/") || is("%")) {
      auto t = next();
      Expr rhs = unary();
      acc = wrap(t, [&] {
        if (t.text == "*") return mul(acc, rhs);
        if (t.text == "/") return div(acc, rhs);
        return mod(acc, rhs);
      });
    }
    return acc;
  }

  Expr unary() {
    if (is("-")) {
      auto t = next();
      Expr a = unary();
      return wrap(t, [&] { return neg(a); });
    }
    return postfix();
  }

  Expr postfix() {
    Expr a = atom();
    while (is("[")) {
      auto t = next();
      Expr idx = expr();
      expect("]");
      a = wrap(t, [&] { return select(a, idx); });
    }
    return a;
  }

  std::vector<Expr> call_args(std::size_t n) {
    expect("(");
    std::vector<Expr> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) expect(",");
      out.push_back(expr());
    }
    expect(")");
    return out;
  }

  std::optional<Sort> local_sort(const std::string& n) const {
    if (!tmpl_) return std::nullopt;
    for (const auto& l : tmpl_->locals) {
      if (l.name == n) return l.sort;
    }
    return std::nullopt;
  }

  std::optional<Sort> global_sort(const std::string& n) const {
    for (const auto& g : prog_.globals) {
      if (g.name == n) return g.sort;
    }
    return std::nullopt;
  }

  std::optional<ThreadRef> thread_suffix() {
    if (is("[") && peek(1).kind == Tok::Ident && (peek(1).text == "i" || peek(1).text == "j") && peek(2).text == "]") {
      next();
      auto r = next().text == "i" ? ThreadRef::Self : ThreadRef::Other;
      next();
      return r;
    }
    return std::nullopt;
  }

  Expr atom() {
    const Tok t = peek();
    if (t.kind == Tok::Int) {
      next();
      try {
        return int_lit(std::stoll(t.text));
      } catch (const std::out_of_range&) {
        fail_at(t, "integer literal out of range");
      }
    }
    if (is("(")) {
      next();
      Expr e = expr();
      expect(")");
      return e;
    }
    if (t.kind != Tok::Ident) fail(at_end() ? "unexpected end of expression" : "unexpected '" + t.text + "'");
    next();
    if (t.text == "true") return tru();
    if (t.text == "false") return fls();
    if (t.text == "ite") {
      auto a = call_args(3);
      return wrap(t, [&] { return ite(a[0], a[1], a[2]); });
    }
    if (t.text == "store") {
      auto a = call_args(3);
      return wrap(t, [&] { return store(a[0], a[1], a[2]); });
    }
    if (t.text == "const") {
      auto a = call_args(1);
      return wrap(t, [&] { return const_array(a[0]); });
    }
    if (t.text == "pc") {
      auto r = thread_suffix();
      return var(kPc, Sort::Int, r.value_or(ThreadRef::Plain));
    }
    if (auto s = local_sort(t.text)) {
      if (*s != Sort::IntArray) {
        if (auto r = thread_suffix()) return var(t.text, *s, *r);
      }
      return var(t.text, *s);
    }
    if (auto s = global_sort(t.text)) return var(t.text, *s);
    if (tmpl_) {
      auto& locs = tmpl_->locations;
      auto it = std::find(locs.begin(), locs.end(), t.text);
      if (it != locs.end()) return loc_lit(static_cast<std::uint32_t>(it - locs.begin()), t.text);
    }
    fail_at(t, "undeclared variable '" + t.text + "'");
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  int line_;
  const SourceProgram& prog_;
  const SourceTemplate* tmpl_;

 public:
  VarDecl target(const Tok& t) {
    if (auto s = local_sort(t.text)) return {t.text, *s};
    if (auto s = global_sort(t.text)) return {t.text, *s};
    fail_at(t, "undeclared variable '" + t.text + "'");
  }
};

Statement Parser::statement() {
  const Tok t = peek();
  if (t.kind != Tok::Ident) fail("expected a statement");
  if (t.text == "skip") {
    next();
    return Statement::assume(tru());
  }
  if (t.text == "assume") {
    next();
    Expr c = expr();
    if (c.sort() != Sort::Bool) fail_at(t, "assume of a non-boolean expression");
    return Statement::assume(c);
  }
  if (t.text == "havoc") {
    next();
    Tok v = peek();
    ident("variable");
    return Statement::havoc(target(v));
  }
  if (t.text == "atomic") {
    next();
    expect("{");
    std::vector<Statement> body;
    while (!is("}")) {
      body.push_back(statement());
      if (is(";")) {
        next();
      } else if (!is("}")) {
        fail("expected ';' or '}'");
      }
    }
    expect("}");
    return Statement::atomic(std::move(body));
  }
  if (t.text == "forall") {
    next();
    expect("j");
    expect("!=");
    expect("i");
    expect(":");
    Tok v = peek();
    ident("variable");
    auto d = target(v);
    if (!local_sort(d.name)) fail_at(v, "synchronized update of non-local '" + d.name + "'");
    expect("[");
    expect("j");
    expect("]");
    expect(":=");
    Expr e = expr();
    try {
      return Statement::sync_update(d, e);
    } catch (const TypeError& err) {
      fail_at(v, err.what());
    }
  }
  if (kKeywords.count(t.text)) fail_at(t, "unexpected keyword '" + t.text + "'");
  next();
  VarDecl d = target(t);
  if (is("[")) {
    auto bt = next();
    Expr idx = expr();
    expect("]");
    expect(":=");
    Expr v = expr();
    if (d.sort != Sort::IntArray) fail_at(bt, "'" + d.name + "' is not an array");
    return wrap(t, [&] { return Statement::assign(d, store(var(d), idx, v)); });
  }
  expect(":=");
  Expr v = expr();
  return wrap(t, [&] { return Statement::assign(d, v); });
}


struct Line {
  int no = 0;
  std::string text;
  std::vector<Tok> toks;
  int tmpl = -1;  // owning template, -1 for program level
};

bool valid_ident(const std::string& s) {
  return !kKeywords.count(s) && s != "i" && s != "j";
}

void check_branch_shape(const SourceTemplate& t, std::vector<std::string>& warnings) {
  std::map<std::string, std::vector<const SourceEdge*>> out;
  for (const auto& e : t.edges) out[e.src].push_back(&e);
  for (const auto& [loc, es] : out) {
    if (es.size() < 2) continue;
    bool ok = es.size() == 2 && es[0]->st.kind() == StmtKind::Assume && es[1]->st.kind() == StmtKind::Assume &&
              (es[0]->st.expr() == mk_not(es[1]->st.expr()) || es[1]->st.expr() == mk_not(es[0]->st.expr()));
    if (!ok) {
      warnings.push_back("template " + t.name + ", location " + loc + ": " + std::to_string(es.size()) +
                         " outgoing edges are not of the form assume e / assume !e");
    }
  }
}

}  // namespace

SourceProgram parse_program(const std::string& text, const std::string& default_name) {
  SourceProgram prog;
  prog.name = default_name;
  std::vector<Line> lines;
  {
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
      ++no;
      auto body = trim(strip_comment(raw));
      if (body.empty()) continue;
      lines.push_back({no, raw, lex(raw, no), -1});
    }
  }

  // Pass 1: declarations and locations, so that expressions may refer
  // forward to anything declared in their scope.
  std::set<std::string> global_names;
  int current = -1;
  std::vector<std::set<std::string>> local_names;
  std::vector<int> init_line;
  for (auto& ln : lines) {
    Parser ps(ln.toks, ln.no, prog, nullptr);
    const Tok head = ps.peek();
    if (head.kind != Tok::Ident) ps.fail("expected a declaration keyword");
    const std::string kw = head.text;
    ps.next();
    ln.tmpl = current;
    if (kw == "program") {
      auto pos = ln.text.find("program");
      prog.name = trim(strip_comment(ln.text.substr(pos + 7)));
      if (prog.name.empty()) ps.fail("expected a program name");
    } else if (kw == "global") {
      if (current >= 0) ps.fail_at(head, "'global' inside a template");
      auto nt = ps.peek();
      auto name = ps.ident("variable name");
      if (!valid_ident(name)) ps.fail_at(nt, "reserved name '" + name + "'");
      ps.expect(":");
      auto s = ps.sort();
      ps.expect_end();
      if (!global_names.insert(name).second) ps.fail_at(nt, "duplicate identifier '" + name + "'");
      prog.globals.push_back({name, s});
    } else if (kw == "template") {
      auto nt = ps.peek();
      auto name = ps.ident("template name");
      ps.expect_end();
      for (const auto& t : prog.templates) {
        if (t.name == name) ps.fail_at(nt, "duplicate identifier '" + name + "'");
      }
      prog.templates.push_back({});
      prog.templates.back().name = name;
      local_names.emplace_back();
      init_line.push_back(ln.no);
      current = static_cast<int>(prog.templates.size()) - 1;
      ln.tmpl = current;
    } else if (kw == "local" || kw == "init" || kw == "loc" || kw == "edge") {
      if (current < 0) ps.fail_at(head, "'" + kw + "' outside a template");
      auto& t = prog.templates[static_cast<std::size_t>(current)];
      if (kw == "local") {
        auto nt = ps.peek();
        auto name = ps.ident("variable name");
        if (!valid_ident(name)) ps.fail_at(nt, "reserved name '" + name + "'");
        ps.expect(":");
        auto s = ps.sort();
        ps.expect_end();
        if (global_names.count(name) || !local_names[static_cast<std::size_t>(current)].insert(name).second) {
          ps.fail_at(nt, "duplicate identifier '" + name + "'");
        }
        t.locals.push_back({name, s});
      } else if (kw == "init") {
        if (!t.init.empty()) ps.fail_at(head, "duplicate init");
        t.init = ps.ident("location");
        ps.expect_end();
      } else if (kw == "loc") {
        auto nt = ps.peek();
        auto name = ps.ident("location name");
        if (std::find(t.locations.begin(), t.locations.end(), name) != t.locations.end()) {
          ps.fail_at(nt, "duplicate identifier '" + name + "'");
        }
        t.locations.push_back(name);
      }
    } else if (kw != "pre") {
      ps.fail_at(head, "unknown declaration '" + kw + "'");
    }
  }

  for (std::size_t ti = 0; ti < prog.templates.size(); ++ti) {
    auto& t = prog.templates[ti];
    if (t.init.empty()) throw ParseError(init_line[ti], 1, "template " + t.name + ": missing init");
    if (std::find(t.locations.begin(), t.locations.end(), t.init) == t.locations.end()) {
      throw ParseError(init_line[ti], 1, "template " + t.name + ": unknown location '" + t.init + "' in init");
    }
  }

  // Pass 2: formulas, statements, edges.
  std::vector<int> edge_counter(prog.templates.size(), 0);
  for (auto& ln : lines) {
    SourceTemplate* tmpl = ln.tmpl >= 0 ? &prog.templates[static_cast<std::size_t>(ln.tmpl)] : nullptr;
    Parser ps(ln.toks, ln.no, prog, tmpl);
    const std::string kw = ps.next().text;
    if (kw == "pre") {
      auto at = ps.peek();
      Expr f = ps.expr();
      ps.expect_end();
      if (f.sort() != Sort::Bool) ps.fail_at(at, "pre must be a formula");
      if (tmpl) tmpl->pre = tmpl->pre && f;
      else prog.pre = prog.pre && f;
    } else if (kw == "loc") {
      auto name = ps.ident("location name");
      if (ps.is("assert")) {
        ps.next();
        auto at = ps.peek();
        Expr f = ps.expr();
        ps.expect_end();
        if (f.sort() != Sort::Bool) ps.fail_at(at, "assert must be a formula");
        tmpl->asserts[name] = f;
      } else {
        ps.expect_end();
      }
    } else if (kw == "edge") {
      std::string label;
      if (ps.peek(1).text == ":") {
        auto lt = ps.peek();
        label = ps.ident("edge label");
        if (!valid_ident(label)) ps.fail_at(lt, "reserved name '" + label + "'");
        ps.expect(":");
      }
      auto st = ps.peek();
      auto src = ps.ident("source location");
      ps.expect("->");
      auto dt = ps.peek();
      auto dst = ps.ident("target location");
      ps.expect(":");
      auto& locs = tmpl->locations;
      if (std::find(locs.begin(), locs.end(), src) == locs.end()) ps.fail_at(st, "unknown location '" + src + "'");
      if (std::find(locs.begin(), locs.end(), dst) == locs.end()) ps.fail_at(dt, "unknown location '" + dst + "'");
      Statement s = ps.statement();
      ps.expect_end();
      int& counter = edge_counter[static_cast<std::size_t>(ln.tmpl)];
      if (label.empty()) label = "e" + std::to_string(counter);
      ++counter;
      for (const auto& e : tmpl->edges) {
        if (e.label == label) ps.fail_at(st, "duplicate identifier '" + label + "'");
      }
      tmpl->edges.push_back({src, dst, label, std::move(s)});
    }
  }

  if (prog.templates.empty()) throw ParseError(lines.empty() ? 1 : lines.back().no, 1, "program has no template");
  for (const auto& t : prog.templates) check_branch_shape(t, prog.warnings);
  return prog;
}

SourceProgram parse_program_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str(), path.stem().string());
}

namespace {

std::string sort_text(Sort s) {
  switch (s) {
    case Sort::Int: return "int";
    case Sort::Bool: return "bool";
    case Sort::IntArray: return "int[]";
  }
  return "?";
}

/// Rewrites location literals through `f` (old name -> new code and name).
Expr map_locs(const Expr& e, const std::function<Expr(const Expr&)>& f) {
  if (e.op() == Op::LocLit) return f(e);
  if (e.args().empty()) return e;
  std::vector<Expr> kids;
  for (const auto& a : e.args()) kids.push_back(map_locs(a, f));
  return rebuild(e, std::move(kids));
}

Statement map_stmt(const Statement& st, const std::function<Expr(const Expr&)>& fe,
                   const std::function<VarDecl(const VarDecl&)>& fv) {
  switch (st.kind()) {
    case StmtKind::Assign: return Statement::assign(fv(st.target()), fe(st.expr()));
    case StmtKind::Assume: return Statement::assume(fe(st.expr()));
    case StmtKind::Havoc: return Statement::havoc(fv(st.target()));
    case StmtKind::SyncUpdate: return Statement::sync_update(fv(st.target()), fe(st.expr()));
    case StmtKind::Atomic: {
      std::vector<Statement> body;
      for (const auto& s : st.body()) body.push_back(map_stmt(s, fe, fv));
      return Statement::atomic(std::move(body));
    }
  }
  return st;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int i = 0;; ++i) {
    auto c = base + "_" + std::to_string(i);
    if (!taken.count(c)) return c;
  }
}

}  // namespace

std::string print_program(const SourceProgram& p) {
  std::ostringstream os;
  os << "program " << p.name << "\n";
  for (const auto& g : p.globals) os << "global " << g.name << ": " << sort_text(g.sort) << "\n";
  if (!p.pre.is_true()) os << "pre " << to_dsl(p.pre) << "\n";
  for (const auto& t : p.templates) {
    os << "\ntemplate " << t.name << "\n";
    for (const auto& l : t.locals) os << "  local " << l.name << ": " << sort_text(l.sort) << "\n";
    os << "  init " << t.init << "\n";
    if (!t.pre.is_true()) os << "  pre " << to_dsl(t.pre) << "\n";
    for (const auto& l : t.locations) {
      os << "  loc " << l;
      if (auto it = t.asserts.find(l); it != t.asserts.end()) os << " assert " << to_dsl(it->second);
      os << "\n";
    }
    for (const auto& e : t.edges) {
      os << "  edge " << e.label << ": " << e.src << " -> " << e.dst << " : " << to_dsl(e.st) << "\n";
    }
  }
  return os.str();
}

SourceProgram desugar_multi_template(const SourceProgram& p) {
  if (p.templates.size() <= 1) return p;
  const std::size_t m = p.templates.size();

  SourceProgram out;
  out.name = p.name;
  out.globals = p.globals;
  out.pre = p.pre;
  out.warnings = p.warnings;

  SourceTemplate merged;
  merged.name = "main";

  std::set<std::string> taken;
  for (const auto& g : p.globals) taken.insert(g.name);
  std::map<std::string, int> local_count;
  for (const auto& t : p.templates) {
    for (const auto& l : t.locals) ++local_count[l.name];
  }

  std::set<std::string> loc_taken;
  for (const auto& t : p.templates) {
    for (const auto& l : t.locations) loc_taken.insert(t.name + "_" + l);
  }
  const std::string start = fresh_name("start", loc_taken);
  merged.locations.push_back(start);
  merged.init = start;

  std::set<std::string> all_locals;
  for (const auto& t : p.templates) {
    for (const auto& l : t.locals) all_locals.insert(local_count[l.name] > 1 ? t.name + "_" + l.name : l.name);
  }
  std::set<std::string> role_taken = taken;
  role_taken.insert(all_locals.begin(), all_locals.end());
  const VarDecl role{fresh_name("role", role_taken), Sort::Int};
  merged.locals.push_back(role);

  std::vector<Expr> pres;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& t = p.templates[r];
    std::map<std::string, std::string> rename;
    for (const auto& l : t.locals) {
      auto n = local_count[l.name] > 1 ? t.name + "_" + l.name : l.name;
      rename[l.name] = n;
      merged.locals.push_back({n, l.sort});
    }
    auto loc_name = [&](const std::string& l) { return t.name + "_" + l; };
    const std::size_t base = merged.locations.size();
    for (const auto& l : t.locations) merged.locations.push_back(loc_name(l));

    auto fe = [&](const Expr& e) {
      Expr x = substitute(e, [&](const Expr& v) -> std::optional<Expr> {
        auto it = rename.find(v.name());
        if (it == rename.end() || it->second == v.name()) return std::nullopt;
        return var(it->second, v.sort(), v.ref());
      });
      return map_locs(x, [&](const Expr& l) {
        return loc_lit(static_cast<std::uint32_t>(base + static_cast<std::size_t>(l.int_value())), loc_name(l.name()));
      });
    };
    auto fv = [&](const VarDecl& d) -> VarDecl {
      auto it = rename.find(d.name);
      return it == rename.end() ? d : VarDecl{it->second, d.sort};
    };

    Expr guard = eq(var(role), int_lit(static_cast<std::int64_t>(r)));
    if (m == 2 && r == 1) guard = mk_not(eq(var(role), int_lit(0)));
    merged.edges.push_back({start, loc_name(t.init), "role_" + t.name, Statement::assume(guard)});
    for (const auto& e : t.edges) {
      merged.edges.push_back({loc_name(e.src), loc_name(e.dst), t.name + "_" + e.label, map_stmt(e.st, fe, fv)});
    }
    for (const auto& [l, f] : t.asserts) merged.asserts[loc_name(l)] = fe(f);
    if (!t.pre.is_true()) pres.push_back(implies(guard, fe(t.pre)));
  }
  merged.pre = mk_and(pres);
  out.templates.push_back(std::move(merged));
  return out;
}

Program to_program(const SourceProgram& sp) {
  if (sp.templates.size() != 1) {
    throw ProgramError("program has " + std::to_string(sp.templates.size()) + " templates; desugar first");
  }
  const auto& t = sp.templates.front();
  Program p;
  p.name = sp.name;
  p.globals = sp.globals;
  p.locals = t.locals;
  p.locations = t.locations;
  p.init = p.loc(t.init);
  p.pre = sp.pre && t.pre;
  for (const auto& e : t.edges) p.edges.push_back({p.loc(e.src), p.loc(e.dst), e.st, e.label});
  for (const auto& [l, f] : t.asserts) p.asserts[p.loc(l)] = f;
  p.validate();
  return p;
}

Expr parse_formula(const Program& p, const std::string& text) {
  SourceProgram sp;
  sp.name = p.name;
  sp.globals = p.globals;
  SourceTemplate t;
  t.locals = p.locals;
  t.locations = p.locations;
  Parser ps(lex(text, 1), 1, sp, &t);
  Expr e = ps.expr();
  ps.expect_end();
  if (e.sort() != Sort::Bool) throw ParseError(1, 1, "expected a formula");
  return e;
}

Program load_program(const std::filesystem::path& path) {
  return to_program(desugar_multi_template(parse_program_file(path)));
}

std::string print_program(const Program& p) {
  SourceProgram sp;
  sp.name = p.name;
  sp.globals = p.globals;
  SourceTemplate t;
  t.name = "main";
  t.locals = p.locals;
  t.locations = p.locations;
  t.init = p.locations.at(p.init);
  t.pre = p.pre;
  for (const auto& e : p.edges) t.edges.push_back({p.locations[e.src], p.locations[e.dst], e.label, e.st});
  for (const auto& [l, f] : p.asserts) t.asserts[p.locations[l]] = f;
  sp.templates.push_back(std::move(t));
  return print_program(sp);
}

}  // namespace parared
