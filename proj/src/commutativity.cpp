#include "parared/commutativity.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "parared/frontend.hpp"

namespace parared {

const CommVerdict* CommRelation::find(std::size_t a, std::size_t b) const {
  auto it = map_.find({a, b});
  return it == map_.end() ? nullptr : &it->second;
}

const CommVerdict& CommRelation::at(std::size_t a, std::size_t b) const {
  if (auto* v = find(a, b)) return *v;
  throw ProgramError("commutativity relation has no entry for edges " + std::to_string(a) + ", " +
                     std::to_string(b));
}

Expr CommRelation::condition(std::size_t a, std::size_t b) const {
  const auto& v = at(a, b);
  switch (v.kind) {
    case CommKind::Commute: return tru();
    case CommKind::SemiCommute: return v.cond;
    case CommKind::NoComm: return fls();
  }
  return fls();
}

bool CommRelation::commutes(std::size_t a, std::size_t b) const {
  auto* v = find(a, b);
  return v && v->kind == CommKind::Commute;
}

namespace {

SymState two_threads(const Program& p) {
  SymState s;
  for (const auto& g : p.globals) s.globals[g.name] = var(g);
  s.threads.resize(2);
  const ThreadRef refs[2] = {ThreadRef::Self, ThreadRef::Other};
  for (int t = 0; t < 2; ++t) {
    for (const auto& l : p.locals) s.threads[t][l.name] = var(l.name, l.sort, refs[t]);
    s.threads[t][kPc] = var(kPc, Sort::Int, refs[t]);
  }
  return s;
}

struct Run {
  Expr guard;
  SymState state;
  std::vector<VarDecl> fresh;
};

Run run_pair(const Program& p, const Statement& first, std::size_t t1, const Statement& second, std::size_t t2,
             const std::string& tag) {
  Run r{tru(), two_threads(p), {}};
  FreshNames fresh{tag, 0, {}};
  Expr g1 = sym_exec(p, first, r.state, t1, {}, fresh);
  Expr g2 = sym_exec(p, second, r.state, t2, {}, fresh);
  r.guard = g1 && g2;
  r.fresh = fresh.made;
  return r;
}

Expr same_state(const Program& p, const SymState& a, const SymState& b) {
  std::vector<Expr> eqs;
  for (const auto& g : p.globals) eqs.push_back(eq(a.globals.at(g.name), b.globals.at(g.name)));
  for (std::size_t t = 0; t < 2; ++t) {
    for (const auto& l : p.locals) eqs.push_back(eq(a.threads[t].at(l.name), b.threads[t].at(l.name)));
  }
  return mk_and(std::move(eqs));
}

/// Thread-plain locals of `e` re-addressed to thread `ref`.
Expr as_thread(const Program& p, const Expr& e, ThreadRef ref) {
  return substitute(e, [&](const Expr& v) -> std::optional<Expr> {
    if (v.ref() != ThreadRef::Plain) return std::nullopt;
    if (v.name() == kPc || p.is_local(v.name())) return var(v.name(), v.sort(), ref);
    return std::nullopt;
  });
}

std::vector<std::string> globals_of(const Program& p, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& n : names) {
    if (p.is_global(n)) out.push_back(n);
  }
  return out;
}

bool intersects(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return std::any_of(a.begin(), a.end(), [&](const std::string& x) { return std::find(b.begin(), b.end(), x) != b.end(); });
}

}  // namespace

Expr semi_commute_formula(const Program& p, const Statement& st1, const Statement& st2, const Expr& phi) {
  Run x = run_pair(p, st1, 0, st2, 1, "x");
  Run y = run_pair(p, st2, 1, st1, 0, "y");
  return implies(phi && x.guard, exists(y.fresh, y.guard && same_state(p, x.state, y.state)));
}

bool independent(const Program& p, const Statement& st1, const Statement& st2) {
  auto w1 = globals_of(p, write_set(st1));
  auto w2 = globals_of(p, write_set(st2));
  auto r1 = globals_of(p, read_set(st1));
  auto r2 = globals_of(p, read_set(st2));
  return !intersects(w1, w2) && !intersects(w1, r2) && !intersects(w2, r1);
}

bool commute_exact(const Program& p, const Statement& st1, const Statement& st2, const SmtChecker& smt) {
  if (independent(p, st1, st2)) return true;
  auto v = smt.valid_batch({semi_commute_formula(p, st1, st2, tru()), semi_commute_formula(p, st2, st1, tru())});
  return v[0] == Validity::Valid && v[1] == Validity::Valid;
}

bool semi_commute(const Program& p, const Statement& st1, const Statement& st2, const Expr& phi,
                  const SmtChecker& smt) {
  return smt.valid(semi_commute_formula(p, st1, st2, phi)) == Validity::Valid;
}

std::vector<Expr> abduction_candidates(const Program& p, const Statement& st1, const Statement& st2) {
  std::vector<Expr> out;
  auto push = [&](const Expr& e) {
    if (e.op() == Op::BoolLit) return;
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  };
  // array index relations between the two statements
  for (const auto& a : array_indices(st1)) {
    for (const auto& b : array_indices(st2)) {
      Expr ia = as_thread(p, a, ThreadRef::Self);
      Expr ib = as_thread(p, b, ThreadRef::Other);
      push(ne(ia, ib));
      push(lt(ib, ia));
      push(lt(ia, ib));
    }
  }
  // guards of the template, for either thread
  for (const auto& e : p.edges) {
    for (const auto& g : assumptions(e.st)) {
      if (free_vars(g).empty()) continue;
      push(as_thread(p, g, ThreadRef::Self));
      push(as_thread(p, g, ThreadRef::Other));
    }
  }
  // written variables kept apart
  for (const auto& a : write_set(st1)) {
    for (const auto& b : write_set(st2)) {
      auto sa = p.sort_of(a);
      auto sb = p.sort_of(b);
      if (!sa || !sb || *sa != Sort::Int || *sb != Sort::Int) continue;
      push(ne(as_thread(p, var(a, *sa), ThreadRef::Self), as_thread(p, var(b, *sb), ThreadRef::Other)));
    }
  }
  return out;
}

Expr abduce_comm_condition(const Program& p, const Statement& st1, const Statement& st2, const SmtChecker& smt) {
  if (smt.valid(semi_commute_formula(p, st1, st2, tru())) == Validity::Valid) return tru();
  auto atoms = abduction_candidates(p, st1, st2);
  std::vector<Expr> tries;
  for (const auto& a : atoms) tries.push_back(a);
  auto v = smt.valid_batch([&] {
    std::vector<Expr> fs;
    for (const auto& c : tries) fs.push_back(semi_commute_formula(p, st1, st2, c));
    return fs;
  }());
  for (std::size_t i = 0; i < tries.size(); ++i) {
    if (v[i] == Validity::Valid) return tries[i];
  }
  tries.clear();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) tries.push_back(atoms[i] && atoms[j]);
  }
  // contradictory pairs would hold vacuously
  std::vector<Expr> negs;
  for (const auto& c : tries) negs.push_back(mk_not(c));
  auto unsat = smt.valid_batch(negs);
  std::vector<Expr> kept;
  for (std::size_t i = 0; i < tries.size(); ++i) {
    if (unsat[i] != Validity::Valid) kept.push_back(tries[i]);
  }
  tries = std::move(kept);
  std::vector<Expr> fs;
  for (const auto& c : tries) fs.push_back(semi_commute_formula(p, st1, st2, c));
  v = smt.valid_batch(fs);
  for (std::size_t i = 0; i < tries.size(); ++i) {
    if (v[i] == Validity::Valid) return tries[i];
  }
  return fls();
}

CommRelation build_comm_relation(const Program& p, bool contextual, const SmtChecker& smt) {
  const std::size_t m = p.edges.size();
  CommRelation rel;
  // both inclusions for every unordered pair, in one solver run
  std::vector<std::pair<std::size_t, std::size_t>> asked;
  std::vector<Expr> queries;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      if (independent(p, p.edges[a].st, p.edges[b].st)) {
        rel.set(a, b, {CommKind::Commute, tru(), false});
        rel.set(b, a, {CommKind::Commute, tru(), false});
        continue;
      }
      asked.emplace_back(a, b);
      queries.push_back(semi_commute_formula(p, p.edges[a].st, p.edges[b].st, tru()));
      queries.push_back(semi_commute_formula(p, p.edges[b].st, p.edges[a].st, tru()));
    }
  }
  auto v = smt.valid_batch(queries);
  for (std::size_t q = 0; q < asked.size(); ++q) {
    auto [a, b] = asked[q];
    const bool ab = v[2 * q] == Validity::Valid;
    const bool ba = v[2 * q + 1] == Validity::Valid;
    if (ab && ba) {
      rel.set(a, b, {CommKind::Commute, tru(), false});
      rel.set(b, a, {CommKind::Commute, tru(), false});
      continue;
    }
    if (contextual && ab) rel.set(a, b, {CommKind::SemiCommute, tru(), false});
    if (contextual && ba) rel.set(b, a, {CommKind::SemiCommute, tru(), false});
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (rel.find(a, b)) continue;
      if (contextual) {
        Expr phi = abduce_comm_condition(p, p.edges[a].st, p.edges[b].st, smt);
        if (!phi.is_false()) {
          rel.set(a, b, {CommKind::SemiCommute, phi, false});
          continue;
        }
      }
      rel.set(a, b, {CommKind::NoComm, fls(), false});
    }
  }
  return rel;
}

CommRelation trivial_relation(const Program& p) {
  CommRelation rel;
  for (std::size_t a = 0; a < p.edges.size(); ++a) {
    for (std::size_t b = 0; b < p.edges.size(); ++b) rel.set(a, b, {CommKind::NoComm, fls(), false});
  }
  return rel;
}

CommRelation total_relation(const Program& p) {
  CommRelation rel;
  for (std::size_t a = 0; a < p.edges.size(); ++a) {
    for (std::size_t b = 0; b < p.edges.size(); ++b) rel.set(a, b, {CommKind::Commute, tru(), false});
  }
  return rel;
}

void apply_overrides(CommRelation& rel, const Program& p, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string kw, a, b;
    if (!(ls >> kw)) continue;
    auto where = "commutativity file line " + std::to_string(no) + ": ";
    if (!(ls >> a >> b)) throw ProgramError(where + "expected two statement labels");
    std::size_t ea, eb;
    try {
      ea = p.edge_by_label(a);
      eb = p.edge_by_label(b);
    } catch (const ProgramError& e) {
      throw ProgramError(where + e.what());
    }
    if (kw == "commute" || kw == "nocomm") {
      std::string extra;
      if (ls >> extra) throw ProgramError(where + "trailing text");
      CommVerdict v{kw == "commute" ? CommKind::Commute : CommKind::NoComm, kw == "commute" ? tru() : fls(), true};
      rel.set(ea, eb, v);
      rel.set(eb, ea, v);
    } else if (kw == "semicommute") {
      std::string under;
      if (!(ls >> under) || under != "under") throw ProgramError(where + "expected 'under <formula>'");
      std::string rest;
      std::getline(ls, rest);
      Expr phi;
      try {
        phi = as_thread(p, parse_formula(p, rest), ThreadRef::Self);
      } catch (const std::exception& e) {
        throw ProgramError(where + e.what());
      }
      rel.set(ea, eb, {CommKind::SemiCommute, phi, true});
    } else {
      throw ProgramError(where + "unknown directive '" + kw + "'");
    }
  }
}

Expr comm_test_formula(const Program& p, std::size_t edge, const CommRelation& rel) {
  const Expr pc_j = var(kPc, Sort::Int, ThreadRef::Other);
  // locations sharing a condition are merged; a condition shared by all
  // locations needs no pc test
  std::map<Expr, std::vector<Loc>> groups;
  for (Loc l = 0; l < p.locations.size(); ++l) {
    std::vector<Expr> conj;
    for (auto e : enabled_edges(p, l)) conj.push_back(rel.condition(edge, e));
    groups[mk_and(std::move(conj))].push_back(l);
  }
  if (groups.size() == 1) return groups.begin()->first;
  std::vector<Expr> disj;
  for (const auto& [cond, locs] : groups) {
    if (cond.is_false()) continue;
    std::vector<Expr> at;
    for (auto l : locs) at.push_back(eq(pc_j, p.loc_expr(l)));
    disj.push_back(mk_or(std::move(at)) && cond);
  }
  return mk_or(std::move(disj));
}

}  // namespace parared
