#include "parared/chc.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "parared/instrument.hpp"

namespace parared {

std::string to_string(Encoding e) {
  switch (e) {
    case Encoding::Plain: return "plain";
    case Encoding::Symbolic: return "symbolic";
    case Encoding::Explicit: return "explicit";
  }
  return "?";
}

Encoding parse_encoding(const std::string& s) {
  if (s == "plain") return Encoding::Plain;
  if (s == "symbolic") return Encoding::Symbolic;
  if (s == "explicit") return Encoding::Explicit;
  throw std::invalid_argument("unknown encoding '" + s + "' (expected plain, symbolic or explicit)");
}

std::string slot_name(const std::string& name, std::size_t r) {
  return name + "." + (r == 0 ? std::string("s") : std::to_string(r));
}

namespace {

bool has_ids(Encoding e) { return e == Encoding::Symbolic; }
bool has_sleep(Encoding e) { return e != Encoding::Plain; }

/// Per-slot variables in signature order.
std::vector<VarDecl> slot_vars(const Program& p, Encoding enc) {
  std::vector<VarDecl> out;
  if (has_ids(enc)) out.push_back({kId, Sort::Int});
  out.push_back({kPc, Sort::Int});
  if (has_sleep(enc)) out.push_back({kSleep, Sort::Bool});
  for (const auto& l : p.locals) out.push_back(l);
  return out;
}

}  // namespace

InvSignature make_signature(const Program& p, Encoding enc, std::size_t k) {
  if (k < 1) throw std::invalid_argument("width must be at least 1");
  InvSignature sig{enc, k, {}};
  for (const auto& g : p.globals) sig.params.push_back(g);
  for (std::size_t r = 1; r <= k; ++r) {
    for (const auto& v : slot_vars(p, enc)) sig.params.push_back({slot_name(v.name, r), v.sort});
  }
  return sig;
}

std::vector<std::size_t> sigma(std::size_t i, std::size_t r, std::size_t k) {
  if (k < 1 || i < 1 || i > k + 1 || r < 1 || r > k) {
    throw std::out_of_range("sigma: need 1 <= i <= k+1 and 1 <= r <= k");
  }
  std::vector<std::size_t> seq(k);
  std::iota(seq.begin(), seq.end(), 1);
  seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(i - 1), 0);
  seq.erase(std::find(seq.begin(), seq.end(), r));
  return seq;
}

namespace {

class Encoder {
 public:
  Encoder(const Program& p, Encoding enc, std::size_t k, const LocRelation* r, const CommRelation* rel)
      : p_(p), enc_(enc), k_(k), r_(r), sig_(make_signature(p, enc, k)) {
    q_ = p;
    if (has_ids(enc)) q_.locals.push_back({kId, Sort::Int});
    if (has_sleep(enc)) q_.locals.push_back({kSleep, Sort::Bool});
    if (has_sleep(enc)) {
      for (std::size_t e = 0; e < p.edges.size(); ++e) comm_.push_back(comm_test_formula(p, e, *rel));
    }
  }

  CHCSystem run() {
    CHCSystem c;
    c.program = p_.name;
    c.sig = sig_;
    c.clauses.push_back(initial());
    for (std::size_t e = 0; e < p_.edges.size(); ++e) {
      for (std::size_t i = 1; i <= k_; ++i) c.clauses.push_back(inductivity(e, i));
    }
    for (std::size_t e = 0; e < p_.edges.size(); ++e) {
      if (enc_ == Encoding::Explicit) {
        for (std::size_t pos = 1; pos <= k_ + 1; ++pos) c.clauses.push_back(non_interference(e, pos));
      } else {
        c.clauses.push_back(non_interference(e, 0));
      }
    }
    for (const auto& [l, f] : p_.asserts) {
      for (std::size_t r = 1; r <= k_; ++r) c.clauses.push_back(safety(l, f, r));
    }
    return c;
  }

 private:
  // thread index t in the SymState: 0..k-1 are slots 1..k, k is the interfering thread
  SymState base(bool with_star) const {
    SymState s;
    for (const auto& g : p_.globals) s.globals[g.name] = var(g);
    const std::size_t n = k_ + (with_star ? 1 : 0);
    s.threads.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t r = t < k_ ? t + 1 : 0;
      for (const auto& v : slot_vars(p_, enc_)) s.threads[t][v.name] = var(slot_name(v.name, r), v.sort);
    }
    return s;
  }

  Expr inv(const SymState& s, const std::vector<std::size_t>& threads) const {
    std::vector<Expr> args;
    for (const auto& g : p_.globals) args.push_back(s.globals.at(g.name));
    for (auto t : threads) {
      for (const auto& v : slot_vars(p_, enc_)) args.push_back(s.threads.at(t).at(v.name));
    }
    return app(kInv, std::move(args));
  }

  std::vector<std::size_t> slots() const {
    std::vector<std::size_t> v(k_);
    std::iota(v.begin(), v.end(), 0);
    return v;
  }

  Expr pc(const SymState& s, std::size_t t) const { return s.threads.at(t).at(kPc); }
  Expr sleep(const SymState& s, std::size_t t) const { return s.threads.at(t).at(kSleep); }
  Expr id(const SymState& s, std::size_t t) const { return s.threads.at(t).at(kId); }

  /// j ⪯ mover, where `before` says whether j's id is below the mover's
  /// (explicit encoding only).
  Expr pref(const SymState& s, std::size_t j, std::size_t mover, bool before) const {
    if (enc_ == Encoding::Symbolic) return pref_test_formula(*r_, pc(s, j), pc(s, mover), id(s, j), id(s, mover));
    return pref_cond_explicit(*r_, pc(s, j), pc(s, mover), before);
  }

  /// New sleep flags for `targets` when `mover` executes edge e, from pre-state s.
  void update_sleep(SymState& s, std::size_t e, std::size_t mover, const std::vector<std::size_t>& targets,
                    const std::function<bool(std::size_t)>& before) const {
    std::vector<std::pair<std::size_t, Expr>> upd;
    for (auto j : targets) {
      if (j == mover) continue;
      Expr v = (sleep(s, j) || pref(s, j, mover, before(j))) && instantiate(q_, comm_[e], s, mover, j);
      upd.emplace_back(j, v);
    }
    for (auto& [j, v] : upd) s.threads[j][kSleep] = v;
  }

  Clause initial() const {
    SymState s = base(false);
    std::vector<Expr> prem;
    for (std::size_t t = 0; t < k_; ++t) {
      prem.push_back(eq(pc(s, t), p_.loc_expr(p_.init)));
      prem.push_back(instantiate(q_, p_.pre, s, t));
      if (has_sleep(enc_)) prem.push_back(mk_not(sleep(s, t)));
    }
    if (has_ids(enc_)) {
      for (std::size_t a = 0; a < k_; ++a) {
        for (std::size_t b = a + 1; b < k_; ++b) prem.push_back(ne(id(s, a), id(s, b)));
      }
    }
    return {"initial", "", mk_and(prem), inv(s, slots())};
  }

  Clause inductivity(std::size_t e, std::size_t slot) const {
    const Edge& edge = p_.edges[e];
    const std::size_t t = slot - 1;
    SymState s = base(false);
    std::vector<Expr> prem{inv(s, slots()), eq(pc(s, t), p_.loc_expr(edge.src))};
    if (has_sleep(enc_)) {
      prem.push_back(mk_not(sleep(s, t)));
      update_sleep(s, e, t, slots(), [&](std::size_t j) { return j < t; });
    }
    FreshNames fresh{std::to_string(slot), 0, {}};
    prem.push_back(sym_exec(p_, edge.st, s, t, {}, fresh));
    s.threads[t][kPc] = p_.loc_expr(edge.dst);
    return {"inductivity", edge.label + " slot " + std::to_string(slot), mk_and(prem), inv(s, slots())};
  }

  /// `pos` is the insertion position of the interfering thread (explicit
  /// encoding) or 0.
  Clause non_interference(std::size_t e, std::size_t pos) const {
    const Edge& edge = p_.edges[e];
    const std::size_t star = k_;
    SymState s = base(true);
    std::vector<Expr> prem{inv(s, slots())};
    for (std::size_t r = 1; r <= k_; ++r) {
      std::vector<std::size_t> th;
      if (enc_ == Encoding::Explicit) {
        for (auto x : sigma(pos, r, k_)) th.push_back(x == 0 ? star : x - 1);
      } else {
        th = slots();
        th[r - 1] = star;
      }
      prem.push_back(inv(s, th));
    }
    prem.push_back(eq(pc(s, star), p_.loc_expr(edge.src)));
    if (has_sleep(enc_)) {
      prem.push_back(mk_not(sleep(s, star)));
      update_sleep(s, e, star, slots(), [&](std::size_t j) { return j + 1 < pos; });
    }
    FreshNames fresh{"s", 0, {}};
    prem.push_back(sym_exec(p_, edge.st, s, star, {}, fresh));
    std::string note = edge.label;
    if (pos) note += " position " + std::to_string(pos);
    return {"non-interference", note, mk_and(prem), inv(s, slots())};
  }

  Clause safety(Loc l, const Expr& f, std::size_t slot) const {
    SymState s = base(false);
    const std::size_t t = slot - 1;
    Expr body = inv(s, slots()) && eq(pc(s, t), p_.loc_expr(l)) && mk_not(instantiate(q_, f, s, t));
    return {"safety", p_.locations[l] + " slot " + std::to_string(slot), body, fls()};
  }

  const Program& p_;
  Program q_;
  Encoding enc_;
  std::size_t k_;
  const LocRelation* r_;
  InvSignature sig_;
  std::vector<Expr> comm_;
};

}  // namespace

CHCSystem encode_plain(const Program& p, std::size_t k) {
  return Encoder(p, Encoding::Plain, k, nullptr, nullptr).run();
}

CHCSystem encode_symbolic(const Program& p, std::size_t k, const LocRelation& r, const CommRelation& rel) {
  return Encoder(p, Encoding::Symbolic, k, &r, &rel).run();
}

CHCSystem encode_explicit(const Program& p, std::size_t k, const LocRelation& r, const CommRelation& rel) {
  return Encoder(p, Encoding::Explicit, k, &r, &rel).run();
}

CHCSystem encode(const Program& p, Encoding enc, std::size_t k, const LocRelation& r, const CommRelation& rel) {
  switch (enc) {
    case Encoding::Plain: return encode_plain(p, k);
    case Encoding::Symbolic: return encode_symbolic(p, k, r, rel);
    case Encoding::Explicit: return encode_explicit(p, k, r, rel);
  }
  throw std::invalid_argument("bad encoding");
}

std::string smt_file_name(const std::string& program, Encoding enc, std::size_t k) {
  return program + "." + to_string(enc) + ".k" + std::to_string(k) + ".smt2";
}

namespace {

std::vector<VarDecl> clause_vars(const Clause& c) {
  std::vector<VarDecl> out;
  auto fv = free_vars(c.body);
  fv.merge(free_vars(c.head));
  for (const auto& [key, sort] : fv) out.push_back({key.first, sort});
  return out;
}

}  // namespace

std::string emit_smtlib(const CHCSystem& c) {
  std::ostringstream os;
  os << "; " << c.program << ", " << to_string(c.sig.encoding) << " encoding, width " << c.sig.k << "\n";
  os << "(set-logic HORN)\n";
  os << "(declare-fun " << kInv << " (";
  for (std::size_t i = 0; i < c.sig.params.size(); ++i) os << (i ? " " : "") << smt_sort(c.sig.params[i].sort);
  os << ") Bool)\n";
  for (const auto& cl : c.clauses) {
    os << "; " << cl.kind << (cl.note.empty() ? "" : " " + cl.note) << "\n";
    auto vars = clause_vars(cl);
    std::string imp = "(=> " + to_smtlib(cl.body) + " " + to_smtlib(cl.head) + ")";
    if (vars.empty()) {
      os << "(assert " << imp << ")\n";
    } else {
      os << "(assert (forall (";
      for (std::size_t i = 0; i < vars.size(); ++i) {
        os << (i ? " " : "") << "(" << smt_symbol(vars[i].name) << " " << smt_sort(vars[i].sort) << ")";
      }
      os << ")\n  " << imp << "))\n";
    }
  }
  os << "(check-sat)\n";
  return os.str();
}

Expr clause_obligation(const CHCSystem& c, std::size_t clause, const Expr& body) {
  const Clause& cl = c.clauses.at(clause);
  Expr prem = inline_function(cl.body, kInv, c.sig.params, body);
  Expr head = inline_function(cl.head, kInv, c.sig.params, body);
  return implies(prem, head);
}

Expr translate_solution(const Expr& body, std::size_t k, Direction dir) {
  if (dir == Direction::SymbolicToExplicit) {
    std::vector<VarDecl> ids;
    std::vector<Expr> order;
    for (std::size_t r = 1; r <= k; ++r) ids.push_back({slot_name(kId, r), Sort::Int});
    for (std::size_t r = 1; r < k; ++r) order.push_back(lt(var(ids[r - 1]), var(ids[r])));
    return exists(ids, mk_and(order) && body);
  }
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<Expr> disj;
  do {
    std::vector<Expr> guard;
    for (std::size_t q = 0; q + 1 < k; ++q) {
      guard.push_back(lt(var(slot_name(kId, perm[q]), Sort::Int), var(slot_name(kId, perm[q + 1]), Sort::Int)));
    }
    // position q of the explicit solution is thread perm[q]
    Expr renamed = substitute(body, [&](const Expr& v) -> std::optional<Expr> {
      auto dot = v.name().rfind('.');
      if (dot == std::string::npos) return std::nullopt;
      const std::string suffix = v.name().substr(dot + 1);
      if (suffix.empty() || !std::all_of(suffix.begin(), suffix.end(), ::isdigit)) return std::nullopt;
      auto q = std::stoul(suffix);
      if (q < 1 || q > k) return std::nullopt;
      return var(slot_name(v.name().substr(0, dot), perm[q - 1]), v.sort());
    });
    disj.push_back(mk_and(guard) && renamed);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return mk_or(std::move(disj));
}

}  // namespace parared
