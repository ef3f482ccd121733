#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "parared/ir.hpp"
#include "parared/smt.hpp"

namespace parared {

enum class CommKind { Commute, SemiCommute, NoComm };

/// Verdict for the ordered pair (a@i, b@j). `SemiCommute` means the trace
/// `a@i b@j` is covered by `b@j a@i` whenever `cond` holds before it; `cond`
/// refers to i's locals with ThreadRef::Self and j's with ThreadRef::Other.
struct CommVerdict {
  CommKind kind = CommKind::NoComm;
  Expr cond = fls();
  bool overridden = false;
};

class CommRelation {
 public:
  void set(std::size_t a, std::size_t b, CommVerdict v) { map_[{a, b}] = std::move(v); }
  [[nodiscard]] const CommVerdict* find(std::size_t a, std::size_t b) const;
  [[nodiscard]] const CommVerdict& at(std::size_t a, std::size_t b) const;
  /// true / cond / false by verdict kind.
  [[nodiscard]] Expr condition(std::size_t a, std::size_t b) const;
  [[nodiscard]] bool commutes(std::size_t a, std::size_t b) const;
  [[nodiscard]] const std::map<std::pair<std::size_t, std::size_t>, CommVerdict>& entries() const { return map_; }

 private:
  std::map<std::pair<std::size_t, std::size_t>, CommVerdict> map_;
};

/// Formula valid iff  phi ==> ([[st1@i st2@j]] ⊆ [[st2@j st1@i]]).
Expr semi_commute_formula(const Program& p, const Statement& st1, const Statement& st2, const Expr& phi);

/// Footprint test: no global written by one statement is touched by the other.
bool independent(const Program& p, const Statement& st1, const Statement& st2);

bool commute_exact(const Program& p, const Statement& st1, const Statement& st2, const SmtChecker& smt);
bool semi_commute(const Program& p, const Statement& st1, const Statement& st2, const Expr& phi,
                  const SmtChecker& smt);

/// Candidate contexts tried by abduction, in order.
std::vector<Expr> abduction_candidates(const Program& p, const Statement& st1, const Statement& st2);
/// A context under which st1@i st2@j is covered by st2@j st1@i; `false` if none found.
Expr abduce_comm_condition(const Program& p, const Statement& st1, const Statement& st2, const SmtChecker& smt);

/// Pairwise relation over the program's edges. In contextual mode pairs that
/// do not commute get a semi-commutativity verdict when one can be found.
CommRelation build_comm_relation(const Program& p, bool contextual, const SmtChecker& smt);
CommRelation trivial_relation(const Program& p);
CommRelation total_relation(const Program& p);

/// `.comm` lines: `commute a b`, `semicommute a b under <f>`, `nocomm a b`.
void apply_overrides(CommRelation& rel, const Program& p, const std::string& text);

/// phi_c<j,i,st> for edge `edge`: OR over l of (pc[j] = l && AND over the
/// edges e' leaving l of condition(edge, e')).
Expr comm_test_formula(const Program& p, std::size_t edge, const CommRelation& rel);

}  // namespace parared
