#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parared/ir.hpp"

namespace parared {

/// A relation R over the locations of a template. Pairwise preference orders
/// are induced by total, transitive relations.
class LocRelation {
 public:
  LocRelation() = default;
  explicit LocRelation(std::vector<std::string> locations);

  void add(Loc a, Loc b);
  [[nodiscard]] bool contains(Loc a, Loc b) const;
  [[nodiscard]] std::size_t num_locations() const { return locs_.size(); }
  [[nodiscard]] const std::vector<std::string>& locations() const { return locs_; }
  [[nodiscard]] std::vector<std::pair<Loc, Loc>> pairs() const;
  [[nodiscard]] bool full() const;

  friend bool operator==(const LocRelation&, const LocRelation&) = default;

 private:
  std::vector<std::string> locs_;
  std::vector<char> bits_;
};

struct RelationViolation {
  enum Kind { NotTotal, NotTransitive } kind;
  std::vector<Loc> witness;  // the pair, or the triple a R b R c without a R c
  std::string message;
};

std::optional<RelationViolation> validate_relation(const LocRelation& r);

LocRelation sequential_order(const Program& p);
/// R = { (l, l') | d(l) <= d(l') } with d the BFS depth from the init location.
LocRelation lockstep_order(const Program& p);
/// `.pref` text: lines `pair <loc> <loc>`, `#` comments.
LocRelation parse_pref(const Program& p, const std::string& text);
/// `sequential`, `lockstep` or `custom:<path>`; the result is validated.
LocRelation make_order(const Program& p, const std::string& spec);

/// <pc_a, pc_b> in R as a disjunction of location equalities. Rows that are
/// full collapse to `pc_a = l`; a full relation is `true`.
Expr membership(const LocRelation& r, const Expr& pc_a, const Expr& pc_b);

/// a ⪯ b: <pc_a,pc_b> in R && (<pc_b,pc_a> in R ==> id_a <= id_b).
Expr pref_test_formula(const LocRelation& r, const Expr& pc_a, const Expr& pc_b, const Expr& id_a,
                       const Expr& id_b);
/// prefTest<i,j> over pc[i], pc[j], id[i], id[j].
Expr pref_test_formula(const LocRelation& r);

/// a ⪯ b when thread ids are fixed by position and `a_before_b` says whether
/// id_a < id_b: membership alone if so, strict membership otherwise.
Expr pref_cond_explicit(const LocRelation& r, const Expr& pc_a, const Expr& pc_b, bool a_before_b);

/// Indexed form: thread `a` (a slot 1..k) against a thread of rank `rank`
/// (1..k+1), where an interfering thread inserted at position `rank` sits
/// between slots rank-1 and rank. Slot a precedes it iff a < rank.
Expr pref_cond_explicit(const LocRelation& r, int a, int rank, const Expr& pc_a, const Expr& pc_b);

bool prefers(const LocRelation& r, Loc la, Loc lb, std::int64_t ida, std::int64_t idb);

/// Thread indices (0-based) sorted from most to least preferred.
std::vector<std::size_t> order_threads(const LocRelation& r, const std::vector<Loc>& locs,
                                       const std::vector<std::int64_t>& ids);

}  // namespace parared
