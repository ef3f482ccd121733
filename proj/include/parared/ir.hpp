#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "parared/expr.hpp"

namespace parared {

using Loc = std::uint32_t;

/// Name of the pseudo-variable holding a thread's control location.
inline constexpr const char* kPc = "pc";

enum class StmtKind { Assign, Assume, Havoc, Atomic, SyncUpdate };

/// A template statement. Array writes `a[e] := v` are assignments of
/// `store(a, e, v)` to `a`. `SyncUpdate` sets `target` of every thread other
/// than the executing one; its expression refers to the executing thread's
/// variables via ThreadRef::Self and the updated thread's via ThreadRef::Other.
class Statement {
 public:
  static Statement assign(VarDecl target, Expr value);
  static Statement assume(Expr cond);
  static Statement havoc(VarDecl target);
  static Statement atomic(std::vector<Statement> body);
  static Statement sync_update(VarDecl target, Expr value);

  [[nodiscard]] StmtKind kind() const { return kind_; }
  [[nodiscard]] const VarDecl& target() const { return target_; }
  [[nodiscard]] const Expr& expr() const { return expr_; }
  [[nodiscard]] const std::vector<Statement>& body() const { return body_; }

  friend bool operator==(const Statement& a, const Statement& b);

 private:
  StmtKind kind_ = StmtKind::Assume;
  VarDecl target_;
  Expr expr_;
  std::vector<Statement> body_;
};

/// Variables a statement may write, and those it reads (thread-plain names).
std::vector<std::string> write_set(const Statement& st);
std::vector<std::string> read_set(const Statement& st);
/// Every `assume` condition occurring in `st`.
std::vector<Expr> assumptions(const Statement& st);
/// Index expressions of array reads and writes in `st`.
std::vector<Expr> array_indices(const Statement& st);

std::string to_dsl(const Statement& st);

struct Edge {
  Loc src = 0;
  Loc dst = 0;
  Statement st;
  std::string label;
};

class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Program {
  std::string name;
  std::vector<std::string> locations;
  Loc init = 0;
  std::vector<Edge> edges;
  std::vector<VarDecl> globals;
  std::vector<VarDecl> locals;
  Expr pre = tru();
  std::map<Loc, Expr> asserts;

  [[nodiscard]] std::optional<Loc> find_loc(const std::string& name) const;
  [[nodiscard]] Loc loc(const std::string& name) const;
  [[nodiscard]] Expr loc_expr(Loc l) const { return loc_lit(l, locations.at(l)); }
  [[nodiscard]] bool is_global(const std::string& v) const;
  [[nodiscard]] bool is_local(const std::string& v) const;
  [[nodiscard]] std::optional<Sort> sort_of(const std::string& v) const;
  [[nodiscard]] std::optional<std::size_t> global_index(const std::string& v) const;
  [[nodiscard]] std::optional<std::size_t> local_index(const std::string& v) const;
  [[nodiscard]] std::size_t edge_by_label(const std::string& label) const;
  [[nodiscard]] bool has_arrays() const;

  /// Checks the structural invariants; throws ProgramError.
  void validate() const;
};

/// Statements of the edges leaving `l`.
std::vector<Statement> enabled(const Program& p, Loc l);
std::vector<std::size_t> enabled_edges(const Program& p, Loc l);

// -- symbolic semantics ------------------------------------------------------

/// Symbolic values of all variables: globals plus, per thread slot, its locals
/// and the `pc` pseudo-variable.
struct SymState {
  std::map<std::string, Expr> globals;
  std::vector<std::map<std::string, Expr>> threads;
};

/// Source of fresh variable names for havoc.
struct FreshNames {
  std::string tag;
  int counter = 0;
  std::vector<VarDecl> made;

  Expr make(const std::string& base, Sort s);
};

/// Replaces the variables of `e` (read by thread `t`; `other` is thread j
/// for ThreadRef::Other references) by their values in `s`.
Expr instantiate(const Program& p, const Expr& e, const SymState& s, std::size_t t,
                 std::optional<std::size_t> other = std::nullopt);

/// Executes `st` as thread `t`, updating `s` in place and returning the path
/// condition. SyncUpdates update every slot listed in `others`.
Expr sym_exec(const Program& p, const Statement& st, SymState& s, std::size_t t,
              const std::vector<std::size_t>& others, FreshNames& fresh);

/// Two-vocabulary formula of `st` for a single thread: unprimed names for the
/// pre-state, `name'` for the post-state; unmentioned variables are framed.
Expr transition_formula(const Program& p, const Statement& st);

// -- concrete semantics ------------------------------------------------------

using Value = std::variant<std::int64_t, bool, std::vector<std::int64_t>>;

std::string to_string(const Value& v);

/// Bounds that make the state space finite. Transitions leaving the bounds
/// are blocked.
struct Domain {
  std::int64_t lo = -4;
  std::int64_t hi = 4;
  std::int64_t index_lo = 0;
  std::int64_t index_hi = 2;

  [[nodiscard]] std::vector<Value> values(Sort s) const;
  [[nodiscard]] bool contains(const Value& v) const;
};

struct Configuration {
  std::vector<Loc> locs;
  std::vector<Value> globals;
  std::vector<std::vector<Value>> locals;

  auto operator<=>(const Configuration&) const = default;
  bool operator==(const Configuration&) const = default;
};

std::string to_string(const Program& p, const Configuration& c);

/// Raised when an evaluation leaves the finite domain.
struct Blocked {};

Value eval(const Program& p, const Expr& e, const Configuration& c, std::size_t t,
           std::optional<std::size_t> other, const Domain& d);
bool holds(const Program& p, const Expr& e, const Configuration& c, std::size_t t, const Domain& d);

/// All successors of thread `i` taking edge `edge` in `c`.
std::vector<Configuration> indexed_step(const Program& p, const Configuration& c, std::size_t i,
                                        std::size_t edge, const Domain& d);

struct Step {
  std::uint32_t edge = 0;
  std::uint32_t thread = 0;

  auto operator<=>(const Step&) const = default;
  bool operator==(const Step&) const = default;
};

using Trace = std::vector<Step>;

std::string to_string(const Program& p, const Trace& t);

}  // namespace parared
