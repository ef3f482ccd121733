#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace parared {

enum class Sort { Int, Bool, IntArray };

std::string to_string(Sort s);

/// Which thread a variable reference belongs to.
///
/// `Plain` is an ordinary reference: a global, or a local of the executing
/// thread. `Self` and `Other` only occur in synchronized statements and in
/// commutativity conditions, where they name thread `i` (the executing
/// thread) and thread `j` (any other thread) explicitly.
enum class ThreadRef : std::uint8_t { Plain, Self, Other };

enum class Op : std::uint8_t {
  IntLit,
  BoolLit,
  LocLit,
  Var,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Ite,
  Eq,
  Lt,
  Le,
  Add,
  Sub,
  Neg,
  Mul,
  Div,
  Mod,
  Select,
  Store,
  ConstArray,
  App,
  Exists,
  Forall,
};

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VarDecl {
  std::string name;
  Sort sort = Sort::Int;

  friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

struct Node;

/// Immutable, shared expression handle.
///
/// Builders fold constants and flatten boolean connectives, so structurally
/// equal inputs always produce structurally equal trees.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  [[nodiscard]] bool valid() const { return node_ != nullptr; }
  [[nodiscard]] Op op() const;
  [[nodiscard]] Sort sort() const;
  [[nodiscard]] const std::vector<Expr>& args() const;
  [[nodiscard]] const Expr& arg(std::size_t i) const { return args().at(i); }
  [[nodiscard]] std::int64_t int_value() const;
  [[nodiscard]] bool bool_value() const;
  /// Variable, location or function name.
  [[nodiscard]] const std::string& name() const;
  [[nodiscard]] ThreadRef ref() const;
  [[nodiscard]] const std::vector<VarDecl>& bound() const;
  [[nodiscard]] const Node* get() const { return node_.get(); }

  [[nodiscard]] bool is_true() const;
  [[nodiscard]] bool is_false() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator<(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::BoolLit;
  Sort sort = Sort::Bool;
  std::int64_t value = 0;
  std::string name;
  ThreadRef ref = ThreadRef::Plain;
  std::vector<Expr> args;
  std::vector<VarDecl> bound;
};

// -- builders ---------------------------------------------------------------

Expr int_lit(std::int64_t v);
Expr bool_lit(bool v);
Expr tru();
Expr fls();
/// A control location constant; `code` is its dense index, `name` its label.
Expr loc_lit(std::uint32_t code, std::string name);
Expr var(std::string name, Sort sort, ThreadRef ref = ThreadRef::Plain);
Expr var(const VarDecl& d);

Expr mk_not(const Expr& a);
Expr mk_and(std::vector<Expr> xs);
Expr mk_or(std::vector<Expr> xs);
Expr implies(const Expr& a, const Expr& b);
Expr iff(const Expr& a, const Expr& b);
Expr ite(const Expr& c, const Expr& t, const Expr& e);
Expr eq(const Expr& a, const Expr& b);
Expr ne(const Expr& a, const Expr& b);
Expr lt(const Expr& a, const Expr& b);
Expr le(const Expr& a, const Expr& b);
Expr gt(const Expr& a, const Expr& b);
Expr ge(const Expr& a, const Expr& b);
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr neg(const Expr& a);
Expr mul(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr mod(const Expr& a, const Expr& b);
Expr select(const Expr& arr, const Expr& idx);
Expr store(const Expr& arr, const Expr& idx, const Expr& val);
Expr const_array(const Expr& val);
Expr app(std::string fn, std::vector<Expr> args, Sort result = Sort::Bool);
Expr exists(std::vector<VarDecl> vars, const Expr& body);
Expr forall(std::vector<VarDecl> vars, const Expr& body);

inline Expr operator!(const Expr& a) { return mk_not(a); }
inline Expr operator&&(const Expr& a, const Expr& b) { return mk_and({a, b}); }
inline Expr operator||(const Expr& a, const Expr& b) { return mk_or({a, b}); }
inline Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }

/// Rebuilds a node of the same kind over new children (re-simplifying).
Expr rebuild(const Expr& e, std::vector<Expr> args);

// -- traversal --------------------------------------------------------------

using VarMapper = std::function<std::optional<Expr>(const Expr& var)>;

/// Replaces free variables for which `f` returns a value. Variables bound by
/// quantifiers are left alone.
Expr substitute(const Expr& e, const VarMapper& f);
Expr substitute(const Expr& e, const std::map<std::string, Expr>& by_name);

/// Replaces every application of `fn` by `body` with formals bound to actuals.
Expr inline_function(const Expr& e, const std::string& fn,
                     const std::vector<VarDecl>& formals, const Expr& body);

/// Free variables keyed by (name, ref).
std::map<std::pair<std::string, ThreadRef>, Sort> free_vars(const Expr& e);
std::set<std::string> free_var_names(const Expr& e);
bool mentions_app(const Expr& e, const std::string& fn);
std::size_t count_apps(const Expr& e, const std::string& fn);
/// Pre-order walk over every subterm.
void collect(const Expr& e, const std::function<void(const Expr&)>& visit);

// -- printing ---------------------------------------------------------------

/// SMT-LIB 2 rendering. Locations print as their integer code; symbols that
/// are not simple SMT-LIB symbols are quoted.
std::string to_smtlib(const Expr& e);
std::string smt_symbol(const std::string& name);
/// `x`, `x@i` or `x@j` depending on the thread reference.
std::string smt_var_name(const std::string& name, ThreadRef ref);
std::string smt_sort(Sort s);

/// Infix rendering in the DSL's expression syntax.
std::string to_dsl(const Expr& e);

}  // namespace parared
