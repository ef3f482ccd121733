#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "parared/expr.hpp"

namespace parared {

class SExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;

  [[nodiscard]] bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  [[nodiscard]] std::string str() const;
};

/// Parses every top-level s-expression in `text`. `|quoted|` symbols are
/// unquoted, string literals keep their quotes.
std::vector<SExpr> parse_sexprs(std::string_view text);

Sort parse_sort(const SExpr& s);

struct FunDef {
  std::vector<VarDecl> formals;
  Sort result = Sort::Bool;
  Expr body;
};

/// Converts an SMT-LIB term into an expression. Symbols are resolved first
/// against `vars`, then against nullary entries of `funs`; applications of
/// entries in `funs` are inlined.
Expr term_to_expr(const SExpr& t, const std::map<std::string, Expr>& vars,
                  const std::map<std::string, FunDef>& funs = {});

/// All `define-fun` entries of a `(get-model)` response, in order, with
/// earlier definitions inlined into later ones.
std::map<std::string, FunDef> parse_model_defs(std::string_view text);

}  // namespace parared
