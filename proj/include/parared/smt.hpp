#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parared/expr.hpp"

namespace parared {

enum class Validity { Valid, Invalid, Unknown };

std::string to_string(Validity v);

struct SmtOptions {
  /// z3 binary; empty means `$PARARED_Z3`, falling back to `z3` on PATH.
  std::string z3;
  double query_timeout = 20.0;
};

std::string default_z3();

/// Validity checks through a z3 subprocess. Each batch is one process; every
/// formula is checked in its own push/pop frame.
class SmtChecker {
 public:
  explicit SmtChecker(SmtOptions opts = {});

  Validity valid(const Expr& f) const;
  std::vector<Validity> valid_batch(const std::vector<Expr>& fs) const;

  /// Quantifier-free equivalent of `f` via z3's qe tactic; nullopt if z3
  /// leaves quantifiers behind or fails.
  [[nodiscard]] std::optional<Expr> eliminate_quantifiers(const Expr& f) const;

  /// The script `valid_batch` would run, for debugging.
  [[nodiscard]] std::string script(const std::vector<Expr>& fs) const;

  [[nodiscard]] const SmtOptions& options() const { return opts_; }

 private:
  SmtOptions opts_;
};

/// `(declare-const ...)` lines for every free variable of the formulas.
std::string declare_free_vars(const std::vector<Expr>& fs);

}  // namespace parared
