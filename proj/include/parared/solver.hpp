#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "parared/chc.hpp"
#include "parared/smt.hpp"

namespace parared {

enum class VerdictKind { Sat, Unsat, Unknown, Timeout, Error };

std::string to_string(VerdictKind k);

struct SolverVerdict {
  VerdictKind kind = VerdictKind::Error;
  std::string model;    // solver output after the verdict line (Sat only)
  std::string message;  // diagnostics for Error
  std::string solver;
  double seconds = 0;
};

/// How to call a CHC solver. `argv` may contain `{file}` and `{timeout}`
/// (whole seconds); without `{file}` the file is appended.
struct SolverSpec {
  std::string name;
  std::vector<std::string> argv;
  /// Append `(get-model)` after `(check-sat)` to obtain the interpretation.
  bool append_get_model = false;
  /// Matched against the first non-empty output line (whole line, trimmed).
  std::string sat_re = "sat";
  std::string unsat_re = "unsat";
  std::string unknown_re = "unknown";
  std::string timeout_re = "timeout";
};

/// Built-in specs: z3 (`$PARARED_Z3`), eldarica (`$PARARED_ELDARICA`),
/// golem (`$PARARED_GOLEM`). Any other name is taken as a command line.
SolverSpec solver_spec(const std::string& name_or_cmd);
bool solver_available(const SolverSpec& s);

SolverVerdict run_solver(const std::string& smt2, const SolverSpec& solver, double timeout_s,
                         const std::atomic<bool>* cancel = nullptr);

/// Runs all solvers at once; the first Sat or Unsat wins and the rest are killed.
SolverVerdict run_portfolio(const std::string& smt2, const std::vector<SolverSpec>& solvers, double timeout_s);

/// The Inv definition of a model, over the signature's parameter names.
Expr parse_model(const std::string& model, const InvSignature& sig);

struct AshcroftInvariant {
  std::size_t k = 1;
  /// Explicit-sleep solutions hold for threads listed in increasing id
  /// order; the others for any k distinct threads.
  bool id_ordered = false;
  Expr body;
  InvSignature sig;

  [[nodiscard]] std::string str() const;
};

AshcroftInvariant reconstruct_ashcroft(const Expr& body, const InvSignature& sig);

struct ValidationResult {
  enum Status { Valid, Invalid, Inconclusive } status = Inconclusive;
  std::optional<std::size_t> clause;
  std::string message;

  [[nodiscard]] bool ok() const { return status == Valid; }
};

/// Substitutes the invariant for Inv in every clause and checks validity.
ValidationResult validate_invariant(const AshcroftInvariant& inv, const CHCSystem& system, const SmtChecker& smt);
ValidationResult validate_invariant(const Expr& body, const CHCSystem& system, const SmtChecker& smt);

}  // namespace parared
