#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parared/commutativity.hpp"
#include "parared/ir.hpp"
#include "parared/preference.hpp"

namespace parared {

enum class Encoding { Plain, Symbolic, Explicit };

std::string to_string(Encoding e);
Encoding parse_encoding(const std::string& s);

inline constexpr const char* kInv = "Inv";

/// Argument list of Inv: globals, then per slot r = 1..k: [id.r] pc.r
/// [sleep.r] and the locals as `<name>.r`.
struct InvSignature {
  Encoding encoding = Encoding::Plain;
  std::size_t k = 1;
  std::vector<VarDecl> params;
};

InvSignature make_signature(const Program& p, Encoding enc, std::size_t k);
/// Name of variable `name` of slot r (1-based); r = 0 denotes the interfering thread.
std::string slot_name(const std::string& name, std::size_t r);

struct Clause {
  std::string kind;  // initial, inductivity, non-interference, safety
  std::string note;
  Expr body;         // may contain Inv applications
  Expr head;         // an Inv application or `false`
};

struct CHCSystem {
  std::string program;
  InvSignature sig;
  std::vector<Clause> clauses;
};

/// sigma_i^r: insert the interfering thread (0) at position i of 1..k and
/// delete r. Entry q-1 is the thread at position q.
std::vector<std::size_t> sigma(std::size_t i, std::size_t r, std::size_t k);

CHCSystem encode_plain(const Program& p, std::size_t k);
CHCSystem encode_symbolic(const Program& p, std::size_t k, const LocRelation& r, const CommRelation& rel);
CHCSystem encode_explicit(const Program& p, std::size_t k, const LocRelation& r, const CommRelation& rel);
CHCSystem encode(const Program& p, Encoding enc, std::size_t k, const LocRelation& r, const CommRelation& rel);

std::string emit_smtlib(const CHCSystem& c);
std::string smt_file_name(const std::string& program, Encoding enc, std::size_t k);

/// Universal closure of a clause with Inv replaced by `body` (over the
/// signature's parameter names).
Expr clause_obligation(const CHCSystem& c, std::size_t clause, const Expr& body);

enum class Direction { SymbolicToExplicit, ExplicitToSymbolic };

/// Maps an Inv interpretation between the id-carrying and the id-free
/// signature. Symbolic to explicit projects the ids away under the ordering
/// id.1 < ... < id.k; explicit to symbolic takes the disjunction over all k!
/// orderings.
Expr translate_solution(const Expr& body, std::size_t k, Direction dir);

}  // namespace parared
