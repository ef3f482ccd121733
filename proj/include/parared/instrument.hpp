#pragma once

#include <vector>

#include "parared/commutativity.hpp"
#include "parared/ir.hpp"
#include "parared/preference.hpp"

namespace parared {

inline constexpr const char* kSleep = "sleep";
inline constexpr const char* kId = "id";

struct InstrumentedProgram {
  Program program;
  /// Original edge of every instrumented edge (the erasure map on statements).
  std::vector<std::size_t> origin;
};

/// (sleep[j] || prefTest<j,i>) && phi_c<j,i,st> for edge `edge`.
Expr sleep_update(const Program& p, std::size_t edge, const LocRelation& r, const CommRelation& rel);

/// atomic { assume !sleep; forall j != i: sleep[j] := <sleep_update>; st }
Statement instrument_statement(const Program& p, std::size_t edge, const LocRelation& r, const CommRelation& rel);

/// Same locations and init; locals gain `id` and `sleep`. Initial values of
/// the new locals (distinct ids, no thread asleep) are left to the consumers.
InstrumentedProgram sleep_instrument(const Program& p, const LocRelation& r, const CommRelation& rel);

Trace erase(const InstrumentedProgram& ip, const Trace& t);

}  // namespace parared
