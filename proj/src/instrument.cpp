#include "parared/instrument.hpp"

namespace parared {

Expr sleep_update(const Program& p, std::size_t edge, const LocRelation& r, const CommRelation& rel) {
  const Expr pc_i = var(kPc, Sort::Int, ThreadRef::Self);
  const Expr pc_j = var(kPc, Sort::Int, ThreadRef::Other);
  const Expr id_i = var(kId, Sort::Int, ThreadRef::Self);
  const Expr id_j = var(kId, Sort::Int, ThreadRef::Other);
  const Expr sleep_j = var(kSleep, Sort::Bool, ThreadRef::Other);
  return (sleep_j || pref_test_formula(r, pc_j, pc_i, id_j, id_i)) && comm_test_formula(p, edge, rel);
}

Statement instrument_statement(const Program& p, std::size_t edge, const LocRelation& r, const CommRelation& rel) {
  return Statement::atomic({
      Statement::assume(mk_not(var(kSleep, Sort::Bool))),
      Statement::sync_update({kSleep, Sort::Bool}, sleep_update(p, edge, r, rel)),
      p.edges.at(edge).st,
  });
}

InstrumentedProgram sleep_instrument(const Program& p, const LocRelation& r, const CommRelation& rel) {
  if (p.is_local(kId) || p.is_global(kId) || p.is_local(kSleep) || p.is_global(kSleep)) {
    throw ProgramError("program already declares 'id' or 'sleep'; rename it before instrumenting");
  }
  if (r.num_locations() != p.locations.size()) throw ProgramError("preference relation does not match the program");
  InstrumentedProgram out;
  out.program = p;
  out.program.locals.push_back({kId, Sort::Int});
  out.program.locals.push_back({kSleep, Sort::Bool});
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    out.program.edges[e].st = instrument_statement(p, e, r, rel);
    out.origin.push_back(e);
  }
  return out;
}

Trace erase(const InstrumentedProgram& ip, const Trace& t) {
  Trace out;
  out.reserve(t.size());
  for (const auto& s : t) out.push_back({static_cast<std::uint32_t>(ip.origin.at(s.edge)), s.thread});
  return out;
}

}  // namespace parared
