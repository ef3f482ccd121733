#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "parared/commutativity.hpp"
#include "parared/instrument.hpp"
#include "parared/ir.hpp"
#include "parared/preference.hpp"

namespace parared {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class IdPolicy { AllPermutations, Identity };
enum class ClassMode { Exact, Covering };

struct ExplorationConfig {
  std::size_t n = 2;
  std::size_t depth = 6;
  Domain domain;
  IdPolicy ids = IdPolicy::AllPermutations;
  std::size_t max_initial = 200000;
};

/// Id vectors to try for n threads: all permutations of 1..n for n <= 3
/// under AllPermutations, otherwise just 1..n.
std::vector<std::vector<std::int64_t>> id_assignments(const ExplorationConfig& cfg);

/// Variables whose initial value some thread may read before writing it,
/// plus those constrained by pre.
std::set<std::string> observable_initial_vars(const Program& p);

/// Configurations with every thread at init and pre holding for every thread.
/// Variables outside observable_initial_vars are fixed to 0 / false.
/// For instrumented programs pass `ids`: id is pinned to it and sleep to false.
std::vector<Configuration> initial_configurations(const Program& p, const ExplorationConfig& cfg,
                                                  const std::optional<std::vector<std::int64_t>>& ids = std::nullopt);

/// Feasible traces of length <= depth with the configurations they reach.
using TraceSet = std::map<Trace, std::vector<Configuration>>;

TraceSet enumerate_traces(const Program& p, const ExplorationConfig& cfg,
                          const std::optional<std::vector<std::int64_t>>& ids = std::nullopt);
TraceSet enumerate_traces(const Program& p, const std::vector<Configuration>& init, std::size_t depth,
                          const Domain& d);

/// Configurations reached by `t` from `init` (empty if infeasible).
std::vector<Configuration> replay(const Program& p, const std::vector<Configuration>& init, const Trace& t,
                                  const Domain& d);

/// Closure of `t` under adjacent swaps. Exact mode swaps pairs that commute
/// both ways; covering mode also rewrites a@i b@j into b@j a@i when the pair
/// semi-commutes and its condition holds in every configuration the prefix
/// reaches from `init`.
std::set<Trace> equivalence_class(const Program& p, const Trace& t, const CommRelation& rel, ClassMode mode,
                                  const std::vector<Configuration>& init = {}, const Domain& d = {});

/// Location vector after `prefix` steps of t.
std::vector<Loc> locations_after(const Program& p, std::size_t n, const Trace& t, std::size_t prefix);

/// Positional lexicographic comparison under the preference order.
bool lex_less(const Program& p, const LocRelation& r, const std::vector<std::int64_t>& ids, const Trace& a,
              const Trace& b);
Trace lex_min(const Program& p, const std::set<Trace>& cls, const LocRelation& r, const std::vector<std::int64_t>& ids);

bool branch_shaped(const Program& p);

struct ReductionViolation {
  char check = 'a';  // a: erased trace infeasible; b: class not represented; c: more than one representative
  std::vector<std::int64_t> ids;
  Trace witness;
  std::string message;
};

struct ReductionReport {
  std::size_t original_traces = 0;
  std::size_t instrumented_traces = 0;  // summed over id assignments
  std::size_t classes = 0;
  std::size_t id_assignments = 0;
  ClassMode mode = ClassMode::Exact;
  bool minimality_checked = false;
  std::size_t not_lex_min = 0;  // representatives that differ from the class minimum (exact mode)
  std::vector<ReductionViolation> violations;
  /// Erased instrumented traces under the first id assignment (capped).
  std::vector<Trace> representatives;

  [[nodiscard]] bool ok(char check) const;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Covering mode is used when `rel` has a semi-commuting entry.
ReductionReport check_reduction(const Program& p, const LocRelation& r, const CommRelation& rel,
                                const ExplorationConfig& cfg);

struct SafetyResult {
  bool ok = true;
  Trace counterexample;
  std::size_t thread = 0;  // thread whose assertion fails
  std::vector<std::int64_t> ids;
  std::size_t explored = 0;
};

/// Breadth-first search over configurations up to `depth` steps; returns the
/// shortest violating trace. Instrumented programs are explored under every
/// id assignment of the policy.
SafetyResult bounded_safety(const Program& p, const ExplorationConfig& cfg);

}  // namespace parared
