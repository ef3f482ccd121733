#include "parared/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>

namespace parared {

namespace {

bool instrumented(const Program& p) { return p.is_local(kId) && p.is_local(kSleep); }

Value default_value(Sort s, const Domain& d) {
  switch (s) {
    case Sort::Int: return std::int64_t{0};
    case Sort::Bool: return false;
    case Sort::IntArray:
      return std::vector<std::int64_t>(static_cast<std::size_t>(std::max<std::int64_t>(0, d.index_hi - d.index_lo + 1)), 0);
  }
  return std::int64_t{0};
}

/// Cross product of the domains of `vars`; `fixed` entries are not enumerated.
std::vector<std::vector<Value>> valuations(const std::vector<VarDecl>& vars, const Domain& d,
                                           const std::map<std::size_t, Value>& fixed) {
  std::vector<std::vector<Value>> out{{}};
  for (std::size_t i = 0; i < vars.size(); ++i) {
    std::vector<Value> choices;
    if (auto it = fixed.find(i); it != fixed.end()) choices.push_back(it->second);
    else choices = d.values(vars[i].sort);
    std::vector<std::vector<Value>> next;
    next.reserve(out.size() * choices.size());
    for (const auto& prefix : out) {
      for (const auto& v : choices) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    }
    out = std::move(next);
  }
  return out;
}

bool safe_holds(const Program& p, const Expr& e, const Configuration& c, std::size_t t, const Domain& d) {
  try {
    return holds(p, e, c, t, d);
  } catch (const Blocked&) {
    return false;
  }
}

std::vector<Expr> conjuncts(const Expr& e) {
  if (e.op() == Op::And) return e.args();
  return {e};
}

void own_writes(const Statement& st, std::set<std::string>& out) {
  switch (st.kind()) {
    case StmtKind::Assign:
    case StmtKind::Havoc: out.insert(st.target().name); break;
    case StmtKind::Atomic:
      for (const auto& s : st.body()) own_writes(s, out);
      break;
    default: break;
  }
}

}  // namespace

std::set<std::string> observable_initial_vars(const Program& p) {
  // backward may-liveness; a thread only reads a variable before its own
  // first write if the variable is live at init
  std::vector<std::set<std::string>> live(p.locations.size());
  for (const auto& [l, f] : p.asserts) {
    for (const auto& n : free_var_names(f)) live[l].insert(n);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : p.edges) {
      std::set<std::string> w;
      own_writes(e.st, w);
      std::set<std::string> add;
      for (const auto& n : read_set(e.st)) add.insert(n);
      for (const auto& n : live[e.dst]) {
        if (!w.count(n)) add.insert(n);
      }
      for (const auto& n : add) changed |= live[e.src].insert(n).second;
    }
  }
  auto out = live[p.init];
  for (const auto& n : free_var_names(p.pre)) out.insert(n);
  return out;
}

std::vector<std::vector<std::int64_t>> id_assignments(const ExplorationConfig& cfg) {
  std::vector<std::int64_t> ids(cfg.n);
  std::iota(ids.begin(), ids.end(), 1);
  std::vector<std::vector<std::int64_t>> out;
  if (cfg.ids == IdPolicy::AllPermutations && cfg.n <= 3) {
    do out.push_back(ids);
    while (std::next_permutation(ids.begin(), ids.end()));
  } else {
    out.push_back(ids);
  }
  return out;
}

std::vector<Configuration> initial_configurations(const Program& p, const ExplorationConfig& cfg,
                                                  const std::optional<std::vector<std::int64_t>>& ids) {
  if (cfg.n == 0) throw OracleError("at least one thread is needed");
  const Domain& d = cfg.domain;
  if (ids && ids->size() != cfg.n) throw OracleError("id vector does not match the thread count");
  const bool inst = ids && instrumented(p);

  std::vector<Expr> global_part, thread_part;
  for (const auto& c : conjuncts(p.pre)) {
    bool local = false;
    for (const auto& [key, sort] : free_vars(c)) {
      if (key.first == kPc || p.is_local(key.first)) local = true;
    }
    (local ? thread_part : global_part).push_back(c);
  }
  const Expr thread_pre = mk_and(thread_part);

  Configuration blank;
  blank.locs.assign(cfg.n, p.init);
  for (std::size_t t = 0; t < cfg.n; ++t) {
    std::vector<Value> row;
    for (const auto& l : p.locals) row.push_back(default_value(l.sort, d));
    blank.locals.push_back(std::move(row));
  }

  // variables whose initial value is never observed keep their default
  const auto observed = observable_initial_vars(p);
  std::map<std::size_t, Value> fixed_globals;
  for (std::size_t i = 0; i < p.globals.size(); ++i) {
    if (!observed.count(p.globals[i].name)) fixed_globals[i] = default_value(p.globals[i].sort, d);
  }
  std::map<std::size_t, Value> fixed_locals;
  for (std::size_t i = 0; i < p.locals.size(); ++i) {
    if (!observed.count(p.locals[i].name)) fixed_locals[i] = default_value(p.locals[i].sort, d);
  }

  std::vector<Configuration> out;
  bool any_global = false;
  for (auto& g : valuations(p.globals, d, fixed_globals)) {
    Configuration c = blank;
    c.globals = std::move(g);
    if (!std::all_of(global_part.begin(), global_part.end(), [&](const Expr& e) { return safe_holds(p, e, c, 0, d); })) {
      continue;
    }
    any_global = true;
    std::vector<std::vector<std::vector<Value>>> per_thread(cfg.n);
    bool empty = false;
    for (std::size_t t = 0; t < cfg.n && !empty; ++t) {
      std::map<std::size_t, Value> fixed = fixed_locals;
      if (inst) {
        fixed[*p.local_index(kId)] = (*ids)[t];
        fixed[*p.local_index(kSleep)] = false;
      }
      for (auto& row : valuations(p.locals, d, fixed)) {
        Configuration probe = c;
        probe.locals[t] = row;
        if (safe_holds(p, thread_pre, probe, t, d)) per_thread[t].push_back(std::move(row));
      }
      empty = per_thread[t].empty();
    }
    if (empty) continue;
    std::vector<Configuration> acc{c};
    for (std::size_t t = 0; t < cfg.n; ++t) {
      std::vector<Configuration> next;
      for (const auto& a : acc) {
        for (const auto& row : per_thread[t]) {
          next.push_back(a);
          next.back().locals[t] = row;
        }
      }
      acc = std::move(next);
      if (out.size() + acc.size() > cfg.max_initial) {
        throw OracleError("more than " + std::to_string(cfg.max_initial) + " initial configurations; shrink the domain");
      }
    }
    for (auto& a : acc) out.push_back(std::move(a));
  }
  if (out.empty()) {
    throw OracleError(any_global || p.globals.empty() ? "domain too small to represent pre for the threads"
                                                      : "domain too small to represent pre");
  }
  return out;
}

TraceSet enumerate_traces(const Program& p, const std::vector<Configuration>& init, std::size_t depth,
                          const Domain& d) {
  TraceSet all;
  if (init.empty()) return all;
  const std::size_t n = init.front().locs.size();
  std::map<Trace, std::vector<Configuration>> layer{{{}, init}};
  all[{}] = init;
  for (std::size_t k = 0; k < depth && !layer.empty(); ++k) {
    std::map<Trace, std::vector<Configuration>> next;
    for (const auto& [tr, cs] : layer) {
      for (std::size_t t = 0; t < n; ++t) {
        // the trace fixes every thread's location
        for (auto e : enabled_edges(p, cs.front().locs[t])) {
          std::set<Configuration> succ;
          for (const auto& c : cs) {
            for (auto& s : indexed_step(p, c, t, e, d)) succ.insert(std::move(s));
          }
          if (succ.empty()) continue;
          Trace nt = tr;
          nt.push_back({static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(t)});
          next.emplace(std::move(nt), std::vector<Configuration>(succ.begin(), succ.end()));
        }
      }
    }
    for (const auto& [tr, cs] : next) all.emplace(tr, cs);
    layer = std::move(next);
  }
  return all;
}

TraceSet enumerate_traces(const Program& p, const ExplorationConfig& cfg,
                          const std::optional<std::vector<std::int64_t>>& ids) {
  return enumerate_traces(p, initial_configurations(p, cfg, ids), cfg.depth, cfg.domain);
}

std::vector<Configuration> replay(const Program& p, const std::vector<Configuration>& init, const Trace& t,
                                  const Domain& d) {
  std::set<Configuration> cur(init.begin(), init.end());
  for (const auto& s : t) {
    std::set<Configuration> next;
    for (const auto& c : cur) {
      if (c.locs.at(s.thread) != p.edges.at(s.edge).src) continue;
      for (auto& n : indexed_step(p, c, s.thread, s.edge, d)) next.insert(std::move(n));
    }
    cur = std::move(next);
    if (cur.empty()) break;
  }
  return {cur.begin(), cur.end()};
}

std::set<Trace> equivalence_class(const Program& p, const Trace& t, const CommRelation& rel, ClassMode mode,
                                  const std::vector<Configuration>& init, const Domain& d) {
  std::set<Trace> seen{t};
  std::deque<Trace> work{t};
  std::map<Trace, std::vector<Configuration>> reached;
  auto prefix_states = [&](const Trace& tr, std::size_t k) -> const std::vector<Configuration>& {
    Trace pre(tr.begin(), tr.begin() + static_cast<std::ptrdiff_t>(k));
    auto it = reached.find(pre);
    if (it == reached.end()) it = reached.emplace(pre, replay(p, init, pre, d)).first;
    return it->second;
  };
  while (!work.empty()) {
    Trace cur = std::move(work.front());
    work.pop_front();
    for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
      const Step a = cur[k], b = cur[k + 1];
      if (a.thread == b.thread) continue;
      bool swap = false;
      if (mode == ClassMode::Exact) {
        swap = rel.commutes(a.edge, b.edge) && rel.commutes(b.edge, a.edge);
      } else if (const auto* v = rel.find(a.edge, b.edge)) {
        if (v->kind == CommKind::Commute) {
          swap = true;
        } else if (v->kind == CommKind::SemiCommute) {
          const auto& cs = prefix_states(cur, k);
          swap = !cs.empty() && std::all_of(cs.begin(), cs.end(), [&](const Configuration& c) {
            try {
              return std::get<bool>(eval(p, v->cond, c, a.thread, b.thread, d));
            } catch (const Blocked&) {
              return false;
            }
          });
        }
      }
      if (!swap) continue;
      Trace n = cur;
      std::swap(n[k], n[k + 1]);
      if (seen.insert(n).second) work.push_back(std::move(n));
    }
  }
  return seen;
}

std::vector<Loc> locations_after(const Program& p, std::size_t n, const Trace& t, std::size_t prefix) {
  std::vector<Loc> locs(n, p.init);
  for (std::size_t k = 0; k < prefix && k < t.size(); ++k) locs.at(t[k].thread) = p.edges.at(t[k].edge).dst;
  return locs;
}

bool lex_less(const Program& p, const LocRelation& r, const std::vector<std::int64_t>& ids, const Trace& a,
              const Trace& b) {
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  if (k == a.size() || k == b.size()) return a.size() < b.size();
  if (a[k].thread == b[k].thread) return a[k].edge < b[k].edge;
  auto order = order_threads(r, locations_after(p, ids.size(), a, k), ids);
  auto pos = [&](std::size_t t) { return std::find(order.begin(), order.end(), t) - order.begin(); };
  return pos(a[k].thread) < pos(b[k].thread);
}

Trace lex_min(const Program& p, const std::set<Trace>& cls, const LocRelation& r, const std::vector<std::int64_t>& ids) {
  if (cls.empty()) throw OracleError("lex_min of an empty class");
  Trace best = *cls.begin();
  for (const auto& t : cls) {
    if (lex_less(p, r, ids, t, best)) best = t;
  }
  return best;
}

bool branch_shaped(const Program& p) {
  for (Loc l = 0; l < p.locations.size(); ++l) {
    auto es = enabled(p, l);
    if (es.size() <= 1) continue;
    if (es.size() != 2) return false;
    auto is_assume = [](const Statement& s) { return s.kind() == StmtKind::Assume; };
    if (!is_assume(es[0]) || !is_assume(es[1])) return false;
    if (!(es[0].expr() == mk_not(es[1].expr())) && !(es[1].expr() == mk_not(es[0].expr()))) return false;
  }
  return true;
}

bool ReductionReport::ok(char check) const {
  return std::none_of(violations.begin(), violations.end(), [&](const ReductionViolation& v) { return v.check == check; });
}

ReductionReport check_reduction(const Program& p, const LocRelation& r, const CommRelation& rel,
                                const ExplorationConfig& cfg) {
  constexpr std::size_t kMaxPerCheck = 20;
  ReductionReport rep;
  for (const auto& [key, v] : rel.entries()) {
    if (v.kind == CommKind::SemiCommute) rep.mode = ClassMode::Covering;
  }
  rep.minimality_checked = rep.mode == ClassMode::Exact && branch_shaped(p);
  std::map<char, std::size_t> counts;
  auto report = [&](char check, const std::vector<std::int64_t>& ids, const Trace& w, std::string msg) {
    if (counts[check]++ < kMaxPerCheck) rep.violations.push_back({check, ids, w, std::move(msg)});
  };

  const auto ip = sleep_instrument(p, r, rel);
  const auto init = initial_configurations(p, cfg);
  const auto orig = enumerate_traces(p, init, cfg.depth, cfg.domain);
  rep.original_traces = orig.size();

  // exact classes partition the feasible traces
  std::vector<std::set<Trace>> classes;
  if (rep.mode == ClassMode::Exact) {
    std::set<Trace> done;
    for (const auto& [t, cs] : orig) {
      if (done.count(t)) continue;
      auto cls = equivalence_class(p, t, rel, ClassMode::Exact);
      done.insert(cls.begin(), cls.end());
      classes.push_back(std::move(cls));
    }
    rep.classes = classes.size();
  }

  const auto assignments = id_assignments(cfg);
  rep.id_assignments = assignments.size();
  for (const auto& ids : assignments) {
    const auto inst = enumerate_traces(ip.program, cfg, ids);
    rep.instrumented_traces += inst.size();
    std::set<Trace> erased;
    for (const auto& [t, cs] : inst) erased.insert(erase(ip, t));
    if (&ids == &assignments.front()) {
      for (const auto& t : erased) {
        if (rep.representatives.size() >= 1000) break;
        rep.representatives.push_back(t);
      }
    }

    for (const auto& t : erased) {
      if (!orig.count(t)) report('a', ids, t, "erased instrumented trace is infeasible in the original program");
    }
    if (rep.mode == ClassMode::Exact) {
      for (const auto& cls : classes) {
        std::vector<Trace> reps;
        for (const auto& t : cls) {
          if (erased.count(t)) reps.push_back(t);
        }
        if (reps.empty()) {
          report('b', ids, *cls.begin(), "no instrumented trace in the class");
        } else if (reps.size() > 1 && rep.minimality_checked) {
          report('c', ids, reps[1], std::to_string(reps.size()) + " representatives in one class");
        } else if (reps.size() == 1 && reps.front() != lex_min(p, cls, r, ids)) {
          ++rep.not_lex_min;
        }
      }
    } else {
      for (const auto& [t, cs] : orig) {
        auto cls = equivalence_class(p, t, rel, ClassMode::Covering, init, cfg.domain);
        if (std::none_of(cls.begin(), cls.end(), [&](const Trace& c) { return erased.count(c) > 0; })) {
          report('b', ids, t, "no instrumented trace covers this trace");
        }
      }
    }
  }
  return rep;
}

SafetyResult bounded_safety(const Program& p, const ExplorationConfig& cfg) {
  SafetyResult res;
  const bool inst = instrumented(p);
  std::vector<std::optional<std::vector<std::int64_t>>> runs;
  if (inst) {
    for (auto& ids : id_assignments(cfg)) runs.emplace_back(std::move(ids));
  } else {
    runs.emplace_back(std::nullopt);
  }
  for (const auto& ids : runs) {
    struct Node {
      std::size_t parent;
      Step step;
      std::size_t depth;
    };
    std::map<Configuration, std::size_t> index;
    std::vector<Node> nodes;
    std::vector<const Configuration*> confs;
    std::deque<std::size_t> work;
    auto violated = [&](const Configuration& c) -> std::optional<std::size_t> {
      for (std::size_t j = 0; j < c.locs.size(); ++j) {
        auto it = p.asserts.find(c.locs[j]);
        if (it == p.asserts.end()) continue;
        try {
          if (!holds(p, it->second, c, j, cfg.domain)) return j;
        } catch (const Blocked&) {
        }
      }
      return std::nullopt;
    };
    auto trace_to = [&](std::size_t i) {
      Trace t;
      while (nodes[i].parent != i) {
        t.push_back(nodes[i].step);
        i = nodes[i].parent;
      }
      std::reverse(t.begin(), t.end());
      return t;
    };
    auto add = [&](Configuration c, std::size_t parent, Step s, std::size_t depth) -> std::optional<std::size_t> {
      auto [it, fresh] = index.emplace(std::move(c), nodes.size());
      if (!fresh) return std::nullopt;
      const std::size_t id = nodes.size();
      nodes.push_back({parent == SIZE_MAX ? id : parent, s, depth});
      confs.push_back(&it->first);
      work.push_back(id);
      return id;
    };
    auto fail = [&](std::size_t node, std::size_t thread) {
      res.ok = false;
      res.counterexample = trace_to(node);
      res.thread = thread;
      res.ids = ids.value_or(std::vector<std::int64_t>{});
      res.explored += nodes.size();
      return res;
    };
    for (auto& c : initial_configurations(p, cfg, ids)) {
      if (auto id = add(std::move(c), SIZE_MAX, {}, 0)) {
        if (auto j = violated(*confs[*id])) return fail(*id, *j);
      }
    }
    while (!work.empty()) {
      const std::size_t cur = work.front();
      work.pop_front();
      if (nodes[cur].depth >= cfg.depth) continue;
      const Configuration c = *confs[cur];
      for (std::size_t t = 0; t < c.locs.size(); ++t) {
        for (auto e : enabled_edges(p, c.locs[t])) {
          for (auto& s : indexed_step(p, c, t, e, cfg.domain)) {
            Step st{static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(t)};
            if (auto id = add(std::move(s), cur, st, nodes[cur].depth + 1)) {
              if (auto j = violated(*confs[*id])) return fail(*id, *j);
            }
          }
        }
      }
    }
    res.explored += nodes.size();
  }
  return res;
}

}  // namespace parared
