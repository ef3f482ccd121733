#include "parared/preference.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace parared {

LocRelation::LocRelation(std::vector<std::string> locations)
    : locs_(std::move(locations)), bits_(locs_.size() * locs_.size(), 0) {}

void LocRelation::add(Loc a, Loc b) { bits_.at(a * locs_.size() + b) = 1; }

bool LocRelation::contains(Loc a, Loc b) const { return bits_.at(a * locs_.size() + b) != 0; }

std::vector<std::pair<Loc, Loc>> LocRelation::pairs() const {
  std::vector<std::pair<Loc, Loc>> out;
  for (Loc a = 0; a < locs_.size(); ++a) {
    for (Loc b = 0; b < locs_.size(); ++b) {
      if (contains(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

bool LocRelation::full() const {
  return std::all_of(bits_.begin(), bits_.end(), [](char c) { return c != 0; });
}

std::optional<RelationViolation> validate_relation(const LocRelation& r) {
  const auto n = static_cast<Loc>(r.num_locations());
  const auto& names = r.locations();
  for (Loc a = 0; a < n; ++a) {
    for (Loc b = a; b < n; ++b) {
      if (!r.contains(a, b) && !r.contains(b, a)) {
        return RelationViolation{RelationViolation::NotTotal, {a, b},
                                 "not total: neither (" + names[a] + "," + names[b] + ") nor (" + names[b] + "," +
                                     names[a] + ") is in R"};
      }
    }
  }
  for (Loc a = 0; a < n; ++a) {
    for (Loc b = 0; b < n; ++b) {
      if (!r.contains(a, b)) continue;
      for (Loc c = 0; c < n; ++c) {
        if (r.contains(b, c) && !r.contains(a, c)) {
          return RelationViolation{RelationViolation::NotTransitive, {a, b, c},
                                   "not transitive: (" + names[a] + "," + names[b] + ") and (" + names[b] + "," +
                                       names[c] + ") but not (" + names[a] + "," + names[c] + ")"};
        }
      }
    }
  }
  return std::nullopt;
}

LocRelation sequential_order(const Program& p) {
  LocRelation r(p.locations);
  for (Loc a = 0; a < p.locations.size(); ++a) {
    for (Loc b = 0; b < p.locations.size(); ++b) r.add(a, b);
  }
  return r;
}

LocRelation lockstep_order(const Program& p) {
  const std::size_t n = p.locations.size();
  std::vector<int> depth(n, -1);
  std::deque<Loc> queue{p.init};
  depth[p.init] = 0;
  while (!queue.empty()) {
    Loc l = queue.front();
    queue.pop_front();
    for (const auto& e : p.edges) {
      if (e.src == l && depth[e.dst] < 0) {
        depth[e.dst] = depth[l] + 1;
        queue.push_back(e.dst);
      }
    }
  }
  LocRelation r(p.locations);
  for (Loc a = 0; a < n; ++a) {
    if (depth[a] < 0) throw ProgramError("lockstep order: location '" + p.locations[a] + "' is unreachable");
    for (Loc b = 0; b < n; ++b) {
      if (depth[b] >= 0 && depth[a] <= depth[b]) r.add(a, b);
    }
  }
  return r;
}

LocRelation parse_pref(const Program& p, const std::string& text) {
  LocRelation r(p.locations);
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string kw, a, b, extra;
    if (!(ls >> kw)) continue;
    if (kw != "pair" || !(ls >> a >> b) || (ls >> extra)) {
      throw ProgramError("preference file line " + std::to_string(no) + ": expected 'pair <loc> <loc>'");
    }
    auto la = p.find_loc(a);
    auto lb = p.find_loc(b);
    if (!la || !lb) {
      throw ProgramError("preference file line " + std::to_string(no) + ": unknown location '" + (la ? b : a) + "'");
    }
    r.add(*la, *lb);
  }
  return r;
}

LocRelation make_order(const Program& p, const std::string& spec) {
  LocRelation r;
  if (spec == "sequential") {
    r = sequential_order(p);
  } else if (spec == "lockstep") {
    r = lockstep_order(p);
  } else if (spec.rfind("custom:", 0) == 0) {
    const std::string path = spec.substr(7);
    std::ifstream in(path);
    if (!in) throw ProgramError("cannot open preference file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    r = parse_pref(p, ss.str());
  } else {
    throw ProgramError("unknown order '" + spec + "' (expected sequential, lockstep or custom:<path>)");
  }
  if (auto v = validate_relation(r)) throw ProgramError("invalid preference relation: " + v->message);
  return r;
}

Expr membership(const LocRelation& r, const Expr& pc_a, const Expr& pc_b) {
  const auto n = static_cast<Loc>(r.num_locations());
  const auto& names = r.locations();
  std::vector<Expr> rows;
  bool all_full = true;
  for (Loc a = 0; a < n; ++a) {
    std::vector<Expr> cols;
    for (Loc b = 0; b < n; ++b) {
      if (r.contains(a, b)) cols.push_back(eq(pc_b, loc_lit(b, names[b])));
    }
    if (cols.size() != n) all_full = false;
    if (cols.empty()) continue;
    Expr at_a = eq(pc_a, loc_lit(a, names[a]));
    rows.push_back(cols.size() == n ? at_a : at_a && mk_or(std::move(cols)));
  }
  if (all_full && n > 0) return tru();
  return mk_or(std::move(rows));
}

Expr pref_test_formula(const LocRelation& r, const Expr& pc_a, const Expr& pc_b, const Expr& id_a,
                       const Expr& id_b) {
  return membership(r, pc_a, pc_b) && implies(membership(r, pc_b, pc_a), le(id_a, id_b));
}

Expr pref_test_formula(const LocRelation& r) {
  return pref_test_formula(r, var(kPc, Sort::Int, ThreadRef::Self), var(kPc, Sort::Int, ThreadRef::Other),
                           var("id", Sort::Int, ThreadRef::Self), var("id", Sort::Int, ThreadRef::Other));
}

Expr pref_cond_explicit(const LocRelation& r, const Expr& pc_a, const Expr& pc_b, bool a_before_b) {
  Expr ab = membership(r, pc_a, pc_b);
  if (a_before_b) return ab;
  return ab && mk_not(membership(r, pc_b, pc_a));
}

Expr pref_cond_explicit(const LocRelation& r, int a, int rank, const Expr& pc_a, const Expr& pc_b) {
  return pref_cond_explicit(r, pc_a, pc_b, a < rank);
}

bool prefers(const LocRelation& r, Loc la, Loc lb, std::int64_t ida, std::int64_t idb) {
  return r.contains(la, lb) && (!r.contains(lb, la) || ida <= idb);
}

std::vector<std::size_t> order_threads(const LocRelation& r, const std::vector<Loc>& locs,
                                       const std::vector<std::int64_t>& ids) {
  if (locs.size() != ids.size()) throw ProgramError("order_threads: locations and ids differ in length");
  if (std::set<std::int64_t>(ids.begin(), ids.end()).size() != ids.size()) {
    throw ProgramError("order_threads: duplicate thread ids");
  }
  std::vector<std::size_t> order(locs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return a != b && prefers(r, locs[a], locs[b], ids[a], ids[b]);
  });
  return order;
}

}  // namespace parared
