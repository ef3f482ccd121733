#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "parared/chc.hpp"
#include "parared/solver.hpp"

namespace parared {

inline constexpr int kExitVerified = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNoInvariant = 10;
inline constexpr int kExitUnknown = 20;

struct CheckOptions {
  Encoding encoding = Encoding::Explicit;
  std::size_t k = 2;
  std::string order = "sequential";
  bool contextual = false;
  std::optional<std::filesystem::path> comm_file;
  std::vector<std::string> solvers{"z3"};  // more than one: portfolio
  double timeout = 300;
  std::optional<std::filesystem::path> emit_dir;
  SmtOptions smt;
};

struct RunRecord {
  std::string program;
  std::string encoding;
  std::size_t k = 0;
  std::string order;
  std::string solver;
  std::string verdict = "error";  // sat, unsat, unknown, timeout, error
  std::string validation;         // valid, invalid, inconclusive (sat only)
  double wall_time = 0;
  double solver_time = 0;
  std::size_t clauses = 0;
  std::string invariant;
  std::string stage;  // failing stage for errors
  std::string message;

  [[nodiscard]] std::string to_json() const;
  static RunRecord from_json(const std::string& line);
  [[nodiscard]] int exit_code() const;
  [[nodiscard]] std::string status() const;  // verdict as shown in tables
};

/// Commutativity relation and preference order for a check.
CommRelation comm_for(const Program& p, const CheckOptions& o, const SmtChecker& smt);

/// parse -> desugar -> commutativity -> order -> encode -> solve -> validate.
RunRecord run_check(const Program& p, const CheckOptions& o);
RunRecord run_check(const std::filesystem::path& file, const CheckOptions& o);

struct BenchEntry {
  std::string name;
  std::filesystem::path file;
  std::vector<std::size_t> widths{2};
  std::string order = "sequential";
  bool reconstructed = false;
  bool contextual = false;  // run with semi-commutativity
};

/// Reads `manifest.json` if present, otherwise lists the `.pprog` files.
std::vector<BenchEntry> load_corpus(const std::filesystem::path& dir);

struct BenchOptions {
  CheckOptions base;
  std::vector<Encoding> encodings{Encoding::Plain, Encoding::Symbolic, Encoding::Explicit};
  std::optional<std::vector<std::size_t>> widths;  // overrides the manifest
  std::optional<std::string> order;
  std::vector<std::string> only;  // program names; empty = all
  std::filesystem::path records;  // JSONL, appended to
  bool force = false;
  std::size_t jobs = 1;
};

std::vector<RunRecord> run_bench(const std::filesystem::path& corpus, const BenchOptions& o, std::ostream& log);

/// Rows program/k, one status and time column per encoding.
std::string bench_table(const std::vector<RunRecord>& records);

}  // namespace parared
