#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "parared/ir.hpp"

namespace parared {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& msg);
  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] int col() const { return col_; }

 private:
  int line_;
  int col_;
};

struct SourceEdge {
  std::string src;
  std::string dst;
  std::string label;
  Statement st;

  friend bool operator==(const SourceEdge&, const SourceEdge&) = default;
};

struct SourceTemplate {
  std::string name;
  std::vector<VarDecl> locals;
  std::vector<std::string> locations;
  std::string init;
  std::vector<SourceEdge> edges;
  Expr pre = tru();
  std::map<std::string, Expr> asserts;

  friend bool operator==(const SourceTemplate&, const SourceTemplate&) = default;
};

struct SourceProgram {
  std::string name;
  std::vector<VarDecl> globals;
  Expr pre = tru();
  std::vector<SourceTemplate> templates;
  /// Non-fatal findings, e.g. locations whose branching is not `assume e` / `assume !e`.
  std::vector<std::string> warnings;

  friend bool operator==(const SourceProgram& a, const SourceProgram& b) {
    return a.name == b.name && a.globals == b.globals && a.pre == b.pre && a.templates == b.templates;
  }
};

/// Parses `.pprog` text. `default_name` is used when there is no `program` line.
SourceProgram parse_program(const std::string& text, const std::string& default_name = "program");
SourceProgram parse_program_file(const std::filesystem::path& path);

std::string print_program(const SourceProgram& p);

/// Merges several templates into one that starts at a fresh location and
/// picks a template through a `role` local. Single-template input is
/// returned unchanged.
SourceProgram desugar_multi_template(const SourceProgram& p);

/// Lowers a single-template program; throws ProgramError otherwise.
Program to_program(const SourceProgram& p);

/// parse + desugar + lower.
Program load_program(const std::filesystem::path& path);

/// Parses a formula in the scope of a lowered program: globals, locals
/// (optionally suffixed `[i]`/`[j]`), `pc` and location names.
Expr parse_formula(const Program& p, const std::string& text);

/// Prints a lowered program in the DSL (used for instrumented templates).
std::string print_program(const Program& p);

}  // namespace parared
