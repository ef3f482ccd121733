#pragma once

#include <filesystem>
#include <string>

#include "parared/frontend.hpp"

inline parared::Program prog(const std::string& text) {
  return parared::to_program(parared::desugar_multi_template(parared::parse_program(text)));
}

inline std::filesystem::path corpus_file(const std::string& name) {
  return std::filesystem::path(PARARED_CORPUS_DIR) / (name + ".pprog");
}

inline parared::Program corpus(const std::string& name) { return parared::load_program(corpus_file(name)); }

// inc-dec with the increment guarded by x < K
inline std::string inc_dec_k(int K) {
  return "program inc-dec-k\nglobal x: int\npre x == 0\ntemplate T\ninit l0\nloc l0\nloc l1 assert x != 0\n"
         "edge inc: l0 -> l1 : atomic { assume x < " +
         std::to_string(K) + "; x := x + 1 }\nedge dec: l1 -> l0 : x := x - 1\n";
}
