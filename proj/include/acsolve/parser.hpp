#ifndef ACSOLVE_PARSER_HPP
#define ACSOLVE_PARSER_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "acsolve/ast.hpp"

namespace acsolve {

struct ParseError : std::runtime_error {
  int line = 0;
  int col = 0;
  ParseError(int l, int c, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(l) + ":" +
                           std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

struct ParseOptions {
  // `_V<n>` names are reserved for generated variables; dumps of rewritten
  // programs are re-parsed with this set.
  bool allowInternalNames = false;
};

Program parseProgram(const std::string& text, const ParseOptions& opts = {});

// Fact files (edb): ground atoms terminated by '.', '%' comments.
std::vector<Atom> parseFacts(const std::string& text);

}  // namespace acsolve

#endif
