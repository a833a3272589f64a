#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "idxlog/ast.hpp"
#include "idxlog/machines.hpp"
#include "idxlog/structure.hpp"

namespace idxlog {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, SourceSpan span);
  const SourceSpan& span() const { return span_; }
  const std::string& detail() const { return detail_; }

 private:
  SourceSpan span_;
  std::string detail_;
};


/// Identifiers are resolved against v: vocabulary relations and functions,
/// constants, macro names, and otherwise relation variables / sort-v variables.
FormulaPtr parse_formula(std::string_view text, const Vocabulary& v);

/// Same, without the well-formedness pass.
FormulaPtr parse_formula_unchecked(std::string_view text, const Vocabulary& v);

std::string render_formula(const FormulaPtr& f);
std::string render_term(const TermPtr& t);

/// Line-oriented structure format; '#' starts a comment. Throws ParseError on
/// syntax errors and duplicates, InvalidStructure on invariant violations.
Structure parse_structure(std::string_view text);
std::string render_structure(const Structure& s);

/// `.tm` files: `machine ram` or `machine dam` header, declarations, then transitions.
MachineSpec parse_machine(std::string_view text);
std::string render_machine(const MachineSpec& m);

std::string read_file(const std::string& path);

}  // namespace idxlog
