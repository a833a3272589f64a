#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "idxlog/ast.hpp"
#include "idxlog/machines.hpp"
#include "idxlog/structure.hpp"

namespace idxlog {

class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- Order on domain terms

/// Removes every <= between domain terms. Each domain variable x is bound by a
/// unique guard x = index{#a : alpha}; x <= y becomes EQSH(alpha_x, alpha_y) |
/// LTSH(alpha_x, alpha_y) and x = index{#b : theta} becomes EQSH(alpha_x, theta).
/// Macros are expanded first, since some of them compare domain terms. Input
/// without such comparisons is returned as is.
FormulaPtr eliminate_order(const FormulaPtr& f, const Vocabulary& v);

/// True iff the macro expansion of f still compares domain terms with <=.
bool compares_domain_terms(const FormulaPtr& f);

// ---------------------------------------------------------------- Constants

struct ConstantElimination {
  FormulaPtr sentence;
  Vocabulary vocabulary;                        // one unary relation per constant
  std::map<std::string, std::string> relation;  // constant -> relation name
};

/// c = d -> FALSE, c = c -> TRUE, c = x -> C(x),
/// c = index{#i : theta} -> EX z = index{#i : theta*}. C(z); homomorphic elsewhere.
ConstantElimination eliminate_constants(const FormulaPtr& f, const Vocabulary& v);

/// The structure over the unary vocabulary in which each C is the singleton {c}.
Structure singleton_structure(const Structure& s, const ConstantElimination& e);

// ---------------------------------------------------------------- Machine compilers

struct CompilationArtifact {
  FormulaPtr sentence;
  /// relation variable -> machine component, in declaration order
  std::vector<std::pair<std::string, std::string>> symbols;
  unsigned k = 0;           // time-tuple width (IFP only)
  unsigned width = 0;       // tape-position tuple width
  std::size_t nodes = 0;

  std::string symbol_table() const;  // one "name<TAB>component" line per entry
};

/// Simultaneous IFP whose stages build the run time step by time step. Times
/// and tape positions are k-tuples of bit positions, so the sentence follows
/// the run for ceil(log n)^k steps; a configuration that accepts one step later
/// is also detected. Tape positions beyond ceil(log n)^k do not exist in the
/// formula.
CompilationArtifact compile_dam_to_ifp_sentence(const MachineSpec& m, unsigned k);

/// Simultaneous PFP over time-free relations; the stage sequence is the run.
/// Tape positions are `width`-tuples. The machine must freeze on acceptance
/// (see normalize_machine_for_pfp).
CompilationArtifact compile_dam_to_pfp_sentence(const MachineSpec& m, unsigned width = 1);

}  // namespace idxlog
