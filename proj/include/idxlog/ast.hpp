#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "idxlog/structure.hpp"

namespace idxlog {

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  unsigned line = 1;
  unsigned column = 1;
};

// ---------------------------------------------------------------- Terms

enum class TermKind { VVar, Const, Func, NVar };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  std::string name;
  std::vector<TermPtr> args;  // Func only
  SourceSpan span;
};

TermPtr vvar(std::string name);
TermPtr constant(std::string name);
TermPtr func(std::string name, std::vector<TermPtr> args);
TermPtr nvar_term(std::string name);

// ---------------------------------------------------------------- Formulas

enum class FKind {
  // core
  LeqV,           // terms[0] <= terms[1]
  EqV,            // terms[0] = terms[1]
  LeqN,           // #vars[0] <= #vars[1]
  Rel,            // name(terms...)
  RelVar,         // name(#vars...)
  And,            // subs[0] & subs[1]
  Not,            // !subs[0]
  Fixpoint,       // [fp components](#vars...)
  IndexEq,        // terms[0] = index{#vars[0] : subs[0]}
  GuardedExists,  // EX vars[0] = index{#vars[1] : subs[0]}. subs[1]
  ExistsN,        // EX #vars[0]. subs[0]
  // sugar
  Or,
  Implies,
  Iff,
  ForallN,
  EqN,
  // shorthand with a fixed expansion
  Macro,
};

enum class FpKind { IFP, LFP, PFP, SIFP, SLFP, SPFP };

bool is_simultaneous(FpKind k);
bool is_partial(FpKind k);
std::string fp_keyword(FpKind k);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct FixComponent {
  std::vector<std::string> vars;
  std::string rel;
  FormulaPtr body;
};

struct MacroArg {
  enum class Kind { Term, NVar, Rel, Lambda };
  Kind kind;
  TermPtr term;                   // Term
  std::string name;               // NVar, Rel
  std::vector<std::string> vars;  // Lambda
  FormulaPtr body;                // Lambda
};

struct Formula {
  FKind kind;
  std::string name;
  std::vector<TermPtr> terms;
  std::vector<std::string> vars;
  std::vector<FormulaPtr> subs;
  FpKind fp = FpKind::IFP;
  std::vector<FixComponent> components;
  std::vector<MacroArg> margs;
  SourceSpan span;
};

// Builders. n-variable names are stored without the '#' sigil.
FormulaPtr leq(TermPtr a, TermPtr b);
FormulaPtr eq(TermPtr a, TermPtr b);
FormulaPtr nleq(std::string a, std::string b);
FormulaPtr neq(std::string a, std::string b);
FormulaPtr nlt(std::string a, std::string b);  // !(b <= a)
FormulaPtr rel(std::string name, std::vector<TermPtr> args);
FormulaPtr relvar(std::string name, std::vector<std::string> args);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr conj(std::vector<FormulaPtr> parts);  // empty -> TRUE()
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(std::vector<FormulaPtr> parts);  // empty -> FALSE()
FormulaPtr neg(FormulaPtr a);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr exists_n(std::string x, FormulaPtr body);
FormulaPtr exists_n(const std::vector<std::string>& xs, FormulaPtr body);
FormulaPtr forall_n(std::string x, FormulaPtr body);
FormulaPtr forall_n(const std::vector<std::string>& xs, FormulaPtr body);
FormulaPtr index_eq(TermPtr t, std::string x, FormulaPtr body);
FormulaPtr guarded_exists(std::string x, std::string nx, FormulaPtr guard, FormulaPtr body);
FormulaPtr fixpoint(FpKind kind, std::vector<FixComponent> comps, std::vector<std::string> applied);
FormulaPtr fixpoint(FpKind kind, std::vector<std::string> vars, std::string rel, FormulaPtr body,
                    std::vector<std::string> applied);
FormulaPtr macro(std::string name, std::vector<MacroArg> args);

MacroArg term_arg(TermPtr t);
MacroArg nvar_arg(std::string x);
MacroArg rel_arg(std::string rel);
MacroArg lambda_arg(std::vector<std::string> vars, FormulaPtr body);

// Common shorthands, all emitted as macro nodes.
FormulaPtr bit(TermPtr t, std::string x);
FormulaPtr truth();
FormulaPtr falsity();

// ---------------------------------------------------------------- Analysis

struct FreeVars {
  std::set<std::string> v;
  std::set<std::string> n;
  std::set<std::string> rel;
  bool operator==(const FreeVars&) const = default;
};

FreeVars free_variables(const FormulaPtr& f);
std::set<std::string> term_vvars(const TermPtr& t);

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);
bool structurally_equal(const TermPtr& a, const TermPtr& b);

std::size_t node_count(const FormulaPtr& f);

struct WfError {
  std::string message;
  SourceSpan span;
};

std::vector<WfError> check_well_formed(const FormulaPtr& f, const Vocabulary& v);

/// Thrown when a formula violates check_well_formed.
class IllFormed : public std::runtime_error {
 public:
  explicit IllFormed(std::vector<WfError> errors);
  const std::vector<WfError>& errors() const { return errors_; }

 private:
  std::vector<WfError> errors_;
};


/// Replaces every macro and sugar node by core connectives.
FormulaPtr expand_macros(const FormulaPtr& f);

/// Capture-avoiding substitution of free n-variable `from` by `to`.
FormulaPtr substitute_nvar(const FormulaPtr& f, const std::string& from, const std::string& to);

/// Renames bound variables so that every binder in f binds a distinct name that
/// is also distinct from every free variable.
FormulaPtr rename_apart(const FormulaPtr& f);

/// Every name used anywhere in f (all sorts, bound or free).
std::set<std::string> all_names(const FormulaPtr& f);

bool contains_macros(const FormulaPtr& f);

// ---------------------------------------------------------------- Macro catalogue

struct MacroSignature {
  std::string name;
  std::string params;  // one char per argument: T term, N n-variable, R relation; '*' = variadic N
  unsigned rel_arity = 1;
  std::string summary;
};

const std::vector<MacroSignature>& macro_catalogue();
const MacroSignature* find_macro(const std::string& name);

/// Fresh names under the reserved "_g" prefix, avoiding a given set.
class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> taken = {}) : taken_(std::move(taken)) {}
  std::string next(const std::string& hint = "g");
  void reserve(const std::set<std::string>& names) { taken_.insert(names.begin(), names.end()); }

 private:
  std::set<std::string> taken_;
  unsigned counter_ = 0;
};

}  // namespace idxlog
