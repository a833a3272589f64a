#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "idxlog/ast.hpp"
#include "idxlog/structure.hpp"

namespace idxlog {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A budget (stages or stored stage bits) ran out.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Value of a relation variable: a subset of Num(A)^arity stored as a bitset
/// indexed by lex_rank with base |Num(A)|.
struct RelValue {
  unsigned arity = 0;
  std::vector<bool> bits;

  static RelValue empty(unsigned arity, unsigned num);
  bool contains(std::span<const Elem> t, unsigned num) const;
  std::size_t count() const;
  bool subset_of(const RelValue& o) const;
  bool operator==(const RelValue&) const = default;
};

/// Persistent variable assignment. Binding returns a new view and never
/// changes the receiver, so quantifier loops can backtrack for free.
class Valuation {
 public:
  Valuation bind_v(const std::string& name, std::uint64_t value) const;
  Valuation bind_n(const std::string& name, std::uint64_t value) const;
  Valuation bind_rel(const std::string& name, std::shared_ptr<const RelValue> value) const;
  Valuation bind_rel(const std::string& name, RelValue value) const;

  std::optional<std::uint64_t> v(const std::string& name) const;
  std::optional<std::uint64_t> n(const std::string& name) const;
  const RelValue* rel(const std::string& name) const;

  /// Throws EvalError when a bound value is outside its sort's range over s.
  void check_ranges(const Structure& s) const;

 private:
  enum class Sort { V, N, Rel };
  struct Node {
    Sort sort;
    std::string name;
    std::uint64_t value = 0;
    std::shared_ptr<const RelValue> rel;
    std::shared_ptr<const Node> next;
  };
  Valuation bind(Node node) const;
  const Node* find(Sort sort, const std::string& name) const;

  std::shared_ptr<const Node> head_;
};

/// Abstract step counters. The aggregate mirrors a machine that keeps every
/// variable on its own work tape:
///   aggregate = atomic + terms + probes + stages + lookup_weight
/// where a relation or function lookup of arity k adds k * ceil(log n) to
/// lookup_weight (writing k addresses), an index-bit probe adds 1 on top of its
/// subformula, and a fixed-point stage adds 1 on top of its member checks.
struct CostReport {
  std::uint64_t atomic = 0;
  std::uint64_t terms = 0;
  std::uint64_t probes = 0;
  std::uint64_t stages = 0;
  std::uint64_t lookups = 0;
  std::uint64_t lookup_weight = 0;
  std::uint64_t cache_hits = 0;  // fixed points answered from cache, not counted

  std::uint64_t aggregate() const { return atomic + terms + probes + stages + lookup_weight; }
  std::string summary() const;
};

enum class FixpointEnd { FixedPoint, CycleDetected, StageBound };
std::string to_string(FixpointEnd e);

/// One stage holds one relation per component.
using Stage = std::vector<RelValue>;

struct FixpointTrace {
  std::vector<Stage> stages;  // S^0 = all empty, then one entry per iteration
  FixpointEnd end = FixpointEnd::FixedPoint;
  Stage result;               // the fixed point, or all empty for a divergent PFP
};

struct EvalOptions {
  bool cycle_detection = true;
  bool cache_fixpoints = true;
  std::uint64_t max_stages = 1u << 20;          // only binding for PFP without cycle detection
  std::uint64_t max_stored_bits = 1ull << 28;   // PFP stage snapshots
};

/// A formula expanded to core connectives and checked against a vocabulary.
/// Preparing once and evaluating on many structures avoids repeating both.
class PreparedFormula {
 public:
  PreparedFormula(const FormulaPtr& f, const Vocabulary& v);
  const FormulaPtr& source() const { return source_; }
  const FormulaPtr& core() const { return core_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const FreeVars& free() const { return free_; }

 private:
  FormulaPtr source_, core_;
  Vocabulary vocab_;
  FreeVars free_;
};

struct EvalResult {
  bool value = false;
  CostReport cost;
};

std::uint64_t eval_term(const TermPtr& t, const Structure& s, const Valuation& val);

/// Sum of 2^j over the positions j in Num(A) where f holds with x = j.
std::uint64_t eval_index_number(const FormulaPtr& f, const std::string& x, const Structure& s,
                                const Valuation& val = {});

EvalResult eval_formula(const PreparedFormula& f, const Structure& s, const Valuation& val = {},
                        const EvalOptions& opt = {});
EvalResult eval_formula(const FormulaPtr& f, const Structure& s, const Valuation& val = {},
                        const EvalOptions& opt = {});

/// Iterates the fixed point of the given components and records every stage.
/// Simultaneous kinds update all components from the previous stage.
FixpointTrace compute_fixpoint(FpKind kind, const std::vector<FixComponent>& comps, const Structure& s,
                               const Valuation& val = {}, const EvalOptions& opt = {},
                               CostReport* cost = nullptr);

// ---------------------------------------------------------------- Scaling

using StructureFamily = std::function<Structure(std::uint64_t n, std::mt19937_64& rng)>;

struct ScalingRow {
  std::uint64_t n = 0;
  std::uint64_t steps = 0;
  unsigned log_n = 0;
  double fit_residual = 1.0;  // measured / fitted
};

struct PolylogFit {
  double c = 0;
  double k = 0;
  double max_ratio = 1.0;  // max over rows of max(measured/fitted, fitted/measured)
};

/// Least squares on log(steps) = log c + k log(log_n). With a single distinct
/// log_n the exponent is 0.
PolylogFit fit_polylog(const std::vector<std::pair<double, double>>& log_n_and_steps);

struct ScalingTable {
  std::vector<ScalingRow> rows;
  PolylogFit fit;
  std::string csv() const;  // n,steps,log_n,fit_residual
};

/// Evaluates the sentence on `samples` family members per size and records the
/// largest aggregate, since the bound of interest is a worst case.
ScalingTable measure_scaling(const FormulaPtr& sentence, const StructureFamily& family,
                             const std::vector<std::uint64_t>& sizes, std::uint64_t seed = 1,
                             unsigned samples = 1);

}  // namespace idxlog
