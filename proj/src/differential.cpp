#include "idxlog/differential.hpp"

#include <random>
#include <set>
#include <sstream>

#include "idxlog/evaluator.hpp"
#include "idxlog/parser.hpp"

namespace idxlog {

std::string DifferentialReport::summary() const {
  std::ostringstream out;
  out << name << ": " << cases << " cases, " << mismatches << " mismatches";
  if (skipped) out << ", " << skipped << " skipped";
  if (!note.empty()) out << "; " << note;
  if (!first_failure.empty()) out << " (first: " << first_failure << ")";
  return out.str();
}

void DifferentialReport::merge(const DifferentialReport& o) {
  cases += o.cases;
  mismatches += o.mismatches;
  skipped += o.skipped;
  if (first_failure.empty()) first_failure = o.first_failure;
  if (!o.note.empty()) note += (note.empty() ? "" : "; ") + o.note;
}

void for_planned_structures(const Vocabulary& v, const SizePlan& plan,
                            const std::function<void(const Structure&)>& f) {
  std::mt19937_64 rng(plan.seed);
  for (std::uint64_t n = plan.n_min; n <= plan.n_max; ++n) {
    if (count_structures(v, n) <= plan.exhaustive_limit) {
      for_each_structure(v, n, [&](const Structure& s) {
        f(s);
        return true;
      });
    } else {
      for (std::uint64_t i = 0; i < plan.samples; ++i) f(random_structure(v, n, rng));
    }
  }
}

std::vector<DemoMachine> demo_dam_machines() {
  return {
      {"accept-immediately", make_dam_accept_immediately(), 1, 1},
      {"even-n", make_dam_even_n(), 1, 1},
      {"constant-odd", make_dam_constant_odd(), 1, 1},
      {"unary-probe-zero", make_dam_unary_probe_zero(), 1, 1},
      {"relation-probe", make_dam_relation_probe(), 1, 1},
      // the value-tape head walks to cell ceil(log n)
      {"function-probe", make_dam_function_probe(), 2, 2, 300, 12},
      {"two-cycle", make_dam_two_cycle(), 1, 1},
  };
}

namespace {

void record(DifferentialReport& rep, bool want, bool got, const Structure& s) {
  ++rep.cases;
  if (want == got) return;
  ++rep.mismatches;
  if (rep.first_failure.empty()) {
    std::ostringstream out;
    out << "expected " << (want ? "true" : "false") << " on n=" << s.size() << ": "
        << encode_structure(s).str();
    rep.first_failure = out.str();
  }
}

}  // namespace

DifferentialReport compare_compiled(const MachineSpec& m, const CompilationArtifact& a, const SizePlan& plan) {
  DifferentialReport rep;
  rep.name = a.k ? "ifp" : "pfp";
  const PreparedFormula p(a.sentence, m.vocab);
  for_planned_structures(m.vocab, plan, [&](const Structure& s) {
    const unsigned L = s.num_bound();
    bool want;
    if (a.k) {
      const std::uint64_t horizon = checked_pow(L, a.k);
      const RunResult r = dam_run(m, s, Limits{horizon, 1 << 20});
      want = r.accepted;
      if (r.halt == HaltReason::StepLimit) ++rep.skipped;
    } else {
      const RunResult r = dam_run(m, s, Limits{1 << 16, 1 << 20});
      const std::uint64_t cells = checked_pow(L, a.width);
      bool fits = true;
      for (auto sp : r.space) fits = fits && sp <= cells;
      if (!fits) {
        ++rep.skipped;
        return;
      }
      want = r.accepted;
    }
    record(rep, want, eval_formula(p, s).value, s);
  });
  return rep;
}

DifferentialReport compare_order_elimination(const FormulaPtr& f, const Vocabulary& v, const SizePlan& plan) {
  DifferentialReport rep;
  rep.name = "drop-order";
  const auto g = eliminate_order(f, v);
  if (compares_domain_terms(g)) {
    rep.mismatches = 1;
    rep.first_failure = "output still compares domain terms";
    return rep;
  }
  const PreparedFormula pf(f, v), pg(g, v);
  for_planned_structures(v, plan, [&](const Structure& s) {
    record(rep, eval_formula(pf, s).value, eval_formula(pg, s).value, s);
  });
  return rep;
}

DifferentialReport compare_constant_elimination(const FormulaPtr& f, const Vocabulary& v, const SizePlan& plan) {
  DifferentialReport rep;
  rep.name = "drop-constants";
  const auto e = eliminate_constants(f, v);
  const PreparedFormula pf(f, v), pg(e.sentence, e.vocabulary);
  for_planned_structures(v, plan, [&](const Structure& s) {
    std::set<std::uint64_t> seen;
    for (const auto* c : v.of_kind(SymbolKind::Constant)) seen.insert(s.constant(c->name));
    if (seen.size() != v.of_kind(SymbolKind::Constant).size()) return;  // not disjoint singletons
    record(rep, eval_formula(pf, s).value, eval_formula(pg, singleton_structure(s, e)).value, s);
  });
  return rep;
}

}  // namespace idxlog
