#pragma once

// Reference implementations that share no code with the evaluator's fixed-point
// engine or its quantifier handling. Used by the unit tests, the acceptance
// runner and `check`.

#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include "idxlog/evaluator.hpp"

namespace idxlog::oracle {

/// Direct recursive reading of the semantics for fixpoint-free core formulas.
/// Environments are plain maps copied at each binder.
class NaiveEvaluator {
 public:
  explicit NaiveEvaluator(const Structure& s) : s_(s), m_(s.num_bound()) {}

  using Env = std::map<std::string, std::uint64_t>;

  bool holds(const FormulaPtr& f, const Env& v = {}, const Env& n = {}) const {
    switch (f->kind) {
      case FKind::LeqV: return term(f->terms[0], v) <= term(f->terms[1], v);
      case FKind::EqV: return term(f->terms[0], v) == term(f->terms[1], v);
      case FKind::LeqN: return n.at(f->vars[0]) <= n.at(f->vars[1]);
      case FKind::EqN: return n.at(f->vars[0]) == n.at(f->vars[1]);
      case FKind::Rel: {
        Tuple t;
        for (const auto& a : f->terms) t.push_back(static_cast<Elem>(term(a, v)));
        return s_.holds(f->name, t);
      }
      case FKind::Not: return !holds(f->subs[0], v, n);
      case FKind::And: return holds(f->subs[0], v, n) && holds(f->subs[1], v, n);
      case FKind::Or: return holds(f->subs[0], v, n) || holds(f->subs[1], v, n);
      case FKind::Implies: return !holds(f->subs[0], v, n) || holds(f->subs[1], v, n);
      case FKind::Iff: return holds(f->subs[0], v, n) == holds(f->subs[1], v, n);
      case FKind::ExistsN:
      case FKind::ForallN: {
        const bool want = f->kind == FKind::ExistsN;
        for (std::uint64_t i = 0; i < m_; ++i) {
          Env n2 = n;
          n2[f->vars[0]] = i;
          if (holds(f->subs[0], v, n2) == want) return want;
        }
        return !want;
      }
      case FKind::IndexEq: {
        // val(t) in binary is b_{m-1} ... b_0 with b_j set iff the body holds at j
        const std::uint64_t t = term(f->terms[0], v);
        for (std::uint64_t j = 0; j < m_; ++j) {
          Env n2 = n;
          n2[f->vars[0]] = j;
          if (((t >> j) & 1) != static_cast<std::uint64_t>(holds(f->subs[0], v, n2))) return false;
        }
        return (t >> m_) == 0;
      }
      case FKind::GuardedExists: {
        // some domain element i both equals the index term and satisfies the body
        for (std::uint64_t i = 0; i < s_.size(); ++i) {
          Env v2 = v;
          v2[f->vars[0]] = i;
          auto guard = std::make_shared<Formula>();
          guard->kind = FKind::IndexEq;
          guard->terms = {vvar(f->vars[0])};
          guard->vars = {f->vars[1]};
          guard->subs = {f->subs[0]};
          if (holds(guard, v2, n) && holds(f->subs[1], v2, n)) return true;
        }
        return false;
      }
      default:
        throw std::logic_error("naive evaluator: unsupported node");
    }
  }

 private:
  std::uint64_t term(const TermPtr& t, const Env& v) const {
    switch (t->kind) {
      case TermKind::VVar: return v.at(t->name);
      case TermKind::Const: return s_.constant(t->name);
      case TermKind::Func: {
        Tuple a;
        for (const auto& x : t->args) a.push_back(static_cast<Elem>(term(x, v)));
        return s_.apply(t->name, a);
      }
      default: throw std::logic_error("naive evaluator: unsupported term");
    }
  }

  const Structure& s_;
  std::uint64_t m_;
};

/// Partial fixed point of a unary operator by the counting definition: run
/// 2^|Num| stages, which is at least the number of distinct stages, and keep
/// the last stage only if it is a fixed point.
inline RelValue pfp_by_counting(const FixComponent& c, const Structure& s) {
  const unsigned m = s.num_bound();
  const PreparedFormula body(c.body, s.vocabulary());
  auto apply = [&](const RelValue& cur) {
    RelValue next = RelValue::empty(1, m);
    for (unsigned i = 0; i < m; ++i) {
      Valuation val = Valuation{}.bind_rel(c.rel, cur).bind_n(c.vars[0], i);
      next.bits[i] = eval_formula(body, s, val).value;
    }
    return next;
  };
  RelValue cur = RelValue::empty(1, m);
  for (std::uint64_t step = 0; step < (std::uint64_t{1} << m); ++step) cur = apply(cur);
  return apply(cur) == cur ? cur : RelValue::empty(1, m);
}

/// Random fixpoint-free core formulas of bounded quantifier depth over {P/1}.
class ShallowFormulas {
 public:
  explicit ShallowFormulas(std::uint64_t seed) : rng_(seed) {}

  FormulaPtr sentence(int depth) { return formula(depth, 3, {}, {}); }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  FormulaPtr formula(int qdepth, int size, std::vector<std::string> vs, std::vector<std::string> ns) {
    const int choice = pick(size > 0 ? 7 : 1);
    if (choice == 0) return atom(qdepth, vs, ns);
    switch (choice) {
      case 1: return conj(formula(qdepth, size - 1, vs, ns), formula(qdepth, size - 1, vs, ns));
      case 2: return disj(formula(qdepth, size - 1, vs, ns), formula(qdepth, size - 1, vs, ns));
      case 3: return neg(formula(qdepth, size - 1, vs, ns));
      default: break;
    }
    if (qdepth == 0) return atom(qdepth, vs, ns);
    const std::string nx = "n" + std::to_string(ns.size());
    if (choice == 4 || choice == 5) {
      auto ns2 = ns;
      ns2.push_back(nx);
      auto body = formula(qdepth - 1, size - 1, vs, ns2);
      return choice == 4 ? exists_n(nx, body) : forall_n(nx, body);
    }
    // guarded existential; the guard sees only n-variables and earlier v-variables
    const std::string x = "x" + std::to_string(vs.size());
    auto ns2 = ns;
    ns2.push_back(nx);
    auto guard = formula(0, 1, vs, ns2);
    auto vs2 = vs;
    vs2.push_back(x);
    return guarded_exists(x, nx, guard, formula(qdepth - 1, size - 1, vs2, ns));
  }

  FormulaPtr atom(int, const std::vector<std::string>& vs, const std::vector<std::string>& ns) {
    const int k = pick(4);
    if (k == 0 && !vs.empty()) return rel("P", {vvar(vs[pick(static_cast<int>(vs.size()))])});
    if (k == 1 && vs.size() >= 1) {
      auto a = vvar(vs[pick(static_cast<int>(vs.size()))]), b = vvar(vs[pick(static_cast<int>(vs.size()))]);
      return pick(2) ? leq(a, b) : eq(a, b);
    }
    if (k == 2 && !ns.empty()) {
      auto a = ns[pick(static_cast<int>(ns.size()))], b = ns[pick(static_cast<int>(ns.size()))];
      return pick(2) ? nleq(a, b) : neq(a, b);
    }
    if (!vs.empty() && !ns.empty() && pick(2)) {
      const auto nx = ns[pick(static_cast<int>(ns.size()))];
      return index_eq(vvar(vs[pick(static_cast<int>(vs.size()))]), "b",
                      pick(2) ? nleq("b", nx) : neq("b", nx));
    }
    return pick(2) ? truth() : falsity();
  }

  std::mt19937_64 rng_;
};

}  // namespace idxlog::oracle
