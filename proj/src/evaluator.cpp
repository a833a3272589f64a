#include "idxlog/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

namespace idxlog {

// ---------------------------------------------------------------- RelValue

RelValue RelValue::empty(unsigned arity, unsigned num) {
  RelValue r;
  r.arity = arity;
  r.bits.assign(checked_pow(num, arity), false);
  return r;
}

bool RelValue::contains(std::span<const Elem> t, unsigned num) const {
  if (t.size() != arity) throw EvalError("relation value of arity " + std::to_string(arity) + " applied to " +
                                         std::to_string(t.size()) + " arguments");
  return bits[lex_rank(t, arity, num)];
}

std::size_t RelValue::count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true)); }

bool RelValue::subset_of(const RelValue& o) const {
  if (bits.size() != o.bits.size()) return false;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] && !o.bits[i]) return false;
  return true;
}

// ---------------------------------------------------------------- Valuation

Valuation Valuation::bind(Node node) const {
  node.next = head_;
  Valuation out;
  out.head_ = std::make_shared<const Node>(std::move(node));
  return out;
}

Valuation Valuation::bind_v(const std::string& name, std::uint64_t value) const {
  return bind(Node{Sort::V, name, value, nullptr, nullptr});
}

Valuation Valuation::bind_n(const std::string& name, std::uint64_t value) const {
  return bind(Node{Sort::N, name, value, nullptr, nullptr});
}

Valuation Valuation::bind_rel(const std::string& name, std::shared_ptr<const RelValue> value) const {
  return bind(Node{Sort::Rel, name, 0, std::move(value), nullptr});
}

Valuation Valuation::bind_rel(const std::string& name, RelValue value) const {
  return bind_rel(name, std::make_shared<const RelValue>(std::move(value)));
}

const Valuation::Node* Valuation::find(Sort sort, const std::string& name) const {
  for (const Node* p = head_.get(); p; p = p->next.get())
    if (p->sort == sort && p->name == name) return p;
  return nullptr;
}

std::optional<std::uint64_t> Valuation::v(const std::string& name) const {
  if (const Node* p = find(Sort::V, name)) return p->value;
  return std::nullopt;
}

std::optional<std::uint64_t> Valuation::n(const std::string& name) const {
  if (const Node* p = find(Sort::N, name)) return p->value;
  return std::nullopt;
}

const RelValue* Valuation::rel(const std::string& name) const {
  const Node* p = find(Sort::Rel, name);
  return p ? p->rel.get() : nullptr;
}

void Valuation::check_ranges(const Structure& s) const {
  for (const Node* p = head_.get(); p; p = p->next.get()) {
    switch (p->sort) {
      case Sort::V:
        if (p->value >= s.size())
          throw EvalError("value " + std::to_string(p->value) + " of " + p->name + " is outside the domain");
        break;
      case Sort::N:
        if (p->value >= s.num_bound())
          throw EvalError("value " + std::to_string(p->value) + " of #" + p->name + " is outside Num(A)");
        break;
      case Sort::Rel:
        if (p->rel->bits.size() != checked_pow(s.num_bound(), p->rel->arity))
          throw EvalError("relation value of " + p->name + " has the wrong size for this structure");
        break;
    }
  }
}

// ---------------------------------------------------------------- CostReport

std::string CostReport::summary() const {
  std::ostringstream out;
  out << "atomic=" << atomic << " terms=" << terms << " probes=" << probes << " stages=" << stages
      << " lookups=" << lookups << " lookup_weight=" << lookup_weight << " cache_hits=" << cache_hits
      << " aggregate=" << aggregate();
  return out.str();
}

std::string to_string(FixpointEnd e) {
  switch (e) {
    case FixpointEnd::FixedPoint: return "fixed-point";
    case FixpointEnd::CycleDetected: return "cycle-detected";
    case FixpointEnd::StageBound: return "stage-bound";
  }
  return "?";
}

// ---------------------------------------------------------------- Evaluator

namespace {

struct Params {
  std::vector<std::string> v, n, rel;
};

class Evaluator {
 public:
  Evaluator(const Structure& s, const EvalOptions& opt) : s_(s), opt_(opt), num_(s.num_bound()) {}

  CostReport cost;

  std::uint64_t term(const Term& t, const Valuation& val) {
    ++cost.terms;
    switch (t.kind) {
      case TermKind::VVar:
        if (auto x = val.v(t.name)) return *x;
        throw EvalError("unbound variable " + t.name);
      case TermKind::NVar:
        if (auto x = val.n(t.name)) return *x;
        throw EvalError("unbound variable #" + t.name);
      case TermKind::Const:
        return s_.constant(symbol(t.name, SymbolKind::Constant));
      case TermKind::Func: {
        const int idx = symbol(t.name, SymbolKind::Function);
        Tuple args;
        args.reserve(t.args.size());
        for (const auto& a : t.args) args.push_back(static_cast<Elem>(term(*a, val)));
        ++cost.lookups;
        cost.lookup_weight += args.size() * num_;
        return s_.apply(idx, args);
      }
    }
    return 0;
  }

  std::uint64_t index_number(const Formula& f, const std::string& x, const Valuation& val) {
    std::uint64_t r = 0;
    for (unsigned j = 0; j < num_; ++j) {
      ++cost.probes;
      if (formula(f, val.bind_n(x, j))) r |= std::uint64_t{1} << j;
    }
    return r;
  }

  bool formula(const Formula& f, const Valuation& val) {
    switch (f.kind) {
      case FKind::LeqV:
        ++cost.atomic;
        return term(*f.terms[0], val) <= term(*f.terms[1], val);
      case FKind::EqV:
        ++cost.atomic;
        return term(*f.terms[0], val) == term(*f.terms[1], val);
      case FKind::LeqN:
        ++cost.atomic;
        return nvar(f.vars[0], val) <= nvar(f.vars[1], val);
      case FKind::EqN:
        ++cost.atomic;
        return nvar(f.vars[0], val) == nvar(f.vars[1], val);
      case FKind::Rel: {
        ++cost.atomic;
        const int idx = symbol(f.name, SymbolKind::Relation);
        Tuple args;
        args.reserve(f.terms.size());
        for (const auto& t : f.terms) args.push_back(static_cast<Elem>(term(*t, val)));
        ++cost.lookups;
        cost.lookup_weight += args.size() * num_;
        return s_.holds(idx, args);
      }
      case FKind::RelVar: {
        ++cost.atomic;
        const RelValue* r = val.rel(f.name);
        if (!r) throw EvalError("unbound relation variable " + f.name);
        Tuple t;
        t.reserve(f.vars.size());
        for (const auto& x : f.vars) t.push_back(static_cast<Elem>(nvar(x, val)));
        return r->contains(t, num_);
      }
      case FKind::And:
        return formula(*f.subs[0], val) && formula(*f.subs[1], val);
      case FKind::Or:
        return formula(*f.subs[0], val) || formula(*f.subs[1], val);
      case FKind::Implies:
        return !formula(*f.subs[0], val) || formula(*f.subs[1], val);
      case FKind::Iff:
        return formula(*f.subs[0], val) == formula(*f.subs[1], val);
      case FKind::Not:
        return !formula(*f.subs[0], val);
      case FKind::ExistsN:
        for (unsigned j = 0; j < num_; ++j)
          if (formula(*f.subs[0], val.bind_n(f.vars[0], j))) return true;
        return false;
      case FKind::ForallN:
        for (unsigned j = 0; j < num_; ++j)
          if (!formula(*f.subs[0], val.bind_n(f.vars[0], j))) return false;
        return true;
      case FKind::IndexEq: {
        ++cost.atomic;
        const std::uint64_t t = term(*f.terms[0], val);
        return t == index_number(*f.subs[0], f.vars[0], val);
      }
      case FKind::GuardedExists: {
        const std::uint64_t i = index_number(*f.subs[0], f.vars[1], val);
        if (i >= s_.size()) return false;
        return formula(*f.subs[1], val.bind_v(f.vars[0], i));
      }
      case FKind::Fixpoint: {
        ++cost.atomic;
        const Stage& st = cached_fixpoint(f, val);
        Tuple t;
        for (const auto& x : f.vars) t.push_back(static_cast<Elem>(nvar(x, val)));
        return st[0].contains(t, num_);
      }
      case FKind::Macro:
        throw EvalError("macro " + f.name + " must be expanded before evaluation");
    }
    return false;
  }

  Stage fixpoint(FpKind kind, const std::vector<FixComponent>& comps, const Valuation& val, FixpointTrace* trace) {
    const bool partial = is_partial(kind);
    // LFP runs the plain iteration S^{i+1} = F(S^i); on a monotone operator it
    // climbs to the least fixed point, and a shrinking stage exposes a
    // non-monotone body.
    const bool least = kind == FpKind::LFP || kind == FpKind::SLFP;
    const bool inflationary = !partial && !least;
    Stage cur;
    for (const auto& c : comps) cur.push_back(RelValue::empty(static_cast<unsigned>(c.vars.size()), num_));
    const Stage empty = cur;
    if (trace) trace->stages.push_back(cur);

    std::vector<Stage> history;
    std::uint64_t stored_bits = 0;
    auto remember = [&](const Stage& st) {
      for (const auto& r : st) stored_bits += r.bits.size();
      if (stored_bits > opt_.max_stored_bits)
        throw ResourceError("fixed-point stage snapshots exceed " + std::to_string(opt_.max_stored_bits) + " bits");
      history.push_back(st);
    };
    if (partial && opt_.cycle_detection) remember(cur);

    std::uint64_t count = 0;
    FixpointEnd end = FixpointEnd::FixedPoint;
    for (;;) {
      ++cost.stages;
      Valuation base = val;
      for (std::size_t i = 0; i < comps.size(); ++i) base = base.bind_rel(comps[i].rel, cur[i]);
      Stage next = inflationary ? cur : empty;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const auto& c = comps[i];
        const unsigned k = static_cast<unsigned>(c.vars.size());
        for (std::uint64_t rank = 0; rank < next[i].bits.size(); ++rank) {
          if (inflationary && cur[i].bits[rank]) continue;
          const Tuple t = lex_unrank(rank, k, num_);
          Valuation inner = base;
          for (unsigned j = 0; j < k; ++j) inner = inner.bind_n(c.vars[j], t[j]);
          if (formula(*c.body, inner)) next[i].bits[rank] = true;
        }
      }
      if (next == cur) break;
      if (least)
        for (std::size_t i = 0; i < comps.size(); ++i)
          if (!cur[i].subset_of(next[i]))
            throw EvalError("least fixed point of " + comps[i].rel + " is applied to a non-monotone operator");
      if (partial) {
        if (opt_.cycle_detection) {
          if (std::find(history.begin(), history.end(), next) != history.end()) {
            end = FixpointEnd::CycleDetected;
            cur = empty;
            break;
          }
          remember(next);
        } else if (++count > opt_.max_stages) {
          throw ResourceError("partial fixed point did not settle within " + std::to_string(opt_.max_stages) +
                              " stages");
        }
      }
      cur = std::move(next);
      if (trace) trace->stages.push_back(cur);
    }
    if (trace) {
      trace->end = end;
      trace->result = cur;
    }
    return cur;
  }

 private:
  std::uint64_t nvar(const std::string& x, const Valuation& val) const {
    if (auto v = val.n(x)) return *v;
    throw EvalError("unbound variable #" + x);
  }

  int symbol(const std::string& name, SymbolKind kind) const {
    const int idx = s_.vocabulary().index_of(name);
    if (idx < 0 || s_.vocabulary().symbols()[idx].kind != kind)
      throw EvalError("structure has no symbol " + name + " of the expected kind");
    return idx;
  }

  const Params& params_of(const Formula& f) {
    auto it = params_.find(&f);
    if (it != params_.end()) return it->second;
    std::set<std::string> v, n, rel, bound_rel;
    for (const auto& c : f.components) bound_rel.insert(c.rel);
    for (const auto& c : f.components) {
      FreeVars fv = free_variables(c.body);
      v.insert(fv.v.begin(), fv.v.end());
      for (const auto& x : fv.n)
        if (std::find(c.vars.begin(), c.vars.end(), x) == c.vars.end()) n.insert(x);
      for (const auto& r : fv.rel)
        if (!bound_rel.count(r)) rel.insert(r);
    }
    Params p{{v.begin(), v.end()}, {n.begin(), n.end()}, {rel.begin(), rel.end()}};
    return params_.emplace(&f, std::move(p)).first->second;
  }

  const Stage& cached_fixpoint(const Formula& f, const Valuation& val) {
    if (!opt_.cache_fixpoints) {
      scratch_ = fixpoint(f.fp, f.components, val, nullptr);
      return scratch_;
    }
    const Params& p = params_of(f);
    std::vector<std::uint64_t> key;
    for (const auto& x : p.v) {
      auto v = val.v(x);
      if (!v) throw EvalError("unbound variable " + x);
      key.push_back(*v);
    }
    for (const auto& x : p.n) key.push_back(nvar(x, val));
    for (const auto& r : p.rel) {
      const RelValue* rv = val.rel(r);
      if (!rv) throw EvalError("unbound relation variable " + r);
      key.push_back(rv->arity);
      std::uint64_t word = 0;
      for (std::size_t i = 0; i < rv->bits.size(); ++i) {
        if (rv->bits[i]) word |= std::uint64_t{1} << (i % 64);
        if (i % 64 == 63) {
          key.push_back(word);
          word = 0;
        }
      }
      key.push_back(word);
    }
    auto& slot = cache_[&f];
    auto it = slot.find(key);
    if (it != slot.end()) {
      ++cost.cache_hits;
      return it->second;
    }
    Stage st = fixpoint(f.fp, f.components, val, nullptr);
    return slot.emplace(std::move(key), std::move(st)).first->second;
  }

  const Structure& s_;
  EvalOptions opt_;
  unsigned num_;
  std::unordered_map<const Formula*, Params> params_;
  std::unordered_map<const Formula*, std::map<std::vector<std::uint64_t>, Stage>> cache_;
  Stage scratch_;
};

void require_symbols(const Vocabulary& need, const Structure& s) {
  for (const auto& sym : need.symbols()) {
    const Symbol* have = s.vocabulary().find(sym.name);
    if (!have || !(*have == sym))
      throw EvalError("structure vocabulary lacks " + sym.name + " with the formula's kind and arity");
  }
}

}  // namespace

PreparedFormula::PreparedFormula(const FormulaPtr& f, const Vocabulary& v) : source_(f), vocab_(v) {
  auto errs = check_well_formed(f, v);
  if (!errs.empty()) throw IllFormed(std::move(errs));
  core_ = expand_macros(f);
  free_ = free_variables(core_);
}

std::uint64_t eval_term(const TermPtr& t, const Structure& s, const Valuation& val) {
  Evaluator ev(s, EvalOptions{});
  return ev.term(*t, val);
}

std::uint64_t eval_index_number(const FormulaPtr& f, const std::string& x, const Structure& s, const Valuation& val) {
  Evaluator ev(s, EvalOptions{});
  return ev.index_number(*expand_macros(f), x, val);
}

EvalResult eval_formula(const PreparedFormula& f, const Structure& s, const Valuation& val, const EvalOptions& opt) {
  require_symbols(f.vocabulary(), s);
  val.check_ranges(s);
  for (const auto& x : f.free().v)
    if (!val.v(x)) throw EvalError("unbound variable " + x);
  for (const auto& x : f.free().n)
    if (!val.n(x)) throw EvalError("unbound variable #" + x);
  for (const auto& x : f.free().rel)
    if (!val.rel(x)) throw EvalError("unbound relation variable " + x);
  Evaluator ev(s, opt);
  EvalResult r;
  r.value = ev.formula(*f.core(), val);
  r.cost = ev.cost;
  return r;
}

EvalResult eval_formula(const FormulaPtr& f, const Structure& s, const Valuation& val, const EvalOptions& opt) {
  return eval_formula(PreparedFormula(f, s.vocabulary()), s, val, opt);
}

FixpointTrace compute_fixpoint(FpKind kind, const std::vector<FixComponent>& comps, const Structure& s,
                               const Valuation& val, const EvalOptions& opt, CostReport* cost) {
  if (comps.empty()) throw EvalError("fixed point without components");
  if (!is_simultaneous(kind) && comps.size() != 1) throw EvalError(fp_keyword(kind) + " takes one component");
  std::vector<std::string> applied;
  for (std::size_t i = 0; i < comps[0].vars.size(); ++i) applied.push_back("_applied" + std::to_string(i));
  auto errs = check_well_formed(fixpoint(kind, comps, applied), s.vocabulary());
  if (!errs.empty()) throw IllFormed(std::move(errs));

  std::vector<FixComponent> core = comps;
  for (auto& c : core) c.body = expand_macros(c.body);
  val.check_ranges(s);
  Evaluator ev(s, opt);
  FixpointTrace trace;
  ev.fixpoint(kind, core, val, &trace);
  if (cost) *cost = ev.cost;
  return trace;
}

// ---------------------------------------------------------------- Scaling

PolylogFit fit_polylog(const std::vector<std::pair<double, double>>& pts) {
  PolylogFit fit;
  if (pts.empty()) return fit;
  std::vector<double> xs, ys;
  for (const auto& [ln, steps] : pts) {
    xs.push_back(std::log(std::max(ln, 1.0)));
    ys.push_back(std::log(std::max(steps, 1.0)));
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / m;
    my += ys[i] / m;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.k = sxx > 1e-12 ? sxy / sxx : 0.0;
  fit.c = std::exp(my - fit.k * mx);
  fit.max_ratio = 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = std::exp(ys[i] - (std::log(fit.c) + fit.k * xs[i]));
    fit.max_ratio = std::max({fit.max_ratio, r, 1.0 / r});
  }
  return fit;
}

std::string ScalingTable::csv() const {
  std::ostringstream out;
  out << "n,steps,log_n,fit_residual\n";
  for (const auto& r : rows) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", r.fit_residual);
    out << r.n << "," << r.steps << "," << r.log_n << "," << buf << "\n";
  }
  return out.str();
}

ScalingTable measure_scaling(const FormulaPtr& sentence, const StructureFamily& family,
                             const std::vector<std::uint64_t>& sizes, std::uint64_t seed, unsigned samples) {
  std::vector<std::uint64_t> ns = sizes;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  ScalingTable table;
  std::mt19937_64 rng(seed);
  std::optional<PreparedFormula> prepared;
  std::vector<std::pair<double, double>> pts;
  for (auto n : ns) {
    ScalingRow row;
    row.n = n;
    for (unsigned i = 0; i < std::max(samples, 1u); ++i) {
      Structure s = family(n, rng);
      if (!prepared) prepared.emplace(sentence, s.vocabulary());
      row.steps = std::max(row.steps, eval_formula(*prepared, s).cost.aggregate());
      row.log_n = s.num_bound();
    }
    table.rows.push_back(row);
    pts.emplace_back(row.log_n, static_cast<double>(row.steps));
  }
  table.fit = fit_polylog(pts);
  for (auto& row : table.rows) {
    const double fitted = table.fit.c * std::pow(std::max<double>(row.log_n, 1.0), table.fit.k);
    row.fit_residual = static_cast<double>(std::max<std::uint64_t>(row.steps, 1)) / fitted;
  }
  return table;
}

}  // namespace idxlog
