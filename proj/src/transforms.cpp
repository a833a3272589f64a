#include "idxlog/transforms.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace idxlog {

namespace {

bool has_leqv(const FormulaPtr& f) {
  if (f->kind == FKind::LeqV) return true;
  for (const auto& s : f->subs)
    if (has_leqv(s)) return true;
  for (const auto& c : f->components)
    if (has_leqv(c.body)) return true;
  for (const auto& a : f->margs)
    if (a.body && has_leqv(a.body)) return true;
  return false;
}

FormulaPtr with_subs(const FormulaPtr& f, std::vector<FormulaPtr> subs) {
  auto out = std::make_shared<Formula>(*f);
  out->subs = std::move(subs);
  return out;
}

FormulaPtr with_bodies(const FormulaPtr& f, const std::function<FormulaPtr(const FormulaPtr&)>& map) {
  auto out = std::make_shared<Formula>(*f);
  for (auto& s : out->subs) s = map(s);
  for (auto& c : out->components) c.body = map(c.body);
  return out;
}

// ---------------------------------------------------------------- Order

class OrderEliminator {
 public:
  struct Guard {
    std::string var;
    FormulaPtr body;
  };

  FormulaPtr run(const FormulaPtr& f) { return tr(f, {}); }

 private:
  MacroArg lambda_of(const TermPtr& t, const std::map<std::string, Guard>& g) const {
    if (t->kind != TermKind::VVar) throw TransformError("order elimination: only domain variables may be compared");
    auto it = g.find(t->name);
    if (it == g.end()) throw TransformError("order elimination: variable '" + t->name + "' has no index guard");
    return lambda_arg({it->second.var}, it->second.body);
  }

  FormulaPtr tr(const FormulaPtr& f, const std::map<std::string, Guard>& g) {
    switch (f->kind) {
      case FKind::LeqV: {
        auto a = lambda_of(f->terms[0], g), b = lambda_of(f->terms[1], g);
        return disj(macro("EQSH", {a, b}), macro("LTSH", {a, b}));
      }
      case FKind::IndexEq: {
        auto theta = tr(f->subs[0], g);
        const auto& t = f->terms[0];
        if (t->kind == TermKind::VVar && g.count(t->name))
          return macro("EQSH", {lambda_of(t, g), lambda_arg({f->vars[0]}, theta)});
        return with_subs(f, {theta});
      }
      case FKind::GuardedExists: {
        auto guard = tr(f->subs[0], g);
        auto inner = g;
        inner[f->vars[0]] = Guard{f->vars[1], guard};
        return with_subs(f, {guard, tr(f->subs[1], inner)});
      }
      default:
        return with_bodies(f, [&](const FormulaPtr& s) { return tr(s, g); });
    }
  }
};

}  // namespace

bool compares_domain_terms(const FormulaPtr& f) { return has_leqv(expand_macros(f)); }

FormulaPtr eliminate_order(const FormulaPtr& f, const Vocabulary& v) {
  if (v.has_kind(SymbolKind::Constant) || v.has_kind(SymbolKind::Function))
    throw TransformError("order elimination needs a purely relational vocabulary");
  auto core = expand_macros(f);
  if (!has_leqv(core)) return f;
  if (!free_variables(core).v.empty()) throw TransformError("order elimination: the formula has free domain variables");
  return OrderEliminator{}.run(rename_apart(core));
}

// ---------------------------------------------------------------- Constants

namespace {

class ConstantEliminator {
 public:
  ConstantEliminator(const std::map<std::string, std::string>& rel, FreshNames& fresh) : rel_(rel), fresh_(fresh) {}

  FormulaPtr tr(const FormulaPtr& f) {
    switch (f->kind) {
      case FKind::EqV: {
        const auto &a = f->terms[0], &b = f->terms[1];
        check_term(a);
        check_term(b);
        const bool ca = a->kind == TermKind::Const, cb = b->kind == TermKind::Const;
        if (ca && cb) return a->name == b->name ? truth() : falsity();
        if (ca) return rel(rel_.at(a->name), {b});
        if (cb) return rel(rel_.at(b->name), {a});
        return f;
      }
      case FKind::LeqV:
        for (const auto& t : f->terms) {
          check_term(t);
          if (t->kind == TermKind::Const)
            throw TransformError("constant elimination: constant '" + t->name + "' is compared with <=");
        }
        return f;
      case FKind::IndexEq: {
        const auto& t = f->terms[0];
        check_term(t);
        auto theta = tr(f->subs[0]);
        if (t->kind == TermKind::Const) {
          const auto z = fresh_.next("z");
          return guarded_exists(z, f->vars[0], theta, rel(rel_.at(t->name), {vvar(z)}));
        }
        return with_subs(f, {theta});
      }
      case FKind::Rel:
        throw TransformError("constant elimination: relation symbol '" + f->name + "' is not allowed");
      default:
        return with_bodies(f, [&](const FormulaPtr& s) { return tr(s); });
    }
  }

 private:
  static void check_term(const TermPtr& t) {
    if (t->kind == TermKind::Func)
      throw TransformError("constant elimination: function symbol '" + t->name + "' is not allowed");
  }

  const std::map<std::string, std::string>& rel_;
  FreshNames& fresh_;
};

}  // namespace

ConstantElimination eliminate_constants(const FormulaPtr& f, const Vocabulary& v) {
  ConstantElimination out;
  std::set<std::string> taken;
  for (const auto& s : v.symbols()) {
    if (s.kind != SymbolKind::Constant)
      throw TransformError("constant elimination: vocabulary symbol '" + s.name + "' is not a constant");
    taken.insert(s.name);
  }
  for (const auto& s : v.symbols()) {
    std::string name = s.name;
    name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    for (int i = 1; taken.count(name); ++i) name = s.name + "_" + std::to_string(i);
    taken.insert(name);
    out.relation[s.name] = name;
    out.vocabulary.add_relation(name, 1);
  }
  auto core = expand_macros(f);
  auto names = all_names(core);
  names.insert(taken.begin(), taken.end());
  FreshNames fresh(names);
  out.sentence = ConstantEliminator(out.relation, fresh).tr(core);
  return out;
}

Structure singleton_structure(const Structure& s, const ConstantElimination& e) {
  Structure out(e.vocabulary, s.size());
  for (const auto& [c, r] : e.relation) out.add_tuple(r, {static_cast<Elem>(s.constant(c))});
  return out;
}

// ---------------------------------------------------------------- Machine compilers

std::string CompilationArtifact::symbol_table() const {
  std::ostringstream out;
  for (const auto& [name, what] : symbols) out << name << '\t' << what << '\n';
  return out.str();
}

namespace {

using Vars = std::vector<std::string>;

FormulaPtr zero_m(const Vars& xs) {
  if (xs.empty()) return truth();
  std::vector<MacroArg> a;
  for (const auto& x : xs) a.push_back(nvar_arg(x));
  return macro("ZERO", a);
}

FormulaPtr tsucc_m(const Vars& a, const Vars& b) {
  std::vector<MacroArg> args;
  for (const auto& x : a) args.push_back(nvar_arg(x));
  for (const auto& x : b) args.push_back(nvar_arg(x));
  return macro("TSUCC", args);
}

FormulaPtr tuple_eq(const Vars& a, const Vars& b) {
  std::vector<FormulaPtr> parts;
  for (std::size_t i = 0; i < a.size(); ++i) parts.push_back(neq(a[i], b[i]));
  return conj(parts);
}

// a < b in lexicographic order
FormulaPtr tuple_lt(const Vars& a, const Vars& b) {
  std::vector<FormulaPtr> cases;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<FormulaPtr> parts;
    for (std::size_t j = 0; j < i; ++j) parts.push_back(neq(a[j], b[j]));
    parts.push_back(nlt(a[i], b[i]));
    cases.push_back(conj(parts));
  }
  return disj(cases);
}

Vars concat(Vars a, const Vars& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Vars prefix(const Vars& p) { return Vars(p.begin(), p.end() - 1); }

class DamCompiler {
 public:
  // k == 0 selects the time-free (PFP) construction.
  DamCompiler(const MachineSpec& m, unsigned k, unsigned width) : m_(m), k_(k), w_(width) {
    if (m.kind != MachineKind::Dam) throw TransformError("compiler: expected a DAM machine");
    if (auto problems = validate_machine(m); !problems.empty())
      throw TransformError("compiler: invalid machine: " + problems.front());
    if (w_ == 0) throw TransformError("compiler: tape positions need at least one coordinate");
    for (const auto& t : m.tapes)
      if (t.role == TapeRole::Input || t.role == TapeRole::Index)
        throw TransformError("compiler: tape '" + t.name + "' has a RAM role");
    for (std::size_t j = 0; j < m.vocab.symbols().size(); ++j) {
      const auto& s = m.vocab.symbols()[j];
      if (s.kind == SymbolKind::Constant) continue;
      std::vector<int> addr(s.arity, -1);
      for (std::size_t i = 0; i < m.tapes.size(); ++i) {
        if (m.tapes[i].symbol != s.name) continue;
        if (m.tapes[i].role == TapeRole::RelAddr || m.tapes[i].role == TapeRole::FunAddr)
          addr[m.tapes[i].position - 1] = static_cast<int>(i);
      }
      for (int i : addr)
        if (i < 0) throw TransformError("compiler: symbol '" + s.name + "' lacks an address tape");
      if (s.kind == SymbolKind::Relation) {
        rel_addr_.push_back(addr);
        rel_sym_.push_back(s.name);
      } else {
        fun_addr_[s.name] = addr;
      }
    }
    for (std::size_t i = 0; i < m.states.size(); ++i) state_idx_[m.states[i]] = i;
    for (const auto& s : m.vocab.symbols()) reserved_.insert(s.name);
  }

  CompilationArtifact compile() {
    declare_symbols();
    Vars tv = fresh_n("t", k_);
    Vars pv = fresh_n("p", w_);
    std::vector<FixComponent> comps;
    comps.push_back({tv, acc_, acceptance(tv)});
    if (time_free()) comps.push_back({{}, run_, neg(init())});
    if (hoisted()) {
      std::vector<FormulaPtr> any_state;
      for (const auto& q : m_.states) any_state.push_back(S(q, tv));
      comps.push_back({tv, rdy_, disj(any_state)});
      for (const Rule* r : live_rules()) comps.push_back({tv, fire_rel_.at(r), fire(*r, tv)});
    }
    for (const auto& q : m_.states) comps.push_back({tv, state_rel(q), state_body(q, tv)});
    for (std::size_t i = 0; i < m_.tapes.size(); ++i) {
      if (!is_writable(m_.tapes[i].role)) continue;
      for (char s : {'0', '1', kBlank}) comps.push_back({concat(pv, tv), cell_rel(i, s), cell_body(i, s, pv, tv)});
    }
    for (std::size_t i = 0; i < m_.tapes.size(); ++i)
      comps.push_back({concat(pv, tv), head_rel(i), head_body(i, pv, tv)});

    CompilationArtifact out;
    const FpKind kind = time_free() ? FpKind::SPFP : FpKind::SIFP;
    auto fp = fixpoint(kind, std::move(comps), tv);
    out.sentence = tv.empty() ? fp : exists_n(tv, fp);
    out.symbols = symbols_;
    out.k = k_;
    out.width = w_;
    out.nodes = node_count(out.sentence);
    auto errs = check_well_formed(out.sentence, m_.vocab);
    if (!errs.empty()) throw TransformError("compiler produced an ill-formed sentence: " + errs.front().message);
    return out;
  }

 private:
  bool time_free() const { return k_ == 0; }
  // With time tuples each rule gets its own component, so that its guard is
  // evaluated once per time step rather than once per tape cell. A step then
  // takes two stages: Rdy and the F relations of time t appear together, one
  // stage after the configuration at t.
  bool hoisted() const { return !time_free(); }

  std::string fresh_name(const std::string& hint) {
    while (true) {
      std::string cand = hint + std::to_string(counter_++);
      if (!reserved_.count(cand)) return cand;
    }
  }
  Vars fresh_n(const std::string& hint, unsigned count) {
    Vars out;
    for (unsigned i = 0; i < count; ++i) out.push_back(fresh_name(hint));
    return out;
  }

  std::string unique_rel(const std::string& name) {
    if (reserved_.count(name)) throw TransformError("compiler: relation variable '" + name + "' clashes with the vocabulary");
    reserved_.insert(name);
    return name;
  }

  void declare_symbols() {
    acc_ = unique_rel("Acc");
    symbols_.push_back({acc_, "acceptance"});
    if (time_free()) {
      run_ = unique_rel("Run");
      symbols_.push_back({run_, "past the initial configuration"});
    }
    if (hoisted()) {
      rdy_ = unique_rel("Rdy");
      symbols_.push_back({rdy_, "configuration present"});
      for (const Rule* r : live_rules()) {
        fire_rel_[r] = unique_rel("F" + std::to_string(fire_rel_.size()));
        symbols_.push_back({fire_rel_[r], "rule " + r->state + " -> " + r->next + " (line " + std::to_string(r->line) + ")"});
      }
    }
    for (std::size_t i = 0; i < m_.states.size(); ++i) {
      symbols_.push_back({unique_rel("S" + std::to_string(i)), "state " + m_.states[i]});
    }
    for (std::size_t i = 0; i < m_.tapes.size(); ++i) {
      if (!is_writable(m_.tapes[i].role)) continue;
      for (char s : {'0', '1', kBlank})
        symbols_.push_back({unique_rel(cell_rel(i, s)), "tape " + m_.tapes[i].name + " holds " + std::string(1, s)});
    }
    for (std::size_t i = 0; i < m_.tapes.size(); ++i)
      symbols_.push_back({unique_rel(head_rel(i)), "head of tape " + m_.tapes[i].name});
  }

  std::string state_rel(const std::string& q) const { return "S" + std::to_string(state_idx_.at(q)); }
  static std::string cell_rel(std::size_t i, char s) {
    return "T" + std::to_string(i) + "_" + (s == kBlank ? std::string("B") : std::string(1, s));
  }
  static std::string head_rel(std::size_t i) { return "H" + std::to_string(i); }

  FormulaPtr S(const std::string& q, const Vars& tv) const { return relvar(state_rel(q), tv); }
  FormulaPtr T(std::size_t i, char s, const Vars& pv, const Vars& tv) const {
    return relvar(cell_rel(i, s), concat(pv, tv));
  }
  FormulaPtr H(std::size_t i, const Vars& pv, const Vars& tv) const { return relvar(head_rel(i), concat(pv, tv)); }

  // The configuration at tv is the initial one. In the time-free variant this is
  // read off the previous stage, where no state relation holds before the first step.
  FormulaPtr init() const {
    std::vector<FormulaPtr> parts;
    for (const auto& q : m_.states) parts.push_back(neg(S(q, {})));
    return conj(parts);
  }
  FormulaPtr time_zero(const Vars& tv) { return time_free() ? neg(relvar(run_, {})) : zero_m(tv); }

  // ---- tape contents at a given configuration

  // The tuple pv denotes a position below ceil(log n); its value is pv.back().
  FormulaPtr low(const Vars& pv) const { return zero_m(prefix(pv)); }

  // pv denotes ceil(log n): prefix (0..0,1) and last coordinate 0.
  FormulaPtr at_log(const Vars& pv) {
    if (pv.size() < 2) return falsity();
    const Vars pre(pv.begin(), pv.end() - 2);
    const auto z = fresh_name("a");
    return conj({zero_m(pre), exists_n(z, conj(zero_m({z}), macro("SUCC", {nvar_arg(pv[pv.size() - 2]), nvar_arg(z)}))),
                 zero_m({pv.back()})});
  }

  // Bit #j of the numeral on address tape i: cell j holds 1 and no blank precedes it.
  FormulaPtr numeral_bit(std::size_t i, const std::string& j, const Vars& tv) {
    Vars pv = fresh_n("a", w_);
    Vars qv = fresh_n("a", w_);
    auto no_blank_before = neg(exists_n(qv, conj(tuple_lt(qv, pv), T(i, kBlank, qv, tv))));
    return exists_n(pv, conj({low(pv), neq(pv.back(), j), T(i, '1', pv, tv), no_blank_before}));
  }

  // The numeral on tape i has no set bit at or beyond ceil(log n).
  FormulaPtr numeral_small(std::size_t i, const Vars& tv) {
    if (w_ < 2) return truth();
    Vars pv = fresh_n("a", w_);
    Vars qv = fresh_n("a", w_);
    auto no_blank_before = neg(exists_n(qv, conj(tuple_lt(qv, pv), T(i, kBlank, qv, tv))));
    return neg(exists_n(pv, conj({neg(low(pv)), T(i, '1', pv, tv), no_blank_before})));
  }

  // EX x1 = index{numeral on addr[0]} ... . body(x1..xa), plus the size checks.
  FormulaPtr with_args(const std::vector<int>& addr, const Vars& tv,
                       const std::function<FormulaPtr(std::vector<TermPtr>)>& body) {
    std::vector<std::string> xs;
    for (std::size_t a = 0; a < addr.size(); ++a) xs.push_back(fresh_name("x"));
    std::vector<TermPtr> ts;
    for (const auto& x : xs) ts.push_back(vvar(x));
    FormulaPtr f = body(ts);
    for (std::size_t a = addr.size(); a-- > 0;) {
      const auto j = fresh_name("a");
      f = guarded_exists(xs[a], j, numeral_bit(addr[a], j, tv), f);
    }
    std::vector<FormulaPtr> parts;
    for (int i : addr) parts.push_back(numeral_small(i, tv));
    parts.push_back(f);
    return conj(parts);
  }

  FormulaPtr answer(std::size_t l, const Vars& tv) {
    return with_args(rel_addr_[l], tv, [&](std::vector<TermPtr> ts) { return rel(rel_sym_[l], std::move(ts)); });
  }

  // A read-only numeral whose cells 0..L-1 are given by bit(#j); bits at L and
  // above are those of top (only the size tape has one). Zero has the single digit 0.
  FormulaPtr numeral_cell(char c, const Vars& pv, const std::function<FormulaPtr(const std::string&)>& bit,
                          const FormulaPtr& top_bit) {
    const auto& j = pv.back();
    if (c == '1') return disj(conj(low(pv), bit(j)), conj(at_log(pv), top_bit));
    if (c == '0') {
      const auto y = fresh_name("a");
      auto longer = disj({zero_m({j}), exists_n(y, conj(nlt(j, y), bit(y))), top_bit});
      return conj({low(pv), neg(bit(j)), longer});
    }
    return neg(disj(numeral_cell('0', pv, bit, top_bit), numeral_cell('1', pv, bit, top_bit)));
  }

  FormulaPtr cell(std::size_t i, char c, const Vars& pv, const Vars& tv) {
    const auto& tape = m_.tapes[i];
    switch (tape.role) {
      case TapeRole::Const:
        return numeral_cell(c, pv, [&](const std::string& j) { return bit(constant(tape.symbol), j); }, falsity());
      case TapeRole::Size: {
        const auto w = fresh_name("a");
        auto nbit = [](const std::string& j) { return macro("NBIT", {nvar_arg(j)}); };
        // n = 2^L exactly when no bit below L is set
        auto pow2 = neg(exists_n(w, nbit(w)));
        return numeral_cell(c, pv, nbit, pow2);
      }
      case TapeRole::Value: {
        if (c == kBlank) return neg(disj(cell(i, '0', pv, tv), cell(i, '1', pv, tv)));
        const auto& addr = fun_addr_.at(tape.symbol);
        auto digits = with_args(addr, tv, [&](std::vector<TermPtr> ts) {
          auto b = bit(func(tape.symbol, std::move(ts)), pv.back());
          return c == '1' ? b : neg(b);
        });
        return conj({neg(time_zero(tv)), low(pv), digits});
      }
      default:
        return T(i, c, pv, tv);
    }
  }

  FormulaPtr read(std::size_t i, char c, const Vars& tv) {
    Vars pv = fresh_n("a", w_);
    return exists_n(pv, conj(H(i, pv, tv), cell(i, c, pv, tv)));
  }

  FormulaPtr fire(const Rule& r, const Vars& tv) {
    std::vector<FormulaPtr> parts{S(r.state, tv)};
    for (std::size_t i = 0; i < r.reads.size(); ++i)
      if (r.reads[i] != kAny) parts.push_back(read(i, r.reads[i], tv));
    for (std::size_t l = 0; l < r.answers.size(); ++l)
      if (r.answers[l] != kAny) parts.push_back(r.answers[l] == '1' ? answer(l, tv) : neg(answer(l, tv)));
    return conj(parts);
  }

  // Rules that take part in the run. A halted machine does not leave an accepting
  // state; the time-free variant keeps the freeze rules so that the stages settle.
  std::vector<const Rule*> live_rules() const {
    std::vector<const Rule*> out;
    for (const auto& r : m_.rules)
      if (time_free() || !m_.accepting.count(r.state)) out.push_back(&r);
    return out;
  }

  FormulaPtr fire_any(const std::function<bool(const Rule&)>& pick, const Vars& tv) {
    std::vector<FormulaPtr> parts;
    for (const Rule* r : live_rules())
      if (pick(*r)) parts.push_back(hoisted() ? relvar(fire_rel_.at(r), tv) : fire(*r, tv));
    return disj(parts);
  }

  // body evaluated at the previous time step
  FormulaPtr after(const Vars& tv, const std::function<FormulaPtr(const Vars&)>& body) {
    if (time_free()) return conj(neg(init()), body({}));
    Vars uv = fresh_n("u", k_);
    return conj(neg(zero_m(tv)), exists_n(uv, conj(tsucc_m(uv, tv), body(uv))));
  }
  FormulaPtr at_start(const Vars& tv) const { return time_free() ? init() : zero_m(tv); }

  // ---- component bodies

  FormulaPtr acceptance(const Vars& tv) {
    std::vector<FormulaPtr> parts;
    for (const auto& q : m_.accepting) parts.push_back(S(q, tv));
    if (!time_free()) parts.push_back(fire_any([&](const Rule& r) { return m_.accepting.count(r.next) > 0; }, tv));
    return disj(parts);
  }

  FormulaPtr state_body(const std::string& q, const Vars& tv) {
    auto step = after(tv, [&](const Vars& uv) { return fire_any([&](const Rule& r) { return r.next == q; }, uv); });
    return q == m_.initial ? disj(at_start(tv), step) : step;
  }

  FormulaPtr cell_body(std::size_t i, char s, const Vars& pv, const Vars& tv) {
    auto step = after(tv, [&](const Vars& uv) {
      auto here = H(i, pv, uv);
      auto written = conj(here, fire_any([&](const Rule& r) { return r.actions[i].write == s; }, uv));
      auto touched = conj(here, fire_any([&](const Rule& r) { return r.actions[i].write != kAny; }, uv));
      auto body = disj(written, conj(neg(touched), T(i, s, pv, uv)));
      // the negated rule relations are only final once Rdy holds
      return hoisted() ? conj(relvar(rdy_, uv), body) : body;
    });
    return s == kBlank ? disj(at_start(tv), step) : step;
  }

  FormulaPtr head_body(std::size_t i, const Vars& pv, const Vars& tv) {
    auto step = after(tv, [&](const Vars& uv) {
      Vars qv = fresh_n("a", w_);
      auto moved = [&](Move mv) { return fire_any([&](const Rule& r) { return r.actions[i].move == mv; }, uv); };
      auto how = disj({conj(moved(Move::R), tsucc_m(qv, pv)), conj(moved(Move::L), tsucc_m(pv, qv)),
                       conj(moved(Move::S), tuple_eq(qv, pv))});
      return exists_n(qv, conj(H(i, qv, uv), how));
    });
    return disj(conj(at_start(tv), zero_m(pv)), step);
  }

  const MachineSpec& m_;
  unsigned k_, w_;
  std::vector<std::vector<int>> rel_addr_;
  std::vector<std::string> rel_sym_;
  std::map<std::string, std::vector<int>> fun_addr_;
  std::map<std::string, std::size_t> state_idx_;
  std::set<std::string> reserved_;
  std::vector<std::pair<std::string, std::string>> symbols_;
  std::string acc_, run_, rdy_;
  std::map<const Rule*, std::string> fire_rel_;
  unsigned counter_ = 0;
};

}  // namespace

CompilationArtifact compile_dam_to_ifp_sentence(const MachineSpec& m, unsigned k) {
  if (k == 0) throw TransformError("compiler: the time exponent must be at least 1");
  return DamCompiler(m, k, k).compile();
}

CompilationArtifact compile_dam_to_pfp_sentence(const MachineSpec& m, unsigned width) {
  if (m.kind == MachineKind::Dam && !is_frozen_on_accept(m))
    throw TransformError("compiler: the machine must freeze on acceptance; apply normalize_machine_for_pfp first");
  return DamCompiler(m, 0, width).compile();
}

}  // namespace idxlog
