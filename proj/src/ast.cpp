#include "idxlog/ast.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_set>

namespace idxlog {

// ---------------------------------------------------------------- Builders

namespace {
TermPtr make_term(TermKind k, std::string name, std::vector<TermPtr> args = {}) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->name = std::move(name);
  t->args = std::move(args);
  return t;
}

std::shared_ptr<Formula> node(FKind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}
}  // namespace

TermPtr vvar(std::string name) { return make_term(TermKind::VVar, std::move(name)); }
TermPtr constant(std::string name) { return make_term(TermKind::Const, std::move(name)); }
TermPtr func(std::string name, std::vector<TermPtr> args) {
  return make_term(TermKind::Func, std::move(name), std::move(args));
}
TermPtr nvar_term(std::string name) { return make_term(TermKind::NVar, std::move(name)); }

bool is_simultaneous(FpKind k) { return k == FpKind::SIFP || k == FpKind::SLFP || k == FpKind::SPFP; }
bool is_partial(FpKind k) { return k == FpKind::PFP || k == FpKind::SPFP; }

std::string fp_keyword(FpKind k) {
  switch (k) {
    case FpKind::IFP: return "IFP";
    case FpKind::LFP: return "LFP";
    case FpKind::PFP: return "PFP";
    case FpKind::SIFP: return "SIFP";
    case FpKind::SLFP: return "SLFP";
    case FpKind::SPFP: return "SPFP";
  }
  return "?";
}

FormulaPtr leq(TermPtr a, TermPtr b) {
  auto f = node(FKind::LeqV);
  f->terms = {std::move(a), std::move(b)};
  return f;
}
FormulaPtr eq(TermPtr a, TermPtr b) {
  auto f = node(FKind::EqV);
  f->terms = {std::move(a), std::move(b)};
  return f;
}
FormulaPtr nleq(std::string a, std::string b) {
  auto f = node(FKind::LeqN);
  f->vars = {std::move(a), std::move(b)};
  return f;
}
FormulaPtr neq(std::string a, std::string b) {
  auto f = node(FKind::EqN);
  f->vars = {std::move(a), std::move(b)};
  return f;
}
FormulaPtr nlt(std::string a, std::string b) { return neg(nleq(std::move(b), std::move(a))); }
FormulaPtr rel(std::string name, std::vector<TermPtr> args) {
  auto f = node(FKind::Rel);
  f->name = std::move(name);
  f->terms = std::move(args);
  return f;
}
FormulaPtr relvar(std::string name, std::vector<std::string> args) {
  auto f = node(FKind::RelVar);
  f->name = std::move(name);
  f->vars = std::move(args);
  return f;
}
namespace {
FormulaPtr binary(FKind k, FormulaPtr a, FormulaPtr b) {
  auto f = node(k);
  f->subs = {std::move(a), std::move(b)};
  return f;
}
}  // namespace
FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return binary(FKind::And, std::move(a), std::move(b)); }
FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return binary(FKind::Or, std::move(a), std::move(b)); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return binary(FKind::Implies, std::move(a), std::move(b)); }
FormulaPtr iff(FormulaPtr a, FormulaPtr b) { return binary(FKind::Iff, std::move(a), std::move(b)); }
FormulaPtr conj(std::vector<FormulaPtr> parts) {
  if (parts.empty()) return truth();
  FormulaPtr acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
  return acc;
}
FormulaPtr disj(std::vector<FormulaPtr> parts) {
  if (parts.empty()) return falsity();
  FormulaPtr acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
  return acc;
}
FormulaPtr neg(FormulaPtr a) {
  auto f = node(FKind::Not);
  f->subs = {std::move(a)};
  return f;
}
FormulaPtr exists_n(std::string x, FormulaPtr body) {
  auto f = node(FKind::ExistsN);
  f->vars = {std::move(x)};
  f->subs = {std::move(body)};
  return f;
}
FormulaPtr exists_n(const std::vector<std::string>& xs, FormulaPtr body) {
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = exists_n(*it, body);
  return body;
}
FormulaPtr forall_n(std::string x, FormulaPtr body) {
  auto f = node(FKind::ForallN);
  f->vars = {std::move(x)};
  f->subs = {std::move(body)};
  return f;
}
FormulaPtr forall_n(const std::vector<std::string>& xs, FormulaPtr body) {
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = forall_n(*it, body);
  return body;
}
FormulaPtr index_eq(TermPtr t, std::string x, FormulaPtr body) {
  auto f = node(FKind::IndexEq);
  f->terms = {std::move(t)};
  f->vars = {std::move(x)};
  f->subs = {std::move(body)};
  return f;
}
FormulaPtr guarded_exists(std::string x, std::string nx, FormulaPtr guard, FormulaPtr body) {
  auto f = node(FKind::GuardedExists);
  f->vars = {std::move(x), std::move(nx)};
  f->subs = {std::move(guard), std::move(body)};
  return f;
}
FormulaPtr fixpoint(FpKind kind, std::vector<FixComponent> comps, std::vector<std::string> applied) {
  auto f = node(FKind::Fixpoint);
  f->fp = kind;
  f->components = std::move(comps);
  f->vars = std::move(applied);
  return f;
}
FormulaPtr fixpoint(FpKind kind, std::vector<std::string> vars, std::string rel, FormulaPtr body,
                    std::vector<std::string> applied) {
  return fixpoint(kind, {FixComponent{std::move(vars), std::move(rel), std::move(body)}}, std::move(applied));
}
FormulaPtr macro(std::string name, std::vector<MacroArg> args) {
  auto f = node(FKind::Macro);
  f->name = std::move(name);
  f->margs = std::move(args);
  return f;
}

MacroArg term_arg(TermPtr t) { return {MacroArg::Kind::Term, std::move(t), {}, {}, {}}; }
MacroArg nvar_arg(std::string x) { return {MacroArg::Kind::NVar, nullptr, std::move(x), {}, {}}; }
MacroArg rel_arg(std::string r) { return {MacroArg::Kind::Rel, nullptr, std::move(r), {}, {}}; }
MacroArg lambda_arg(std::vector<std::string> vars, FormulaPtr body) {
  return {MacroArg::Kind::Lambda, nullptr, {}, std::move(vars), std::move(body)};
}

FormulaPtr bit(TermPtr t, std::string x) { return macro("BIT", {term_arg(std::move(t)), nvar_arg(std::move(x))}); }
FormulaPtr truth() { return macro("TRUE", {}); }
FormulaPtr falsity() { return macro("FALSE", {}); }

// ---------------------------------------------------------------- Catalogue

const std::vector<MacroSignature>& macro_catalogue() {
  static const std::vector<MacroSignature> cat = {
      {"TRUE", "", 1, "always true"},
      {"FALSE", "", 1, "always false: EX #w. !(#w = #w)"},
      {"EMPTY", "R", 1, "R = {}"},
      {"MIN", "RN", 1, "#z = min R"},
      {"MAX", "RN", 1, "#z = max R"},
      {"TOP", "N", 1, "#z is the largest bit position"},
      {"ZERO", "*", 1, "every argument is the smallest bit position"},
      {"SUCC", "NN", 1, "#a = #b + 1"},
      {"TSUCC", "*", 1, "second half of the arguments is the lexicographic successor of the first half"},
      {"RANK", "*", 1, "the tuple #t1..#tk is the (#z+1)-th tuple in lexicographic order"},
      {"BIT", "TN", 1, "bit #x of t is set"},
      {"LASTBIT", "N", 1, "bit #x of n-1 is set"},
      {"NBIT", "N", 1, "bit #x of n is set"},
      {"AVG", "RRN", 1, "bit #x of floor((X+Y)/2)"},
      {"AVGC", "RRN", 1, "bit #x of ceil((X+Y)/2)"},
      {"MINUSONE", "RN", 1, "bit #y of X-1"},
      {"EQSH", "RR", 1, "the two bit sets denote the same number"},
      {"LTSH", "RR", 1, "the first bit set denotes a smaller number than the second"},
  };
  return cat;
}

const MacroSignature* find_macro(const std::string& name) {
  for (const auto& m : macro_catalogue())
    if (m.name == name) return &m;
  return nullptr;
}

std::string FreshNames::next(const std::string& hint) {
  while (true) {
    std::string cand = "_" + hint + std::to_string(counter_++);
    if (taken_.insert(cand).second) return cand;
  }
}

// ---------------------------------------------------------------- Names and free variables

namespace {

void term_names(const TermPtr& t, std::set<std::string>& out) {
  out.insert(t->name);
  for (const auto& a : t->args) term_names(a, out);
}

void collect_names(const FormulaPtr& f, std::set<std::string>& out, std::unordered_set<const Formula*>& seen) {
  if (!seen.insert(f.get()).second) return;
  out.insert(f->name);
  for (const auto& t : f->terms) term_names(t, out);
  out.insert(f->vars.begin(), f->vars.end());
  for (const auto& s : f->subs) collect_names(s, out, seen);
  for (const auto& c : f->components) {
    out.insert(c.vars.begin(), c.vars.end());
    out.insert(c.rel);
    collect_names(c.body, out, seen);
  }
  for (const auto& a : f->margs) {
    if (a.term) term_names(a.term, out);
    out.insert(a.name);
    out.insert(a.vars.begin(), a.vars.end());
    if (a.body) collect_names(a.body, out, seen);
  }
}

void term_free(const TermPtr& t, FreeVars& out) {
  if (t->kind == TermKind::VVar) out.v.insert(t->name);
  if (t->kind == TermKind::NVar) out.n.insert(t->name);
  for (const auto& a : t->args) term_free(a, out);
}

FreeVars free_rec(const FormulaPtr& f) {
  FreeVars out;
  auto merge = [&](const FreeVars& o) {
    out.v.insert(o.v.begin(), o.v.end());
    out.n.insert(o.n.begin(), o.n.end());
    out.rel.insert(o.rel.begin(), o.rel.end());
  };
  switch (f->kind) {
    case FKind::LeqV:
    case FKind::EqV:
    case FKind::Rel:
      for (const auto& t : f->terms) term_free(t, out);
      break;
    case FKind::LeqN:
    case FKind::EqN:
      out.n.insert(f->vars.begin(), f->vars.end());
      break;
    case FKind::RelVar:
      out.n.insert(f->vars.begin(), f->vars.end());
      out.rel.insert(f->name);
      break;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
    case FKind::Iff:
    case FKind::Not:
      for (const auto& s : f->subs) merge(free_rec(s));
      break;
    case FKind::ExistsN:
    case FKind::ForallN: {
      auto b = free_rec(f->subs[0]);
      b.n.erase(f->vars[0]);
      merge(b);
      break;
    }
    case FKind::IndexEq: {
      term_free(f->terms[0], out);
      auto b = free_rec(f->subs[0]);
      b.n.erase(f->vars[0]);
      merge(b);
      break;
    }
    case FKind::GuardedExists: {
      auto g = free_rec(f->subs[0]);
      g.n.erase(f->vars[1]);
      merge(g);
      auto b = free_rec(f->subs[1]);
      b.v.erase(f->vars[0]);
      merge(b);
      break;
    }
    case FKind::Fixpoint: {
      for (const auto& c : f->components) {
        auto b = free_rec(c.body);
        for (const auto& x : c.vars) b.n.erase(x);
        for (const auto& c2 : f->components) b.rel.erase(c2.rel);
        merge(b);
      }
      out.n.insert(f->vars.begin(), f->vars.end());
      break;
    }
    case FKind::Macro:
      for (const auto& a : f->margs) {
        switch (a.kind) {
          case MacroArg::Kind::Term: term_free(a.term, out); break;
          case MacroArg::Kind::NVar: out.n.insert(a.name); break;
          case MacroArg::Kind::Rel: out.rel.insert(a.name); break;
          case MacroArg::Kind::Lambda: {
            auto b = free_rec(a.body);
            for (const auto& x : a.vars) b.n.erase(x);
            merge(b);
            break;
          }
        }
      }
      break;
  }
  return out;
}

}  // namespace

std::set<std::string> all_names(const FormulaPtr& f) {
  std::set<std::string> out;
  std::unordered_set<const Formula*> seen;
  collect_names(f, out, seen);
  out.erase("");
  return out;
}

FreeVars free_variables(const FormulaPtr& f) { return free_rec(f); }

std::set<std::string> term_vvars(const TermPtr& t) {
  FreeVars fv;
  term_free(t, fv);
  return fv.v;
}

bool contains_macros(const FormulaPtr& f) {
  if (f->kind == FKind::Macro || f->kind == FKind::Or || f->kind == FKind::Implies || f->kind == FKind::Iff ||
      f->kind == FKind::ForallN || f->kind == FKind::EqN)
    return true;
  for (const auto& s : f->subs)
    if (contains_macros(s)) return true;
  for (const auto& c : f->components)
    if (contains_macros(c.body)) return true;
  return false;
}

// ---------------------------------------------------------------- Structural equality

bool structurally_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!structurally_equal(a->args[i], b->args[i])) return false;
  return true;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->vars != b->vars || a->terms.size() != b->terms.size() ||
      a->subs.size() != b->subs.size() || a->components.size() != b->components.size() ||
      a->margs.size() != b->margs.size())
    return false;
  if (a->kind == FKind::Fixpoint && a->fp != b->fp) return false;
  for (std::size_t i = 0; i < a->terms.size(); ++i)
    if (!structurally_equal(a->terms[i], b->terms[i])) return false;
  for (std::size_t i = 0; i < a->subs.size(); ++i)
    if (!structurally_equal(a->subs[i], b->subs[i])) return false;
  for (std::size_t i = 0; i < a->components.size(); ++i) {
    const auto &x = a->components[i], &y = b->components[i];
    if (x.vars != y.vars || x.rel != y.rel || !structurally_equal(x.body, y.body)) return false;
  }
  for (std::size_t i = 0; i < a->margs.size(); ++i) {
    const auto &x = a->margs[i], &y = b->margs[i];
    if (x.kind != y.kind || x.name != y.name || x.vars != y.vars) return false;
    if (x.kind == MacroArg::Kind::Term && !structurally_equal(x.term, y.term)) return false;
    if (x.kind == MacroArg::Kind::Lambda && !structurally_equal(x.body, y.body)) return false;
  }
  return true;
}

std::size_t node_count(const FormulaPtr& f) {
  std::unordered_set<const Formula*> seen;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
    if (!seen.insert(g.get()).second) return;
    for (const auto& s : g->subs) walk(s);
    for (const auto& c : g->components) walk(c.body);
    for (const auto& a : g->margs)
      if (a.body) walk(a.body);
  };
  walk(f);
  return seen.size();
}

// ---------------------------------------------------------------- Substitution

namespace {

struct Renaming {
  std::map<std::string, std::string> n, v, r;
};

bool maps_to(const std::map<std::string, std::string>& m, const std::string& x) {
  for (const auto& [k, val] : m)
    if (val == x && k != x) return true;
  return false;
}

std::string lookup(const std::map<std::string, std::string>& m, const std::string& x) {
  auto it = m.find(x);
  return it == m.end() ? x : it->second;
}

class Renamer {
 public:
  // apart: rename every binder whose name was already used by another binder.
  Renamer(FreshNames& fresh, bool apart, std::set<std::string> used = {})
      : fresh_(fresh), apart_(apart), used_(std::move(used)) {}

  TermPtr term(const TermPtr& t, const Renaming& s) {
    auto out = std::make_shared<Term>(*t);
    if (t->kind == TermKind::VVar) out->name = lookup(s.v, t->name);
    if (t->kind == TermKind::NVar) out->name = lookup(s.n, t->name);
    for (auto& a : out->args) a = term(a, s);
    return out;
  }

  FormulaPtr formula(const FormulaPtr& f, const Renaming& s) {
    auto out = std::make_shared<Formula>(*f);
    for (auto& t : out->terms) t = term(t, s);
    switch (f->kind) {
      case FKind::LeqN:
      case FKind::EqN:
        for (auto& x : out->vars) x = lookup(s.n, x);
        break;
      case FKind::RelVar:
        for (auto& x : out->vars) x = lookup(s.n, x);
        out->name = lookup(s.r, f->name);
        break;
      case FKind::And:
      case FKind::Or:
      case FKind::Implies:
      case FKind::Iff:
      case FKind::Not:
        for (auto& sub : out->subs) sub = formula(sub, s);
        break;
      case FKind::ExistsN:
      case FKind::ForallN:
      case FKind::IndexEq: {
        Renaming inner = s;
        out->vars[0] = bind(inner.n, f->vars[0]);
        out->subs[0] = formula(f->subs[0], inner);
        break;
      }
      case FKind::GuardedExists: {
        Renaming g = s;
        out->vars[1] = bind(g.n, f->vars[1]);
        out->subs[0] = formula(f->subs[0], g);
        Renaming b = s;
        out->vars[0] = bind(b.v, f->vars[0]);
        out->subs[1] = formula(f->subs[1], b);
        break;
      }
      case FKind::Fixpoint: {
        for (auto& x : out->vars) x = lookup(s.n, x);
        Renaming shared = s;
        for (std::size_t i = 0; i < f->components.size(); ++i)
          out->components[i].rel = bind(shared.r, f->components[i].rel);
        for (std::size_t i = 0; i < f->components.size(); ++i) {
          Renaming inner = shared;
          for (auto& x : out->components[i].vars) x = bind(inner.n, x);
          out->components[i].body = formula(f->components[i].body, inner);
        }
        break;
      }
      case FKind::Macro:
        for (auto& a : out->margs) {
          switch (a.kind) {
            case MacroArg::Kind::Term: a.term = term(a.term, s); break;
            case MacroArg::Kind::NVar: a.name = lookup(s.n, a.name); break;
            case MacroArg::Kind::Rel: a.name = lookup(s.r, a.name); break;
            case MacroArg::Kind::Lambda: {
              Renaming inner = s;
              for (auto& x : a.vars) x = bind(inner.n, x);
              a.body = formula(a.body, inner);
              break;
            }
          }
        }
        break;
      default:
        break;
    }
    return out;
  }

 private:
  std::string bind(std::map<std::string, std::string>& m, const std::string& x) {
    m.erase(x);
    std::string nx = x;
    if (maps_to(m, x) || (apart_ && used_.count(x))) {
      nx = fresh_.next(x.empty() ? "g" : (x[0] == '_' ? "g" : x));
      m[x] = nx;
    }
    used_.insert(nx);
    return nx;
  }

  FreshNames& fresh_;
  bool apart_;
  std::set<std::string> used_;
};

}  // namespace

FormulaPtr substitute_nvar(const FormulaPtr& f, const std::string& from, const std::string& to) {
  if (from == to) return f;
  auto names = all_names(f);
  names.insert(to);
  FreshNames fresh(names);
  Renamer r(fresh, false);
  Renaming s;
  s.n[from] = to;
  return r.formula(f, s);
}

FormulaPtr rename_apart(const FormulaPtr& f) {
  FreshNames fresh(all_names(f));
  auto fv = free_variables(f);
  std::set<std::string> used;
  used.insert(fv.v.begin(), fv.v.end());
  used.insert(fv.n.begin(), fv.n.end());
  used.insert(fv.rel.begin(), fv.rel.end());
  Renamer r(fresh, true, used);
  return r.formula(f, Renaming{});
}

// ---------------------------------------------------------------- Macro expansion

namespace {

class Expander {
 public:
  explicit Expander(const FormulaPtr& root) : fresh_(all_names(root)) {}

  FormulaPtr expand(const FormulaPtr& f) {
    auto it = memo_.find(f.get());
    if (it != memo_.end()) return it->second;
    FormulaPtr out = expand_uncached(f);
    memo_[f.get()] = out;
    keep_.push_back(f);
    return out;
  }

 private:
  FormulaPtr expand_uncached(const FormulaPtr& f) {
    switch (f->kind) {
      case FKind::Or: return neg(conj(neg(expand(f->subs[0])), neg(expand(f->subs[1]))));
      case FKind::Implies: return neg(conj(expand(f->subs[0]), neg(expand(f->subs[1]))));
      case FKind::Iff: {
        auto a = expand(f->subs[0]);
        auto b = expand(f->subs[1]);
        return conj(neg(conj(a, neg(b))), neg(conj(b, neg(a))));
      }
      case FKind::ForallN: return neg(exists_n(f->vars[0], neg(expand(f->subs[0]))));
      case FKind::EqN: return conj(nleq(f->vars[0], f->vars[1]), nleq(f->vars[1], f->vars[0]));
      case FKind::Macro: return expand(expand_macro(*f));
      default: break;
    }
    auto out = std::make_shared<Formula>(*f);
    for (auto& s : out->subs) s = expand(s);
    for (auto& c : out->components) c.body = expand(c.body);
    return out;
  }

  std::string fresh(const std::string& hint) { return fresh_.next(hint); }

  // X(args) for a relation argument (relation variable or lambda).
  FormulaPtr app(const MacroArg& a, const std::vector<std::string>& args) {
    if (a.kind == MacroArg::Kind::Rel) return relvar(a.name, args);
    if (a.kind != MacroArg::Kind::Lambda) throw DomainError("macro: expected a relation argument");
    if (a.vars.size() != args.size()) throw DomainError("macro: lambda arity mismatch");
    // Two-phase substitution so that parameter lists like (#u,#v) <- (#v,#u) work.
    FormulaPtr body = a.body;
    std::vector<std::string> tmp;
    for (const auto& x : a.vars) {
      tmp.push_back(fresh("p"));
      body = substitute_nvar(body, x, tmp.back());
    }
    for (std::size_t i = 0; i < args.size(); ++i) body = substitute_nvar(body, tmp[i], args[i]);
    return body;
  }

  FormulaPtr m(const std::string& name, std::vector<MacroArg> args) { return macro(name, std::move(args)); }
  FormulaPtr empty(const MacroArg& r) { return m("EMPTY", {r}); }
  FormulaPtr min_of(const MacroArg& r, const std::string& z) { return m("MIN", {r, nvar_arg(z)}); }
  FormulaPtr max_of(const MacroArg& r, const std::string& z) { return m("MAX", {r, nvar_arg(z)}); }
  FormulaPtr top(const std::string& z) { return m("TOP", {nvar_arg(z)}); }
  FormulaPtr zero(const std::vector<std::string>& zs) {
    std::vector<MacroArg> a;
    for (const auto& z : zs) a.push_back(nvar_arg(z));
    return m("ZERO", a);
  }
  FormulaPtr succ(const std::string& a, const std::string& b) { return m("SUCC", {nvar_arg(a), nvar_arg(b)}); }
  FormulaPtr tsucc(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<MacroArg> args;
    for (const auto& x : a) args.push_back(nvar_arg(x));
    for (const auto& x : b) args.push_back(nvar_arg(x));
    return m("TSUCC", args);
  }
  static FormulaPtr maj(const FormulaPtr& a, const FormulaPtr& b, const FormulaPtr& c) {
    return disj({conj(a, b), conj(a, c), conj(b, c)});
  }

  FormulaPtr bit_like(const TermPtr* t, const std::string& x) {
    // [SIFP #y, Y . phiY ; #z, Z . phiZ](#x), with the comparison against t replaced by
    // plain membership in the domain when t is null (bits of n-1).
    const std::string Y = fresh("Y"), Z = fresh("Z"), y = fresh("y"), z = fresh("z"), mm = fresh("m"),
                      u = fresh("u"), v = fresh("v");
    auto Zr = rel_arg(Z);
    auto phiZ = disj(conj(empty(Zr), top(z)), conj(neg(empty(Zr)), exists_n(mm, conj(min_of(Zr, mm), succ(mm, z)))));
    auto guard = disj(relvar(Y, {u}), neq(u, y));
    auto body = t ? leq(vvar(v), *t) : nleq(y, y);
    auto phiY = conj(conj(neg(empty(Zr)), min_of(Zr, y)), guarded_exists(v, u, guard, body));
    return fixpoint(FpKind::SIFP, {FixComponent{{y}, Y, phiY}, FixComponent{{z}, Z, phiZ}}, {x});
  }

  FormulaPtr avg(const MacroArg& X, const MacroArg& Yr, const std::string& x, bool round_up) {
    const std::string C = fresh("C"), j = fresh("j"), i = fresh("i"), k = fresh("k");
    auto step = exists_n(i, conj(succ(j, i), maj(app(X, {i}), app(Yr, {i}), relvar(C, {i}))));
    auto carry_body = round_up ? disj(zero({j}), step) : step;
    auto carry = [&](const std::string& at) { return fixpoint(FpKind::IFP, {j}, C, carry_body, {at}); };
    auto xor3 = [](FormulaPtr a, FormulaPtr b, FormulaPtr c) { return iff(std::move(a), iff(std::move(b), std::move(c))); };
    auto inner = exists_n(k, conj(succ(k, x), xor3(app(X, {k}), app(Yr, {k}), carry(k))));
    auto topbit = conj(top(x), maj(app(X, {x}), app(Yr, {x}), carry(x)));
    return disj(inner, topbit);
  }

  FormulaPtr expand_macro(const Formula& f) {
    const auto& a = f.margs;
    const std::string& name = f.name;
    auto nv = [&](std::size_t i) -> const std::string& { return a.at(i).name; };
    if (name == "TRUE") return neg(m("FALSE", {}));
    if (name == "FALSE") {
      auto w = fresh("w");
      return exists_n(w, neg(neq(w, w)));
    }
    if (name == "EMPTY") {
      auto w = fresh("w");
      return neg(exists_n(w, app(a.at(0), {w})));
    }
    if (name == "MIN" || name == "MAX") {
      auto w = fresh("w");
      auto cmp = name == "MIN" ? nleq(nv(1), w) : nleq(w, nv(1));
      return conj(app(a.at(0), {nv(1)}), forall_n(w, implies(app(a.at(0), {w}), cmp)));
    }
    if (name == "TOP") {
      auto w = fresh("w");
      return forall_n(w, nleq(w, nv(0)));
    }
    if (name == "ZERO") {
      std::vector<FormulaPtr> parts;
      for (const auto& arg : a) {
        auto w = fresh("w");
        parts.push_back(forall_n(w, nleq(arg.name, w)));
      }
      return conj(parts);
    }
    if (name == "SUCC") {
      auto w = fresh("w");
      return conj(nlt(nv(1), nv(0)), forall_n(w, neg(conj(nlt(nv(1), w), nlt(w, nv(0))))));
    }
    if (name == "TSUCC") {
      const std::size_t k = a.size() / 2;
      std::vector<FormulaPtr> cases;
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<FormulaPtr> parts;
        for (std::size_t j = 0; j < i; ++j) parts.push_back(neq(nv(j), nv(k + j)));
        parts.push_back(succ(nv(k + i), nv(i)));
        for (std::size_t j = i + 1; j < k; ++j) {
          parts.push_back(top(nv(j)));
          parts.push_back(zero({nv(k + j)}));
        }
        cases.push_back(conj(parts));
      }
      return disj(cases);
    }
    if (name == "RANK") {
      const std::size_t k = a.size() - 1;
      const std::string Q = fresh("Q"), v = fresh("v"), q = fresh("q");
      std::vector<std::string> u, p, applied;
      for (std::size_t i = 0; i < k; ++i) {
        u.push_back(fresh("u"));
        p.push_back(fresh("p"));
        applied.push_back(nv(i));
      }
      applied.push_back(nv(k));
      auto qargs = p;
      qargs.push_back(q);
      auto binders = u;
      binders.push_back(v);
      auto step = exists_n(p, exists_n(q, conj(conj(relvar(Q, qargs), tsucc(p, u)), succ(v, q))));
      auto body = disj(conj(zero(u), zero({v})), step);
      return fixpoint(FpKind::IFP, binders, Q, body, applied);
    }
    if (name == "BIT") return bit_like(&a.at(0).term, nv(1));
    if (name == "LASTBIT") return bit_like(nullptr, nv(0));
    if (name == "NBIT") {
      auto w = fresh("w");
      auto last = [&](const std::string& x) { return m("LASTBIT", {nvar_arg(x)}); };
      return iff(last(nv(0)), neg(forall_n(w, implies(nlt(w, nv(0)), last(w)))));
    }
    if (name == "AVG" || name == "AVGC") return avg(a.at(0), a.at(1), nv(2), name == "AVGC");
    if (name == "MINUSONE") {
      auto w = fresh("w");
      return iff(app(a.at(0), {nv(1)}), neg(forall_n(w, implies(nlt(w, nv(1)), neg(app(a.at(0), {w}))))));
    }
    if (name == "EQSH") {
      auto z = fresh("z");
      return forall_n(z, iff(app(a.at(0), {z}), app(a.at(1), {z})));
    }
    if (name == "LTSH") {
      auto z = fresh("z"), z2 = fresh("z");
      auto low = conj(neg(app(a.at(0), {z})), app(a.at(1), {z}));
      auto above = forall_n(z2, implies(nlt(z, z2), iff(app(a.at(0), {z2}), app(a.at(1), {z2}))));
      return exists_n(z, conj(low, above));
    }
    throw DomainError("unknown macro '" + name + "'");
  }

  FreshNames fresh_;
  std::map<const Formula*, FormulaPtr> memo_;
  std::vector<FormulaPtr> keep_;
};

}  // namespace

FormulaPtr expand_macros(const FormulaPtr& f) {
  Expander e(f);
  return e.expand(f);
}

// ---------------------------------------------------------------- Well-formedness

namespace {

class WfChecker {
 public:
  WfChecker(const Vocabulary& v, std::vector<WfError>& errs) : vocab_(v), errs_(errs) {}

  void formula(const FormulaPtr& f) {
    switch (f->kind) {
      case FKind::LeqV:
      case FKind::EqV:
        for (const auto& t : f->terms) term(t);
        break;
      case FKind::LeqN:
      case FKind::EqN:
        if (f->vars.size() != 2) err("comparison needs two n-variables", f->span);
        break;
      case FKind::Rel: {
        const Symbol* s = vocab_.find(f->name);
        if (!s || s->kind != SymbolKind::Relation)
          err("unknown relation symbol '" + f->name + "'", f->span);
        else if (s->arity != f->terms.size())
          err("relation " + f->name + " expects " + std::to_string(s->arity) + " arguments", f->span);
        for (const auto& t : f->terms) term(t);
        break;
      }
      case FKind::RelVar:
        relvar_use(f->name, f->vars.size(), f->span);
        break;
      case FKind::And:
      case FKind::Or:
      case FKind::Implies:
      case FKind::Iff:
      case FKind::Not:
      case FKind::ExistsN:
      case FKind::ForallN:
        for (const auto& s : f->subs) formula(s);
        break;
      case FKind::IndexEq:
        term(f->terms[0]);
        formula(f->subs[0]);
        break;
      case FKind::GuardedExists: {
        if (vocab_.find(f->vars[0])) err("variable " + f->vars[0] + " clashes with a vocabulary symbol", f->span);
        auto fv = free_variables(f->subs[0]);
        if (fv.v.count(f->vars[0]))
          err("variable " + f->vars[0] + " occurs free in its own index guard", f->subs[0]->span);
        formula(f->subs[0]);
        formula(f->subs[1]);
        break;
      }
      case FKind::Fixpoint:
        fixpoint_node(f);
        break;
      case FKind::Macro:
        macro_node(f);
        break;
    }
  }

 private:
  void err(std::string msg, const SourceSpan& sp) { errs_.push_back({std::move(msg), sp}); }

  void term(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::VVar:
        if (vocab_.find(t->name)) err("variable " + t->name + " clashes with a vocabulary symbol", t->span);
        break;
      case TermKind::Const: {
        const Symbol* s = vocab_.find(t->name);
        if (!s || s->kind != SymbolKind::Constant) err("unknown constant '" + t->name + "'", t->span);
        break;
      }
      case TermKind::Func: {
        const Symbol* s = vocab_.find(t->name);
        if (!s || s->kind != SymbolKind::Function)
          err("unknown function symbol '" + t->name + "'", t->span);
        else if (s->arity != t->args.size())
          err("function " + t->name + " expects " + std::to_string(s->arity) + " arguments", t->span);
        for (const auto& a : t->args) term(a);
        break;
      }
      case TermKind::NVar:
        err("n-variable #" + t->name + " used where a term of sort v is required", t->span);
        break;
    }
  }

  void relvar_use(const std::string& name, std::size_t arity, const SourceSpan& sp) {
    if (vocab_.find(name)) {
      err("relation variable " + name + " clashes with a vocabulary symbol", sp);
      return;
    }
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) {
        if (f->second != arity)
          err("relation variable " + name + " used with arity " + std::to_string(arity) + ", bound with arity " +
                  std::to_string(f->second),
              sp);
        return;
      }
    }
    auto f = free_arity_.find(name);
    if (f == free_arity_.end())
      free_arity_[name] = arity;
    else if (f->second != arity)
      err("free relation variable " + name + " used with inconsistent arities", sp);
  }

  void fixpoint_node(const FormulaPtr& f) {
    if (f->components.empty()) {
      err("fixed point without components", f->span);
      return;
    }
    if (!is_simultaneous(f->fp) && f->components.size() != 1)
      err(fp_keyword(f->fp) + " takes exactly one component", f->span);
    if (f->vars.size() != f->components[0].vars.size())
      err("fixed point applied to " + std::to_string(f->vars.size()) + " variables, but binds " +
              std::to_string(f->components[0].vars.size()),
          f->span);
    std::map<std::string, std::size_t> scope;
    for (const auto& c : f->components) {
      if (scope.count(c.rel)) err("relation variable " + c.rel + " bound twice in one fixed point", f->span);
      if (vocab_.find(c.rel)) err("relation variable " + c.rel + " clashes with a vocabulary symbol", f->span);
      scope[c.rel] = c.vars.size();
      std::set<std::string> distinct(c.vars.begin(), c.vars.end());
      if (distinct.size() != c.vars.size()) err("repeated variable in fixed point binder of " + c.rel, f->span);
    }
    scopes_.push_back(scope);
    for (const auto& c : f->components) formula(c.body);
    scopes_.pop_back();
    if (f->fp == FpKind::LFP || f->fp == FpKind::SLFP) {
      for (const auto& c : f->components) {
        auto body = expand_macros(c.body);
        for (const auto& c2 : f->components)
          if (!positive_in(body, c2.rel, true))
            err("relation variable " + c2.rel + " occurs negatively in the body of " + fp_keyword(f->fp), f->span);
      }
    }
  }

  void macro_node(const FormulaPtr& f) {
    const MacroSignature* sig = find_macro(f->name);
    if (!sig) {
      err("unknown macro '" + f->name + "'", f->span);
      return;
    }
    const auto& a = f->margs;
    if (sig->params == "*") {
      bool ok = !a.empty() && std::all_of(a.begin(), a.end(), [](const MacroArg& x) { return x.kind == MacroArg::Kind::NVar; });
      if (f->name == "TSUCC") ok = ok && a.size() % 2 == 0;
      if (f->name == "RANK") ok = ok && a.size() >= 2;
      if (!ok) err("macro " + f->name + " has malformed n-variable arguments", f->span);
      return;
    }
    if (a.size() != sig->params.size()) {
      err("macro " + f->name + " expects " + std::to_string(sig->params.size()) + " arguments", f->span);
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      const char p = sig->params[i];
      const auto k = a[i].kind;
      if (p == 'T' && k == MacroArg::Kind::Term) {
        term(a[i].term);
      } else if (p == 'N' && k == MacroArg::Kind::NVar) {
      } else if (p == 'R' && k == MacroArg::Kind::Rel) {
        relvar_use(a[i].name, sig->rel_arity, f->span);
      } else if (p == 'R' && k == MacroArg::Kind::Lambda) {
        if (a[i].vars.size() != sig->rel_arity)
          err("macro " + f->name + " expects a relation of arity " + std::to_string(sig->rel_arity), f->span);
        formula(a[i].body);
      } else {
        err("macro " + f->name + ": argument " + std::to_string(i + 1) + " has the wrong kind", f->span);
      }
    }
  }

  // True iff every free occurrence of X in f is under an even number of negations.
  static bool positive_in(const FormulaPtr& f, const std::string& X, bool pos) {
    switch (f->kind) {
      case FKind::RelVar: return f->name != X || pos;
      case FKind::Not: return positive_in(f->subs[0], X, !pos);
      case FKind::Fixpoint: {
        for (const auto& c : f->components)
          if (c.rel == X) return true;  // rebound
        for (const auto& c : f->components)
          if (!positive_in(c.body, X, pos)) return false;
        return true;
      }
      default:
        for (const auto& s : f->subs)
          if (!positive_in(s, X, pos)) return false;
        return true;
    }
  }

  const Vocabulary& vocab_;
  std::vector<WfError>& errs_;
  std::vector<std::map<std::string, std::size_t>> scopes_;
  std::map<std::string, std::size_t> free_arity_;
};

}  // namespace

std::vector<WfError> check_well_formed(const FormulaPtr& f, const Vocabulary& v) {
  std::vector<WfError> errs;
  WfChecker c(v, errs);
  c.formula(f);
  return errs;
}

namespace {
std::string join_wf(const std::vector<WfError>& errs) {
  std::string out = "ill-formed formula:";
  for (const auto& e : errs)
    out += "\n  " + std::to_string(e.span.line) + ":" + std::to_string(e.span.column) + ": " + e.message;
  return out;
}
}  // namespace

IllFormed::IllFormed(std::vector<WfError> errors) : std::runtime_error(join_wf(errors)), errors_(std::move(errors)) {}

}  // namespace idxlog
