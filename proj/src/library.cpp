#include "idxlog/library.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "idxlog/parser.hpp"

namespace idxlog {

Vocabulary bit_validity_vocabulary() {
  Vocabulary v;
  v.add_constant("c");
  return v;
}

FormulaPtr bit_validity_sentence() {
  return parse_formula("EX x = index{#i : BIT(c, #i)}. x = c", bit_validity_vocabulary());
}

Vocabulary search_vocabulary() {
  Vocabulary v;
  v.add_function("K", 1).add_constant("N").add_constant("T").add_relation("Prec", 2);
  return v;
}

namespace {

// How the loop variables are referenced at iteration #p, bit #u.
using Ref = std::function<std::string(const std::string& p, const std::string& u)>;

struct SearchText {
  Ref l, r;
  bool ceiling;

  std::string avg(const std::string& p, const std::string& x) const {
    return std::string(ceiling ? "AVGC" : "AVG") + "({#u : " + l(p, "u") + "}, {#u : " + r(p, "u") + "}, #" + x + ")";
  }
  // K(I) is strictly above T.
  std::string test(const std::string& p) const {
    return "(EX e = index{#v : " + avg(p, "v") + "}. Prec(T, K(e)))";
  }
  std::string done(const std::string& p) const {
    return "EQSH({#u : " + l(p, "u") + "}, {#u : " + r(p, "u") + "})";
  }
  std::string minusone(const std::string& p, const std::string& x) const {
    return "MINUSONE({#w : " + avg(p, "w") + "}, #" + x + ")";
  }
  std::string step_l(const std::string& p, const std::string& x, bool guarded) const {
    std::string core = "((" + test(p) + " -> " + l(p, x) + ") & (!" + test(p) + " -> " + avg(p, x) + "))";
    if (!guarded) return core;
    return "((" + done(p) + " -> " + l(p, x) + ") & (!" + done(p) + " -> " + core + "))";
  }
  std::string step_r(const std::string& p, const std::string& x, bool guarded) const {
    std::string core = "((" + test(p) + " -> " + minusone(p, x) + ") & (!" + test(p) + " -> " + r(p, x) + "))";
    if (!guarded) return core;
    return "((" + done(p) + " -> " + r(p, x) + ") & (!" + done(p) + " -> " + core + "))";
  }
};

std::string at(const std::string& rel, const std::string& p, const std::string& u) {
  return rel + "(#" + p + ", #" + u + ")";
}

// The simultaneous fixed point over L, R and the iteration counter Z, with
// `first` (L or R) as the component the application tests.
std::string search_fixpoint(bool ceiling, bool guarded, char first) {
  SearchText in{[](auto& p, auto& u) { return at("L", p, u); }, [](auto& p, auto& u) { return at("R", p, u); },
                ceiling};
  const std::string next = "EX #p. MAX(Z, #p) & SUCC(#z, #p) & ";
  const std::string phi_z = "(EMPTY(Z) & ZERO(#z)) | (!EMPTY(Z) & (EX #m. MAX(Z, #m) & SUCC(#z, #m)))";
  const std::string phi_l = "!EMPTY(Z) & (" + next + in.step_l("p", "x", guarded) + ")";
  const std::string phi_r = "(EMPTY(Z) & ZERO(#z) & MINUSONE({#u : BIT(N, #u)}, #x)) | (!EMPTY(Z) & (" + next +
                            in.step_r("p", "x", guarded) + "))";
  const std::string cl = "#z, #x, L . " + phi_l, cr = "#z, #x, R . " + phi_r, cz = "#z, Z . " + phi_z;
  return "[SIFP " + (first == 'L' ? cl + " ; " + cr : cr + " ; " + cl) + " ; " + cz + "]";
}

}  // namespace

std::string binary_search_text() {
  const std::string fl = search_fixpoint(true, true, 'L'), fr = search_fixpoint(true, true, 'R');
  SearchText last{[&](auto& p, auto& u) { return fl + "(#" + p + ", #" + u + ")"; },
                  [&](auto& p, auto& u) { return fr + "(#" + p + ", #" + u + ")"; }, true};
  return "EX x = index{#l : EX #s. TOP(#s) & " + last.step_l("s", "l", true) + "}. K(x) = T";
}

std::string binary_search_verbatim_text() {
  return "EX x = index{#l : EX #s. ALL #t. (#t <= #s & " + search_fixpoint(false, false, 'L') +
         "(#s, #l))}. K(x) = T";
}

FormulaPtr binary_search_sentence() { return parse_formula(binary_search_text(), search_vocabulary()); }

FormulaPtr binary_search_sentence_verbatim() {
  return parse_formula(binary_search_verbatim_text(), search_vocabulary());
}

bool search_oracle(const Structure& s) {
  const auto n_len = s.constant("N"), t = s.constant("T");
  for (Elem x = 0; x < n_len && x < s.size(); ++x)
    if (s.apply("K", {x}) == t) return true;
  return false;
}

Structure random_sorted_array(std::uint64_t n, std::mt19937_64& rng) {
  if (n < 2) throw DomainError("sorted-array structures need n >= 2");
  Structure s(search_vocabulary(), n);
  auto uni = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng); };

  std::vector<std::uint64_t> pos(n);  // position of each element in the key order
  std::iota(pos.begin(), pos.end(), 0);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::vector<bool> prec(n * n);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b) prec[a * n + b] = pos[a] < pos[b];
  s.set_relation_bits("Prec", std::move(prec));

  const std::uint64_t len = uni(1, n - 1);
  std::vector<std::uint64_t> keys(len);
  for (auto& k : keys) k = uni(0, n - 1);
  std::sort(keys.begin(), keys.end(), [&](auto a, auto b) { return pos[a] < pos[b]; });
  std::vector<std::uint64_t> table(n);
  for (std::uint64_t i = 0; i < n; ++i) table[i] = i < len ? keys[i] : uni(0, n - 1);
  s.set_function("K", std::move(table));
  s.set_constant("N", len);
  s.set_constant("T", uni(0, 1) ? keys[uni(0, len - 1)] : uni(0, n - 1));
  return s;
}

Structure random_constant_structure(std::uint64_t n, std::mt19937_64& rng) {
  Structure s(bit_validity_vocabulary(), n);
  s.set_constant("c", std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng));
  return s;
}

std::vector<std::string> family_names() { return {"bit-validity", "sorted-array", "empty", "graph"}; }

Structure make_family_member(const std::string& family, std::uint64_t n, std::mt19937_64& rng) {
  if (family == "bit-validity") return random_constant_structure(n, rng);
  if (family == "sorted-array") return random_sorted_array(n, rng);
  if (family == "empty") return Structure(Vocabulary{}, n);
  if (family == "graph") return random_structure(graph_vocabulary(), n, rng);
  throw std::invalid_argument("unknown structure family '" + family + "'");
}

Vocabulary graph_vocabulary() {
  Vocabulary v;
  v.add_relation("E", 2);
  return v;
}

Vocabulary constants_vocabulary() {
  Vocabulary v;
  v.add_constant("c").add_constant("d");
  return v;
}

Vocabulary order_vocabulary() {
  Vocabulary v;
  v.add_relation("P", 1).add_relation("E", 2);
  return v;
}

namespace {

// E between the elements 2^#a and 2^#b.
std::string edge(const std::string& a, const std::string& b) {
  return "(EX x = index{#q : #q = #" + a + "}. EX y = index{#r : #r = #" + b + "}. E(x, y))";
}

}  // namespace

std::vector<std::string> positive_corpus_text() {
  const auto E = edge;
  return {
      "ALL #m. [LFP #i, X . ZERO(#i) | (EX #j. X(#j) & SUCC(#i, #j))](#m)",
      "EX #m. [LFP #i, X . (ZERO(#i) & " + E("i", "i") + ") | (EX #j. X(#j) & " + E("j", "i") + ")](#m)",
      "ALL #m. [LFP #i, X . " + E("i", "i") + " | (EX #j. X(#j) & " + E("i", "j") + ")](#m)",
      "EX #m. TOP(#m) & [LFP #i, X . ZERO(#i) | (EX #j. X(#j) & SUCC(#i, #j) & " + E("j", "i") + ")](#m)",
      "EX #a. EX #b. !(#a <= #b) & [LFP #i, #j, X . " + E("i", "j") +
          " | (EX #k. X(#i, #k) & X(#k, #j))](#a, #b)",
      "ALL #a. [LFP #i, #j, X . " + E("i", "j") + " | (EX #k. " + E("i", "k") + " & X(#k, #j))](#a, #a)",
      "EX #m. [LFP #i, X . TOP(#i) & (" + E("i", "i") + " | X(#i))](#m)",
      "ALL #m. !" + E("m", "m") + " | [LFP #i, X . " + E("i", "i") +
          " & (ZERO(#i) | (EX #j. SUCC(#i, #j) & X(#j)))](#m)",
      "EX #m. [LFP #i, X . (EX #j. " + E("j", "i") + ") | (ALL #j. #j <= #i | X(#j))](#m)",
      "ALL #a. ALL #b. [LFP #i, #j, X . #i = #j | (EX #k. X(#i, #k) & " + E("k", "j") + ")](#a, #b) -> " +
          E("a", "b") + " | #a = #b",
      "EX #m. TOP(#m) & [LFP #i, X . [LFP #j, Y . ZERO(#j) | (EX #k. Y(#k) & SUCC(#j, #k) & " + E("k", "j") +
          ")](#i) | (EX #k. X(#k) & SUCC(#i, #k))](#m)",
      "EX #m. TOP(#m) & [SLFP #i, X . ZERO(#i) | (EX #j. Y(#j) & SUCC(#i, #j)) ; #i, Y . EX #j. X(#j) & " +
          E("j", "i") + "](#m)",
      "ALL #m. [LFP #i, X . ALL #j. #j <= #i -> ZERO(#j) | X(#j) | " + E("j", "j") + "](#m)",
      "EX #m. ZERO(#m) & [LFP #i, X . EX x = index{#q : #q = #i}. E(x, x) | (EX #j. X(#j) & !(#j <= #i))](#m)",
      "ALL #a. [LFP #i, #j, X . (ZERO(#i) & ZERO(#j)) | (EX #k. X(#k, #j) & SUCC(#i, #k)) | "
      "(EX #k. X(#i, #k) & SUCC(#j, #k))](#a, #a)",
      "EX #a. EX #b. [LFP #i, #j, X . (" + E("i", "j") + " & " + E("j", "i") +
          ") | (EX #k. X(#i, #k) & X(#k, #j))](#a, #b)",
      "(EX #m. [LFP #i, X . " + E("i", "i") + " | (EX #j. X(#j))](#m)) <-> (EX #m. " + E("m", "m") + ")",
      "ALL #m. [LFP #i, X . !" + E("i", "i") + " | X(#i)](#m) | " + E("m", "m"),
      "EX #m. [LFP #i, X . EX #j. " + E("i", "j") + " & (ZERO(#j) | X(#j))](#m)",
      "ALL #m. [LFP #i, X . (TOP(#i) & " + E("i", "i") + ") | (EX #j. X(#j) & SUCC(#j, #i) & " + E("j", "i") +
          ")](#m) -> " + E("m", "m") + " | (EX #j. " + E("j", "m") + ")",
  };
}

std::vector<std::string> pfp_corpus_text() {
  const auto E = edge;
  return {
      "!X(#i)",
      "X(#i) | ZERO(#i)",
      "ZERO(#i) | (EX #j. X(#j) & SUCC(#i, #j))",
      "EX #j. X(#j) & SUCC(#i, #j)",
      "(ZERO(#i) & !X(#i)) | (EX #j. SUCC(#i, #j) & X(#j))",
      E("i", "i") + " & !X(#i)",
      "(EMPTY(X) & ZERO(#i)) | (EX #j. SUCC(#i, #j) & X(#j))",
      "(EMPTY(X) & TOP(#i)) | (EX #j. X(#j) & SUCC(#j, #i))",
      "EX #j. " + E("j", "i") + " & !X(#j)",
      "X(#i) <-> !" + E("i", "i"),
  };
}

std::vector<std::string> constant_corpus_text() {
  return {
      "c = d",
      "EX x = index{#i : #i = #i}. x = c",
      "c = index{#i : ZERO(#i)}",
      "EX #m. TOP(#m) & [IFP #i, X . ZERO(#i) | (EX #j. X(#j) & SUCC(#i, #j) & !(d = index{#k : #k <= #j}))](#m)",
      "EX x = index{#i : ZERO(#i)}. (c = x | d = x) & !(c = d)",
  };
}

std::vector<std::string> order_corpus_text() {
  return {
      "EX x = index{#i : ZERO(#i)}. EX y = index{#j : TOP(#j)}. x <= y",
      "EX x = index{#i : #i = #i}. EX y = index{#j : ZERO(#j)}. E(x, y) & y <= x",
      "EX #m. EX x = index{#i : #i <= #m}. EX y = index{#j : #j = #m}. x <= y & P(x)",
      "EX x = index{#i : ZERO(#i)}. x <= x",
      "ALL #m. EX x = index{#i : #i = #m}. EX y = index{#j : !(#j <= #m)}. (x <= y) <-> E(x, y)",
      "EX x = index{#i : TOP(#i)}. x = index{#j : TOP(#j) | ZERO(#j)} | P(x)",
      "EX x = index{#i : ZERO(#i)}. EX y = index{#j : !ZERO(#j)}. E(x, y) & x <= y",
  };
}

FormulaPtr relabel_fixpoints(const FormulaPtr& f, FpKind from, FpKind to) {
  auto g = std::make_shared<Formula>(*f);
  if (g->kind == FKind::Fixpoint && g->fp == from) g->fp = to;
  for (auto& s : g->subs) s = relabel_fixpoints(s, from, to);
  for (auto& c : g->components) c.body = relabel_fixpoints(c.body, from, to);
  for (auto& a : g->margs)
    if (a.body) a.body = relabel_fixpoints(a.body, from, to);
  return g;
}

}  // namespace idxlog
