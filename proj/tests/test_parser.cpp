#include <gtest/gtest.h>

#include <random>

#include "idxlog/parser.hpp"

using namespace idxlog;

namespace {

Vocabulary test_vocab() {
  Vocabulary v;
  v.add_relation("P", 1).add_relation("E", 2).add_constant("c").add_function("f", 1);
  return v;
}

class RandomFormulas {
 public:
  explicit RandomFormulas(std::uint64_t seed) : rng_(seed) {}

  FormulaPtr formula(int depth) {
    if (depth <= 0) return atom();
    switch (pick(12)) {
      case 0: return conj(formula(depth - 1), formula(depth - 1));
      case 1: return disj(formula(depth - 1), formula(depth - 1));
      case 2: return implies(formula(depth - 1), formula(depth - 1));
      case 3: return iff(formula(depth - 1), formula(depth - 1));
      case 4: return neg(formula(depth - 1));
      case 5: return exists_n(nv(), formula(depth - 1));
      case 6: return forall_n(nv(), formula(depth - 1));
      case 7: return guarded_exists(vv(), nv(), formula(depth - 1), formula(depth - 1));
      case 8: return index_eq(term(1), nv(), formula(depth - 1));
      case 9: {
        std::vector<FixComponent> comps;
        comps.reserve(2);
        comps.push_back({{nv()}, "X", formula(depth - 1)});
        FpKind k = static_cast<FpKind>(pick(3));
        if (pick(2)) {
          comps.push_back({{nv()}, "Y", formula(depth - 1)});
          k = pick(2) ? FpKind::SIFP : FpKind::SPFP;
        }
        return fixpoint(k, comps, {nv()});
      }
      case 10: return bit(term(1), nv());
      default: return macro("LTSH", {lambda_arg({nv()}, formula(depth - 1)), rel_arg("X")});
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::string nv() { return std::string(1, "ijk"[pick(3)]); }
  std::string vv() { return std::string(1, "xyz"[pick(3)]); }
  TermPtr term(int depth) {
    int k = pick(depth > 0 ? 3 : 2);
    if (k == 0) return vvar(vv());
    if (k == 1) return constant("c");
    return func("f", {term(depth - 1)});
  }
  FormulaPtr atom() {
    switch (pick(7)) {
      case 0: return leq(term(1), term(1));
      case 1: return eq(term(1), term(1));
      case 2: return nleq(nv(), nv());
      case 3: return neq(nv(), nv());
      case 4: return rel("P", {term(1)});
      case 5: return rel("E", {term(0), term(1)});
      default: return relvar("X", {nv()});
    }
  }
  std::mt19937_64 rng_;
};

}  // namespace

TEST(ParseFormula, ValiditySentence) {
  Vocabulary v;
  v.add_constant("c");
  auto f = parse_formula("EX x = index{#i : BIT(c,#i)}. x = c", v);
  auto want = guarded_exists("x", "i", bit(constant("c"), "i"), eq(vvar("x"), constant("c")));
  EXPECT_TRUE(structurally_equal(f, want));
}

TEST(ParseFormula, UnbalancedReportsOffset) {
  Vocabulary v;
  v.add_relation("P", 1);
  try {
    parse_formula("P(x", v);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().start, 3u);
  }
}

TEST(ParseFormula, FixpointNode) {
  auto f = parse_formula("[IFP #i, X . #i <= #i](#j)", Vocabulary{});
  ASSERT_EQ(f->kind, FKind::Fixpoint);
  EXPECT_EQ(f->fp, FpKind::IFP);
  ASSERT_EQ(f->components.size(), 1u);
  EXPECT_EQ(f->components[0].vars.size(), 1u);
  EXPECT_EQ(f->vars, std::vector<std::string>{"j"});
}

TEST(ParseFormula, PrecedenceAndAssociativity) {
  Vocabulary v;
  auto f = parse_formula("A() | B() & !C() -> D() <-> E()", v);
  // ((A | (B & !C)) -> D) <-> E
  ASSERT_EQ(f->kind, FKind::Iff);
  ASSERT_EQ(f->subs[0]->kind, FKind::Implies);
  ASSERT_EQ(f->subs[0]->subs[0]->kind, FKind::Or);
  EXPECT_EQ(f->subs[0]->subs[0]->subs[1]->kind, FKind::And);
  auto g = parse_formula("A() -> B() -> C()", v);
  EXPECT_EQ(g->subs[0]->kind, FKind::Implies);
}

TEST(ParseFormula, QuantifierBodyExtendsRight) {
  auto f = parse_formula("EX #i. #i <= #i & #i = #i", Vocabulary{});
  ASSERT_EQ(f->kind, FKind::ExistsN);
  EXPECT_EQ(f->subs[0]->kind, FKind::And);
}

TEST(ParseFormula, WellFormednessIsForwarded) {
  Vocabulary v;
  v.add_relation("P", 1);
  EXPECT_THROW(parse_formula("EX x = index{#i : x <= x}. P(x)", v), IllFormed);
  EXPECT_THROW(parse_formula("[LFP #i, X . !X(#i)](#j)", v), IllFormed);
}

TEST(ParseFormula, ErrorsStayInsideInput) {
  Vocabulary v = test_vocab();
  const std::vector<std::string> bad = {"", "P(", "EX", "[IFP #i, X . ](#j)", "#i <=", "x <= ", "((P(x)", "P(x))",
                                        "EX x = index{#i : P(x)", "f(x)", "E(x,)", "@"};
  for (const auto& text : bad) {
    try {
      parse_formula_unchecked(text, v);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_LE(e.span().start, text.size()) << text;
      EXPECT_LE(e.span().end, text.size()) << text;
    }
  }
}

TEST(ParseFormula, CommentsAndSpans) {
  Vocabulary v;
  v.add_relation("P", 1);
  auto f = parse_formula("// leading comment\nP(x) & P(y)", v);
  EXPECT_EQ(f->span.line, 2u);
  EXPECT_EQ(f->subs[1]->span.column, 8u);
  // children nest inside parents
  EXPECT_GE(f->subs[0]->span.start, f->span.start);
  EXPECT_LE(f->subs[1]->span.end, f->span.end);
}

TEST(RenderFormula, AtomAndBitExpansionRoundTrip) {
  Vocabulary v;
  v.add_relation("P", 1).add_constant("c");
  EXPECT_EQ(render_formula(parse_formula("P(x)", v)), "P(x)");
  auto e = expand_macros(bit(constant("c"), "x"));
  auto back = parse_formula(render_formula(e), v);
  EXPECT_TRUE(structurally_equal(back, e));
}

TEST(RenderFormula, RandomRoundTrip) {
  const Vocabulary v = test_vocab();
  RandomFormulas gen(11);
  for (int i = 0; i < 400; ++i) {
    auto f = gen.formula(1 + i % 6);
    const std::string text = render_formula(f);
    FormulaPtr back;
    ASSERT_NO_THROW(back = parse_formula_unchecked(text, v)) << text;
    ASSERT_TRUE(structurally_equal(back, f)) << text << "\n" << render_formula(back);
    ASSERT_EQ(render_formula(back), text);
  }
}

TEST(ParseStructure, Examples) {
  auto s = parse_structure("domain 4\nrel P/1 = {(1)}\n");
  EXPECT_EQ(s.size(), 4u);
  EXPECT_TRUE(s.holds("P", {1}));
  EXPECT_FALSE(s.holds("P", {0}));

  auto t = parse_structure("# successor\ndomain 4\nfun f/1 = [1,2,3,0]\n");
  for (Elem x = 0; x < 4; ++x) EXPECT_EQ(t.apply("f", {x}), (x + 1) % 4);

  EXPECT_THROW(parse_structure("domain 4\nfun f/1 = [1,2,3]\n"), InvalidStructure);
  EXPECT_THROW(parse_structure("domain 4\nrel P/1 = {}\nrel P/1 = {}\n"), ParseError);
  EXPECT_THROW(parse_structure("domain 4\nrel P/1 = {(1,2)}\n"), ParseError);
  EXPECT_THROW(parse_structure("rel P/1 = {}\n"), ParseError);
}

TEST(ParseStructure, RenderRoundTrip) {
  Vocabulary v;
  v.add_relation("E", 2).add_constant("c").add_function("g", 2);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    auto s = random_structure(v, 2 + i % 5, rng);
    EXPECT_TRUE(parse_structure(render_structure(s)) == s);
  }
}

TEST(ParseMachine, Example1AndErrors) {
  auto m = make_length_discovery_machine();
  EXPECT_EQ(m.kind, MachineKind::Ram);
  EXPECT_EQ(m.tapes[1].role, TapeRole::Index);
  auto again = parse_machine(render_machine(m));
  EXPECT_EQ(render_machine(again), render_machine(m));

  const std::string dup = "machine ram\nstates a b\ninitial a\naccepting b\ntapes 0\na, 0, * -> b, (1,S)\na, *, 0 -> a, (0,S)\n";
  try {
    parse_machine(dup);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("nondeterministic"), std::string::npos);
    EXPECT_EQ(e.span().line, 7u);
  }
  EXPECT_THROW(parse_machine("machine ram\nstates\ninitial a\ntapes 0\n"), ParseError);
  EXPECT_THROW(parse_machine("machine ram\ninitial a\ntapes 0\n"), ParseError);
  EXPECT_THROW(parse_machine("machine ram\nstates a\ninitial a\ntapes 0\na, 0, * -> zz, (1,S)\n"), ParseError);
}

TEST(ParseMachine, DamRosterRoundTrip) {
  for (const auto& m : {make_dam_relation_probe(), make_dam_function_probe(), make_dam_constant_odd()}) {
    auto text = render_machine(m);
    auto back = parse_machine(text);
    EXPECT_EQ(render_machine(back), text);
    EXPECT_TRUE(back.vocab == m.vocab);
  }
  // missing address tape for R's second argument
  EXPECT_THROW(parse_machine("machine dam\nrel R/2\nstates a\ninitial a\ntape A addr R 1\ntape N size\ntape W work\n"),
               ParseError);
  // writing on a read-only tape
  EXPECT_THROW(parse_machine("machine dam\nstates a\ninitial a\ntape N size\ntape W work\na, *, * -> a, (1,S), (1,S)\n"),
               ParseError);
}
