#include <gtest/gtest.h>

#include "idxlog/differential.hpp"
#include "idxlog/evaluator.hpp"
#include "idxlog/library.hpp"
#include "idxlog/parser.hpp"
#include "idxlog/transforms.hpp"

using namespace idxlog;

namespace {

SizePlan plan(std::uint64_t n_min, std::uint64_t n_max, std::uint64_t limit = 1 << 16, std::uint64_t samples = 50) {
  SizePlan p;
  p.n_min = n_min;
  p.n_max = n_max;
  p.exhaustive_limit = limit;
  p.samples = samples;
  return p;
}

Vocabulary edge_only() {
  Vocabulary v;
  v.add_relation("E", 2);
  return v;
}

}  // namespace

// ---------------------------------------------------------------- eliminate_order

TEST(EliminateOrder, OrderFreeInputUnchanged) {
  auto f = parse_formula("EX x = index{#i : ZERO(#i)}. E(x, x)", edge_only());
  EXPECT_EQ(eliminate_order(f, edge_only()), f);
}

TEST(EliminateOrder, TwoGuardsEquivalentOnAllGraphs) {
  auto f = parse_formula("EX x = index{#a : ZERO(#a)}. EX y = index{#b : TOP(#b)}. E(x, y) & x <= y", edge_only());
  auto g = eliminate_order(f, edge_only());
  EXPECT_FALSE(compares_domain_terms(g));
  EXPECT_TRUE(check_well_formed(g, edge_only()).empty());
  auto rep = compare_order_elimination(f, edge_only(), plan(1, 4));
  EXPECT_EQ(rep.cases, 2u + 16u + 512u + 65536u);
  EXPECT_TRUE(rep.ok()) << rep.summary();
}

TEST(EliminateOrder, ReflexiveComparisonStaysValid) {
  auto f = parse_formula("EX x = index{#a : ZERO(#a)}. x <= x", Vocabulary{});
  auto g = eliminate_order(f, Vocabulary{});
  EXPECT_FALSE(compares_domain_terms(g));
  for (std::uint64_t n = 1; n <= 8; ++n) {
    Structure s(Vocabulary{}, n);
    // the guard names 1, or 0 when there are no bit positions; both exist
    EXPECT_TRUE(eval_formula(g, s).value) << n;
    EXPECT_EQ(eval_formula(g, s).value, eval_formula(f, s).value) << n;
  }
}

TEST(EliminateOrder, IndexEqualityOnGuardedVariable) {
  auto f = parse_formula(
      "EX x = index{#a : TOP(#a)}. EX y = index{#b : ZERO(#b)}. y <= x & x = index{#c : TOP(#c) | ZERO(#c)}",
      edge_only());
  auto g = eliminate_order(f, edge_only());
  EXPECT_FALSE(compares_domain_terms(g));
  auto rep = compare_order_elimination(f, edge_only(), plan(1, 8, 1 << 10, 20));
  EXPECT_TRUE(rep.ok()) << rep.summary();
}

TEST(EliminateOrder, BitMacroIsTranslated) {
  // BIT compares a guarded variable with its term
  auto f = parse_formula("EX x = index{#a : ZERO(#a)}. EX y = index{#b : BIT(x, #b)}. E(x, y)", edge_only());
  EXPECT_TRUE(compares_domain_terms(f));
  auto g = eliminate_order(f, edge_only());
  EXPECT_FALSE(compares_domain_terms(g));
  auto rep = compare_order_elimination(f, edge_only(), plan(1, 4, 1 << 10, 100));
  EXPECT_TRUE(rep.ok()) << rep.summary();
}

TEST(EliminateOrder, Corpus) {
  for (const auto& text : order_corpus_text()) {
    auto f = parse_formula(text, order_vocabulary());
    auto rep = compare_order_elimination(f, order_vocabulary(), plan(1, 4, 1 << 12, 300));
    EXPECT_TRUE(rep.ok()) << text << ": " << rep.summary();
  }
}

TEST(EliminateOrder, Errors) {
  Vocabulary cv;
  cv.add_constant("c");
  auto f = parse_formula("EX x = index{#a : ZERO(#a)}. x <= c", cv);
  EXPECT_THROW(eliminate_order(f, cv), TransformError);
  auto open = parse_formula_unchecked("x <= x", Vocabulary{});
  EXPECT_THROW(eliminate_order(open, Vocabulary{}), TransformError);
}

// ---------------------------------------------------------------- eliminate_constants

TEST(EliminateConstants, DistinctConstantsBecomeFalse) {
  auto e = eliminate_constants(parse_formula("c = d", constants_vocabulary()), constants_vocabulary());
  EXPECT_TRUE(structurally_equal(e.sentence, falsity()));
  auto same = eliminate_constants(parse_formula("c = c", constants_vocabulary()), constants_vocabulary());
  EXPECT_TRUE(structurally_equal(same.sentence, truth()));
}

TEST(EliminateConstants, ConstantEqualsVariable) {
  auto f = parse_formula("EX x = index{#i : ZERO(#i)}. c = x", constants_vocabulary());
  auto e = eliminate_constants(f, constants_vocabulary());
  EXPECT_EQ(e.relation.at("c"), "C");
  EXPECT_EQ(e.relation.at("d"), "D");
  ASSERT_EQ(e.sentence->kind, FKind::GuardedExists);
  EXPECT_TRUE(structurally_equal(e.sentence->subs[1], rel("C", {vvar("x")})));
}

TEST(EliminateConstants, ConstantEqualsIndex) {
  auto f = parse_formula("c = index{#i : ZERO(#i)}", constants_vocabulary());
  auto e = eliminate_constants(f, constants_vocabulary());
  ASSERT_EQ(e.sentence->kind, FKind::GuardedExists);
  EXPECT_EQ(e.sentence->subs[1]->kind, FKind::Rel);
  EXPECT_EQ(e.sentence->subs[1]->name, "C");
  EXPECT_TRUE(check_well_formed(e.sentence, e.vocabulary).empty());
}

TEST(EliminateConstants, CorpusOnDisjointSingletons) {
  for (const auto& text : constant_corpus_text()) {
    auto f = parse_formula(text, constants_vocabulary());
    auto rep = compare_constant_elimination(f, constants_vocabulary(), plan(2, 6));
    // n(n-1) placements of two distinct constants
    EXPECT_EQ(rep.cases, 2u + 6u + 12u + 20u + 30u) << text;
    EXPECT_TRUE(rep.ok()) << text << ": " << rep.summary();
  }
}

TEST(EliminateConstants, Errors) {
  EXPECT_THROW(eliminate_constants(parse_formula("EX x = index{#i : ZERO(#i)}. c <= x", constants_vocabulary()),
                                   constants_vocabulary()),
               TransformError);
  EXPECT_THROW(eliminate_constants(parse_formula("EX x = index{#i : ZERO(#i)}. E(x, x)", edge_only()), edge_only()),
               TransformError);
}

TEST(EliminateConstants, NameClashGetsSuffix) {
  Vocabulary v;
  v.add_constant("c").add_constant("C");
  auto e = eliminate_constants(parse_formula("c = C", v), v);
  EXPECT_NE(e.relation.at("c"), e.relation.at("C"));
}

// ---------------------------------------------------------------- compilers

TEST(CompileIfp, DemoMachinesAgreeWithRuns) {
  for (const auto& d : demo_dam_machines()) {
    auto a = compile_dam_to_ifp_sentence(d.machine, d.ifp_k);
    auto rep = compare_compiled(d.machine, a, plan(2, 8, 300, 8));
    EXPECT_GT(rep.cases, 0u);
    EXPECT_TRUE(rep.ok()) << d.name << ": " << rep.summary();
  }
}

TEST(CompilePfp, DemoMachinesAgreeWithRuns) {
  for (const auto& d : demo_dam_machines()) {
    auto a = compile_dam_to_pfp_sentence(normalize_machine_for_pfp(d.machine), d.pfp_width);
    auto rep = compare_compiled(d.machine, a, plan(2, 8, 300, 8));
    EXPECT_GT(rep.cases, 0u);
    EXPECT_TRUE(rep.ok()) << d.name << ": " << rep.summary();
  }
}

TEST(CompileIfp, EvenNExactly) {
  auto a = compile_dam_to_ifp_sentence(make_dam_even_n(), 1);
  for (std::uint64_t n = 2; n <= 12; ++n)
    EXPECT_EQ(eval_formula(a.sentence, Structure(Vocabulary{}, n)).value, n % 2 == 0) << n;
}

TEST(CompileIfp, RelationProbeExhaustiveSmall) {
  auto m = make_dam_relation_probe();
  auto a = compile_dam_to_ifp_sentence(m, 1);
  auto rep = compare_compiled(m, a, plan(3, 3));
  EXPECT_EQ(rep.cases, 512u);
  EXPECT_EQ(rep.skipped, 0u);
  EXPECT_TRUE(rep.ok()) << rep.summary();
}

TEST(CompileIfp, ImmediateAcceptIsValid) {
  auto a = compile_dam_to_ifp_sentence(make_dam_accept_immediately(), 1);
  auto b = compile_dam_to_pfp_sentence(normalize_machine_for_pfp(make_dam_accept_immediately()));
  for (std::uint64_t n = 1; n <= 10; ++n) {
    EXPECT_TRUE(eval_formula(b.sentence, Structure(Vocabulary{}, n)).value) << n;
    if (n >= 2) EXPECT_TRUE(eval_formula(a.sentence, Structure(Vocabulary{}, n)).value) << n;
  }
}

TEST(CompilePfp, NonConvergingRunIsFalse) {
  auto a = compile_dam_to_pfp_sentence(normalize_machine_for_pfp(make_dam_two_cycle()));
  for (std::uint64_t n = 2; n <= 10; ++n) EXPECT_FALSE(eval_formula(a.sentence, Structure(Vocabulary{}, n)).value);
}

TEST(CompilePfp, RequiresNormalizedMachine) {
  EXPECT_THROW(compile_dam_to_pfp_sentence(make_dam_even_n()), TransformError);
  EXPECT_NO_THROW(compile_dam_to_pfp_sentence(normalize_machine_for_pfp(make_dam_even_n())));
}

TEST(Compile, RejectsRamMachinesAndZeroExponent) {
  EXPECT_THROW(compile_dam_to_ifp_sentence(make_ram_even_length(), 1), TransformError);
  EXPECT_THROW(compile_dam_to_ifp_sentence(make_dam_even_n(), 0), TransformError);
}

TEST(Compile, DeterministicAndWellFormed) {
  for (const auto& d : demo_dam_machines()) {
    auto a = compile_dam_to_ifp_sentence(d.machine, d.ifp_k);
    auto b = compile_dam_to_ifp_sentence(d.machine, d.ifp_k);
    EXPECT_TRUE(structurally_equal(a.sentence, b.sentence)) << d.name;
    EXPECT_EQ(render_formula(a.sentence), render_formula(b.sentence));
    EXPECT_TRUE(check_well_formed(a.sentence, d.machine.vocab).empty()) << d.name;
    EXPECT_EQ(a.nodes, node_count(a.sentence));
    auto reparsed = parse_formula(render_formula(a.sentence), d.machine.vocab);
    EXPECT_EQ(render_formula(reparsed), render_formula(a.sentence)) << d.name;
  }
}

TEST(Compile, SymbolTableCoversStatesAndTapes) {
  const auto m = make_dam_function_probe();
  auto a = compile_dam_to_ifp_sentence(m, 2);
  EXPECT_EQ(a.k, 2u);
  auto count = [&](const std::string& prefix) {
    std::size_t c = 0;
    for (const auto& [name, what] : a.symbols)
      if (what.rfind(prefix, 0) == 0) ++c;
    return c;
  };
  EXPECT_EQ(count("state "), m.states.size());
  EXPECT_EQ(count("head of tape "), m.tapes.size());
  std::size_t writable = 0;
  for (const auto& t : m.tapes) writable += is_writable(t.role);
  EXPECT_EQ(count("tape "), 3 * writable);
  std::set<std::string> names;
  for (const auto& [name, what] : a.symbols) EXPECT_TRUE(names.insert(name).second) << name;
}
