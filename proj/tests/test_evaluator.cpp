#include <gtest/gtest.h>

#include "idxlog/evaluator.hpp"
#include "idxlog/library.hpp"
#include "idxlog/parser.hpp"
#include "idxlog/oracles.hpp"

using namespace idxlog;

namespace {

Structure successor_structure(std::uint64_t n) {
  Vocabulary v;
  v.add_constant("c").add_function("f", 1);
  Structure s(v, n);
  std::vector<std::uint64_t> f(n);
  for (std::uint64_t i = 0; i < n; ++i) f[i] = (i + 1) % n;
  s.set_function("f", f);
  return s;
}

bool eval(const std::string& text, const Structure& s, const Valuation& val = {}) {
  return eval_formula(parse_formula(text, s.vocabulary()), s, val).value;
}

}  // namespace

TEST(EvalTerm, Examples) {
  Structure s = successor_structure(8);
  s.set_constant("c", 5);
  EXPECT_EQ(eval_term(constant("c"), s, {}), 5u);

  Structure t = successor_structure(4);
  EXPECT_EQ(eval_term(func("f", {vvar("x")}), t, Valuation{}.bind_v("x", 3)), 0u);

  Vocabulary v;
  v.add_function("f", 1);
  Structure id(v, 4);
  id.set_function("f", {0, 1, 2, 3});
  EXPECT_EQ(eval_term(func("f", {func("f", {vvar("x")})}), id, Valuation{}.bind_v("x", 1)), 1u);

  EXPECT_THROW(eval_term(vvar("y"), t, {}), EvalError);
}

TEST(EvalIndexNumber, Examples) {
  Structure s = successor_structure(8);
  s.set_constant("c", 5);
  EXPECT_EQ(eval_index_number(falsity(), "x", s), 0u);
  EXPECT_EQ(eval_index_number(neq("x", "x"), "x", s), 7u);
  EXPECT_EQ(eval_index_number(bit(constant("c"), "x"), "x", s), 5u);
}

TEST(EvalIndexNumber, BelowPowerOfTwo) {
  std::mt19937_64 rng(2);
  for (std::uint64_t n = 2; n <= 40; ++n) {
    Structure s(Vocabulary{}, n);
    for (const char* text : {"#x = #x", "#x <= #y", "!(#x <= #y)", "TOP(#x)"}) {
      auto f = parse_formula(text, Vocabulary{});
      for (unsigned y = 0; y < s.num_bound(); ++y) {
        auto r = eval_index_number(f, "x", s, Valuation{}.bind_n("y", y));
        EXPECT_LT(r, std::uint64_t{1} << s.num_bound());
      }
    }
  }
}

TEST(EvalFormula, BitValidityOverSmallStructures) {
  const auto f = bit_validity_sentence();
  const PreparedFormula p(f, bit_validity_vocabulary());
  for (std::uint64_t n = 2; n <= 16; ++n)
    for (std::uint64_t c = 0; c < n; ++c) {
      Structure s(bit_validity_vocabulary(), n);
      s.set_constant("c", c);
      EXPECT_TRUE(eval_formula(p, s).value) << n << " " << c;
    }
}

TEST(EvalFormula, BinarySearchExamples) {
  Structure s(search_vocabulary(), 8);
  // cells 0..2 hold keys 2, 5, 7 under the natural order
  s.set_function("K", {2, 5, 7, 0, 0, 0, 0, 0});
  s.set_constant("N", 3);
  for (Elem a = 0; a < 8; ++a)
    for (Elem b = a + 1; b < 8; ++b) s.add_tuple("Prec", {a, b});
  const PreparedFormula p(binary_search_sentence(), search_vocabulary());
  s.set_constant("T", 5);
  EXPECT_TRUE(search_oracle(s));
  EXPECT_TRUE(eval_formula(p, s).value);
  s.set_constant("T", 4);
  EXPECT_FALSE(search_oracle(s));
  EXPECT_FALSE(eval_formula(p, s).value);
}

TEST(EvalFormula, BinarySearchAgreesWithOracle) {
  std::mt19937_64 rng(17);
  const PreparedFormula p(binary_search_sentence(), search_vocabulary());
  for (int i = 0; i < 60; ++i) {
    auto s = random_sorted_array(4 + rng() % 29, rng);
    ASSERT_EQ(eval_formula(p, s).value, search_oracle(s)) << render_structure(s);
  }
}

TEST(EvalFormula, VerbatimBinarySearchHasCounterexample) {
  std::mt19937_64 rng(17);
  const PreparedFormula p(binary_search_sentence_verbatim(), search_vocabulary());
  int mismatches = 0;
  for (int i = 0; i < 60; ++i) {
    auto s = random_sorted_array(4 + rng() % 29, rng);
    mismatches += eval_formula(p, s).value != search_oracle(s);
  }
  EXPECT_GT(mismatches, 0);
}

TEST(EvalFormula, GuardedExistentialFailsBeyondDomain) {
  // all three bits set: index 7 >= n = 5
  Structure s(Vocabulary{}, 5);
  EXPECT_FALSE(eval("EX x = index{#i : #i = #i}. x = x", s));
  Structure t(Vocabulary{}, 8);
  EXPECT_TRUE(eval("EX x = index{#i : #i = #i}. x = x", t));
}

TEST(EvalFormula, UnboundAndOutOfRange) {
  Structure s(Vocabulary{}, 4);
  EXPECT_THROW(eval("#i <= #j", s), EvalError);
  EXPECT_TRUE(eval("#i <= #j", s, Valuation{}.bind_n("i", 0).bind_n("j", 1)));
  EXPECT_THROW(eval("#i <= #i", s, Valuation{}.bind_n("i", 2)), EvalError);
  EXPECT_THROW(eval("x <= x", s, Valuation{}.bind_v("x", 4)), EvalError);
  EXPECT_THROW(eval("X(#i)", s, Valuation{}.bind_n("i", 0)), EvalError);
  EXPECT_TRUE(eval("X(#i)", s, Valuation{}.bind_n("i", 1).bind_rel("X", RelValue{1, {false, true}})));
}

TEST(EvalFormula, ValuationsArePersistent) {
  Valuation a = Valuation{}.bind_n("i", 1);
  Valuation b = a.bind_n("i", 0);
  EXPECT_EQ(*a.n("i"), 1u);
  EXPECT_EQ(*b.n("i"), 0u);
  EXPECT_FALSE(a.v("i"));
}

TEST(ComputeFixpoint, InflationaryAddsZero) {
  Structure s(Vocabulary{}, 16);
  auto body = parse_formula("X(#i) | ZERO(#i)", Vocabulary{});
  auto tr = compute_fixpoint(FpKind::IFP, {{{"i"}, "X", body}}, s);
  EXPECT_EQ(tr.end, FixpointEnd::FixedPoint);
  ASSERT_EQ(tr.stages.size(), 2u);
  EXPECT_EQ(tr.result[0].bits, (std::vector<bool>{true, false, false, false}));
}

TEST(ComputeFixpoint, ComplementOscillates) {
  Structure s(Vocabulary{}, 16);
  auto body = parse_formula("!X(#i)", Vocabulary{});
  auto tr = compute_fixpoint(FpKind::PFP, {{{"i"}, "X", body}}, s);
  EXPECT_EQ(tr.end, FixpointEnd::CycleDetected);
  EXPECT_EQ(tr.result[0].count(), 0u);
  EXPECT_FALSE(eval("EX #m. [PFP #i, X . !X(#i)](#m)", s));
}

TEST(ComputeFixpoint, BudgetsAreEnforced) {
  Structure s(Vocabulary{}, 16);
  auto body = parse_formula("!X(#i)", Vocabulary{});
  EvalOptions no_cycles;
  no_cycles.cycle_detection = false;
  no_cycles.max_stages = 50;
  EXPECT_THROW(compute_fixpoint(FpKind::PFP, {{{"i"}, "X", body}}, s, {}, no_cycles), ResourceError);
  EvalOptions tiny;
  tiny.max_stored_bits = 6;
  EXPECT_THROW(compute_fixpoint(FpKind::PFP, {{{"i"}, "X", body}}, s, {}, tiny), ResourceError);
}

TEST(ComputeFixpoint, LeastRejectsNegativeBodies) {
  Structure s(Vocabulary{}, 16);
  auto body = parse_formula_unchecked("!X(#i)", Vocabulary{});
  EXPECT_THROW(compute_fixpoint(FpKind::LFP, {{{"i"}, "X", body}}, s), IllFormed);
}

TEST(ComputeFixpoint, SimultaneousPartialNeedsEveryComponentFixed) {
  Structure s(Vocabulary{}, 16);
  // X settles on {0}; Y flips forever, so both come out empty
  auto x = parse_formula("ZERO(#i)", Vocabulary{});
  auto y = parse_formula("!Y(#i)", Vocabulary{});
  auto tr = compute_fixpoint(FpKind::SPFP, {{{"i"}, "X", x}, {{"i"}, "Y", y}}, s);
  EXPECT_EQ(tr.end, FixpointEnd::CycleDetected);
  EXPECT_EQ(tr.result[0].count(), 0u);
  EXPECT_EQ(tr.result[1].count(), 0u);
}

TEST(ComputeFixpoint, InflationaryTracesAreMonotoneAndShort) {
  std::mt19937_64 rng(4);
  const auto corpus = positive_corpus_text();
  for (std::uint64_t n = 2; n <= 8; ++n) {
    auto s = random_structure(graph_vocabulary(), n, rng);
    for (const auto& text : pfp_corpus_text()) {
      auto body = parse_formula(text, graph_vocabulary());
      auto tr = compute_fixpoint(FpKind::IFP, {{{"i"}, "X", body}}, s);
      ASSERT_LE(tr.stages.size(), s.num_bound() + 1u);
      for (std::size_t j = 1; j < tr.stages.size(); ++j) ASSERT_TRUE(tr.stages[j - 1][0].subset_of(tr.stages[j][0]));
    }
  }
}

TEST(ComputeFixpoint, PartialAgreesWithCountingDefinition) {
  for (const auto& text : pfp_corpus_text()) {
    const FixComponent c{{"i"}, "X", parse_formula(text, graph_vocabulary())};
    for (std::uint64_t n = 2; n <= 3; ++n)
      for_each_structure(graph_vocabulary(), n, [&](const Structure& s) {
        auto tr = compute_fixpoint(FpKind::PFP, {c}, s);
        EXPECT_EQ(tr.result[0], oracle::pfp_by_counting(c, s)) << text;
        return true;
      });
  }
}

TEST(EvalFormula, LeastEqualsInflationaryOnPositiveCorpus) {
  std::mt19937_64 rng(8);
  for (const auto& text : positive_corpus_text()) {
    auto lfp = parse_formula(text, graph_vocabulary());
    auto ifp = relabel_fixpoints(relabel_fixpoints(lfp, FpKind::LFP, FpKind::IFP), FpKind::SLFP, FpKind::SIFP);
    const PreparedFormula pl(lfp, graph_vocabulary()), pi(ifp, graph_vocabulary());
    for (std::uint64_t n = 2; n <= 8; ++n)
      for (int k = 0; k < 6; ++k) {
        auto s = random_structure(graph_vocabulary(), n, rng);
        ASSERT_EQ(eval_formula(pl, s).value, eval_formula(pi, s).value) << text << "\n" << render_structure(s);
      }
  }
}

TEST(EvalFormula, AgreesWithNaiveEvaluator) {
  Vocabulary v;
  v.add_relation("P", 1);
  oracle::ShallowFormulas gen(21);
  for (int i = 0; i < 60; ++i) {
    auto f = expand_macros(gen.sentence(2));
    const PreparedFormula p(f, v);
    for (std::uint64_t n = 2; n <= 5; ++n)
      for_each_structure(v, n, [&](const Structure& s) {
        EXPECT_EQ(eval_formula(p, s).value, oracle::NaiveEvaluator(s).holds(f)) << render_formula(f);
        return true;
      });
  }
}

TEST(EvalFormula, CachingDoesNotChangeResults) {
  std::mt19937_64 rng(5);
  EvalOptions nocache;
  nocache.cache_fixpoints = false;
  for (const auto& text : positive_corpus_text()) {
    const PreparedFormula p(parse_formula(text, graph_vocabulary()), graph_vocabulary());
    for (int k = 0; k < 5; ++k) {
      auto s = random_structure(graph_vocabulary(), 2 + rng() % 9, rng);
      EXPECT_EQ(eval_formula(p, s).value, eval_formula(p, s, {}, nocache).value);
    }
  }
}

TEST(EvalFormula, CostAggregateIsWeightedSum) {
  Structure s = successor_structure(8);
  auto r = eval_formula(parse_formula("EX x = index{#i : ZERO(#i)}. f(f(x)) = c", s.vocabulary()), s);
  const auto& c = r.cost;
  EXPECT_EQ(c.aggregate(), c.atomic + c.terms + c.probes + c.stages + c.lookup_weight);
  EXPECT_EQ(c.lookups, 2u);
  EXPECT_EQ(c.lookup_weight, 2u * 3u);
  EXPECT_EQ(c.probes, 3u);
}

TEST(MeasureScaling, ConstantSentenceIsFlat) {
  StructureFamily fam = [](std::uint64_t n, std::mt19937_64&) { return Structure(Vocabulary{}, n); };
  // a nullary fixed point never touches Num(A)
  auto table = measure_scaling(parse_formula("[IFP X . X() & !X()]()", Vocabulary{}), fam, {16, 64, 256, 1024}, 1);
  ASSERT_EQ(table.rows.size(), 4u);
  for (const auto& r : table.rows) EXPECT_EQ(r.steps, table.rows[0].steps);
  EXPECT_NEAR(table.fit.k, 0.0, 1e-9);
  EXPECT_EQ(table.csv().substr(0, 27), "n,steps,log_n,fit_residual\n");
}

TEST(MeasureScaling, BitValidityIsPolylog) {
  StructureFamily fam = [](std::uint64_t n, std::mt19937_64& rng) { return random_constant_structure(n, rng); };
  auto table = measure_scaling(bit_validity_sentence(), fam, {16, 64, 256, 1024, 4096}, 3, 4);
  EXPECT_LE(table.fit.max_ratio, 2.0) << table.csv();
  for (std::size_t i = 1; i < table.rows.size(); ++i) EXPECT_GT(table.rows[i].steps, table.rows[i - 1].steps);
}

TEST(FitPolylog, RecoversExactPowerLaw) {
  std::vector<std::pair<double, double>> pts;
  for (double l = 2; l <= 12; ++l) pts.emplace_back(l, 3.0 * l * l * l);
  auto fit = fit_polylog(pts);
  EXPECT_NEAR(fit.k, 3.0, 1e-9);
  EXPECT_NEAR(fit.c, 3.0, 1e-6);
  EXPECT_NEAR(fit.max_ratio, 1.0, 1e-9);
}
