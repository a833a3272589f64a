#include <gtest/gtest.h>

#include "idxlog/ast.hpp"

using namespace idxlog;

namespace {

Vocabulary unary_p() {
  Vocabulary v;
  v.add_relation("P", 1);
  return v;
}

bool has_error_containing(const std::vector<WfError>& errs, const std::string& needle) {
  for (const auto& e : errs)
    if (e.message.find(needle) != std::string::npos) return true;
  return false;
}

// One instance of every catalogue entry, with free variables spread over all sorts.
std::vector<FormulaPtr> macro_instances() {
  auto lam = lambda_arg({"u"}, conj(relvar("X", {"u"}), nleq("u", "a")));
  auto lam2 = lambda_arg({"u"}, neg(relvar("X", {"u"})));
  return {
      truth(),
      falsity(),
      macro("EMPTY", {rel_arg("X")}),
      macro("MIN", {lam, nvar_arg("z")}),
      macro("MAX", {rel_arg("X"), nvar_arg("z")}),
      macro("TOP", {nvar_arg("z")}),
      macro("ZERO", {nvar_arg("a"), nvar_arg("b")}),
      macro("SUCC", {nvar_arg("a"), nvar_arg("b")}),
      macro("TSUCC", {nvar_arg("a"), nvar_arg("b"), nvar_arg("c"), nvar_arg("d")}),
      macro("RANK", {nvar_arg("a"), nvar_arg("b"), nvar_arg("z")}),
      bit(constant("c"), "x"),
      bit(vvar("y"), "x"),
      macro("LASTBIT", {nvar_arg("x")}),
      macro("NBIT", {nvar_arg("x")}),
      macro("AVG", {lam, lam2, nvar_arg("x")}),
      macro("AVGC", {rel_arg("X"), rel_arg("Y"), nvar_arg("x")}),
      macro("MINUSONE", {lam, nvar_arg("y")}),
      macro("EQSH", {lam, lam2}),
      macro("LTSH", {rel_arg("X"), lam2}),
  };
}

}  // namespace

TEST(FreeVariables, Examples) {
  auto f1 = rel("P", {vvar("x")});
  EXPECT_EQ(free_variables(f1), (FreeVars{{"x"}, {}, {}}));

  auto f2 = index_eq(constant("c"), "i", relvar("X", {"i"}));
  EXPECT_EQ(free_variables(f2), (FreeVars{{}, {}, {"X"}}));

  auto body = conj(relvar("X", {"x"}), nleq("x", "y"));
  auto f3 = fixpoint(FpKind::IFP, {"x"}, "X", body, {"z"});
  EXPECT_EQ(free_variables(f3), (FreeVars{{}, {"y", "z"}, {}}));
}

TEST(FreeVariables, GuardedExistentialBindsBothVariables) {
  auto f = guarded_exists("x", "i", neq("i", "i"), rel("P", {vvar("x")}));
  EXPECT_EQ(free_variables(f), FreeVars{});
}

TEST(WellFormed, Examples) {
  auto v = unary_p();
  auto ok = guarded_exists("x", "i", neq("i", "i"), rel("P", {vvar("x")}));
  EXPECT_TRUE(check_well_formed(ok, v).empty());

  auto bad = guarded_exists("x", "i", leq(vvar("x"), vvar("x")), rel("P", {vvar("x")}));
  EXPECT_TRUE(has_error_containing(check_well_formed(bad, v), "free in its own index guard"));

  auto lfp = fixpoint(FpKind::LFP, {"x"}, "X", neg(relvar("X", {"x"})), {"y"});
  EXPECT_TRUE(has_error_containing(check_well_formed(lfp, v), "negatively"));
}

TEST(WellFormed, PositivityLooksThroughSugar) {
  // X -> Q is !X | Q, so X is negative.
  auto body = implies(relvar("X", {"x"}), nleq("x", "x"));
  auto lfp = fixpoint(FpKind::LFP, {"x"}, "X", body, {"y"});
  EXPECT_FALSE(check_well_formed(lfp, Vocabulary{}).empty());
  auto pos = fixpoint(FpKind::LFP, {"x"}, "X", neg(neg(relvar("X", {"x"}))), {"y"});
  EXPECT_TRUE(check_well_formed(pos, Vocabulary{}).empty());
}

TEST(WellFormed, ArityAndSymbolErrors) {
  auto v = unary_p();
  EXPECT_FALSE(check_well_formed(rel("P", {vvar("x"), vvar("y")}), v).empty());
  EXPECT_FALSE(check_well_formed(rel("Q", {vvar("x")}), v).empty());
  EXPECT_FALSE(check_well_formed(leq(constant("c"), vvar("x")), v).empty());
  EXPECT_FALSE(check_well_formed(conj(relvar("X", {"a"}), relvar("X", {"a", "b"})), v).empty());
  EXPECT_FALSE(check_well_formed(fixpoint(FpKind::IFP, {"x"}, "X", relvar("X", {"x"}), {"a", "b"}), v).empty());
  EXPECT_FALSE(check_well_formed(leq(nvar_term("i"), vvar("x")), v).empty());
  EXPECT_FALSE(check_well_formed(macro("NOPE", {}), v).empty());
  EXPECT_FALSE(check_well_formed(macro("SUCC", {nvar_arg("a")}), v).empty());
}

TEST(ExpandMacros, NoMacrosIsIdentity) {
  auto f = conj(rel("P", {vvar("x")}), neg(nleq("i", "j")));
  EXPECT_TRUE(structurally_equal(expand_macros(f), f));
}

TEST(ExpandMacros, CoreOnlyIdempotentAndFreeVarsPreserved) {
  Vocabulary v;
  v.add_constant("c");
  for (const auto& m : macro_instances()) {
    ASSERT_TRUE(check_well_formed(m, v).empty()) << m->name;
    auto e = expand_macros(m);
    EXPECT_FALSE(contains_macros(e)) << m->name;
    EXPECT_TRUE(structurally_equal(expand_macros(e), e)) << m->name;
    EXPECT_EQ(free_variables(e), free_variables(m)) << m->name;
    EXPECT_TRUE(check_well_formed(e, v).empty()) << m->name;
  }
}

TEST(ExpandMacros, BitIsSimultaneousFixpointOfTwoComponents) {
  auto e = expand_macros(bit(constant("c"), "x"));
  ASSERT_EQ(e->kind, FKind::Fixpoint);
  EXPECT_EQ(e->fp, FpKind::SIFP);
  ASSERT_EQ(e->components.size(), 2u);
  EXPECT_EQ(e->vars, std::vector<std::string>{"x"});
  // The first component's body ends with the index-guarded comparison against c.
  const auto& phiY = e->components[0].body;
  ASSERT_EQ(phiY->kind, FKind::And);
  EXPECT_EQ(phiY->subs[1]->kind, FKind::GuardedExists);
  EXPECT_EQ(phiY->subs[1]->subs[1]->kind, FKind::LeqV);
}

TEST(ExpandMacros, UnknownMacroThrows) {
  EXPECT_THROW(expand_macros(macro("NOPE", {})), DomainError);
}

TEST(Substitute, AvoidsCapture) {
  // EX #y. #x <= #y  with x := y must not capture.
  auto f = exists_n("y", nleq("x", "y"));
  auto g = substitute_nvar(f, "x", "y");
  EXPECT_EQ(free_variables(g).n, std::set<std::string>{"y"});
  ASSERT_EQ(g->kind, FKind::ExistsN);
  EXPECT_NE(g->vars[0], "y");
}

TEST(Substitute, StopsAtShadowingBinder) {
  auto f = conj(nleq("x", "x"), exists_n("x", nleq("x", "x")));
  auto g = substitute_nvar(f, "x", "z");
  EXPECT_EQ(g->subs[0]->vars, (std::vector<std::string>{"z", "z"}));
  EXPECT_EQ(g->subs[1]->subs[0]->vars, (std::vector<std::string>{"x", "x"}));
}

TEST(RenameApart, DistinctBinders) {
  auto inner = guarded_exists("x", "i", neq("i", "i"), rel("P", {vvar("x")}));
  auto f = conj(inner, inner);
  auto g = rename_apart(f);
  EXPECT_NE(g->subs[0]->vars[0], g->subs[1]->vars[0]);
  EXPECT_EQ(free_variables(g), free_variables(f));
}

TEST(NodeCount, CountsDistinctNodes) {
  auto a = nleq("x", "y");
  EXPECT_EQ(node_count(a), 1u);
  EXPECT_EQ(node_count(conj(a, neg(a))), 3u);
}

TEST(FreshNames, AvoidsTaken) {
  FreshNames f({"_g0", "_g1"});
  auto n = f.next();
  EXPECT_NE(n, "_g0");
  EXPECT_NE(n, "_g1");
  EXPECT_NE(f.next(), n);
}
