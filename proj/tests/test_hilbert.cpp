#include <gtest/gtest.h>

#include "apml/hilbert.hpp"
#include "apml/parse.hpp"
#include "apml/print.hpp"
#include "apml/search.hpp"
#include "generators.hpp"

namespace apml {
namespace {

HilbertSequent hs(const char* l, const char* r) { return {parse_formula(l), parse_formula(r)}; }

bool contains(const std::vector<AxiomInstance>& all, HilbertAxiom a, const HilbertSequent& s) {
  for (const auto& i : all)
    if (i.axiom == a && i.sequent == s) return true;
  return false;
}

TEST(Axioms, NamesRoundTrip) {
  EXPECT_EQ(hilbert_axioms().size(), 14U);
  for (HilbertAxiom a : hilbert_axioms()) EXPECT_EQ(axiom_from_name(axiom_name(a)), a);
  EXPECT_THROW(axiom_from_name("nope"), std::invalid_argument);
}

TEST(Axioms, InstancesIncludeModalSchemas) {
  const auto all = axiom_instances({"p", "q"}, {Agent("A")});
  EXPECT_TRUE(contains(all, HilbertAxiom::Counit, hs("<A>[A]p", "p")));
  EXPECT_TRUE(contains(all, HilbertAxiom::DiaJoin, hs("<A>(p | q)", "<A>p | <A>q")));
  EXPECT_TRUE(contains(all, HilbertAxiom::BoxTop, hs("top", "[A]top")));
}

TEST(Axioms, MatchBindsMetavariables) {
  const auto b = match_axiom(HilbertAxiom::Unit, hs("p & q", "[B]<B>(p & q)"));
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->agent, Agent("B"));
  EXPECT_FALSE(match_axiom(HilbertAxiom::Unit, hs("p", "[B]<A>p")).has_value());
  EXPECT_FALSE(match_axiom(HilbertAxiom::AndElimLeft, hs("p & q", "q")).has_value());
}

TEST(Axioms, EveryInstanceIsProvedByTheTreeCalculus) {
  for (const auto& inst : axiom_instances({"p", "q"}, {Agent("A"), Agent("B")})) {
    const SearchOutcome r = prove(to_sequent(inst.sequent));
    ASSERT_EQ(r.verdict, Verdict::Proved) << axiom_name(inst.axiom) << ": " << to_string(inst.sequent);
    EXPECT_TRUE(check(r.derivation, {}).ok());
  }
}

HilbertStep axiom_step(const char* l, const char* r, HilbertAxiom a) {
  HilbertStep s;
  s.conclusion = hs(l, r);
  s.rule = HilbertRule::Axiom;
  s.axiom = a;
  return s;
}

TEST(Check, TwoAxiomsAndOr) {
  HilbertDerivation d;
  d.steps.push_back(axiom_step("p", "q | p", HilbertAxiom::OrIntroRight));
  d.steps.push_back(axiom_step("q", "q | p", HilbertAxiom::OrIntroLeft));
  HilbertStep join;
  join.conclusion = hs("p | q", "q | p");
  join.rule = HilbertRule::Or;
  join.premisses = {0, 1};
  d.steps.push_back(join);
  EXPECT_TRUE(check_hilbert(d).ok()) << check_hilbert(d).report();
  const HilbertDerivation back = hilbert_from_json(hilbert_to_json(d));
  EXPECT_TRUE(check_hilbert(back).ok());
  EXPECT_EQ(back.steps.size(), 3U);
}

TEST(Check, CutChain) {
  HilbertDerivation d;
  d.steps.push_back(axiom_step("p & q", "p", HilbertAxiom::AndElimLeft));
  d.steps.push_back(axiom_step("p", "p | r", HilbertAxiom::OrIntroLeft));
  HilbertStep cut;
  cut.conclusion = hs("p & q", "p | r");
  cut.rule = HilbertRule::Cut;
  cut.premisses = {0, 1};
  d.steps.push_back(cut);
  EXPECT_TRUE(check_hilbert(d).ok());
}

TEST(Check, ModalRuleNeedsMatchingBodies) {
  HilbertDerivation d;
  d.steps.push_back(axiom_step("p & q", "p", HilbertAxiom::AndElimLeft));
  HilbertStep dia;
  dia.conclusion = hs("<A>(p & q)", "<A>q");
  dia.rule = HilbertRule::Dia;
  dia.premisses = {0};
  d.steps.push_back(dia);
  const HilbertCheck r = check_hilbert(d);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.rejections[0].step, 1U);
}

TEST(Check, ForwardReferencesAndWrongAxiomsAreRejected) {
  HilbertDerivation d;
  d.steps.push_back(axiom_step("p", "q", HilbertAxiom::Identity));
  EXPECT_FALSE(check_hilbert(d).ok());
  HilbertStep fwd;
  fwd.conclusion = hs("<A>p", "<A>p");
  fwd.rule = HilbertRule::Dia;
  fwd.premisses = {5};
  EXPECT_FALSE(check_hilbert(HilbertDerivation{{fwd}}).ok());
  EXPECT_FALSE(check_hilbert(HilbertDerivation{}).ok());
}

TEST(Adjunction, BothDirectionsAgree) {
  testgen::Generator g(61);
  const Agent A("A");
  int proved = 0;
  for (int i = 0; i < 100; ++i) {
    const Formula m = g.formula(6);
    const Formula n = g.formula(6);
    SearchConfig c;
    c.max_nodes = 200000;
    const SearchOutcome left = decide(Sequent{singleton(Formula::dia(A, m)), n}, c);
    const SearchOutcome right = decide(Sequent{singleton(m), Formula::box(A, n)}, c);
    ASSERT_NE(left.verdict, Verdict::NotProvedWithinBounds) << to_string(m) << " / " << to_string(n);
    ASSERT_NE(right.verdict, Verdict::NotProvedWithinBounds) << to_string(m) << " / " << to_string(n);
    EXPECT_EQ(left.verdict, right.verdict) << to_string(m) << " / " << to_string(n);
    proved += left.verdict == Verdict::Proved ? 1 : 0;
  }
  EXPECT_GT(proved, 5);
}

}  // namespace
}  // namespace apml
