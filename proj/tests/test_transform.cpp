#include <gtest/gtest.h>

#include <set>

#include "apml/parse.hpp"
#include "apml/print.hpp"
#include "apml/search.hpp"
#include "apml/transform.hpp"
#include "generators.hpp"

namespace apml {
namespace {

Sequent seq(const char* text) { return parse_sequent(text); }

Derivation proved(const char* text, const Assumptions& as = {}) {
  SearchConfig c;
  c.assumptions = as;
  SearchOutcome r = prove(parse_sequent(text), c);
  if (r.verdict != Verdict::Proved) throw std::runtime_error(std::string("not proved: ") + text);
  return r.derivation;
}

void expect_valid(const Derivation& d, const Sequent& expected, const Assumptions& as = {}) {
  const CheckResult r = check(d, as);
  EXPECT_TRUE(r.ok()) << r.report();
  EXPECT_TRUE(cut_free(d));
  EXPECT_EQ(d->conclusion, expected) << to_string_raw(d->conclusion) << " vs " << to_string_raw(expected);
}

TEST(Weaken, IdentityAbsorbsContext) {
  const Derivation d = derive_identity(Context{}, Formula::atom("p"));
  const Derivation w = weaken(d, Path{}, parse_context("q"));
  EXPECT_EQ(w->rule.kind, RuleKind::Id);
  expect_valid(w, Sequent{parse_context("q, p"), Formula::atom("p")});
}

TEST(Weaken, DiamondRightGetsNewParameter) {
  const Derivation d = proved("(p)^A |- <A>p");
  ASSERT_EQ(d->rule.kind, RuleKind::DiaR);
  const Derivation w = weaken(d, Path{}, parse_context("q"));
  EXPECT_EQ(w->rule.kind, RuleKind::DiaR);
  expect_valid(w, Sequent{plug(d->conclusion.antecedent, Path{}, parse_context("q")), d->conclusion.succedent});
}

TEST(Weaken, InsideAnnotationKeepsHeight) {
  const Derivation d = proved("(p)^A |- <A>p");
  const Derivation w = weaken(d, Path{0}, parse_context("q"));
  expect_valid(w, Sequent{parse_context("(q, p)^A"), parse_formula("<A>p")});
  EXPECT_EQ(height(w), height(d));
}

TEST(Contract, DuplicateIdentityItem) {
  const Derivation d = make_derivation(seq("p, p |- p"), RuleApp{RuleKind::Id, Occurrence{Path{}, 0}}, {});
  const Derivation c = contract_item(d, Path{}, 0, 1);
  expect_valid(c, seq("p |- p"));
}

TEST(Contract, BoxLeftPrincipalCopy) {
  const Derivation d = proved("([A]p)^A, ([A]p)^A |- p");
  const Derivation c = contract_item(d, Path{}, 0, 1);
  expect_valid(c, seq("([A]p)^A |- p"));
  EXPECT_LE(height(c), height(d));
}

TEST(Contract, AndLeftPrincipalCopy) {
  const Derivation d = proved("p & q, p & q |- q & p");
  expect_valid(contract_item(d, Path{}, 1, 0), seq("p & q |- q & p"));
}

TEST(Contract, WholeContextAtOnce) {
  const Derivation d = proved("p, q, p, q |- p & q");
  expect_valid(contract(d, Path{}, {{0, 2}, {1, 3}}), seq("p, q |- p & q"));
}

TEST(Contract, MismatchedItemsThrow) {
  const Derivation d = proved("p, q |- p");
  EXPECT_THROW(contract_item(d, Path{}, 0, 1), TransformError);
}

TEST(Invert, BoxRightOfBoxRight) {
  const Derivation d = proved("p |- [A]<A>p");
  ASSERT_EQ(d->rule.kind, RuleKind::BoxR);
  const Derivation inv = invert_box_right(d);
  EXPECT_EQ(inv, d->premisses[0]);
}

TEST(Invert, DiamondLeftOfIdentity) {
  const Derivation d = derive_identity(Context{}, parse_formula("<A>p"));
  expect_valid(invert_dia_left(d, Occurrence{Path{}, 0}), seq("(p)^A |- <A>p"));
}

TEST(Invert, AndRightLeftHalf) {
  const Derivation d = proved("p, q |- p & q");
  expect_valid(invert_and_right(d, 0), seq("p, q |- p"));
}

TEST(Invert, OrLeftGivesBothCases) {
  const Derivation d = proved("p | q |- q | p");
  const auto [l, r] = invert_or_left(d, Occurrence{Path{}, 0});
  expect_valid(l, seq("p |- q | p"));
  expect_valid(r, seq("q |- q | p"));
}

TEST(Invert, WrongShapeThrows) {
  const Derivation d = proved("p |- p");
  EXPECT_THROW(invert_box_right(d), TransformError);
  EXPECT_THROW(invert_and_left(d, Occurrence{Path{}, 0}), TransformError);
}

TEST(TopWeak, TopRightWithReplacement) {
  const Derivation d = make_derivation(seq("top |- top"), RuleApp{RuleKind::TopR}, {});
  expect_valid(top_weak(d, Occurrence{Path{}, 0}, parse_context("p")), seq("p |- top"));
  expect_valid(top_weak(d, Occurrence{Path{}, 0}, Context{}), seq(" |- top"));
}

TEST(Cut, IdentityLeftIsWeakening) {
  const Derivation d1 = make_derivation(seq("q, p |- p"), RuleApp{RuleKind::Id, Occurrence{Path{}, 1}}, {});
  const Derivation d2 = proved("p |- p | r");
  CutReport rep;
  const Derivation out = eliminate_cut(d1, d2, Occurrence{Path{}, 0}, {}, &rep);
  expect_valid(out, Sequent{parse_context("q, p"), parse_formula("p | r")});
  ASSERT_FALSE(rep.labels.empty());
  EXPECT_EQ(rep.labels.front(), "(i)");
}

TEST(Cut, TopRightIsTopWeakening) {
  const Derivation d1 = make_derivation(seq("q |- top"), RuleApp{RuleKind::TopR}, {});
  const Derivation d2 = proved("top, p |- p");
  CutReport rep;
  const Derivation out = eliminate_cut(d1, d2, Occurrence{Path{}, 0}, {}, &rep);
  expect_valid(out, Sequent{replace(d2->conclusion.antecedent, Occurrence{Path{}, 0}, parse_context("q")),
                            parse_formula("p")});
  EXPECT_EQ(rep.labels.front(), "(iii)");
}

TEST(Cut, BoxRightAgainstBoxLeft) {
  const Derivation d1 = proved("q, [A]p |- [A]p");
  ASSERT_EQ(d1->rule.kind, RuleKind::BoxR);
  const Derivation d2 = proved("([A]p)^A |- p");
  const Occurrence occ{Path{0}, 0};
  ASSERT_EQ(item_at(d2->conclusion.antecedent, occ).formula(), parse_formula("[A]p"));
  CutReport rep;
  const Derivation out = eliminate_cut(d1, d2, occ, {}, &rep);
  expect_valid(out, Sequent{replace(d2->conclusion.antecedent, occ, d1->conclusion.antecedent), parse_formula("p")});
  EXPECT_NE(std::find(rep.labels.begin(), rep.labels.end(), "(xi)(h)"), rep.labels.end());
}

TEST(Cut, MismatchedFormulaThrows) {
  const Derivation d1 = proved("p |- p");
  const Derivation d2 = proved("q |- q");
  EXPECT_THROW(eliminate_cut(d1, d2, Occurrence{Path{}, 0}), TransformError);
}

TEST(Cut, EliminateCutsKeepsConclusion) {
  const Derivation left = derive_identity(Context{}, Formula::atom("p"));
  const Derivation right = proved("p |- p | q");
  const Derivation with_cut =
      make_derivation(seq("p |- p | q"), RuleApp{RuleKind::Cut, Occurrence{Path{}, 0}}, {left, right});
  ASSERT_TRUE(check(with_cut, {}, CheckOptions{true}).ok());
  const Derivation out = eliminate_cuts(with_cut);
  expect_valid(out, with_cut->conclusion);
}

TEST(Cut, LabelsComeFromTheCaseTable) {
  const auto& labels = cut_case_labels();
  EXPECT_EQ(labels.size(), 25U);
  const std::set<std::string> unique(labels.begin(), labels.end());
  EXPECT_EQ(unique.size(), labels.size());
}

TEST(DeriveK, SingletonParts) {
  const Derivation d = proved("(p)^A, (q)^A, (p, q)^A |- <A>(p & q)");
  const Derivation out = derive_K(d, Path{}, 0, 1, 2);
  expect_valid(out, seq("(p, q)^A |- <A>(p & q)"));
}

TEST(DeriveK, EmptySecondPart) {
  const Derivation d = proved("(p)^A, ()^A, (p)^A |- <A>p");
  const Derivation out = derive_K(d, Path{}, 0, 1, 2);
  expect_valid(out, seq("(p)^A |- <A>p"));
}

// Randomized properties with the checker as the oracle.

TEST(Properties, WeakeningAndInversions) {
  testgen::Generator g(51);
  int n = 0;
  for (int it = 0; it < 300; ++it) {
    auto d = g.proof(14, 30);
    if (!d) continue;
    ++n;
    const Sequent& s = (*d)->conclusion;
    const Path level = g.level(s.antecedent);
    const Context extra = g.context(2, 1, 3);
    expect_valid(weaken(*d, level, extra), Sequent{plug(s.antecedent, level, extra), s.succedent});
    for (const auto& o : testgen::all_occurrences(s.antecedent)) {
      const Item& item = item_at(s.antecedent, o);
      if (!item.is_formula()) continue;
      const Formula& f = item.formula();
      if (f.is(FormulaKind::And)) {
        expect_valid(invert_and_left(*d, o),
                     Sequent{replace(s.antecedent, o, Context{{Item(f.left()), Item(f.right())}}), s.succedent});
      } else if (f.is(FormulaKind::Or)) {
        const auto [l, r] = invert_or_left(*d, o);
        expect_valid(l, Sequent{replace(s.antecedent, o, singleton(f.left())), s.succedent});
        expect_valid(r, Sequent{replace(s.antecedent, o, singleton(f.right())), s.succedent});
      } else if (f.is(FormulaKind::Dia)) {
        expect_valid(invert_dia_left(*d, o),
                     Sequent{replace(s.antecedent, o, singleton(Item::annotated(f.agent(), singleton(f.body())))),
                             s.succedent});
      } else if (f.is(FormulaKind::Top)) {
        const Context rep = g.context(2, 1, 3);
        expect_valid(top_weak(*d, o, rep), Sequent{replace(s.antecedent, o, rep), s.succedent});
      }
    }
    if (s.succedent.is(FormulaKind::Box)) {
      expect_valid(invert_box_right(*d),
                   Sequent{singleton(Item::annotated(s.succedent.agent(), s.antecedent)), s.succedent.body()});
    }
    if (s.succedent.is(FormulaKind::And)) {
      expect_valid(invert_and_right(*d, 1), Sequent{s.antecedent, s.succedent.right()});
    }
  }
  EXPECT_GT(n, 150);
}

TEST(Properties, ContractionOfNaturalDuplicates) {
  testgen::Generator g(52);
  int n = 0;
  for (int it = 0; it < 400 && n < 150; ++it) {
    const Sequent s = g.sequent(3, 2, 6);
    auto occ = g.occurrence(s.antecedent);
    if (!occ) continue;
    const Context ant = plug(s.antecedent, occ->level, singleton(item_at(s.antecedent, *occ)));
    auto d = testgen::try_prove(Sequent{ant, s.succedent});
    if (!d) continue;
    ++n;
    expect_valid(contract_item(*d, occ->level, 0, occ->index + 1),
                 Sequent{remove(ant, Occurrence{occ->level, occ->index + 1}), s.succedent});
  }
  EXPECT_GT(n, 80);
}

TEST(Properties, CutWithAssumptionsCoversEveryCase) {
  const Assumptions as = parse_assumptions("assn A p => q | r\nassn B q => p\nassn A r => r\nassn B p => p | q\n");
  std::set<std::string> seen;
  int cuts = 0;
  for (std::uint64_t seed : {1U, 2U}) {
    testgen::Generator g(seed);
    for (int it = 0; it < 1500; ++it) {
      auto d1 = g.proof(10, 50, 2, as);
      if (!d1) continue;
      const Formula m = (*d1)->conclusion.succedent;
      if (m.size() > 8) continue;
      const Context delta = g.context(2, 2, 3);
      const Path level = g.level(delta);
      const Context with = plug(delta, level, singleton(m));
      const Formula m2 = g.chance(0.7) ? g.consequence(with, 6) : g.formula(5);
      auto d2 = testgen::try_prove(Sequent{with, m2}, 20000, as);
      if (!d2) continue;
      ++cuts;
      CutOptions opt;
      opt.assumptions = as;
      CutReport rep;
      const Derivation out = eliminate_cut(*d1, *d2, Occurrence{level, 0}, opt, &rep);
      expect_valid(out, Sequent{replace(with, Occurrence{level, 0}, (*d1)->conclusion.antecedent), m2}, as);
      seen.insert(rep.labels.begin(), rep.labels.end());
    }
  }
  EXPECT_GT(cuts, 1000);
  for (const auto& label : cut_case_labels()) EXPECT_TRUE(seen.count(label)) << label;
  for (const auto& label : seen) {
    const auto& all = cut_case_labels();
    EXPECT_NE(std::find(all.begin(), all.end(), label), all.end()) << label;
  }
}

TEST(Properties, DeriveKOnGeneratedParts) {
  testgen::Generator g(53);
  int n = 0;
  const Agent A("A");
  for (int it = 0; it < 400 && n < 100; ++it) {
    const Context gamma = g.context(2, 1, 2);
    const Context gamma2 = g.chance(0.2) ? Context{} : g.context(2, 1, 2);
    Context ant{{Item::annotated(A, gamma), Item::annotated(A, gamma2), Item::annotated(A, concat(gamma, gamma2))}};
    ant = concat(ant, g.context(1, 1, 2));
    const Formula m = g.consequence(ant, 6);
    auto d = testgen::try_prove(Sequent{ant, m});
    if (!d) continue;
    ++n;
    expect_valid(derive_K(*d, Path{}, 0, 1, 2),
                 Sequent{remove(remove(ant, Occurrence{Path{}, 1}), Occurrence{Path{}, 0}), m});
  }
  EXPECT_GT(n, 50);
}

}  // namespace
}  // namespace apml
