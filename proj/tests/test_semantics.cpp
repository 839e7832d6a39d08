#include <gtest/gtest.h>

#include "apml/parse.hpp"
#include "apml/print.hpp"
#include "apml/semantics.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace apml {
namespace {

const Agent A("A");
const Agent B("B");

KripkeFrame discrete(int n, std::vector<std::vector<WorldSet>> succ, std::vector<Agent> agents = {A}) {
  KripkeFrame f;
  f.worlds = n;
  for (int w = 0; w < n; ++w) f.down.push_back(WorldSet{1} << w);
  f.agents = std::move(agents);
  f.succ = std::move(succ);
  return f;
}

TEST(Kripke, Constants) {
  const KripkeStructure s{discrete(2, {{0, 0}}), {}};
  for (int w = 0; w < 2; ++w) {
    EXPECT_TRUE(eval_kripke(s, w, Formula::top()));
    EXPECT_FALSE(eval_kripke(s, w, Formula::bot()));
  }
}

TEST(Kripke, ReflexiveSingleWorld) {
  const KripkeStructure s{discrete(1, {{1}}), {{"p", 1}}};
  EXPECT_TRUE(eval_kripke(s, 0, parse_formula("[A]p")));
  EXPECT_TRUE(eval_kripke(s, 0, parse_formula("<A>p")));
}

TEST(Kripke, DiamondLooksBackwards) {
  // w = 0, v = 1, w R_A v, p only at w.
  const KripkeStructure s{discrete(2, {{0b10, 0b00}}), {{"p", 0b01}}};
  EXPECT_FALSE(eval_kripke(s, 0, parse_formula("[A]p")));
  EXPECT_TRUE(eval_kripke(s, 1, parse_formula("<A>p")));
  EXPECT_FALSE(eval_kripke(s, 0, parse_formula("<A>p")));
}

TEST(Kripke, MissingAtomThrows) {
  const KripkeStructure s{discrete(1, {{0}}), {}};
  EXPECT_THROW(eval_kripke(s, 0, parse_formula("p")), SemanticsError);
}

TEST(Kripke, SequentExamples) {
  const KripkeStructure s{discrete(2, {{0b10, 0b01}}), {{"p", 0b01}, {"q", 0b11}}};
  EXPECT_TRUE(sequent_true_kripke(s, parse_sequent(" |- top")));
  EXPECT_TRUE(sequent_true_kripke(s, parse_sequent("p, q |- p")));
  EXPECT_EQ(translate(parse_context("(p)^A")), parse_formula("<A>p"));
}

TEST(Kripke, CompiledEvaluationMatchesOracle) {
  testgen::Generator g(31);
  const auto structures = oracle::labeled_structures(2, {A, B}, {"p", "q"});
  ASSERT_FALSE(structures.empty());
  for (int i = 0; i < 150; ++i) {
    const Formula f = g.formula(8);
    const Sequent s = g.sequent(2, 2, 6);
    bool has_r = false;
    for (auto& a : atoms_of(s)) has_r = has_r || a == "r";
    for (auto& a : atoms_of(f)) has_r = has_r || a == "r";
    if (has_r) continue;
    for (std::size_t k = 0; k < structures.size(); k += 7) {
      const auto& st = structures[k];
      ASSERT_EQ(truth_set(st, f), oracle::worlds_of(st, f)) << to_string(f);
      for (int w = 0; w < st.frame.worlds; ++w) {
        ASSERT_EQ(eval_kripke(st, w, f), (oracle::worlds_of(st, f) >> w & 1U) != 0);
      }
      ASSERT_EQ(sequent_true_kripke(st, s), oracle::holds(st, s)) << to_string(s);
    }
  }
}

TEST(Frames, LabeledOrderCounts) {
  // Labeled posets on 1, 2, 3, 4 points.
  EXPECT_EQ(labeled_orders(1).size(), 1U);
  EXPECT_EQ(labeled_orders(2).size(), 3U);
  EXPECT_EQ(labeled_orders(3).size(), 19U);
  EXPECT_EQ(labeled_orders(4).size(), 219U);
}

TEST(Frames, EveryCanonicalFrameIsValid) {
  for (int n = 1; n <= 3; ++n) {
    for (const auto& f : canonical_frames(n, {A})) EXPECT_TRUE(frame_violations(f).empty());
  }
}

TEST(Enumeration, OneWorldOneAgentOneAtom) {
  KripkeBounds b;
  b.max_worlds = 1;
  b.agents = {A};
  b.atoms = {"p"};
  EXPECT_EQ(count_structures(b), 4U);
}

TEST(Enumeration, CountsMatchNaiveGenerators) {
  for (int n = 1; n <= 2; ++n) {
    for (int agents = 1; agents <= 2; ++agents) {
      for (int atoms = 0; atoms <= 2; ++atoms) {
        KripkeBounds b;
        b.max_worlds = n;
        for (int a = 0; a < agents; ++a) b.agents.emplace_back(std::string(1, static_cast<char>('A' + a)));
        for (int a = 0; a < atoms; ++a) b.atoms.push_back(std::string(1, static_cast<char>('p' + a)));
        std::size_t exact = count_structures(b);
        if (n > 1) {
          KripkeBounds smaller = b;
          smaller.max_worlds = n - 1;
          exact -= count_structures(smaller);
        }
        EXPECT_EQ(exact, count_structures_naive(n, agents, atoms)) << n << " " << agents << " " << atoms;
      }
    }
  }
}

TEST(Enumeration, LabeledOracleCoversEveryIsomorphismClass) {
  // Every labeled structure is isomorphic to exactly one enumerated one:
  // both sides must agree on which sequents fail somewhere.
  testgen::Generator g(32);
  const auto labeled = oracle::labeled_structures(2, {A}, {"p", "q"});
  KripkeBounds b;
  b.max_worlds = 2;
  b.agents = {A};
  b.atoms = {"p", "q"};
  std::vector<KripkeStructure> canonical;
  enumerate_structures(b, [&](const KripkeStructure& s) {
    canonical.push_back(s);
    return true;
  });
  testgen::GenConfig cfg;
  cfg.atoms = {"p", "q"};
  cfg.agents = {"A"};
  testgen::Generator h(33, cfg);
  for (int i = 0; i < 200; ++i) {
    const Sequent s = h.sequent(2, 1, 6);
    bool fails_labeled = false;
    for (const auto& st : labeled) fails_labeled = fails_labeled || !oracle::holds(st, s);
    bool fails_canonical = false;
    for (const auto& st : canonical) fails_canonical = fails_canonical || !sequent_true_kripke(st, s);
    EXPECT_EQ(fails_labeled, fails_canonical) << to_string(s);
  }
}

TEST(Countermodel, BoxIsNotTruthful) {
  const Sequent s = parse_sequent("[A]p |- p");
  const auto m = find_countermodel(s);
  ASSERT_TRUE(m.has_value());
  EXPECT_TRUE(structure_violations(m->structure).empty());
  EXPECT_FALSE(oracle::holds(m->structure, s));
  EXPECT_EQ((oracle::worlds_of(m->structure, s.antecedent) >> m->world) & 1U, 1U);
  EXPECT_EQ((oracle::worlds_of(m->structure, s.succedent) >> m->world) & 1U, 0U);
  // A dead-end world already refutes it, so the smallest model has one world.
  EXPECT_EQ(m->structure.frame.worlds, 1);
  // The two-world model w R_A v with p only at v is a countermodel as well.
  const KripkeStructure two{discrete(2, {{0b10, 0b00}}), {{"p", 0b10}}};
  EXPECT_FALSE(oracle::holds(two, s));
}

TEST(Countermodel, NoneForValidSequent) {
  EXPECT_FALSE(find_countermodel(parse_sequent("p |- p")).has_value());
  EXPECT_FALSE(find_countermodel(parse_sequent("<A>[A]p |- p")).has_value());
}

TEST(Countermodel, DiamondDoesNotPreserveMeets) {
  const Sequent s = parse_sequent("<A>p & <A>q |- <A>(p & q)");
  const auto m = find_countermodel(s);
  ASSERT_TRUE(m.has_value());
  EXPECT_LE(m->structure.frame.worlds, 3);
  EXPECT_FALSE(oracle::holds(m->structure, s));
}

TEST(Countermodel, RespectsAssumptions) {
  const Sequent s = parse_sequent("p |- [A]q");
  ASSERT_TRUE(find_countermodel(s).has_value());
  const Assumptions as = parse_assumptions("assn A p => q");
  EXPECT_FALSE(find_countermodel(s, {}, as).has_value());
  const Assumptions weak = parse_assumptions("assn A p => q | r");
  const auto m = find_countermodel(s, {}, weak);
  ASSERT_TRUE(m.has_value());
  EXPECT_FALSE(oracle::holds(m->structure, s));
  EXPECT_TRUE(oracle::holds(m->structure, parse_sequent("<A>p |- q | r")));
}

TEST(Countermodel, BoundsAreHonoured) {
  CountermodelBounds b;
  b.max_atoms = 1;
  EXPECT_FALSE(find_countermodel(parse_sequent("p |- q"), b).has_value());
  EXPECT_EQ(relevant_atoms(parse_sequent("p |- [A]q"), parse_assumptions("assn A p => r\nassn B p => s")),
            (std::vector<std::string>{"p", "q", "r"}));
}

TEST(Countermodel, SerializesBothWays) {
  const auto m = find_countermodel(parse_sequent("<A>p & <A>q |- <A>(p & q)"));
  ASSERT_TRUE(m.has_value());
  EXPECT_NE(countermodel_to_json(*m).find("\"relations\""), std::string::npos);
  EXPECT_NE(countermodel_to_text(*m).find("witness"), std::string::npos);
}

TEST(ComplexAlgebra, TwoChainGivesThreeChain) {
  KripkeFrame f;
  f.worlds = 2;
  f.down = {0b01, 0b11};  // a ≤ b
  f.agents = {A};
  f.succ = {{0, 0}};
  const FiniteDLAM d = complex_algebra(f);
  EXPECT_EQ(d.size, 3);
  int comparable = 0;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) comparable += (d.leq[x][y] || d.leq[y][x]) ? 1 : 0;
  EXPECT_EQ(comparable, 9);
}

TEST(ComplexAlgebra, DiscreteOrderGivesPowerset) {
  const FiniteDLAM d = complex_algebra(discrete(3, {{0, 0, 0}}));
  EXPECT_EQ(d.size, 8);
}

TEST(ComplexAlgebra, ModalImagesAreDownsets) {
  for (int n = 1; n <= 3; ++n) {
    for (const auto& f : canonical_frames(n, {A})) {
      const FiniteDLAM d = complex_algebra(f);
      for (int x = 0; x < d.size; ++x) {
        EXPECT_TRUE(f.is_downset(d.downsets[d.dia[0][x]]));
        EXPECT_TRUE(f.is_downset(d.downsets[d.box[0][x]]));
      }
    }
  }
}

TEST(Laws, EveryComplexAlgebraValidates) {
  for (int n = 1; n <= 3; ++n) {
    for (const auto& f : canonical_frames(n, {A})) {
      const DlamReport r = dlam_validate(complex_algebra(f));
      EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.violations[0].law + " " + r.violations[0].witness);
    }
  }
}

TEST(Laws, IdentityModalitiesOnPowerset) {
  std::vector<std::vector<bool>> leq(4, std::vector<bool>(4));
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) leq[x][y] = (x & ~y) == 0;
  const FiniteDLAM d = make_dlam(leq, {A}, {{0, 1, 2, 3}}, {{0, 1, 2, 3}});
  EXPECT_TRUE(dlam_validate(d).ok());
}

TEST(Laws, PlantedBoxTopViolation) {
  FiniteDLAM d = complex_algebra(discrete(2, {{0b01, 0b10}}));
  const int top = d.top;
  const int bottom = d.bottom;
  d.box[0][top] = bottom;
  const DlamReport r = dlam_validate(d);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.violates("box-top"));
}

TEST(Laws, IdentifiersAreStable) {
  const auto& laws = dlam_laws();
  EXPECT_EQ(laws.size(), 16U);
  EXPECT_EQ(laws.front(), "partial-order");
  EXPECT_EQ(laws.back(), "unit");
}

TEST(Dlam, EmptyContextIsTop) {
  const FiniteDLAM d = complex_algebra(discrete(2, {{0b11, 0b11}}));
  EXPECT_TRUE(sequent_true_dlam(d, {}, parse_sequent(" |- top")));
}

TEST(Dlam, CounitHoldsEverywhere) {
  const Sequent s = parse_sequent("([A]p)^A |- p");
  for (const auto& f : canonical_frames(2, {A})) {
    const FiniteDLAM d = complex_algebra(f);
    for (int x = 0; x < d.size; ++x) EXPECT_TRUE(sequent_true_dlam(d, {{"p", x}}, s));
  }
}

TEST(Dlam, UninterpretedAtomThrows) {
  const FiniteDLAM d = complex_algebra(discrete(1, {{0}}));
  EXPECT_THROW(interpret(d, {}, parse_formula("p")), SemanticsError);
}

TEST(Dlam, AgreesWithKripkeUnderInducedInterpretation) {
  testgen::Generator g(34);
  std::vector<Sequent> sequents;
  for (int i = 0; i < 40; ++i) sequents.push_back(g.sequent(2, 2, 6));
  KripkeBounds b;
  b.max_worlds = 2;
  b.agents = {A, B};
  b.atoms = {"p", "q", "r"};
  std::size_t compared = 0;
  enumerate_structures(b, [&](const KripkeStructure& s) {
    const FiniteDLAM d = complex_algebra(s.frame);
    const Interpretation interp = induced_interpretation(s, d);
    for (const auto& seq : sequents) {
      EXPECT_EQ(sequent_true_kripke(s, seq), sequent_true_dlam(d, interp, seq)) << to_string(seq);
      ++compared;
    }
    return true;
  });
  EXPECT_GT(compared, 1000U);
}

}  // namespace
}  // namespace apml
