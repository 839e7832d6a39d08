#include <gtest/gtest.h>

#include <atomic>

#include "apml/parse.hpp"
#include "apml/print.hpp"
#include "apml/search.hpp"
#include "apml/semantics.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace apml {
namespace {

const char* kDuplication = "<A>[A](p | q) |- (p & <A>[A](p | q)) | (q & <A>[A](p | q))";

bool uses(const Derivation& d, RuleKind k) { return count_rule(d, k) > 0; }

TEST(Search, DuplicationExampleIsProved) {
  const SearchOutcome r = prove(parse_sequent(kDuplication));
  ASSERT_EQ(r.verdict, Verdict::Proved);
  EXPECT_TRUE(check(r.derivation, {}).ok());
  EXPECT_TRUE(cut_free(r.derivation));
  EXPECT_TRUE(uses(r.derivation, RuleKind::BoxL));
}

TEST(Search, WithoutDuplicationEveryDepthFails) {
  const Sequent s = parse_sequent(kDuplication);
  for (std::size_t depth = 1; depth <= 30; ++depth) {
    SearchConfig c;
    c.max_depth = depth;
    c.duplicate_boxl_principal = false;
    EXPECT_NE(prove(s, c).verdict, Verdict::Proved) << depth;
  }
}

TEST(Search, DiamondJoinUsesCompletenessShape) {
  const SearchOutcome r = prove(parse_sequent("<A>(p | q) |- <A>p | <A>q"));
  ASSERT_EQ(r.verdict, Verdict::Proved);
  EXPECT_TRUE(check(r.derivation, {}).ok());
  EXPECT_EQ(r.derivation->rule.kind, RuleKind::DiaL);
  for (RuleKind k : {RuleKind::OrL, RuleKind::OrR1, RuleKind::OrR2, RuleKind::DiaR}) EXPECT_TRUE(uses(r.derivation, k));
}

TEST(Search, BoxIsNotTruthfulAtAnyDepth) {
  const Sequent s = parse_sequent("[A]p |- p");
  for (std::size_t depth : {1U, 5U, 20U, 100U, 400U}) {
    SearchConfig c;
    c.max_depth = depth;
    EXPECT_EQ(prove(s, c).verdict, Verdict::NotProvedWithinBounds);
  }
}

TEST(Search, AdjunctionUnitAndDiamondBottom) {
  EXPECT_EQ(prove(parse_sequent("p |- [A]<A>p")).verdict, Verdict::Proved);
  EXPECT_EQ(prove(parse_sequent("<A>bot |- bot")).verdict, Verdict::Proved);
}

TEST(Decide, RefutesDiamondMeet) {
  const SearchOutcome r = decide(parse_sequent("<A>p & <A>q |- <A>(p & q)"));
  ASSERT_EQ(r.verdict, Verdict::Refuted);
  ASSERT_TRUE(r.countermodel.has_value());
  EXPECT_FALSE(oracle::holds(r.countermodel->structure, parse_sequent("<A>p & <A>q |- <A>(p & q)")));
}

TEST(Search, RegressionCorpus) {
  for (const auto& e : oracle::regression_corpus()) {
    const Sequent s = parse_sequent(e.text);
    const SearchOutcome r = decide(s);
    if (e.provable) {
      ASSERT_EQ(r.verdict, Verdict::Proved) << "line " << e.line << ": " << e.text;
      EXPECT_TRUE(check(r.derivation, {}).ok()) << e.text;
      EXPECT_TRUE(equivalent(r.derivation->conclusion, s));
    } else {
      ASSERT_EQ(r.verdict, Verdict::Refuted) << "line " << e.line << ": " << e.text;
      EXPECT_FALSE(oracle::holds(r.countermodel->structure, s)) << e.text;
      EXPECT_NE(prove(s).verdict, Verdict::Proved);
    }
  }
}

TEST(Search, ProofsAreSoundOnSmallModels) {
  testgen::Generator g(41);
  KripkeBounds b;
  b.max_worlds = 2;
  b.agents = {Agent("A"), Agent("B")};
  b.atoms = {"p", "q", "r"};
  std::vector<KripkeStructure> models;
  enumerate_structures(b, [&](const KripkeStructure& s) {
    models.push_back(s);
    return true;
  });
  int proved = 0;
  for (int i = 0; i < 300; ++i) {
    const Sequent s = g.sequent(3, 2, 8);
    SearchConfig c;
    c.max_nodes = 20000;
    const SearchOutcome r = prove(s, c);
    if (r.verdict != Verdict::Proved) continue;
    ++proved;
    ASSERT_TRUE(check(r.derivation, {}).ok()) << to_string(s);
    for (const auto& m : models) ASSERT_TRUE(oracle::holds(m, s)) << to_string(s);
  }
  EXPECT_GT(proved, 100);
}

TEST(Search, ProveAndDecideAgree) {
  testgen::Generator g(42);
  for (int i = 0; i < 120; ++i) {
    const Sequent s = g.sequent(2, 2, 6);
    SearchConfig c;
    c.max_nodes = 20000;
    const SearchOutcome a = prove(s, c);
    const SearchOutcome b = decide(s, c);
    if (a.verdict == Verdict::Proved) {
      EXPECT_EQ(b.verdict, Verdict::Proved) << to_string(s);
    }
    if (b.verdict == Verdict::Refuted) {
      EXPECT_NE(a.verdict, Verdict::Proved) << to_string(s);
    }
  }
}

TEST(Search, AssumptionsEnableProofs) {
  const Sequent s = parse_sequent("p |- [A](q | r)");
  EXPECT_NE(prove(s).verdict, Verdict::Proved);
  SearchConfig c;
  c.assumptions = parse_assumptions("assn A p => q | r");
  const SearchOutcome r = prove(s, c);
  ASSERT_EQ(r.verdict, Verdict::Proved);
  EXPECT_TRUE(check(r.derivation, c.assumptions).ok());
  EXPECT_FALSE(check(r.derivation, {}).ok());
  EXPECT_EQ(count_rule(r.derivation, RuleKind::Assn), 1U);
}

TEST(Search, NodeBudgetIsReported) {
  SearchConfig c;
  c.max_nodes = 3;
  const SearchOutcome r = prove(parse_sequent(kDuplication), c);
  EXPECT_EQ(r.verdict, Verdict::NotProvedWithinBounds);
  EXPECT_TRUE(r.stats.bound_hit);
}

TEST(Search, CancellationStopsTheSearch) {
  std::atomic<bool> stop{true};
  SearchConfig c;
  c.cancel = &stop;
  const SearchOutcome r = prove(parse_sequent(kDuplication), c);
  EXPECT_NE(r.verdict, Verdict::Proved);
  EXPECT_TRUE(r.stats.cancelled);
}

TEST(Search, StatsSerialize) {
  const SearchOutcome r = prove(parse_sequent("p |- p"));
  const std::string j = stats_to_json(r.stats);
  for (const char* key : {"nodes", "max_depth_reached", "loop_prunes", "bound_hit"}) {
    EXPECT_NE(j.find(key), std::string::npos) << key;
  }
  EXPECT_EQ(verdict_name(Verdict::Proved), "Proved");
}

}  // namespace
}  // namespace apml
