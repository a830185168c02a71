#include <gtest/gtest.h>

#include "qualtree/markov.hpp"
#include "qualtree/random.hpp"
#include "qualtree/reductions.hpp"
#include "support.hpp"

using namespace qualtree;

namespace {

struct Separator {
    CoBuchiWordAutomaton c = sharps_automaton(NameTable({"a"}), "sharp");
    Id p1 = c.automaton.states.at("p1");
    Id p2 = c.automaton.states.at("p2");
};

UltimatelyPeriodicWord word(std::vector<std::string> u, std::vector<std::string> v) { return {u, v}; }

MarkovChain absorbing(std::vector<bool> marks, std::vector<Rational> split)
{
    MarkovChain m;
    m.add_state("s", false);
    for (std::size_t i = 0; i < marks.size(); ++i) {
        auto s = m.add_state("t" + std::to_string(i), marks[i]);
        m.trans[s] = Distribution<std::size_t>::point(s);
        m.trans[0].add(s, split[i]);
    }
    return m;
}

} // namespace

TEST(Bsccs, SingleAbsorbingState)
{
    MarkovChain m;
    m.add_state("s", false);
    m.trans[0] = Distribution<std::size_t>::point(0);
    EXPECT_EQ(bsccs(m), (std::vector<std::vector<std::size_t>>{{0}}));
}

TEST(Bsccs, TwoAbsorbingHalves)
{
    auto m = absorbing({false, true}, {half(), half()});
    EXPECT_EQ(bsccs(m), (std::vector<std::vector<std::size_t>>{{1}, {2}}));
}

TEST(Bsccs, SeparatorChainOnAlternatingWordEndsInP2Cycle)
{
    Separator s;
    auto m = lasso_chain(s.c.automaton, s.c.cobuchi, word({}, {"a", "sharp"}));
    auto b = bsccs(m);
    ASSERT_EQ(b.size(), 1u);
    for (auto x : b.front())
        EXPECT_EQ(m.labels[x].substr(0, 2), "p2");
    EXPECT_EQ(b.front().size(), 2u);
}

TEST(AsVerdict, AbsorbingStates)
{
    MarkovChain unmarked;
    unmarked.add_state("s", false);
    unmarked.trans[0] = Distribution<std::size_t>::point(0);
    EXPECT_TRUE(as_verdict(unmarked, AcceptanceKind::CoBuchi));
    EXPECT_FALSE(as_verdict(unmarked, AcceptanceKind::Buchi));
    auto marked = unmarked;
    marked.marked[0] = true;
    EXPECT_TRUE(as_verdict(marked, AcceptanceKind::Buchi));
    EXPECT_FALSE(as_verdict(marked, AcceptanceKind::CoBuchi));
}

TEST(AsVerdict, AgreesWithSampling)
{
    gen::Rng rng(21);
    for (int i = 0; i < 30; ++i) {
        auto m = gen::chain(rng, 6);
        auto late = support::runs_marked_late(m, 1000 + i, 10000, 1000);
        bool buchi = as_verdict(m, AcceptanceKind::Buchi);
        bool cobuchi = as_verdict(m, AcceptanceKind::CoBuchi);
        EXPECT_EQ(buchi, late == 10000u) << "chain " << i;
        EXPECT_EQ(cobuchi, late == 0u) << "chain " << i;
    }
}

TEST(AsVerdict, DependsOnlyOnSupport)
{
    gen::Rng rng(22);
    for (int i = 0; i < 100; ++i) {
        auto m = gen::chain(rng, 6);
        auto r = m;
        for (auto& d : r.trans) {
            auto sup = d.support();
            auto w = gen::weights(rng, sup.size());
            Distribution<std::size_t> e;
            for (std::size_t k = 0; k < sup.size(); ++k)
                e.add(sup[k], w[k]);
            d = e;
        }
        for (auto kind : {AcceptanceKind::Buchi, AcceptanceKind::CoBuchi})
            EXPECT_EQ(as_verdict(m, kind), as_verdict(r, kind));
    }
}

TEST(AcceptanceProbability, SeparatorAutomaton)
{
    Separator s;
    std::set<Id> f{s.p2};
    EXPECT_EQ(acceptance_probability(s.c.automaton, f, {"sharp"}), half());
    EXPECT_EQ(acceptance_probability(s.c.automaton, f, {"sharp", "sharp"}), Rational(3, 4));
    EXPECT_EQ(acceptance_probability(s.c.automaton, f, {}), 0);
    EXPECT_EQ(acceptance_probability(s.c.automaton, {s.p1}, {}), 1);
}

TEST(AcceptanceProbability, MatchesRunEnumeration)
{
    gen::Rng rng(23);
    for (int i = 0; i < 200; ++i) {
        auto [a, f] = gen::simple_word_automaton(rng, 4, 2);
        // Reweight with arbitrary positive rationals so the check is not limited to halves.
        for (auto& [key, d] : a.delta) {
            auto sup = d.support();
            auto w = gen::weights(rng, sup.size());
            Distribution<Id> e;
            for (std::size_t k = 0; k < sup.size(); ++k)
                e.add(sup[k], w[k]);
            d = e;
        }
        std::vector<std::string> u;
        auto len = gen::below(rng, 7);
        for (std::size_t k = 0; k < len; ++k)
            u.push_back(a.alphabet[static_cast<Id>(gen::below(rng, a.alphabet.size()))]);
        EXPECT_EQ(acceptance_probability(a, f, u), support::brute_acceptance_probability(a, f, u));
    }
}

TEST(LassoMembership, SeparatorExamples)
{
    Separator s;
    const auto& c = s.c.automaton;
    EXPECT_TRUE(lasso_membership_word(c, s.c.cobuchi, word({}, {"a", "sharp"}), AcceptanceKind::CoBuchi));
    EXPECT_FALSE(lasso_membership_word(c, s.c.cobuchi, word({}, {"a"}), AcceptanceKind::CoBuchi));
    EXPECT_FALSE(lasso_membership_word(c, s.c.cobuchi, word({"sharp"}, {"a"}), AcceptanceKind::CoBuchi));
}

TEST(LassoMembership, ChainHasOneStatePerReachablePair)
{
    Separator s;
    auto m = lasso_chain(s.c.automaton, s.c.cobuchi, word({"sharp"}, {"a"}));
    // (p1,0) then (p1,1) and (p2,1).
    EXPECT_EQ(m.size(), 3u);
    EXPECT_TRUE(validate(m).empty());
}

TEST(ProbTreeMembership, DiagonalLiftOfSeparator)
{
    Separator s;
    auto lifted = lift_diagonal(s.c.automaton);
    EXPECT_TRUE(prob_tree_membership(lifted, s.c.cobuchi, tree_from_word(word({}, {"a", "sharp"}))));
    EXPECT_FALSE(prob_tree_membership(lifted, s.c.cobuchi, tree_from_word(word({}, {"a"}))));
}

TEST(ProbTreeMembership, TreeOfWordMatchesWordVerdict)
{
    gen::Rng rng(24);
    for (int i = 0; i < 50; ++i) {
        auto [a, f] = gen::simple_word_automaton(rng, 4, 2);
        auto w = gen::lasso_word(rng, a.alphabet, 3, 3);
        for (auto kind : {AcceptanceKind::CoBuchi, AcceptanceKind::Buchi})
            EXPECT_EQ(prob_tree_membership(lift_diagonal(a), f, tree_from_word(w), kind),
                      lasso_membership_word(a, f, w, kind));
    }
}

TEST(ProbTreeMembership, ChainMergesLikeTerms)
{
    // From q on a: (q,q) with weight 1 over a one-node tree sends the whole mass to (q, n).
    ProbTreeAutomaton a;
    a.alphabet = NameTable({"a"});
    a.states = NameTable({"q"});
    a.delta[{0, 0}] = Distribution<StatePair>::point({0, 0});
    RegularTree t;
    t.add_node("n", "a");
    auto m = prob_tree_chain(a, {}, t);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_TRUE(m.trans[0].is_point());
}

TEST(SameWeightedGraph, DetectsWeightDifferences)
{
    auto x = absorbing({false, true}, {half(), half()});
    auto y = absorbing({false, true}, {Rational(1, 3), Rational(2, 3)});
    EXPECT_TRUE(same_weighted_graph(x, x));
    EXPECT_FALSE(same_weighted_graph(x, y));
}
