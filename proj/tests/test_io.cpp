#include <gtest/gtest.h>

#include "qualtree/emptiness.hpp"
#include "qualtree/io.hpp"
#include "qualtree/random.hpp"
#include "qualtree/reductions.hpp"

using namespace qualtree;

#ifndef QUALTREE_DATA_DIR
#define QUALTREE_DATA_DIR "data"
#endif

namespace {

std::string data(const std::string& name) { return io::read_file(std::string(QUALTREE_DATA_DIR) + "/" + name); }

void round_trips(const AutomatonFile& f)
{
    auto text = print_automaton(f);
    auto back = parse_automaton(text);
    EXPECT_EQ(back.automaton, f.automaton) << text;
    EXPECT_EQ(back.accept, f.accept);
    EXPECT_EQ(print_automaton(back), text);
}

std::string message_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(AutomatonFormat, RoundTripsEveryKind)
{
    gen::Rng rng(71);
    for (int i = 0; i < 40; ++i) {
        auto alt = gen::alternating(rng, 4, 2);
        round_trips({alt.automaton, AcceptanceCondition{AcceptanceKind::Buchi, alt.final_states}});
        auto [u, f] = gen::universal(rng, 4, 2);
        round_trips({u, AcceptanceCondition{AcceptanceKind::CoBuchi, f}});
        auto [w, g] = gen::simple_word_automaton(rng, 4, 2);
        round_trips({w, AcceptanceCondition{AcceptanceKind::CoBuchi, g}});
        round_trips({lift_swap(w), std::nullopt});
        auto b = to_nonzero(u, f);
        b.local.insert({0, 0, static_cast<Id>(gen::below(rng, u.states.size()))});
        round_trips({b, std::nullopt});
    }
}

TEST(AutomatonFormat, ReweightedDistributionsSurvive)
{
    auto w = sharps_automaton(NameTable({"a"}), "sharp").automaton;
    Distribution<Id> d;
    d.add(0, Rational(2, 7));
    d.add(1, Rational(5, 7));
    w.delta[{0, 1}] = d;
    round_trips({w, std::nullopt});
}

TEST(AutomatonFormat, SampleFilesMatchTheBuiltIns)
{
    auto checker = parse_automaton(data("root_checker.aut"));
    EXPECT_EQ(std::get<AlternatingTreeAutomaton>(checker.automaton), root_checker_automaton());
    EXPECT_EQ(checker.accept->target, root_checker_accepting());

    auto sharps = parse_automaton(data("sharps.aut"));
    auto c = sharps_automaton(NameTable({"a"}), "sharp");
    EXPECT_EQ(std::get<ProbWordAutomaton>(sharps.automaton), c.automaton);
    EXPECT_EQ(sharps.accept, (AcceptanceCondition{AcceptanceKind::CoBuchi, c.cobuchi}));

    for (const auto* name : {"coin.aut", "nonempty.aut", "universal.aut"})
        EXPECT_NO_THROW(parse_automaton(data(name))) << name;
}

TEST(AutomatonFormat, ErrorsNameTheLine)
{
    EXPECT_EQ(message_of([] { parse_automaton("alphabet a\nstates q\n"); }),
              "missing or unknown automaton kind ''");
    EXPECT_EQ(message_of([] { parse_automaton("kind tree\nalphabet a\nstates q\ninitial q\ntrans q a q r\n"); }),
              "line 5: unknown state 'r'");
    EXPECT_EQ(message_of([] { parse_automaton("kind tree\nalphabet a a\nstates q\n"); }),
              "line 2: duplicate name in alphabet");
    EXPECT_NE(message_of([] { parse_automaton("kind prob-word\nalphabet a\nstates q\ninitial q\nptrans q a x q\n"); }),
              "");
    EXPECT_NE(message_of([] { parse_automaton("kind tree\nalphabet a\nstates q\ninitial q\nptrans q a 1 q\n"); }),
              "");
}

TEST(TreeFormat, RoundTrips)
{
    gen::Rng rng(72);
    auto bits = NameTable({"0", "1"});
    for (int i = 0; i < 50; ++i) {
        auto t = gen::regular_tree(rng, 5, gen::alphabet(2));
        auto text = print_tree(t);
        auto back = parse_tree(text);
        EXPECT_EQ(print_tree(back), text);
        auto b = gen::lasso_word(rng, bits, 2, 3);
        EXPECT_EQ(branch_word(back, b), branch_word(t, b));
    }
}

TEST(TreeFormat, SampleFiles)
{
    auto t = parse_tree(data("alternating.tree"));
    EXPECT_EQ(t.size(), 2u);
    EXPECT_EQ(branch_word(t, {{}, {"0"}}), (UltimatelyPeriodicWord{{"a"}, {"b"}}));
    EXPECT_EQ(branch_word(t, {{}, {"1"}}), (UltimatelyPeriodicWord{{}, {"a"}}));
    EXPECT_EQ(parse_tree(data("all_a.tree")).labels, std::vector<std::string>{"a"});
    EXPECT_THROW(parse_tree("tree\nroot r\nnode r a r x\n"), ParseError);
}

TEST(WordFormat, RoundTripsAndRejectsEmptyPeriod)
{
    auto w = parse_word(data("sharps.word"));
    EXPECT_EQ(w, (UltimatelyPeriodicWord{{"a"}, {"sharp", "a"}}));
    EXPECT_EQ(parse_word(print_word(w)), w);
    EXPECT_THROW(parse_word("word a |\n"), ParseError);
}

TEST(ArenaFormat, RoundTrips)
{
    gen::Rng rng(73);
    for (int i = 0; i < 50; ++i) {
        auto [g, target] = gen::arena(rng, 7);
        ArenaFile f{g, target};
        auto text = print_arena(f);
        auto back = parse_arena(text);
        EXPECT_EQ(back, canonical_arena(f));
        EXPECT_EQ(print_arena(back), text);
    }
}

TEST(ArenaFormat, SampleFileAndErrors)
{
    auto f = parse_arena(data("loop.arena"));
    EXPECT_EQ(f.arena.size(), 4u);
    EXPECT_EQ(f.arena.names[f.arena.initial], "start");
    EXPECT_THROW(parse_arena("arena\nvertex a eloise\nedge a a\n"), ParseError);
    EXPECT_THROW(parse_arena("arena\ninit a\nvertex a random\nedge a a\n"), ParseError);
    EXPECT_THROW(parse_arena("arena\ninit a\nvertex a dealer\n"), ParseError);
}

TEST(Digest, StableAndSensitive)
{
    EXPECT_EQ(io::digest("abc"), io::digest("abc"));
    EXPECT_NE(io::digest("abc"), io::digest("abd"));
    EXPECT_EQ(io::digest(""), "cbf29ce484222325");
}
