#include <gtest/gtest.h>

#include <iostream>
#include <numeric>

#include "qualtree/emptiness.hpp"
#include "qualtree/random.hpp"
#include "support.hpp"

using namespace qualtree;

namespace {

AlternatingTreeAutomaton single_eloise(std::vector<std::string> letters)
{
    AlternatingTreeAutomaton a;
    a.alphabet = NameTable(letters);
    a.states = NameTable({"q"});
    a.eloise = {0};
    for (Id s = 0; s < a.alphabet.size(); ++s)
        a.transitions.insert({0, s, 0, 0});
    a.complete = true;
    return a;
}

ObservationStrategy by_memory(std::size_t memory, const std::function<std::size_t(std::size_t)>& act,
                              const std::function<std::size_t(std::size_t)>& next)
{
    ObservationStrategy s;
    s.memory_size = memory;
    for (std::size_t m = 0; m < memory; ++m) {
        s.memory_labels.push_back("m" + std::to_string(m));
        for (std::size_t o = 0; o < 3; ++o) {
            s.act[{m, o}] = act(m);
            for (std::size_t a = 0; a < 8; ++a)
                s.update[{m, a, o}] = next(m);
        }
    }
    return s;
}

/// Labels along a branch of the unfolding, first `depth` letters.
std::vector<std::string> along(const RegularTree& t, const std::vector<int>& dirs)
{
    std::vector<std::string> out;
    std::size_t n = t.root;
    out.push_back(t.labels[n]);
    for (int d : dirs) {
        n = t.child(n, d);
        out.push_back(t.labels[n]);
    }
    return out;
}

AlternatingTreeAutomaton renamed(const AlternatingTreeAutomaton& a, const std::vector<std::size_t>& perm,
                                 std::set<Id>& f)
{
    auto name = [&](Id q) { return "s" + std::to_string(perm[q]); };
    std::vector<std::string> names;
    for (Id q = 0; q < a.states.size(); ++q)
        names.push_back(name(q));
    AlternatingTreeAutomaton b;
    b.alphabet = a.alphabet;
    b.states = NameTable(names);
    auto id = [&](Id q) { return b.states.at(name(q)); };
    b.initial = id(a.initial);
    for (Id q : a.eloise)
        b.eloise.insert(id(q));
    for (Id q : a.abelard)
        b.abelard.insert(id(q));
    for (const auto& t : a.transitions)
        b.transitions.insert({id(t.state), t.symbol, id(t.left), id(t.right)});
    b.complete = a.complete;
    std::set<Id> g;
    for (Id q : f)
        g.insert(id(q));
    f = g;
    return b;
}

VertexSet lifted_target(const StochasticArena& h, const VertexSet& target)
{
    VertexSet out(h.size(), false);
    for (std::size_t v = 0; v < target.size(); ++v)
        out[v] = target[v];
    return out;
}

} // namespace

TEST(EmptinessGame, VerticesAndObservations)
{
    AlternatingTreeAutomaton a;
    a.alphabet = NameTable({"a"});
    a.states = NameTable({"q0", "q1"});
    a.eloise = {0};
    a.abelard = {1};
    a.transitions = {{0, 0, 0, 1}, {1, 0, 1, 1}};
    a.complete = true;
    auto game = build_emptiness_game(a, {1});
    const auto& g = game.arena;
    EXPECT_EQ(g.size(), 5u);
    EXPECT_EQ(g.observation_count(), 3u);
    EXPECT_EQ(g.names[0], "q0@eps");
    std::map<std::size_t, std::set<std::string>> classes;
    for (VertexId v = 0; v < g.size(); ++v)
        classes[g.obs[v]].insert(g.names[v]);
    EXPECT_EQ(classes[game.eps_obs], (std::set<std::string>{"q0@eps"}));
    EXPECT_EQ(classes[game.dir0_obs], (std::set<std::string>{"q0@0", "q1@0"}));
    EXPECT_EQ(classes[game.dir1_obs], (std::set<std::string>{"q0@1", "q1@1"}));
    EXPECT_EQ(game.target, (VertexSet{false, false, true, false, true}));
    EXPECT_TRUE(validate(g).empty());
}

TEST(EmptinessGame, ActionsPairSymbolsWithLocalChoices)
{
    AlternatingTreeAutomaton a;
    a.alphabet = NameTable({"a", "b"});
    a.states = NameTable({"q0", "w", "x", "y", "z"});
    a.eloise = {0};
    a.abelard = {1, 2, 3, 4};
    const Id q0 = 0, w = 1, x = 2, y = 3, z = 4;
    a.transitions = {{q0, 0, x, y}, {q0, 0, z, w}, {q0, 1, x, y}};
    for (Id q = 1; q < 5; ++q)
        for (Id s = 0; s < 2; ++s)
            a.transitions.insert({q, s, q, q});
    a.complete = true;
    auto acts = emptiness_actions(a);
    EXPECT_EQ(acts.size(), 3u);
    auto game = build_emptiness_game(a, {});
    EXPECT_EQ(game.arena.action_count(), 3u);
    EXPECT_EQ(game.arena.actions[0], "a[q0:x,y]");
}

TEST(EmptinessGame, EloiseRowsAreForcedAndAbelardRowsFollowDelta)
{
    gen::Rng rng(51);
    for (int i = 0; i < 50; ++i) {
        auto inst = gen::alternating(rng, 4, 2);
        const auto& a = inst.automaton;
        auto game = build_emptiness_game(a, inst.final_states);
        const auto nq = a.states.size();
        for (VertexId v = 0; v < game.arena.size(); ++v) {
            Id q = v == 0 ? a.initial : static_cast<Id>((v - 1) % nq);
            for (std::size_t k = 0; k < game.actions.size(); ++k) {
                const auto& act = game.actions[k];
                const auto& row = game.arena.trans[v][k];
                if (a.is_eloise(q)) {
                    ASSERT_EQ(row.size(), 1u);
                    auto [q0, q1] = act.choice.at(q);
                    EXPECT_EQ(row[0], Distribution<VertexId>::even(1 + q0, 1 + nq + q1));
                } else {
                    EXPECT_EQ(row.size(), moves(a.transitions, q, act.symbol).size());
                }
            }
        }
    }
}

TEST(EmptinessGame, EloiseStateWithoutMovesIsNamed)
{
    auto a = single_eloise({"a", "b"});
    a.transitions.erase({0, 1, 0, 0});
    try {
        emptiness_actions(a);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("symbol b"), std::string::npos);
    }
}

TEST(CheckObservationStrategy, Examples)
{
    ImperfectInfoArena g;
    g.names = {"v"};
    g.actions = {"x"};
    g.obs = {0};
    g.obs_names = {"o"};
    g.trans = {{{Distribution<VertexId>::point(0)}}};
    ObservationStrategy s;
    s.memory_size = 1;
    s.act[{0, 0}] = 0;
    s.update[{0, 0, 0}] = 0;
    EXPECT_TRUE(check_observation_strategy(g, {true}, s));
    EXPECT_FALSE(check_observation_strategy(g, {false}, s));

    // Two vertices, the target is only reachable through action y.
    ImperfectInfoArena h;
    h.names = {"a", "t"};
    h.actions = {"x", "y"};
    h.obs = {0, 0};
    h.obs_names = {"o"};
    h.trans = {{{Distribution<VertexId>::point(0)}, {Distribution<VertexId>::point(1)}},
               {{Distribution<VertexId>::point(1)}, {Distribution<VertexId>::point(1)}}};
    EXPECT_FALSE(check_observation_strategy(h, {false, true}, s));
}

TEST(CheckObservationStrategy, SurvivesRandomAbelardSimulation)
{
    gen::Rng rng(52);
    int checked = 0;
    for (int i = 0; i < 400 && checked < 20; ++i) {
        auto [g, target] = gen::imperfect_arena(rng, 5, 3);
        auto res = solve_imperfect_buchi(g, target);
        if (!res.wins)
            continue;
        ++checked;
        const auto& s = *res.strategy;
        std::vector<std::vector<std::size_t>> act(s.memory_size, std::vector<std::size_t>(g.observation_count(), 0));
        for (const auto& [key, a] : s.act)
            act[key.first][key.second] = a;
        // step[v][a][k]: k-th alternative Abélard may pick at v under action a.
        std::vector<std::vector<std::vector<support::Sampler<VertexId>>>> step(g.size());
        for (VertexId v = 0; v < g.size(); ++v)
            for (std::size_t a = 0; a < g.action_count(); ++a) {
                step[v].emplace_back();
                for (const auto& d : g.trans[v][a])
                    step[v][a].emplace_back(d);
            }
        std::mt19937_64 play_rng(7000 + i);
        std::size_t refuted = 0;
        for (int play = 0; play < 10000; ++play) {
            VertexId v = g.initial;
            std::size_t m = s.initial_memory;
            bool late = false;
            for (int t = 0; t < 1000; ++t) {
                auto a = act[m][g.obs[v]];
                const auto& alternatives = step[v][a];
                v = alternatives[play_rng() % alternatives.size()].draw(play_rng);
                m = s.update.at({m, a, g.obs[v]});
                late = late || (t >= 500 && target[v]);
            }
            refuted += !late;
        }
        EXPECT_EQ(refuted, 0u) << "instance " << i;
    }
    EXPECT_EQ(checked, 20);
}

TEST(SolveImperfect, ObservableInstancesMatchPerfectInformation)
{
    gen::Rng rng(53);
    for (int i = 0; i < 100; ++i) {
        auto [g, target] = gen::imperfect_arena(rng, 5, 3);
        auto open = observable_variant(g);
        auto h = induced_perfect_arena(open);
        EXPECT_EQ(solve_imperfect_buchi(open, target).wins,
                  almost_sure_buchi(h, lifted_target(h, target)).wins(h.initial))
            << "arena " << i;
    }
}

TEST(SolveImperfect, AgreesWithBeliefStrategyEnumeration)
{
    gen::Rng rng(54);
    int wins = 0;
    for (int i = 0; i < 100; ++i) {
        auto [g, target] = gen::imperfect_arena(rng, 5, 3);
        bool solved = solve_imperfect_buchi(g, target).wins;
        EXPECT_EQ(solved, oracle_belief_strategy_exists(g, target)) << "arena " << i;
        wins += solved;
    }
    EXPECT_GT(wins, 5);
    EXPECT_LT(wins, 95);
}

TEST(SolveImperfect, ExtraMemoryBitOnlyAddsWins)
{
    gen::Rng rng(55);
    int flips = 0;
    for (int i = 0; i < 100; ++i) {
        auto [g, target] = gen::imperfect_arena(rng, 4, 2);
        bool beliefs = oracle_belief_strategy_exists(g, target);
        bool enriched = oracle_belief_strategy_exists(g, target, {true, std::size_t{1} << 18, std::uint64_t{1} << 24});
        EXPECT_TRUE(!beliefs || enriched) << "arena " << i;
        flips += beliefs != enriched;
    }
    RecordProperty("memory_flips", flips);
    std::cout << "instances where one extra memory bit wins: " << flips << " of 100" << std::endl;
}

TEST(SolveImperfect, BeliefMemoryIsNotEnoughForPureStrategies)
{
    // One observation class. Any fixed action on the full belief lets Abélard park the play
    // outside the target; alternating the two actions wins almost surely.
    ImperfectInfoArena g;
    g.names = {"v0", "v1", "v2"};
    g.actions = {"x", "y"};
    g.obs = {0, 0, 0};
    g.obs_names = {"o"};
    auto p = [](VertexId v) { return Distribution<VertexId>::point(v); };
    g.trans = {{{p(1), Distribution<VertexId>::even(0, 2)}, {Distribution<VertexId>::even(1, 2), p(0)}},
               {{p(1)}, {p(2)}},
               {{p(2)}, {Distribution<VertexId>::even(0, 1)}}};
    VertexSet target{false, true, false};
    ASSERT_TRUE(validate(g).empty());
    EXPECT_FALSE(oracle_belief_strategy_exists(g, target));
    EXPECT_FALSE(solve_imperfect_buchi(g, target).wins);
    EXPECT_TRUE(oracle_belief_strategy_exists(g, target, {true, std::size_t{1} << 18, std::uint64_t{1} << 24}));

    ObservationStrategy alternate;
    alternate.memory_size = 2;
    for (std::size_t m = 0; m < 2; ++m) {
        alternate.act[{m, 0}] = m;
        for (std::size_t a = 0; a < 2; ++a)
            alternate.update[{m, a, 0}] = 1 - m;
    }
    EXPECT_TRUE(check_observation_strategy(g, target, alternate));
}

TEST(SolveImperfect, BeliefCapIsReported)
{
    gen::Rng rng(56);
    auto [g, target] = gen::imperfect_arena(rng, 5, 3);
    EXPECT_THROW(solve_imperfect_buchi(g, target, {0, 1 << 20}), ResourceExceeded);
}

TEST(RootChecker, NoTreeIsAcceptedButAnObserverWins)
{
    auto a = root_checker_automaton();
    auto f = root_checker_accepting();
    auto res = check_emptiness(a, f);
    EXPECT_EQ(res.status, EmptinessStatus::Empty);

    auto game = build_emptiness_game(a, f);
    EXPECT_FALSE(solve_imperfect_buchi(game.arena, game.target).wins);
    EXPECT_FALSE(oracle_belief_strategy_exists(game.arena, game.target));

    auto open = observable_variant(game.arena);
    EXPECT_TRUE(solve_imperfect_buchi(open, game.target).wins);
    EXPECT_TRUE(oracle_belief_strategy_exists(open, game.target));
    auto h = induced_perfect_arena(game.arena);
    EXPECT_TRUE(almost_sure_buchi(h, lifted_target(h, game.target)).wins(h.initial));

    // Each constant tree fails one of Abélard's two checks.
    for (const auto* label : {"a", "b"}) {
        RegularTree t;
        t.add_node("n", label);
        EXPECT_FALSE(qualitative_membership(a, {AcceptanceKind::Buchi, f}, t));
    }
}

TEST(ExtractWitness, ConstantStrategyUnfoldsToConstantTree)
{
    auto a = single_eloise({"a", "b"});
    auto game = build_emptiness_game(a, {0});
    auto b_action = std::size_t{1};
    ASSERT_EQ(a.alphabet[game.actions[b_action].symbol], "b");
    auto s = by_memory(1, [&](std::size_t) { return b_action; }, [](std::size_t) { return std::size_t{0}; });
    auto w = extract_witness(a, game, s);
    for (const auto& l : w.tree.labels)
        EXPECT_EQ(l, "b");
    EXPECT_EQ(canonical_word(branch_word(w.tree, {{}, {"0", "1"}})), (UltimatelyPeriodicWord{{}, {"b"}}));
    EXPECT_EQ(w.choice.size(), w.tree.size());
    EXPECT_EQ(w.choice.front().at(0), std::make_pair(Id{0}, Id{0}));
}

TEST(ExtractWitness, ParityMemoryAlternatesLetters)
{
    auto a = single_eloise({"a", "b"});
    auto game = build_emptiness_game(a, {0});
    auto s = by_memory(2, [](std::size_t m) { return m; }, [](std::size_t m) { return 1 - m; });
    auto w = extract_witness(a, game, s);
    EXPECT_EQ(along(w.tree, {0, 1, 1, 0}), (std::vector<std::string>{"a", "b", "a", "b", "a"}));
    EXPECT_TRUE(validate(w.tree).empty());
    for (std::size_t n = 0; n < w.tree.size(); ++n)
        EXPECT_EQ(w.tree.labels[w.tree.succ0[n]], w.tree.labels[w.tree.succ1[n]]);
}

TEST(ExtractWitness, UndefinedReachablePairIsAnError)
{
    auto a = single_eloise({"a"});
    auto game = build_emptiness_game(a, {0});
    ObservationStrategy s;
    s.memory_size = 1;
    s.act[{0, game.eps_obs}] = 0;
    s.update[{0, 0, game.dir0_obs}] = 0;
    s.update[{0, 0, game.dir1_obs}] = 0;
    EXPECT_THROW(extract_witness(a, game, s), std::invalid_argument);
}

TEST(CheckEmptiness, SingleEloiseStateIsNonEmpty)
{
    auto a = single_eloise({"a"});
    auto res = check_emptiness(a, {0});
    ASSERT_EQ(res.status, EmptinessStatus::NonEmpty);
    for (const auto& l : res.witness->tree.labels)
        EXPECT_EQ(l, "a");
    EXPECT_EQ(check_emptiness(a, {}).status, EmptinessStatus::Empty);
}

TEST(CheckEmptiness, AgreesWithOracleAndShipsVerifiedWitnesses)
{
    gen::Rng rng(57);
    int nonempty = 0;
    for (int i = 0; i < 100; ++i) {
        auto inst = gen::alternating(rng, 4, 2);
        auto res = check_emptiness(inst.automaton, inst.final_states);
        ASSERT_NE(res.status, EmptinessStatus::ResourceExceeded);
        auto game = build_emptiness_game(inst.automaton, inst.final_states);
        bool ne = res.status == EmptinessStatus::NonEmpty;
        EXPECT_EQ(ne, oracle_belief_strategy_exists(game.arena, game.target)) << "instance " << i;
        if (ne) {
            ++nonempty;
            EXPECT_TRUE(qualitative_membership(inst.automaton, {AcceptanceKind::Buchi, inst.final_states},
                                               res.witness->tree));
        }
    }
    EXPECT_GT(nonempty, 10);
}

TEST(CheckEmptiness, UniversalAutomataRoundTrip)
{
    gen::Rng rng(58);
    for (int i = 0; i < 50; ++i) {
        auto [u, f] = gen::universal(rng, 3, 2);
        auto a = universal_to_alternating(u);
        auto res = check_emptiness(a, f);
        if (res.status == EmptinessStatus::NonEmpty) {
            EXPECT_TRUE(qualitative_membership(u, {AcceptanceKind::Buchi, f}, res.witness->tree));
            continue;
        }
        for (int k = 0; k < 20; ++k)
            EXPECT_FALSE(qualitative_membership(u, {AcceptanceKind::Buchi, f}, gen::regular_tree(rng, 4, u.alphabet)))
                << "instance " << i;
    }
}

TEST(CheckEmptiness, InvariantUnderStateRenaming)
{
    gen::Rng rng(59);
    for (int i = 0; i < 60; ++i) {
        auto inst = gen::alternating(rng, 4, 2);
        std::vector<std::size_t> perm(inst.automaton.states.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        auto f = inst.final_states;
        auto b = renamed(inst.automaton, perm, f);
        EXPECT_EQ(check_emptiness(inst.automaton, inst.final_states).status, check_emptiness(b, f).status);
    }
}

TEST(CheckEmptiness, OneStateGamesAreFullyObservable)
{
    gen::Rng rng(60);
    for (int i = 0; i < 60; ++i) {
        auto inst = gen::alternating(rng, 1, 2, 3);
        auto game = build_emptiness_game(inst.automaton, inst.final_states);
        auto h = induced_perfect_arena(game.arena);
        EXPECT_EQ(solve_imperfect_buchi(game.arena, game.target).wins,
                  almost_sure_buchi(h, lifted_target(h, game.target)).wins(h.initial));
    }
}

TEST(CheckEmptiness, ResourceLimitIsAThirdOutcome)
{
    EmptinessOptions opt;
    opt.max_actions = 1;
    auto res = check_emptiness(single_eloise({"a", "b"}), {0}, opt);
    EXPECT_EQ(res.status, EmptinessStatus::ResourceExceeded);
    EXPECT_FALSE(res.witness);
    EXPECT_STREQ(to_string(res.status), "resource-exceeded");
}
