#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "arena.hpp"
#include "automata.hpp"
#include "emptiness.hpp"
#include "markov.hpp"
#include "regular_tree.hpp"

// Seeded instance generators. Every draw goes through `below`, so a seed fixes the instance
// independently of the standard library's distribution implementations.
namespace qualtree::gen {

using Rng = std::mt19937_64;

inline std::size_t below(Rng& rng, std::size_t n) { return n <= 1 ? 0 : static_cast<std::size_t>(rng() % n); }

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

inline std::size_t between(Rng& rng, std::size_t lo, std::size_t hi) { return lo + below(rng, hi - lo + 1); }

inline std::vector<std::string> numbered(const std::string& prefix, std::size_t n)
{
    std::vector<std::string> out;
    auto width = std::to_string(n ? n - 1 : 0).size();
    for (std::size_t i = 0; i < n; ++i) {
        auto d = std::to_string(i);
        out.push_back(prefix + std::string(width - d.size(), '0') + d);
    }
    return out;
}

/// Distinct sorted picks from [0, n), between 1 and `most` of them.
inline std::vector<std::size_t> some_of(Rng& rng, std::size_t n, std::size_t most)
{
    auto k = between(rng, 1, std::min(n, most));
    std::set<std::size_t> s;
    while (s.size() < k)
        s.insert(below(rng, n));
    return {s.begin(), s.end()};
}

/// Positive weights with small integer numerators, normalised to sum to one.
inline std::vector<Rational> weights(Rng& rng, std::size_t k)
{
    std::vector<Rational> w(k);
    Rational total = 0;
    for (auto& x : w) {
        x = Rational(static_cast<long>(between(rng, 1, 3)));
        total += x;
    }
    for (auto& x : w)
        x /= total;
    return w;
}

inline VertexSet subset(Rng& rng, std::size_t n)
{
    VertexSet s(n);
    for (std::size_t i = 0; i < n; ++i)
        s[i] = coin(rng);
    return s;
}

struct ArenaInstance {
    StochasticArena arena;
    VertexSet target;
};

/// Owners drawn from `owners`; vertices are named in sorted order and successors are sorted.
inline ArenaInstance arena(Rng& rng, std::size_t max_vertices, const std::vector<Owner>& owners = {
                                                                    Owner::Eloise, Owner::Abelard, Owner::Random})
{
    ArenaInstance out;
    auto n = between(rng, 1, max_vertices);
    auto names = numbered("v", n);
    for (std::size_t v = 0; v < n; ++v)
        out.arena.add_vertex(names[v], owners[below(rng, owners.size())]);
    for (std::size_t v = 0; v < n; ++v) {
        auto succ = some_of(rng, n, 3);
        if (out.arena.owner[v] == Owner::Random) {
            auto w = weights(rng, succ.size());
            for (std::size_t i = 0; i < succ.size(); ++i)
                out.arena.add_random_edge(v, succ[i], w[i]);
        } else {
            for (auto s : succ)
                out.arena.add_edge(v, s);
        }
    }
    out.target = subset(rng, n);
    return out;
}

inline MarkovChain chain(Rng& rng, std::size_t n)
{
    MarkovChain m;
    auto names = numbered("s", n);
    for (std::size_t s = 0; s < n; ++s)
        m.add_state(names[s], coin(rng));
    for (std::size_t s = 0; s < n; ++s) {
        auto succ = some_of(rng, n, 3);
        auto w = weights(rng, succ.size());
        for (std::size_t i = 0; i < succ.size(); ++i)
            m.trans[s].add(succ[i], w[i]);
    }
    return m;
}

inline NameTable alphabet(std::size_t k)
{
    std::vector<std::string> s;
    for (std::size_t i = 0; i < k; ++i)
        s.push_back(std::string(1, static_cast<char>('a' + i)));
    return NameTable(s);
}

struct WordInstance {
    ProbWordAutomaton automaton;
    std::set<Id> final_states;
};

/// Every transition is a point mass or an even split over two states.
inline WordInstance simple_word_automaton(Rng& rng, std::size_t max_states, std::size_t letters)
{
    WordInstance out;
    auto n = between(rng, 1, max_states);
    auto& a = out.automaton;
    a.alphabet = alphabet(letters);
    a.states = NameTable(numbered("q", n));
    a.initial = 0;
    for (Id q = 0; q < n; ++q)
        for (Id s = 0; s < letters; ++s) {
            auto x = static_cast<Id>(below(rng, n)), y = static_cast<Id>(below(rng, n));
            a.delta[{q, s}] = coin(rng) ? Distribution<Id>::point(x) : Distribution<Id>::even(x, y);
        }
    for (Id q = 0; q < n; ++q)
        if (coin(rng))
            out.final_states.insert(q);
    return out;
}

/// Random regular tree, pruned to the nodes reachable from the root.
inline RegularTree regular_tree(Rng& rng, std::size_t max_nodes, const NameTable& sigma)
{
    auto n = between(rng, 1, max_nodes);
    RegularTree t;
    auto names = numbered("n", n);
    for (std::size_t i = 0; i < n; ++i)
        t.add_node(names[i], sigma[static_cast<Id>(below(rng, sigma.size()))]);
    for (std::size_t i = 0; i < n; ++i) {
        t.succ0[i] = below(rng, n);
        t.succ1[i] = below(rng, n);
    }
    t.root = 0;
    return prune_unreachable(t);
}

inline UltimatelyPeriodicWord lasso_word(Rng& rng, const NameTable& sigma, std::size_t max_prefix,
                                         std::size_t max_period)
{
    UltimatelyPeriodicWord w;
    auto p = below(rng, max_prefix + 1), v = between(rng, 1, max_period);
    for (std::size_t i = 0; i < p; ++i)
        w.prefix.push_back(sigma[static_cast<Id>(below(rng, sigma.size()))]);
    for (std::size_t i = 0; i < v; ++i)
        w.period.push_back(sigma[static_cast<Id>(below(rng, sigma.size()))]);
    return canonical_word(w);
}

struct AlternatingInstance {
    AlternatingTreeAutomaton automaton;
    std::set<Id> final_states;
};

/// Complete alternating automaton with 1..`max_moves` transitions per (q, a); each state is
/// Éloïse's with probability `eloise_ratio`/4.
inline AlternatingInstance alternating(Rng& rng, std::size_t max_states, std::size_t max_letters,
                                       std::size_t max_moves = 2, std::size_t eloise_ratio = 2)
{
    AlternatingInstance out;
    auto& a = out.automaton;
    auto n = between(rng, 1, max_states);
    auto k = between(rng, 1, max_letters);
    a.alphabet = alphabet(k);
    a.states = NameTable(numbered("q", n));
    a.initial = 0;
    for (Id q = 0; q < n; ++q) {
        if (below(rng, 4) < eloise_ratio)
            a.eloise.insert(q);
        else
            a.abelard.insert(q);
        for (Id s = 0; s < k; ++s) {
            auto m = between(rng, 1, max_moves);
            for (std::size_t i = 0; i < m; ++i)
                a.transitions.insert({q, s, static_cast<Id>(below(rng, n)), static_cast<Id>(below(rng, n))});
        }
        if (coin(rng))
            out.final_states.insert(q);
    }
    a.complete = true;
    return out;
}

struct UniversalInstance {
    TreeAutomaton automaton;
    std::set<Id> final_states;
};

inline UniversalInstance universal(Rng& rng, std::size_t max_states, std::size_t letters, std::size_t max_moves = 2)
{
    auto alt = alternating(rng, max_states, letters, max_moves, 0);
    UniversalInstance out;
    out.automaton = TreeAutomaton{alt.automaton.alphabet, alt.automaton.states, alt.automaton.initial,
                                  alt.automaton.transitions, true};
    out.final_states = alt.final_states;
    return out;
}

struct ImperfectInstance {
    ImperfectInfoArena arena;
    VertexSet target;
};

inline ImperfectInstance imperfect_arena(Rng& rng, std::size_t max_vertices, std::size_t max_actions)
{
    ImperfectInstance out;
    auto& g = out.arena;
    auto n = between(rng, 1, max_vertices);
    auto k = between(rng, 1, max_actions);
    auto classes = between(rng, 1, n);
    g.names = numbered("v", n);
    g.actions = numbered("x", k);
    g.obs_names = numbered("o", classes);
    for (std::size_t v = 0; v < n; ++v)
        g.obs.push_back(below(rng, classes));
    g.trans.assign(n, std::vector<std::vector<Distribution<VertexId>>>(k));
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t a = 0; a < k; ++a) {
            auto alternatives = between(rng, 1, 2);
            for (std::size_t j = 0; j < alternatives; ++j) {
                auto sup = some_of(rng, n, 2);
                auto w = weights(rng, sup.size());
                Distribution<VertexId> d;
                for (std::size_t i = 0; i < sup.size(); ++i)
                    d.add(sup[i], w[i]);
                g.trans[v][a].push_back(std::move(d));
            }
        }
    out.target = subset(rng, n);
    return out;
}

} // namespace qualtree::gen
