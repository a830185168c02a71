#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "automata.hpp"
#include "games.hpp"
#include "regular_tree.hpp"

namespace qualtree {

/// Finite quotient of the acceptance game over a regular tree: state vertices (q, n) followed by
/// random vertices (q, n, q0, q1), one per transition on the label of n.
struct AcceptanceGame {
    StochasticArena arena;
    std::vector<Id> state_of;
    std::vector<std::size_t> node_of;
    VertexSet target;
    std::size_t state_vertex_count = 0;
    std::size_t node_count = 0;

    VertexId vertex_of(Id q, std::size_t node) const { return q * node_count + node; }
};

namespace detail {

inline std::string state_vertex_name(const NameTable& states, Id q, const RegularTree& t, std::size_t n)
{
    return states[q] + "@" + t.names[n];
}

inline std::string split_vertex_name(const NameTable& states, Id q, const RegularTree& t, std::size_t n, Id q0, Id q1)
{
    return states[q] + "@" + t.names[n] + ">" + states[q0] + "," + states[q1];
}

/// Adds the random vertex of split (q0, q1) at node n, merging equal targets into a point mass.
inline void add_split_vertex(StochasticArena& g, const NameTable& states, const RegularTree& t, Id q, std::size_t n,
                             Id q0, Id q1)
{
    const auto nodes = t.size();
    auto from = q * nodes + n;
    auto r = g.add_vertex(split_vertex_name(states, q, t, n, q0, q1), Owner::Random);
    g.add_edge(from, r);
    auto left = q0 * nodes + t.succ0[n];
    auto right = q1 * nodes + t.succ1[n];
    if (left == right) {
        g.add_random_edge(r, left, Rational(1));
    } else {
        g.add_random_edge(r, left, half());
        g.add_random_edge(r, right, half());
    }
}

inline std::vector<Id> tree_symbols(const NameTable& alphabet, const RegularTree& t)
{
    std::vector<Id> out(t.size());
    for (std::size_t n = 0; n < t.size(); ++n)
        out[n] = symbol_id(alphabet, t.labels[n]);
    return out;
}

} // namespace detail

inline AcceptanceGame build_acceptance_game(const AlternatingTreeAutomaton& a, const std::set<Id>& final_states,
                                            const RegularTree& t)
{
    require_valid(a);
    if (auto r = validate(t); !r.empty())
        throw std::invalid_argument("invalid tree: " + r.front());
    if (!a.complete)
        throw std::invalid_argument("automaton is not declared complete");
    auto label = detail::tree_symbols(a.alphabet, t);
    const auto nodes = t.size();

    AcceptanceGame game;
    game.node_count = nodes;
    auto& g = game.arena;
    for (Id q = 0; q < a.states.size(); ++q)
        for (std::size_t n = 0; n < nodes; ++n) {
            g.add_vertex(detail::state_vertex_name(a.states, q, t, n), a.is_eloise(q) ? Owner::Eloise : Owner::Abelard);
            game.state_of.push_back(q);
            game.node_of.push_back(n);
        }
    game.state_vertex_count = g.size();
    for (Id q = 0; q < a.states.size(); ++q)
        for (std::size_t n = 0; n < nodes; ++n) {
            auto mv = moves(a.transitions, q, label[n]);
            if (mv.empty())
                throw std::invalid_argument("no transition for (" + a.states[q] + ", " + t.labels[n] + ")");
            for (auto [q0, q1] : mv) {
                detail::add_split_vertex(g, a.states, t, q, n, q0, q1);
                game.state_of.push_back(q);
                game.node_of.push_back(n);
            }
        }
    g.initial = a.initial * nodes + t.root;
    game.target = VertexSet(g.size(), false);
    for (VertexId v = 0; v < game.state_vertex_count; ++v)
        game.target[v] = final_states.count(game.state_of[v]) != 0;
    return game;
}

/// Whether Éloïse wins the acceptance game almost surely from (q_in, root).
inline bool qualitative_membership(const AlternatingTreeAutomaton& a, const AcceptanceCondition& cond,
                                   const RegularTree& t)
{
    auto game = build_acceptance_game(a, cond.target, t);
    if (cond.kind == AcceptanceKind::Buchi)
        return almost_sure_buchi(game.arena, game.target).wins(game.arena.initial);
    return almost_sure_cobuchi(game.arena, game.target).wins;
}

inline bool qualitative_membership(const TreeAutomaton& a, const AcceptanceCondition& cond, const RegularTree& t)
{
    return qualitative_membership(universal_to_alternating(a), cond, t);
}

} // namespace qualtree
