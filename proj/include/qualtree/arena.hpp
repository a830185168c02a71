#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "markov.hpp"
#include "rational.hpp"

namespace qualtree {

using VertexId = std::size_t;
/// Indicator vector over the vertices of an arena.
using VertexSet = std::vector<bool>;

enum class Owner { Eloise, Abelard, Random };

inline const char* to_string(Owner o)
{
    switch (o) {
    case Owner::Eloise: return "eloise";
    case Owner::Abelard: return "abelard";
    case Owner::Random: return "random";
    }
    return "?";
}

enum class Player { Eloise, Abelard };

/// Finite turn-based stochastic arena. For random vertices `prob[v]` is parallel to `succ[v]`.
struct StochasticArena {
    std::vector<std::string> names;
    std::vector<Owner> owner;
    std::vector<std::vector<VertexId>> succ;
    std::vector<std::vector<Rational>> prob;
    VertexId initial = 0;

    std::size_t size() const { return names.size(); }

    VertexId add_vertex(std::string name, Owner o)
    {
        names.push_back(std::move(name));
        owner.push_back(o);
        succ.emplace_back();
        prob.emplace_back();
        return names.size() - 1;
    }

    void add_edge(VertexId from, VertexId to) { succ[from].push_back(to); }

    void add_random_edge(VertexId from, VertexId to, Rational p)
    {
        succ[from].push_back(to);
        prob[from].push_back(std::move(p));
    }

    Adjacency adjacency() const { return succ; }

    VertexSet mask(const std::set<VertexId>& vs) const
    {
        VertexSet m(size(), false);
        for (auto v : vs)
            m.at(v) = true;
        return m;
    }

    friend bool operator==(const StochasticArena&, const StochasticArena&) = default;
};

inline ValidationReport validate(const StochasticArena& g)
{
    ValidationReport r;
    auto n = g.size();
    if (n == 0) {
        r.push_back("arena has no vertices");
        return r;
    }
    if (g.owner.size() != n || g.succ.size() != n || g.prob.size() != n) {
        r.push_back("arena arrays have inconsistent sizes");
        return r;
    }
    if (g.initial >= n)
        r.push_back("initial vertex out of range");
    for (VertexId v = 0; v < n; ++v) {
        if (g.succ[v].empty())
            r.push_back("vertex " + g.names[v] + " is a dead-end");
        std::set<VertexId> seen;
        for (auto w : g.succ[v]) {
            if (w >= n)
                r.push_back("vertex " + g.names[v] + " has a successor out of range");
            else if (!seen.insert(w).second)
                r.push_back("vertex " + g.names[v] + " lists successor " + g.names[w] + " twice");
        }
        if (g.owner[v] == Owner::Random) {
            if (g.prob[v].size() != g.succ[v].size()) {
                r.push_back("random vertex " + g.names[v] + " needs one probability per edge");
                continue;
            }
            Rational total = 0;
            for (const auto& p : g.prob[v]) {
                if (p <= 0)
                    r.push_back("random vertex " + g.names[v] + " has a non-positive edge probability");
                total += p;
            }
            if (total != 1)
                r.push_back("random vertex " + g.names[v] + " distribution sums to " + to_string(total));
        } else if (!g.prob[v].empty()) {
            r.push_back("non-random vertex " + g.names[v] + " carries probabilities");
        }
    }
    return r;
}

/// Positional strategy for one player: vertex -> chosen successor.
struct PositionalStrategy {
    Player owner = Player::Eloise;
    std::map<VertexId, VertexId> choice;

    friend bool operator==(const PositionalStrategy&, const PositionalStrategy&) = default;
};

inline Owner owner_of(Player p) { return p == Player::Eloise ? Owner::Eloise : Owner::Abelard; }

/// An arena in which at most one player still owns vertices: the controller.
/// With no controller vertices left it is a Markov chain.
struct Mdp {
    StochasticArena arena;

    explicit Mdp(StochasticArena g) : arena(std::move(g))
    {
        bool e = false, a = false;
        for (auto o : arena.owner) {
            e = e || o == Owner::Eloise;
            a = a || o == Owner::Abelard;
        }
        if (e && a)
            throw std::invalid_argument("an MDP has a single controller; both players own vertices");
    }

    bool controlled(VertexId v) const { return arena.owner[v] != Owner::Random; }
    std::size_t size() const { return arena.size(); }
};

/// Turns the owner's vertices into random vertices with a point mass on the chosen successor.
inline Mdp fix_strategy(const StochasticArena& g, const PositionalStrategy& s)
{
    StochasticArena out = g;
    auto who = owner_of(s.owner);
    for (VertexId v = 0; v < g.size(); ++v) {
        if (g.owner[v] != who)
            continue;
        auto it = s.choice.find(v);
        if (it == s.choice.end())
            throw std::invalid_argument("strategy does not cover vertex " + g.names[v]);
        bool legal = false;
        for (auto w : g.succ[v])
            legal = legal || w == it->second;
        if (!legal)
            throw std::invalid_argument("strategy picks a non-successor at vertex " + g.names[v]);
        out.owner[v] = Owner::Random;
        out.succ[v] = {it->second};
        out.prob[v] = {Rational(1)};
    }
    return Mdp(std::move(out));
}

/// Chain of an MDP without controller vertices; marked = target.
inline MarkovChain to_markov_chain(const Mdp& m, const VertexSet& target)
{
    MarkovChain c;
    for (VertexId v = 0; v < m.size(); ++v) {
        if (m.controlled(v))
            throw std::invalid_argument("vertex " + m.arena.names[v] + " is still controlled");
        c.add_state(m.arena.names[v], target[v]);
        for (std::size_t k = 0; k < m.arena.succ[v].size(); ++k)
            c.trans[v].add(m.arena.succ[v][k], m.arena.prob[v][k]);
    }
    c.initial = m.arena.initial;
    return c;
}

struct EndComponent {
    std::vector<VertexId> vertices;
    std::vector<std::pair<VertexId, VertexId>> edges;

    friend bool operator==(const EndComponent&, const EndComponent&) = default;
    friend bool operator<(const EndComponent& a, const EndComponent& b) { return a.vertices < b.vertices; }
};

/// Maximal end components of the sub-MDP induced by `within` (everything when empty).
/// A random vertex with a successor outside a candidate set can never belong to it.
inline std::vector<EndComponent> max_end_components(const Mdp& m, const VertexSet& within = {})
{
    const auto& g = m.arena;
    const auto n = g.size();
    std::vector<EndComponent> result;
    std::vector<VertexSet> work;
    work.push_back(within.empty() ? VertexSet(n, true) : within);

    while (!work.empty()) {
        auto s = std::move(work.back());
        work.pop_back();
        // Prune until every vertex can stay inside s for one more step.
        bool changed = true;
        while (changed) {
            changed = false;
            for (VertexId v = 0; v < n; ++v) {
                if (!s[v])
                    continue;
                bool keep;
                if (m.controlled(v)) {
                    keep = false;
                    for (auto w : g.succ[v])
                        keep = keep || s[w];
                } else {
                    keep = true;
                    for (auto w : g.succ[v])
                        keep = keep && s[w];
                }
                if (!keep) {
                    s[v] = false;
                    changed = true;
                }
            }
        }
        Adjacency adj(n);
        std::size_t count = 0;
        for (VertexId v = 0; v < n; ++v) {
            if (!s[v])
                continue;
            ++count;
            for (auto w : g.succ[v])
                if (s[w])
                    adj[v].push_back(w);
        }
        if (count == 0)
            continue;
        auto comps = strongly_connected_components(adj, s);
        if (comps.size() == 1) {
            EndComponent ec;
            ec.vertices = comps.front();
            for (auto v : ec.vertices)
                for (auto w : adj[v])
                    ec.edges.emplace_back(v, w);
            result.push_back(std::move(ec));
            continue;
        }
        for (const auto& c : comps) {
            VertexSet sub(n, false);
            for (auto v : c)
                sub[v] = true;
            work.push_back(std::move(sub));
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

namespace detail {

inline bool any_reachable(const Mdp& m, const std::vector<EndComponent>& ecs, const VertexSet& through = {})
{
    auto reach = reachable_from(m.arena.adjacency(), m.arena.initial, through);
    for (const auto& ec : ecs)
        for (auto v : ec.vertices)
            if (reach[v])
                return true;
    return false;
}

} // namespace detail

/// True iff the controller can visit F infinitely often with positive probability:
/// some MEC meeting F is reachable from the initial vertex.
inline bool controller_positive_buchi(const Mdp& m, const VertexSet& target)
{
    std::vector<EndComponent> hit;
    for (auto& ec : max_end_components(m)) {
        bool meets = false;
        for (auto v : ec.vertices)
            meets = meets || target[v];
        if (meets)
            hit.push_back(std::move(ec));
    }
    return detail::any_reachable(m, hit);
}

/// True iff the controller can visit F only finitely often with positive probability:
/// some end component avoiding F is reachable.
inline bool controller_positive_cobuchi(const Mdp& m, const VertexSet& target)
{
    VertexSet outside(target.size());
    for (std::size_t v = 0; v < target.size(); ++v)
        outside[v] = !target[v];
    return detail::any_reachable(m, max_end_components(m, outside));
}

/// True iff the controller can avoid F forever with positive probability.
inline bool controller_positive_avoid(const Mdp& m, const VertexSet& target)
{
    if (target[m.arena.initial])
        return false;
    VertexSet outside(target.size());
    for (std::size_t v = 0; v < target.size(); ++v)
        outside[v] = !target[v];
    return detail::any_reachable(m, max_end_components(m, outside), outside);
}

inline StochasticArena with_initial(StochasticArena g, VertexId v)
{
    g.initial = v;
    return g;
}

} // namespace qualtree
