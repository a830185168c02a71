#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arena.hpp"
#include "errors.hpp"

namespace qualtree {

struct WinningRegion {
    VertexSet winning;
    /// Éloïse strategy, total on her vertices; almost-surely winning from every vertex of `winning`.
    PositionalStrategy strategy;

    bool wins(VertexId v) const { return winning.at(v); }
};

namespace detail {

struct ReachCore {
    VertexSet region;
    std::vector<VertexId> choice; // rank-decreasing successor for Éloïse vertices of region \ target
};

constexpr VertexId no_choice = static_cast<VertexId>(-1);

/// Almost-sure reachability of `target` inside the sub-arena `allowed`; target vertices are sinks.
/// Alternates a positive attractor of the target with removal of Abélard's positive attractor
/// of its complement until stable.
inline ReachCore almost_sure_reach_within(const StochasticArena& g, VertexSet region, const VertexSet& target)
{
    const auto n = g.size();
    std::vector<VertexId> choice(n, no_choice);
    while (true) {
        VertexSet pos(n, false);
        std::fill(choice.begin(), choice.end(), no_choice);
        for (VertexId v = 0; v < n; ++v)
            pos[v] = region[v] && target[v];
        bool grew = true;
        while (grew) {
            grew = false;
            for (VertexId v = 0; v < n; ++v) {
                if (!region[v] || pos[v])
                    continue;
                if (g.owner[v] == Owner::Abelard) {
                    bool all = true;
                    for (auto w : g.succ[v])
                        all = all && pos[w];
                    if (all)
                        pos[v] = grew = true;
                } else {
                    for (auto w : g.succ[v])
                        if (pos[w]) {
                            pos[v] = grew = true;
                            choice[v] = w;
                            break;
                        }
                }
            }
        }
        if (pos == region)
            return {std::move(region), std::move(choice)};

        VertexSet lost(n);
        for (VertexId v = 0; v < n; ++v)
            lost[v] = !pos[v];
        grew = true;
        while (grew) {
            grew = false;
            for (VertexId v = 0; v < n; ++v) {
                if (lost[v] || target[v])
                    continue;
                bool add;
                if (g.owner[v] == Owner::Eloise) {
                    add = true;
                    for (auto w : g.succ[v])
                        add = add && lost[w];
                } else {
                    add = false;
                    for (auto w : g.succ[v])
                        add = add || lost[w];
                }
                if (add)
                    lost[v] = grew = true;
            }
        }
        for (VertexId v = 0; v < n; ++v)
            region[v] = region[v] && !lost[v];
    }
}

inline VertexId first_inside(const StochasticArena& g, VertexId v, const VertexSet& region)
{
    for (auto w : g.succ[v])
        if (region[w])
            return w;
    return g.succ[v].front();
}

} // namespace detail

/// Vertices from which Éloïse reaches `target` with probability 1, with a positional witness.
inline WinningRegion almost_sure_reach(const StochasticArena& g, const VertexSet& target)
{
    auto core = detail::almost_sure_reach_within(g, VertexSet(g.size(), true), target);
    WinningRegion out{core.region, {Player::Eloise, {}}};
    for (VertexId v = 0; v < g.size(); ++v) {
        if (g.owner[v] != Owner::Eloise)
            continue;
        auto c = core.choice[v];
        out.strategy.choice[v] = c != detail::no_choice ? c : detail::first_inside(g, v, core.region);
    }
    return out;
}

/// Vertices from which Éloïse visits `target` infinitely often with probability 1.
/// Repeatedly restricts to the sub-arena where the target can be reached almost surely,
/// removing Abélard's positive attractor of the rest.
inline WinningRegion almost_sure_buchi(const StochasticArena& g, const VertexSet& target)
{
    const auto n = g.size();
    VertexSet region(n, true);
    detail::ReachCore core;
    while (true) {
        VertexSet inner(n);
        for (VertexId v = 0; v < n; ++v)
            inner[v] = region[v] && target[v];
        core = detail::almost_sure_reach_within(g, region, inner);
        if (core.region == region)
            break;
        VertexSet lost(n);
        for (VertexId v = 0; v < n; ++v)
            lost[v] = !core.region[v];
        bool grew = true;
        while (grew) {
            grew = false;
            for (VertexId v = 0; v < n; ++v) {
                if (lost[v])
                    continue;
                bool add;
                if (g.owner[v] == Owner::Eloise) {
                    add = true;
                    for (auto w : g.succ[v])
                        add = add && lost[w];
                } else {
                    add = false;
                    for (auto w : g.succ[v])
                        add = add || lost[w];
                }
                if (add)
                    lost[v] = grew = true;
            }
        }
        for (VertexId v = 0; v < n; ++v)
            region[v] = !lost[v];
    }
    WinningRegion out{region, {Player::Eloise, {}}};
    for (VertexId v = 0; v < n; ++v) {
        if (g.owner[v] != Owner::Eloise)
            continue;
        auto c = core.choice[v];
        out.strategy.choice[v] = (c != detail::no_choice && !target[v]) ? c : detail::first_inside(g, v, region);
    }
    return out;
}

/// Under `s`, Abélard (now the only controller) cannot make F finitely visited with positive probability.
inline bool check_buchi_strategy(const StochasticArena& g, const VertexSet& target, const PositionalStrategy& s)
{
    return !controller_positive_cobuchi(fix_strategy(g, s), target);
}

inline constexpr std::uint64_t default_cobuchi_choice_bound = std::uint64_t{1} << 20;

struct CoBuchiVerdict {
    bool wins = false;
    std::optional<PositionalStrategy> strategy;
};

/// Visits the positional strategies of `p` over the vertices marked in `scope`
/// (other vertices of `p` get their first successor). Stops when `visit` returns true.
inline void for_each_positional(const StochasticArena& g, Player p, const VertexSet& scope,
                                const std::function<bool(const PositionalStrategy&)>& visit)
{
    auto who = owner_of(p);
    std::vector<VertexId> free;
    PositionalStrategy s{p, {}};
    for (VertexId v = 0; v < g.size(); ++v) {
        if (g.owner[v] != who)
            continue;
        s.choice[v] = g.succ[v].front();
        if ((scope.empty() || scope[v]) && g.succ[v].size() > 1)
            free.push_back(v);
    }
    std::vector<std::size_t> digit(free.size(), 0);
    while (true) {
        if (visit(s))
            return;
        std::size_t k = 0;
        while (k < free.size()) {
            auto v = free[k];
            if (++digit[k] < g.succ[v].size()) {
                s.choice[v] = g.succ[v][digit[k]];
                break;
            }
            digit[k] = 0;
            s.choice[v] = g.succ[v].front();
            ++k;
        }
        if (k == free.size())
            return;
    }
}

/// Number of Éloïse positional strategies on the vertices reachable from the initial vertex,
/// saturating at `cap + 1`.
inline std::uint64_t positional_choice_count(const StochasticArena& g, Player p, const VertexSet& scope,
                                             std::uint64_t cap)
{
    std::uint64_t total = 1;
    for (VertexId v = 0; v < g.size(); ++v)
        if (g.owner[v] == owner_of(p) && (scope.empty() || scope[v])) {
            total *= g.succ[v].size();
            if (total > cap)
                return cap + 1;
        }
    return total;
}

/// Almost-sure co-Büchi from the initial vertex, by enumerating Éloïse's positional strategies
/// (positional strategies suffice on finite arenas).
inline CoBuchiVerdict almost_sure_cobuchi(const StochasticArena& g, const VertexSet& target,
                                          std::uint64_t max_choices = default_cobuchi_choice_bound)
{
    auto scope = reachable_from(g.adjacency(), g.initial);
    if (positional_choice_count(g, Player::Eloise, scope, max_choices) > max_choices)
        throw ResourceExceeded("co-Buchi solver: Eloise choice space exceeds the bound of " +
                               std::to_string(max_choices) + " positional strategies");
    CoBuchiVerdict out;
    for_each_positional(g, Player::Eloise, scope, [&](const PositionalStrategy& s) {
        if (!controller_positive_buchi(fix_strategy(g, s), target)) {
            out.wins = true;
            out.strategy = s;
            return true;
        }
        return false;
    });
    return out;
}

struct ReachabilityGadget {
    StochasticArena arena;
    VertexSet target;
    VertexId final_vertex = 0;
    /// s -> v_s for every s in F.
    std::map<VertexId, VertexId> relay;
};

/// Büchi-to-reachability reduction on a finite arena: each s in F gets a random relay
/// v_s = ½ final + ½ s that replaces s as the target of every edge; `final` is absorbing.
/// Original vertex ids are preserved.
inline ReachabilityGadget buchi_to_reachability(const StochasticArena& g, const VertexSet& target)
{
    std::set<std::string> taken(g.names.begin(), g.names.end());
    auto fresh = [&](std::string base) {
        while (taken.count(base))
            base += '\'';
        taken.insert(base);
        return base;
    };
    ReachabilityGadget out;
    out.arena = g;
    auto& h = out.arena;
    for (VertexId s = 0; s < g.size(); ++s)
        if (target[s])
            out.relay[s] = h.add_vertex(fresh("via:" + g.names[s]), Owner::Random);
    out.final_vertex = h.add_vertex(fresh("final"), Owner::Eloise);
    h.add_edge(out.final_vertex, out.final_vertex);
    for (VertexId v = 0; v < g.size(); ++v)
        for (auto& w : h.succ[v]) {
            auto it = out.relay.find(w);
            if (it != out.relay.end())
                w = it->second;
        }
    for (const auto& [s, vs] : out.relay) {
        h.add_random_edge(vs, out.final_vertex, half());
        h.add_random_edge(vs, s, half());
    }
    out.target = VertexSet(h.size(), false);
    out.target[out.final_vertex] = true;
    return out;
}

namespace detail {

inline Adjacency reverse(const StochasticArena& g)
{
    Adjacency rev(g.size());
    for (VertexId v = 0; v < g.size(); ++v)
        for (auto w : g.succ[v])
            rev[w].push_back(v);
    return rev;
}

/// Vertices that can reach (through `through`, all if empty) a vertex of some end component.
inline VertexSet can_reach_components(const Mdp& m, const std::vector<EndComponent>& ecs, const VertexSet& through)
{
    auto rev = reverse(m.arena);
    VertexSet seen(m.size(), false);
    std::vector<VertexId> stack;
    for (const auto& ec : ecs)
        for (auto v : ec.vertices)
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto u : rev[v])
            if (!seen[u] && (through.empty() || through[u])) {
                seen[u] = true;
                stack.push_back(u);
            }
    }
    return seen;
}

inline VertexSet complement(const VertexSet& s)
{
    VertexSet out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        out[i] = !s[i];
    return out;
}

} // namespace detail

/// Oracle: v wins almost-sure reachability iff some Éloïse positional strategy leaves Abélard,
/// as MDP controller, no positive-probability way of avoiding the target forever from v.
inline VertexSet oracle_reach_region(const StochasticArena& g, const VertexSet& target)
{
    VertexSet won = target;
    auto outside = detail::complement(target);
    for_each_positional(g, Player::Eloise, {}, [&](const PositionalStrategy& s) {
        auto m = fix_strategy(g, s);
        auto bad = detail::can_reach_components(m, max_end_components(m, outside), outside);
        for (VertexId v = 0; v < g.size(); ++v)
            if (!bad[v])
                won[v] = true;
        return false;
    });
    return won;
}

/// Oracle: v wins almost-sure Büchi iff some Éloïse positional strategy leaves Abélard no
/// reachable end component avoiding the target.
inline VertexSet oracle_buchi_region(const StochasticArena& g, const VertexSet& target)
{
    VertexSet won(g.size(), false);
    auto outside = detail::complement(target);
    for_each_positional(g, Player::Eloise, {}, [&](const PositionalStrategy& s) {
        auto m = fix_strategy(g, s);
        auto bad = detail::can_reach_components(m, max_end_components(m, outside), {});
        for (VertexId v = 0; v < g.size(); ++v)
            if (!bad[v])
                won[v] = true;
        return false;
    });
    return won;
}

} // namespace qualtree
