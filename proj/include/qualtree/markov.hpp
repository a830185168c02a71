#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "automata.hpp"
#include "graph.hpp"
#include "regular_tree.hpp"

namespace qualtree {

/// Finite Markov chain with exact transition weights and a marked (F-image) state set.
struct MarkovChain {
    std::vector<std::string> labels;
    std::size_t initial = 0;
    std::vector<Distribution<std::size_t>> trans;
    std::vector<bool> marked;

    std::size_t size() const { return trans.size(); }

    std::size_t add_state(std::string label, bool is_marked)
    {
        labels.push_back(std::move(label));
        trans.emplace_back();
        marked.push_back(is_marked);
        return trans.size() - 1;
    }

    Adjacency adjacency() const
    {
        Adjacency adj(size());
        for (std::size_t s = 0; s < size(); ++s)
            adj[s] = trans[s].support();
        return adj;
    }
};

inline ValidationReport validate(const MarkovChain& m)
{
    ValidationReport r;
    if (m.size() == 0) {
        r.push_back("chain has no states");
        return r;
    }
    if (m.labels.size() != m.size() || m.marked.size() != m.size())
        r.push_back("chain arrays have inconsistent sizes");
    if (m.initial >= m.size())
        r.push_back("initial state out of range");
    if (!r.empty())
        return r;
    for (std::size_t s = 0; s < m.size(); ++s) {
        for (const auto& [t, w] : m.trans[s].weights())
            if (t >= m.size())
                r.push_back("state " + m.labels[s] + " has a successor out of range");
    }
    if (!r.empty())
        return r;
    auto reach = reachable_from(m.adjacency(), m.initial);
    for (std::size_t s = 0; s < m.size(); ++s)
        if (reach[s])
            detail::check_distribution(r, m.trans[s], "of " + m.labels[s],
                                       [&](std::size_t t) { return m.labels[t]; });
    return r;
}

/// Bottom SCCs reachable from the initial state, each sorted, listed in discovery order.
inline std::vector<std::vector<std::size_t>> bsccs(const MarkovChain& m)
{
    auto adj = m.adjacency();
    auto reach = reachable_from(adj, m.initial);
    std::vector<std::vector<std::size_t>> out;
    for (auto& comp : strongly_connected_components(adj, reach)) {
        std::vector<bool> in(m.size(), false);
        for (auto v : comp)
            in[v] = true;
        bool bottom = true;
        for (auto v : comp)
            for (auto w : adj[v])
                bottom = bottom && in[w];
        if (bottom)
            out.push_back(std::move(comp));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Almost-sure verdict of the Büchi / co-Büchi condition on the marked states.
/// A finite chain enters some BSCC almost surely and then visits all its states infinitely often.
inline bool as_verdict(const MarkovChain& m, AcceptanceKind kind)
{
    for (const auto& comp : bsccs(m)) {
        bool hits = false;
        for (auto v : comp)
            hits = hits || m.marked[v];
        if (kind == AcceptanceKind::Buchi && !hits)
            return false;
        if (kind == AcceptanceKind::CoBuchi && hits)
            return false;
    }
    return true;
}

namespace detail {

inline Id symbol_id(const NameTable& alphabet, const std::string& s)
{
    auto id = alphabet.find(s);
    if (!id)
        throw std::invalid_argument("symbol '" + s + "' is not in the automaton's alphabet");
    return *id;
}

inline std::vector<bool> state_mask(std::size_t n, const std::set<Id>& f)
{
    std::vector<bool> m(n, false);
    for (auto q : f)
        if (q < n)
            m[q] = true;
    return m;
}

} // namespace detail

/// Probability that the run on the finite word u ends in F, by forward propagation.
inline Rational acceptance_probability(const ProbWordAutomaton& a, const std::set<Id>& final_states,
                                       const std::vector<std::string>& u)
{
    std::vector<Rational> mass(a.states.size(), Rational(0));
    mass[a.initial] = 1;
    for (const auto& letter : u) {
        Id s = detail::symbol_id(a.alphabet, letter);
        std::vector<Rational> next(a.states.size(), Rational(0));
        for (Id q = 0; q < a.states.size(); ++q)
            if (mass[q] != 0)
                for (const auto& [r, w] : a.step(q, s).weights())
                    next[r] += mass[q] * w;
        mass = std::move(next);
    }
    Rational p = 0;
    for (Id q : final_states)
        p += mass.at(q);
    return p;
}

/// Product of the automaton with the lasso positions of w (reachable part only).
inline MarkovChain lasso_chain(const ProbWordAutomaton& a, const std::set<Id>& final_states,
                               const UltimatelyPeriodicWord& w)
{
    if (w.period.empty())
        throw std::invalid_argument("lasso word needs a non-empty period");
    std::vector<Id> letters(w.lasso_length());
    for (std::size_t p = 0; p < letters.size(); ++p)
        letters[p] = detail::symbol_id(a.alphabet, w.letter_at_position(p));
    auto fmask = detail::state_mask(a.states.size(), final_states);

    MarkovChain m;
    std::map<std::pair<Id, std::size_t>, std::size_t> index;
    std::vector<std::pair<Id, std::size_t>> pending;
    auto intern = [&](Id q, std::size_t pos) {
        auto [it, fresh] = index.try_emplace({q, pos}, m.size());
        if (fresh) {
            m.add_state(a.states[q] + "@" + std::to_string(pos), fmask[q]);
            pending.emplace_back(q, pos);
        }
        return it->second;
    };
    m.initial = intern(a.initial, 0);
    for (std::size_t k = 0; k < pending.size(); ++k) {
        auto [q, pos] = pending[k];
        auto next = w.next_position(pos);
        Distribution<std::size_t> d;
        for (const auto& [r, wt] : a.step(q, letters[pos]).weights())
            d.add(intern(r, next), wt);
        m.trans[index.at({q, pos})] = std::move(d);
    }
    return m;
}

inline bool lasso_membership_word(const ProbWordAutomaton& a, const std::set<Id>& final_states,
                                  const UltimatelyPeriodicWord& w, AcceptanceKind kind)
{
    return as_verdict(lasso_chain(a, final_states, w), kind);
}

/// The chain over Q x tree nodes: (q,n) moves to (q0, succ0 n) and (q1, succ1 n) with half of
/// the weight of each (q0,q1) in δ(q, label n); like terms are merged.
inline MarkovChain prob_tree_chain(const ProbTreeAutomaton& a, const std::set<Id>& final_states,
                                   const RegularTree& t)
{
    std::vector<Id> label(t.size());
    for (std::size_t n = 0; n < t.size(); ++n)
        label[n] = detail::symbol_id(a.alphabet, t.labels[n]);
    auto fmask = detail::state_mask(a.states.size(), final_states);

    MarkovChain m;
    std::map<std::pair<Id, std::size_t>, std::size_t> index;
    std::vector<std::pair<Id, std::size_t>> pending;
    auto intern = [&](Id q, std::size_t n) {
        auto [it, fresh] = index.try_emplace({q, n}, m.size());
        if (fresh) {
            m.add_state(a.states[q] + "@" + t.names[n], fmask[q]);
            pending.emplace_back(q, n);
        }
        return it->second;
    };
    m.initial = intern(a.initial, t.root);
    for (std::size_t k = 0; k < pending.size(); ++k) {
        auto [q, n] = pending[k];
        Distribution<std::size_t> d;
        for (const auto& [pair, wt] : a.step(q, label[n]).weights()) {
            d.add(intern(pair.first, t.succ0[n]), wt * half());
            d.add(intern(pair.second, t.succ1[n]), wt * half());
        }
        m.trans[index.at({q, n})] = std::move(d);
    }
    return m;
}

inline bool prob_tree_membership(const ProbTreeAutomaton& a, const std::set<Id>& final_states, const RegularTree& t,
                                 AcceptanceKind kind = AcceptanceKind::CoBuchi)
{
    return as_verdict(prob_tree_chain(a, final_states, t), kind);
}

/// Equality of two chains as weighted graphs whose states are identified by label.
inline bool same_weighted_graph(const MarkovChain& x, const MarkovChain& y)
{
    if (x.size() != y.size())
        return false;
    std::map<std::string, std::size_t> ylabel;
    for (std::size_t s = 0; s < y.size(); ++s)
        ylabel.emplace(y.labels[s], s);
    if (ylabel.size() != y.size())
        return false;
    auto relabel = [](const MarkovChain& m, const Distribution<std::size_t>& d) {
        std::map<std::string, Rational> out;
        for (const auto& [t, w] : d.weights())
            out.emplace(m.labels[t], w);
        return out;
    };
    if (x.labels[x.initial] != y.labels[y.initial])
        return false;
    for (std::size_t s = 0; s < x.size(); ++s) {
        auto it = ylabel.find(x.labels[s]);
        if (it == ylabel.end())
            return false;
        auto t = it->second;
        if (x.marked[s] != y.marked[t] || relabel(x, x.trans[s]) != relabel(y, y.trans[t]))
            return false;
    }
    return true;
}

} // namespace qualtree
