#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "acceptance_game.hpp"
#include "arena.hpp"
#include "automata.hpp"
#include "regular_tree.hpp"

namespace qualtree {

/// A probabilistic word automaton paired with its co-Büchi set.
struct CoBuchiWordAutomaton {
    ProbWordAutomaton automaton;
    std::set<Id> cobuchi;
};

namespace detail {

/// Assembles a word automaton from named states; ids follow the canonical name order.
class WordBuilder {
public:
    WordBuilder(std::vector<std::string> alphabet, std::vector<std::string> states, const std::string& initial)
    {
        a_.alphabet = NameTable(std::move(alphabet));
        a_.states = NameTable(std::move(states));
        a_.initial = a_.states.at(initial);
    }

    void set(const std::string& q, const std::string& s, const Distribution<std::string>& d)
    {
        a_.delta[{a_.states.at(q), a_.alphabet.at(s)}] = d.map([&](const std::string& x) { return a_.states.at(x); });
    }

    Id id(const std::string& q) const { return a_.states.at(q); }
    const ProbWordAutomaton& get() const { return a_; }

private:
    ProbWordAutomaton a_;
};

inline void require_simple(const ProbWordAutomaton& a, const char* what)
{
    require_valid(a);
    if (!is_simple(a))
        throw std::invalid_argument(std::string(what) + " needs a simple automaton (point masses or 1/2-1/2 splits)");
}

inline void require_fresh(const NameTable& alphabet, const std::string& sharp)
{
    if (alphabet.contains(sharp))
        throw std::invalid_argument("separator symbol '" + sharp + "' already belongs to the alphabet");
}

inline std::vector<std::string> with_symbol(const NameTable& alphabet, const std::string& sharp)
{
    auto out = alphabet.names();
    out.push_back(sharp);
    return out;
}

inline Distribution<std::string> named(const ProbWordAutomaton& a, const Distribution<Id>& d,
                                       const std::string& prefix = "")
{
    return d.map([&](Id q) { return prefix + a.states[q]; });
}

} // namespace detail

/// Two states p1, p2: p1 loops on letters of sigma, splits evenly on the separator, p2 absorbs.
/// With co-Büchi {p1} it accepts the words with infinitely many separators.
inline CoBuchiWordAutomaton sharps_automaton(const NameTable& sigma, const std::string& sharp)
{
    detail::require_fresh(sigma, sharp);
    detail::WordBuilder b(detail::with_symbol(sigma, sharp), {"p1", "p2"}, "p1");
    for (const auto& x : sigma.names()) {
        b.set("p1", x, Distribution<std::string>::point("p1"));
        b.set("p2", x, Distribution<std::string>::point("p2"));
    }
    b.set("p1", sharp, Distribution<std::string>::even("p1", "p2"));
    b.set("p2", sharp, Distribution<std::string>::point("p2"));
    return {b.get(), {b.id("p1")}};
}

/// Adds a marked copy q'_in of the initial state. The separator sends F-states back to q_in and every
/// other state, q'_in included unless q_in is in F, to q'_in. Co-Büchi set {q'_in}.
inline CoBuchiWordAutomaton sharp_gadget(const ProbWordAutomaton& a, const std::set<Id>& final_states,
                                         const std::string& sharp)
{
    detail::require_simple(a, "sharp gadget");
    detail::require_fresh(a.alphabet, sharp);
    const auto& qin = a.states[a.initial];
    auto copy = fresh_name(qin + "'", a.states);
    auto names = a.states.names();
    names.push_back(copy);
    detail::WordBuilder b(detail::with_symbol(a.alphabet, sharp), names, qin);
    auto on_sharp = [&](Id q) {
        return Distribution<std::string>::point(final_states.count(q) ? qin : copy);
    };
    for (Id q = 0; q < a.states.size(); ++q) {
        for (Id s = 0; s < a.alphabet.size(); ++s)
            b.set(a.states[q], a.alphabet[s], detail::named(a, a.step(q, s)));
        b.set(a.states[q], sharp, on_sharp(q));
    }
    for (Id s = 0; s < a.alphabet.size(); ++s)
        b.set(copy, a.alphabet[s], detail::named(a, a.step(a.initial, s)));
    b.set(copy, sharp, on_sharp(a.initial));
    return {b.get(), {b.id(copy)}};
}

/// Fresh initial state that must read the separator and then starts the sharp gadget or the
/// separator counter with probability 1/2 each. Other first letters fall into a marked sink.
/// Component states are prefixed "a:" and "c:".
inline CoBuchiWordAutomaton value1_to_cobuchi(const ProbWordAutomaton& a, const std::set<Id>& final_states,
                                              const std::string& sharp)
{
    auto gadget = sharp_gadget(a, final_states, sharp);
    auto counter = sharps_automaton(a.alphabet, sharp);
    const auto& ap = gadget.automaton;
    const auto& c = counter.automaton;

    std::vector<std::string> names{"init", "sink"};
    for (const auto& q : ap.states.names())
        names.push_back("a:" + q);
    for (const auto& q : c.states.names())
        names.push_back("c:" + q);
    detail::WordBuilder b(ap.alphabet.names(), names, "init");
    for (const auto& s : ap.alphabet.names()) {
        auto sid = ap.alphabet.at(s);
        for (Id q = 0; q < ap.states.size(); ++q)
            b.set("a:" + ap.states[q], s, detail::named(ap, ap.step(q, sid), "a:"));
        for (Id q = 0; q < c.states.size(); ++q)
            b.set("c:" + c.states[q], s, detail::named(c, c.step(q, c.alphabet.at(s)), "c:"));
        b.set("sink", s, Distribution<std::string>::point("sink"));
        if (s == sharp)
            b.set("init", s,
                  Distribution<std::string>::even("a:" + ap.states[ap.initial], "c:" + c.states[c.initial]));
        else
            b.set("init", s, Distribution<std::string>::point("sink"));
    }
    std::set<Id> marked{b.id("sink")};
    for (Id q : gadget.cobuchi)
        marked.insert(b.id("a:" + ap.states[q]));
    for (Id q : counter.cobuchi)
        marked.insert(b.id("c:" + c.states[q]));
    return {b.get(), marked};
}

namespace detail {

template <typename Pairs>
ProbTreeAutomaton lift(const ProbWordAutomaton& a, const char* what, Pairs&& pairs)
{
    require_simple(a, what);
    ProbTreeAutomaton t;
    t.alphabet = a.alphabet;
    t.states = a.states;
    t.initial = a.initial;
    for (const auto& [key, d] : a.delta) {
        auto sup = d.support();
        Id q1 = sup.front(), q2 = sup.back();
        Distribution<StatePair> out;
        for (const auto& pair : pairs(q1, q2))
            out.add(pair, half());
        t.delta[key] = std::move(out);
    }
    return t;
}

} // namespace detail

/// ½q1 + ½q2 becomes ½(q1,q1) + ½(q2,q2).
inline ProbTreeAutomaton lift_diagonal(const ProbWordAutomaton& a)
{
    return detail::lift(a, "diagonal lift", [](Id q1, Id q2) {
        return std::vector<StatePair>{{q1, q1}, {q2, q2}};
    });
}

/// ½q1 + ½q2 becomes ½(q1,q2) + ½(q2,q1).
inline ProbTreeAutomaton lift_swap(const ProbWordAutomaton& a)
{
    return detail::lift(a, "swap lift", [](Id q1, Id q2) {
        return std::vector<StatePair>{{q1, q2}, {q2, q1}};
    });
}

/// Universal tree automaton with (q,a,q1,q2) and (q,a,q2,q1) for every ½q1 + ½q2.
inline TreeAutomaton universalize(const ProbWordAutomaton& a)
{
    detail::require_simple(a, "universal tree construction");
    TreeAutomaton t;
    t.alphabet = a.alphabet;
    t.states = a.states;
    t.initial = a.initial;
    for (const auto& [key, d] : a.delta) {
        auto sup = d.support();
        Id q1 = sup.front(), q2 = sup.back();
        t.transitions.insert({key.first, key.second, q1, q2});
        t.transitions.insert({key.first, key.second, q2, q1});
    }
    t.complete = true;
    return t;
}

/// Non-zero automaton with the same arena: all states Abélard's, F ranked above Q \ F,
/// F_forall = F_pos = Q and F_one = Q \ F.
inline NonZeroAutomaton to_nonzero(const TreeAutomaton& a, const std::set<Id>& final_states)
{
    require_valid(a);
    NonZeroAutomaton b;
    b.alphabet = a.alphabet;
    b.states = a.states;
    b.initial = a.initial;
    for (int block = 0; block < 2; ++block)
        for (Id q = 0; q < a.states.size(); ++q)
            if ((final_states.count(q) != 0) == (block == 1))
                b.order.push_back(q);
    b.abelard = all_ids(a.states.size());
    b.split = a.transitions;
    b.sure = all_ids(a.states.size());
    b.positive = all_ids(a.states.size());
    for (Id q = 0; q < a.states.size(); ++q)
        if (!final_states.count(q))
            b.almost.insert(q);
    return b;
}

struct NonZeroArena {
    StochasticArena arena;
    std::vector<Id> state_of;
    std::vector<std::size_t> node_of;
    std::size_t state_vertex_count = 0;
    VertexSet sure, almost, positive;
};

/// Finite quotient of the non-zero game over t: local transitions are plain edges between state
/// vertices at the same node, split transitions go through random vertices as in the acceptance game.
inline NonZeroArena build_nonzero_arena(const NonZeroAutomaton& b, const RegularTree& t)
{
    require_valid(b);
    if (auto r = validate(t); !r.empty())
        throw std::invalid_argument("invalid tree: " + r.front());
    auto label = detail::tree_symbols(b.alphabet, t);
    const auto nodes = t.size();
    NonZeroArena out;
    auto& g = out.arena;
    for (Id q = 0; q < b.states.size(); ++q)
        for (std::size_t n = 0; n < nodes; ++n) {
            g.add_vertex(detail::state_vertex_name(b.states, q, t, n), b.is_eloise(q) ? Owner::Eloise : Owner::Abelard);
            out.state_of.push_back(q);
            out.node_of.push_back(n);
        }
    out.state_vertex_count = g.size();
    for (Id q = 0; q < b.states.size(); ++q)
        for (std::size_t n = 0; n < nodes; ++n) {
            bool any = false;
            for (auto it = b.local.lower_bound({q, label[n], 0}); it != b.local.end() && it->state == q &&
                                                                   it->symbol == label[n];
                 ++it) {
                g.add_edge(q * nodes + n, it->target * nodes + n);
                any = true;
            }
            for (auto [q0, q1] : moves(b.split, q, label[n])) {
                detail::add_split_vertex(g, b.states, t, q, n, q0, q1);
                out.state_of.push_back(q);
                out.node_of.push_back(n);
                any = true;
            }
            if (!any)
                throw std::invalid_argument("no transition for (" + b.states[q] + ", " + t.labels[n] + ")");
        }
    g.initial = b.initial * nodes + t.root;
    auto mark = [&](const std::set<Id>& s) {
        VertexSet m(g.size(), false);
        for (VertexId v = 0; v < out.state_vertex_count; ++v)
            m[v] = s.count(out.state_of[v]) != 0;
        return m;
    };
    out.sure = mark(b.sure);
    out.almost = mark(b.almost);
    out.positive = mark(b.positive);
    return out;
}

} // namespace qualtree
