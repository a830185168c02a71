#pragma once

#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "names.hpp"
#include "rational.hpp"

namespace qualtree {

enum class AcceptanceKind { Buchi, CoBuchi };

inline const char* to_string(AcceptanceKind k) { return k == AcceptanceKind::Buchi ? "buchi" : "cobuchi"; }

struct AcceptanceCondition {
    AcceptanceKind kind = AcceptanceKind::Buchi;
    std::set<Id> target;

    friend bool operator==(const AcceptanceCondition&, const AcceptanceCondition&) = default;
};

/// (q, a, q0, q1): from q reading a, send q0 to the left child and q1 to the right child.
struct SplitTransition {
    Id state = 0;
    Id symbol = 0;
    Id left = 0;
    Id right = 0;

    friend auto operator<=>(const SplitTransition&, const SplitTransition&) = default;
};

/// (q, a, q'): change state without moving in the tree.
struct LocalTransition {
    Id state = 0;
    Id symbol = 0;
    Id target = 0;

    friend auto operator<=>(const LocalTransition&, const LocalTransition&) = default;
};

using TransitionSet = std::set<SplitTransition>;

/// All (q0, q1) with (q, a, q0, q1) in `delta`, in canonical order.
inline std::vector<std::pair<Id, Id>> moves(const TransitionSet& delta, Id q, Id a)
{
    std::vector<std::pair<Id, Id>> out;
    for (auto it = delta.lower_bound(SplitTransition{q, a, 0, 0}); it != delta.end() && it->state == q && it->symbol == a;
         ++it)
        out.emplace_back(it->left, it->right);
    return out;
}

struct TreeAutomaton {
    NameTable alphabet;
    NameTable states;
    Id initial = 0;
    TransitionSet transitions;
    bool complete = false;

    friend bool operator==(const TreeAutomaton&, const TreeAutomaton&) = default;
};

struct AlternatingTreeAutomaton {
    NameTable alphabet;
    NameTable states;
    Id initial = 0;
    std::set<Id> eloise;
    std::set<Id> abelard;
    TransitionSet transitions;
    bool complete = false;

    bool is_eloise(Id q) const { return eloise.count(q) != 0; }

    friend bool operator==(const AlternatingTreeAutomaton&, const AlternatingTreeAutomaton&) = default;
};

using WordKey = std::pair<Id, Id>; // (state, symbol)

struct ProbWordAutomaton {
    NameTable alphabet;
    NameTable states;
    Id initial = 0;
    std::map<WordKey, Distribution<Id>> delta;

    const Distribution<Id>& step(Id q, Id a) const
    {
        auto it = delta.find({q, a});
        if (it == delta.end())
            throw std::invalid_argument("no distribution for (" + states[q] + ", " + alphabet[a] + ")");
        return it->second;
    }

    friend bool operator==(const ProbWordAutomaton&, const ProbWordAutomaton&) = default;
};

using StatePair = std::pair<Id, Id>;

struct ProbTreeAutomaton {
    NameTable alphabet;
    NameTable states;
    Id initial = 0;
    std::map<WordKey, Distribution<StatePair>> delta;

    const Distribution<StatePair>& step(Id q, Id a) const
    {
        auto it = delta.find({q, a});
        if (it == delta.end())
            throw std::invalid_argument("no distribution for (" + states[q] + ", " + alphabet[a] + ")");
        return it->second;
    }

    friend bool operator==(const ProbTreeAutomaton&, const ProbTreeAutomaton&) = default;
};

struct NonZeroAutomaton {
    NameTable alphabet;
    NameTable states;
    /// States in ascending order of the automaton's priority order.
    std::vector<Id> order;
    Id initial = 0;
    std::set<Id> eloise;
    std::set<Id> abelard;
    std::set<LocalTransition> local;
    TransitionSet split;
    std::set<Id> sure;     // F_forall
    std::set<Id> almost;   // F_1
    std::set<Id> positive; // F_>0

    bool is_eloise(Id q) const { return eloise.count(q) != 0; }

    /// Position of q in `order`; larger is higher priority.
    std::size_t rank(Id q) const
    {
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == q)
                return i;
        throw std::out_of_range("state not in order");
    }

    friend bool operator==(const NonZeroAutomaton&, const NonZeroAutomaton&) = default;
};

using ValidationReport = std::vector<std::string>;

namespace detail {

inline void check_state(ValidationReport& r, const NameTable& states, Id q, const std::string& where)
{
    if (q >= states.size())
        r.push_back(where + ": state id " + std::to_string(q) + " out of range");
}

inline void check_symbol(ValidationReport& r, const NameTable& alphabet, Id a, const std::string& where)
{
    if (a >= alphabet.size())
        r.push_back(where + ": symbol id " + std::to_string(a) + " out of range");
}

inline void check_common(ValidationReport& r, const NameTable& alphabet, const NameTable& states, Id initial)
{
    if (alphabet.empty())
        r.push_back("alphabet is empty");
    if (states.empty())
        r.push_back("state set is empty");
    else
        check_state(r, states, initial, "initial");
}

inline void check_split(ValidationReport& r, const NameTable& alphabet, const NameTable& states,
                        const TransitionSet& delta)
{
    for (const auto& t : delta) {
        check_state(r, states, t.state, "transition source");
        check_symbol(r, alphabet, t.symbol, "transition symbol");
        check_state(r, states, t.left, "transition left target");
        check_state(r, states, t.right, "transition right target");
    }
}

inline void check_completeness(ValidationReport& r, const NameTable& alphabet, const NameTable& states,
                               const TransitionSet& delta)
{
    for (Id q = 0; q < states.size(); ++q)
        for (Id a = 0; a < alphabet.size(); ++a)
            if (moves(delta, q, a).empty())
                r.push_back("declared complete but no transition for (" + states[q] + ", " + alphabet[a] + ")");
}

inline void check_partition(ValidationReport& r, const NameTable& states, const std::set<Id>& eloise,
                            const std::set<Id>& abelard)
{
    for (Id q : eloise) {
        check_state(r, states, q, "eloise");
        if (abelard.count(q) && q < states.size())
            r.push_back("state " + states[q] + " is in both eloise and abelard sets");
    }
    for (Id q : abelard)
        check_state(r, states, q, "abelard");
    for (Id q = 0; q < states.size(); ++q)
        if (!eloise.count(q) && !abelard.count(q))
            r.push_back("state " + states[q] + " is in neither eloise nor abelard set");
}

template <typename T, typename Name>
void check_distribution(ValidationReport& r, const Distribution<T>& d, const std::string& where, Name&& name)
{
    for (const auto& [x, w] : d.weights())
        if (w <= 0)
            r.push_back("distribution " + where + " has non-positive weight " + to_string(w) + " on " + name(x));
    auto s = d.total();
    if (s != 1)
        r.push_back("distribution " + where + " sums to " + to_string(s));
}

} // namespace detail

inline ValidationReport validate(const TreeAutomaton& a)
{
    ValidationReport r;
    detail::check_common(r, a.alphabet, a.states, a.initial);
    detail::check_split(r, a.alphabet, a.states, a.transitions);
    if (a.complete && r.empty())
        detail::check_completeness(r, a.alphabet, a.states, a.transitions);
    return r;
}

inline ValidationReport validate(const AlternatingTreeAutomaton& a)
{
    ValidationReport r;
    detail::check_common(r, a.alphabet, a.states, a.initial);
    detail::check_partition(r, a.states, a.eloise, a.abelard);
    detail::check_split(r, a.alphabet, a.states, a.transitions);
    if (a.complete && r.empty())
        detail::check_completeness(r, a.alphabet, a.states, a.transitions);
    return r;
}

inline ValidationReport validate(const ProbWordAutomaton& a)
{
    ValidationReport r;
    detail::check_common(r, a.alphabet, a.states, a.initial);
    if (!r.empty())
        return r;
    for (Id q = 0; q < a.states.size(); ++q)
        for (Id s = 0; s < a.alphabet.size(); ++s) {
            auto it = a.delta.find({q, s});
            std::string where = a.states[q] + "," + a.alphabet[s];
            if (it == a.delta.end()) {
                r.push_back("distribution " + where + " is missing");
                continue;
            }
            bool in_range = true;
            for (const auto& [x, w] : it->second.weights())
                if (x >= a.states.size()) {
                    r.push_back("distribution " + where + " targets unknown state id " + std::to_string(x));
                    in_range = false;
                }
            if (in_range)
                detail::check_distribution(r, it->second, where, [&](Id x) { return a.states[x]; });
        }
    for (const auto& [key, d] : a.delta)
        if (key.first >= a.states.size() || key.second >= a.alphabet.size())
            r.push_back("distribution defined for out-of-range key");
    return r;
}

inline ValidationReport validate(const ProbTreeAutomaton& a)
{
    ValidationReport r;
    detail::check_common(r, a.alphabet, a.states, a.initial);
    if (!r.empty())
        return r;
    for (Id q = 0; q < a.states.size(); ++q)
        for (Id s = 0; s < a.alphabet.size(); ++s) {
            auto it = a.delta.find({q, s});
            std::string where = a.states[q] + "," + a.alphabet[s];
            if (it == a.delta.end()) {
                r.push_back("distribution " + where + " is missing");
                continue;
            }
            bool in_range = true;
            for (const auto& [x, w] : it->second.weights())
                if (x.first >= a.states.size() || x.second >= a.states.size()) {
                    r.push_back("distribution " + where + " targets an unknown state pair");
                    in_range = false;
                }
            if (in_range)
                detail::check_distribution(r, it->second, where, [&](const StatePair& x) {
                    return "(" + a.states[x.first] + "," + a.states[x.second] + ")";
                });
        }
    return r;
}

inline ValidationReport validate(const NonZeroAutomaton& a)
{
    ValidationReport r;
    detail::check_common(r, a.alphabet, a.states, a.initial);
    detail::check_partition(r, a.states, a.eloise, a.abelard);
    detail::check_split(r, a.alphabet, a.states, a.split);
    for (const auto& t : a.local) {
        detail::check_state(r, a.states, t.state, "local transition source");
        detail::check_symbol(r, a.alphabet, t.symbol, "local transition symbol");
        detail::check_state(r, a.states, t.target, "local transition target");
    }
    std::set<Id> seen;
    for (Id q : a.order) {
        detail::check_state(r, a.states, q, "order");
        if (!seen.insert(q).second && q < a.states.size())
            r.push_back("state " + a.states[q] + " appears twice in order");
    }
    if (seen.size() != a.states.size())
        r.push_back("order is not total: it ranks " + std::to_string(seen.size()) + " of " +
                    std::to_string(a.states.size()) + " states");
    for (Id q : a.sure)
        detail::check_state(r, a.states, q, "nzsets forall");
    for (Id q : a.almost)
        detail::check_state(r, a.states, q, "nzsets one");
    for (Id q : a.positive)
        detail::check_state(r, a.states, q, "nzsets pos");
    return r;
}

inline ValidationReport validate(const AcceptanceCondition& c, const NameTable& states)
{
    ValidationReport r;
    for (Id q : c.target)
        detail::check_state(r, states, q, "acceptance target");
    return r;
}

template <typename Automaton>
void require_valid(const Automaton& a)
{
    auto r = validate(a);
    if (!r.empty())
        throw std::invalid_argument("invalid automaton: " + r.front());
}

/// Throws unless the automaton is declared complete and actually has a transition for every (q, a).
template <typename Automaton>
void require_complete(const Automaton& a)
{
    if (!a.complete)
        throw std::invalid_argument("automaton is not declared complete");
    ValidationReport r;
    detail::check_completeness(r, a.alphabet, a.states, a.transitions);
    if (!r.empty())
        throw std::invalid_argument(r.front());
}

inline bool is_simple(const ProbWordAutomaton& a)
{
    for (Id q = 0; q < a.states.size(); ++q)
        for (Id s = 0; s < a.alphabet.size(); ++s) {
            auto it = a.delta.find({q, s});
            if (it == a.delta.end() || !it->second.is_even_split())
                return false;
        }
    return true;
}

/// Every state becomes Abélard's; states, initial state and transitions are copied verbatim.
inline AlternatingTreeAutomaton universal_to_alternating(const TreeAutomaton& a)
{
    AlternatingTreeAutomaton b;
    b.alphabet = a.alphabet;
    b.states = a.states;
    b.initial = a.initial;
    for (Id q = 0; q < a.states.size(); ++q)
        b.abelard.insert(q);
    b.transitions = a.transitions;
    b.complete = a.complete;
    return b;
}

inline std::set<Id> all_ids(std::size_t n)
{
    std::set<Id> s;
    for (Id i = 0; i < n; ++i)
        s.insert(i);
    return s;
}

} // namespace qualtree
