#pragma once

// Reference procedures used only by the tests: they trade speed for obviousness.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qualtree/arena.hpp"
#include "qualtree/automata.hpp"
#include "qualtree/games.hpp"
#include "qualtree/markov.hpp"
#include "qualtree/rational.hpp"

namespace support {

using namespace qualtree;

/// Every member reaches every other member through `next`.
inline bool strongly_connected(const std::vector<VertexId>& members,
                               const std::function<std::vector<VertexId>(VertexId)>& next)
{
    for (auto from : members) {
        std::set<VertexId> seen{from};
        std::vector<VertexId> stack{from};
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto w : next(v))
                if (seen.insert(w).second)
                    stack.push_back(w);
        }
        for (auto to : members)
            if (!seen.count(to))
                return false;
    }
    return true;
}

/// Maximal end components by trying every vertex subset (n <= 12).
inline std::vector<std::vector<VertexId>> brute_max_end_components(const Mdp& m)
{
    const auto& g = m.arena;
    const auto n = g.size();
    std::vector<std::uint32_t> ecs;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
        auto in = [&](VertexId v) { return ((mask >> v) & 1) != 0; };
        std::vector<VertexId> members;
        bool closed = true;
        for (VertexId v = 0; v < n; ++v) {
            if (!in(v))
                continue;
            members.push_back(v);
            bool any = false, all = true;
            for (auto w : g.succ[v]) {
                any = any || in(w);
                all = all && in(w);
            }
            closed = closed && (m.controlled(v) ? any : all);
        }
        if (!closed)
            continue;
        auto next = [&](VertexId v) {
            std::vector<VertexId> out;
            for (auto w : g.succ[v])
                if (in(w))
                    out.push_back(w);
            return out;
        };
        if (strongly_connected(members, next))
            ecs.push_back(mask);
    }
    std::vector<std::vector<VertexId>> out;
    for (auto a : ecs) {
        bool maximal = true;
        for (auto b : ecs)
            maximal = maximal && !(a != b && (a & b) == a);
        if (!maximal)
            continue;
        std::vector<VertexId> vs;
        for (VertexId v = 0; v < n; ++v)
            if ((a >> v) & 1)
                vs.push_back(v);
        out.push_back(vs);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Acceptance probability by enumerating every run on u.
inline Rational brute_acceptance_probability(const ProbWordAutomaton& a, const std::set<Id>& f,
                                             const std::vector<std::string>& u)
{
    std::function<Rational(Id, std::size_t)> go = [&](Id q, std::size_t i) -> Rational {
        if (i == u.size())
            return f.count(q) ? Rational(1) : Rational(0);
        Rational total = 0;
        for (const auto& [r, w] : a.step(q, a.alphabet.at(u[i])).weights())
            total += w * go(r, i + 1);
        return total;
    };
    return go(a.initial, 0);
}

/// Integer sampler for an exact distribution: thresholds over a common denominator.
template <typename T>
class Sampler {
public:
    explicit Sampler(const Distribution<T>& d)
    {
        boost::multiprecision::cpp_int common = 1;
        for (const auto& [x, w] : d.weights())
            common = boost::multiprecision::lcm(common, boost::multiprecision::denominator(w));
        std::uint64_t acc = 0;
        for (const auto& [x, w] : d.weights()) {
            auto share = boost::multiprecision::numerator(w) * (common / boost::multiprecision::denominator(w));
            acc += static_cast<std::uint64_t>(share);
            values_.push_back(x);
            upper_.push_back(acc);
        }
        total_ = acc;
    }

    const T& draw(std::mt19937_64& rng) const
    {
        auto r = rng() % total_;
        auto it = std::upper_bound(upper_.begin(), upper_.end(), r);
        return values_[static_cast<std::size_t>(it - upper_.begin())];
    }

private:
    std::vector<T> values_;
    std::vector<std::uint64_t> upper_;
    std::uint64_t total_ = 1;
};

/// Runs of a chain: fraction of runs that see a marked state during the second half of the horizon.
inline std::size_t runs_marked_late(const MarkovChain& m, std::uint64_t seed, std::size_t runs, std::size_t horizon)
{
    std::vector<Sampler<std::size_t>> step;
    for (const auto& d : m.trans)
        step.emplace_back(d);
    std::mt19937_64 rng(seed);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < runs; ++r) {
        auto s = m.initial;
        bool seen = false;
        for (std::size_t i = 0; i < horizon; ++i) {
            s = step[s].draw(rng);
            seen = seen || (i >= horizon / 2 && m.marked[s]);
        }
        hits += seen;
    }
    return hits;
}

/// Every positional strategy of the only controller of an arena with no Éloïse vertices, checked
/// on the resulting Markov chain.
inline bool all_abelard_strategies(const StochasticArena& g, const std::function<bool(const MarkovChain&)>& good)
{
    bool ok = true;
    auto scope = reachable_from(g.adjacency(), g.initial);
    for_each_positional(g, Player::Abelard, scope, [&](const PositionalStrategy& s) {
        ok = good(to_markov_chain(fix_strategy(g, s), VertexSet(g.size(), false)));
        return !ok;
    });
    return ok;
}

/// Marks a chain's states by a vertex set of the arena it was built from.
inline MarkovChain marked_by(MarkovChain c, const VertexSet& target)
{
    for (std::size_t s = 0; s < c.size(); ++s)
        c.marked[s] = target[s];
    return c;
}

} // namespace support
