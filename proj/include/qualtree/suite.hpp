#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "acceptance_game.hpp"
#include "emptiness.hpp"
#include "games.hpp"
#include "io.hpp"
#include "markov.hpp"
#include "random.hpp"
#include "reductions.hpp"

namespace qualtree {

/// Ordered key/value report; printed as `key: value` lines.
struct RunReport {
    std::vector<std::pair<std::string, std::string>> fields;

    void set(const std::string& key, const std::string& value)
    {
        for (auto& [k, v] : fields)
            if (k == key) {
                v = value;
                return;
            }
        fields.emplace_back(key, value);
    }

    std::string get(const std::string& key) const
    {
        for (const auto& [k, v] : fields)
            if (k == key)
                return v;
        return {};
    }

    std::string text() const
    {
        std::string s;
        for (const auto& [k, v] : fields)
            s += k + ": " + v + "\n";
        return s;
    }
};

struct SuiteCheck {
    std::string name;
    std::size_t total = 0;
    std::size_t agree = 0;
};

struct SuiteReport {
    std::vector<SuiteCheck> checks;
    std::vector<std::string> disagreements;
    std::size_t resource_exceeded = 0;
    std::string verdicts; // one character per decided verdict, in instance order

    bool ok() const { return disagreements.empty(); }
};

namespace detail {

class SuiteRecorder {
public:
    explicit SuiteRecorder(SuiteReport& r) : r_(r) {}

    void record(const std::string& check, std::size_t instance, bool agree)
    {
        auto* c = find(check);
        ++c->total;
        if (agree)
            ++c->agree;
        else
            r_.disagreements.push_back(check + " #" + std::to_string(instance));
    }

    void verdict(bool v) { r_.verdicts += v ? '1' : '0'; }

private:
    SuiteCheck* find(const std::string& name)
    {
        for (auto& c : r_.checks)
            if (c.name == name)
                return &c;
        r_.checks.push_back({name, 0, 0});
        return &r_.checks.back();
    }

    SuiteReport& r_;
};

} // namespace detail

/// Random cross-check suite: every solver against its reference procedure, plus the
/// structural identities of the reductions. Instances depend only on `seed`.
inline SuiteReport run_suite(std::uint64_t seed, std::size_t count, std::size_t max_states)
{
    SuiteReport report;
    detail::SuiteRecorder rec(report);
    gen::Rng rng(seed);
    const auto arena_size = std::min<std::size_t>(7, max_states + 3);
    for (std::size_t i = 0; i < count; ++i) {
        {
            auto [g, f] = gen::arena(rng, arena_size);
            auto reach = almost_sure_reach(g, f);
            auto buchi = almost_sure_buchi(g, f);
            rec.record("reach-vs-oracle", i, reach.winning == oracle_reach_region(g, f));
            rec.record("buchi-vs-oracle", i, buchi.winning == oracle_buchi_region(g, f));
            auto gadget = buchi_to_reachability(g, f);
            auto via = almost_sure_reach(gadget.arena, gadget.target);
            bool same = true, certified = true;
            for (VertexId v = 0; v < g.size(); ++v) {
                same = same && via.winning[v] == buchi.winning[v];
                if (buchi.winning[v])
                    certified = certified && check_buchi_strategy(with_initial(g, v), f, buchi.strategy);
            }
            rec.record("gadget-preserves-buchi", i, same);
            rec.record("buchi-strategy-check", i, certified);
            rec.verdict(buchi.wins(g.initial));
        }
        {
            // One-player case: co-Büchi is almost-sure reachability of the end components avoiding F.
            auto [g, f] = gen::arena(rng, arena_size, {Owner::Eloise, Owner::Random});
            auto co = almost_sure_cobuchi(g, f);
            VertexSet inside(g.size(), false);
            for (const auto& ec : max_end_components(Mdp(g), detail::complement(f)))
                for (auto v : ec.vertices)
                    inside[v] = true;
            rec.record("cobuchi-vs-end-components", i, co.wins == almost_sure_reach(g, inside).wins(g.initial));
            rec.verdict(co.wins);
        }
        {
            auto inst = gen::alternating(rng, max_states, 2);
            auto res = check_emptiness(inst.automaton, inst.final_states);
            if (res.status == EmptinessStatus::ResourceExceeded) {
                ++report.resource_exceeded;
            } else {
                auto game = build_emptiness_game(inst.automaton, inst.final_states);
                bool nonempty = res.status == EmptinessStatus::NonEmpty;
                try {
                    rec.record("emptiness-vs-oracle", i,
                               nonempty == oracle_belief_strategy_exists(game.arena, game.target));
                } catch (const ResourceExceeded&) {
                    ++report.resource_exceeded;
                }
                if (nonempty)
                    rec.record("witness-membership", i,
                               qualitative_membership(inst.automaton, {AcceptanceKind::Buchi, inst.final_states},
                                                      res.witness->tree));
                rec.verdict(nonempty);
            }
        }
        {
            auto [a, f] = gen::simple_word_automaton(rng, max_states, 2);
            auto t = gen::regular_tree(rng, 4, a.alphabet);
            rec.record("lift-chains-equal", i,
                       same_weighted_graph(prob_tree_chain(lift_diagonal(a), f, t), prob_tree_chain(lift_swap(a), f, t)));
            auto w = gen::lasso_word(rng, a.alphabet, 3, 3);
            auto tw = tree_from_word(w);
            bool word = lasso_membership_word(a, f, w, AcceptanceKind::CoBuchi);
            rec.record("lasso-vs-tree-chain", i, word == prob_tree_membership(lift_diagonal(a), f, tw));
            if (word)
                rec.record("lasso-forward", i,
                           qualitative_membership(universalize(a), {AcceptanceKind::CoBuchi, f}, tw));
            rec.verdict(word);
        }
        {
            auto [u, f] = gen::universal(rng, max_states, 2);
            auto t = gen::regular_tree(rng, 4, u.alphabet);
            auto nz = to_nonzero(u, f);
            auto direct = build_acceptance_game(universal_to_alternating(u), f, t);
            auto embedded = build_nonzero_arena(nz, t);
            rec.record("nonzero-arena-identity", i,
                       embedded.arena == direct.arena && embedded.almost == [&] {
                           VertexSet m(direct.arena.size(), false);
                           for (VertexId v = 0; v < direct.state_vertex_count; ++v)
                               m[v] = !direct.target[v];
                           return m;
                       }());
        }
    }
    return report;
}

} // namespace qualtree
