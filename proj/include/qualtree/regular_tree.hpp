#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "automata.hpp"

namespace qualtree {

/// Finite pointed graph whose unfolding from `root` is an infinite labelled binary tree.
/// Nodes are kept sorted by name (see `canonical_tree`).
struct RegularTree {
    std::vector<std::string> names;
    std::vector<std::string> labels;
    std::vector<std::size_t> succ0;
    std::vector<std::size_t> succ1;
    std::size_t root = 0;

    std::size_t size() const { return names.size(); }

    std::size_t add_node(std::string name, std::string label)
    {
        names.push_back(std::move(name));
        labels.push_back(std::move(label));
        succ0.push_back(0);
        succ1.push_back(0);
        return names.size() - 1;
    }

    std::size_t child(std::size_t n, int direction) const { return direction == 0 ? succ0[n] : succ1[n]; }

    friend bool operator==(const RegularTree&, const RegularTree&) = default;
};

inline ValidationReport validate(const RegularTree& t)
{
    ValidationReport r;
    std::size_t n = t.size();
    if (n == 0) {
        r.push_back("tree has no nodes");
        return r;
    }
    if (t.labels.size() != n || t.succ0.size() != n || t.succ1.size() != n) {
        r.push_back("tree arrays have inconsistent sizes");
        return r;
    }
    if (t.root >= n)
        r.push_back("root out of range");
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < n; ++i) {
        if (!seen.emplace(t.names[i], i).second)
            r.push_back("duplicate node " + t.names[i]);
        if (t.succ0[i] >= n || t.succ1[i] >= n)
            r.push_back("node " + t.names[i] + " has a successor out of range");
    }
    if (!r.empty())
        return r;
    std::vector<bool> reached(n, false);
    std::vector<std::size_t> stack{t.root};
    reached[t.root] = true;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto w : {t.succ0[v], t.succ1[v]})
            if (!reached[w]) {
                reached[w] = true;
                stack.push_back(w);
            }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!reached[i])
            r.push_back("node " + t.names[i] + " is unreachable from the root");
    return r;
}

/// Reorders nodes by name (the canonical representation).
inline RegularTree canonical_tree(const RegularTree& t)
{
    std::vector<std::size_t> perm(t.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](auto x, auto y) { return t.names[x] < t.names[y]; });
    std::vector<std::size_t> where(t.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        where[perm[i]] = i;
    RegularTree out;
    for (auto old : perm)
        out.add_node(t.names[old], t.labels[old]);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        out.succ0[i] = where[t.succ0[perm[i]]];
        out.succ1[i] = where[t.succ1[perm[i]]];
    }
    out.root = where[t.root];
    return out;
}

/// Drops nodes unreachable from the root.
inline RegularTree prune_unreachable(const RegularTree& t)
{
    std::vector<std::size_t> order;
    std::vector<std::size_t> index(t.size(), SIZE_MAX);
    order.push_back(t.root);
    index[t.root] = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
        for (auto w : {t.succ0[order[k]], t.succ1[order[k]]})
            if (index[w] == SIZE_MAX) {
                index[w] = order.size();
                order.push_back(w);
            }
    RegularTree out;
    for (auto v : order)
        out.add_node(t.names[v], t.labels[v]);
    for (std::size_t k = 0; k < order.size(); ++k) {
        out.succ0[k] = index[t.succ0[order[k]]];
        out.succ1[k] = index[t.succ1[order[k]]];
    }
    out.root = 0;
    return canonical_tree(out);
}

/// The infinite word prefix · period^ω.
struct UltimatelyPeriodicWord {
    std::vector<std::string> prefix;
    std::vector<std::string> period;

    std::size_t lasso_length() const { return prefix.size() + period.size(); }

    /// Letter at (0-based) position i of the infinite word.
    const std::string& at(std::size_t i) const
    {
        if (i < prefix.size())
            return prefix[i];
        return period[(i - prefix.size()) % period.size()];
    }

    /// Position after lasso position p (positions 0..lasso_length()-1).
    std::size_t next_position(std::size_t p) const { return p + 1 < lasso_length() ? p + 1 : prefix.size(); }

    const std::string& letter_at_position(std::size_t p) const
    {
        return p < prefix.size() ? prefix[p] : period[p - prefix.size()];
    }

    friend bool operator==(const UltimatelyPeriodicWord&, const UltimatelyPeriodicWord&) = default;
};

/// Lasso normal form: primitive period, shortest prefix.
inline UltimatelyPeriodicWord canonical_word(UltimatelyPeriodicWord w)
{
    if (w.period.empty())
        throw std::invalid_argument("ultimately periodic word needs a non-empty period");
    auto n = w.period.size();
    for (std::size_t p = 1; p <= n; ++p) {
        if (n % p)
            continue;
        bool ok = true;
        for (std::size_t i = p; i < n && ok; ++i)
            ok = w.period[i] == w.period[i % p];
        if (ok) {
            w.period.resize(p);
            break;
        }
    }
    while (!w.prefix.empty() && w.prefix.back() == w.period.back()) {
        std::rotate(w.period.rbegin(), w.period.rbegin() + 1, w.period.rend());
        w.prefix.pop_back();
    }
    return w;
}

inline bool is_canonical(const UltimatelyPeriodicWord& w)
{
    return !w.period.empty() && canonical_word(w) == w;
}

/// The tree t_w with every branch reading w; succ0 = succ1 at every node.
inline RegularTree tree_from_word(const UltimatelyPeriodicWord& w)
{
    auto len = w.lasso_length();
    if (w.period.empty())
        throw std::invalid_argument("tree_from_word: empty period");
    auto width = std::to_string(len - 1).size();
    RegularTree t;
    for (std::size_t i = 0; i < len; ++i) {
        auto digits = std::to_string(i);
        t.add_node("w" + std::string(width - digits.size(), '0') + digits, w.letter_at_position(i));
    }
    for (std::size_t i = 0; i < len; ++i)
        t.succ0[i] = t.succ1[i] = w.next_position(i);
    t.root = 0;
    return t;
}

/// The word t[b] read along branch b, in lasso normal form. `bits` is a word over {"0","1"}.
inline UltimatelyPeriodicWord branch_word(const RegularTree& t, const UltimatelyPeriodicWord& bits)
{
    if (bits.period.empty())
        throw std::invalid_argument("branch_word: empty period");
    std::vector<int> dir(bits.lasso_length());
    for (std::size_t p = 0; p < dir.size(); ++p) {
        const auto& s = bits.letter_at_position(p);
        if (s != "0" && s != "1")
            throw std::invalid_argument("branch_word: branch letter '" + s + "' is not a bit");
        dir[p] = s == "1";
    }
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> first_seen;
    std::vector<std::string> letters;
    std::size_t node = t.root, pos = 0;
    while (true) {
        auto [it, fresh] = first_seen.emplace(std::make_pair(node, pos), letters.size());
        if (!fresh) {
            UltimatelyPeriodicWord w;
            w.prefix.assign(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(it->second));
            w.period.assign(letters.begin() + static_cast<std::ptrdiff_t>(it->second), letters.end());
            return canonical_word(std::move(w));
        }
        letters.push_back(t.labels[node]);
        node = t.child(node, dir[pos]);
        pos = bits.next_position(pos);
    }
}

/// Fair direction bits b1..b_horizon from a seeded 64-bit Mersenne twister.
inline std::vector<int> sample_bits(std::mt19937_64& rng, std::size_t horizon)
{
    std::vector<int> bits(horizon);
    for (auto& b : bits)
        b = static_cast<int>(rng() >> 63);
    return bits;
}

/// t(ε) t(b1) ... t(b1...b_horizon) for fair coin flips b_i.
inline std::vector<std::string> sample_branch(const RegularTree& t, std::mt19937_64& rng, std::size_t horizon)
{
    if (horizon < 1)
        throw std::invalid_argument("sample_branch: horizon must be positive");
    std::vector<std::string> out;
    out.reserve(horizon + 1);
    std::size_t node = t.root;
    out.push_back(t.labels[node]);
    for (int b : sample_bits(rng, horizon)) {
        node = t.child(node, b);
        out.push_back(t.labels[node]);
    }
    return out;
}

inline std::vector<std::string> sample_branch(const RegularTree& t, std::uint64_t seed, std::size_t horizon)
{
    std::mt19937_64 rng(seed);
    return sample_branch(t, rng, horizon);
}

} // namespace qualtree
