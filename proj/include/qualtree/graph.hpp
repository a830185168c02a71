#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace qualtree {

using Adjacency = std::vector<std::vector<std::size_t>>;

/// Tarjan's SCC decomposition restricted to vertices with within[v] set (all vertices when empty).
/// Components come out in reverse topological order (sinks first).
inline std::vector<std::vector<std::size_t>> strongly_connected_components(const Adjacency& adj,
                                                                           const std::vector<bool>& within = {})
{
    const std::size_t n = adj.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    auto inside = [&](std::size_t v) { return within.empty() || within[v]; };

    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next;
    };
    std::vector<Frame> call;

    for (std::size_t s = 0; s < n; ++s) {
        if (!inside(s) || index[s] != unvisited)
            continue;
        call.push_back({s, 0});
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = true;
        while (!call.empty()) {
            auto& f = call.back();
            if (f.next < adj[f.v].size()) {
                auto w = adj[f.v][f.next++];
                if (!inside(w))
                    continue;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            auto v = f.v;
            call.pop_back();
            if (!call.empty())
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                components.push_back(std::move(comp));
            }
        }
    }
    return components;
}

/// Vertices reachable from `from` through vertices with within[v] set (all when empty).
inline std::vector<bool> reachable_from(const Adjacency& adj, std::size_t from, const std::vector<bool>& within = {})
{
    std::vector<bool> seen(adj.size(), false);
    if (!within.empty() && !within[from])
        return seen;
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto w : adj[v])
            if (!seen[w] && (within.empty() || within[w])) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    return seen;
}

} // namespace qualtree
