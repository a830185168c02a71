#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "arena.hpp"
#include "automata.hpp"
#include "emptiness.hpp"
#include "regular_tree.hpp"

namespace qualtree {

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace io {

struct Line {
    std::size_t number = 0;
    std::vector<std::string> tokens;
};

/// Splits text into non-empty token lines; '#' starts a comment.
inline std::vector<Line> tokenize(const std::string& text)
{
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream words(raw);
        Line line{number, {}};
        for (std::string w; words >> w;)
            line.tokens.push_back(w);
        if (!line.tokens.empty())
            out.push_back(std::move(line));
    }
    return out;
}

[[noreturn]] inline void fail(const Line& l, const std::string& what)
{
    throw ParseError("line " + std::to_string(l.number) + ": " + what);
}

inline std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ParseError("cannot open " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f << text;
}

inline std::string join(const std::vector<std::string>& xs, std::size_t from = 0)
{
    std::string s;
    for (std::size_t i = from; i < xs.size(); ++i)
        s += (i > from ? " " : "") + xs[i];
    return s;
}

inline std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string digest(const std::string& text)
{
    static const char* hex = "0123456789abcdef";
    auto h = fnv1a(text);
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4)
        s[static_cast<std::size_t>(i)] = hex[h & 15];
    return s;
}

} // namespace io

using io::Line;

using AnyAutomaton =
    std::variant<TreeAutomaton, AlternatingTreeAutomaton, ProbWordAutomaton, ProbTreeAutomaton, NonZeroAutomaton>;

struct AutomatonFile {
    AnyAutomaton automaton;
    std::optional<AcceptanceCondition> accept;

    friend bool operator==(const AutomatonFile&, const AutomatonFile&) = default;
};

inline const char* kind_name(const AnyAutomaton& a)
{
    static const char* names[] = {"tree", "alternating-tree", "prob-word", "prob-tree", "nonzero"};
    return names[a.index()];
}

inline AutomatonFile parse_automaton(const std::string& text)
{
    auto lines = io::tokenize(text);
    std::string kind;
    std::optional<NameTable> alphabet, states;
    for (const auto& l : lines) {
        const auto& t = l.tokens;
        if (t[0] == "kind") {
            if (t.size() != 2)
                io::fail(l, "kind takes one argument");
            kind = t[1];
        } else if (t[0] == "alphabet" || t[0] == "states") {
            std::vector<std::string> xs(t.begin() + 1, t.end());
            std::set<std::string> uniq(xs.begin(), xs.end());
            if (uniq.size() != xs.size())
                io::fail(l, "duplicate name in " + t[0]);
            (t[0] == "alphabet" ? alphabet : states) = NameTable(xs);
        }
    }
    static const std::set<std::string> kinds{"tree", "alternating-tree", "prob-word", "prob-tree", "nonzero"};
    if (!kinds.count(kind))
        throw ParseError("missing or unknown automaton kind '" + kind + "'");
    if (!alphabet || !states)
        throw ParseError("automaton needs 'alphabet' and 'states' lines");

    auto state = [&](const Line& l, const std::string& s) {
        auto id = states->find(s);
        if (!id)
            io::fail(l, "unknown state '" + s + "'");
        return *id;
    };
    auto symbol = [&](const Line& l, const std::string& s) {
        auto id = alphabet->find(s);
        if (!id)
            io::fail(l, "unknown symbol '" + s + "'");
        return *id;
    };
    auto state_set = [&](const Line& l, std::size_t from) {
        std::set<Id> out;
        for (std::size_t i = from; i < l.tokens.size(); ++i)
            out.insert(state(l, l.tokens[i]));
        return out;
    };
    auto rational = [&](const Line& l, const std::string& s) {
        try {
            return parse_rational(s);
        } catch (const std::exception& e) {
            io::fail(l, e.what());
        }
    };

    std::optional<Id> initial;
    std::optional<AcceptanceCondition> accept;
    std::set<Id> eloise, abelard, sure, one, pos;
    std::vector<Id> order;
    bool has_order = false, complete = false;
    TransitionSet split;
    std::set<LocalTransition> local;
    std::map<WordKey, Distribution<Id>> pdelta;
    std::map<WordKey, Distribution<StatePair>> ptdelta;

    auto allow = [&](const Line& l, std::initializer_list<const char*> ok) {
        for (const char* k : ok)
            if (kind == k)
                return;
        io::fail(l, "'" + l.tokens[0] + "' is not allowed for kind " + kind);
    };

    for (const auto& l : lines) {
        const auto& t = l.tokens;
        const auto& d = t[0];
        if (d == "kind" || d == "alphabet" || d == "states")
            continue;
        if (d == "initial") {
            if (t.size() != 2)
                io::fail(l, "initial takes one state");
            initial = state(l, t[1]);
        } else if (d == "eloise" || d == "abelard") {
            allow(l, {"alternating-tree", "nonzero"});
            (d == "eloise" ? eloise : abelard) = state_set(l, 1);
        } else if (d == "accept") {
            if (t.size() < 2 || (t[1] != "buchi" && t[1] != "cobuchi"))
                io::fail(l, "accept needs buchi or cobuchi");
            accept = AcceptanceCondition{t[1] == "buchi" ? AcceptanceKind::Buchi : AcceptanceKind::CoBuchi,
                                         state_set(l, 2)};
        } else if (d == "order") {
            allow(l, {"nonzero"});
            has_order = true;
            order.clear();
            for (std::size_t i = 1; i < t.size(); ++i)
                order.push_back(state(l, t[i]));
        } else if (d == "nzsets") {
            allow(l, {"nonzero"});
            if (t.size() < 2 || (t[1] != "forall" && t[1] != "one" && t[1] != "pos"))
                io::fail(l, "nzsets needs forall, one or pos");
            (t[1] == "forall" ? sure : t[1] == "one" ? one : pos) = state_set(l, 2);
        } else if (d == "complete") {
            allow(l, {"tree", "alternating-tree"});
            complete = true;
        } else if (d == "trans") {
            allow(l, {"tree", "alternating-tree", "nonzero"});
            if (t.size() != 5)
                io::fail(l, "trans needs q a q0 q1");
            if (!split.insert({state(l, t[1]), symbol(l, t[2]), state(l, t[3]), state(l, t[4])}).second)
                io::fail(l, "duplicate transition");
        } else if (d == "ltrans") {
            allow(l, {"nonzero"});
            if (t.size() != 4)
                io::fail(l, "ltrans needs q a q'");
            if (!local.insert({state(l, t[1]), symbol(l, t[2]), state(l, t[3])}).second)
                io::fail(l, "duplicate local transition");
        } else if (d == "ptrans") {
            allow(l, {"prob-word"});
            if (t.size() < 5 || (t.size() - 3) % 2 != 0)
                io::fail(l, "ptrans needs q a followed by probability/state pairs");
            WordKey key{state(l, t[1]), symbol(l, t[2])};
            if (pdelta.count(key))
                io::fail(l, "second distribution for the same state and symbol");
            Distribution<Id> dist;
            for (std::size_t i = 3; i < t.size(); i += 2) {
                auto q = state(l, t[i + 1]);
                dist.set_raw(q, dist.weight(q) + rational(l, t[i]));
            }
            pdelta[key] = std::move(dist);
        } else if (d == "pttrans") {
            allow(l, {"prob-tree"});
            if (t.size() < 6 || (t.size() - 3) % 3 != 0)
                io::fail(l, "pttrans needs q a followed by probability/left/right triples");
            WordKey key{state(l, t[1]), symbol(l, t[2])};
            if (ptdelta.count(key))
                io::fail(l, "second distribution for the same state and symbol");
            Distribution<StatePair> dist;
            for (std::size_t i = 3; i < t.size(); i += 3) {
                StatePair p{state(l, t[i + 1]), state(l, t[i + 2])};
                dist.set_raw(p, dist.weight(p) + rational(l, t[i]));
            }
            ptdelta[key] = std::move(dist);
        } else {
            io::fail(l, "unknown directive '" + d + "'");
        }
    }
    if (!initial)
        throw ParseError("automaton needs an 'initial' line");

    AutomatonFile out;
    out.accept = accept;
    if (kind == "tree") {
        out.automaton = TreeAutomaton{*alphabet, *states, *initial, split, complete};
    } else if (kind == "alternating-tree") {
        out.automaton = AlternatingTreeAutomaton{*alphabet, *states, *initial, eloise, abelard, split, complete};
    } else if (kind == "prob-word") {
        out.automaton = ProbWordAutomaton{*alphabet, *states, *initial, pdelta};
    } else if (kind == "prob-tree") {
        out.automaton = ProbTreeAutomaton{*alphabet, *states, *initial, ptdelta};
    } else {
        NonZeroAutomaton b;
        b.alphabet = *alphabet;
        b.states = *states;
        b.initial = *initial;
        b.order = has_order ? order : std::vector<Id>{};
        b.eloise = eloise;
        b.abelard = abelard;
        b.local = local;
        b.split = split;
        b.sure = sure;
        b.almost = one;
        b.positive = pos;
        out.automaton = std::move(b);
    }
    return out;
}

namespace io {

inline std::string names_of(const NameTable& table, const std::set<Id>& ids)
{
    std::string s;
    for (Id q : ids)
        s += " " + table[q];
    return s;
}

inline void print_header(std::ostringstream& o, const char* kind, const NameTable& alphabet, const NameTable& states,
                         Id initial)
{
    o << "kind " << kind << "\n";
    o << "alphabet" << (alphabet.empty() ? "" : " ") << join(alphabet.names()) << "\n";
    o << "states" << (states.empty() ? "" : " ") << join(states.names()) << "\n";
    o << "initial " << states[initial] << "\n";
}

inline void print_split(std::ostringstream& o, const NameTable& alphabet, const NameTable& states,
                        const TransitionSet& delta)
{
    for (const auto& t : delta)
        o << "trans " << states[t.state] << " " << alphabet[t.symbol] << " " << states[t.left] << " "
          << states[t.right] << "\n";
}

} // namespace io

inline std::string print_automaton(const AutomatonFile& f)
{
    std::ostringstream o;
    auto accept = [&](const NameTable& states) {
        if (f.accept)
            o << "accept " << to_string(f.accept->kind) << io::names_of(states, f.accept->target) << "\n";
    };
    std::visit(
        [&](const auto& a) {
            using A = std::decay_t<decltype(a)>;
            io::print_header(o, kind_name(f.automaton), a.alphabet, a.states, a.initial);
            if constexpr (std::is_same_v<A, AlternatingTreeAutomaton> || std::is_same_v<A, NonZeroAutomaton>) {
                o << "eloise" << io::names_of(a.states, a.eloise) << "\n";
                o << "abelard" << io::names_of(a.states, a.abelard) << "\n";
            }
            if constexpr (std::is_same_v<A, NonZeroAutomaton>) {
                o << "order";
                for (Id q : a.order)
                    o << " " << a.states[q];
                o << "\n";
                o << "nzsets forall" << io::names_of(a.states, a.sure) << "\n";
                o << "nzsets one" << io::names_of(a.states, a.almost) << "\n";
                o << "nzsets pos" << io::names_of(a.states, a.positive) << "\n";
            }
            accept(a.states);
            if constexpr (std::is_same_v<A, TreeAutomaton> || std::is_same_v<A, AlternatingTreeAutomaton>) {
                if (a.complete)
                    o << "complete\n";
                io::print_split(o, a.alphabet, a.states, a.transitions);
            } else if constexpr (std::is_same_v<A, NonZeroAutomaton>) {
                for (const auto& t : a.local)
                    o << "ltrans " << a.states[t.state] << " " << a.alphabet[t.symbol] << " " << a.states[t.target]
                      << "\n";
                io::print_split(o, a.alphabet, a.states, a.split);
            } else if constexpr (std::is_same_v<A, ProbWordAutomaton>) {
                for (const auto& [key, d] : a.delta) {
                    o << "ptrans " << a.states[key.first] << " " << a.alphabet[key.second];
                    for (const auto& [q, w] : d.weights())
                        o << " " << to_string(w) << " " << a.states[q];
                    o << "\n";
                }
            } else {
                for (const auto& [key, d] : a.delta) {
                    o << "pttrans " << a.states[key.first] << " " << a.alphabet[key.second];
                    for (const auto& [p, w] : d.weights())
                        o << " " << to_string(w) << " " << a.states[p.first] << " " << a.states[p.second];
                    o << "\n";
                }
            }
        },
        f.automaton);
    return o.str();
}

/// Parses a tree file; nodes are renumbered in name order.
inline RegularTree parse_tree(const std::string& text)
{
    auto lines = io::tokenize(text);
    if (lines.empty() || lines.front().tokens != std::vector<std::string>{"tree"})
        throw ParseError("tree file must start with 'tree'");
    std::string root;
    std::map<std::string, std::array<std::string, 3>> nodes;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& l = lines[k];
        const auto& t = l.tokens;
        if (t[0] == "root" && t.size() == 2) {
            root = t[1];
        } else if (t[0] == "node" && t.size() == 5) {
            if (!nodes.emplace(t[1], std::array<std::string, 3>{t[2], t[3], t[4]}).second)
                io::fail(l, "duplicate node '" + t[1] + "'");
        } else {
            io::fail(l, "expected 'root n' or 'node n label n0 n1'");
        }
    }
    if (root.empty())
        throw ParseError("tree file needs a 'root' line");
    RegularTree t;
    std::map<std::string, std::size_t> id;
    for (const auto& [name, info] : nodes)
        id[name] = t.add_node(name, info[0]);
    auto lookup = [&](const std::string& n) {
        auto it = id.find(n);
        if (it == id.end())
            throw ParseError("unknown node '" + n + "'");
        return it->second;
    };
    for (const auto& [name, info] : nodes) {
        t.succ0[id[name]] = lookup(info[1]);
        t.succ1[id[name]] = lookup(info[2]);
    }
    t.root = lookup(root);
    if (auto r = validate(t); !r.empty())
        throw ParseError("invalid tree: " + r.front());
    return t;
}

inline std::string print_tree(const RegularTree& tree)
{
    auto t = canonical_tree(tree);
    std::ostringstream o;
    o << "tree\nroot " << t.names[t.root] << "\n";
    for (std::size_t n = 0; n < t.size(); ++n)
        o << "node " << t.names[n] << " " << t.labels[n] << " " << t.names[t.succ0[n]] << " " << t.names[t.succ1[n]]
          << "\n";
    return o.str();
}

inline UltimatelyPeriodicWord parse_word(const std::string& text)
{
    auto lines = io::tokenize(text);
    if (lines.size() != 1 || lines.front().tokens.front() != "word")
        throw ParseError("word file must be a single 'word u... | v...' line");
    const auto& t = lines.front().tokens;
    auto bar = std::find(t.begin(), t.end(), "|");
    if (bar == t.end() || std::find(bar + 1, t.end(), "|") != t.end())
        io::fail(lines.front(), "word needs exactly one '|' between prefix and period");
    UltimatelyPeriodicWord w{{t.begin() + 1, bar}, {bar + 1, t.end()}};
    if (w.period.empty())
        io::fail(lines.front(), "period must be non-empty");
    return w;
}

inline std::string print_word(const UltimatelyPeriodicWord& w)
{
    std::string s = "word";
    for (const auto& x : w.prefix)
        s += " " + x;
    s += " |";
    for (const auto& x : w.period)
        s += " " + x;
    return s + "\n";
}

struct ArenaFile {
    StochasticArena arena;
    VertexSet target;

    friend bool operator==(const ArenaFile&, const ArenaFile&) = default;
};

/// Vertices renumbered in name order, successors sorted by name.
inline ArenaFile canonical_arena(const ArenaFile& f)
{
    const auto& g = f.arena;
    std::vector<VertexId> perm(g.size());
    for (VertexId v = 0; v < g.size(); ++v)
        perm[v] = v;
    std::sort(perm.begin(), perm.end(), [&](auto x, auto y) { return g.names[x] < g.names[y]; });
    std::vector<VertexId> where(g.size());
    for (VertexId i = 0; i < perm.size(); ++i)
        where[perm[i]] = i;
    ArenaFile out;
    for (auto old : perm)
        out.arena.add_vertex(g.names[old], g.owner[old]);
    for (auto old : perm) {
        std::vector<std::size_t> k(g.succ[old].size());
        for (std::size_t i = 0; i < k.size(); ++i)
            k[i] = i;
        std::sort(k.begin(), k.end(), [&](auto x, auto y) { return where[g.succ[old][x]] < where[g.succ[old][y]]; });
        for (auto i : k) {
            if (g.owner[old] == Owner::Random)
                out.arena.add_random_edge(where[old], where[g.succ[old][i]], g.prob[old][i]);
            else
                out.arena.add_edge(where[old], where[g.succ[old][i]]);
        }
    }
    out.arena.initial = g.size() ? where[g.initial] : 0;
    out.target = VertexSet(g.size(), false);
    for (VertexId v = 0; v < g.size(); ++v)
        out.target[where[v]] = f.target.at(v);
    return out;
}

inline ArenaFile parse_arena(const std::string& text)
{
    auto lines = io::tokenize(text);
    if (lines.empty() || lines.front().tokens != std::vector<std::string>{"arena"})
        throw ParseError("arena file must start with 'arena'");
    ArenaFile f;
    std::map<std::string, VertexId> id;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& t = lines[k].tokens;
        if (t[0] != "vertex")
            continue;
        if (t.size() != 3)
            io::fail(lines[k], "vertex needs a name and an owner");
        Owner o;
        if (t[2] == "eloise")
            o = Owner::Eloise;
        else if (t[2] == "abelard")
            o = Owner::Abelard;
        else if (t[2] == "random")
            o = Owner::Random;
        else
            io::fail(lines[k], "owner must be eloise, abelard or random");
        if (id.count(t[1]))
            io::fail(lines[k], "duplicate vertex '" + t[1] + "'");
        id[t[1]] = f.arena.add_vertex(t[1], o);
    }
    auto vertex = [&](const io::Line& l, const std::string& n) {
        auto it = id.find(n);
        if (it == id.end())
            io::fail(l, "unknown vertex '" + n + "'");
        return it->second;
    };
    f.target = VertexSet(f.arena.size(), false);
    bool has_init = false;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& l = lines[k];
        const auto& t = l.tokens;
        if (t[0] == "vertex")
            continue;
        if (t[0] == "init" && t.size() == 2) {
            f.arena.initial = vertex(l, t[1]);
            has_init = true;
        } else if (t[0] == "edge" && (t.size() == 3 || t.size() == 4)) {
            auto v = vertex(l, t[1]), w = vertex(l, t[2]);
            bool random = f.arena.owner[v] == Owner::Random;
            if (random != (t.size() == 4))
                io::fail(l, "edge probability is required exactly for random sources");
            if (random) {
                try {
                    f.arena.add_random_edge(v, w, parse_rational(t[3]));
                } catch (const std::invalid_argument& e) {
                    io::fail(l, e.what());
                }
            } else {
                f.arena.add_edge(v, w);
            }
        } else if (t[0] == "target") {
            for (std::size_t i = 1; i < t.size(); ++i)
                f.target[vertex(l, t[i])] = true;
        } else {
            io::fail(l, "expected init, vertex, edge or target");
        }
    }
    if (!has_init)
        throw ParseError("arena file needs an 'init' line");
    if (auto r = validate(f.arena); !r.empty())
        throw ParseError("invalid arena: " + r.front());
    return canonical_arena(f);
}

inline std::string print_arena(const ArenaFile& file)
{
    auto f = canonical_arena(file);
    const auto& g = f.arena;
    std::ostringstream o;
    o << "arena\ninit " << g.names[g.initial] << "\n";
    for (VertexId v = 0; v < g.size(); ++v)
        o << "vertex " << g.names[v] << " " << to_string(g.owner[v]) << "\n";
    for (VertexId v = 0; v < g.size(); ++v)
        for (std::size_t i = 0; i < g.succ[v].size(); ++i) {
            o << "edge " << g.names[v] << " " << g.names[g.succ[v][i]];
            if (g.owner[v] == Owner::Random)
                o << " " << to_string(g.prob[v][i]);
            o << "\n";
        }
    o << "target";
    for (VertexId v = 0; v < g.size(); ++v)
        if (f.target[v])
            o << " " << g.names[v];
    o << "\n";
    return o.str();
}

/// Table form: one `act memory observation action` line per decision and one
/// `update memory action observation memory'` line per memory move.
inline std::string print_strategy(const ImperfectInfoArena& g, const ObservationStrategy& s)
{
    std::ostringstream o;
    o << "strategy\nmemory " << s.memory_size << " initial " << s.initial_memory << "\n";
    for (std::size_t m = 0; m < s.memory_labels.size(); ++m)
        o << "label " << m << " " << s.memory_labels[m] << "\n";
    for (const auto& [key, a] : s.act)
        o << "act " << key.first << " " << g.obs_names.at(key.second) << " " << g.actions.at(a) << "\n";
    for (const auto& [key, m] : s.update)
        o << "update " << std::get<0>(key) << " " << g.actions.at(std::get<1>(key)) << " "
          << g.obs_names.at(std::get<2>(key)) << " " << m << "\n";
    return o.str();
}

} // namespace qualtree
