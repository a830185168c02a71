// qualtree: command-line front end for the qualitative tree automata toolkit.
#include <chrono>
#include <functional>
#include <iostream>
#include <string>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "qualtree/acceptance_game.hpp"
#include "qualtree/emptiness.hpp"
#include "qualtree/games.hpp"
#include "qualtree/io.hpp"
#include "qualtree/markov.hpp"
#include "qualtree/reductions.hpp"
#include "qualtree/suite.hpp"

namespace {

using namespace qualtree;

enum Exit : int { Ok = 0, Negative = 1, Malformed = 2, Exceeded = 3, Disagreement = 4 };

struct Outcome {
    RunReport report;
    int code = Ok;
};

// Raised for inputs that are well formed but outside what a subcommand decides.
struct Refused : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

AutomatonFile load_automaton(const std::string& path)
{
    auto f = parse_automaton(io::read_file(path));
    auto report = std::visit([](const auto& a) { return validate(a); }, f.automaton);
    if (f.accept) {
        const auto& states = std::visit([](const auto& a) -> const NameTable& { return a.states; }, f.automaton);
        for (auto& r : validate(*f.accept, states))
            report.push_back(r);
    }
    if (!report.empty())
        throw ParseError(path + ": " + report.front());
    return f;
}

template <typename T>
const T& expect_kind(const AutomatonFile& f, const std::string& path, const char* wanted)
{
    if (auto* a = std::get_if<T>(&f.automaton))
        return *a;
    throw Refused(path + ": expected an automaton of kind " + wanted + ", got " + kind_name(f.automaton));
}

const AcceptanceCondition& expect_accept(const AutomatonFile& f, const std::string& path)
{
    if (!f.accept)
        throw Refused(path + ": missing 'accept' line");
    return *f.accept;
}

AlternatingTreeAutomaton as_alternating(const AutomatonFile& f, const std::string& path)
{
    if (auto* u = std::get_if<TreeAutomaton>(&f.automaton))
        return universal_to_alternating(*u);
    return expect_kind<AlternatingTreeAutomaton>(f, path, "tree or alternating-tree");
}

std::string canonical(const AutomatonFile& f) { return print_automaton(f); }

std::string names_in(const StochasticArena& g, const VertexSet& s)
{
    std::vector<std::string> out;
    for (VertexId v = 0; v < g.size(); ++v)
        if (s[v])
            out.push_back(g.names[v]);
    return io::join(out);
}

std::size_t transition_lines(const std::string& text)
{
    std::size_t n = 0;
    for (const auto& l : io::tokenize(text))
        if (l.tokens[0] == "trans" || l.tokens[0] == "ltrans" || l.tokens[0] == "ptrans" || l.tokens[0] == "pttrans")
            ++n;
    return n;
}

Outcome check_emptiness_cmd(const std::string& path, bool oracle, const std::string& witness_out,
                            const std::string& strategy_out)
{
    Outcome out;
    auto f = load_automaton(path);
    auto a = as_alternating(f, path);
    const auto& acc = expect_accept(f, path);
    if (acc.kind == AcceptanceKind::CoBuchi)
        throw Refused("emptiness of co-Buchi tree automata under qualitative semantics is undecidable "
                      "(already for universal automata); only Buchi acceptance is supported");
    out.report.set("input.automaton", io::digest(canonical(f)));
    auto res = check_emptiness(a, acc.target);
    out.report.set("verdict", to_string(res.status));
    if (res.status == EmptinessStatus::ResourceExceeded) {
        out.report.set("detail", res.detail);
        out.code = Exceeded;
        return out;
    }
    out.report.set("beliefs", std::to_string(res.beliefs));
    bool nonempty = res.status == EmptinessStatus::NonEmpty;
    if (nonempty) {
        auto text = print_tree(res.witness->tree);
        out.report.set("witness.nodes", std::to_string(res.witness->tree.size()));
        out.report.set("witness.digest", io::digest(text));
        if (!witness_out.empty()) {
            io::write_file(witness_out, text);
            out.report.set("witness", witness_out);
        }
        if (!strategy_out.empty()) {
            auto game = build_emptiness_game(a, acc.target);
            io::write_file(strategy_out, print_strategy(game.arena, *res.strategy));
            out.report.set("strategy", strategy_out);
        }
    }
    out.code = nonempty ? Negative : Ok;
    if (oracle) {
        auto game = build_emptiness_game(a, acc.target);
        bool agree = oracle_belief_strategy_exists(game.arena, game.target) == nonempty;
        out.report.set("oracle_agreement", agree ? "agree" : "disagree");
        if (!agree)
            out.code = Disagreement;
    }
    return out;
}

Outcome membership_cmd(const std::string& aut_path, const std::string& tree_path)
{
    Outcome out;
    auto f = load_automaton(aut_path);
    auto t = parse_tree(io::read_file(tree_path));
    const auto& acc = expect_accept(f, aut_path);
    out.report.set("input.automaton", io::digest(canonical(f)));
    out.report.set("input.tree", io::digest(print_tree(t)));
    bool member = qualitative_membership(as_alternating(f, aut_path), acc, t);
    out.report.set("acceptance", to_string(acc.kind));
    out.report.set("verdict", member ? "member" : "nonmember");
    out.code = member ? Ok : Negative;
    return out;
}

Outcome word_membership_cmd(const std::string& aut_path, const std::string& word_path)
{
    Outcome out;
    auto f = load_automaton(aut_path);
    const auto& a = expect_kind<ProbWordAutomaton>(f, aut_path, "prob-word");
    const auto& acc = expect_accept(f, aut_path);
    auto w = parse_word(io::read_file(word_path));
    out.report.set("input.automaton", io::digest(canonical(f)));
    out.report.set("input.word", io::digest(print_word(canonical_word(w))));
    auto chain = lasso_chain(a, acc.target, w);
    bool member = as_verdict(chain, acc.kind);
    out.report.set("acceptance", to_string(acc.kind));
    out.report.set("chain_states", std::to_string(chain.size()));
    out.report.set("verdict", member ? "member" : "nonmember");
    out.code = member ? Ok : Negative;
    return out;
}

Outcome ptree_membership_cmd(const std::string& aut_path, const std::string& tree_path)
{
    Outcome out;
    auto f = load_automaton(aut_path);
    const auto& a = expect_kind<ProbTreeAutomaton>(f, aut_path, "prob-tree");
    const auto& acc = expect_accept(f, aut_path);
    auto t = parse_tree(io::read_file(tree_path));
    out.report.set("input.automaton", io::digest(canonical(f)));
    out.report.set("input.tree", io::digest(print_tree(t)));
    auto chain = prob_tree_chain(a, acc.target, t);
    bool member = as_verdict(chain, acc.kind);
    out.report.set("acceptance", to_string(acc.kind));
    out.report.set("chain_states", std::to_string(chain.size()));
    out.report.set("verdict", member ? "member" : "nonmember");
    out.code = member ? Ok : Negative;
    return out;
}

Outcome solve_game_cmd(const std::string& path, const std::string& objective, bool oracle)
{
    Outcome out;
    auto f = parse_arena(io::read_file(path));
    const auto& g = f.arena;
    out.report.set("input.arena", io::digest(print_arena(f)));
    out.report.set("objective", objective);
    bool wins = false;
    if (objective == "cobuchi") {
        auto v = almost_sure_cobuchi(g, f.target);
        wins = v.wins;
        if (oracle)
            out.report.set("oracle_agreement", "not-applicable");
    } else {
        auto region = objective == "reach" ? almost_sure_reach(g, f.target) : almost_sure_buchi(g, f.target);
        wins = region.wins(g.initial);
        out.report.set("winning", names_in(g, region.winning));
        if (oracle) {
            auto ref = objective == "reach" ? oracle_reach_region(g, f.target) : oracle_buchi_region(g, f.target);
            bool agree = ref == region.winning;
            if (objective == "buchi") {
                auto gadget = buchi_to_reachability(g, f.target);
                auto via = almost_sure_reach(gadget.arena, gadget.target);
                for (VertexId v = 0; v < g.size(); ++v)
                    agree = agree && via.winning[v] == region.winning[v];
            }
            out.report.set("oracle_agreement", agree ? "agree" : "disagree");
            if (!agree) {
                out.report.set("verdict", wins ? "true" : "false");
                out.code = Disagreement;
                return out;
            }
        }
    }
    out.report.set("verdict", wins ? "true" : "false");
    out.code = wins ? Ok : Negative;
    return out;
}

Outcome reduce_cmd(const std::string& op, const std::string& in, const std::string& out_path, const std::string& sharp)
{
    Outcome out;
    auto f = load_automaton(in);
    out.report.set("input.automaton", io::digest(canonical(f)));
    out.report.set("reduction", op);
    AutomatonFile result;
    if (op == "nonzero") {
        const auto& a = expect_kind<TreeAutomaton>(f, in, "tree");
        result.automaton = to_nonzero(a, expect_accept(f, in).target);
    } else {
        const auto& a = expect_kind<ProbWordAutomaton>(f, in, "prob-word");
        const auto& acc = expect_accept(f, in);
        if (op == "sharp" || op == "value1") {
            auto b = op == "sharp" ? sharp_gadget(a, acc.target, sharp) : value1_to_cobuchi(a, acc.target, sharp);
            result.automaton = b.automaton;
            result.accept = AcceptanceCondition{AcceptanceKind::CoBuchi, b.cobuchi};
        } else if (op == "lift1" || op == "lift2") {
            result.automaton = op == "lift1" ? lift_diagonal(a) : lift_swap(a);
            result.accept = acc;
        } else if (op == "universalize") {
            result.automaton = universalize(a);
            result.accept = acc;
        } else {
            throw Refused("unknown reduction '" + op + "'");
        }
    }
    auto text = print_automaton(result);
    io::write_file(out_path, text);
    out.report.set("output", out_path);
    out.report.set("output.kind", kind_name(result.automaton));
    out.report.set("output.digest", io::digest(text));
    out.report.set("output.transitions", std::to_string(transition_lines(text)));
    out.report.set("verdict", "true");
    return out;
}

Outcome suite_cmd(std::uint64_t seed, std::size_t count, std::size_t max_states)
{
    Outcome out;
    auto r = run_suite(seed, count, max_states);
    out.report.set("seed", std::to_string(seed));
    out.report.set("count", std::to_string(count));
    out.report.set("max_states", std::to_string(max_states));
    for (const auto& c : r.checks)
        out.report.set("check." + c.name, std::to_string(c.agree) + "/" + std::to_string(c.total));
    out.report.set("resource_exceeded", std::to_string(r.resource_exceeded));
    out.report.set("disagreements", std::to_string(r.disagreements.size()));
    for (std::size_t k = 0; k < r.disagreements.size(); ++k)
        out.report.set("disagreement." + std::to_string(k), r.disagreements[k]);
    out.report.set("verdicts.digest", io::digest(r.verdicts));
    out.report.set("oracle_agreement", r.ok() ? "agree" : "disagree");
    out.report.set("verdict", r.ok() ? "true" : "false");
    out.code = r.ok() ? Ok : Disagreement;
    return out;
}

Outcome simulate_cmd(const std::string& path, std::uint64_t seed, std::size_t horizon)
{
    Outcome out;
    auto text = io::read_file(path);
    auto lines = io::tokenize(text);
    if (lines.empty())
        throw ParseError(path + ": empty input");
    RegularTree t;
    if (lines.front().tokens.front() == "word") {
        auto w = parse_word(text);
        out.report.set("input.word", io::digest(print_word(canonical_word(w))));
        t = tree_from_word(w);
    } else {
        t = parse_tree(text);
        out.report.set("input.tree", io::digest(print_tree(t)));
    }
    out.report.set("seed", std::to_string(seed));
    out.report.set("horizon", std::to_string(horizon));
    out.report.set("branch", io::join(sample_branch(t, seed, horizon)));
    out.report.set("verdict", "true");
    return out;
}

void emit(const RunReport& r, bool json)
{
    if (!json) {
        std::cout << r.text();
        return;
    }
    nlohmann::ordered_json j;
    for (const auto& [k, v] : r.fields)
        j[k] = v;
    std::cout << j.dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Qualitative tree automata: emptiness, membership, games and reductions"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "Emit the report as JSON");

    std::function<Outcome()> run;
    std::string aut, tree, word, arena, in, out, op, objective = "buchi", witness, strategy, sharp = "sharp";
    bool oracle = false;
    std::uint64_t seed = 1;
    std::size_t count = 200, max_states = 4, horizon = 20;

    auto* ce = app.add_subcommand("check-emptiness", "Decide emptiness of an alternating Buchi tree automaton");
    ce->add_option("AUT", aut)->required();
    ce->add_flag("--oracle", oracle, "Cross-check against belief-strategy enumeration");
    ce->add_option("--witness", witness, "Write the witness tree here");
    ce->add_option("--strategy", strategy, "Write the winning observation strategy here");
    ce->callback([&] { run = [&] { return check_emptiness_cmd(aut, oracle, witness, strategy); }; });

    auto* mem = app.add_subcommand("membership", "Qualitative membership of a regular tree");
    mem->add_option("AUT", aut)->required();
    mem->add_option("TREE", tree)->required();
    mem->callback([&] { run = [&] { return membership_cmd(aut, tree); }; });

    auto* wm = app.add_subcommand("word-membership", "Almost-sure membership of a lasso word");
    wm->add_option("AUT", aut)->required();
    wm->add_option("WORD", word)->required();
    wm->callback([&] { run = [&] { return word_membership_cmd(aut, word); }; });

    auto* pm = app.add_subcommand("ptree-membership", "Almost-sure membership of a regular tree in a probabilistic tree automaton");
    pm->add_option("AUT", aut)->required();
    pm->add_option("TREE", tree)->required();
    pm->callback([&] { run = [&] { return ptree_membership_cmd(aut, tree); }; });

    auto* sg = app.add_subcommand("solve-game", "Almost-sure winner of a stochastic game from its initial vertex");
    sg->add_option("ARENA", arena)->required();
    sg->add_option("--objective", objective)->check(CLI::IsMember({"reach", "buchi", "cobuchi"}));
    sg->add_flag("--oracle", oracle, "Cross-check against positional strategy enumeration");
    sg->callback([&] { run = [&] { return solve_game_cmd(arena, objective, oracle); }; });

    auto* rd = app.add_subcommand("reduce", "Apply an automaton construction");
    rd->add_option("OP", op)->required()->check(
        CLI::IsMember({"sharp", "value1", "lift1", "lift2", "universalize", "nonzero"}));
    rd->add_option("IN", in)->required();
    rd->add_option("OUT", out)->required();
    rd->add_option("--sharp", sharp, "Separator symbol");
    rd->callback([&] { run = [&] { return reduce_cmd(op, in, out, sharp); }; });

    auto* su = app.add_subcommand("suite", "Seeded random cross-check suite");
    su->add_option("--seed", seed);
    su->add_option("--count", count);
    su->add_option("--max-states", max_states)->check(CLI::Range(1, 6));
    su->callback([&] { run = [&] { return suite_cmd(seed, count, max_states); }; });

    auto* sim = app.add_subcommand("simulate", "Sample a random branch of a regular tree or of t_w");
    sim->add_option("INPUT", in)->required();
    sim->add_option("--seed", seed);
    sim->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
    sim->callback([&] { run = [&] { return simulate_cmd(in, seed, horizon); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : Malformed;
    }

    std::string command = "qualtree";
    for (int i = 1; i < argc; ++i)
        command += std::string(" ") + argv[i];

    auto start = std::chrono::steady_clock::now();
    Outcome result;
    try {
        result = run();
    } catch (const ResourceExceeded& e) {
        result.report.set("verdict", "resource-exceeded");
        result.report.set("detail", e.what());
        result.code = Exceeded;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Malformed;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Malformed;
    } catch (const std::logic_error& e) {
        std::cerr << "internal disagreement: " << e.what() << "\n";
        return Disagreement;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Malformed;
    }
    auto micros = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);

    RunReport report;
    report.set("command", command);
    for (const auto& kv : result.report.fields)
        report.set(kv.first, kv.second);
    if (report.get("oracle_agreement").empty())
        report.set("oracle_agreement", "not-run");
    report.set("exit_code", std::to_string(result.code));
    report.set("wall_time_us", std::to_string(micros.count()));
    emit(report, json);
    return result.code;
}
