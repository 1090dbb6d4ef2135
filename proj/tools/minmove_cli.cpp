// minmove: command-line front end.
//
//   minmove decide FORMULA [--bound N] [--oracle] [--json]
//   minmove bribery ELECTION --rule R --candidate C [--unique] [--oracle] [--json]
//   minmove score ELECTION --rule R --candidate C [--oracle] [--json]
//   minmove resilient SOCIETY FORMULA --B N --Ba N [--bound N] [--oracle] [--json]
//   minmove robust SOCIETY FORMULA --B N --Ba N [--bound N] [--oracle] [--json]
//   minmove lobby REFERENDUM [--oracle] [--json]
//
// Exit status: 0 true/found, 1 false/infeasible, 2 usage, input or internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "minmove/io/files.hpp"
#include "minmove/oracle/oracle.hpp"
#include "minmove/pa/text.hpp"
#include "minmove/quant/solver.hpp"
#include "minmove/solver/adversarial.hpp"
#include "minmove/solver/election.hpp"
#include "minmove/solver/minmove.hpp"

namespace {

using namespace minmove;
using nlohmann::json;

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;

struct RunConfig {
    std::string input;
    std::string formula;
    std::string rule = "condorcet";
    std::string candidate;
    std::optional<Int> bound;
    Int budget = 0;
    Int adversary_budget = 0;
    bool oracle = false;
    bool unique = false;
    bool json = false;
};

json cost_json(const society::Cost& c) { return c.is_infinite() ? json(nullptr) : json(c.value()); }

json move_json(const std::optional<society::Move>& m) {
    json out = json::array();
    if (!m) return out;
    for (std::size_t i = 0; i < m->types(); ++i)
        for (std::size_t j = 0; j < m->types(); ++j)
            if (i != j && m->at(i, j) > 0) out.push_back({i, j, m->at(i, j)});
    return out;
}

json stats_json(const solver::SolveStats& s) {
    return {{"decisions", s.decisions}, {"ilp_calls", s.ilp_calls}, {"refinements", s.refinements},
            {"nodes", s.nodes}, {"seconds", s.seconds}};
}

json stats_json(const quant::DecideStats& s) {
    return {{"decisions", s.decisions}, {"ilp_calls", s.ilp_calls}, {"refinements", s.refinements}, {"nodes", s.nodes}};
}

json report(json cost, json move, json rule, json d_witness, bool verdict, json stats) {
    return {{"cost", std::move(cost)}, {"move", std::move(move)},         {"rule", std::move(rule)},
            {"d_witness", std::move(d_witness)}, {"verdict", verdict}, {"stats", std::move(stats)}};
}

void print_oracle(std::ostream& out, const std::string& label, const std::string& ours, const std::string& theirs,
                  json& j) {
    out << "oracle " << label << ": " << theirs << "\n" << (ours == theirs ? "MATCH" : "MISMATCH") << "\n";
    j["oracle"] = {{label, theirs}, {"match", ours == theirs}};
}

// Oracles refuse instances beyond their size guards; that is reported, not fatal.
template <typename F>
void with_oracle(std::ostream& out, json& j, F&& run) {
    try {
        run();
    } catch (const Error& e) {
        out << "oracle skipped: " << e.what() << "\n";
        j["oracle"] = {{"skipped", e.what()}};
    }
}

std::string order_text(const election::Election& e, const election::Order& o) {
    std::string s;
    for (std::size_t k = 0; k < o.size(); ++k) s += (k ? " > " : "") + e.candidates()[static_cast<std::size_t>(o[k])];
    return s;
}

std::string ballot_text(const std::vector<bool>& b) {
    std::string s;
    for (std::size_t k = 0; k < b.size(); ++k) s += (k ? " " : "") + std::string(b[k] ? "yes" : "no");
    return s;
}

template <typename Label>
void print_move(std::ostream& out, const society::Move& m, const std::string& noun, Label label) {
    for (std::size_t i = 0; i < m.types(); ++i)
        for (std::size_t j = 0; j < m.types(); ++j)
            if (i != j && m.at(i, j) > 0)
                out << m.at(i, j) << " " << noun << ": " << label(i) << " → " << label(j) << "\n";
}

std::string opt_text(const std::optional<Int>& v, const std::string& none) { return v ? std::to_string(*v) : none; }

oracle::OracleRule oracle_rule(solver::Rule r) {
    switch (r) {
    case solver::Rule::kCondorcet:
        return oracle::OracleRule::kCondorcet;
    case solver::Rule::kDodgson:
        return oracle::OracleRule::kDodgson;
    case solver::Rule::kYoung:
        return oracle::OracleRule::kYoung;
    case solver::Rule::kDodgsonPrime:
        return oracle::OracleRule::kDodgsonPrime;
    }
    return oracle::OracleRule::kCondorcet;
}

int emit(const RunConfig& cfg, const std::ostringstream& text, const json& j, int status) {
    if (cfg.json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text.str();
    }
    return status;
}

int cmd_decide(const RunConfig& cfg) {
    const pa::Formula f = pa::parse_formula(io::read_file(cfg.input));
    const quant::BoundedSentence s{f, cfg.bound.value_or(1)};
    quant::DecideStats st;
    const bool truth = quant::decide_sentence(s, &st);
    std::ostringstream out;
    out << (truth ? "true" : "false") << "\n";
    json j = report(nullptr, json::array(), nullptr, nullptr, truth, stats_json(st));
    if (cfg.oracle) {
        with_oracle(out, j, [&] {
            const bool want = oracle::oracle_decide(f, s.bound);
            print_oracle(out, "verdict", truth ? "true" : "false", want ? "true" : "false", j);
        });
    }
    return emit(cfg, out, j, truth ? kTrue : kFalse);
}

int cmd_bribery(const RunConfig& cfg) {
    const election::Election e = io::parse_election(io::read_file(cfg.input));
    const solver::Rule rule = solver::parse_rule(cfg.rule);
    const int c = e.index_of(cfg.candidate);
    const auto r = solver::swap_bribery(e, c, rule, solver::BriberyOptions{cfg.unique});
    std::ostringstream out;
    out << "cost: " << r.solve.cost << "\n";
    if (r.solve.move)
        print_move(out, *r.solve.move, "voters", [&](std::size_t t) { return order_text(e, r.types.order(t)); });
    json j = report(cost_json(r.solve.cost), move_json(r.solve.move), cfg.rule,
                    r.d_witness ? json(*r.d_witness) : json(nullptr), r.solve.move.has_value(),
                    stats_json(r.solve.stats));
    if (cfg.oracle) {
        with_oracle(out, j, [&] {
            const auto want = oracle::oracle_swap_bribery(e, c, oracle_rule(rule), cfg.unique);
            print_oracle(out, "cost", r.solve.cost.str(), opt_text(want, "inf"), j);
        });
    }
    return emit(cfg, out, j, r.solve.move ? kTrue : kFalse);
}

int cmd_score(const RunConfig& cfg) {
    const election::Election e = io::parse_election(io::read_file(cfg.input));
    const solver::Rule rule = solver::parse_rule(cfg.rule);
    const int c = e.index_of(cfg.candidate);
    quant::DecideStats st;
    const auto score = solver::rule_score(e, c, solver::score_rule(rule), &st);
    std::ostringstream out;
    out << "score: " << opt_text(score, "unattainable") << "\n";
    json j = report(score ? json(*score) : json(nullptr), json::array(), cfg.rule, nullptr, score.has_value(),
                    stats_json(st));
    if (cfg.oracle) {
        with_oracle(out, j, [&] {
            print_oracle(out, "score", opt_text(score, "unattainable"),
                         opt_text(oracle::oracle_score(e, c, oracle_rule(rule)), "unattainable"), j);
        });
    }
    return emit(cfg, out, j, score ? kTrue : kFalse);
}

solver::AdversarialProblem adversarial_problem(const RunConfig& cfg) {
    const io::SocietyFile sf = io::parse_society(io::read_file(cfg.input));
    solver::AdversarialProblem p;
    p.society = sf.society;
    p.costs = sf.costs;
    p.adversary_costs = sf.adversary_costs;
    p.budget = cfg.budget;
    p.adversary_budget = cfg.adversary_budget;
    p.condition = pa::parse_formula(io::read_file(cfg.formula));
    p.bound = cfg.bound;
    return p;
}

oracle::OracleGame game_of(const solver::AdversarialProblem& p) {
    return {p.society, p.costs, p.budget, p.adversary_costs, p.adversary_budget, p.condition,
            society::society_var_names(p.society.types())};
}

int cmd_resilient(const RunConfig& cfg) {
    const auto p = adversarial_problem(cfg);
    quant::DecideStats st;
    const bool truth = solver::resilient_budget(p, &st);
    std::ostringstream out;
    out << (truth ? "true" : "false") << "\n";
    json j = report(nullptr, json::array(), nullptr, nullptr, truth, stats_json(st));
    if (cfg.oracle) {
        const bool want = oracle::oracle_resilient(game_of(p));
        print_oracle(out, "verdict", truth ? "true" : "false", want ? "true" : "false", j);
    }
    return emit(cfg, out, j, truth ? kTrue : kFalse);
}

int cmd_robust(const RunConfig& cfg) {
    const auto p = adversarial_problem(cfg);
    quant::DecideStats st;
    const auto m = solver::robust_move(p, &st);
    std::ostringstream out;
    out << (m ? "robust move found" : "no robust move") << "\n";
    if (m) print_move(out, *m, "people", [](std::size_t t) { return "type " + std::to_string(t); });
    json j = report(m ? cost_json(society::move_cost(p.costs, *m)) : json(nullptr), move_json(m), nullptr, nullptr,
                    m.has_value(), stats_json(st));
    if (cfg.oracle) {
        const auto g = game_of(p);
        const bool want = oracle::oracle_robust_exists(g);
        print_oracle(out, "verdict", m ? "true" : "false", want ? "true" : "false", j);
        if (m) out << "witness " << (oracle::oracle_robust_holds(g, *m) ? "survives" : "FAILS") << " every reply\n";
    }
    return emit(cfg, out, j, m ? kTrue : kFalse);
}

int cmd_lobby(const RunConfig& cfg) {
    const election::Referendum r = io::parse_referendum(io::read_file(cfg.input));
    const auto res = solver::lobby(r);
    std::ostringstream out;
    out << "cost: " << res.cost << "\n";
    if (res.move) print_move(out, *res.move, "voters", [&](std::size_t t) { return ballot_text(r.ballot(t)); });
    json j = report(cost_json(res.cost), move_json(res.move), "lobbying", nullptr, res.move.has_value(),
                    stats_json(res.stats));
    if (cfg.oracle) {
        with_oracle(out, j,
                    [&] { print_oracle(out, "cost", res.cost.str(), opt_text(oracle::oracle_lobbying(r), "inf"), j); });
    }
    return emit(cfg, out, j, res.move ? kTrue : kFalse);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum moves in societies under Presburger winning conditions"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_flag("--oracle", cfg.oracle, "Also run the brute-force oracle and compare");
        sub->add_flag("--json", cfg.json, "Print a JSON report");
    };
    auto election_opts = [&](CLI::App* sub) {
        sub->add_option("election", cfg.input, "Election file")->required()->check(CLI::ExistingFile);
        sub->add_option("--rule", cfg.rule, "condorcet, dodgson, young or dodgson_prime");
        sub->add_option("--candidate", cfg.candidate, "Designated candidate")->required();
    };
    auto adversarial_opts = [&](CLI::App* sub) {
        sub->add_option("society", cfg.input, "Society file")->required()->check(CLI::ExistingFile);
        sub->add_option("formula", cfg.formula, "Condition over s_0, s_1, ...")->required()->check(CLI::ExistingFile);
        sub->add_option("--B", cfg.budget, "Our budget")->check(CLI::NonNegativeNumber);
        sub->add_option("--Ba", cfg.adversary_budget, "Adversary budget")->check(CLI::NonNegativeNumber);
        sub->add_option("--bound", cfg.bound, "Quantifier box")->check(CLI::PositiveNumber);
    };

    auto* decide = app.add_subcommand("decide", "Decide a bounded sentence");
    decide->add_option("formula", cfg.input, "Formula file")->required()->check(CLI::ExistingFile);
    decide->add_option("--bound", cfg.bound, "Quantifier box [-B,B]")->check(CLI::PositiveNumber);
    common(decide);

    auto* bribery = app.add_subcommand("bribery", "Cheapest swap bribery");
    election_opts(bribery);
    bribery->add_flag("--unique", cfg.unique, "Require a unique winner");
    common(bribery);

    auto* score = app.add_subcommand("score", "Dodgson, Young or Dodgson' score");
    election_opts(score);
    common(score);

    auto* resilient = app.add_subcommand("resilient", "Can every adversary move be answered?");
    adversarial_opts(resilient);
    common(resilient);

    auto* robust = app.add_subcommand("robust", "A move no adversary move can undo");
    adversarial_opts(robust);
    common(robust);

    auto* lobby = app.add_subcommand("lobby", "Cheapest lobbying for an agenda");
    lobby->add_option("referendum", cfg.input, "Referendum file")->required()->check(CLI::ExistingFile);
    common(lobby);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        if (*decide) return cmd_decide(cfg);
        if (*bribery) return cmd_bribery(cfg);
        if (*score) return cmd_score(cfg);
        if (*resilient) return cmd_resilient(cfg);
        if (*robust) return cmd_robust(cfg);
        if (*lobby) return cmd_lobby(cfg);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
