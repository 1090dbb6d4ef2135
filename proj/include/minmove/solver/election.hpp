#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minmove/election/conditions.hpp"
#include "minmove/election/election.hpp"
#include "minmove/quant/solver.hpp"
#include "minmove/solver/minmove.hpp"

namespace minmove::solver {

using election::Election;
using election::ScoreRule;

enum class Rule { kCondorcet, kDodgson, kYoung, kDodgsonPrime };

inline std::string rule_name(Rule r) {
    switch (r) {
    case Rule::kCondorcet:
        return "condorcet";
    case Rule::kDodgson:
        return "dodgson";
    case Rule::kYoung:
        return "young";
    case Rule::kDodgsonPrime:
        return "dodgson_prime";
    }
    return "";
}

inline Rule parse_rule(const std::string& name) {
    if (name == "condorcet") return Rule::kCondorcet;
    if (name == "dodgson") return Rule::kDodgson;
    if (name == "young") return Rule::kYoung;
    if (name == "dodgson_prime") return Rule::kDodgsonPrime;
    throw Error("unknown rule '" + name + "'");
}

inline ScoreRule score_rule(Rule r) {
    switch (r) {
    case Rule::kDodgson:
        return ScoreRule::kDodgson;
    case Rule::kYoung:
        return ScoreRule::kYoung;
    case Rule::kDodgsonPrime:
        return ScoreRule::kDodgsonPrime;
    case Rule::kCondorcet:
        break;
    }
    throw Error("the Condorcet rule has no score");
}

/// Least d such that some d-move (under the rule's costs) makes the
/// candidate a Condorcet winner; nothing when no d up to the grid bound does.
inline std::optional<Int> rule_score(const Election& e, int candidate, ScoreRule rule,
                                     quant::DecideStats* stats = nullptr) {
    if (candidate < 0 || static_cast<std::size_t>(candidate) >= e.size()) throw Error("unknown candidate index");
    const auto [s, t] = election::election_to_society(e, rule == ScoreRule::kYoung);
    const auto c = election::score_costs(e, rule);
    const Int box = std::max<Int>(1, s.population() + election::score_grid_max(e, rule));
    auto reachable = [&](Int d) {
        pa::Formula f = pa::make_and(
            {society::build_move_constraints(c, d, s, "m", society::MoveEncoding::kTransport),
             election::condorcet(candidate, t, society::after_move(society::constant_society(s), "m"))});
        f = pa::make_exists(society::flow_vars("m", t.types()), std::move(f));
        return quant::decide_sentence(quant::BoundedSentence{std::move(f), box}, stats);
    };
    Int lo = 0, hi = election::score_grid_max(e, rule);
    if (!reachable(hi)) return std::nullopt;
    while (lo < hi) {
        const Int mid = lo + (hi - lo) / 2;
        if (reachable(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return hi;
}

inline std::optional<Int> dodgson_score(const Election& e, int candidate, quant::DecideStats* stats = nullptr) {
    return rule_score(e, candidate, ScoreRule::kDodgson, stats);
}

inline std::optional<Int> young_score(const Election& e, int candidate, quant::DecideStats* stats = nullptr) {
    return rule_score(e, candidate, ScoreRule::kYoung, stats);
}

inline std::optional<Int> dodgson_prime_score(const Election& e, int candidate,
                                              quant::DecideStats* stats = nullptr) {
    return rule_score(e, candidate, ScoreRule::kDodgsonPrime, stats);
}

struct BriberyOptions {
    bool unique = false;
};

struct BriberyResult {
    SolveResult solve;
    election::TypeIndex types;
    Rule rule = Rule::kCondorcet;
    /// Score of the winner after the bribe (the index d of the satisfied
    /// condition); empty for the Condorcet rule.
    std::optional<Int> d_witness;
};

/// Prices of bribing voters into other orders: swap distance between
/// active types, +inf into or out of the latent type.
inline society::MoveCosts bribery_costs(const Election& e, const election::TypeIndex& t) {
    const election::TypeIndex active{t.candidates, false};
    const society::MoveCosts swap = election::swap_cost_vector(e, active);
    society::MoveCosts c(t.types(), society::Cost::infinity());
    for (std::size_t i = 0; i < active.types(); ++i)
        for (std::size_t j = 0; j < active.types(); ++j) c.at(i, j) = swap.at(i, j);
    return c;
}

/// Cheapest swap bribery making `target` win under `rule`.
inline BriberyResult swap_bribery(const Election& e, int target, Rule rule, BriberyOptions opts = {}) {
    if (target < 0 || static_cast<std::size_t>(target) >= e.size()) throw Error("unknown candidate index");
    BriberyResult out;
    out.rule = rule;
    const bool latent = rule == Rule::kYoung;
    const auto [s, t] = election::election_to_society(e, latent);
    out.types = t;

    MinMoveProblem p;
    p.society = s;
    p.costs = bribery_costs(e, t);
    const auto S = society::variable_society(t.types());
    if (rule == Rule::kCondorcet) {
        p.condition = {election::condorcet(target, t, S)};
        out.solve = solve_min_move_qf(p);
        return out;
    }
    const ScoreRule sr = score_rule(rule);
    const Int grid = election::score_grid_max(e, sr);
    for (Int d = 0; d <= grid; ++d)
        p.condition.push_back(election::score_condition(e, sr, target, d, S, opts.unique));
    p.bound = std::max<Int>(1, s.population() + std::max(grid, p.society.population() * p.costs.max_finite()));
    out.solve = solve_min_move(p);
    if (out.solve.disjunct) out.d_witness = static_cast<Int>(*out.solve.disjunct);
    return out;
}

/// Cheapest answer changes (priced by Hamming distance) after which every
/// issue goes the agenda's way.
inline SolveResult lobby(const election::Referendum& r) {
    MinMoveProblem p;
    p.society = r.to_society();
    p.costs = election::hamming_cost_vector(r);
    p.condition = {election::build_lobbying_condition(r)};
    return solve_min_move_qf(p);
}

}  // namespace minmove::solver
