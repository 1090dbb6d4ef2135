#pragma once

#include <string>
#include <vector>

#include "minmove/election/election.hpp"
#include "minmove/pa/formula.hpp"
#include "minmove/society/society.hpp"

namespace minmove::election {

using society::SocietyExpr;

/// Which candidate a type prefers; latent types prefer nobody.
inline bool prefers(const TypeIndex& t, std::size_t type, int a, int b) {
    if (t.latent && type == t.latent_type()) return false;
    for (int c : t.order(type)) {
        if (c == a) return true;
        if (c == b) return false;
    }
    return false;
}

/// a beats b head to head in the society S.
inline pa::Formula beats(int a, int b, const TypeIndex& t, const SocietyExpr& S) {
    if (a == b) throw Error("beats: candidates must differ");
    if (S.size() != t.types()) throw Error("beats: society has the wrong number of types");
    pa::LinearExpr against;
    for (std::size_t i = 0; i < t.types(); ++i) {
        if (t.latent && i == t.latent_type()) continue;
        if (prefers(t, i, b, a)) {
            against += S[i];
        } else {
            against -= S[i];
        }
    }
    return pa::le(against, -1);
}

inline pa::Formula condorcet(int c, const TypeIndex& t, const SocietyExpr& S) {
    std::vector<pa::Formula> parts;
    for (int other = 0; other < static_cast<int>(t.candidates); ++other)
        if (other != c) parts.push_back(beats(c, other, t, S));
    if (parts.size() == 1) return std::move(parts.front());
    return pa::make_and(std::move(parts));
}

/// build_beats over the society variables s_0..s_{tau-1}.
inline pa::Formula build_beats(int a, int b, const TypeIndex& t) {
    return beats(a, b, t, society::variable_society(t.types()));
}

inline pa::Formula build_condorcet(int c, const TypeIndex& t) {
    return condorcet(c, t, society::variable_society(t.types()));
}

enum class ScoreRule { kDodgson, kYoung, kDodgsonPrime };

inline TypeIndex score_types(const Election& e, ScoreRule rule) { return TypeIndex{e.size(), rule == ScoreRule::kYoung}; }

inline society::MoveCosts score_costs(const Election& e, ScoreRule rule) {
    const TypeIndex t = score_types(e, rule);
    switch (rule) {
    case ScoreRule::kDodgson:
        return swap_cost_vector(e, t);
    case ScoreRule::kYoung:
        return deletion_cost_vector(t);
    case ScoreRule::kDodgsonPrime:
        return unit_cost_vector(t);
    }
    return {};
}

/// Largest score worth checking: |C|^2 |V| for the swap rules, |V| for Young.
inline Int score_grid_max(const Election& e, ScoreRule rule) {
    const Int n = static_cast<Int>(e.size());
    return rule == ScoreRule::kYoung ? e.voters() : n * n * e.voters();
}

struct ConditionNames {
    std::string move = "m";
    std::string rival_move = "r";
};

/// c* wins with score d at the society S: some d-move makes c* a Condorcet
/// winner and, for every (d-1)-move (d-move when `unique`), no rival
/// becomes one. For d = 0 in co-winner mode the rival block is dropped.
inline pa::Formula score_condition(const Election& e, ScoreRule rule, int target, Int d, const SocietyExpr& S,
                                   bool unique = false, const ConditionNames& names = {},
                                   society::MoveEncoding encoding = society::MoveEncoding::kTransport) {
    if (d < 0) throw Error("score bound must be non-negative");
    if (target < 0 || static_cast<std::size_t>(target) >= e.size()) throw Error("unknown candidate index");
    const TypeIndex t = score_types(e, rule);
    const society::MoveCosts c = score_costs(e, rule);
    const std::size_t tau = t.types();

    pa::Formula ours = pa::make_and({society::move_condition(c, d, S, names.move, encoding),
                                     condorcet(target, t, society::after_move(S, names.move))});
    const Int rival_budget = unique ? d : d - 1;
    if (rival_budget < 0) return pa::make_exists(society::flow_vars(names.move, tau), std::move(ours));

    std::vector<pa::Formula> nobody;
    const SocietyExpr rival_society = society::after_move(S, names.rival_move);
    for (int other = 0; other < static_cast<int>(e.size()); ++other)
        if (other != target) nobody.push_back(pa::make_not(condorcet(other, t, rival_society)));
    pa::Formula guard = society::move_condition(c, rival_budget, S, names.rival_move, encoding);
    pa::Formula theirs = pa::implies(std::move(guard), pa::make_and(std::move(nobody)));
    return pa::make_exists(society::flow_vars(names.move, tau),
                           pa::make_forall(society::flow_vars(names.rival_move, tau),
                                           pa::make_and({std::move(ours), std::move(theirs)})));
}

/// Winning conditions over the society variables s_0..s_{tau-1}.
inline pa::Formula build_dodgson_condition(const Election& e, int target, Int d, bool unique = false) {
    const TypeIndex t = score_types(e, ScoreRule::kDodgson);
    return score_condition(e, ScoreRule::kDodgson, target, d, society::variable_society(t.types()), unique);
}

inline pa::Formula build_young_condition(const Election& e, int target, Int d, bool unique = false) {
    const TypeIndex t = score_types(e, ScoreRule::kYoung);
    return score_condition(e, ScoreRule::kYoung, target, d, society::variable_society(t.types()), unique);
}

inline pa::Formula build_dodgson_prime_condition(const Election& e, int target, Int d, bool unique = false) {
    const TypeIndex t = score_types(e, ScoreRule::kDodgsonPrime);
    return score_condition(e, ScoreRule::kDodgsonPrime, target, d, society::variable_society(t.types()), unique);
}

/// Every issue is decided the agenda's way by strict majority.
inline pa::Formula lobbying_condition(const Referendum& r, const SocietyExpr& S) {
    if (r.agenda.size() != r.issues.size()) throw Error("agenda must answer every issue");
    std::vector<pa::Formula> parts;
    for (std::size_t k = 0; k < r.issues.size(); ++k) {
        pa::LinearExpr against;
        for (std::size_t type = 0; type < r.types(); ++type) {
            if (r.ballot(type)[k] == r.agenda[k]) {
                against -= S[type];
            } else {
                against += S[type];
            }
        }
        parts.push_back(pa::le(against, -1));
    }
    if (parts.size() == 1) return std::move(parts.front());
    return pa::make_and(std::move(parts));
}

inline pa::Formula build_lobbying_condition(const Referendum& r) {
    return lobbying_condition(r, society::variable_society(r.types()));
}

}  // namespace minmove::election
