#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minmove/pa/normal_form.hpp"
#include "minmove/quant/solver.hpp"
#include "minmove/society/society.hpp"

namespace minmove::solver {

struct AdversarialProblem {
    society::Society society;
    society::MoveCosts costs;
    Int budget = 0;
    society::MoveCosts adversary_costs;
    Int adversary_budget = 0;
    /// Quantifier-free over the society variables.
    pa::Formula condition;
    std::vector<std::string> society_vars;
    std::optional<Int> bound;
};

namespace detail {

inline const std::string kOurMove = "#m";
inline const std::string kTheirMove = "#a";

inline std::vector<std::string> adversarial_vars(const AdversarialProblem& p) {
    if (p.society_vars.empty()) return society::society_var_names(p.society.types());
    if (p.society_vars.size() != p.society.types()) throw Error("one society variable per type is required");
    return p.society_vars;
}

inline void check_adversarial(const AdversarialProblem& p) {
    if (p.budget < 0 || p.adversary_budget < 0) throw Error("budgets must be non-negative");
    if (p.costs.types() != p.society.types() || p.adversary_costs.types() != p.society.types())
        throw Error("cost matrix does not match the society");
    if (!society::validate_costs(p.costs) || !society::validate_costs(p.adversary_costs))
        throw Error("move costs violate the triangle inequality");
    if (!pa::is_quantifier_free(p.condition)) throw Error("adversarial condition must be quantifier-free");
    const auto vars = adversarial_vars(p);
    const std::set<std::string> allowed(vars.begin(), vars.end());
    for (const auto& v : pa::free_variables(p.condition))
        if (!allowed.count(v)) throw Error("condition has non-society free variable '" + v + "'");
}

inline pa::Formula condition_at(const AdversarialProblem& p, const society::SocietyExpr& S) {
    const auto vars = adversarial_vars(p);
    std::map<std::string, pa::LinearExpr> bind;
    for (std::size_t i = 0; i < vars.size(); ++i) bind.emplace(vars[i], S[i]);
    return pa::substitute_expr(p.condition, bind);
}

inline Int adversarial_box(const AdversarialProblem& p) {
    if (p.bound) return *p.bound;
    return std::max<Int>(1, p.society.population() + p.budget + p.adversary_budget);
}

}  // namespace detail

/// forall adversary (c_a,B_a)-moves m_a there is a (c,B)-move m answering
/// it: the condition holds at s + change(m_a) + change(m).
inline bool resilient_budget(const AdversarialProblem& p, quant::DecideStats* stats = nullptr) {
    detail::check_adversarial(p);
    const std::size_t tau = p.society.types();
    const auto s = society::constant_society(p.society);
    const auto after_a = society::after_move(s, detail::kTheirMove);
    const auto after_both = society::after_move(after_a, detail::kOurMove);
    pa::Formula guard = society::move_condition(p.adversary_costs, p.adversary_budget, s, detail::kTheirMove,
                                                society::MoveEncoding::kTransport);
    pa::Formula answer = pa::make_and({society::move_condition(p.costs, p.budget, after_a, detail::kOurMove,
                                                               society::MoveEncoding::kTransport),
                                       detail::condition_at(p, after_both)});
    pa::Formula f = pa::make_forall(society::flow_vars(detail::kTheirMove, tau),
                                    pa::make_exists(society::flow_vars(detail::kOurMove, tau),
                                                    pa::implies(std::move(guard), std::move(answer))));
    return quant::decide_sentence(quant::BoundedSentence{std::move(f), detail::adversarial_box(p)}, stats);
}

/// A (c,B)-move m such that every adversary (c_a,B_a)-move applied after it
/// leaves the condition true; the lexicographically least such move.
inline std::optional<society::Move> robust_move(const AdversarialProblem& p, quant::DecideStats* stats = nullptr) {
    detail::check_adversarial(p);
    const std::size_t tau = p.society.types();
    const auto s = society::constant_society(p.society);
    const auto after_m = society::after_move(s, detail::kOurMove);
    const auto after_both = society::after_move(after_m, detail::kTheirMove);
    pa::Formula ours = society::move_condition(p.costs, p.budget, s, detail::kOurMove,
                                               society::MoveEncoding::kTransport);
    pa::Formula guard = society::move_condition(p.adversary_costs, p.adversary_budget, after_m, detail::kTheirMove,
                                                society::MoveEncoding::kTransport);
    pa::Formula f = pa::make_exists(
        society::flow_vars(detail::kOurMove, tau),
        pa::make_forall(society::flow_vars(detail::kTheirMove, tau),
                        pa::make_and({std::move(ours),
                                      pa::implies(std::move(guard), detail::condition_at(p, after_both))})));
    auto w = quant::find_witness(quant::BoundedSentence{std::move(f), detail::adversarial_box(p)}, stats);
    if (!w) return std::nullopt;
    return society::move_from_assignment(*w, detail::kOurMove, tau);
}

}  // namespace minmove::solver
