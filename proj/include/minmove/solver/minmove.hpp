#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "minmove/ilp/solver.hpp"
#include "minmove/pa/normal_form.hpp"
#include "minmove/quant/solver.hpp"
#include "minmove/society/society.hpp"

namespace minmove::solver {

using society::Cost;
using society::Move;
using society::MoveCosts;
using society::Society;

struct MinMoveProblem {
    Society society;
    MoveCosts costs;
    /// Disjuncts of the winning condition; free variables are society variables.
    std::vector<pa::Formula> condition;
    /// Budget cap; defaults to population times the largest finite cost.
    std::optional<Int> max_budget;
    /// Names of the society variables, one per type; defaults to s_0, s_1, ...
    std::vector<std::string> society_vars;
    /// Quantifier box; defaults to population plus the budget cap.
    std::optional<Int> bound;
};

struct SolveStats {
    std::uint64_t decisions = 0;
    std::uint64_t ilp_calls = 0;
    std::uint64_t refinements = 0;
    std::uint64_t nodes = 0;
    double seconds = 0;

    void add(const quant::DecideStats& s) {
        decisions += s.decisions;
        ilp_calls += s.ilp_calls;
        refinements += s.refinements;
        nodes += s.nodes;
    }
};

struct SolveResult {
    std::optional<Move> move;
    Cost cost = Cost::infinity();
    /// Index of the disjunct the move satisfies.
    std::optional<std::size_t> disjunct;
    /// Cheapest budget found per disjunct; empty where none was found below
    /// the running optimum.
    std::vector<std::optional<Int>> budgets;
    SolveStats stats;
};

/// Worker cap from MINMOVE_THREADS (default 1).
inline unsigned worker_count() {
    if (const char* env = std::getenv("MINMOVE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

namespace detail {

inline std::vector<std::string> society_vars_of(const MinMoveProblem& p) {
    if (!p.society_vars.empty()) {
        if (p.society_vars.size() != p.society.types()) throw Error("one society variable per type is required");
        return p.society_vars;
    }
    return society::society_var_names(p.society.types());
}

inline void check_problem(const MinMoveProblem& p, const std::vector<std::string>& vars) {
    if (p.costs.types() != p.society.types()) throw Error("cost matrix does not match the society");
    std::array<std::size_t, 3> w{};
    if (!society::validate_costs(p.costs, &w))
        throw Error("move costs violate the triangle inequality at (" + std::to_string(w[0]) + "," +
                    std::to_string(w[1]) + "," + std::to_string(w[2]) + ")");
    if (p.max_budget && *p.max_budget < 0) throw Error("budget cap must be non-negative");
    const std::set<std::string> allowed(vars.begin(), vars.end());
    for (const auto& f : p.condition) {
        for (const auto& v : pa::free_variables(f))
            if (!allowed.count(v)) throw Error("condition has non-society free variable '" + v + "'");
        pa::split_prenex(f);
    }
}

inline Int budget_cap(const MinMoveProblem& p) {
    return p.max_budget ? *p.max_budget : p.society.population() * p.costs.max_finite();
}

/// Society variables replaced by their values after the symbolic move `prefix`.
inline std::map<std::string, pa::LinearExpr> after_bindings(const Society& s, const std::vector<std::string>& vars,
                                                            const std::string& prefix) {
    const auto after = society::after_move(society::constant_society(s), prefix);
    std::map<std::string, pa::LinearExpr> out;
    for (std::size_t i = 0; i < vars.size(); ++i) out.emplace(vars[i], after[i]);
    return out;
}

inline const std::string kMovePrefix = "#b";

/// exists b: b is a (c,k)-move out of s and psi holds at s + change(b).
inline pa::Formula move_sentence(const MinMoveProblem& p, const std::vector<std::string>& vars, const pa::Formula& psi,
                                 Int k) {
    const pa::Prenex pre = pa::split_prenex(psi);
    pa::Formula f = pa::make_and({society::build_move_constraints(p.costs, k, p.society, kMovePrefix,
                                                                  society::MoveEncoding::kTransport),
                                  pa::substitute_expr(pre.matrix, after_bindings(p.society, vars, kMovePrefix))});
    for (std::size_t b = pre.blocks.size(); b-- > 0;)
        f = pre.quantifiers[b] == pa::Kind::kExists ? pa::make_exists(pre.blocks[b], std::move(f))
                                                    : pa::make_forall(pre.blocks[b], std::move(f));
    return pa::make_exists(society::flow_vars(kMovePrefix, p.society.types()), std::move(f));
}

inline Int box_of(const MinMoveProblem& p, Int cap) {
    return p.bound ? *p.bound : std::max<Int>(1, p.society.population() + cap);
}

/// psi evaluated at a concrete society.
inline bool holds_at(const pa::Formula& psi, const std::vector<std::string>& vars, const Society& s, Int box,
                     quant::DecideStats* stats) {
    pa::Assignment values;
    for (std::size_t i = 0; i < vars.size(); ++i) values[vars[i]] = s.counts[i];
    const pa::Formula closed = pa::substitute(psi, values);
    if (pa::is_quantifier_free(closed)) return pa::eval_qf(closed, {});
    return quant::decide_sentence(quant::BoundedSentence{closed, box}, stats);
}

inline void verify(const MinMoveProblem& p, const std::vector<std::string>& vars, const pa::Formula& psi,
                   const Move& m, Int cost, Int box, quant::DecideStats* stats) {
    if (!society::is_feasible(p.society, society::change_of(m))) throw Error("internal: witness move is infeasible");
    if (society::move_cost(p.costs, m) > Cost(cost)) throw Error("internal: witness move exceeds its cost");
    if (!holds_at(psi, vars, society::apply(p.society, m), box, stats))
        throw Error("internal: witness move does not satisfy the condition");
}

// Cheapest budget <= cap for one disjunct, by binary search on k. Each true
// answer comes with a move whose actual cost tightens the upper end.
inline std::optional<Int> cheapest_budget(const MinMoveProblem& p, const std::vector<std::string>& vars,
                                          const pa::Formula& psi, Int cap, Int box, quant::DecideStats& st) {
    if (cap < 0) return std::nullopt;
    auto probe = [&](Int k) -> std::optional<Int> {
        quant::Decision d = quant::decide(quant::BoundedSentence{move_sentence(p, vars, psi, k), box}, &st);
        if (!d.truth) return std::nullopt;
        const Move m = society::move_from_assignment(*d.leading, kMovePrefix, p.society.types());
        return society::move_cost(p.costs, m).value();
    };
    auto top = probe(cap);
    if (!top) return std::nullopt;
    Int lo = 0, hi = *top;
    while (lo < hi) {
        const Int mid = lo + (hi - lo) / 2;
        if (auto got = probe(mid)) {
            hi = *got;
        } else {
            lo = mid + 1;
        }
    }
    return hi;
}

}  // namespace detail

/// Minimum-cost move after which some disjunct of the condition holds.
/// Every disjunct gets a binary search over the budget, capped below the
/// best cost found so far; the witness is the lexicographically least
/// optimal move for the first optimal disjunct, re-verified before return.
inline SolveResult solve_min_move(const MinMoveProblem& p) {
    const auto start = std::chrono::steady_clock::now();
    const auto vars = detail::society_vars_of(p);
    detail::check_problem(p, vars);
    const Int cap = detail::budget_cap(p);
    const Int box = detail::box_of(p, cap);

    SolveResult result;
    result.budgets.assign(p.condition.size(), std::nullopt);
    quant::DecideStats st;

    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(p.condition.size()));
    if (workers <= 1) {
        Int best = cap + 1;
        for (std::size_t i = 0; i < p.condition.size(); ++i) {
            auto k = detail::cheapest_budget(p, vars, p.condition[i], best - 1, box, st);
            result.budgets[i] = k;
            if (k) best = *k;
        }
    } else {
        std::atomic<Int> best{cap};
        std::atomic<std::size_t> next{0};
        std::mutex lock;
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                quant::DecideStats local;
                for (std::size_t i = next++; i < p.condition.size(); i = next++) {
                    auto k = detail::cheapest_budget(p, vars, p.condition[i], best.load(), box, local);
                    std::lock_guard<std::mutex> guard(lock);
                    result.budgets[i] = k;
                    if (k && *k < best.load()) best = *k;
                }
                std::lock_guard<std::mutex> guard(lock);
                st.decisions += local.decisions;
                st.ilp_calls += local.ilp_calls;
                st.refinements += local.refinements;
                st.nodes += local.nodes;
            });
        }
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < result.budgets.size(); ++i) {
        if (!result.budgets[i]) continue;
        if (!result.disjunct || *result.budgets[i] < result.cost.value()) {
            result.disjunct = i;
            result.cost = Cost(*result.budgets[i]);
        }
    }
    if (result.disjunct) {
        const std::size_t i = *result.disjunct;
        const Int k = result.cost.value();
        auto w = quant::find_witness(quant::BoundedSentence{detail::move_sentence(p, vars, p.condition[i], k), box}, &st);
        if (!w) throw Error("internal: optimal budget has no witness");
        result.move = society::move_from_assignment(*w, detail::kMovePrefix, p.society.types());
        detail::verify(p, vars, p.condition[i], *result.move, k, box, &st);
    }
    result.stats.add(st);
    result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

/// Types grouped by identical constraint columns, with per-origin costs to
/// each group (cheapest member) and the member attaining it.
struct TypeReduction {
    std::vector<std::vector<std::size_t>> classes;
    std::vector<std::size_t> class_of;
    /// One column (variable) per class.
    ilp::LinearSystem reduced;
    /// costs[i][k]: cheapest move from type i into class k.
    std::vector<std::vector<Cost>> costs;
    /// target[i][k]: the member of class k attaining costs[i][k], lowest index on ties.
    std::vector<std::vector<std::size_t>> target;
};

/// `sys` has one variable per type, in type order.
inline TypeReduction reduce_types(const ilp::LinearSystem& sys, const MoveCosts& c) {
    const std::size_t tau = sys.num_vars();
    if (c.types() != tau) throw Error("reduce_types: cost matrix does not match the system");
    std::vector<std::vector<Int>> column(tau, std::vector<Int>(sys.num_rows(), 0));
    for (std::size_t r = 0; r < sys.num_rows(); ++r)
        for (const auto& [j, a] : sys.rows()[r].terms) column[static_cast<std::size_t>(j)][r] = a;

    TypeReduction out;
    out.class_of.assign(tau, 0);
    std::map<std::vector<Int>, std::size_t> seen;
    for (std::size_t j = 0; j < tau; ++j) {
        auto [it, fresh] = seen.emplace(column[j], out.classes.size());
        if (fresh) out.classes.emplace_back();
        out.classes[it->second].push_back(j);
        out.class_of[j] = it->second;
    }

    std::vector<std::string> names;
    for (std::size_t k = 0; k < out.classes.size(); ++k) names.push_back("class" + std::to_string(k));
    out.reduced = ilp::LinearSystem(names);
    for (std::size_t r = 0; r < sys.num_rows(); ++r) {
        std::vector<Int> dense(out.classes.size());
        for (std::size_t k = 0; k < out.classes.size(); ++k) dense[k] = column[out.classes[k].front()][r];
        out.reduced.add_row(ilp::make_row(dense, sys.rows()[r].bound, sys.rows()[r].sense));
    }

    out.costs.assign(tau, std::vector<Cost>(out.classes.size(), Cost::infinity()));
    out.target.assign(tau, std::vector<std::size_t>(out.classes.size(), 0));
    for (std::size_t i = 0; i < tau; ++i) {
        for (std::size_t k = 0; k < out.classes.size(); ++k) {
            out.target[i][k] = out.classes[k].front();
            for (std::size_t j : out.classes[k]) {
                if (c.at(i, j) < out.costs[i][k]) {
                    out.costs[i][k] = c.at(i, j);
                    out.target[i][k] = j;
                }
            }
        }
    }
    return out;
}

namespace detail {

struct QfCandidate {
    Int cost = 0;
    Move move;
};

// Assignment ILP for one conjunctive system: x[i][k] people of type i sent
// to class k.
inline std::optional<QfCandidate> solve_reduced(const Society& s, const TypeReduction& red, SolveStats& stats) {
    const std::size_t tau = s.types();
    const std::size_t classes = red.classes.size();
    ilp::LinearSystem ilp;
    std::vector<std::vector<int>> var(tau, std::vector<int>(classes, -1));
    std::map<std::string, Int> objective;
    for (std::size_t i = 0; i < tau; ++i) {
        if (s.counts[i] == 0) continue;
        for (std::size_t k = 0; k < classes; ++k) {
            if (red.costs[i][k].is_infinite()) continue;
            const std::string name = "x_" + std::to_string(i) + "_" + std::to_string(k);
            var[i][k] = ilp.add_var(name, 0, s.counts[i]);
            if (red.costs[i][k].value() != 0) objective[name] = red.costs[i][k].value();
        }
    }
    for (std::size_t i = 0; i < tau; ++i) {
        if (s.counts[i] == 0) continue;
        ilp::Row row;
        row.sense = ilp::Sense::kEqual;
        row.bound = s.counts[i];
        for (std::size_t k = 0; k < classes; ++k)
            if (var[i][k] >= 0) row.terms.emplace_back(var[i][k], 1);
        std::sort(row.terms.begin(), row.terms.end());
        ilp.add_row(std::move(row));
    }
    for (const auto& rrow : red.reduced.rows()) {
        std::vector<Int> dense(ilp.num_vars(), 0);
        for (const auto& [k, a] : rrow.terms)
            for (std::size_t i = 0; i < tau; ++i)
                if (var[i][static_cast<std::size_t>(k)] >= 0) dense[static_cast<std::size_t>(var[i][static_cast<std::size_t>(k)])] += a;
        ilp.add_row(ilp::make_row(dense, rrow.bound, rrow.sense));
    }
    ilp::SearchStats st;
    auto sol = ilp::solve_min(objective, ilp, &st);
    ++stats.ilp_calls;
    stats.nodes += st.nodes;
    if (!sol) return std::nullopt;
    Move m(tau);
    for (std::size_t i = 0; i < tau; ++i) {
        for (std::size_t k = 0; k < classes; ++k) {
            if (var[i][k] < 0) continue;
            const Int x = sol->point.at(ilp.vars()[static_cast<std::size_t>(var[i][k])]);
            const std::size_t j = red.target[i][k];
            if (x > 0 && j != i) m.at(i, j) += x;
        }
    }
    return QfCandidate{*sol->objective, std::move(m)};
}

}  // namespace detail

/// Quantifier-free conditions: every DNF disjunct becomes one assignment
/// ILP over reduced types; the cheapest wins.
inline SolveResult solve_min_move_qf(const MinMoveProblem& p) {
    const auto start = std::chrono::steady_clock::now();
    const auto vars = detail::society_vars_of(p);
    detail::check_problem(p, vars);
    SolveResult result;
    result.budgets.assign(p.condition.size(), std::nullopt);
    bool found = false;
    detail::QfCandidate best;
    for (std::size_t i = 0; i < p.condition.size(); ++i) {
        if (!pa::is_quantifier_free(p.condition[i])) throw Error("solve_min_move_qf: condition has quantifiers");
        for (const auto& conj : pa::dnf_conjunctions(p.condition[i])) {
            const ilp::LinearSystem sys = pa::conjunction_to_system(conj, vars);
            const TypeReduction red = reduce_types(sys, p.costs);
            auto cand = detail::solve_reduced(p.society, red, result.stats);
            if (!cand) continue;
            if (!result.budgets[i] || cand->cost < *result.budgets[i]) result.budgets[i] = cand->cost;
            if (!found || cand->cost < best.cost) {
                found = true;
                best = std::move(*cand);
                result.disjunct = i;
            }
        }
    }
    if (found && p.max_budget && best.cost > *p.max_budget) {
        found = false;
        result.disjunct.reset();
    }
    if (found) {
        quant::DecideStats st;
        detail::verify(p, vars, p.condition[*result.disjunct], best.move, best.cost, 1, &st);
        result.move = best.move;
        result.cost = Cost(best.cost);
    }
    result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace minmove::solver
