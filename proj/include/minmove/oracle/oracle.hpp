#pragma once

// Brute-force reference implementations. Nothing here calls the solver
// modules or the election-model helpers (ranking, swap distances); the
// only shared pieces are the plain data types and formula evaluation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "minmove/election/election.hpp"
#include "minmove/pa/normal_form.hpp"
#include "minmove/society/society.hpp"

namespace minmove::oracle {

using election::Election;
using election::Order;

enum class OracleRule { kCondorcet, kDodgson, kYoung, kDodgsonPrime };

namespace detail {

inline std::vector<Order> all_orders(std::size_t n) {
    Order o(n);
    std::iota(o.begin(), o.end(), 0);
    std::vector<Order> out;
    do {
        out.push_back(o);
    } while (std::next_permutation(o.begin(), o.end()));
    return out;
}

inline std::vector<Order> voter_list(const Election& e) {
    std::vector<Order> out;
    for (const auto& [order, k] : e.tallies())
        for (Int i = 0; i < k; ++i) out.push_back(order);
    return out;
}

inline std::vector<int> positions(const Order& o) {
    std::vector<int> pos(o.size());
    for (std::size_t i = 0; i < o.size(); ++i) pos[static_cast<std::size_t>(o[i])] = static_cast<int>(i);
    return pos;
}

/// Sum of swap prices over the candidate pairs p and q order differently.
inline Int pair_distance(const Election& e, const Order& p, const Order& q) {
    const auto pp = positions(p), pq = positions(q);
    Int total = 0;
    const int n = static_cast<int>(p.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if ((pp[static_cast<std::size_t>(a)] < pp[static_cast<std::size_t>(b)]) !=
                (pq[static_cast<std::size_t>(a)] < pq[static_cast<std::size_t>(b)]))
                total += e.swap_cost(a, b);
    return total;
}

inline bool strict_condorcet(const std::vector<Order>& voters, int c, std::size_t n) {
    for (int other = 0; other < static_cast<int>(n); ++other) {
        if (other == c) continue;
        Int wins = 0, losses = 0;
        for (const auto& o : voters) {
            const auto pos = positions(o);
            if (pos[static_cast<std::size_t>(c)] < pos[static_cast<std::size_t>(other)]) {
                ++wins;
            } else {
                ++losses;
            }
        }
        if (wins <= losses) return false;
    }
    return true;
}

inline void check_size(const Election& e, std::size_t max_c, Int max_v) {
    if (e.size() > max_c || e.voters() > max_v) throw Error("instance exceeds the oracle size guard");
}

// Cheapest reassignment of voters to orders, priced per voter, after which c
// is a strict Condorcet winner.
inline std::optional<Int> cheapest_reassignment(const std::vector<Order>& voters, std::size_t n, int c,
                                                const std::function<Int(const Order&, const Order&)>& price) {
    const auto orders = all_orders(n);
    std::vector<std::vector<std::pair<Int, std::size_t>>> options(voters.size());
    for (std::size_t v = 0; v < voters.size(); ++v) {
        for (std::size_t k = 0; k < orders.size(); ++k) options[v].emplace_back(price(voters[v], orders[k]), k);
        std::sort(options[v].begin(), options[v].end());
    }
    std::optional<Int> best;
    std::vector<Order> chosen(voters.size());
    std::function<void(std::size_t, Int)> dfs = [&](std::size_t v, Int spent) {
        if (best && spent >= *best) return;
        if (v == voters.size()) {
            if (strict_condorcet(chosen, c, n)) best = spent;
            return;
        }
        for (const auto& [cost, k] : options[v]) {
            if (best && spent + cost >= *best) break;
            chosen[v] = orders[k];
            dfs(v + 1, spent + cost);
        }
    };
    dfs(0, 0);
    return best;
}

}  // namespace detail

/// The strict Condorcet winner by pairwise tallies.
inline std::optional<int> oracle_condorcet_winner(const Election& e) {
    const auto voters = detail::voter_list(e);
    for (int c = 0; c < static_cast<int>(e.size()); ++c)
        if (detail::strict_condorcet(voters, c, e.size())) return c;
    return std::nullopt;
}

/// Fewest adjacent swaps (priced by the election's swap costs) making c a
/// Condorcet winner; nothing if even full reassignment fails.
inline std::optional<Int> oracle_dodgson_score(const Election& e, int c) {
    detail::check_size(e, 4, 5);
    return detail::cheapest_reassignment(detail::voter_list(e), e.size(), c,
                                         [&](const Order& p, const Order& q) { return detail::pair_distance(e, p, q); });
}

/// Fewest voters whose orders change.
inline std::optional<Int> oracle_dodgson_prime_score(const Election& e, int c) {
    detail::check_size(e, 4, 5);
    return detail::cheapest_reassignment(detail::voter_list(e), e.size(), c,
                                         [](const Order& p, const Order& q) { return p == q ? Int{0} : Int{1}; });
}

/// Fewest voters to remove.
inline std::optional<Int> oracle_young_score(const Election& e, int c) {
    detail::check_size(e, 4, 8);
    const auto voters = detail::voter_list(e);
    const std::size_t V = voters.size();
    std::optional<Int> best;
    for (std::uint32_t mask = 0; mask < (1u << V); ++mask) {
        const Int removed = __builtin_popcount(mask);
        if (best && removed >= *best) continue;
        std::vector<Order> kept;
        for (std::size_t v = 0; v < V; ++v)
            if (!(mask & (1u << v))) kept.push_back(voters[v]);
        if (detail::strict_condorcet(kept, c, e.size())) best = removed;
    }
    return best;
}

inline std::optional<Int> oracle_score(const Election& e, int c, OracleRule rule) {
    switch (rule) {
    case OracleRule::kDodgson:
        return oracle_dodgson_score(e, c);
    case OracleRule::kYoung:
        return oracle_young_score(e, c);
    case OracleRule::kDodgsonPrime:
        return oracle_dodgson_prime_score(e, c);
    case OracleRule::kCondorcet:
        break;
    }
    throw Error("the Condorcet rule has no score");
}

/// Whether c wins under the rule: the strict Condorcet winner, or a finite
/// score no larger than every rival's (strictly smaller when `unique`).
inline bool oracle_wins(const Election& e, int c, OracleRule rule, bool unique = false) {
    if (rule == OracleRule::kCondorcet) return oracle_condorcet_winner(e) == std::optional<int>(c);
    const auto mine = oracle_score(e, c, rule);
    if (!mine) return false;
    for (int other = 0; other < static_cast<int>(e.size()); ++other) {
        if (other == c) continue;
        const auto theirs = oracle_score(e, other, rule);
        if (!theirs) continue;
        if (unique ? *theirs <= *mine : *theirs < *mine) return false;
    }
    return true;
}

/// Cheapest reassignment of every voter to any order after which c* wins.
inline std::optional<Int> oracle_swap_bribery(const Election& e, int target, OracleRule rule, bool unique = false) {
    detail::check_size(e, 3, 3);
    const auto voters = detail::voter_list(e);
    const auto orders = detail::all_orders(e.size());
    std::map<std::vector<Order>, bool> memo;
    std::optional<Int> best;
    std::vector<std::size_t> pick(voters.size(), 0);
    while (true) {
        Int price = 0;
        std::vector<Order> chosen;
        for (std::size_t v = 0; v < voters.size(); ++v) {
            chosen.push_back(orders[pick[v]]);
            price += detail::pair_distance(e, voters[v], orders[pick[v]]);
        }
        if (!best || price < *best) {
            std::vector<Order> key = chosen;
            std::sort(key.begin(), key.end());
            auto it = memo.find(key);
            if (it == memo.end()) {
                Election after(e.candidates());
                for (const auto& o : chosen) after.add_voters(o, 1);
                it = memo.emplace(key, oracle_wins(after, target, rule, unique)).first;
            }
            if (it->second) best = price;
        }
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == orders.size()) pick[k++] = 0;
        if (k == pick.size()) break;
    }
    return best;
}

/// Nested-loop truth of a prenex sentence over the box [-B,B], B the
/// larger of the sentence bound and the largest matrix constant.
inline bool oracle_decide(const pa::Formula& sentence, Int bound) {
    if (!pa::free_variables(sentence).empty()) throw Error("oracle_decide: sentence has free variables");
    const pa::Prenex p = pa::split_prenex(sentence);
    const Int B = std::max<Int>(bound, pa::measure(sentence).max_constant);
    std::size_t dims = 0;
    for (const auto& b : p.blocks) dims += b.size();
    if (dims > 6 || std::pow(static_cast<double>(2 * B + 1), static_cast<double>(dims)) > 2e8)
        throw Error("sentence exceeds the oracle size guard");

    std::vector<std::string> vars;
    std::vector<pa::Kind> kinds;
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
        for (const auto& v : p.blocks[b]) {
            vars.push_back(v);
            kinds.push_back(p.quantifiers[b]);
        }
    pa::Assignment a;
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == vars.size()) return pa::eval_qf(p.matrix, a);
        const bool ex = kinds[i] == pa::Kind::kExists;
        for (Int v = -B; v <= B; ++v) {
            a[vars[i]] = v;
            if (go(i + 1) == ex) return ex;
        }
        return !ex;
    };
    return go(0);
}

/// Every move out of s with cost at most `budget`, each entry at most the
/// population (enough to reach every society a move can reach).
inline std::vector<society::Move> oracle_moves(const society::Society& s, const society::MoveCosts& c, Int budget) {
    const std::size_t tau = s.types();
    const Int P = s.population();
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < tau; ++i)
        for (std::size_t j = 0; j < tau; ++j)
            if (i != j && !c.at(i, j).is_infinite()) edges.emplace_back(i, j);
    std::vector<society::Move> out;
    std::vector<Int> flow(edges.size(), 0);
    while (true) {
        Int cost = 0;
        std::vector<Int> after = s.counts;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            cost += c.at(edges[e].first, edges[e].second).value() * flow[e];
            after[edges[e].first] -= flow[e];
            after[edges[e].second] += flow[e];
        }
        if (cost <= budget && std::all_of(after.begin(), after.end(), [](Int v) { return v >= 0; })) {
            society::Move m(tau);
            for (std::size_t e = 0; e < edges.size(); ++e) m.at(edges[e].first, edges[e].second) = flow[e];
            out.push_back(std::move(m));
        }
        std::size_t k = 0;
        while (k < flow.size() && ++flow[k] > P) flow[k++] = 0;
        if (k == flow.size()) break;
    }
    return out;
}

inline society::Society oracle_apply(const society::Society& s, const society::Move& m) {
    std::vector<Int> after = s.counts;
    for (std::size_t i = 0; i < s.types(); ++i)
        for (std::size_t j = 0; j < s.types(); ++j) {
            after[i] -= m.at(i, j);
            after[j] += m.at(i, j);
        }
    return society::Society(std::move(after));
}

inline bool oracle_condition(const pa::Formula& psi, const std::vector<std::string>& vars, const society::Society& s) {
    pa::Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = s.counts[i];
    return pa::eval_qf(psi, a);
}

struct OracleGame {
    society::Society society;
    society::MoveCosts costs;
    Int budget = 0;
    society::MoveCosts adversary_costs;
    Int adversary_budget = 0;
    pa::Formula condition;
    std::vector<std::string> society_vars;
};

/// Two-ply enumeration: every adversary move has an answer.
inline bool oracle_resilient(const OracleGame& g) {
    std::map<std::vector<Int>, bool> answerable;
    for (const auto& ma : oracle_moves(g.society, g.adversary_costs, g.adversary_budget)) {
        const society::Society mid = oracle_apply(g.society, ma);
        auto it = answerable.find(mid.counts);
        if (it == answerable.end()) {
            bool ok = false;
            for (const auto& m : oracle_moves(mid, g.costs, g.budget)) {
                if (oracle_condition(g.condition, g.society_vars, oracle_apply(mid, m))) {
                    ok = true;
                    break;
                }
            }
            it = answerable.emplace(mid.counts, ok).first;
        }
        if (!it->second) return false;
    }
    return true;
}

/// Whether m is an affordable move that no adversary reply can undo.
inline bool oracle_robust_holds(const OracleGame& g, const society::Move& m) {
    for (std::size_t i = 0; i < g.society.types(); ++i)
        for (std::size_t j = 0; j < g.society.types(); ++j)
            if (m.at(i, j) < 0) return false;
    Int cost = 0;
    for (std::size_t i = 0; i < g.society.types(); ++i)
        for (std::size_t j = 0; j < g.society.types(); ++j) {
            if (i == j || m.at(i, j) == 0) continue;
            if (g.costs.at(i, j).is_infinite()) return false;
            cost += g.costs.at(i, j).value() * m.at(i, j);
        }
    if (cost > g.budget) return false;
    std::vector<Int> after = g.society.counts;
    for (std::size_t i = 0; i < g.society.types(); ++i)
        for (std::size_t j = 0; j < g.society.types(); ++j) {
            after[i] -= m.at(i, j);
            after[j] += m.at(i, j);
        }
    if (std::any_of(after.begin(), after.end(), [](Int v) { return v < 0; })) return false;
    const society::Society mid(after);
    for (const auto& ma : oracle_moves(mid, g.adversary_costs, g.adversary_budget))
        if (!oracle_condition(g.condition, g.society_vars, oracle_apply(mid, ma))) return false;
    return true;
}

/// Whether any robust move exists.
inline bool oracle_robust_exists(const OracleGame& g) {
    std::map<std::vector<Int>, bool> seen;
    for (const auto& m : oracle_moves(g.society, g.costs, g.budget)) {
        const auto key = oracle_apply(g.society, m).counts;
        if (seen.count(key)) continue;
        seen[key] = true;
        if (oracle_robust_holds(g, m)) return true;
    }
    return false;
}

/// Fewest answer flips (one voter, one issue each) after which every issue
/// goes the agenda's way by strict majority.
inline std::optional<Int> oracle_lobbying(const election::Referendum& r) {
    std::vector<std::vector<bool>> ballots;
    for (const auto& [b, k] : r.tallies)
        for (Int i = 0; i < k; ++i) ballots.push_back(b);
    const std::size_t issues = r.issues.size();
    const std::size_t bits = ballots.size() * issues;
    if (bits > 20) throw Error("instance exceeds the oracle size guard");
    std::optional<Int> best;
    for (std::uint32_t flips = 0; flips < (1u << bits); ++flips) {
        const Int cost = __builtin_popcount(flips);
        if (best && cost >= *best) continue;
        bool ok = true;
        for (std::size_t k = 0; k < issues && ok; ++k) {
            Int agree = 0, disagree = 0;
            for (std::size_t v = 0; v < ballots.size(); ++v) {
                bool answer = ballots[v][k];
                if (flips & (1u << (v * issues + k))) answer = !answer;
                (answer == r.agenda[k] ? agree : disagree) += 1;
            }
            ok = agree > disagree;
        }
        if (ok) best = cost;
    }
    return best;
}

}  // namespace minmove::oracle
