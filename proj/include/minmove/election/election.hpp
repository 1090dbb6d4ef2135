#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "minmove/error.hpp"
#include "minmove/society/society.hpp"

namespace minmove::election {

/// Preference order as candidate indices, most preferred first.
using Order = std::vector<int>;

/// Candidates, voters grouped by preference order, and a swap price per
/// unordered candidate pair (the same for every voter).
class Election {
public:
    Election() = default;
    explicit Election(std::vector<std::string> candidates) : candidates_(std::move(candidates)) {
        for (std::size_t i = 0; i < candidates_.size(); ++i)
            for (std::size_t j = i + 1; j < candidates_.size(); ++j)
                if (candidates_[i] == candidates_[j]) throw Error("duplicate candidate '" + candidates_[i] + "'");
    }

    const std::vector<std::string>& candidates() const noexcept { return candidates_; }
    std::size_t size() const noexcept { return candidates_.size(); }
    const std::map<Order, Int>& tallies() const noexcept { return tallies_; }

    int index_of(const std::string& name) const {
        auto it = std::find(candidates_.begin(), candidates_.end(), name);
        if (it == candidates_.end()) throw Error("unknown candidate '" + name + "'");
        return static_cast<int>(it - candidates_.begin());
    }

    void add_voters(const Order& order, Int count) {
        check_order(order);
        if (count < 1) throw Error("voter count must be positive");
        tallies_[order] += count;
    }

    void add_voters(const std::vector<std::string>& order, Int count) {
        Order idx;
        for (const auto& name : order) idx.push_back(index_of(name));
        add_voters(idx, count);
    }

    Int voters() const {
        Int n = 0;
        for (const auto& [o, k] : tallies_) n += k;
        return n;
    }

    /// Price of swapping candidates a and b; 1 unless set.
    Int swap_cost(int a, int b) const {
        auto it = swap_cost_.find(key(a, b));
        return it == swap_cost_.end() ? 1 : it->second;
    }

    void set_swap_cost(int a, int b, Int cost) {
        if (a == b) throw Error("swap cost needs two distinct candidates");
        if (cost <= 0) throw Error("swap cost must be positive");
        swap_cost_[key(a, b)] = cost;
    }

    bool unit_swap_costs() const {
        return std::all_of(swap_cost_.begin(), swap_cost_.end(), [](const auto& kv) { return kv.second == 1; });
    }

    void check_order(const Order& order) const {
        if (order.size() != candidates_.size()) throw Error("preference order must rank every candidate once");
        std::vector<char> seen(candidates_.size(), 0);
        for (int c : order) {
            if (c < 0 || static_cast<std::size_t>(c) >= candidates_.size() || seen[static_cast<std::size_t>(c)])
                throw Error("preference order must rank every candidate once");
            seen[static_cast<std::size_t>(c)] = 1;
        }
    }

private:
    static std::pair<int, int> key(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

    std::vector<std::string> candidates_;
    std::map<Order, Int> tallies_;
    std::map<std::pair<int, int>, Int> swap_cost_;
};

inline Int factorial(std::size_t n) {
    Int f = 1;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<Int>(k);
    return f;
}

/// Lexicographic rank of a permutation of 0..n-1 (Lehmer code).
inline Int rank_order(const Order& order) {
    const std::size_t n = order.size();
    std::vector<char> seen(n, 0);
    Int rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int c = order[i];
        if (c < 0 || static_cast<std::size_t>(c) >= n || seen[static_cast<std::size_t>(c)])
            throw Error("rank_order: not a permutation");
        Int smaller = 0;
        for (int k = 0; k < c; ++k)
            if (!seen[static_cast<std::size_t>(k)]) ++smaller;
        seen[static_cast<std::size_t>(c)] = 1;
        rank += smaller * factorial(n - 1 - i);
    }
    return rank;
}

inline Order unrank_order(Int rank, std::size_t n) {
    if (rank < 0 || rank >= factorial(n)) throw Error("unrank_order: index out of range");
    std::vector<int> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<int>(i);
    Order out;
    for (std::size_t i = 0; i < n; ++i) {
        const Int f = factorial(n - 1 - i);
        const auto pick = static_cast<std::size_t>(rank / f);
        rank %= f;
        out.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return out;
}

/// Name-based variants over a candidate list.
inline Int rank_order(const std::vector<std::string>& order, const std::vector<std::string>& candidates) {
    Order idx;
    for (const auto& name : order) {
        auto it = std::find(candidates.begin(), candidates.end(), name);
        if (it == candidates.end()) throw Error("rank_order: unknown candidate '" + name + "'");
        idx.push_back(static_cast<int>(it - candidates.begin()));
    }
    if (idx.size() != candidates.size()) throw Error("rank_order: not a permutation");
    return rank_order(idx);
}

inline std::vector<std::string> unrank_order(Int rank, const std::vector<std::string>& candidates) {
    std::vector<std::string> out;
    for (int c : unrank_order(rank, candidates.size())) out.push_back(candidates[static_cast<std::size_t>(c)]);
    return out;
}

/// Types of an election society: the |C|! orders by lexicographic rank,
/// optionally followed by one latent type for removed voters.
struct TypeIndex {
    std::size_t candidates = 0;
    bool latent = false;

    std::size_t active_types() const { return static_cast<std::size_t>(factorial(candidates)); }
    std::size_t types() const { return active_types() + (latent ? 1 : 0); }
    std::size_t latent_type() const {
        if (!latent) throw Error("type index has no latent type");
        return active_types();
    }
    Order order(std::size_t type) const { return unrank_order(static_cast<Int>(type), candidates); }
    std::size_t type_of(const Order& order) const { return static_cast<std::size_t>(rank_order(order)); }

    bool operator==(const TypeIndex&) const = default;
};

inline std::pair<society::Society, TypeIndex> election_to_society(const Election& e, bool with_latent = false) {
    TypeIndex t{e.size(), with_latent};
    std::vector<Int> counts(t.types(), 0);
    for (const auto& [order, k] : e.tallies()) counts[t.type_of(order)] += k;
    return {society::Society(std::move(counts)), t};
}

/// Number of candidate pairs ordered differently by p and q.
inline Int kendall_tau(const Order& p, const Order& q) {
    if (p.size() != q.size()) throw Error("kendall_tau: orders over different candidate sets");
    const std::size_t n = p.size();
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (q[i] < 0 || static_cast<std::size_t>(q[i]) >= n) throw Error("kendall_tau: mismatched candidate sets");
        pos[static_cast<std::size_t>(q[i])] = i;
    }
    Int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (pos[static_cast<std::size_t>(p[i])] > pos[static_cast<std::size_t>(p[j])]) ++inv;
    return inv;
}

/// c(i,j): cheapest sequence of adjacent swaps turning order i into order
/// j, by Dijkstra over the adjacent-transposition graph.
inline society::MoveCosts swap_cost_vector(const Election& e, const TypeIndex& t) {
    const std::size_t n = e.size();
    if (t.candidates != n) throw Error("swap_cost_vector: type index does not match the election");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (e.swap_cost(static_cast<int>(a), static_cast<int>(b)) <= 0) throw Error("swap cost must be positive");
    const std::size_t active = t.active_types();
    society::MoveCosts c(t.types(), society::Cost::infinity());
    std::vector<Order> orders;
    for (std::size_t i = 0; i < active; ++i) orders.push_back(t.order(i));
    for (std::size_t src = 0; src < active; ++src) {
        std::vector<Int> dist(active, -1);
        using Item = std::pair<Int, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        heap.emplace(0, src);
        while (!heap.empty()) {
            auto [dcur, u] = heap.top();
            heap.pop();
            if (dist[u] >= 0) continue;
            dist[u] = dcur;
            Order o = orders[u];
            for (std::size_t k = 0; k + 1 < n; ++k) {
                const Int w = e.swap_cost(o[k], o[k + 1]);
                std::swap(o[k], o[k + 1]);
                const std::size_t v = t.type_of(o);
                if (dist[v] < 0) heap.emplace(dcur + w, v);
                std::swap(o[k], o[k + 1]);
            }
        }
        for (std::size_t dst = 0; dst < active; ++dst) c.at(src, dst) = society::Cost(dist[dst]);
    }
    return c;
}

/// Cost 1 from every active type to the latent type, +inf elsewhere off
/// the diagonal.
inline society::MoveCosts deletion_cost_vector(const TypeIndex& t) {
    const std::size_t latent = t.latent_type();
    society::MoveCosts c(t.types(), society::Cost::infinity());
    for (std::size_t i = 0; i < latent; ++i) c.at(i, latent) = society::Cost(1);
    return c;
}

/// All-1 off-diagonal costs over the active types.
inline society::MoveCosts unit_cost_vector(const TypeIndex& t) {
    society::MoveCosts c(t.types(), society::Cost(1));
    if (t.latent)
        for (std::size_t i = 0; i < t.types(); ++i)
            if (i != t.latent_type()) {
                c.at(i, t.latent_type()) = society::Cost::infinity();
                c.at(t.latent_type(), i) = society::Cost::infinity();
            }
    return c;
}

/// Yes/no ballots over issues; ballot bit k is issue k's answer.
struct Referendum {
    std::vector<std::string> issues;
    std::map<std::vector<bool>, Int> tallies;
    std::vector<bool> agenda;

    std::size_t types() const { return std::size_t{1} << issues.size(); }

    /// Ballot type index: issue 0 is the most significant bit, yes = 1.
    std::size_t type_of(const std::vector<bool>& ballot) const {
        if (ballot.size() != issues.size()) throw Error("ballot must answer every issue");
        std::size_t t = 0;
        for (bool b : ballot) t = (t << 1) | (b ? 1 : 0);
        return t;
    }
    std::vector<bool> ballot(std::size_t type) const {
        std::vector<bool> out(issues.size());
        for (std::size_t k = 0; k < issues.size(); ++k) out[k] = (type >> (issues.size() - 1 - k)) & 1;
        return out;
    }

    society::Society to_society() const {
        std::vector<Int> counts(types(), 0);
        for (const auto& [b, k] : tallies) counts[type_of(b)] += k;
        return society::Society(std::move(counts));
    }
};

/// Ballot-change prices: the number of answers that differ.
inline society::MoveCosts hamming_cost_vector(const Referendum& r) {
    const std::size_t tau = r.types();
    society::MoveCosts c(tau);
    for (std::size_t i = 0; i < tau; ++i)
        for (std::size_t j = 0; j < tau; ++j) c.at(i, j) = society::Cost(__builtin_popcountll(i ^ j));
    return c;
}

}  // namespace minmove::election
