#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minmove/ilp/linear_system.hpp"
#include "minmove/pa/formula.hpp"

namespace minmove::ilp {

struct IlpSolution {
    pa::Assignment point;
    std::optional<Int> objective;
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t propagations = 0;
};

namespace detail {

inline Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace detail

/// Depth-first branch and bound over a bounded integer box with per-row
/// bound tightening. Branches on the lowest-index unfixed variable and
/// explores the lower half of its domain first, so feasibility search
/// meets points in lexicographic order. Once the unfixed variables split
/// into independent groups (no row links two groups) each group is solved
/// on its own.
class BranchAndBound {
public:
    explicit BranchAndBound(const LinearSystem& sys) : num_vars_(sys.num_vars()) {
        lower0_.resize(num_vars_);
        upper0_.resize(num_vars_);
        for (std::size_t j = 0; j < num_vars_; ++j) {
            if (!sys.lower(j) || !sys.upper(j))
                throw Error("unbounded variable '" + sys.vars()[j] + "'");
            lower0_[j] = *sys.lower(j);
            upper0_[j] = *sys.upper(j);
        }
        columns_.resize(num_vars_);
        for (const auto& row : sys.rows()) {
            add_internal_row(row.terms, row.bound, false);
            if (row.sense == Sense::kEqual) add_internal_row(row.terms, -row.bound, true);
        }
        in_queue_.assign(rows_.size() + 1, 0);
    }

    const SearchStats& stats() const noexcept { return stats_; }

    std::optional<std::vector<Int>> feasible() {
        State root{lower0_, upper0_};
        if (!root_consistent(root)) return std::nullopt;
        std::vector<int> scope(num_vars_);
        std::iota(scope.begin(), scope.end(), 0);
        enqueue_all();
        if (!solve_scope(root, scope, true)) return std::nullopt;
        return root.lo;
    }

    /// Minimizes objective . x; ties go to the lexicographically smallest point.
    std::optional<std::pair<std::vector<Int>, Int>> minimize(const std::vector<Int>& objective) {
        objective_row_ = static_cast<int>(rows_.size());
        std::vector<std::pair<int, Int>> terms;
        for (std::size_t j = 0; j < objective.size() && j < num_vars_; ++j)
            if (objective[j] != 0) terms.emplace_back(static_cast<int>(j), objective[j]);
        Int max_obj = 0;
        for (const auto& [var, c] : terms)
            max_obj += c > 0 ? c * upper0_[static_cast<std::size_t>(var)] : c * lower0_[static_cast<std::size_t>(var)];
        add_internal_row(terms, max_obj, false);
        in_queue_.assign(rows_.size() + 1, 0);

        State root{lower0_, upper0_};
        incumbent_.reset();
        if (root_consistent(root)) {
            enqueue_all();
            minimize_node(root);
        }
        rows_.pop_back();
        objective_row_ = -1;
        if (!incumbent_) return std::nullopt;
        return std::make_pair(incumbent_->first, incumbent_->second);
    }

private:
    struct InternalRow {
        std::size_t begin = 0;
        std::size_t end = 0;
        Int bound = 0;
    };
    struct State {
        std::vector<Int> lo;
        std::vector<Int> hi;
    };

    void add_internal_row(const std::vector<std::pair<int, Int>>& terms, Int bound, bool negate) {
        InternalRow row;
        row.begin = term_var_.size();
        for (const auto& [var, c] : terms) {
            term_var_.push_back(var);
            term_coeff_.push_back(negate ? -c : c);
            if (objective_row_ < 0 || static_cast<int>(rows_.size()) != objective_row_)
                columns_[static_cast<std::size_t>(var)].push_back(static_cast<int>(rows_.size()));
        }
        row.end = term_var_.size();
        row.bound = bound;
        rows_.push_back(row);
    }

    bool root_consistent(const State& s) const {
        for (std::size_t j = 0; j < num_vars_; ++j)
            if (s.lo[j] > s.hi[j]) return false;
        return true;
    }

    void enqueue_all() {
        queue_.clear();
        std::fill(in_queue_.begin(), in_queue_.end(), 0);
        for (std::size_t r = 0; r < rows_.size(); ++r) push_row(static_cast<int>(r));
    }

    void push_row(int r) {
        if (!in_queue_[static_cast<std::size_t>(r)]) {
            in_queue_[static_cast<std::size_t>(r)] = 1;
            queue_.push_back(r);
        }
    }

    void enqueue_var(int var) {
        for (int r : columns_[static_cast<std::size_t>(var)]) push_row(r);
        if (objective_row_ >= 0) push_row(objective_row_);
    }

    void clear_queue() {
        for (int r : queue_) in_queue_[static_cast<std::size_t>(r)] = 0;
        queue_.clear();
    }

    // Tightens bounds to a fixpoint; false on an empty domain or violated row.
    bool propagate(State& s) {
        std::size_t head = 0;
        while (head < queue_.size()) {
            const int r = queue_[head++];
            in_queue_[static_cast<std::size_t>(r)] = 0;
            ++stats_.propagations;
            const InternalRow& row = rows_[static_cast<std::size_t>(r)];
            Int min_act = 0;
            for (std::size_t t = row.begin; t < row.end; ++t) {
                const auto j = static_cast<std::size_t>(term_var_[t]);
                const Int c = term_coeff_[t];
                min_act += c > 0 ? c * s.lo[j] : c * s.hi[j];
            }
            if (min_act > row.bound) {
                clear_rest(head);
                return false;
            }
            for (std::size_t t = row.begin; t < row.end; ++t) {
                const int var = term_var_[t];
                const auto j = static_cast<std::size_t>(var);
                const Int c = term_coeff_[t];
                if (s.lo[j] == s.hi[j]) continue;
                const Int own = c > 0 ? c * s.lo[j] : c * s.hi[j];
                const Int slack = row.bound - (min_act - own);
                if (c > 0) {
                    const Int nhi = detail::floor_div(slack, c);
                    if (nhi < s.hi[j]) {
                        s.hi[j] = nhi;
                        if (nhi < s.lo[j]) {
                            clear_rest(head);
                            return false;
                        }
                        enqueue_var(var);
                    }
                } else {
                    const Int nlo = -detail::floor_div(slack, -c);
                    if (nlo > s.lo[j]) {
                        s.lo[j] = nlo;
                        if (nlo > s.hi[j]) {
                            clear_rest(head);
                            return false;
                        }
                        enqueue_var(var);
                    }
                }
            }
        }
        queue_.clear();
        return true;
    }

    void clear_rest(std::size_t head) {
        for (std::size_t k = head; k < queue_.size(); ++k) in_queue_[static_cast<std::size_t>(queue_[k])] = 0;
        queue_.clear();
    }

    // Groups the unfixed variables of `scope` by shared rows.
    std::vector<std::vector<int>> components(const State& s, const std::vector<int>& unfixed) {
        std::vector<int> parent(num_vars_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) {
                parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
                x = parent[static_cast<std::size_t>(x)];
            }
            return x;
        };
        std::vector<char> seen_row(rows_.size(), 0);
        for (int v : unfixed) {
            for (int r : columns_[static_cast<std::size_t>(v)]) {
                if (seen_row[static_cast<std::size_t>(r)]) continue;
                seen_row[static_cast<std::size_t>(r)] = 1;
                const InternalRow& row = rows_[static_cast<std::size_t>(r)];
                int first = -1;
                for (std::size_t t = row.begin; t < row.end; ++t) {
                    const auto j = static_cast<std::size_t>(term_var_[t]);
                    if (s.lo[j] == s.hi[j]) continue;
                    if (first < 0) {
                        first = find(term_var_[t]);
                    } else {
                        const int other = find(term_var_[t]);
                        if (other != first) parent[static_cast<std::size_t>(other)] = first;
                    }
                }
            }
        }
        std::map<int, std::vector<int>> groups;
        for (int v : unfixed) groups[find(v)].push_back(v);
        std::vector<std::vector<int>> out;
        for (auto& [root, members] : groups) out.push_back(std::move(members));
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
        return out;
    }

    // On success `s` holds a point with every variable of `scope` fixed.
    bool solve_scope(State& s, const std::vector<int>& scope, bool allow_split) {
        ++stats_.nodes;
        if (!propagate(s)) return false;
        std::vector<int> unfixed;
        for (int v : scope)
            if (s.lo[static_cast<std::size_t>(v)] != s.hi[static_cast<std::size_t>(v)]) unfixed.push_back(v);
        if (unfixed.empty()) return true;
        if (allow_split && unfixed.size() > 1) {
            auto groups = components(s, unfixed);
            if (groups.size() > 1) {
                for (const auto& g : groups)
                    if (!solve_scope(s, g, false)) return false;
                return true;
            }
        }
        const int var = unfixed.front();
        const auto j = static_cast<std::size_t>(var);
        const Int mid = detail::floor_div(s.lo[j] + s.hi[j], 2);
        {
            State child = s;
            child.hi[j] = mid;
            enqueue_var(var);
            if (solve_scope(child, unfixed, true)) {
                s = std::move(child);
                return true;
            }
        }
        s.lo[j] = mid + 1;
        enqueue_var(var);
        return solve_scope(s, unfixed, true);
    }

    void minimize_node(State& s) {
        ++stats_.nodes;
        if (!propagate(s)) return;
        int var = -1;
        for (std::size_t j = 0; j < num_vars_; ++j) {
            if (s.lo[j] != s.hi[j]) {
                var = static_cast<int>(j);
                break;
            }
        }
        if (var < 0) {
            const InternalRow& obj = rows_[static_cast<std::size_t>(objective_row_)];
            Int value = 0;
            for (std::size_t t = obj.begin; t < obj.end; ++t)
                value += term_coeff_[t] * s.lo[static_cast<std::size_t>(term_var_[t])];
            incumbent_ = std::make_pair(s.lo, value);
            rows_[static_cast<std::size_t>(objective_row_)].bound = value - 1;
            return;
        }
        const auto j = static_cast<std::size_t>(var);
        const Int mid = detail::floor_div(s.lo[j] + s.hi[j], 2);
        State child = s;
        child.hi[j] = mid;
        enqueue_var(var);
        minimize_node(child);
        s.lo[j] = mid + 1;
        enqueue_var(var);
        // The incumbent may have tightened the objective row since this
        // node's fixpoint.
        push_row(objective_row_);
        minimize_node(s);
    }

    std::size_t num_vars_;
    std::vector<Int> lower0_, upper0_;
    std::vector<InternalRow> rows_;
    std::vector<int> term_var_;
    std::vector<Int> term_coeff_;
    std::vector<std::vector<int>> columns_;
    std::vector<int> queue_;
    std::vector<char> in_queue_;
    int objective_row_ = -1;
    std::optional<std::pair<std::vector<Int>, Int>> incumbent_;
    SearchStats stats_;
};

namespace detail {

inline pa::Assignment to_assignment(const LinearSystem& sys, const std::vector<Int>& point) {
    pa::Assignment out;
    for (std::size_t j = 0; j < sys.num_vars(); ++j) out.emplace(sys.vars()[j], point[j]);
    return out;
}

}  // namespace detail

/// A satisfying point of `sys` inside its box, or nothing. Deterministic:
/// repeated calls return the same point.
inline std::optional<IlpSolution> solve_feasible(const LinearSystem& sys, SearchStats* stats = nullptr) {
    BranchAndBound bb(sys);
    auto point = bb.feasible();
    if (stats) *stats = bb.stats();
    if (!point) return std::nullopt;
    return IlpSolution{detail::to_assignment(sys, *point), std::nullopt};
}

/// Minimizes a linear objective (variable -> coefficient) over `sys`.
inline std::optional<IlpSolution> solve_min(const std::map<std::string, Int>& objective,
                                            const LinearSystem& sys, SearchStats* stats = nullptr) {
    std::vector<Int> dense(sys.num_vars(), 0);
    for (const auto& [name, c] : objective) {
        const int j = sys.index_of(name);
        if (j < 0) throw Error("objective mentions unknown variable '" + name + "'");
        dense[static_cast<std::size_t>(j)] = c;
    }
    BranchAndBound bb(sys);
    auto best = bb.minimize(dense);
    if (stats) *stats = bb.stats();
    if (!best) return std::nullopt;
    return IlpSolution{detail::to_assignment(sys, best->first), best->second};
}

}  // namespace minmove::ilp
