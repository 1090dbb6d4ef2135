#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minmove/error.hpp"

namespace minmove::ilp {

enum class Sense { kLessEqual, kEqual };

/// One row `sum(coeff * x[var]) <= bound` (or `==` for kEqual). Terms are
/// sparse, sorted by variable index, and never carry a zero coefficient.
struct Row {
    std::vector<std::pair<int, Int>> terms;
    Int bound = 0;
    Sense sense = Sense::kLessEqual;

    Int coeff(int var) const {
        auto it = std::lower_bound(terms.begin(), terms.end(), var,
                                   [](const auto& t, int v) { return t.first < v; });
        return (it != terms.end() && it->first == var) ? it->second : 0;
    }

    Int activity(const std::vector<Int>& point) const {
        Int sum = 0;
        for (const auto& [var, c] : terms) sum += c * point[static_cast<std::size_t>(var)];
        return sum;
    }

    bool satisfied_by(const std::vector<Int>& point) const {
        const Int a = activity(point);
        return sense == Sense::kEqual ? a == bound : a <= bound;
    }

    bool operator==(const Row&) const = default;
};

/// Builds a row from dense coefficients, dropping zeros.
inline Row make_row(const std::vector<Int>& dense, Int bound, Sense sense = Sense::kLessEqual) {
    Row row;
    row.bound = bound;
    row.sense = sense;
    for (std::size_t j = 0; j < dense.size(); ++j)
        if (dense[j] != 0) row.terms.emplace_back(static_cast<int>(j), dense[j]);
    return row;
}

/// A conjunction of linear rows over named integer variables, with an
/// optional box `[lower, upper]` per variable.
class LinearSystem {
public:
    LinearSystem() = default;
    explicit LinearSystem(std::vector<std::string> vars)
        : vars_(std::move(vars)), lower_(vars_.size()), upper_(vars_.size()) {}

    const std::vector<std::string>& vars() const noexcept { return vars_; }
    const std::vector<Row>& rows() const noexcept { return rows_; }
    std::size_t num_vars() const noexcept { return vars_.size(); }
    std::size_t num_rows() const noexcept { return rows_.size(); }

    const std::optional<Int>& lower(std::size_t j) const { return lower_.at(j); }
    const std::optional<Int>& upper(std::size_t j) const { return upper_.at(j); }

    int index_of(const std::string& name) const {
        auto it = std::find(vars_.begin(), vars_.end(), name);
        return it == vars_.end() ? -1 : static_cast<int>(it - vars_.begin());
    }

    int add_var(std::string name, std::optional<Int> lo = std::nullopt,
                std::optional<Int> hi = std::nullopt) {
        if (index_of(name) >= 0) throw Error("duplicate variable '" + name + "'");
        vars_.push_back(std::move(name));
        lower_.push_back(lo);
        upper_.push_back(hi);
        return static_cast<int>(vars_.size() - 1);
    }

    void set_bounds(std::size_t j, std::optional<Int> lo, std::optional<Int> hi) {
        if (lo && hi && *lo > *hi) throw Error("empty box for variable '" + vars_.at(j) + "'");
        lower_.at(j) = lo;
        upper_.at(j) = hi;
    }

    void set_box(Int lo, Int hi) {
        for (std::size_t j = 0; j < vars_.size(); ++j) set_bounds(j, lo, hi);
    }

    void add_row(Row row) {
        for (const auto& [var, c] : row.terms)
            if (var < 0 || static_cast<std::size_t>(var) >= vars_.size())
                throw Error("row references unknown variable index");
        rows_.push_back(std::move(row));
    }

    bool bounded() const {
        for (std::size_t j = 0; j < vars_.size(); ++j)
            if (!lower_[j] || !upper_[j]) return false;
        return true;
    }

    /// Largest absolute coefficient over all rows.
    Int max_coeff() const {
        Int best = 0;
        for (const auto& row : rows_)
            for (const auto& term : row.terms) best = std::max(best, std::abs(term.second));
        return best;
    }

    /// Largest absolute right-hand side over all rows.
    Int max_bound() const {
        Int best = 0;
        for (const auto& row : rows_) best = std::max(best, std::abs(row.bound));
        return best;
    }

    bool contains(const std::vector<Int>& point) const {
        if (point.size() != vars_.size()) return false;
        for (std::size_t j = 0; j < vars_.size(); ++j) {
            if (lower_[j] && point[j] < *lower_[j]) return false;
            if (upper_[j] && point[j] > *upper_[j]) return false;
        }
        return std::all_of(rows_.begin(), rows_.end(),
                           [&](const Row& r) { return r.satisfied_by(point); });
    }

    bool operator==(const LinearSystem&) const = default;

private:
    std::vector<std::string> vars_;
    std::vector<Row> rows_;
    std::vector<std::optional<Int>> lower_;
    std::vector<std::optional<Int>> upper_;
};

}  // namespace minmove::ilp
