#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "minmove/error.hpp"
#include "minmove/pa/formula.hpp"

namespace minmove::society {

/// Number of people of each type.
struct Society {
    std::vector<Int> counts;

    Society() = default;
    explicit Society(std::vector<Int> c) : counts(std::move(c)) {
        for (Int v : counts)
            if (v < 0) throw Error("society counts must be non-negative");
    }

    std::size_t types() const noexcept { return counts.size(); }
    Int population() const { return std::accumulate(counts.begin(), counts.end(), Int{0}); }

    bool operator==(const Society&) const = default;
};

/// Net effect of a move per type.
using Change = std::vector<Int>;

/// flow(i, j): people of type i turning type j.
class Move {
public:
    Move() = default;
    explicit Move(std::size_t tau) : tau_(tau), flow_(tau * tau, 0) {}

    std::size_t types() const noexcept { return tau_; }
    Int& at(std::size_t i, std::size_t j) { return flow_.at(i * tau_ + j); }
    Int at(std::size_t i, std::size_t j) const { return flow_.at(i * tau_ + j); }
    bool is_zero() const {
        return std::all_of(flow_.begin(), flow_.end(), [](Int v) { return v == 0; });
    }

    bool operator==(const Move&) const = default;

private:
    std::size_t tau_ = 0;
    std::vector<Int> flow_;
};

/// Non-negative integer or +infinity.
class Cost {
public:
    constexpr Cost() = default;
    constexpr Cost(Int v) : value_(v) {}  // NOLINT: integers convert implicitly
    static constexpr Cost infinity() {
        Cost c;
        c.infinite_ = true;
        return c;
    }

    constexpr bool is_infinite() const noexcept { return infinite_; }
    Int value() const {
        if (infinite_) throw Error("infinite cost has no value");
        return value_;
    }

    friend constexpr Cost operator+(Cost a, Cost b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return Cost(a.value_ + b.value_);
    }
    friend constexpr bool operator==(Cost a, Cost b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(Cost a, Cost b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
        return a.value_ <=> b.value_;
    }

    std::string str() const { return infinite_ ? "inf" : std::to_string(value_); }

private:
    Int value_ = 0;
    bool infinite_ = false;
};

inline std::ostream& operator<<(std::ostream& os, Cost c) { return os << c.str(); }

/// Square matrix of move prices with a zero diagonal.
class MoveCosts {
public:
    MoveCosts() = default;
    explicit MoveCosts(std::size_t tau, Cost off_diagonal = Cost(1)) : tau_(tau), cost_(tau * tau, off_diagonal) {
        for (std::size_t i = 0; i < tau; ++i) at(i, i) = Cost(0);
    }

    std::size_t types() const noexcept { return tau_; }
    Cost& at(std::size_t i, std::size_t j) { return cost_.at(i * tau_ + j); }
    Cost at(std::size_t i, std::size_t j) const { return cost_.at(i * tau_ + j); }

    /// Largest finite entry (0 when all entries are 0 or infinite).
    Int max_finite() const {
        Int best = 0;
        for (Cost c : cost_)
            if (!c.is_infinite()) best = std::max(best, c.value());
        return best;
    }

    bool operator==(const MoveCosts&) const = default;

private:
    std::size_t tau_ = 0;
    std::vector<Cost> cost_;
};

inline Change change_of(const Move& m) {
    const std::size_t tau = m.types();
    Change d(tau, 0);
    for (std::size_t i = 0; i < tau; ++i) {
        for (std::size_t j = 0; j < tau; ++j) {
            d[j] += m.at(i, j);
            d[i] -= m.at(i, j);
        }
    }
    return d;
}

inline bool is_feasible(const Society& s, const Change& d) {
    if (d.size() != s.types()) throw Error("is_feasible: dimension mismatch");
    if (std::accumulate(d.begin(), d.end(), Int{0}) != 0) return false;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (s.counts[i] + d[i] < 0) return false;
    return true;
}

inline Society apply(const Society& s, const Move& m) {
    const Change d = change_of(m);
    if (!is_feasible(s, d)) throw Error("apply: move is not feasible for the society");
    Society out = s;
    for (std::size_t i = 0; i < d.size(); ++i) out.counts[i] += d[i];
    return out;
}

inline Cost move_cost(const MoveCosts& c, const Move& m) {
    if (c.types() != m.types()) throw Error("move_cost: dimension mismatch");
    Cost total(0);
    for (std::size_t i = 0; i < m.types(); ++i) {
        for (std::size_t j = 0; j < m.types(); ++j) {
            if (i == j || m.at(i, j) == 0) continue;
            const Cost e = c.at(i, j);
            total = total + (e.is_infinite() ? e : Cost(e.value() * m.at(i, j)));
        }
    }
    return total;
}

/// Triangle inequality check; on failure `witness` receives (i, j, k) with
/// c(i,k) > c(i,j) + c(j,k).
inline bool validate_costs(const MoveCosts& c, std::array<std::size_t, 3>* witness = nullptr) {
    const std::size_t tau = c.types();
    for (std::size_t i = 0; i < tau; ++i) {
        for (std::size_t j = 0; j < tau; ++j) {
            for (std::size_t k = 0; k < tau; ++k) {
                if (c.at(i, k) > c.at(i, j) + c.at(j, k)) {
                    if (witness) *witness = {i, j, k};
                    return false;
                }
            }
        }
    }
    return true;
}

/// Symbolic society: one affine expression per type.
using SocietyExpr = std::vector<pa::LinearExpr>;

inline SocietyExpr constant_society(const Society& s) {
    SocietyExpr out;
    for (Int v : s.counts) out.emplace_back(v);
    return out;
}

/// Society variables `<prefix>_0 .. <prefix>_{tau-1}`.
inline std::vector<std::string> society_var_names(std::size_t tau, const std::string& prefix = "s") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < tau; ++i) out.push_back(prefix + "_" + std::to_string(i));
    return out;
}

inline SocietyExpr variable_society(std::size_t tau, const std::string& prefix = "s") {
    SocietyExpr out;
    for (const auto& v : society_var_names(tau, prefix)) out.push_back(pa::LinearExpr::var(v));
    return out;
}

inline std::string flow_var(const std::string& prefix, std::size_t i, std::size_t j) {
    return prefix + "_" + std::to_string(i) + "_" + std::to_string(j);
}

/// Flow variables in row-major order.
inline std::vector<std::string> flow_vars(const std::string& prefix, std::size_t tau) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < tau; ++i)
        for (std::size_t j = 0; j < tau; ++j) out.push_back(flow_var(prefix, i, j));
    return out;
}

/// base + change of the symbolic move `prefix`.
inline SocietyExpr after_move(const SocietyExpr& base, const std::string& prefix) {
    SocietyExpr out = base;
    const std::size_t tau = base.size();
    for (std::size_t i = 0; i < tau; ++i) {
        for (std::size_t j = 0; j < tau; ++j) {
            if (i == j) continue;
            out[j] += pa::LinearExpr::var(flow_var(prefix, i, j));
            out[i] -= pa::LinearExpr::var(flow_var(prefix, i, j));
        }
    }
    return out;
}

inline Move move_from_assignment(const pa::Assignment& a, const std::string& prefix, std::size_t tau) {
    Move m(tau);
    for (std::size_t i = 0; i < tau; ++i)
        for (std::size_t j = 0; j < tau; ++j)
            if (i != j) m.at(i, j) = a.at(flow_var(prefix, i, j));
    return m;
}

enum class MoveEncoding {
    /// m >= 0, cost <= k, infinite edges and the diagonal pinned to 0,
    /// base + change >= 0.
    kPlain,
    /// kPlain plus outflow of each type bounded by its count.
    kTransport,
};

/// (c,k)-move predicate over the symbolic move `prefix` applied to `base`.
inline pa::Formula move_condition(const MoveCosts& c, Int k, const SocietyExpr& base, const std::string& prefix,
                                  MoveEncoding encoding = MoveEncoding::kPlain) {
    if (k < 0) throw Error("move budget must be non-negative");
    const std::size_t tau = c.types();
    if (base.size() != tau) throw Error("move_condition: dimension mismatch");
    using pa::LinearExpr;
    std::vector<pa::Formula> parts;
    LinearExpr cost;
    for (std::size_t i = 0; i < tau; ++i) {
        for (std::size_t j = 0; j < tau; ++j) {
            const LinearExpr m = LinearExpr::var(flow_var(prefix, i, j));
            parts.push_back(pa::ge(m, 0));
            if (i == j || c.at(i, j).is_infinite()) {
                parts.push_back(pa::le(m, 0));
            } else {
                cost += c.at(i, j).value() * m;
            }
        }
    }
    parts.push_back(pa::le(cost, k));
    if (encoding == MoveEncoding::kTransport) {
        for (std::size_t i = 0; i < tau; ++i) {
            LinearExpr out;
            for (std::size_t j = 0; j < tau; ++j)
                if (j != i && !c.at(i, j).is_infinite()) out += LinearExpr::var(flow_var(prefix, i, j));
            parts.push_back(pa::le(out, base[i]));
        }
    }
    for (const auto& e : after_move(base, prefix)) parts.push_back(pa::ge(e, 0));
    return pa::make_and(std::move(parts));
}

/// The (c,k)-move constraints of a move out of the concrete society `s`.
inline pa::Formula build_move_constraints(const MoveCosts& c, Int k, const Society& s, const std::string& varprefix,
                                          MoveEncoding encoding = MoveEncoding::kPlain) {
    return move_condition(c, k, constant_society(s), varprefix, encoding);
}

}  // namespace minmove::society
