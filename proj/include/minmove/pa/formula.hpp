#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "minmove/error.hpp"

namespace minmove::pa {

/// Variable valuation. Evaluation requires it to cover every variable read.
using Assignment = std::map<std::string, Int>;

/// `sum(coeffs[v] * v) <= bound`. Zero coefficients are never stored.
struct LinearAtom {
    std::map<std::string, Int> coeffs;
    Int bound = 0;

    bool is_constant() const noexcept { return coeffs.empty(); }

    /// Integer complement: not(a.x <= b) is (-a).x <= -b - 1.
    LinearAtom negated() const {
        LinearAtom out;
        for (const auto& [v, c] : coeffs) out.coeffs.emplace(v, -c);
        out.bound = -bound - 1;
        return out;
    }

    auto operator<=>(const LinearAtom&) const = default;
};

/// Affine expression used by the formula builders.
struct LinearExpr {
    std::map<std::string, Int> coeffs;
    Int constant = 0;

    LinearExpr() = default;
    LinearExpr(Int c) : constant(c) {}  // NOLINT: implicit on purpose
    static LinearExpr var(const std::string& name, Int coeff = 1) {
        LinearExpr e;
        if (coeff != 0) e.coeffs.emplace(name, coeff);
        return e;
    }

    LinearExpr& operator+=(const LinearExpr& o) {
        for (const auto& [v, c] : o.coeffs) {
            Int& slot = coeffs[v];
            slot += c;
            if (slot == 0) coeffs.erase(v);
        }
        constant += o.constant;
        return *this;
    }
    LinearExpr& operator*=(Int k) {
        if (k == 0) {
            coeffs.clear();
        } else {
            for (auto& [v, c] : coeffs) c *= k;
        }
        constant *= k;
        return *this;
    }
    LinearExpr& operator-=(const LinearExpr& o) {
        LinearExpr neg = o;
        neg *= -1;
        return *this += neg;
    }
    friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
    friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
    friend LinearExpr operator*(Int k, LinearExpr a) { return a *= k; }
};

enum class Kind { kAtom, kAnd, kOr, kNot, kExists, kForall };

/// Presburger formula over linear `<=` atoms. A plain value type; children
/// are owned. `block` is used only by quantifiers, whose body is children[0].
struct Formula {
    Kind kind = Kind::kAnd;
    LinearAtom atom;
    std::vector<std::string> block;
    std::vector<Formula> children;

    bool is_atom() const noexcept { return kind == Kind::kAtom; }
    bool is_quantifier() const noexcept { return kind == Kind::kExists || kind == Kind::kForall; }
    const Formula& body() const { return children.at(0); }

    bool operator==(const Formula&) const = default;
};

inline Formula make_atom(LinearAtom a) {
    Formula f;
    f.kind = Kind::kAtom;
    f.atom = std::move(a);
    return f;
}

/// Conjunction; the empty conjunction is `true`.
inline Formula make_and(std::vector<Formula> parts) {
    Formula f;
    f.kind = Kind::kAnd;
    f.children = std::move(parts);
    return f;
}

/// Disjunction; the empty disjunction is `false`.
inline Formula make_or(std::vector<Formula> parts) {
    Formula f;
    f.kind = Kind::kOr;
    f.children = std::move(parts);
    return f;
}

inline Formula make_not(Formula inner) {
    Formula f;
    f.kind = Kind::kNot;
    f.children.push_back(std::move(inner));
    return f;
}

namespace detail {
inline Formula make_quantifier(Kind kind, std::vector<std::string> block, Formula body) {
    std::set<std::string> seen;
    for (const auto& v : block)
        if (!seen.insert(v).second) throw Error("variable '" + v + "' bound twice in one block");
    Formula f;
    f.kind = kind;
    f.block = std::move(block);
    f.children.push_back(std::move(body));
    return f;
}
}  // namespace detail

inline Formula make_exists(std::vector<std::string> block, Formula body) {
    return detail::make_quantifier(Kind::kExists, std::move(block), std::move(body));
}

inline Formula make_forall(std::vector<std::string> block, Formula body) {
    return detail::make_quantifier(Kind::kForall, std::move(block), std::move(body));
}

inline Formula make_true() { return make_and({}); }
inline Formula make_false() { return make_or({}); }

/// lhs <= rhs
inline Formula le(const LinearExpr& lhs, const LinearExpr& rhs) {
    LinearExpr d = lhs - rhs;
    return make_atom(LinearAtom{d.coeffs, -d.constant});
}
/// lhs < rhs, i.e. lhs <= rhs - 1 over the integers.
inline Formula lt(const LinearExpr& lhs, const LinearExpr& rhs) { return le(lhs, rhs - LinearExpr(1)); }
inline Formula ge(const LinearExpr& lhs, const LinearExpr& rhs) { return le(rhs, lhs); }
inline Formula gt(const LinearExpr& lhs, const LinearExpr& rhs) { return lt(rhs, lhs); }
/// lhs == rhs as two `<=` atoms.
inline Formula eq(const LinearExpr& lhs, const LinearExpr& rhs) {
    return make_and({le(lhs, rhs), ge(lhs, rhs)});
}

/// Implication, spelled out since the formula class has no arrow.
inline Formula implies(Formula premise, Formula conclusion) {
    return make_or({make_not(std::move(premise)), std::move(conclusion)});
}

/// Parameters of a prenex formula: quantifier depth, block dimensions
/// (free variables first), and the DNF shape and magnitudes of its matrix.
struct FormulaParams {
    int depth = 0;
    std::vector<int> dims;
    int disjunctions = 0;
    int conjunctions = 0;
    Int max_coeff = 0;
    Int max_constant = 0;

    bool operator==(const FormulaParams&) const = default;
};

}  // namespace minmove::pa
