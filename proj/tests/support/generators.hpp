#pragma once

// Random instance generators and exhaustive enumerators shared by the unit
// tests and the acceptance binary.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "minmove/ilp/linear_system.hpp"
#include "minmove/pa/formula.hpp"
#include "minmove/pa/normal_form.hpp"

namespace minmove::support {

using Rng = std::mt19937_64;

inline Int uniform(Rng& rng, Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); }

/// Calls visit(point) for every point inside per-variable bounds.
inline void for_each_point(const std::vector<Int>& lo, const std::vector<Int>& hi,
                           const std::function<void(const std::vector<Int>&)>& visit) {
    std::vector<Int> p = lo;
    for (std::size_t j = 0; j < lo.size(); ++j)
        if (lo[j] > hi[j]) return;
    while (true) {
        visit(p);
        std::size_t k = p.size();
        bool done = true;
        while (k > 0) {
            --k;
            if (p[k] < hi[k]) {
                ++p[k];
                done = false;
                break;
            }
            p[k] = lo[k];
        }
        if (done) return;
    }
}

/// Calls visit(point) for every point of [lo,hi]^n in lexicographic order.
inline void for_each_point(std::size_t n, Int lo, Int hi, const std::function<void(const std::vector<Int>&)>& visit) {
    for_each_point(std::vector<Int>(n, lo), std::vector<Int>(n, hi), visit);
}

inline pa::LinearAtom random_atom(Rng& rng, const std::vector<std::string>& vars, Int alpha, Int beta) {
    pa::LinearAtom a;
    for (const auto& v : vars) {
        const Int c = uniform(rng, -alpha, alpha);
        if (c != 0) a.coeffs.emplace(v, c);
    }
    if (a.coeffs.empty() && !vars.empty()) a.coeffs.emplace(vars[static_cast<std::size_t>(uniform(rng, 0, static_cast<Int>(vars.size()) - 1))], 1);
    a.bound = uniform(rng, -beta, beta);
    return a;
}

/// Quantifier-free formula tree of the given depth over and/or/not.
inline pa::Formula random_qf(Rng& rng, const std::vector<std::string>& vars, Int alpha, Int beta, int depth) {
    if (depth == 0 || uniform(rng, 0, 3) == 0) return pa::make_atom(random_atom(rng, vars, alpha, beta));
    switch (uniform(rng, 0, 2)) {
    case 0:
        return pa::make_not(random_qf(rng, vars, alpha, beta, depth - 1));
    case 1: {
        std::vector<pa::Formula> parts;
        const Int k = uniform(rng, 2, 3);
        for (Int i = 0; i < k; ++i) parts.push_back(random_qf(rng, vars, alpha, beta, depth - 1));
        return pa::make_and(std::move(parts));
    }
    default: {
        std::vector<pa::Formula> parts;
        const Int k = uniform(rng, 2, 3);
        for (Int i = 0; i < k; ++i) parts.push_back(random_qf(rng, vars, alpha, beta, depth - 1));
        return pa::make_or(std::move(parts));
    }
    }
}

/// DNF-shaped matrix: an Or of `delta` And-blocks of `gamma` atoms each.
inline pa::Formula random_dnf(Rng& rng, const std::vector<std::string>& vars, int delta, int gamma, Int alpha,
                              Int beta) {
    std::vector<pa::Formula> ors;
    for (int i = 0; i < delta; ++i) {
        std::vector<pa::Formula> ands;
        for (int j = 0; j < gamma; ++j) ands.push_back(pa::make_atom(random_atom(rng, vars, alpha, beta)));
        ors.push_back(pa::make_and(std::move(ands)));
    }
    return pa::make_or(std::move(ors));
}

/// Random system with `m` rows, every coefficient and bound in [-B,B].
inline ilp::LinearSystem random_system(Rng& rng, const std::vector<std::string>& vars, int m, Int B) {
    ilp::LinearSystem sys(vars);
    for (int r = 0; r < m; ++r) {
        std::vector<Int> dense(vars.size());
        for (auto& c : dense) c = uniform(rng, -B, B);
        sys.add_row(ilp::make_row(dense, uniform(rng, -B, B)));
    }
    return sys;
}

inline std::vector<std::string> names(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

inline pa::Assignment bind(const std::vector<std::string>& vars, const std::vector<Int>& values) {
    pa::Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = values[i];
    return a;
}

}  // namespace minmove::support
