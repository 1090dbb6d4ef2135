#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "minmove/ilp/linear_system.hpp"

namespace minmove::ilp {

namespace detail {

inline std::string fresh_name(const std::vector<std::string>& taken, const std::string& base) {
    std::string name = base;
    auto clash = [&](const std::string& n) {
        for (const auto& t : taken)
            if (t == n) return true;
        return false;
    };
    while (clash(name)) name += "'";
    return name;
}

inline void check_disjunction(const std::vector<LinearSystem>& systems, Int B) {
    if (systems.empty()) throw Error("flatten_disjunction: no systems");
    if (B < 1) throw Error("flatten_disjunction: B must be positive");
    const auto& vars = systems.front().vars();
    for (const auto& sys : systems) {
        if (sys.vars() != vars) throw Error("flatten_disjunction: mismatched variable lists");
        if (sys.max_coeff() > B || sys.max_bound() > B)
            throw Error("flatten_disjunction: input system is not B-small");
    }
}

}  // namespace detail

/// Big-M flattening of a disjunction with an explicit slack `big_m`.
/// Output variables are the shared x (box [-B,B]) followed by indicators
/// y1..yd (box [0,1]); rows are sum(y) = 1, -y_i <= 0, then every row of
/// system i as A_i x + M y_i <= b_i + M. Equality rows are split into two.
inline LinearSystem flatten_disjunction(const std::vector<LinearSystem>& systems, Int B, Int big_m) {
    detail::check_disjunction(systems, B);
    const auto& xs = systems.front().vars();
    const int d = static_cast<int>(systems.size());

    LinearSystem out(xs);
    out.set_box(-B, B);
    std::vector<int> ys;
    for (int i = 0; i < d; ++i) {
        const std::string name = detail::fresh_name(out.vars(), "y" + std::to_string(i + 1));
        ys.push_back(out.add_var(name, 0, 1));
    }

    Row pick;
    pick.sense = Sense::kEqual;
    pick.bound = 1;
    for (int y : ys) pick.terms.emplace_back(y, 1);
    out.add_row(std::move(pick));
    for (int y : ys) out.add_row(Row{{{y, -1}}, 0, Sense::kLessEqual});

    for (int i = 0; i < d; ++i) {
        const int y = ys[static_cast<std::size_t>(i)];
        auto relax = [&](std::vector<std::pair<int, Int>> terms, Int bound) {
            terms.emplace_back(y, big_m);
            out.add_row(Row{std::move(terms), bound + big_m, Sense::kLessEqual});
        };
        for (const auto& row : systems[static_cast<std::size_t>(i)].rows()) {
            relax(row.terms, row.bound);
            if (row.sense == Sense::kEqual) {
                auto neg = row.terms;
                for (auto& t : neg) t.second = -t.second;
                relax(std::move(neg), -row.bound);
            }
        }
    }
    return out;
}

/// Big-M flattening with M = B^2 n.
inline LinearSystem flatten_disjunction(const std::vector<LinearSystem>& systems, Int B) {
    detail::check_disjunction(systems, B);
    const Int n = static_cast<Int>(systems.front().num_vars());
    return flatten_disjunction(systems, B, B * B * n);
}

/// Smallest M for which flattening is exact on the box [-B,B]^n: the
/// largest excess max(a.x) - b over all rows of all systems, or 0.
inline Int exact_big_m(const std::vector<LinearSystem>& systems, Int B) {
    Int best = 0;
    for (const auto& sys : systems) {
        for (const auto& row : sys.rows()) {
            Int reach = 0;
            for (const auto& term : row.terms) reach += std::abs(term.second) * B;
            best = std::max(best, reach - row.bound);
            if (row.sense == Sense::kEqual) best = std::max(best, reach + row.bound);
        }
    }
    return best;
}

}  // namespace minmove::ilp
