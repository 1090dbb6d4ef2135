#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "minmove/ilp/solver.hpp"
#include "minmove/pa/normal_form.hpp"

namespace minmove::quant {

/// A closed prenex formula whose quantified variables all range over
/// [-bound, bound].
struct BoundedSentence {
    pa::Formula formula;
    Int bound = 1;
};

struct DecideStats {
    std::uint64_t decisions = 0;
    std::uint64_t ilp_calls = 0;
    std::uint64_t refinements = 0;
    std::uint64_t nodes = 0;
};

/// Truth value plus an assignment to the leading block: a witness when the
/// leading quantifier is exists and the sentence is true, a counterexample
/// when it is forall and the sentence is false.
struct Decision {
    bool truth = false;
    std::optional<pa::Assignment> leading;
};

/// The box actually used: the caller's bound, raised to the largest
/// constant of the matrix.
inline Int effective_bound(const BoundedSentence& s) {
    return std::max<Int>(s.bound, pa::max_constant(s.formula));
}

namespace detail {

struct Block {
    pa::Kind kind;
    std::vector<std::string> vars;
};

inline std::vector<Block> merged_blocks(const pa::Prenex& p) {
    std::vector<Block> out;
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
        if (!out.empty() && out.back().kind == p.quantifiers[i]) {
            out.back().vars.insert(out.back().vars.end(), p.blocks[i].begin(), p.blocks[i].end());
        } else {
            out.push_back(Block{p.quantifiers[i], p.blocks[i]});
        }
    }
    return out;
}

inline bool mentions_any(const pa::Formula& f, const std::set<std::string>& vars) {
    for (const auto& v : pa::free_variables(f))
        if (vars.count(v)) return true;
    return false;
}

inline pa::Formula normalize(const pa::Formula& f) { return pa::simplify(pa::to_nnf(f)); }

inline pa::Formula negation(const pa::Formula& f) { return pa::simplify(pa::negate_nnf(f)); }

inline pa::Assignment restrict_to(const pa::Assignment& a, const std::vector<std::string>& vars) {
    pa::Assignment out;
    for (const auto& v : vars) out[v] = a.at(v);
    return out;
}

/// Builds constraint systems over a fixed box. Disjunctions are encoded
/// with one indicator per disjunct and a per-row slack that is exact for
/// the box, so the encoding never cuts off a satisfying point.
class Encoder {
public:
    Encoder(const std::vector<std::string>& vars, Int B) : sys_(vars) {
        sys_.set_box(-B, B);
        for (std::size_t j = 0; j < vars.size(); ++j) index_.emplace(vars[j], static_cast<int>(j));
    }

    ilp::LinearSystem& system() { return sys_; }

    /// Conjoins a quantifier-free formula over the system's variables.
    void add(const pa::Formula& f) { add_nnf(normalize(f)); }

private:
    void add_nnf(const pa::Formula& f) {
        if (f.kind == pa::Kind::kAnd) {
            for (const auto& c : f.children) add_nnf(c);
            return;
        }
        add_disjunction(pa::dnf_conjunctions(f));
    }

    bool to_row(const pa::LinearAtom& a, ilp::Row& row) const {
        row.terms.clear();
        row.bound = a.bound;
        for (const auto& [v, c] : a.coeffs) {
            auto it = index_.find(v);
            if (it == index_.end()) throw Error("variable '" + v + "' is not quantified");
            row.terms.emplace_back(it->second, c);
        }
        std::sort(row.terms.begin(), row.terms.end());
        return true;
    }

    Int max_activity(const ilp::Row& row) const {
        Int act = 0;
        for (const auto& [j, c] : row.terms)
            act += c > 0 ? c * *sys_.upper(static_cast<std::size_t>(j)) : c * *sys_.lower(static_cast<std::size_t>(j));
        return act;
    }
    Int min_activity(const ilp::Row& row) const {
        Int act = 0;
        for (const auto& [j, c] : row.terms)
            act += c > 0 ? c * *sys_.lower(static_cast<std::size_t>(j)) : c * *sys_.upper(static_cast<std::size_t>(j));
        return act;
    }

    void add_disjunction(const std::vector<pa::Conjunction>& disjuncts) {
        std::vector<std::vector<ilp::Row>> live;
        for (const auto& conj : disjuncts) {
            std::vector<ilp::Row> rows;
            bool impossible = false;
            for (const auto& a : conj) {
                ilp::Row row;
                to_row(a, row);
                if (min_activity(row) > row.bound) {
                    impossible = true;
                    break;
                }
                if (max_activity(row) > row.bound) rows.push_back(std::move(row));
            }
            if (impossible) continue;
            if (rows.empty()) return;  // a disjunct holds on the whole box
            live.push_back(std::move(rows));
        }
        if (live.empty()) {
            sys_.add_row(ilp::Row{{}, -1, ilp::Sense::kLessEqual});
            return;
        }
        if (live.size() == 1) {
            for (auto& row : live.front()) sys_.add_row(std::move(row));
            return;
        }
        ilp::Row pick{{}, 1, ilp::Sense::kEqual};
        std::vector<int> ys;
        for (std::size_t i = 0; i < live.size(); ++i) {
            const int y = sys_.add_var("#y" + std::to_string(indicators_++), 0, 1);
            ys.push_back(y);
            pick.terms.emplace_back(y, 1);
        }
        sys_.add_row(std::move(pick));
        for (std::size_t i = 0; i < live.size(); ++i) {
            for (auto& row : live[i]) {
                const Int big_m = max_activity(row) - row.bound;
                row.terms.emplace_back(ys[i], big_m);
                row.bound += big_m;
                sys_.add_row(std::move(row));
            }
        }
    }

    ilp::LinearSystem sys_;
    std::map<std::string, int> index_;
    int indicators_ = 0;
};

class Engine {
public:
    Engine(Int B, DecideStats* stats) : B_(B), stats_(stats) {}

    /// A point of [-B,B]^vars satisfying the quantifier-free `f`.
    std::optional<pa::Assignment> exists_point(const std::vector<std::string>& vars, const pa::Formula& f) {
        Encoder enc(vars, B_);
        enc.add(f);
        return solve(enc.system(), vars);
    }

    /// Decides forall U exists E: phi. Returns nothing when true, otherwise
    /// a point u for which no e exists. Candidates u are drawn from the
    /// points not yet refuted; each answer e found for a candidate removes
    /// every u that e also answers.
    std::optional<pa::Assignment> forall_exists(const std::vector<std::string>& U, const std::vector<std::string>& E,
                                                const pa::Formula& phi_in) {
        const std::set<std::string> eset(E.begin(), E.end());
        pa::Formula phi = normalize(phi_in);

        if (phi.kind == pa::Kind::kAnd) {
            std::vector<pa::Formula> free_part, rest;
            for (const auto& c : phi.children) (mentions_any(c, eset) ? rest : free_part).push_back(c);
            if (!free_part.empty()) {
                if (auto u = exists_point(U, negation(pa::make_and(free_part)))) return u;
            }
            phi = rest.size() == 1 ? rest.front() : pa::make_and(std::move(rest));
        }
        if (!mentions_any(phi, eset)) return exists_point(U, negation(phi));

        Encoder candidates(U, B_);
        if (phi.kind == pa::Kind::kOr) {
            std::vector<pa::Formula> rest;
            for (const auto& c : phi.children) {
                if (mentions_any(c, eset)) {
                    rest.push_back(c);
                } else {
                    candidates.add(negation(c));
                }
            }
            phi = rest.size() == 1 ? rest.front() : pa::make_or(std::move(rest));
        }

        while (true) {
            auto u = solve(candidates.system(), U);
            if (!u) return std::nullopt;
            auto e = exists_point(E, pa::substitute(phi, *u));
            if (!e) return u;
            if (stats_) ++stats_->refinements;
            candidates.add(negation(pa::substitute(phi, *e)));
        }
    }

    Decision decide(const std::vector<Block>& blocks, const pa::Formula& matrix) {
        if (blocks.empty()) return Decision{pa::eval_qf(matrix, {}), std::nullopt};
        const Block& first = blocks.front();
        const bool ex = first.kind == pa::Kind::kExists;
        if (blocks.size() == 1) {
            auto p = exists_point(first.vars, ex ? matrix : negation(matrix));
            return Decision{ex == p.has_value(), std::move(p)};
        }
        if (blocks.size() == 2) {
            const auto& second = blocks[1].vars;
            auto cex = forall_exists(first.vars, second, ex ? negation(matrix) : matrix);
            return Decision{ex == cex.has_value(), std::move(cex)};
        }
        const std::vector<Block> rest(blocks.begin() + 1, blocks.end());
        std::optional<Decision> out;
        std::vector<Int> lo(first.vars.size(), -B_), point = lo;
        while (true) {
            pa::Assignment a;
            for (std::size_t j = 0; j < point.size(); ++j) a[first.vars[j]] = point[j];
            const bool inner = decide(rest, pa::substitute(matrix, a)).truth;
            if (inner == ex) return Decision{ex, a};
            std::size_t k = point.size();
            while (k > 0 && point[k - 1] == B_) point[--k] = -B_;
            if (k == 0) break;
            ++point[k - 1];
        }
        return Decision{!ex, std::nullopt};
    }

private:
    std::optional<pa::Assignment> solve(const ilp::LinearSystem& sys, const std::vector<std::string>& vars) {
        ilp::SearchStats st;
        auto sol = ilp::solve_feasible(sys, &st);
        if (stats_) {
            ++stats_->ilp_calls;
            stats_->nodes += st.nodes;
        }
        if (!sol) return std::nullopt;
        return restrict_to(sol->point, vars);
    }

    Int B_;
    DecideStats* stats_;
};

inline void check_sentence(const pa::Formula& f) {
    const auto free = pa::free_variables(f);
    if (!free.empty()) throw Error("sentence has free variable '" + *free.begin() + "'");
}

}  // namespace detail

/// Decides the sentence and reports an assignment to the leading block
/// (see Decision).
inline Decision decide(const BoundedSentence& s, DecideStats* stats = nullptr) {
    detail::check_sentence(s.formula);
    const pa::Prenex p = pa::split_prenex(s.formula);
    if (stats) ++stats->decisions;
    detail::Engine engine(effective_bound(s), stats);
    const auto blocks = detail::merged_blocks(p);
    Decision d = engine.decide(blocks, pa::simplify(p.matrix));
    if (d.leading && !p.blocks.empty()) d.leading = detail::restrict_to(*d.leading, p.blocks.front());
    return d;
}

/// Truth of the sentence with every quantifier ranging over the box.
inline bool decide_sentence(const BoundedSentence& s, DecideStats* stats = nullptr) { return decide(s, stats).truth; }

/// Lexicographically least assignment to the leading exists block that
/// makes the rest of the sentence true, or nothing when it is false.
inline std::optional<pa::Assignment> find_witness(const BoundedSentence& s, DecideStats* stats = nullptr) {
    detail::check_sentence(s.formula);
    const pa::Prenex p = pa::split_prenex(s.formula);
    if (p.blocks.empty() || p.quantifiers.front() != pa::Kind::kExists)
        throw Error("find_witness: leading quantifier must be exists");
    const Int B = effective_bound(s);
    const auto& X = p.blocks.front();

    // Sentence with the first `fixed` coordinates pinned and x_i <= cap.
    // Pins are equalities rather than substitutions so that no constant
    // exceeds B and the box stays put.
    auto probe = [&](const pa::Assignment& fixed, std::size_t i, Int cap) {
        std::vector<pa::Formula> parts;
        for (const auto& [v, val] : fixed) parts.push_back(pa::eq(pa::LinearExpr::var(v), pa::LinearExpr(val)));
        parts.push_back(pa::le(pa::LinearExpr::var(X[i]), pa::LinearExpr(cap)));
        parts.push_back(p.matrix);
        pa::Formula f = pa::make_and(std::move(parts));
        for (std::size_t b = p.blocks.size(); b-- > 1;)
            f = p.quantifiers[b] == pa::Kind::kExists ? pa::make_exists(p.blocks[b], std::move(f))
                                                      : pa::make_forall(p.blocks[b], std::move(f));
        f = pa::make_exists(X, std::move(f));
        return decide(BoundedSentence{std::move(f), B}, stats);
    };

    Decision d = decide(BoundedSentence{s.formula, B}, stats);
    if (!d.truth) return std::nullopt;
    pa::Assignment witness = *d.leading;
    pa::Assignment fixed;
    for (std::size_t i = 0; i < X.size(); ++i) {
        Int hi = witness.at(X[i]);
        Int lo = -B;
        if (hi > lo) {
            Decision below = probe(fixed, i, hi - 1);
            if (below.truth) {
                witness = *below.leading;
                hi = witness.at(X[i]);
                while (lo < hi) {
                    const Int mid = ilp::detail::floor_div(lo + hi, 2);
                    Decision t = probe(fixed, i, mid);
                    if (t.truth) {
                        witness = *t.leading;
                        hi = witness.at(X[i]);
                    } else {
                        lo = mid + 1;
                    }
                }
            }
        }
        fixed[X[i]] = hi;
        witness[X[i]] = hi;
    }
    return fixed;
}

}  // namespace minmove::quant
