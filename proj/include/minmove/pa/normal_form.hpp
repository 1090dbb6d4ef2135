#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minmove/ilp/linear_system.hpp"
#include "minmove/pa/formula.hpp"

namespace minmove::pa {

namespace detail {

inline void collect_vars(const Formula& f, std::set<std::string>& bound,
                         std::set<std::string>& free_out, std::set<std::string>* all_bound) {
    switch (f.kind) {
    case Kind::kAtom:
        for (const auto& [v, c] : f.atom.coeffs)
            if (!bound.count(v)) free_out.insert(v);
        return;
    case Kind::kExists:
    case Kind::kForall: {
        std::vector<std::string> added;
        for (const auto& v : f.block) {
            if (all_bound) all_bound->insert(v);
            if (bound.insert(v).second) added.push_back(v);
        }
        collect_vars(f.body(), bound, free_out, all_bound);
        for (const auto& v : added) bound.erase(v);
        return;
    }
    default:
        for (const auto& c : f.children) collect_vars(c, bound, free_out, all_bound);
    }
}

}  // namespace detail

/// Variables not bound by any enclosing quantifier.
inline std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    detail::collect_vars(f, bound, out, nullptr);
    return out;
}

/// Every variable named by some quantifier block.
inline std::set<std::string> bound_variables(const Formula& f) {
    std::set<std::string> bound, free_out, all;
    detail::collect_vars(f, bound, free_out, &all);
    return all;
}

inline bool is_quantifier_free(const Formula& f) {
    if (f.is_quantifier()) return false;
    return std::all_of(f.children.begin(), f.children.end(),
                       [](const Formula& c) { return is_quantifier_free(c); });
}

inline bool eval_atom(const LinearAtom& a, const Assignment& values) {
    Int sum = 0;
    for (const auto& [v, c] : a.coeffs) {
        auto it = values.find(v);
        if (it == values.end()) throw Error("unbound variable '" + v + "'");
        sum += c * it->second;
    }
    return sum <= a.bound;
}

/// Truth value of a quantifier-free formula under integer semantics.
inline bool eval_qf(const Formula& f, const Assignment& values) {
    switch (f.kind) {
    case Kind::kAtom:
        return eval_atom(f.atom, values);
    case Kind::kAnd:
        for (const auto& c : f.children)
            if (!eval_qf(c, values)) return false;
        return true;
    case Kind::kOr:
        for (const auto& c : f.children)
            if (eval_qf(c, values)) return true;
        return false;
    case Kind::kNot:
        return !eval_qf(f.body(), values);
    default:
        throw Error("eval_qf: formula has quantifiers");
    }
}

namespace detail {

inline Formula nnf(const Formula& f, bool negate) {
    switch (f.kind) {
    case Kind::kAtom:
        return negate ? make_atom(f.atom.negated()) : f;
    case Kind::kNot:
        return nnf(f.body(), !negate);
    case Kind::kAnd:
    case Kind::kOr: {
        std::vector<Formula> parts;
        parts.reserve(f.children.size());
        for (const auto& c : f.children) parts.push_back(nnf(c, negate));
        const bool conj = (f.kind == Kind::kAnd) != negate;
        return conj ? make_and(std::move(parts)) : make_or(std::move(parts));
    }
    case Kind::kExists:
    case Kind::kForall: {
        const bool ex = (f.kind == Kind::kExists) != negate;
        Formula body = nnf(f.body(), negate);
        return ex ? make_exists(f.block, std::move(body)) : make_forall(f.block, std::move(body));
    }
    }
    return f;
}

}  // namespace detail

/// Pushes negations down to the atoms (quantifiers are dualized).
inline Formula to_nnf(const Formula& f) { return detail::nnf(f, false); }

/// A negation-free formula equivalent to not(f).
inline Formula negate_nnf(const Formula& f) {
    if (!is_quantifier_free(f)) throw Error("negate_nnf: formula has quantifiers");
    return detail::nnf(f, true);
}

/// Constant folding: variable-free atoms become true/false, nested
/// connectives of the same kind are flattened, and absorbing constants
/// collapse their parent. Quantifiers are kept (with simplified bodies).
inline Formula simplify(const Formula& f) {
    switch (f.kind) {
    case Kind::kAtom:
        if (f.atom.is_constant()) return f.atom.bound >= 0 ? make_true() : make_false();
        return f;
    case Kind::kNot: {
        Formula inner = simplify(f.body());
        if (inner.kind == Kind::kAtom) return make_atom(inner.atom.negated());
        if (inner.kind == Kind::kAnd && inner.children.empty()) return make_false();
        if (inner.kind == Kind::kOr && inner.children.empty()) return make_true();
        return make_not(std::move(inner));
    }
    case Kind::kAnd:
    case Kind::kOr: {
        const Kind self = f.kind;
        std::vector<Formula> parts;
        for (const auto& c : f.children) {
            Formula s = simplify(c);
            if (s.kind == self) {
                for (auto& g : s.children) parts.push_back(std::move(g));
                continue;
            }
            const bool absorbing = (s.kind == Kind::kAnd || s.kind == Kind::kOr) &&
                                   s.children.empty() && s.kind != self;
            if (absorbing) return s;
            parts.push_back(std::move(s));
        }
        if (parts.size() == 1) return std::move(parts.front());
        return self == Kind::kAnd ? make_and(std::move(parts)) : make_or(std::move(parts));
    }
    case Kind::kExists:
    case Kind::kForall: {
        Formula body = simplify(f.body());
        if (body.kind == Kind::kAnd && body.children.empty()) return body;
        if (body.kind == Kind::kOr && body.children.empty()) return body;
        return f.kind == Kind::kExists ? make_exists(f.block, std::move(body))
                                       : make_forall(f.block, std::move(body));
    }
    }
    return f;
}

using Conjunction = std::vector<LinearAtom>;

namespace detail {

inline void push_unique(Conjunction& conj, const LinearAtom& a) {
    if (std::find(conj.begin(), conj.end(), a) == conj.end()) conj.push_back(a);
}

/// Disjunct list with order-insensitive deduplication.
class DisjunctSet {
public:
    void add(Conjunction c) {
        Conjunction key = c;
        std::sort(key.begin(), key.end());
        if (keys_.insert(std::move(key)).second) items_.push_back(std::move(c));
    }
    std::size_t size() const noexcept { return items_.size(); }
    std::vector<Conjunction> release() { return std::move(items_); }

private:
    std::vector<Conjunction> items_;
    std::set<Conjunction> keys_;
};

inline std::vector<Conjunction> dnf_of_nnf(const Formula& f, std::size_t limit) {
    switch (f.kind) {
    case Kind::kAtom:
        return {Conjunction{f.atom}};
    case Kind::kOr: {
        DisjunctSet out;
        for (const auto& c : f.children)
            for (auto& d : dnf_of_nnf(c, limit)) out.add(std::move(d));
        return out.release();
    }
    case Kind::kAnd: {
        std::vector<Conjunction> acc{Conjunction{}};
        for (const auto& c : f.children) {
            const auto part = dnf_of_nnf(c, limit);
            DisjunctSet next;
            for (const auto& left : acc) {
                for (const auto& right : part) {
                    Conjunction merged = left;
                    for (const auto& a : right) push_unique(merged, a);
                    next.add(std::move(merged));
                    if (next.size() > limit) throw Error("to_dnf: disjunct limit exceeded");
                }
            }
            acc = next.release();
        }
        return acc;
    }
    default:
        throw Error("to_dnf: formula has quantifiers");
    }
}

}  // namespace detail

/// Disjuncts of an equivalent DNF as atom lists. Exact distribution after
/// NNF push-down; identical atoms and identical disjuncts are merged.
inline std::vector<Conjunction> dnf_conjunctions(const Formula& f,
                                                 std::size_t limit = std::size_t{1} << 18) {
    if (!is_quantifier_free(f)) throw Error("to_dnf: formula has quantifiers");
    return detail::dnf_of_nnf(to_nnf(f), limit);
}

/// Row form of a conjunction over the given variable order.
inline ilp::LinearSystem conjunction_to_system(const Conjunction& atoms,
                                               const std::vector<std::string>& vars) {
    ilp::LinearSystem sys(vars);
    std::map<std::string, int> index;
    for (std::size_t j = 0; j < vars.size(); ++j) index.emplace(vars[j], static_cast<int>(j));
    for (const auto& a : atoms) {
        ilp::Row row;
        row.bound = a.bound;
        for (const auto& [v, c] : a.coeffs) {
            auto it = index.find(v);
            if (it == index.end()) throw Error("variable '" + v + "' missing from system");
            row.terms.emplace_back(it->second, c);
        }
        std::sort(row.terms.begin(), row.terms.end());
        sys.add_row(std::move(row));
    }
    return sys;
}

/// Equivalent DNF as one linear system per disjunct; every system is over
/// the sorted variable set of `f` and carries no box.
inline std::vector<ilp::LinearSystem> to_dnf(const Formula& f) {
    const auto names = free_variables(f);
    const std::vector<std::string> vars(names.begin(), names.end());
    std::vector<ilp::LinearSystem> out;
    for (const auto& conj : dnf_conjunctions(f)) out.push_back(conjunction_to_system(conj, vars));
    return out;
}

/// Splits a formula into its leading quantifier blocks and its matrix.
struct Prenex {
    std::vector<Kind> quantifiers;
    std::vector<std::vector<std::string>> blocks;
    Formula matrix;
};

inline Prenex split_prenex(const Formula& f) {
    Prenex out;
    const Formula* cur = &f;
    while (cur->is_quantifier()) {
        out.quantifiers.push_back(cur->kind);
        out.blocks.push_back(cur->block);
        cur = &cur->body();
    }
    if (!is_quantifier_free(*cur)) throw Error("formula is not prenex");
    out.matrix = *cur;
    return out;
}

namespace detail {

// Largest |bound| among atoms that survive into the DNF of the NNF of f;
// nothing when f has no disjuncts at all.
inline std::optional<Int> dnf_max_constant(const Formula& f, bool negate) {
    switch (f.kind) {
    case Kind::kAtom:
        return std::abs(negate ? f.atom.negated().bound : f.atom.bound);
    case Kind::kNot:
        return dnf_max_constant(f.body(), !negate);
    case Kind::kAnd:
    case Kind::kOr: {
        const bool conj = (f.kind == Kind::kAnd) != negate;
        std::optional<Int> out;
        if (conj) out = 0;
        for (const auto& c : f.children) {
            const auto part = dnf_max_constant(c, negate);
            if (!part) {
                if (conj) return std::nullopt;
                continue;
            }
            out = std::max(out.value_or(0), *part);
        }
        return out;
    }
    default:
        throw Error("to_dnf: formula has quantifiers");
    }
}

}  // namespace detail

/// measure(f).max_constant without building the DNF.
inline Int max_constant(const Formula& f) {
    return detail::dnf_max_constant(split_prenex(f).matrix, false).value_or(0);
}

inline FormulaParams measure(const Formula& f) {
    const Prenex p = split_prenex(f);
    FormulaParams params;
    params.depth = static_cast<int>(p.blocks.size());
    params.dims.push_back(static_cast<int>(free_variables(f).size()));
    for (const auto& b : p.blocks) params.dims.push_back(static_cast<int>(b.size()));
    const auto dnf = dnf_conjunctions(p.matrix);
    params.disjunctions = static_cast<int>(dnf.size());
    for (const auto& conj : dnf) {
        params.conjunctions = std::max(params.conjunctions, static_cast<int>(conj.size()));
        for (const auto& a : conj) {
            params.max_constant = std::max(params.max_constant, std::abs(a.bound));
            for (const auto& [v, c] : a.coeffs) params.max_coeff = std::max(params.max_coeff, std::abs(c));
        }
    }
    return params;
}

namespace detail {

inline Formula substitute_unchecked(const Formula& f, const Assignment& bindings) {
    if (f.kind == Kind::kAtom) {
        LinearAtom a;
        a.bound = f.atom.bound;
        for (const auto& [v, c] : f.atom.coeffs) {
            auto it = bindings.find(v);
            if (it == bindings.end()) {
                a.coeffs.emplace(v, c);
            } else {
                a.bound -= c * it->second;
            }
        }
        return make_atom(std::move(a));
    }
    Formula out = f;
    for (auto& c : out.children) c = substitute_unchecked(c, bindings);
    return out;
}

}  // namespace detail

/// Fixes free variables to constants, folding them into atom bounds.
inline Formula substitute(const Formula& f, const Assignment& bindings) {
    if (bindings.empty()) return f;
    const auto bound = bound_variables(f);
    for (const auto& [v, value] : bindings)
        if (bound.count(v)) throw Error("cannot substitute quantified variable '" + v + "'");
    return detail::substitute_unchecked(f, bindings);
}

/// Replaces each free occurrence of a variable by an affine expression.
/// Expressions must not mention variables bound inside `f`.
inline Formula substitute_expr(const Formula& f, const std::map<std::string, LinearExpr>& exprs) {
    if (f.kind == Kind::kAtom) {
        LinearExpr lhs;
        for (const auto& [v, c] : f.atom.coeffs) {
            auto it = exprs.find(v);
            lhs += it == exprs.end() ? LinearExpr::var(v, c) : c * it->second;
        }
        return le(lhs, LinearExpr(f.atom.bound));
    }
    if (f.is_quantifier()) {
        auto shadowed = exprs;
        for (const auto& v : f.block) shadowed.erase(v);
        Formula out = f;
        out.children[0] = substitute_expr(f.body(), shadowed);
        return out;
    }
    Formula out = f;
    for (auto& c : out.children) c = substitute_expr(c, exprs);
    return out;
}

/// Renames variables everywhere (free and bound occurrences alike).
inline Formula rename(const Formula& f, const std::map<std::string, std::string>& names) {
    auto mapped = [&](const std::string& v) {
        auto it = names.find(v);
        return it == names.end() ? v : it->second;
    };
    Formula out = f;
    if (f.kind == Kind::kAtom) {
        out.atom.coeffs.clear();
        for (const auto& [v, c] : f.atom.coeffs) out.atom.coeffs[mapped(v)] += c;
        std::erase_if(out.atom.coeffs, [](const auto& kv) { return kv.second == 0; });
        return out;
    }
    for (auto& v : out.block) v = mapped(v);
    for (auto& c : out.children) c = rename(c, names);
    return out;
}

}  // namespace minmove::pa
