#pragma once

#include <cctype>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "minmove/pa/formula.hpp"

namespace minmove::pa {

namespace detail {

enum class Tok { kIdent, kInt, kSymbol, kKeyword, kEnd };

struct Token {
    Tok type = Tok::kEnd;
    std::string text;
    Int value = 0;
    int line = 1;
    int column = 1;
};

inline bool is_keyword(std::string_view word) {
    return word == "exists" || word == "forall" || word == "and" || word == "or" || word == "not";
}

inline std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        const char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            advance(1);
            continue;
        }
        if (ch == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token tok;
        tok.line = line;
        tok.column = col;
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            tok.text = std::string(text.substr(i, j - i));
            tok.type = is_keyword(tok.text) ? Tok::kKeyword : Tok::kIdent;
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            tok.text = std::string(text.substr(i, j - i));
            tok.type = Tok::kInt;
            try {
                tok.value = std::stoll(tok.text);
            } catch (const std::out_of_range&) {
                throw ParseError("integer literal out of range", line, col);
            }
            advance(j - i);
        } else {
            const std::string_view two = text.substr(i, 2);
            if (two == "<=" || two == ">=") {
                tok.text = std::string(two);
            } else if (std::string_view("<>=+-*():").find(ch) != std::string_view::npos) {
                tok.text = std::string(1, ch);
            } else {
                throw ParseError(std::string("unknown token '") + ch + "'", line, col);
            }
            tok.type = Tok::kSymbol;
            advance(tok.text.size());
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

    Formula parse_all() {
        Formula f = formula();
        if (peek().type != Tok::kEnd) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, peek().line, peek().column);
    }

    bool at_keyword(std::string_view kw) const {
        return peek().type == Tok::kKeyword && peek().text == kw;
    }
    bool at_symbol(std::string_view sym) const {
        return peek().type == Tok::kSymbol && peek().text == sym;
    }
    void expect_symbol(std::string_view sym) {
        if (!at_symbol(sym)) fail("expected '" + std::string(sym) + "'");
        ++pos_;
    }

    Formula formula() {
        if (at_keyword("exists") || at_keyword("forall")) {
            const bool ex = take().text == "exists";
            std::vector<std::string> block;
            while (peek().type == Tok::kIdent) {
                const Token& name = peek();
                if (bound_.count(name.text)) fail("variable '" + name.text + "' is already bound");
                for (const auto& b : block)
                    if (b == name.text) fail("variable '" + name.text + "' is already bound");
                block.push_back(take().text);
            }
            if (block.empty()) fail("expected a variable after quantifier");
            expect_symbol(":");
            for (const auto& v : block) bound_.insert(v);
            Formula body = formula();
            for (const auto& v : block) bound_.erase(v);
            return ex ? make_exists(std::move(block), std::move(body))
                      : make_forall(std::move(block), std::move(body));
        }
        return disjunction();
    }

    Formula disjunction() {
        std::vector<Formula> parts{conjunction()};
        while (at_keyword("or")) {
            ++pos_;
            parts.push_back(conjunction());
        }
        return parts.size() == 1 ? std::move(parts.front()) : make_or(std::move(parts));
    }

    Formula conjunction() {
        std::vector<Formula> parts{unit()};
        while (at_keyword("and")) {
            ++pos_;
            parts.push_back(unit());
        }
        return parts.size() == 1 ? std::move(parts.front()) : make_and(std::move(parts));
    }

    Formula unit() {
        if (at_keyword("not")) {
            ++pos_;
            return make_not(unit());
        }
        if (at_symbol("(")) {
            ++pos_;
            Formula inner = formula();
            expect_symbol(")");
            return inner;
        }
        return atom();
    }

    Formula atom() {
        const LinearExpr lhs = linexpr();
        if (peek().type != Tok::kSymbol) fail("expected a comparison");
        const std::string op = peek().text;
        if (op != "<=" && op != ">=" && op != "=" && op != "<" && op != ">") fail("expected a comparison");
        ++pos_;
        const LinearExpr rhs = linexpr();
        if (op == "<=") return le(lhs, rhs);
        if (op == ">=") return ge(lhs, rhs);
        if (op == "<") return lt(lhs, rhs);
        if (op == ">") return gt(lhs, rhs);
        return eq(lhs, rhs);
    }

    LinearExpr linexpr() {
        LinearExpr e;
        Int sign = 1;
        if (at_symbol("-")) {
            ++pos_;
            sign = -1;
        }
        e += term(sign);
        while (at_symbol("+") || at_symbol("-")) {
            sign = take().text == "+" ? 1 : -1;
            e += term(sign);
        }
        return e;
    }

    LinearExpr term(Int sign) {
        if (peek().type == Tok::kIdent) return LinearExpr::var(take().text, sign);
        if (peek().type == Tok::kInt) {
            const Int value = take().value;
            if (at_symbol("*")) {
                ++pos_;
                if (peek().type != Tok::kIdent) fail("expected a variable after '*'");
                return LinearExpr::var(take().text, sign * value);
            }
            return LinearExpr(sign * value);
        }
        fail(peek().type == Tok::kEnd ? "unexpected end of input" : "unexpected '" + peek().text + "'");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::set<std::string> bound_;
};

inline std::string print_atom(const LinearAtom& a) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, c] : a.coeffs) {
        const Int mag = c < 0 ? -c : c;
        if (first) {
            if (c < 0) os << '-';
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (mag != 1) os << mag << '*';
        os << v;
        first = false;
    }
    if (first) os << '0';
    os << " <= " << a.bound;
    return os.str();
}

inline void print_into(std::ostringstream& os, const Formula& f);

inline void print_operand(std::ostringstream& os, const Formula& f) {
    const bool bare = f.kind == Kind::kAtom || f.kind == Kind::kNot;
    if (!bare) os << '(';
    print_into(os, f);
    if (!bare) os << ')';
}

inline void print_into(std::ostringstream& os, const Formula& f) {
    switch (f.kind) {
    case Kind::kAtom:
        os << print_atom(f.atom);
        return;
    case Kind::kNot:
        os << "not ";
        print_operand(os, f.body());
        return;
    case Kind::kAnd:
    case Kind::kOr: {
        if (f.children.empty()) {
            os << (f.kind == Kind::kAnd ? "0 <= 0" : "0 <= -1");
            return;
        }
        if (f.children.size() == 1) {
            print_into(os, f.children.front());
            return;
        }
        const char* sep = f.kind == Kind::kAnd ? " and " : " or ";
        for (std::size_t i = 0; i < f.children.size(); ++i) {
            if (i) os << sep;
            print_operand(os, f.children[i]);
        }
        return;
    }
    case Kind::kExists:
    case Kind::kForall:
        os << (f.kind == Kind::kExists ? "exists" : "forall");
        for (const auto& v : f.block) os << ' ' << v;
        os << " : ";
        print_into(os, f.body());
        return;
    }
}

}  // namespace detail

/// Parses the formula grammar. Surface relations are normalized to `<=`
/// atoms (equality becomes a conjunction of two atoms).
inline Formula parse_formula(std::string_view text) { return detail::Parser(text).parse_all(); }

/// Renders a formula in the grammar accepted by parse_formula.
inline std::string print_formula(const Formula& f) {
    std::ostringstream os;
    detail::print_into(os, f);
    return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << print_formula(f); }

}  // namespace minmove::pa
