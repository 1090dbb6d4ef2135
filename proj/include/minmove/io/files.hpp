#pragma once

// Readers for the line-oriented election, referendum and society formats.
// '#' starts a comment; blank lines are ignored.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "minmove/election/election.hpp"
#include "minmove/error.hpp"
#include "minmove/society/society.hpp"

namespace minmove::io {

namespace detail {

struct Word {
    std::string text;
    int column = 1;
};

struct Line {
    int number = 0;
    std::vector<Word> words;
};

inline std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            if (std::isspace(static_cast<unsigned char>(raw[i]))) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
            line.words.push_back(Word{raw.substr(i, j - i), static_cast<int>(i) + 1});
            i = j;
        }
        if (!line.words.empty()) out.push_back(std::move(line));
    }
    return out;
}

[[noreturn]] inline void fail(const Line& line, std::size_t word, const std::string& message) {
    const int col = word < line.words.size() ? line.words[word].column
                                             : (line.words.empty() ? 1
                                                                   : line.words.back().column +
                                                                         static_cast<int>(line.words.back().text.size()));
    throw ParseError(message, line.number, col);
}

inline Int integer(const Line& line, std::size_t word, Int min) {
    if (word >= line.words.size()) fail(line, word, "expected an integer");
    const std::string& w = line.words[word].text;
    std::size_t used = 0;
    Int v = 0;
    try {
        v = std::stoll(w, &used);
    } catch (const std::exception&) {
        fail(line, word, "expected an integer, got '" + w + "'");
    }
    if (used != w.size()) fail(line, word, "expected an integer, got '" + w + "'");
    if (v < min) fail(line, word, "value must be at least " + std::to_string(min));
    return v;
}

inline void expect_word(const Line& line, std::size_t word, const std::string& want) {
    if (word >= line.words.size() || line.words[word].text != want) fail(line, word, "expected '" + want + "'");
}

inline bool yes_no(const Line& line, std::size_t word) {
    const std::string& w = line.words[word].text;
    if (w == "yes") return true;
    if (w == "no") return false;
    fail(line, word, "expected yes or no, got '" + w + "'");
}

inline society::Cost cost(const Line& line, std::size_t word) {
    if (word < line.words.size() && line.words[word].text == "inf") return society::Cost::infinity();
    return society::Cost(integer(line, word, 0));
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// candidates a b c / voters 3 : a > b > c / swapcost a b 2
inline election::Election parse_election(const std::string& text) {
    std::optional<election::Election> e;
    for (const auto& line : detail::split_lines(text)) {
        const std::string& head = line.words[0].text;
        if (head == "candidates") {
            if (e) detail::fail(line, 0, "candidates declared twice");
            std::vector<std::string> names;
            for (std::size_t k = 1; k < line.words.size(); ++k) names.push_back(line.words[k].text);
            if (names.empty()) detail::fail(line, 1, "expected at least one candidate");
            try {
                e.emplace(names);
            } catch (const ParseError&) {
                throw;
            } catch (const Error& err) {
                detail::fail(line, 1, err.what());
            }
            continue;
        }
        if (!e) detail::fail(line, 0, "candidates must come first");
        if (head == "voters") {
            const Int count = detail::integer(line, 1, 1);
            detail::expect_word(line, 2, ":");
            std::vector<std::string> order;
            for (std::size_t k = 3; k < line.words.size(); ++k) {
                if ((k - 3) % 2 == 1) {
                    detail::expect_word(line, k, ">");
                    continue;
                }
                const std::string& name = line.words[k].text;
                if (std::find(e->candidates().begin(), e->candidates().end(), name) == e->candidates().end())
                    detail::fail(line, k, "unknown candidate '" + name + "'");
                order.push_back(name);
            }
            if (line.words.size() % 2 == 1 && line.words.size() > 3) detail::fail(line, line.words.size(), "dangling '>'");
            try {
                e->add_voters(order, count);
            } catch (const Error& err) {
                detail::fail(line, 3, err.what());
            }
        } else if (head == "swapcost") {
            if (line.words.size() != 4) detail::fail(line, line.words.size() < 4 ? line.words.size() : 4, "expected: swapcost a b cost");
            int idx[2];
            for (std::size_t k = 1; k <= 2; ++k) {
                const std::string& name = line.words[k].text;
                auto it = std::find(e->candidates().begin(), e->candidates().end(), name);
                if (it == e->candidates().end()) detail::fail(line, k, "unknown candidate '" + name + "'");
                idx[k - 1] = static_cast<int>(it - e->candidates().begin());
            }
            if (idx[0] == idx[1]) detail::fail(line, 2, "swap cost needs two distinct candidates");
            e->set_swap_cost(idx[0], idx[1], detail::integer(line, 3, 1));
        } else {
            detail::fail(line, 0, "unknown directive '" + head + "'");
        }
    }
    if (!e) throw ParseError("missing candidates line", 1, 1);
    return *e;
}

/// issues p q / ballots 2 : yes no / agenda yes yes
inline election::Referendum parse_referendum(const std::string& text) {
    election::Referendum r;
    bool have_issues = false, have_agenda = false;
    for (const auto& line : detail::split_lines(text)) {
        const std::string& head = line.words[0].text;
        if (head == "issues") {
            if (have_issues) detail::fail(line, 0, "issues declared twice");
            for (std::size_t k = 1; k < line.words.size(); ++k) r.issues.push_back(line.words[k].text);
            if (r.issues.empty()) detail::fail(line, 1, "expected at least one issue");
            if (r.issues.size() > 16) detail::fail(line, 17, "too many issues");
            have_issues = true;
            continue;
        }
        if (!have_issues) detail::fail(line, 0, "issues must come first");
        if (head == "ballots") {
            const Int count = detail::integer(line, 1, 1);
            detail::expect_word(line, 2, ":");
            if (line.words.size() != 3 + r.issues.size()) detail::fail(line, 3 + r.issues.size(), "ballot must answer every issue");
            std::vector<bool> ballot;
            for (std::size_t k = 3; k < line.words.size(); ++k) ballot.push_back(detail::yes_no(line, k));
            r.tallies[ballot] += count;
        } else if (head == "agenda") {
            if (have_agenda) detail::fail(line, 0, "agenda declared twice");
            if (line.words.size() != 1 + r.issues.size()) detail::fail(line, 1 + r.issues.size(), "agenda must answer every issue");
            for (std::size_t k = 1; k < line.words.size(); ++k) r.agenda.push_back(detail::yes_no(line, k));
            have_agenda = true;
        } else {
            detail::fail(line, 0, "unknown directive '" + head + "'");
        }
    }
    if (!have_issues) throw ParseError("missing issues line", 1, 1);
    if (!have_agenda) throw ParseError("missing agenda line", 1, 1);
    return r;
}

struct SocietyFile {
    society::Society society;
    society::MoveCosts costs;
    society::MoveCosts adversary_costs;
};

/// types 3 / count i n / cost i j k|inf / adversary_cost i j k|inf, types
/// numbered from 0. Unlisted counts are 0, unlisted costs 1, and adversary
/// costs default to ours.
inline SocietyFile parse_society(const std::string& text) {
    std::optional<std::size_t> tau;
    std::vector<Int> counts;
    society::MoveCosts costs;
    std::vector<std::tuple<std::size_t, std::size_t, society::Cost>> adversary;
    for (const auto& line : detail::split_lines(text)) {
        const std::string& head = line.words[0].text;
        if (head == "types") {
            if (tau) detail::fail(line, 0, "types declared twice");
            const Int t = detail::integer(line, 1, 1);
            if (t > 64) detail::fail(line, 1, "too many types");
            tau = static_cast<std::size_t>(t);
            counts.assign(*tau, 0);
            costs = society::MoveCosts(*tau);
            continue;
        }
        if (!tau) detail::fail(line, 0, "types must come first");
        auto type_at = [&](std::size_t word) {
            const Int i = detail::integer(line, word, 0);
            if (i >= static_cast<Int>(*tau)) detail::fail(line, word, "type index out of range");
            return static_cast<std::size_t>(i);
        };
        if (head == "count") {
            const std::size_t i = type_at(1);
            counts[i] = detail::integer(line, 2, 0);
        } else if (head == "cost" || head == "adversary_cost") {
            const std::size_t i = type_at(1), j = type_at(2);
            const society::Cost c = detail::cost(line, 3);
            if (i == j && c != society::Cost(0)) detail::fail(line, 3, "diagonal cost must be 0");
            if (head == "cost") {
                costs.at(i, j) = c;
            } else {
                adversary.emplace_back(i, j, c);
            }
        } else {
            detail::fail(line, 0, "unknown directive '" + head + "'");
        }
    }
    if (!tau) throw ParseError("missing types line", 1, 1);
    SocietyFile out{society::Society(counts), costs, costs};
    for (const auto& [i, j, c] : adversary) out.adversary_costs.at(i, j) = c;
    return out;
}

}  // namespace minmove::io
