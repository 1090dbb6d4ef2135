// Acceptance suite: one PASS/FAIL line per criterion, each with its own
// pinned time limit. Exit status is 0 only when every failure is listed
// with --known-failure.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "minmove/election/election.hpp"
#include "minmove/ilp/flatten.hpp"
#include "minmove/ilp/solver.hpp"
#include "minmove/oracle/oracle.hpp"
#include "minmove/pa/normal_form.hpp"
#include "minmove/pa/text.hpp"
#include "minmove/quant/solver.hpp"
#include "minmove/solver/adversarial.hpp"
#include "minmove/solver/election.hpp"
#include "minmove/solver/minmove.hpp"
#include "support/generators.hpp"

using namespace minmove;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    // Records the first failure only.
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
};

const char* kExampleFormula =
    "forall x1 x2 : exists z1 z2 z3 : (x1 + y = z3 and y >= 0) or "
    "(3*x1 + 10*y - 3*z1 <= 13 and 2*x2 + 5*y - z2 <= 11 and x1 + 1*y - z3 >= 9 and z1 - z2 + 2*z3 <= 6)";

// All 56 profiles of three voters over three candidates.
std::vector<election::Election> all_profiles() {
    std::vector<election::Election> out;
    for (Int a = 0; a < 6; ++a)
        for (Int b = a; b < 6; ++b)
            for (Int c = b; c < 6; ++c) {
                election::Election e({"a", "b", "c"});
                for (Int r : {a, b, c}) e.add_voters(election::unrank_order(r, 3), 1);
                out.push_back(e);
            }
    return out;
}

std::string profile_text(const election::Election& e) {
    std::ostringstream os;
    for (const auto& [order, k] : e.tallies()) {
        os << k << "x";
        for (int c : order) os << e.candidates()[static_cast<std::size_t>(c)];
        os << " ";
    }
    return os.str();
}

std::string opt(const std::optional<Int>& v) { return v ? std::to_string(*v) : "none"; }

// Metric costs from random points on a line, at least 1 off the diagonal.
society::MoveCosts line_costs(support::Rng& rng, std::size_t tau, Int spread) {
    std::vector<Int> at(tau);
    for (auto& x : at) x = support::uniform(rng, 0, spread);
    society::MoveCosts c(tau);
    for (std::size_t i = 0; i < tau; ++i)
        for (std::size_t j = 0; j < tau; ++j)
            if (i != j) c.at(i, j) = std::max<Int>(1, std::abs(at[i] - at[j]));
    return c;
}

society::Society random_society(support::Rng& rng, std::size_t tau, Int pop) {
    std::vector<Int> counts(tau, 0);
    for (Int k = 0; k < pop; ++k) counts[static_cast<std::size_t>(support::uniform(rng, 0, static_cast<Int>(tau) - 1))]++;
    return society::Society(counts);
}

// 1 -----------------------------------------------------------------------

Outcome measure_example() {
    Outcome out;
    const pa::FormulaParams got = pa::measure(pa::parse_formula(kExampleFormula));
    const pa::FormulaParams want{2, {1, 2, 3}, 2, 4, 10, 13};
    std::ostringstream os;
    os << "k=" << got.depth << " n=(";
    for (std::size_t i = 0; i < got.dims.size(); ++i) os << (i ? "," : "") << got.dims[i];
    os << ") delta=" << got.disjunctions << " gamma=" << got.conjunctions << " alpha=" << got.max_coeff
       << " beta=" << got.max_constant;
    out.detail = os.str();
    if (!(got == want)) out.ok = false;
    return out;
}

// 2 -----------------------------------------------------------------------

Outcome flatten_random() {
    Outcome out;
    support::Rng rng(2);
    int shape_ok = 0, projection_ok = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Int B = support::uniform(rng, 1, 4);
        const auto n = static_cast<std::size_t>(support::uniform(rng, 1, 3));
        const auto d = static_cast<std::size_t>(support::uniform(rng, 1, 3));
        const int m = static_cast<int>(support::uniform(rng, 1, 3));
        const auto vars = support::names("x", n);
        std::vector<ilp::LinearSystem> systems;
        for (std::size_t i = 0; i < d; ++i) systems.push_back(support::random_system(rng, vars, m, B));
        const ilp::LinearSystem flat = ilp::flatten_disjunction(systems, B);

        const Int M = B * B * static_cast<Int>(n);
        bool shape = flat.num_rows() == static_cast<std::size_t>(m) * d + d + 1 && flat.num_vars() == n + d;
        Int widest = 0;
        for (const auto& row : flat.rows())
            for (const auto& [j, a] : row.terms) widest = std::max(widest, std::abs(a));
        shape = shape && widest == M;
        if (shape) {
            ++shape_ok;
        } else {
            out.fail("trial " + std::to_string(trial) + ": wrong shape or M");
        }

        // Projection by enumeration of x and the binary indicators.
        bool same = true;
        std::vector<Int> lo(n + d, -B), hi(n + d, B);
        for (std::size_t j = n; j < n + d; ++j) lo[j] = 0, hi[j] = 1;
        support::for_each_point(n, -B, B, [&](const std::vector<Int>& x) {
            bool in_union = false;
            for (const auto& s : systems) in_union = in_union || s.contains(x);
            bool projected = false;
            support::for_each_point(d, 0, 1, [&](const std::vector<Int>& y) {
                std::vector<Int> point = x;
                point.insert(point.end(), y.begin(), y.end());
                projected = projected || flat.contains(point);
            });
            if (in_union != projected && same) {
                same = false;
                std::ostringstream os;
                os << "trial " << trial << " (B=" << B << " n=" << n << " d=" << d << " m=" << m << "): x=(";
                for (std::size_t j = 0; j < n; ++j) os << (j ? "," : "") << x[j];
                os << ") union=" << in_union << " projection=" << projected;
                out.fail(os.str());
            }
        });
        if (same) ++projection_ok;
    }
    const std::string tally =
        "shape " + std::to_string(shape_ok) + "/200, projection " + std::to_string(projection_ok) + "/200";
    out.detail = out.ok ? tally : tally + "; first: " + out.detail;
    return out;
}

// 3 -----------------------------------------------------------------------

Outcome dnf_soundness() {
    Outcome out;
    support::Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto vars = support::names("v", static_cast<std::size_t>(support::uniform(rng, 1, 3)));
        const pa::Formula f = support::random_qf(rng, vars, 3, 3, 3);
        const auto dnf = pa::to_dnf(f);
        const pa::Formula neg = pa::negate_nnf(f);
        support::for_each_point(vars.size(), -3, 3, [&](const std::vector<Int>& p) {
            const auto a = support::bind(vars, p);
            const bool truth = pa::eval_qf(f, a);
            bool dnf_truth = false;
            for (const auto& sys : dnf) {
                std::vector<Int> point;
                for (const auto& v : sys.vars()) point.push_back(a.at(v));
                dnf_truth = dnf_truth || sys.contains(point);
            }
            if (dnf_truth != truth) out.fail("to_dnf differs on " + pa::print_formula(f));
            if (pa::eval_qf(neg, a) == truth) out.fail("negate_nnf differs on " + pa::print_formula(f));
        });
    }
    if (out.ok) out.detail = "200 formulas";
    return out;
}

// 4 -----------------------------------------------------------------------

Outcome decide_random() {
    Outcome out;
    support::Rng rng(4);
    int trues = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Int B = support::uniform(rng, 1, 4);
        const auto xs = support::names("x", static_cast<std::size_t>(support::uniform(rng, 1, 2)));
        const auto ys = support::names("y", static_cast<std::size_t>(support::uniform(rng, 1, 2)));
        std::vector<std::string> all = xs;
        all.insert(all.end(), ys.begin(), ys.end());
        const int delta = static_cast<int>(support::uniform(rng, 1, 3));
        const int gamma = static_cast<int>(support::uniform(rng, 1, 3));
        pa::Formula m = support::random_dnf(rng, all, delta, gamma, 3, B);
        const bool exists_first = trial % 2 == 0;
        const pa::Formula f = exists_first ? pa::make_exists(xs, pa::make_forall(ys, std::move(m)))
                                           : pa::make_forall(xs, pa::make_exists(ys, std::move(m)));
        const bool got = quant::decide_sentence(quant::BoundedSentence{f, B});
        const bool want = oracle::oracle_decide(f, B);
        if (got != want) out.fail("B=" + std::to_string(B) + ": " + pa::print_formula(f));
        trues += want ? 1 : 0;
    }
    if (out.ok) out.detail = "200 sentences (100 exists-forall, 100 forall-exists), " + std::to_string(trues) + " true";
    return out;
}

// 5 -----------------------------------------------------------------------

Outcome scores_exhaustive() {
    Outcome out;
    int checked = 0;
    for (const auto& e : all_profiles()) {
        for (int c = 0; c < 3; ++c) {
            const auto d = solver::dodgson_score(e, c);
            const auto od = oracle::oracle_dodgson_score(e, c);
            if (d != od) out.fail("dodgson " + profile_text(e) + "c=" + std::to_string(c) + ": " + opt(d) + " vs " + opt(od));
            const auto y = solver::young_score(e, c);
            const auto oy = oracle::oracle_young_score(e, c);
            if (y != oy) out.fail("young " + profile_text(e) + "c=" + std::to_string(c) + ": " + opt(y) + " vs " + opt(oy));
            ++checked;
        }
    }
    if (out.ok) out.detail = std::to_string(checked) + " (society, candidate) pairs, both rules";
    return out;
}

// 6 -----------------------------------------------------------------------

Outcome bribery_exhaustive() {
    Outcome out;
    const std::array<std::pair<solver::Rule, oracle::OracleRule>, 4> rules{{
        {solver::Rule::kCondorcet, oracle::OracleRule::kCondorcet},
        {solver::Rule::kDodgson, oracle::OracleRule::kDodgson},
        {solver::Rule::kYoung, oracle::OracleRule::kYoung},
        {solver::Rule::kDodgsonPrime, oracle::OracleRule::kDodgsonPrime},
    }};
    int checked = 0;
    for (const auto& e : all_profiles()) {
        for (int c = 0; c < 3; ++c) {
            for (const auto& [rule, orule] : rules) {
                const auto r = solver::swap_bribery(e, c, rule);
                const std::optional<Int> got = r.solve.move ? std::optional<Int>(r.solve.cost.value()) : std::nullopt;
                const auto want = oracle::oracle_swap_bribery(e, c, orule);
                if (got != want)
                    out.fail(solver::rule_name(rule) + " " + profile_text(e) + "c=" + std::to_string(c) + ": " + opt(got) +
                             " vs " + opt(want));
                ++checked;
            }
        }
    }
    if (out.ok) out.detail = std::to_string(checked) + " (society, candidate, rule) triples";
    return out;
}

// 7 -----------------------------------------------------------------------

bool reverifies(const solver::MinMoveProblem& p, const solver::SolveResult& r) {
    if (!r.move) return true;
    if (!society::is_feasible(p.society, society::change_of(*r.move))) return false;
    if (society::move_cost(p.costs, *r.move) > r.cost) return false;
    const auto after = oracle::oracle_apply(p.society, *r.move);
    const auto vars = society::society_var_names(p.society.types());
    for (const auto& f : p.condition)
        if (oracle::oracle_condition(f, vars, after)) return true;
    return false;
}

Outcome qf_path_random() {
    Outcome out;
    support::Rng rng(7);
    int solvable = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto tau = static_cast<std::size_t>(support::uniform(rng, 2, 6));
        solver::MinMoveProblem p;
        p.society = random_society(rng, tau, support::uniform(rng, 1, 4));
        p.costs = line_costs(rng, tau, 3);
        const auto vars = society::society_var_names(tau);
        const int disjuncts = static_cast<int>(support::uniform(rng, 1, 2));
        for (int k = 0; k < disjuncts; ++k)
            p.condition.push_back(
                support::random_dnf(rng, vars, 1, static_cast<int>(support::uniform(rng, 1, 3)), 2, 3));
        const auto qf = solver::solve_min_move_qf(p);
        const auto general = solver::solve_min_move(p);
        if (qf.cost != general.cost)
            out.fail("trial " + std::to_string(trial) + ": qf " + qf.cost.str() + " vs general " + general.cost.str());
        if (!reverifies(p, qf) || !reverifies(p, general)) out.fail("trial " + std::to_string(trial) + ": move fails re-verification");
        solvable += qf.move ? 1 : 0;
    }
    if (out.ok) out.detail = "100 instances, " + std::to_string(solvable) + " feasible";
    return out;
}

// 8 -----------------------------------------------------------------------

Outcome adversarial_random() {
    Outcome out;
    support::Rng rng(8);
    int resilient = 0, robust = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto tau = static_cast<std::size_t>(support::uniform(rng, 2, 3));
        solver::AdversarialProblem p;
        p.society = random_society(rng, tau, support::uniform(rng, 1, 3));
        p.costs = line_costs(rng, tau, 2);
        p.adversary_costs = line_costs(rng, tau, 2);
        p.budget = support::uniform(rng, 0, 3);
        p.adversary_budget = support::uniform(rng, 0, 3);
        const auto vars = society::society_var_names(tau);
        p.condition = support::random_dnf(rng, vars, static_cast<int>(support::uniform(rng, 1, 2)), 2, 2, 2);
        const oracle::OracleGame g{p.society, p.costs, p.budget, p.adversary_costs, p.adversary_budget, p.condition, vars};
        const std::string tag = "trial " + std::to_string(trial) + " (" + pa::print_formula(p.condition) + ")";

        const bool res = solver::resilient_budget(p);
        if (res != oracle::oracle_resilient(g)) out.fail(tag + ": resilient disagrees");
        const auto m = solver::robust_move(p);
        if (m.has_value() != oracle::oracle_robust_exists(g)) out.fail(tag + ": robust existence disagrees");
        if (m && !oracle::oracle_robust_holds(g, *m)) out.fail(tag + ": robust witness falls to a reply");
        resilient += res ? 1 : 0;
        robust += m ? 1 : 0;
    }
    if (out.ok)
        out.detail = "50 instances, " + std::to_string(resilient) + " resilient, " + std::to_string(robust) + " robust";
    return out;
}

// 9 -----------------------------------------------------------------------

// Inversions between two orders, counted pair by pair.
Int inversions(const election::Order& p, const election::Order& q) {
    Int n = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            const auto qi = std::find(q.begin(), q.end(), p[i]) - q.begin();
            const auto qj = std::find(q.begin(), q.end(), p[j]) - q.begin();
            n += qi > qj ? 1 : 0;
        }
    return n;
}

Outcome metric_property() {
    Outcome out;
    support::Rng rng(9);
    for (std::size_t n = 2; n <= 4; ++n) {
        std::vector<std::string> names;
        for (std::size_t k = 0; k < n; ++k) names.push_back(std::string(1, static_cast<char>('a' + k)));
        const election::TypeIndex t{n, false};
        const election::Election unit(names);
        const auto c = election::swap_cost_vector(unit, t);
        if (!society::validate_costs(c)) out.fail("unit costs fail validate_costs for |C|=" + std::to_string(n));
        for (std::size_t i = 0; i < t.types(); ++i)
            for (std::size_t j = 0; j < t.types(); ++j)
                if (c.at(i, j) != society::Cost(inversions(t.order(i), t.order(j))))
                    out.fail("|C|=" + std::to_string(n) + " entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
        election::Election weighted(names);
        for (int a = 0; a < static_cast<int>(n); ++a)
            for (int b = a + 1; b < static_cast<int>(n); ++b) weighted.set_swap_cost(a, b, support::uniform(rng, 1, 4));
        if (!society::validate_costs(election::swap_cost_vector(weighted, t)))
            out.fail("weighted costs fail validate_costs for |C|=" + std::to_string(n));
    }
    if (out.ok) out.detail = "|C| = 2, 3, 4; unit and weighted swap prices";
    return out;
}

// 10 ----------------------------------------------------------------------

struct CliRun {
    int status = -1;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    const std::string cmd = std::string(MINMOVE_CLI_PATH) + " " + args + " 2>&1";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    while (fgets(buf.data(), static_cast<int>(buf.size()), pipe)) r.out += buf.data();
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

// Calls visit(counts) for every vector of `types` non-negative counts with sum <= total.
void for_each_tally(std::size_t types, Int total, const std::function<void(const std::vector<Int>&)>& visit) {
    std::vector<Int> counts(types, 0);
    std::function<void(std::size_t, Int)> rec = [&](std::size_t k, Int left) {
        if (k == types) {
            visit(counts);
            return;
        }
        for (Int v = 0; v <= left; ++v) {
            counts[k] = v;
            rec(k + 1, left - v);
        }
        counts[k] = 0;
    };
    rec(0, total);
}

Outcome lobby_exhaustive() {
    Outcome out;
    const std::string path = "/tmp/minmove_acceptance_" + std::to_string(getpid()) + ".referendum";
    int checked = 0;
    for (std::size_t issues = 1; issues <= 2; ++issues) {
        const std::size_t types = std::size_t{1} << issues;
        for_each_tally(types, 4, [&](const std::vector<Int>& counts) {
            for (std::size_t agenda = 0; agenda < types; ++agenda) {
                election::Referendum r;
                for (std::size_t k = 0; k < issues; ++k) r.issues.push_back("p" + std::to_string(k));
                auto ballot_of = [&](std::size_t type) {
                    std::vector<bool> b;
                    for (std::size_t k = 0; k < issues; ++k) b.push_back((type >> (issues - 1 - k)) & 1);
                    return b;
                };
                std::ostringstream text;
                text << "issues";
                for (const auto& name : r.issues) text << " " << name;
                text << "\n";
                for (std::size_t type = 0; type < types; ++type) {
                    if (counts[type] == 0) continue;
                    r.tallies[ballot_of(type)] = counts[type];
                    text << "ballots " << counts[type] << " :";
                    for (bool v : ballot_of(type)) text << (v ? " yes" : " no");
                    text << "\n";
                }
                r.agenda = ballot_of(agenda);
                text << "agenda";
                for (bool v : r.agenda) text << (v ? " yes" : " no");
                text << "\n";
                std::ofstream(path) << text.str();

                const auto want = oracle::oracle_lobbying(r);
                const CliRun run = run_cli("lobby " + path + " --json");
                std::optional<Int> got;
                bool parsed = true;
                try {
                    const auto j = nlohmann::json::parse(run.out);
                    if (!j["cost"].is_null()) got = j["cost"].get<Int>();
                } catch (const std::exception&) {
                    parsed = false;
                }
                const int status = want ? 0 : 1;
                if (!parsed || got != want || run.status != status)
                    out.fail("cost " + opt(got) + " (exit " + std::to_string(run.status) + ") vs oracle " + opt(want) +
                             " on:\n" + text.str());
                ++checked;
            }
        });
    }
    std::remove(path.c_str());
    if (out.ok) out.detail = std::to_string(checked) + " referenda via the CLI";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> known;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--known-failure" && i + 1 < argc) {
            known.insert(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--known-failure ID]...\n";
            return 2;
        }
    }

    const std::vector<Criterion> criteria{
        {1, "measure of the Example formula", 1, measure_example},
        {2, "big-M flattening with M = B^2 n on 200 random disjunctions", 30, flatten_random},
        {3, "to_dnf and negate_nnf agree with eval_qf on 200 formulas", 30, dnf_soundness},
        {4, "decide_sentence equals oracle_decide on 200 depth-2 sentences", 120, decide_random},
        {5, "dodgson_score and young_score equal the oracles on all 56 societies", 120, scores_exhaustive},
        {6, "swap_bribery equals oracle_swap_bribery on all 56 societies, 4 rules", 600, bribery_exhaustive},
        {7, "solve_min_move_qf equals solve_min_move on 100 instances", 120, qf_path_random},
        {8, "resilient_budget and robust_move agree with the game tree on 50 toys", 120, adversarial_random},
        {9, "swap_cost_vector is a metric and equals Kendall tau", 10, metric_property},
        {10, "lobby matches flip enumeration on all small referenda", 60, lobby_exhaustive},
    };

    std::set<int> failed;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_seconds) o.fail(o.detail + " [over time limit]");
        if (!o.ok) failed.insert(c.id);
        std::printf("%s %2d  %s  (%.2fs / %.0fs)  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    c.limit_seconds, o.detail.c_str());
        std::fflush(stdout);
    }

    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed.size(), criteria.size());
    if (failed != known) {
        for (int id : known)
            if (!failed.count(id)) std::printf("criterion %d was listed as a known failure but passed\n", id);
        return 1;
    }
    return 0;
}
