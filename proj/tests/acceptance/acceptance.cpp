// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Every tolerance used below is pinned as a named constant.

#include "cli.hpp"

#include "opilab/bounds.hpp"
#include "opilab/errors.hpp"
#include "opilab/funcrep.hpp"
#include "opilab/json_io.hpp"
#include "opilab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace opilab;
namespace fs = std::filesystem;

constexpr double kTolScale = 1e-9;             // tau = 1e-9 (1 + ||A|| + ||B|| + |bound|)
constexpr double kScalarEqualityTol = 1e-12;   // criterion 2
constexpr double kSquareIdentityTol = 1e-10;   // criterion 3
constexpr double kStrictFraction = 0.99;       // criterion 3: margin > tau in >= 99% of trials
constexpr double kBoundAgreementTol = 1e-12;   // criterion 4: recomputed key-lemma bound
constexpr double kOracleRelTol = 1e-12;        // criterion 7
constexpr double kRuntimeBudgetSec = 30.0;     // criterion 1

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

struct Tally {
    int total = 0;
    int violated = 0;
    int errored = 0;
    double worst_slack = INFINITY;  // min over reports of margin + tolerance
    std::string first_problem;

    void add(const BoundReport& r) {
        ++total;
        if (r.verdict == Verdict::Violated) ++violated;
        if (r.verdict == Verdict::Errored) ++errored;
        if (std::isfinite(r.achieved_margin)) worst_slack = std::min(worst_slack, r.achieved_margin + r.tolerance);
        if ((r.verdict == Verdict::Violated || r.verdict == Verdict::Errored) && first_problem.empty()) {
            first_problem = r.theorem_id + " dim " + std::to_string(r.dim) + " trial " + std::to_string(r.trial) +
                            " " + r.function_id + " margin " + fmt(r.achieved_margin) +
                            (r.error.empty() ? "" : " (" + r.error + ")");
        }
    }
    bool clean() const { return total > 0 && violated == 0 && errored == 0 && worst_slack >= 0.0; }
    std::string summary() const {
        std::string s = std::to_string(total) + " reports, " + std::to_string(violated) + " violated, " +
                        std::to_string(errored) + " errored, min(margin + tau) " + fmt(worst_slack);
        if (!first_problem.empty()) s += "; first: " + first_problem;
        return s;
    }
};

SuiteResult suite(std::vector<std::string> theorems, std::vector<int> dims, int trials, std::uint64_t seed = 1) {
    SuiteConfig cfg;
    cfg.theorems = std::move(theorems);
    cfg.dims = std::move(dims);
    cfg.trials = trials;
    cfg.master_seed = seed;
    cfg.tol_scale = kTolScale;
    return run_suite(cfg);
}

// ---------------------------------------------------------------- 1
Outcome theorem_b_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteResult res = suite({"thmB"}, {1, 2, 4, 8}, 1000);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Tally t;
    std::vector<std::string> functions;
    for (const auto& r : res.reports) {
        t.add(r);
        if (std::find(functions.begin(), functions.end(), r.function_id) == functions.end()) {
            functions.push_back(r.function_id);
        }
    }
    std::string fns;
    for (const auto& f : functions) fns += (fns.empty() ? "" : ", ") + f;
    const bool ok = t.clean() && t.total == 4 * 4 * 1000 && secs < kRuntimeBudgetSec;
    return {ok, t.summary() + "; functions {" + fns + "}; " + fmt(secs) + " s"};
}

// ---------------------------------------------------------------- 2
Outcome scalar_equality() {
    const auto a = HermitianMatrix::scalar(4.0);
    const auto b = HermitianMatrix::scalar(1.0);
    const auto f = FunctionSpec::power(0.5);
    const BoundReport ra = check_monotone_bound(f, a, b, MonotoneBound::TheoremA, kTolScale);
    const BoundReport rc = check_monotone_bound(f, a, b, MonotoneBound::TheoremC, kTolScale);
    const bool ok = std::abs(ra.achieved_margin) <= kScalarEqualityTol && std::abs(ra.bound - 1.0) <= kScalarEqualityTol &&
                    std::abs(rc.bound - 1.0) <= kScalarEqualityTol &&
                    std::abs(rc.achieved_margin) <= kScalarEqualityTol &&
                    ra.verdict == Verdict::HoldsWithEquality;
    return {ok, "A bound " + fmt(ra.bound) + " margin " + fmt(ra.achieved_margin) + "; C bound " + fmt(rc.bound) +
                    " margin " + fmt(rc.achieved_margin)};
}

// ---------------------------------------------------------------- 3
Outcome strict_convexity() {
    const auto density = [](double x) { return 0.5 * (1.0 + x); };
    struct Case {
        FunctionSpec f;
        Interval iv;
    };
    const std::vector<Case> cases = {
        {FunctionSpec::square(), Interval::open(-1.0, 1.0)},
        {FunctionSpec::inverse(), Interval::open(0.1, 10.0)},
        {FunctionSpec::mobius_convex(0.5), Interval::open(-1.0, 1.0)},
        {FunctionSpec::mobius_convex(-0.5), Interval::open(-1.0, 1.0)},
        {build_convex_from_measure(0.1, -0.3, gauss_legendre_measure(5, -1.0, 1.0, density)), Interval::open(-1.0, 1.0)},
    };
    int total = 0, nonpositive = 0, strict = 0, identity_fail = 0, errors = 0;
    double worst_identity = 0.0;
    for (int dim : {1, 2, 4}) {
        for (std::size_t c = 0; c < cases.size(); ++c) {
            for (int k = 0; k < 1000; ++k) {
                Rng rng(derive_seed(20240, "acceptance_convexity", {std::uint64_t(dim), c, std::uint64_t(k)}));
                PairSpec spec;
                spec.dim = dim;
                spec.interval = cases[c].iv;
                spec.min_gap = rng.uniform(0.05, 0.2) * cases[c].iv.length();
                spec.seed = derive_seed(20240, "acceptance_convexity_pair", {std::uint64_t(dim), c, std::uint64_t(k)});
                spec.kind = PairKind::InvertibleDifference;
                const double s = rng.uniform(0.01, 0.99);
                ++total;
                try {
                    const MatrixPair pr = gen_invertible_diff_pair(spec);
                    const BoundReport r = check_strict_convexity(cases[c].f, pr.a, pr.b, s, kTolScale);
                    if (!(r.achieved_margin > 0.0)) ++nonpositive;
                    if (r.achieved_margin > r.tolerance) ++strict;
                    if (c == 0) {
                        const Eigen::MatrixXd d = pr.a.matrix() - pr.b.matrix();
                        const double lam =
                            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(d * d).eigenvalues().minCoeff();
                        const double err = std::abs(r.achieved_margin - s * (1 - s) * lam);
                        worst_identity = std::max(worst_identity, err);
                        if (err > kSquareIdentityTol) ++identity_fail;
                    }
                } catch (const Error&) {
                    ++errors;
                }
            }
        }
    }
    const double frac = double(strict) / double(total);
    const bool ok = errors == 0 && nonpositive == 0 && identity_fail == 0 && frac >= kStrictFraction;
    return {ok, std::to_string(total) + " trials, " + std::to_string(nonpositive) + " with margin <= 0, " +
                    fmt(100.0 * frac) + "% above tau, " + std::to_string(errors) +
                    " errors; worst Square identity error " + fmt(worst_identity)};
}

// ---------------------------------------------------------------- 4
Outcome key_lemma() {
    int violated = 0, mismatched = 0, errors = 0;
    double worst_slack = INFINITY;
    for (int k = 0; k < 500; ++k) {
        Rng rng(derive_seed(7, "acceptance_key_lemma", {std::uint64_t(k)}));
        const double lambda = rng.uniform(-0.99, 0.99);
        const int dim = 1 + static_cast<int>(rng.integer(0, 3));
        const double m = rng.uniform(0.01, 0.5);
        std::vector<double> av(dim), bv(dim);
        const int tight = static_cast<int>(rng.integer(0, dim - 1));
        for (int i = 0; i < dim; ++i) {
            bv[i] = rng.uniform(-0.98, 0.98 - m);
            const double slack = i == tight ? 0.0 : rng.uniform(0.0, 0.98 - m - bv[i]);
            av[i] = bv[i] + m + slack;
        }
        double max_b = bv[0], min_a = av[0];
        for (int i = 1; i < dim; ++i) {
            max_b = std::max(max_b, bv[i]);
            min_a = std::min(min_a, av[i]);
        }
        try {
            const auto f = FunctionSpec::mobius_monotone(lambda);
            const BoundReport r = check_monotone_bound(f, HermitianMatrix::diagonal(av), HermitianMatrix::diagonal(bv),
                                                       MonotoneBound::KeyLemma, kTolScale);
            const double expected = key_lemma_bound(lambda, max_b, min_a, r.m);
            if (std::abs(r.bound - expected) > kBoundAgreementTol * (1 + std::abs(expected))) ++mismatched;
            if (r.verdict == Verdict::Violated) ++violated;
            worst_slack = std::min(worst_slack, r.achieved_margin + r.tolerance);
        } catch (const Error&) {
            ++errors;
        }
    }
    const bool ok = violated == 0 && mismatched == 0 && errors == 0 && worst_slack >= 0.0;
    return {ok, "500 draws, " + std::to_string(violated) + " violated, " + std::to_string(mismatched) +
                    " bound mismatches, " + std::to_string(errors) + " errors, min(margin + tau) " + fmt(worst_slack)};
}

// ---------------------------------------------------------------- 5
Outcome finite_interval() {
    const SuiteResult res = suite({"thm33"}, {1, 2, 4}, 500);
    Tally t;
    for (const auto& r : res.reports) t.add(r);
    return {t.clean(), t.summary()};
}

// ---------------------------------------------------------------- 6
Outcome furuta() {
    const SuiteResult res = suite({"thm41", "thm42", "cor43"}, {1, 2, 4}, 500);
    Tally t41, t42, c43;
    for (const auto& r : res.reports) {
        if (r.theorem_id == "thm41") t41.add(r);
        if (r.theorem_id == "thm42") t42.add(r);
        if (r.theorem_id == "cor43") c43.add(r);
    }
    const bool ok = t41.clean() && t42.clean() && c43.clean();
    return {ok, "thm41: " + t41.summary() + " | thm42: " + t42.summary() + " | cor43: " + c43.summary()};
}

// ---------------------------------------------------------------- 7
Outcome oracle_equivalence() {
    int checks = 0, disagreements = 0, errors = 0;
    double worst = 0.0;
    std::string first;
    const auto compare = [&](const BoundReport& r, const OracleResult& o) {
        ++checks;
        const double err = std::abs(r.achieved_margin - o.margin) / (1 + std::abs(o.margin));
        worst = std::max(worst, err);
        if (!(err <= kOracleRelTol)) {
            ++disagreements;
            if (first.empty()) first = r.theorem_id + " " + r.function_id;
        }
    };
    const auto quad_monotone = build_monotone_from_measure(0.2, 1.3, {{-0.6, 0.1, 0.8}, {0.3, 0.5, 0.2}});
    const auto quad_convex = build_convex_from_measure(0.0, 0.4, gauss_legendre_measure(5, -1.0, 1.0));
    const auto halfline = build_monotone_halfline(0.5, 0.0, {{-1.0}, {0.5}});

    for (int k = 0; k < 200; ++k) {
        Rng rng(derive_seed(3, "acceptance_oracle", {std::uint64_t(k)}));
        const int dim = 1 + static_cast<int>(rng.integer(0, 4));
        std::vector<double> a(dim), b(dim), ua(dim), ub(dim);
        for (int i = 0; i < dim; ++i) {
            b[i] = rng.uniform(0.2, 3.0);
            a[i] = b[i] + rng.uniform(0.05, 2.0);
            ub[i] = rng.uniform(-0.9, 0.3);
            ua[i] = ub[i] + rng.uniform(0.05, 0.9 - ub[i]);
        }
        const auto A = HermitianMatrix::diagonal(a), B = HermitianMatrix::diagonal(b);
        const auto UA = HermitianMatrix::diagonal(ua), UB = HermitianMatrix::diagonal(ub);
        const double r = rng.uniform(0.05, 1.0);
        const double s = rng.uniform(0.05, 0.95);
        const double lambda = rng.uniform(-0.95, 0.95);
        try {
            const auto mono = [&](const FunctionSpec& f, MonotoneBound kind, bool unit) {
                compare(check_monotone_bound(f, unit ? UA : A, unit ? UB : B, kind, kTolScale),
                        commuting_oracle(MonotoneQuery{f, kind}, unit ? ua : a, unit ? ub : b));
            };
            mono(FunctionSpec::power(r), MonotoneBound::TheoremA, false);
            mono(FunctionSpec::log(), MonotoneBound::TheoremA, false);
            mono(FunctionSpec::power(r), MonotoneBound::TheoremB, false);
            mono(FunctionSpec::log(), MonotoneBound::TheoremB, false);
            mono(halfline, MonotoneBound::TheoremB, false);
            mono(FunctionSpec::power(r), MonotoneBound::TheoremC, false);
            mono(FunctionSpec::log(), MonotoneBound::TheoremC, false);
            mono(FunctionSpec::inverse(), MonotoneBound::InverseI, false);
            mono(FunctionSpec::inverse(), MonotoneBound::InverseII, false);
            mono(FunctionSpec::mobius_monotone(lambda), MonotoneBound::KeyLemma, true);
            mono(quad_monotone, MonotoneBound::FiniteInterval, true);

            for (const auto& f : {FunctionSpec::square(), FunctionSpec::inverse()}) {
                compare(check_strict_convexity(f, A, B, s, kTolScale), commuting_oracle(ConvexityQuery{f, s}, a, b));
            }
            for (const auto& f : {FunctionSpec::mobius_convex(lambda), quad_convex}) {
                compare(check_strict_convexity(f, UA, UB, s, kTolScale),
                        commuting_oracle(ConvexityQuery{f, s}, ua, ub));
            }

            const double p = rng.uniform(1.0, 3.0);
            const double rr = rng.uniform(0.05, 1.0);
            const double q41 = rng.uniform(std::max(1.0, FurutaExponents::optimal_q(p, rr)), (p + rr) / rr);
            const FurutaExponents e41{p, std::min(q41, (p + rr) / rr), rr};
            for (auto which : {FurutaBound::Plain, FurutaBound::Thm41, FurutaBound::Cor43}) {
                compare(check_furuta(A, B, e41, which, kTolScale), commuting_oracle(FurutaQuery{e41, which}, a, b));
            }
            const double r42 = rng.uniform(0.0, 3.0);
            const FurutaExponents e42{p, FurutaExponents::optimal_q(p, r42), r42};
            compare(check_furuta(A, B, e42, FurutaBound::Thm42, kTolScale),
                    commuting_oracle(FurutaQuery{e42, FurutaBound::Thm42}, a, b));
        } catch (const Error& e) {
            ++errors;
            if (first.empty()) first = e.what();
        }
    }
    const bool ok = disagreements == 0 && errors == 0 && checks > 0;
    return {ok, "200 trials, " + std::to_string(checks) + " comparisons, " + std::to_string(disagreements) +
                    " disagreements, " + std::to_string(errors) + " errors, worst relative gap " + fmt(worst) +
                    (first.empty() ? "" : "; first: " + first)};
}

// ---------------------------------------------------------------- 8
double divided_difference_min_eig(const std::function<double(double)>& f, const std::vector<double>& t,
                                  const std::function<double(double)>& df) {
    const int n = static_cast<int>(t.size());
    Eigen::MatrixXd l(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            l(i, j) = std::abs(t[i] - t[j]) > 1e-7 ? (f(t[i]) - f(t[j])) / (t[i] - t[j]) : df(0.5 * (t[i] + t[j]));
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(l).eigenvalues().minCoeff();
}

Outcome certifier() {
    const Interval iv = Interval::open(0.1, 10.0);
    std::string detail;
    bool ok = true;
    const auto accept = [&](const FunctionSpec& f, const Interval& where) {
        const CertifyVerdict v = certify_monotone(f, where, 100, 4, 1);
        ok = ok && v.accepted;
        detail += f.id() + (v.accepted ? " accept" : " REJECT") + "; ";
    };
    accept(FunctionSpec::power(0.5), iv);
    accept(FunctionSpec::log(), iv);
    // The Mobius building blocks live on (-1, 1); t/(1 - 0.9 t) has its pole
    // at 1.11, inside (0.1, 10), so they are certified on their own domain.
    accept(FunctionSpec::mobius_monotone(0.9), Interval::open(-1.0, 1.0));
    accept(FunctionSpec::mobius_monotone(-0.9), Interval::open(-1.0, 1.0));

    struct Reject {
        FunctionSpec f;
        std::function<double(double)> val;
        std::function<double(double)> der;
    };
    const std::vector<Reject> rejects = {
        {FunctionSpec::square(), [](double x) { return x * x; }, [](double x) { return 2 * x; }},
        {FunctionSpec::power(2.0), [](double x) { return std::pow(x, 2.0); }, [](double x) { return 2 * x; }},
    };
    for (const auto& rj : rejects) {
        const CertifyVerdict v = certify_monotone(rj.f, iv, 100, 4, 1);
        const bool witnessed = !v.accepted && !v.witness.empty() &&
                               divided_difference_min_eig(rj.val, v.witness, rj.der) < 0.0;
        ok = ok && witnessed;
        detail += rj.f.id() + (witnessed ? " reject (trial " + std::to_string(v.trials_run) + ", witness min eig " +
                                               fmt(v.witness_min_eig) + ")"
                                         : " NOT REJECTED") +
                  "; ";
    }
    const std::vector<double> pts = {1.0, 2.0};
    const HermitianMatrix l = loewner_matrix(FunctionSpec::square(), pts);
    const bool recorded = l(0, 0) == 2.0 && l(0, 1) == 3.0 && l(1, 1) == 4.0 && spectrum_extrema(l).min < 0.0;
    ok = ok && recorded;
    detail += std::string("(1,2) -> [[2,3],[3,4]] ") + (recorded ? "negative" : "WRONG");
    return {ok, detail};
}

// ---------------------------------------------------------------- 9
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism(const fs::path& work) {
    std::ostringstream sink;
    const auto run_once = [&](const std::string& name) {
        return cli::run({"verify", "--seed", "1", "--out", (work / name).string()}, sink, sink);
    };
    const int c1 = run_once("run1");
    const int c2 = run_once("run2");
    const std::string j1 = slurp(work / "run1" / "reports.jsonl"), j2 = slurp(work / "run2" / "reports.jsonl");
    const std::string s1 = slurp(work / "run1" / "summary.csv"), s2 = slurp(work / "run2" / "summary.csv");
    const bool ok = c1 == cli::kExitOk && c2 == cli::kExitOk && !j1.empty() && j1 == j2 && !s1.empty() && s1 == s2;
    return {ok, "exit codes " + std::to_string(c1) + "/" + std::to_string(c2) + ", JSONL " + std::to_string(j1.size()) +
                    " bytes " + (j1 == j2 ? "identical" : "DIFFER") + ", CSV " + (s1 == s2 ? "identical" : "DIFFER")};
}

// ---------------------------------------------------------------- 10
std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

Outcome exponent_gate(const fs::path& work) {
    const fs::path csv = work / "sweep.csv";
    std::ostringstream sink;
    const int code = cli::run({"sweep", "--p", "0:4:0.5", "--q", "1:3:0.5", "--r", "0:2:0.5", "--dim", "2", "--seed",
                               "1", "--out", csv.string()},
                              sink, sink);
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    int rows = 0, mismatches = 0, violated = 0;
    bool spot_fi = false, spot_41 = false;
    const auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
    while (std::getline(in, line)) {
        const auto c = split(line);
        if (c.size() != 9) {
            ++mismatches;
            continue;
        }
        ++rows;
        const double p = std::stod(c[0]), q = std::stod(c[1]), r = std::stod(c[2]);
        // Grid values are multiples of 0.5, so these comparisons are exact.
        const bool fi = p >= 0 && q >= 1 && r >= 0 && (1 + r) * q >= p + r;
        const bool t41 = fi && p + r >= q * r && r <= 1;
        const bool t42 = p >= 1 && r >= 0 && q * (1 + r) == p + r;
        if (c[3] != flag(fi) || c[4] != flag(t41) || c[5] != flag(t42)) ++mismatches;
        if (c[8] == "Violated" || c[8] == "Errored") ++violated;
        if (p == 3 && q == 1 && r == 0) spot_fi = c[3] == "false";
        if (p == 1 && q == 1 && r == 1) spot_41 = c[4] == "true";
    }
    const int expected_rows = 9 * 5 * 5;
    const bool ok = code == cli::kExitOk && rows == expected_rows && mismatches == 0 && violated == 0 && spot_fi &&
                    spot_41;
    return {ok, std::to_string(rows) + "/" + std::to_string(expected_rows) + " cells, " + std::to_string(mismatches) +
                    " predicate mismatches, " + std::to_string(violated) + " violated/errored cells; (3,1,0) FI " +
                    (spot_fi ? "invalid" : "WRONG") + ", (1,1,1) Thm41 " + (spot_41 ? "valid" : "WRONG") +
                    "; exit " + std::to_string(code)};
}

template <class F>
void guarded(int id, const std::string& title, F&& f) {
    try {
        report(id, title, f());
    } catch (const std::exception& e) {
        report(id, title, {false, std::string("exception: ") + e.what()});
    }
}

}  // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / "opilab_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    guarded(1, "thmB suite", theorem_b_suite);
    guarded(2, "thmA/thmC scalar equality", scalar_equality);
    guarded(3, "strict convexity", strict_convexity);
    guarded(4, "key lemma", key_lemma);
    guarded(5, "finite-interval monotone bound", finite_interval);
    guarded(6, "Furuta suites", furuta);
    guarded(7, "oracle equivalence", oracle_equivalence);
    guarded(8, "certifier sensitivity", certifier);
    guarded(9, "determinism", [&] { return determinism(work); });
    guarded(10, "exponent gate", [&] { return exponent_gate(work); });

    fs::remove_all(work);
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
