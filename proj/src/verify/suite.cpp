#include "opilab/errors.hpp"
#include "opilab/verify.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <thread>

namespace opilab {

namespace {

const Interval kHalflineRange = Interval::open(0.1, 50.0);
const Interval kUnitRange = Interval::open(-1.0, 1.0);
const Interval kInverseRange = Interval::open(0.1, 10.0);
const Interval kFurutaRange = Interval::open(0.1, 3.0);

struct CellContext {
    const SuiteConfig& config;
    std::string theorem;
    int dim;
    int trial;
    std::uint64_t seed;
};

Interval range_for(const FunctionSpec& f, const Interval& fallback) {
    return f.domain().bounded() ? f.domain() : fallback;
}

MatrixPair ordered_pair(const CellContext& c, std::uint64_t seed, const Interval& iv, double gap_lo,
                        double gap_hi, Rng& rng) {
    PairSpec spec;
    spec.dim = c.dim;
    spec.interval = iv;
    spec.min_gap = rng.uniform(gap_lo, gap_hi) * iv.length();
    spec.seed = seed;
    spec.kind = PairKind::Ordered;
    return gen_ordered_pair(spec);
}

// Runs one check, turning library errors into an Errored report.
void record(const CellContext& c, std::vector<BoundReport>& out, const std::string& function_id,
            const std::function<BoundReport()>& check) {
    BoundReport r;
    try {
        r = check();
    } catch (const Error& e) {
        r = BoundReport{};
        r.function_id = function_id;
        r.verdict = Verdict::Errored;
        r.achieved_margin = std::numeric_limits<double>::quiet_NaN();
        r.error = e.what();
    }
    r.theorem_id = c.theorem;
    r.dim = c.dim;
    r.trial = c.trial;
    r.seed = c.seed;
    out.push_back(std::move(r));
}

std::vector<FunctionSpec> monotone_family(const SuiteConfig& cfg) {
    if (cfg.function_override) return {*cfg.function_override};
    return {FunctionSpec::power(0.5), FunctionSpec::power(1.0 / 3.0), FunctionSpec::log(),
            build_monotone_halfline(0.5, 0.0, {{-1.0}, {0.5}})};
}

std::vector<FunctionSpec> convex_family(const SuiteConfig& cfg) {
    if (cfg.function_override) return {*cfg.function_override};
    return {FunctionSpec::square(),
            FunctionSpec::inverse().with_domain(kInverseRange),
            FunctionSpec::mobius_convex(0.5),
            FunctionSpec::mobius_convex(-0.5),
            build_convex_from_measure(0.1, -0.3,
                                      gauss_legendre_measure(5, -1.0, 1.0, [](double x) { return 0.5 * (1.0 + x); }))};
}

void run_power_log(const CellContext& c, std::vector<BoundReport>& out, MonotoneBound kind) {
    const std::vector<FunctionSpec> fs = {FunctionSpec::power(0.5), FunctionSpec::power(1.0 / 3.0),
                                          FunctionSpec::log()};
    Rng rng(c.seed);
    std::uint64_t k = 0;
    for (const auto& f : fs) {
        record(c, out, f.id(), [&] {
            const MatrixPair pr = ordered_pair(c, derive_seed(c.seed, "pair", {k}), kHalflineRange, 0.005, 0.3, rng);
            return check_monotone_bound(f, pr.a, pr.b, kind, c.config.tol_scale);
        });
        ++k;
    }
}

void run_theorem_b(const CellContext& c, std::vector<BoundReport>& out) {
    Rng rng(c.seed);
    std::uint64_t k = 0;
    for (const auto& f : monotone_family(c.config)) {
        record(c, out, f.id(), [&] {
            const MatrixPair pr = ordered_pair(c, derive_seed(c.seed, "pair", {k}), range_for(f, kHalflineRange),
                                               0.005, 0.3, rng);
            return check_monotone_bound(f, pr.a, pr.b, MonotoneBound::TheoremB, c.config.tol_scale);
        });
        ++k;
    }
}

void run_inverse(const CellContext& c, std::vector<BoundReport>& out) {
    Rng rng(c.seed);
    const FunctionSpec f = FunctionSpec::inverse();
    std::optional<MatrixPair> pr;
    for (MonotoneBound kind : {MonotoneBound::InverseI, MonotoneBound::InverseII}) {
        record(c, out, f.id(), [&] {
            if (!pr) pr = ordered_pair(c, derive_seed(c.seed, "pair", {0}), kHalflineRange, 0.005, 0.3, rng);
            BoundReport r = check_monotone_bound(f, pr->a, pr->b, kind, c.config.tol_scale);
            r.note = kind == MonotoneBound::InverseI ? "bound (i)" : "bound (ii)";
            return r;
        });
    }
}

void run_convexity(const CellContext& c, std::vector<BoundReport>& out) {
    Rng rng(c.seed);
    std::uint64_t k = 0;
    for (const auto& f : convex_family(c.config)) {
        record(c, out, f.id(), [&] {
            const Interval iv = range_for(f, kInverseRange);
            PairSpec spec;
            spec.dim = c.dim;
            spec.interval = iv;
            spec.min_gap = rng.uniform(0.05, 0.2) * iv.length();
            spec.seed = derive_seed(c.seed, "pair", {k});
            spec.kind = PairKind::InvertibleDifference;
            const double s = rng.uniform(0.01, 0.99);
            const MatrixPair pr = gen_invertible_diff_pair(spec);
            return check_strict_convexity(f, pr.a, pr.b, s, c.config.tol_scale);
        });
        ++k;
    }
}

void run_key_lemma(const CellContext& c, std::vector<BoundReport>& out) {
    Rng rng(c.seed);
    const double lambda = rng.uniform(-0.99, 0.99);
    const FunctionSpec f = FunctionSpec::mobius_monotone(lambda);
    record(c, out, f.id(), [&] {
        const MatrixPair pr = ordered_pair(c, derive_seed(c.seed, "pair", {0}), kUnitRange, 0.005, 0.4, rng);
        return check_monotone_bound(f, pr.a, pr.b, MonotoneBound::KeyLemma, c.config.tol_scale);
    });
}

FunctionSpec random_monotone_unit(Rng& rng) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 8));
    DiscreteMeasure mu;
    for (std::size_t i = 0; i < n; ++i) {
        mu.nodes.push_back(rng.uniform(-0.99, 0.99));
        mu.weights.push_back(rng.uniform(0.01, 1.0));
    }
    const double f0 = rng.uniform(-1.0, 1.0);
    const double fp0 = rng.uniform(0.1, 3.0);
    return build_monotone_from_measure(f0, fp0, std::move(mu));
}

void run_finite_interval(const CellContext& c, std::vector<BoundReport>& out) {
    Rng rng(c.seed);
    const FunctionSpec f = random_monotone_unit(rng);
    record(c, out, f.id(), [&] {
        const MatrixPair pr = ordered_pair(c, derive_seed(c.seed, "pair", {0}), kUnitRange, 0.005, 0.4, rng);
        return check_monotone_bound(f, pr.a, pr.b, MonotoneBound::FiniteInterval, c.config.tol_scale);
    });
}

FurutaExponents draw_thm41(Rng& rng) {
    FurutaExponents e;
    e.r = 1.0 - rng.unit();  // (0, 1]
    e.p = rng.uniform(0.0, 4.0);
    const double q_lo = std::max(1.0, FurutaExponents::optimal_q(e.p, e.r));
    const double q_hi = std::min((e.p + e.r) / e.r, q_lo + 4.0);
    e.q = rng.uniform(q_lo, q_hi);
    return e;
}

FurutaExponents draw_thm42(Rng& rng) {
    FurutaExponents e;
    e.p = rng.uniform(1.0, 4.0);
    e.r = rng.uniform(0.0, 5.0);
    e.q = FurutaExponents::optimal_q(e.p, e.r);
    return e;
}

FurutaExponents draw_cor43(Rng& rng) {
    FurutaExponents e;
    e.p = rng.uniform(1.0, 4.0);
    e.r = rng.uniform(0.0, 2.0);
    const double q_lo = std::max(1.0, FurutaExponents::optimal_q(e.p, e.r));
    e.q = rng.uniform(q_lo, q_lo + 2.0);
    return e;
}

void run_furuta(const CellContext& c, std::vector<BoundReport>& out, FurutaBound which) {
    Rng rng(c.seed);
    FurutaExponents e;
    switch (which) {
        case FurutaBound::Thm41: e = draw_thm41(rng); break;
        case FurutaBound::Thm42: e = draw_thm42(rng); break;
        default: e = draw_cor43(rng); break;
    }
    // All Furuta theorems see the same pair for a given (dim, trial).
    const std::uint64_t pair_seed = derive_seed(c.config.master_seed, "furuta_pair",
                                                {static_cast<std::uint64_t>(c.dim), static_cast<std::uint64_t>(c.trial)});
    Rng pair_rng(pair_seed);
    record(c, out, "", [&] {
        const MatrixPair pr = ordered_pair(c, pair_seed, kFurutaRange, 0.02, 0.3, pair_rng);
        return check_furuta(pr.a, pr.b, e, which, c.config.tol_scale);
    });
    if (out.back().verdict == Verdict::Errored) out.back().exponents = e;
}

using CellRunner = void (*)(const CellContext&, std::vector<BoundReport>&);

struct TheoremEntry {
    std::string id;
    CellRunner run;
};

const std::vector<TheoremEntry>& registry() {
    static const std::vector<TheoremEntry> entries = {
        {"thmA", [](const CellContext& c, std::vector<BoundReport>& o) { run_power_log(c, o, MonotoneBound::TheoremA); }},
        {"thmB", run_theorem_b},
        {"thmC", [](const CellContext& c, std::vector<BoundReport>& o) { run_power_log(c, o, MonotoneBound::TheoremC); }},
        {"lemma31", run_inverse},
        {"thm23", run_convexity},
        {"lemma32", run_key_lemma},
        {"thm33", run_finite_interval},
        {"thm41", [](const CellContext& c, std::vector<BoundReport>& o) { run_furuta(c, o, FurutaBound::Thm41); }},
        {"thm42", [](const CellContext& c, std::vector<BoundReport>& o) { run_furuta(c, o, FurutaBound::Thm42); }},
        {"cor43", [](const CellContext& c, std::vector<BoundReport>& o) { run_furuta(c, o, FurutaBound::Cor43); }},
    };
    return entries;
}

}  // namespace

const std::vector<std::string>& known_theorems() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& e : registry()) v.push_back(e.id);
        return v;
    }();
    return ids;
}

SuiteConfig SuiteConfig::defaults() {
    SuiteConfig c;
    c.theorems = known_theorems();
    c.dims = {1, 2, 4};
    c.trials = 50;
    c.master_seed = 1;
    return c;
}

int SuiteResult::count(Verdict v) const {
    return static_cast<int>(
        std::count_if(reports.begin(), reports.end(), [v](const BoundReport& r) { return r.verdict == v; }));
}

SuiteResult run_suite(const SuiteConfig& config) {
    if (config.trials < 1) throw InvalidParams("suite: trials must be >= 1");
    if (config.theorems.empty()) throw InvalidParams("suite: no theorems selected");
    if (config.dims.empty()) throw InvalidParams("suite: no dims selected");
    for (int d : config.dims) {
        if (d < 1 || d > 64) throw InvalidParams("suite: dims must lie in [1, 64]");
    }
    if (!(config.tol_scale >= 0.0)) throw InvalidParams("suite: tolerance scale must be >= 0");

    struct Cell {
        const TheoremEntry* entry;
        int dim;
        int trial;
    };
    std::vector<Cell> cells;
    for (const auto& id : config.theorems) {
        const auto it = std::find_if(registry().begin(), registry().end(),
                                     [&](const TheoremEntry& e) { return e.id == id; });
        if (it == registry().end()) throw InvalidParams("suite: unknown theorem '" + id + "'");
        for (int d : config.dims) {
            for (int t = 0; t < config.trials; ++t) cells.push_back({&*it, d, t});
        }
    }

    std::vector<std::vector<BoundReport>> results(cells.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& cell = cells[i];
            const CellContext ctx{config, cell.entry->id, cell.dim, cell.trial,
                                  derive_seed(config.master_seed, cell.entry->id,
                                              {static_cast<std::uint64_t>(cell.dim),
                                               static_cast<std::uint64_t>(cell.trial)})};
            cell.entry->run(ctx, results[i]);
        }
    };
    const int threads = std::max(1, config.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    SuiteResult out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i == 0 || cells[i].entry != cells[i - 1].entry || cells[i].dim != cells[i - 1].dim) {
            SummaryRow row;
            row.theorem_id = cells[i].entry->id;
            row.dim = cells[i].dim;
            row.worst_margin = std::numeric_limits<double>::quiet_NaN();
            out.summary.push_back(row);
        }
        SummaryRow& row = out.summary.back();
        for (auto& r : results[i]) {
            ++row.trials;
            switch (r.verdict) {
                case Verdict::Holds: ++row.holds; break;
                case Verdict::HoldsWithEquality: ++row.equality; break;
                case Verdict::Violated: ++row.violated; break;
                case Verdict::Errored: ++row.errored; break;
            }
            if (r.verdict != Verdict::Errored &&
                (std::isnan(row.worst_margin) || r.achieved_margin < row.worst_margin)) {
                row.worst_margin = r.achieved_margin;
            }
            out.reports.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace opilab
