#pragma once

// Randomized verification of operator inequalities: seeded pair generators,
// matrix-level checkers that compare both sides of an inequality against the
// scalar bounds, a commuting-case scalar oracle, and a deterministic suite
// runner with JSONL/CSV serialization.

#include "opilab/bounds.hpp"
#include "opilab/funcrep.hpp"
#include "opilab/matcore.hpp"
#include "opilab/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace opilab {

// ------------------------------------------------------------ generation

enum class PairKind {
    Ordered,               // A - B >= min_gap
    InvertibleDifference,  // |eig(A - B)| >= min_gap, signs random per direction
    IndefiniteDifference,  // as above with alternating signs (dim >= 2)
};

struct PairSpec {
    int dim = 1;
    Interval interval = Interval::open(0.0, 1.0);
    double min_gap = 0.1;
    std::uint64_t seed = 0;
    PairKind kind = PairKind::Ordered;
};

struct MatrixPair {
    HermitianMatrix a;
    HermitianMatrix b;
};

/// Haar-distributed orthogonal matrix from the QR factorization of a Gaussian
/// matrix.
Eigen::MatrixXd random_orthogonal(int dim, Rng& rng);

/// A > B with strict gap >= min_gap and both spectra inside the interval
/// (1e-7 * length away from its ends). Deterministic in spec.seed.
MatrixPair gen_ordered_pair(const PairSpec& spec);

/// Spectra inside the interval and |lambda(A - B)| >= min_gap; the difference
/// may be indefinite.
MatrixPair gen_invertible_diff_pair(const PairSpec& spec);

// ------------------------------------------------------------- reporting

enum class Verdict { Holds, HoldsWithEquality, Violated, Errored };

std::string_view to_string(Verdict v);

struct BoundReport {
    std::string theorem_id;
    int dim = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string function_id;
    std::optional<FurutaExponents> exponents;
    std::optional<double> s;
    double m = 0.0;
    double bound = 0.0;
    double achieved_margin = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Holds;
    std::string note;
    std::string error;
};

/// Violated iff margin < -tol; HoldsWithEquality iff |margin| <= tol.
Verdict classify(double margin, double tol);

/// 1e-9 by default; scales tau = scale * (1 + ||A|| + ||B|| + |bound|).
inline constexpr double kDefaultTolScale = 1e-9;

// -------------------------------------------------------------- checkers

enum class MonotoneBound {
    TheoremA,        // Power(r), 0 < r <= 1, or Log; bound from ||A|| and m
    TheoremB,        // any f; f(||B|| + m) - f(||B||)
    TheoremC,        // Power(r) or Log; bound from ||B|| and m
    InverseI,        // B^{-1} - A^{-1} >= 1/(||A|| - m) - 1/||A||
    InverseII,       // B^{-1} - A^{-1} >= m / ((||B|| + m) ||B||)
    KeyLemma,        // MobiusMonotone(lambda) on (-1, 1)
    FiniteInterval,  // QuadMonotoneUnit on (-1, 1)
};

std::string_view to_string(MonotoneBound k);

/// achieved_margin = lambda_min(f(A) - f(B) - bound I). For InverseI/II the
/// left side is B^{-1} - A^{-1} and f must be Inverse.
/// Throws NotStrictlyOrdered, DomainViolation, InvalidParams.
BoundReport check_monotone_bound(const FunctionSpec& f, const HermitianMatrix& a, const HermitianMatrix& b,
                                 MonotoneBound kind, double tol_scale = kDefaultTolScale);

/// achieved_margin = lambda_min(s f(A) + (1-s) f(B) - f(sA + (1-s)B)); bound 0.
BoundReport check_strict_convexity(const FunctionSpec& f, const HermitianMatrix& a, const HermitianMatrix& b,
                                   double s, double tol_scale = kDefaultTolScale);

enum class FurutaVariant { General, Optimal };

enum class FurutaBound {
    Plain,  // the Furuta inequality itself, bound 0; needs FI-valid exponents
    Thm41,  // k(||B||, m, p, q, r) m_A^r
    Thm42,  // m m_A^r, optimal variant
    Cor43,  // ||A||^{(p+r)/q} - (||A||^{1+r} - m m_A^r)^{(p+r)/(q(1+r))}
};

std::string_view to_string(FurutaBound b);

/// General: A^{(p+r)/q} - (A^{r/2} B^p A^{r/2})^{1/q}
/// Optimal: A^{1+r} - (A^{r/2} B^p A^{r/2})^{(1+r)/(p+r)}
/// Throws NotPositiveDefinite unless A, B > 0.
HermitianMatrix furuta_lhs(const HermitianMatrix& a, const HermitianMatrix& b, const FurutaExponents& e,
                           FurutaVariant variant);

/// Checks the exponent predicate for `which` before touching any matrix.
BoundReport check_furuta(const HermitianMatrix& a, const HermitianMatrix& b, const FurutaExponents& e,
                         FurutaBound which, double tol_scale = kDefaultTolScale);

// ---------------------------------------------------------------- oracle

struct MonotoneQuery {
    FunctionSpec f;
    MonotoneBound kind;
};

struct ConvexityQuery {
    FunctionSpec f;
    double s;
};

struct FurutaQuery {
    FurutaExponents exponents;
    FurutaBound which;
};

using OracleQuery = std::variant<MonotoneQuery, ConvexityQuery, FurutaQuery>;

struct OracleResult {
    double lhs_min;  // smallest component of the left-hand side
    double bound;
    double margin;   // min over components of (lhs_i - bound)
};

/// Recomputes a check for simultaneously diagonal A = diag(eigs_a),
/// B = diag(eigs_b) by per-component scalar arithmetic. Shares no code path
/// with the matrix checkers or the bounds module.
OracleResult commuting_oracle(const OracleQuery& query, std::span<const double> eigs_a,
                              std::span<const double> eigs_b);

// ----------------------------------------------------------------- suite

struct SuiteConfig {
    std::vector<std::string> theorems;
    std::vector<int> dims;
    int trials = 1;
    std::uint64_t master_seed = 1;
    double tol_scale = kDefaultTolScale;
    /// Replaces the default function family of the function-based theorems.
    std::optional<FunctionSpec> function_override;
    int threads = 1;

    /// Every known theorem, dims {1, 2, 4}, 50 trials, seed 1.
    static SuiteConfig defaults();
};

/// Theorem identifiers accepted by run_suite, in canonical order.
const std::vector<std::string>& known_theorems();

struct SummaryRow {
    std::string theorem_id;
    int dim = 0;
    int trials = 0;  // number of reports in the cell
    int holds = 0;
    int equality = 0;
    int violated = 0;
    int errored = 0;
    double worst_margin = 0.0;
};

struct SuiteResult {
    std::vector<BoundReport> reports;
    std::vector<SummaryRow> summary;

    int count(Verdict v) const;
};

/// Runs every (theorem, dim, trial) cell with a child seed derived from
/// (master_seed, theorem, dim, trial). Per-trial errors become Errored
/// reports. Output order is (theorem, dim, trial) regardless of threads.
/// Throws InvalidParams for unknown theorems or empty/invalid config.
SuiteResult run_suite(const SuiteConfig& config);

void write_reports_jsonl(std::ostream& os, const std::vector<BoundReport>& reports);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

}  // namespace opilab
