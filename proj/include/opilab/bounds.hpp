#pragma once

// Scalar lower bounds for operator differences f(A) - f(B) under A - B >= m > 0,
// and validity predicates for Furuta exponent triples. Every function here is a
// pure scalar formula; matrices never enter.

#include "opilab/funcrep.hpp"

#include <string>
#include <vector>

namespace opilab {

/// Exponents (p, q, r) of A^{(p+r)/q} >= (A^{r/2} B^p A^{r/2})^{1/q}.
struct FurutaExponents {
    double p = 0.0;
    double q = 1.0;
    double r = 0.0;

    /// Failed constraints of p >= 0, q >= 1, (1+r)q >= p+r (and r >= 0).
    std::vector<std::string> fi_violations() const;
    /// fi_violations plus p+r >= qr and 0 <= r <= 1.
    std::vector<std::string> thm41_violations() const;
    /// p >= 1, r >= 0 and q == (p+r)/(1+r) up to 1e-12 relative.
    std::vector<std::string> thm42_violations() const;
    /// fi_violations plus p >= 1 (the optimal-case bound it rests on needs it).
    std::vector<std::string> cor43_violations() const;

    bool fi_valid() const { return fi_violations().empty(); }
    bool thm41_valid() const { return thm41_violations().empty(); }
    bool thm42_valid() const { return thm42_violations().empty(); }
    bool cor43_valid() const { return cor43_violations().empty(); }

    /// (p+r)/(1+r): the q of the optimal case.
    static double optimal_q(double p, double r) { return (p + r) / (1.0 + r); }
};

std::string to_string(const FurutaExponents& e);

/// Throws ExponentDomainViolation naming every entry of `violations`.
void require_exponents(const std::vector<std::string>& violations, const FurutaExponents& e);

/// ||A||^r - (||A|| - m)^r for 0 < r <= 1, 0 < m <= ||A||.
double theorem_a_bound(double r, double norm_a, double m);

/// log ||A|| - log(||A|| - m) for 0 < m < ||A||.
double theorem_a_log_bound(double norm_a, double m);

/// f(||B|| + m) - f(||B||). Throws ConstantFunction for constant f.
double theorem_b_bound(const FunctionSpec& f, double norm_b, double m);

struct PowerLogPair {
    double power;
    double log;
};

/// ((||B|| + m)^r - ||B||^r, log(||B|| + m) - log ||B||)
PowerLogPair theorem_c_bounds(double r, double norm_b, double m);

struct InverseBounds {
    double bound_i;   // 1/(||A|| - m) - 1/||A||
    double bound_ii;  // m / ((||B|| + m) ||B||)
};

/// Lower bounds for B^{-1} - A^{-1}.
InverseBounds lemma31_bounds(double norm_a, double norm_b, double m);

/// Lower bound for f_lambda(A) - f_lambda(B) with f_lambda(t) = t/(1 - lambda t):
///   f_lambda(M_B + m) - f_lambda(M_B)   for -1 < lambda <= 0,
///   f_lambda(m_A) - f_lambda(m_A - m)   for  0 < lambda < 1.
double key_lemma_bound(double lambda, double max_b, double min_a, double m);

/// f'(0) * sum_i w_i * key_lemma_bound(lambda_i, M_B, m_A, m) for a
/// QuadMonotoneUnit spec. The shift in the two-sided decomposition is taken
/// to be the strict gap m.
double finite_interval_monotone_bound(const FunctionSpec& f, double max_b, double min_a, double m);

/// k(b, m, p, q, r) = (b + m)^e - b^e with e = (p + r)/q - r.
double furuta_k(double b, double m, double p, double q, double r);

/// k(||B||, m, p, q, r) * m_A^r; requires thm41-valid exponents.
double theorem41_bound(double norm_b, double m, const FurutaExponents& e, double min_a);

/// m * m_A^r
double theorem42_bound(double m, double min_a, double r);

/// ||A||^{(p+r)/q} - (||A||^{1+r} - m m_A^r)^{(p+r)/(q(1+r))}
double corollary43_bound(double norm_a, double m, double min_a, const FurutaExponents& e);

}  // namespace opilab
