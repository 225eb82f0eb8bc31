#include "opilab/bounds.hpp"

#include "opilab/errors.hpp"
#include "opilab/format.hpp"

#include <cmath>

namespace opilab {

namespace {

// a >= b with a relative slack of 1e-12, so exponents computed as
// (p+r)/(1+r) still satisfy the identities they were built from.
bool geq(double a, double b) { return a >= b - 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParams(std::string(name) + " must be > 0");
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidParams(std::string(name) + " must be finite");
}

double mobius(double lambda, double t) { return t / (1.0 - lambda * t); }

void require_unit(double t, const char* name) {
    if (!(t > -1.0 && t < 1.0)) {
        throw DomainViolation(std::string(name) + " = " + format_double(t) + " is outside (-1, 1)", {t});
    }
}

}  // namespace

// -------------------------------------------------------- FurutaExponents

std::vector<std::string> FurutaExponents::fi_violations() const {
    std::vector<std::string> v;
    if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(r)) {
        v.emplace_back("finite exponents violated");
        return v;
    }
    if (!geq(p, 0.0)) v.emplace_back("p ≥ 0 violated");
    if (!geq(q, 1.0)) v.emplace_back("q ≥ 1 violated");
    if (!geq(r, 0.0)) v.emplace_back("r ≥ 0 violated");
    if (!geq((1.0 + r) * q, p + r)) v.emplace_back("(1+r)q ≥ p+r violated");
    return v;
}

std::vector<std::string> FurutaExponents::thm41_violations() const {
    std::vector<std::string> v = fi_violations();
    if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(r)) return v;
    if (!geq(p + r, q * r)) v.emplace_back("p+r ≥ qr violated");
    if (!geq(1.0, r)) v.emplace_back("r ≤ 1 violated");
    return v;
}

std::vector<std::string> FurutaExponents::thm42_violations() const {
    std::vector<std::string> v;
    if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(r)) {
        v.emplace_back("finite exponents violated");
        return v;
    }
    if (!geq(p, 1.0)) v.emplace_back("p ≥ 1 violated");
    if (!geq(r, 0.0)) v.emplace_back("r ≥ 0 violated");
    const double q_opt = optimal_q(p, r);
    if (std::abs(q - q_opt) > 1e-12 * (1.0 + std::abs(q_opt))) v.emplace_back("q = (p+r)/(1+r) violated");
    return v;
}

std::vector<std::string> FurutaExponents::cor43_violations() const {
    std::vector<std::string> v = fi_violations();
    if (std::isfinite(p) && !geq(p, 1.0)) v.emplace_back("p ≥ 1 violated");
    return v;
}

std::string to_string(const FurutaExponents& e) {
    return "p=" + format_double(e.p) + " q=" + format_double(e.q) + " r=" + format_double(e.r);
}

void require_exponents(const std::vector<std::string>& violations, const FurutaExponents& e) {
    if (violations.empty()) return;
    std::string msg = "exponents " + to_string(e) + ":";
    for (const auto& s : violations) msg += " " + s + ";";
    msg.pop_back();
    throw ExponentDomainViolation(msg, violations);
}

// ---------------------------------------------------------------- bounds

double theorem_a_bound(double r, double norm_a, double m) {
    if (!(r > 0.0 && r <= 1.0)) throw InvalidParams("theorem A bound requires 0 < r ≤ 1");
    require_positive(m, "m");
    require_finite(norm_a, "normA");
    if (m > norm_a) throw InvalidParams("theorem A bound requires m ≤ ‖A‖ (otherwise B is not ≥ 0)");
    return std::pow(norm_a, r) - std::pow(norm_a - m, r);
}

double theorem_a_log_bound(double norm_a, double m) {
    require_positive(m, "m");
    require_finite(norm_a, "normA");
    if (!(m < norm_a)) throw InvalidParams("theorem A log bound requires m < ‖A‖");
    return std::log(norm_a) - std::log(norm_a - m);
}

double theorem_b_bound(const FunctionSpec& f, double norm_b, double m) {
    require_positive(m, "m");
    require_finite(norm_b, "normB");
    if (f.is_constant()) throw ConstantFunction(f.id() + " is constant; theorem B needs a nonconstant function");
    return eval_scalar(f, norm_b + m) - eval_scalar(f, norm_b);
}

PowerLogPair theorem_c_bounds(double r, double norm_b, double m) {
    if (!(r > 0.0 && r <= 1.0)) throw InvalidParams("theorem C bounds require 0 < r ≤ 1");
    require_positive(norm_b, "normB");
    require_positive(m, "m");
    return {std::pow(norm_b + m, r) - std::pow(norm_b, r), std::log(norm_b + m) - std::log(norm_b)};
}

InverseBounds lemma31_bounds(double norm_a, double norm_b, double m) {
    require_positive(m, "m");
    require_positive(norm_b, "normB");
    require_finite(norm_a, "normA");
    if (!(norm_a > m)) throw InvalidParams("inverse-difference bounds require ‖A‖ > m");
    return {1.0 / (norm_a - m) - 1.0 / norm_a, m / ((norm_b + m) * norm_b)};
}

double key_lemma_bound(double lambda, double max_b, double min_a, double m) {
    require_unit(lambda, "lambda");
    require_positive(m, "m");
    if (lambda <= 0.0) {
        require_unit(max_b, "M_B");
        require_unit(max_b + m, "M_B + m");
        return mobius(lambda, max_b + m) - mobius(lambda, max_b);
    }
    require_unit(min_a, "m_A");
    require_unit(min_a - m, "m_A - m");
    return mobius(lambda, min_a) - mobius(lambda, min_a - m);
}

double finite_interval_monotone_bound(const FunctionSpec& f, double max_b, double min_a, double m) {
    const auto* q = f.get_if<fn::QuadMonotoneUnit>();
    if (q == nullptr) throw InvalidParams("finite-interval bound needs a QuadMonotoneUnit spec, got " + f.id());
    if (q->fp0 == 0.0) throw ConstantFunction(f.id() + " is constant (f'(0) = 0)");
    double sum = 0.0;
    for (std::size_t i = 0; i < q->measure.size(); ++i) {
        sum += q->measure.weights[i] * key_lemma_bound(q->measure.nodes[i], max_b, min_a, m);
    }
    return q->fp0 * sum;
}

double furuta_k(double b, double m, double p, double q, double r) {
    require_finite(b, "b");
    require_positive(m, "m");
    if (b < 0.0) throw InvalidParams("k(b, m, p, q, r) requires b ≥ 0");
    require_positive(q, "q");
    const double e = (p + r) / q - r;
    if (b == 0.0 && e < 0.0) throw InvalidParams("k(0, m, ...) is undefined for a negative exponent");
    if (e == 0.0) return 0.0;
    if (e == 1.0) return m;
    return std::pow(b + m, e) - std::pow(b, e);
}

double theorem41_bound(double norm_b, double m, const FurutaExponents& e, double min_a) {
    require_exponents(e.thm41_violations(), e);
    require_positive(m, "m");
    require_positive(min_a, "mA");
    return furuta_k(norm_b, m, e.p, e.q, e.r) * std::pow(min_a, e.r);
}

double theorem42_bound(double m, double min_a, double r) {
    require_positive(m, "m");
    require_positive(min_a, "mA");
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidParams("r must be ≥ 0");
    return m * std::pow(min_a, r);
}

double corollary43_bound(double norm_a, double m, double min_a, const FurutaExponents& e) {
    require_exponents(e.cor43_violations(), e);
    require_positive(norm_a, "normA");
    require_positive(m, "m");
    require_positive(min_a, "mA");
    const double base = std::pow(norm_a, 1.0 + e.r) - m * std::pow(min_a, e.r);
    if (!(base > 0.0)) throw InvalidParams("corollary bound requires ‖A‖^{1+r} > m·m_A^r");
    const double alpha = (e.p + e.r) / (e.q * (1.0 + e.r));
    return std::pow(norm_a, (e.p + e.r) / e.q) - std::pow(base, alpha);
}

}  // namespace opilab
