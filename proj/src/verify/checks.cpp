#include "opilab/errors.hpp"
#include "opilab/format.hpp"
#include "opilab/verify.hpp"

#include <algorithm>
#include <cmath>

namespace opilab {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "Holds";
        case Verdict::HoldsWithEquality: return "HoldsWithEquality";
        case Verdict::Violated: return "Violated";
        case Verdict::Errored: return "Errored";
    }
    return "?";
}

std::string_view to_string(MonotoneBound k) {
    switch (k) {
        case MonotoneBound::TheoremA: return "TheoremA";
        case MonotoneBound::TheoremB: return "TheoremB";
        case MonotoneBound::TheoremC: return "TheoremC";
        case MonotoneBound::InverseI: return "InverseI";
        case MonotoneBound::InverseII: return "InverseII";
        case MonotoneBound::KeyLemma: return "KeyLemma";
        case MonotoneBound::FiniteInterval: return "FiniteInterval";
    }
    return "?";
}

std::string_view to_string(FurutaBound b) {
    switch (b) {
        case FurutaBound::Plain: return "Plain";
        case FurutaBound::Thm41: return "Thm41";
        case FurutaBound::Thm42: return "Thm42";
        case FurutaBound::Cor43: return "Cor43";
    }
    return "?";
}

Verdict classify(double margin, double tol) {
    if (std::isnan(margin)) return Verdict::Errored;
    if (margin < -tol) return Verdict::Violated;
    if (margin <= tol) return Verdict::HoldsWithEquality;
    return Verdict::Holds;
}

namespace {

double tolerance(double scale, const HermitianMatrix& a, const HermitianMatrix& b, double bound) {
    return scale * (1.0 + operator_norm(a) + operator_norm(b) + std::abs(bound));
}

void finish(BoundReport& r, const HermitianMatrix& lhs, const HermitianMatrix& a, const HermitianMatrix& b,
            double tol_scale) {
    r.dim = a.dim();
    r.achieved_margin = spectrum_extrema(lhs.shifted(-r.bound)).min;
    r.tolerance = tolerance(tol_scale, a, b, r.bound);
    r.verdict = classify(r.achieved_margin, r.tolerance);
}

void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("checker: A and B differ in dimension");
}

void require_positive_definite(const HermitianMatrix& x, const char* name) {
    const double lo = spectrum_extrema(x).min;
    if (!(lo > 0.0)) {
        throw NotPositiveDefinite(std::string(name) + " is not positive definite (lambda_min = " +
                                  format_double(lo) + ")");
    }
}

}  // namespace

BoundReport check_monotone_bound(const FunctionSpec& f, const HermitianMatrix& a, const HermitianMatrix& b,
                                 MonotoneBound kind, double tol_scale) {
    require_same_dim(a, b);
    BoundReport r;
    r.function_id = f.id();
    r.m = strict_gap(a, b);

    const bool inverse_kind = kind == MonotoneBound::InverseI || kind == MonotoneBound::InverseII;
    if (inverse_kind && f.get_if<fn::Inverse>() == nullptr) {
        throw InvalidParams("inverse-difference bounds are stated for f = Inverse, got " + f.id());
    }

    switch (kind) {
        case MonotoneBound::TheoremA:
        case MonotoneBound::TheoremC: {
            const auto* pw = f.get_if<fn::Power>();
            const bool is_log = f.get_if<fn::Log>() != nullptr;
            if (pw == nullptr && !is_log) {
                throw InvalidParams(std::string(to_string(kind)) + " needs Power(r) or Log, got " + f.id());
            }
            if (kind == MonotoneBound::TheoremA) {
                const double norm_a = operator_norm(a);
                r.bound = is_log ? theorem_a_log_bound(norm_a, r.m) : theorem_a_bound(pw->r, norm_a, r.m);
            } else {
                const PowerLogPair c = theorem_c_bounds(is_log ? 1.0 : pw->r, operator_norm(b), r.m);
                r.bound = is_log ? c.log : c.power;
            }
            break;
        }
        case MonotoneBound::TheoremB:
            r.bound = theorem_b_bound(f, operator_norm(b), r.m);
            break;
        case MonotoneBound::InverseI:
            r.bound = lemma31_bounds(operator_norm(a), operator_norm(b), r.m).bound_i;
            break;
        case MonotoneBound::InverseII:
            r.bound = lemma31_bounds(operator_norm(a), operator_norm(b), r.m).bound_ii;
            break;
        case MonotoneBound::KeyLemma: {
            const auto* mm = f.get_if<fn::MobiusMonotone>();
            if (mm == nullptr) throw InvalidParams("KeyLemma needs MobiusMonotone(lambda), got " + f.id());
            r.bound = key_lemma_bound(mm->lambda, spectrum_extrema(b).max, spectrum_extrema(a).min, r.m);
            break;
        }
        case MonotoneBound::FiniteInterval:
            r.bound = finite_interval_monotone_bound(f, spectrum_extrema(b).max, spectrum_extrema(a).min, r.m);
            r.note = "shift epsilon taken as the strict gap m";
            break;
    }

    const HermitianMatrix fa = apply_function(f, a);
    const HermitianMatrix fb = apply_function(f, b);
    finish(r, inverse_kind ? fb - fa : fa - fb, a, b, tol_scale);
    return r;
}

BoundReport check_strict_convexity(const FunctionSpec& f, const HermitianMatrix& a, const HermitianMatrix& b,
                                   double s, double tol_scale) {
    require_same_dim(a, b);
    if (!(s > 0.0 && s < 1.0)) throw InvalidParams("convexity check needs s in (0, 1)");
    BoundReport r;
    r.function_id = f.id();
    r.s = s;
    r.m = spectral_decompose(a - b).eigenvalues.cwiseAbs().minCoeff();
    r.bound = 0.0;
    const HermitianMatrix mix = s * a + (1.0 - s) * b;
    const HermitianMatrix gap = s * apply_function(f, a) + (1.0 - s) * apply_function(f, b) - apply_function(f, mix);
    finish(r, gap, a, b, tol_scale);
    return r;
}

HermitianMatrix furuta_lhs(const HermitianMatrix& a, const HermitianMatrix& b, const FurutaExponents& e,
                           FurutaVariant variant) {
    require_same_dim(a, b);
    if (variant == FurutaVariant::General) {
        require_exponents(e.fi_violations(), e);
    } else {
        std::vector<std::string> v;
        if (!(e.p >= 1.0)) v.emplace_back("p ≥ 1 violated");
        if (!(e.r >= 0.0)) v.emplace_back("r ≥ 0 violated");
        require_exponents(v, e);
    }
    require_positive_definite(a, "A");
    require_positive_definite(b, "B");

    const SpectralDecomposition sa = spectral_decompose(a);
    const auto pow_of = [](const SpectralDecomposition& sd, double x) {
        return map_spectrum(sd, [x](double t) { return std::pow(t, x); });
    };
    // congruence() symmetrizes, so the inner matrix is exactly symmetric
    // before its spectral root is taken.
    const HermitianMatrix inner = congruence(pow_of(sa, e.r / 2.0), pow_of(spectral_decompose(b), e.p));
    const SpectralDecomposition si = spectral_decompose(inner);
    // Roundoff can push tiny eigenvalues of a PD congruence below zero.
    const auto root = [&](double x) {
        return map_spectrum(si, [x](double t) { return std::pow(std::max(t, 0.0), x); });
    };
    if (variant == FurutaVariant::General) {
        return pow_of(sa, (e.p + e.r) / e.q) - root(1.0 / e.q);
    }
    return pow_of(sa, 1.0 + e.r) - root((1.0 + e.r) / (e.p + e.r));
}

BoundReport check_furuta(const HermitianMatrix& a, const HermitianMatrix& b, const FurutaExponents& e,
                         FurutaBound which, double tol_scale) {
    switch (which) {
        case FurutaBound::Plain: require_exponents(e.fi_violations(), e); break;
        case FurutaBound::Thm41: require_exponents(e.thm41_violations(), e); break;
        case FurutaBound::Thm42: {
            std::vector<std::string> v;
            if (!(e.p >= 1.0)) v.emplace_back("p ≥ 1 violated");
            if (!(e.r >= 0.0)) v.emplace_back("r ≥ 0 violated");
            require_exponents(v, e);
            break;
        }
        case FurutaBound::Cor43: require_exponents(e.cor43_violations(), e); break;
    }
    require_same_dim(a, b);

    BoundReport r;
    r.exponents = e;
    if (which == FurutaBound::Thm42) r.exponents->q = FurutaExponents::optimal_q(e.p, e.r);
    require_positive_definite(a, "A");
    require_positive_definite(b, "B");
    r.m = strict_gap(a, b);
    const double min_a = spectrum_extrema(a).min;
    switch (which) {
        case FurutaBound::Plain: r.bound = 0.0; break;
        case FurutaBound::Thm41: r.bound = theorem41_bound(operator_norm(b), r.m, e, min_a); break;
        case FurutaBound::Thm42: r.bound = theorem42_bound(r.m, min_a, e.r); break;
        case FurutaBound::Cor43: r.bound = corollary43_bound(operator_norm(a), r.m, min_a, e); break;
    }
    const FurutaVariant variant = which == FurutaBound::Thm42 ? FurutaVariant::Optimal : FurutaVariant::General;
    finish(r, furuta_lhs(a, b, e, variant), a, b, tol_scale);
    return r;
}

}  // namespace opilab
