// Commuting-case oracle. For A = diag(a), B = diag(b) every matrix expression
// in the checkers collapses to componentwise scalar arithmetic, so this file
// recomputes both sides from scratch: no matcore, no bounds module.

#include "opilab/errors.hpp"
#include "opilab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace opilab {

namespace {

struct Scalars {
    double norm_a;
    double norm_b;
    double min_a;
    double max_b;
    double gap;  // min (a_i - b_i)
};

Scalars scalars_of(std::span<const double> a, std::span<const double> b) {
    Scalars s{0.0, 0.0, a[0], b[0], a[0] - b[0]};
    for (std::size_t i = 0; i < a.size(); ++i) {
        s.norm_a = std::max(s.norm_a, std::abs(a[i]));
        s.norm_b = std::max(s.norm_b, std::abs(b[i]));
        s.min_a = std::min(s.min_a, a[i]);
        s.max_b = std::max(s.max_b, b[i]);
        s.gap = std::min(s.gap, a[i] - b[i]);
    }
    return s;
}

double mobius(double lambda, double t) { return t / (1.0 - lambda * t); }

double monotone_bound(const MonotoneQuery& q, const Scalars& s) {
    const FunctionSpec& f = q.f;
    const auto* pw = f.get_if<fn::Power>();
    const bool is_log = f.get_if<fn::Log>() != nullptr;
    switch (q.kind) {
        case MonotoneBound::TheoremA:
            if (is_log) return std::log(s.norm_a / (s.norm_a - s.gap));
            if (pw == nullptr) throw InvalidParams("oracle: TheoremA needs Power or Log");
            return std::pow(s.norm_a, pw->r) - std::pow(s.norm_a - s.gap, pw->r);
        case MonotoneBound::TheoremC:
            if (is_log) return std::log((s.norm_b + s.gap) / s.norm_b);
            if (pw == nullptr) throw InvalidParams("oracle: TheoremC needs Power or Log");
            return std::pow(s.norm_b + s.gap, pw->r) - std::pow(s.norm_b, pw->r);
        case MonotoneBound::TheoremB:
            return eval_scalar(f, s.norm_b + s.gap) - eval_scalar(f, s.norm_b);
        case MonotoneBound::InverseI:
            return 1.0 / (s.norm_a - s.gap) - 1.0 / s.norm_a;
        case MonotoneBound::InverseII:
            return s.gap / ((s.norm_b + s.gap) * s.norm_b);
        case MonotoneBound::KeyLemma: {
            const auto* mm = f.get_if<fn::MobiusMonotone>();
            if (mm == nullptr) throw InvalidParams("oracle: KeyLemma needs MobiusMonotone");
            const double l = mm->lambda;
            return l <= 0.0 ? mobius(l, s.max_b + s.gap) - mobius(l, s.max_b)
                            : mobius(l, s.min_a) - mobius(l, s.min_a - s.gap);
        }
        case MonotoneBound::FiniteInterval: {
            const auto* qm = f.get_if<fn::QuadMonotoneUnit>();
            if (qm == nullptr) throw InvalidParams("oracle: FiniteInterval needs QuadMonotoneUnit");
            double sum = 0.0;
            for (std::size_t i = 0; i < qm->measure.size(); ++i) {
                const double l = qm->measure.nodes[i];
                const double piece = l <= 0.0 ? mobius(l, s.max_b + s.gap) - mobius(l, s.max_b)
                                              : mobius(l, s.min_a) - mobius(l, s.min_a - s.gap);
                sum += qm->measure.weights[i] * piece;
            }
            return qm->fp0 * sum;
        }
    }
    return 0.0;
}

double furuta_bound(const FurutaQuery& q, const Scalars& s) {
    const auto& [p, qq, r] = q.exponents;
    switch (q.which) {
        case FurutaBound::Plain: return 0.0;
        case FurutaBound::Thm41: {
            const double e = (p + r) / qq - r;
            return (std::pow(s.norm_b + s.gap, e) - std::pow(s.norm_b, e)) * std::pow(s.min_a, r);
        }
        case FurutaBound::Thm42: return s.gap * std::pow(s.min_a, r);
        case FurutaBound::Cor43:
            return std::pow(s.norm_a, (p + r) / qq) -
                   std::pow(std::pow(s.norm_a, 1.0 + r) - s.gap * std::pow(s.min_a, r), (p + r) / (qq * (1.0 + r)));
    }
    return 0.0;
}

}  // namespace

OracleResult commuting_oracle(const OracleQuery& query, std::span<const double> eigs_a,
                              std::span<const double> eigs_b) {
    if (eigs_a.size() != eigs_b.size()) throw DimensionMismatch("commuting_oracle: length mismatch");
    if (eigs_a.empty()) throw InvalidParams("commuting_oracle: empty spectra");
    const Scalars s = scalars_of(eigs_a, eigs_b);

    std::vector<double> lhs(eigs_a.size());
    double bound = 0.0;
    if (const auto* mq = std::get_if<MonotoneQuery>(&query)) {
        const bool inverse = mq->kind == MonotoneBound::InverseI || mq->kind == MonotoneBound::InverseII;
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            lhs[i] = inverse ? 1.0 / eigs_b[i] - 1.0 / eigs_a[i]
                             : eval_scalar(mq->f, eigs_a[i]) - eval_scalar(mq->f, eigs_b[i]);
        }
        bound = monotone_bound(*mq, s);
    } else if (const auto* cq = std::get_if<ConvexityQuery>(&query)) {
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            const double a = eigs_a[i];
            const double b = eigs_b[i];
            lhs[i] = cq->s * eval_scalar(cq->f, a) + (1.0 - cq->s) * eval_scalar(cq->f, b) -
                     eval_scalar(cq->f, cq->s * a + (1.0 - cq->s) * b);
        }
    } else {
        const auto& fq = std::get<FurutaQuery>(query);
        const auto& [p, q, r] = fq.exponents;
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            const double a = eigs_a[i];
            const double inner = std::pow(a, r) * std::pow(eigs_b[i], p);
            lhs[i] = fq.which == FurutaBound::Thm42
                         ? std::pow(a, 1.0 + r) - std::pow(inner, (1.0 + r) / (p + r))
                         : std::pow(a, (p + r) / q) - std::pow(inner, 1.0 / q);
        }
        bound = furuta_bound(fq, s);
    }

    const double lhs_min = *std::min_element(lhs.begin(), lhs.end());
    return {lhs_min, bound, lhs_min - bound};
}

}  // namespace opilab
