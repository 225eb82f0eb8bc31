#include "opilab/errors.hpp"
#include "opilab/format.hpp"
#include "opilab/verify.hpp"

#include <algorithm>
#include <cmath>

namespace opilab {

namespace {

constexpr int kMaxAttempts = 1000;
constexpr double kMaxCondition = 1e12;

struct Usable {
    double lo;
    double hi;
    double length() const { return hi - lo; }
};

Usable usable_range(const PairSpec& spec) {
    if (spec.dim < 1) throw InvalidParams("pair spec: dim must be >= 1");
    if (!spec.interval.bounded()) throw InfeasibleSpec("pair spec: interval must be bounded");
    const double margin = 1e-7 * spec.interval.length();
    Usable u{spec.interval.lo() + margin, spec.interval.hi() - margin};
    if (!(spec.min_gap > 0.0) || !(spec.min_gap < u.length())) {
        throw InfeasibleSpec("pair spec: min_gap " + format_double(spec.min_gap) +
                             " must lie in (0, interval length)");
    }
    return u;
}

HermitianMatrix rotated(const Eigen::VectorXd& eigs, Rng& rng) {
    const Eigen::MatrixXd q = random_orthogonal(static_cast<int>(eigs.size()), rng);
    return HermitianMatrix(q * eigs.asDiagonal() * q.transpose());
}

bool inside(const HermitianMatrix& x, const Interval& iv) {
    const auto [lo, hi] = spectrum_extrema(x);
    return iv.admits(lo) && iv.admits(hi);
}

}  // namespace

Eigen::MatrixXd random_orthogonal(int dim, Rng& rng) {
    Eigen::MatrixXd g(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) g(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd& r = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    return q;
}

MatrixPair gen_ordered_pair(const PairSpec& spec) {
    const Usable u = usable_range(spec);
    const double g = spec.min_gap;
    const int n = spec.dim;

    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Rng rng(derive_seed(spec.seed, "ordered_pair", {static_cast<std::uint64_t>(attempt)}));
        // Eigenvalues of D = A - B in [g, top], one pinned at the gap; B's
        // spectrum leaves room for top so that A = B + D stays in range.
        const double top = g + rng.unit() * 0.5 * (u.length() - g);
        Eigen::VectorXd d(n);
        Eigen::VectorXd b(n);
        d(0) = g * (1.0 + 1e-10);
        for (int i = 1; i < n; ++i) d(i) = rng.uniform(g, top);
        for (int i = 0; i < n; ++i) b(i) = rng.uniform(u.lo, u.hi - top);

        const HermitianMatrix bm = rotated(b, rng);
        const HermitianMatrix dm = rotated(d, rng);
        HermitianMatrix am = bm + dm;

        const auto [dlo, dhi] = spectrum_extrema(am - bm);
        if (!(dlo >= g * (1.0 - 1e-9)) || dhi / dlo > kMaxCondition) continue;
        if (!inside(am, spec.interval) || !inside(bm, spec.interval)) continue;
        return {std::move(am), bm};
    }
    throw InfeasibleSpec("gen_ordered_pair: no admissible pair after 1000 attempts");
}

MatrixPair gen_invertible_diff_pair(const PairSpec& spec) {
    const Usable u = usable_range(spec);
    const double g = spec.min_gap;
    const int n = spec.dim;
    if (spec.kind == PairKind::IndefiniteDifference && (n < 2 || 2.0 * g >= u.length())) {
        throw InfeasibleSpec("gen_invertible_diff_pair: an indefinite difference needs dim >= 2 and "
                             "2*min_gap < interval length");
    }

    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Rng rng(derive_seed(spec.seed, "invertible_pair", {static_cast<std::uint64_t>(attempt)}));
        std::vector<int> sign(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            sign[static_cast<std::size_t>(i)] =
                spec.kind == PairKind::IndefiniteDifference ? (i % 2 == 0 ? 1 : -1) : (rng.coin() ? 1 : -1);
        }
        const bool mixed = std::any_of(sign.begin(), sign.end(), [&](int s) { return s != sign[0]; });
        if (mixed && 2.0 * g >= u.length()) std::fill(sign.begin(), sign.end(), sign[0]);

        double pos_top = 0.0;
        double neg_top = 0.0;
        if (mixed && 2.0 * g < u.length()) {
            pos_top = g + rng.unit() * (0.5 * u.length() - g);
            neg_top = g + rng.unit() * (0.5 * u.length() - g);
        } else {
            const double top = g + rng.unit() * 0.5 * (u.length() - g);
            (sign[0] > 0 ? pos_top : neg_top) = top;
        }

        Eigen::VectorXd d(n);
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) {
            const int s = sign[static_cast<std::size_t>(i)];
            const double top = s > 0 ? pos_top : neg_top;
            const double mag = i == 0 ? g * (1.0 + 1e-10) : rng.uniform(g, top);
            d(i) = s * mag;
        }
        for (int i = 0; i < n; ++i) b(i) = rng.uniform(u.lo + neg_top, u.hi - pos_top);

        const HermitianMatrix bm = rotated(b, rng);
        const HermitianMatrix dm = rotated(d, rng);
        HermitianMatrix am = bm + dm;

        const Eigen::VectorXd ev = spectral_decompose(am - bm).eigenvalues;
        const double min_abs = ev.cwiseAbs().minCoeff();
        const double max_abs = ev.cwiseAbs().maxCoeff();
        if (!(min_abs >= g * (1.0 - 1e-9)) || max_abs / min_abs > kMaxCondition) continue;
        if (spec.kind == PairKind::IndefiniteDifference && !(ev(0) < 0.0 && ev(n - 1) > 0.0)) continue;
        if (!inside(am, spec.interval) || !inside(bm, spec.interval)) continue;
        return {std::move(am), bm};
    }
    throw InfeasibleSpec("gen_invertible_diff_pair: no admissible pair after 1000 attempts");
}

}  // namespace opilab
