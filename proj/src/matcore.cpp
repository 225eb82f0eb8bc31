#include "opilab/matcore.hpp"

#include "opilab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace opilab {

namespace {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
    // (x + y) * 0.5 is commutative in IEEE arithmetic, so the result is
    // exactly symmetric.
    Eigen::MatrixXd t = m.transpose();
    return (m + t) * 0.5;
}

std::string condition_summary(const Eigen::MatrixXd& m) {
    std::ostringstream os;
    os << "dim=" << m.rows() << " frobenius=" << m.norm()
       << " max_abs_entry=" << m.cwiseAbs().maxCoeff();
    return os.str();
}

}  // namespace

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw InvalidParams("HermitianMatrix requires a non-empty square matrix");
    }
    if (!m.allFinite()) throw InvalidParams("HermitianMatrix entries must be finite");
    m_ = symmetrize(m);
}

HermitianMatrix HermitianMatrix::identity(int dim) {
    return HermitianMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(int dim) {
    return HermitianMatrix(Eigen::MatrixXd::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
    return HermitianMatrix(Eigen::MatrixXd(v.asDiagonal()));
}

HermitianMatrix HermitianMatrix::scalar(double value) {
    return HermitianMatrix(Eigen::MatrixXd::Constant(1, 1, value));
}

HermitianMatrix HermitianMatrix::shifted(double c) const {
    Eigen::MatrixXd m = m_;
    m.diagonal().array() += c;
    return HermitianMatrix(m);
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("matrix sum: dimension mismatch");
    return HermitianMatrix(a.m_ + b.m_);
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("matrix difference: dimension mismatch");
    return HermitianMatrix(a.m_ - b.m_);
}

HermitianMatrix operator*(double c, const HermitianMatrix& a) { return HermitianMatrix(c * a.m_); }

Eigen::MatrixXd SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

SpectralDecomposition spectral_decompose(const HermitianMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix());
    if (solver.info() != Eigen::Success) {
        throw EigenSolverError("symmetric eigensolver did not converge (" +
                               condition_summary(a.matrix()) + ")");
    }
    const Eigen::VectorXd& vals = solver.eigenvalues();
    const Eigen::MatrixXd& vecs = solver.eigenvectors();
    const auto n = vals.size();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return vals(i) < vals(j); });

    SpectralDecomposition sd{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        sd.eigenvalues(k) = vals(src);
        Eigen::VectorXd col = vecs.col(src);
        Eigen::Index pivot = 0;
        for (Eigen::Index i = 1; i < n; ++i) {
            if (std::abs(col(i)) > std::abs(col(pivot))) pivot = i;
        }
        if (col(pivot) < 0) col = -col;
        sd.eigenvectors.col(k) = col;
    }
    return sd;
}

HermitianMatrix map_spectrum(const SpectralDecomposition& sd, const std::function<double(double)>& fn) {
    Eigen::VectorXd mapped = sd.eigenvalues.unaryExpr(fn);
    return HermitianMatrix(sd.eigenvectors * mapped.asDiagonal() * sd.eigenvectors.transpose());
}

HermitianMatrix map_spectrum(const HermitianMatrix& a, const std::function<double(double)>& fn) {
    return map_spectrum(spectral_decompose(a), fn);
}

HermitianMatrix congruence(const HermitianMatrix& outer, const HermitianMatrix& inner) {
    if (outer.dim() != inner.dim()) throw DimensionMismatch("congruence: dimension mismatch");
    return HermitianMatrix(outer.matrix() * inner.matrix() * outer.matrix());
}

HermitianMatrix conjugate(const Eigen::MatrixXd& u, const HermitianMatrix& a) {
    if (u.rows() != a.dim() || u.cols() != a.dim()) throw DimensionMismatch("conjugate: dimension mismatch");
    return HermitianMatrix(u * a.matrix() * u.transpose());
}

std::string_view to_string(Order o) {
    switch (o) {
        case Order::StrictlyGreater: return "StrictlyGreater";
        case Order::GreaterEqual: return "GreaterEqual";
        case Order::Equal: return "Equal";
        case Order::Less: return "Less";
        case Order::Incomparable: return "Incomparable";
    }
    return "?";
}

double default_order_tol(const HermitianMatrix& a, const HermitianMatrix& b) {
    return 1e-10 * (1.0 + operator_norm(a) + operator_norm(b));
}

OrderRelation loewner_compare(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
    if (a.dim() != b.dim()) throw DimensionMismatch("loewner_compare: dimension mismatch");
    if (!(tol >= 0.0)) throw InvalidParams("loewner_compare: tol must be >= 0");
    const auto [lo, hi] = spectrum_extrema(a - b);
    const double norm = std::max(std::abs(lo), std::abs(hi));

    Order kind;
    if (norm <= tol) {
        kind = Order::Equal;
    } else if (lo > tol) {
        kind = Order::StrictlyGreater;
    } else if (lo >= -tol) {
        kind = Order::GreaterEqual;
    } else if (hi <= tol) {
        kind = Order::Less;
    } else {
        kind = Order::Incomparable;
    }
    return {kind, lo};
}

double strict_gap(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("strict_gap: dimension mismatch");
    const double lo = spectrum_extrema(a - b).min;
    if (!(lo > 0.0)) {
        std::ostringstream os;
        os << "A - B is not strictly positive (lambda_min = " << lo << ")";
        throw NotStrictlyOrdered(os.str());
    }
    return lo;
}

SpectrumExtrema spectrum_extrema(const HermitianMatrix& x) {
    const Eigen::VectorXd& ev = spectral_decompose(x).eigenvalues;
    return {ev(0), ev(ev.size() - 1)};
}

double operator_norm(const HermitianMatrix& x) {
    const auto [lo, hi] = spectrum_extrema(x);
    return std::max(std::abs(lo), std::abs(hi));
}

}  // namespace opilab
