#pragma once

// Dense real-symmetric matrix algebra: spectral decomposition, spectral maps,
// Loewner-order predicates and the spectral scalars ||X||, m_X, M_X.

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string_view>

namespace opilab {

/// Dense real symmetric matrix. Entries are symmetrized on construction, so
/// (i, j) and (j, i) are bitwise equal.
class HermitianMatrix {
public:
    /// Throws InvalidParams for non-square, empty or non-finite input.
    explicit HermitianMatrix(const Eigen::MatrixXd& m);

    static HermitianMatrix identity(int dim);
    static HermitianMatrix zero(int dim);
    static HermitianMatrix diagonal(std::span<const double> values);
    static HermitianMatrix scalar(double value);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }

    /// A + c*I
    HermitianMatrix shifted(double c) const;

    friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
    friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
    friend HermitianMatrix operator*(double c, const HermitianMatrix& a);
    friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b) {
        return a.m_ == b.m_;
    }

private:
    Eigen::MatrixXd m_;
};

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthogonal, columns are eigenvectors

    /// U diag(eigenvalues) U^T
    Eigen::MatrixXd reconstruct() const;
};

/// Eigenpairs sorted ascending; each eigenvector's largest-magnitude component
/// is made positive (first index wins ties) so results are reproducible.
SpectralDecomposition spectral_decompose(const HermitianMatrix& a);

/// U diag(fn(lambda_i)) U^T. No domain checking; see apply_function for that.
HermitianMatrix map_spectrum(const SpectralDecomposition& sd, const std::function<double(double)>& fn);
HermitianMatrix map_spectrum(const HermitianMatrix& a, const std::function<double(double)>& fn);

/// outer * inner * outer, symmetrized.
HermitianMatrix congruence(const HermitianMatrix& outer, const HermitianMatrix& inner);

/// u * a * u^T for a square u.
HermitianMatrix conjugate(const Eigen::MatrixXd& u, const HermitianMatrix& a);

enum class Order {
    StrictlyGreater,  // A - B > tol
    GreaterEqual,     // A - B >= -tol, not Equal
    Equal,            // ||A - B|| <= tol
    Less,             // A - B <= tol, not Equal
    Incomparable,     // A - B indefinite beyond tol
};

std::string_view to_string(Order o);

struct OrderRelation {
    Order kind;
    double witness_min_eig;  // lambda_min(A - B)
};

/// 1e-10 * (1 + ||A|| + ||B||)
double default_order_tol(const HermitianMatrix& a, const HermitianMatrix& b);

OrderRelation loewner_compare(const HermitianMatrix& a, const HermitianMatrix& b, double tol);

/// The largest c with A - B >= c*I, i.e. lambda_min(A - B) = ||(A - B)^{-1}||^{-1}.
/// Throws NotStrictlyOrdered unless lambda_min(A - B) > 0.
double strict_gap(const HermitianMatrix& a, const HermitianMatrix& b);

struct SpectrumExtrema {
    double min;
    double max;
};

SpectrumExtrema spectrum_extrema(const HermitianMatrix& x);

/// max |eigenvalue|
double operator_norm(const HermitianMatrix& x);

}  // namespace opilab
