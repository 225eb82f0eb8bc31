#pragma once

// Scalar function specifications: catalog functions, the Mobius families
//   t / (1 - lambda t)     (monotone building block on (-1, 1))
//   x^2 / (1 - lambda x)   (convex building block on (-1, 1))
// and functions assembled from discrete measures through the integral
// representations of operator monotone / convex functions. Also a Loewner
// (divided-difference) matrix certifier for operator monotonicity.

#include "opilab/matcore.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace opilab {

/// Real interval with per-endpoint closedness; endpoints may be infinite.
class Interval {
public:
    Interval(double lo, double hi, bool lo_closed = false, bool hi_closed = false);

    static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
    static Interval real_line();
    static Interval positive_halfline() { return open(0.0, kInf); }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    bool lo_closed() const noexcept { return lo_closed_; }
    bool hi_closed() const noexcept { return hi_closed_; }
    bool bounded() const noexcept;
    double length() const noexcept { return hi_ - lo_; }

    /// Distance kept between an evaluation point and an open endpoint:
    /// 1e-8 * length, or 1e-8 when the interval is unbounded.
    double margin() const noexcept;

    /// Closed endpoints admit t == endpoint; open ones require the margin.
    bool admits(double t) const noexcept;

    bool contains(const Interval& other) const noexcept;

    static constexpr double kInf = std::numeric_limits<double>::infinity();

private:
    double lo_;
    double hi_;
    bool lo_closed_;
    bool hi_closed_;
};

std::string to_string(const Interval& iv);

struct DiscreteMeasure {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
    double total_weight() const noexcept;
};

/// n-point Gauss-Legendre rule mapped to [lo, hi], weights multiplied by
/// density(node). Computed by Golub-Welsch.
DiscreteMeasure gauss_legendre_measure(int n, double lo, double hi,
                                       const std::function<double(double)>& density = {});

enum class ClassClaim { OperatorMonotone, OperatorConvex, Neither };

std::string_view to_string(ClassClaim c);

namespace fn {
struct Affine { double c0; double c1; };
struct Power { double r; };
struct Log {};
struct Inverse {};
struct Square {};
struct MobiusMonotone { double lambda; };
struct MobiusConvex { double lambda; };
/// f0 + fp0 * sum_i w_i * t / (1 - lambda_i t), weights summing to 1.
struct QuadMonotoneUnit { double f0; double fp0; DiscreteMeasure measure; };
/// f0 + alpha x + sum_i w_i * x^2 / (1 - lambda_i x), nodes in [-1, 1].
struct QuadConvexUnit { double f0; double alpha; DiscreteMeasure measure; };
/// a + b t + sum_i w_i * (1 + t s_i) / (s_i - t), nodes s_i <= 0.
struct QuadMonotoneHalfline { double a; double b; DiscreteMeasure measure; };
}  // namespace fn

using FunctionKind = std::variant<fn::Affine, fn::Power, fn::Log, fn::Inverse, fn::Square,
                                  fn::MobiusMonotone, fn::MobiusConvex, fn::QuadMonotoneUnit,
                                  fn::QuadConvexUnit, fn::QuadMonotoneHalfline>;

/// Immutable description of a scalar function: what it is, where it may be
/// evaluated, and what operator class it claims. The claim is metadata only;
/// checkers recompute everything from evaluations.
class FunctionSpec {
public:
    static FunctionSpec affine(double c0, double c1);
    static FunctionSpec power(double r);
    static FunctionSpec log();
    static FunctionSpec inverse();
    static FunctionSpec square();
    static FunctionSpec mobius_monotone(double lambda);
    static FunctionSpec mobius_convex(double lambda);

    const FunctionKind& kind() const noexcept { return kind_; }
    const Interval& domain() const noexcept { return domain_; }
    ClassClaim class_claim() const noexcept { return claim_; }

    template <class T>
    const T* get_if() const noexcept { return std::get_if<T>(&kind_); }

    std::string kind_name() const;
    /// Human-readable identifier, e.g. "Power(0.5)" or "QuadMonotoneUnit[3]".
    std::string id() const;

    bool is_constant() const;
    bool is_linear() const;

    /// Restricts the domain; throws InvalidParams unless `d` lies inside the
    /// natural domain of the kind.
    FunctionSpec with_domain(const Interval& d) const;
    FunctionSpec with_claim(ClassClaim c) const;

private:
    FunctionSpec(FunctionKind kind, Interval domain, ClassClaim claim)
        : kind_(std::move(kind)), domain_(domain), claim_(claim) {}

    friend FunctionSpec build_convex_from_measure(double, double, DiscreteMeasure);
    friend FunctionSpec build_monotone_from_measure(double, double, DiscreteMeasure);
    friend FunctionSpec build_monotone_halfline(double, double, DiscreteMeasure);

    FunctionKind kind_;
    Interval domain_;
    ClassClaim claim_;
};

/// Throws DomainViolation unless domain(f) admits t.
double eval_scalar(const FunctionSpec& f, double t);
double eval_derivative(const FunctionSpec& f, double t);

/// f(A) = U diag(f(lambda_i)) U^T. Throws DomainViolation listing every
/// eigenvalue outside the domain.
HermitianMatrix apply_function(const FunctionSpec& f, const HermitianMatrix& a);

/// f0 + alpha x + integral of x^2/(1 - lambda x) against the measure on [-1, 1].
FunctionSpec build_convex_from_measure(double f0, double alpha, DiscreteMeasure measure);

/// f0 + fp0 * integral of t/(1 - lambda t) against the measure on (-1, 1); the
/// measure is normalized to total weight 1.
FunctionSpec build_monotone_from_measure(double f0, double fp0, DiscreteMeasure measure);

/// a + b t + integral of (1 + t s)/(s - t) against the measure on (-inf, 0],
/// with domain (0, inf).
FunctionSpec build_monotone_halfline(double a, double b, DiscreteMeasure measure);

/// Divided-difference matrix (f(t_i) - f(t_j)) / (t_i - t_j); pairs closer than
/// merge_eps use the derivative at their midpoint. The default merge_eps is
/// 1e-7 times the domain length (or the point spread when unbounded).
HermitianMatrix loewner_matrix(const FunctionSpec& f, std::span<const double> points,
                               std::optional<double> merge_eps = std::nullopt);

struct CertifyVerdict {
    bool accepted = true;
    int trials_run = 0;
    double worst_min_eig = 0.0;      // smallest Loewner-matrix eigenvalue seen
    std::vector<double> witness;     // points of the first rejecting trial
    double witness_min_eig = 0.0;
};

/// Samples `trials` random point sets in `interval` and checks that each
/// Loewner matrix is PSD within 1e-9 * (1 + max|entry|). Stops at the first
/// rejecting trial. Trial k uses a stream derived from (seed, k).
CertifyVerdict certify_monotone(const FunctionSpec& f, const Interval& interval, int trials,
                                int points_per_trial, std::uint64_t seed);

}  // namespace opilab
