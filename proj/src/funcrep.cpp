#include "opilab/funcrep.hpp"

#include "opilab/errors.hpp"
#include "opilab/format.hpp"
#include "opilab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opilab {

// ---------------------------------------------------------------- Interval

Interval::Interval(double lo, double hi, bool lo_closed, bool hi_closed)
    : lo_(lo), hi_(hi), lo_closed_(lo_closed && std::isfinite(lo)),
      hi_closed_(hi_closed && std::isfinite(hi)) {
    if (!(lo < hi)) throw InvalidParams("interval requires lo < hi");
}

Interval Interval::real_line() { return open(-kInf, kInf); }

bool Interval::bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }

double Interval::margin() const noexcept { return bounded() ? 1e-8 * length() : 1e-8; }

bool Interval::admits(double t) const noexcept {
    if (!std::isfinite(t)) return false;
    const double eps = margin();
    if (std::isfinite(lo_) && !(lo_closed_ ? t >= lo_ : t - lo_ >= eps)) return false;
    if (std::isfinite(hi_) && !(hi_closed_ ? t <= hi_ : hi_ - t >= eps)) return false;
    return true;
}

bool Interval::contains(const Interval& other) const noexcept {
    const bool lo_ok = other.lo_ > lo_ || (other.lo_ == lo_ && (lo_closed_ || !other.lo_closed_));
    const bool hi_ok = other.hi_ < hi_ || (other.hi_ == hi_ && (hi_closed_ || !other.hi_closed_));
    return lo_ok && hi_ok;
}

std::string to_string(const Interval& iv) {
    return (iv.lo_closed() ? "[" : "(") + format_double(iv.lo()) + ", " + format_double(iv.hi()) +
           (iv.hi_closed() ? "]" : ")");
}

// --------------------------------------------------------- DiscreteMeasure

double DiscreteMeasure::total_weight() const noexcept {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

DiscreteMeasure gauss_legendre_measure(int n, double lo, double hi,
                                       const std::function<double(double)>& density) {
    if (n < 1) throw InvalidParams("Gauss-Legendre rule needs n >= 1");
    if (!(lo < hi)) throw InvalidParams("Gauss-Legendre rule needs lo < hi");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k - 1, k) = beta;
        jacobi(k, k - 1) = beta;
    }
    const SpectralDecomposition sd = spectral_decompose(HermitianMatrix(jacobi));
    DiscreteMeasure m;
    const double half = 0.5 * (hi - lo);
    for (int i = 0; i < n; ++i) {
        const double x = lo + half * (sd.eigenvalues(i) + 1.0);
        const double v0 = sd.eigenvectors(0, i);
        double w = 2.0 * v0 * v0 * half;
        if (density) w *= density(x);
        m.nodes.push_back(x);
        m.weights.push_back(w);
    }
    return m;
}

std::string_view to_string(ClassClaim c) {
    switch (c) {
        case ClassClaim::OperatorMonotone: return "OperatorMonotone";
        case ClassClaim::OperatorConvex: return "OperatorConvex";
        case ClassClaim::Neither: return "Neither";
    }
    return "?";
}

// ------------------------------------------------------------ FunctionSpec

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Interval kUnit = Interval::open(-1.0, 1.0);

Interval natural_domain(const FunctionKind& k) {
    return std::visit(
        overloaded{
            [](const fn::Affine&) { return Interval::real_line(); },
            [](const fn::Power& p) {
                return p.r > 0 ? Interval(0.0, Interval::kInf, true, false) : Interval::positive_halfline();
            },
            [](const fn::Log&) { return Interval::positive_halfline(); },
            [](const fn::Inverse&) { return Interval::positive_halfline(); },
            [](const fn::Square&) { return Interval::real_line(); },
            [](const fn::MobiusMonotone&) { return kUnit; },
            [](const fn::MobiusConvex&) { return kUnit; },
            [](const fn::QuadMonotoneUnit&) { return kUnit; },
            [](const fn::QuadConvexUnit&) { return kUnit; },
            [](const fn::QuadMonotoneHalfline&) { return Interval::positive_halfline(); },
        },
        k);
}

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw InvalidParams(std::string(what) + " must be finite");
}

void check_measure_shape(const DiscreteMeasure& m) {
    if (m.nodes.size() != m.weights.size()) {
        throw InvalidParams("measure nodes and weights differ in length");
    }
    for (double w : m.weights) {
        if (!std::isfinite(w) || w < 0.0) throw InvalidParams("measure weights must be finite and >= 0");
    }
    for (double s : m.nodes) check_finite(s, "measure node");
}

double eval_unchecked(const FunctionKind& k, double t) {
    return std::visit(
        overloaded{
            [t](const fn::Affine& a) { return a.c0 + a.c1 * t; },
            [t](const fn::Power& p) { return std::pow(t, p.r); },
            [t](const fn::Log&) { return std::log(t); },
            [t](const fn::Inverse&) { return 1.0 / t; },
            [t](const fn::Square&) { return t * t; },
            [t](const fn::MobiusMonotone& m) { return t / (1.0 - m.lambda * t); },
            [t](const fn::MobiusConvex& m) { return t * t / (1.0 - m.lambda * t); },
            [t](const fn::QuadMonotoneUnit& q) {
                double s = 0.0;
                for (std::size_t i = 0; i < q.measure.size(); ++i) {
                    s += q.measure.weights[i] * t / (1.0 - q.measure.nodes[i] * t);
                }
                return q.f0 + q.fp0 * s;
            },
            [t](const fn::QuadConvexUnit& q) {
                double s = 0.0;
                for (std::size_t i = 0; i < q.measure.size(); ++i) {
                    s += q.measure.weights[i] * t * t / (1.0 - q.measure.nodes[i] * t);
                }
                return q.f0 + q.alpha * t + s;
            },
            [t](const fn::QuadMonotoneHalfline& h) {
                double s = 0.0;
                for (std::size_t i = 0; i < h.measure.size(); ++i) {
                    const double node = h.measure.nodes[i];
                    s += h.measure.weights[i] * (1.0 + t * node) / (node - t);
                }
                return h.a + h.b * t + s;
            },
        },
        k);
}

double derivative_unchecked(const FunctionKind& k, double t) {
    return std::visit(
        overloaded{
            [](const fn::Affine& a) { return a.c1; },
            [t](const fn::Power& p) { return p.r == 0.0 ? 0.0 : p.r * std::pow(t, p.r - 1.0); },
            [t](const fn::Log&) { return 1.0 / t; },
            [t](const fn::Inverse&) { return -1.0 / (t * t); },
            [t](const fn::Square&) { return 2.0 * t; },
            [t](const fn::MobiusMonotone& m) {
                const double d = 1.0 - m.lambda * t;
                return 1.0 / (d * d);
            },
            [t](const fn::MobiusConvex& m) {
                const double d = 1.0 - m.lambda * t;
                return (2.0 * t - m.lambda * t * t) / (d * d);
            },
            [t](const fn::QuadMonotoneUnit& q) {
                double s = 0.0;
                for (std::size_t i = 0; i < q.measure.size(); ++i) {
                    const double d = 1.0 - q.measure.nodes[i] * t;
                    s += q.measure.weights[i] / (d * d);
                }
                return q.fp0 * s;
            },
            [t](const fn::QuadConvexUnit& q) {
                double s = 0.0;
                for (std::size_t i = 0; i < q.measure.size(); ++i) {
                    const double l = q.measure.nodes[i];
                    const double d = 1.0 - l * t;
                    s += q.measure.weights[i] * (2.0 * t - l * t * t) / (d * d);
                }
                return q.alpha + s;
            },
            [t](const fn::QuadMonotoneHalfline& h) {
                double s = 0.0;
                for (std::size_t i = 0; i < h.measure.size(); ++i) {
                    const double node = h.measure.nodes[i];
                    const double d = node - t;
                    s += h.measure.weights[i] * (1.0 + node * node) / (d * d);
                }
                return h.b + s;
            },
        },
        k);
}

[[noreturn]] void throw_domain(const FunctionSpec& f, std::vector<double> bad) {
    std::ostringstream os;
    os << f.id() << ": argument(s) outside domain " << to_string(f.domain()) << ":";
    for (double v : bad) os << ' ' << format_double(v);
    throw DomainViolation(os.str(), std::move(bad));
}

bool all_weight_at_zero(const DiscreteMeasure& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.nodes[i] != 0.0 && m.weights[i] > 0.0) return false;
    }
    return true;
}

}  // namespace

FunctionSpec FunctionSpec::affine(double c0, double c1) {
    check_finite(c0, "c0");
    check_finite(c1, "c1");
    return {fn::Affine{c0, c1}, Interval::real_line(),
            c1 >= 0 ? ClassClaim::OperatorMonotone : ClassClaim::OperatorConvex};
}

FunctionSpec FunctionSpec::power(double r) {
    check_finite(r, "power exponent");
    ClassClaim claim = ClassClaim::Neither;
    if (r > 0 && r <= 1) {
        claim = ClassClaim::OperatorMonotone;
    } else if ((r > 1 && r <= 2) || (r >= -1 && r < 0)) {
        claim = ClassClaim::OperatorConvex;
    }
    fn::Power k{r};
    return {k, natural_domain(k), claim};
}

FunctionSpec FunctionSpec::log() {
    return {fn::Log{}, Interval::positive_halfline(), ClassClaim::OperatorMonotone};
}

FunctionSpec FunctionSpec::inverse() {
    return {fn::Inverse{}, Interval::positive_halfline(), ClassClaim::OperatorConvex};
}

FunctionSpec FunctionSpec::square() {
    return {fn::Square{}, Interval::real_line(), ClassClaim::OperatorConvex};
}

FunctionSpec FunctionSpec::mobius_monotone(double lambda) {
    if (!(lambda > -1.0 && lambda < 1.0)) throw InvalidParams("MobiusMonotone requires lambda in (-1, 1)");
    return {fn::MobiusMonotone{lambda}, kUnit, ClassClaim::OperatorMonotone};
}

FunctionSpec FunctionSpec::mobius_convex(double lambda) {
    if (!(lambda >= -1.0 && lambda <= 1.0)) throw InvalidParams("MobiusConvex requires |lambda| <= 1");
    return {fn::MobiusConvex{lambda}, kUnit, ClassClaim::OperatorConvex};
}

std::string FunctionSpec::kind_name() const {
    return std::visit(overloaded{
                          [](const fn::Affine&) { return "Affine"; },
                          [](const fn::Power&) { return "Power"; },
                          [](const fn::Log&) { return "Log"; },
                          [](const fn::Inverse&) { return "Inverse"; },
                          [](const fn::Square&) { return "Square"; },
                          [](const fn::MobiusMonotone&) { return "MobiusMonotone"; },
                          [](const fn::MobiusConvex&) { return "MobiusConvex"; },
                          [](const fn::QuadMonotoneUnit&) { return "QuadMonotoneUnit"; },
                          [](const fn::QuadConvexUnit&) { return "QuadConvexUnit"; },
                          [](const fn::QuadMonotoneHalfline&) { return "QuadMonotoneHalfline"; },
                      },
                      kind_);
}

std::string FunctionSpec::id() const {
    const std::string name = kind_name();
    return std::visit(
        overloaded{
            [&](const fn::Affine& a) { return name + "(" + format_double(a.c0) + "," + format_double(a.c1) + ")"; },
            [&](const fn::Power& p) { return name + "(" + format_double(p.r) + ")"; },
            [&](const fn::MobiusMonotone& m) { return name + "(" + format_double(m.lambda) + ")"; },
            [&](const fn::MobiusConvex& m) { return name + "(" + format_double(m.lambda) + ")"; },
            [&](const fn::QuadMonotoneUnit& q) { return name + "[" + std::to_string(q.measure.size()) + "]"; },
            [&](const fn::QuadConvexUnit& q) { return name + "[" + std::to_string(q.measure.size()) + "]"; },
            [&](const fn::QuadMonotoneHalfline& h) { return name + "[" + std::to_string(h.measure.size()) + "]"; },
            [&](const auto&) { return name; },
        },
        kind_);
}

bool FunctionSpec::is_constant() const {
    return std::visit(overloaded{
                          [](const fn::Affine& a) { return a.c1 == 0.0; },
                          [](const fn::Power& p) { return p.r == 0.0; },
                          [](const fn::QuadMonotoneUnit& q) { return q.fp0 == 0.0; },
                          [](const fn::QuadConvexUnit& q) { return q.alpha == 0.0 && q.measure.total_weight() == 0.0; },
                          [](const fn::QuadMonotoneHalfline& h) { return h.b == 0.0 && h.measure.total_weight() == 0.0; },
                          [](const auto&) { return false; },
                      },
                      kind_);
}

bool FunctionSpec::is_linear() const {
    return std::visit(overloaded{
                          [](const fn::Affine&) { return true; },
                          [](const fn::Power& p) { return p.r == 0.0 || p.r == 1.0; },
                          [](const fn::QuadMonotoneUnit& q) { return q.fp0 == 0.0 || all_weight_at_zero(q.measure); },
                          [](const fn::QuadConvexUnit& q) { return q.measure.total_weight() == 0.0; },
                          [](const fn::QuadMonotoneHalfline& h) { return h.measure.total_weight() == 0.0; },
                          [](const auto&) { return false; },
                      },
                      kind_);
}

FunctionSpec FunctionSpec::with_domain(const Interval& d) const {
    const Interval natural = natural_domain(kind_);
    if (!natural.contains(d)) {
        throw InvalidParams(id() + ": domain " + to_string(d) + " is not inside the natural domain " +
                            to_string(natural));
    }
    FunctionSpec out = *this;
    out.domain_ = d;
    return out;
}

FunctionSpec FunctionSpec::with_claim(ClassClaim c) const {
    FunctionSpec out = *this;
    out.claim_ = c;
    return out;
}

// -------------------------------------------------------------- evaluation

double eval_scalar(const FunctionSpec& f, double t) {
    if (!f.domain().admits(t)) throw_domain(f, {t});
    return eval_unchecked(f.kind(), t);
}

double eval_derivative(const FunctionSpec& f, double t) {
    const Interval& d = f.domain();
    const bool at_closed_end = (d.lo_closed() && t == d.lo()) || (d.hi_closed() && t == d.hi());
    if (!d.admits(t) || at_closed_end) throw_domain(f, {t});
    return derivative_unchecked(f.kind(), t);
}

HermitianMatrix apply_function(const FunctionSpec& f, const HermitianMatrix& a) {
    const SpectralDecomposition sd = spectral_decompose(a);
    std::vector<double> bad;
    for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
        if (!f.domain().admits(sd.eigenvalues(i))) bad.push_back(sd.eigenvalues(i));
    }
    if (!bad.empty()) throw_domain(f, std::move(bad));
    const FunctionKind& k = f.kind();
    return map_spectrum(sd, [&k](double t) { return eval_unchecked(k, t); });
}

// ------------------------------------------------------------ constructors

FunctionSpec build_convex_from_measure(double f0, double alpha, DiscreteMeasure measure) {
    check_finite(f0, "f0");
    check_finite(alpha, "alpha");
    check_measure_shape(measure);
    for (double l : measure.nodes) {
        if (l < -1.0 || l > 1.0) throw InvalidParams("convex representation nodes must lie in [-1, 1]");
    }
    return {fn::QuadConvexUnit{f0, alpha, std::move(measure)}, kUnit, ClassClaim::OperatorConvex};
}

FunctionSpec build_monotone_from_measure(double f0, double fp0, DiscreteMeasure measure) {
    check_finite(f0, "f0");
    check_finite(fp0, "fp0");
    if (fp0 < 0.0) throw InvalidParams("fp0 must be >= 0");
    check_measure_shape(measure);
    for (double l : measure.nodes) {
        if (!(l > -1.0 && l < 1.0)) throw InvalidParams("monotone representation nodes must lie in (-1, 1)");
    }
    const double total = measure.total_weight();
    if (total > 0.0) {
        for (double& w : measure.weights) w /= total;
    } else if (fp0 > 0.0) {
        throw InvalidParams("a nonconstant monotone representation needs a nonzero measure");
    }
    return {fn::QuadMonotoneUnit{f0, fp0, std::move(measure)}, kUnit, ClassClaim::OperatorMonotone};
}

FunctionSpec build_monotone_halfline(double a, double b, DiscreteMeasure measure) {
    check_finite(a, "a");
    check_finite(b, "b");
    if (b < 0.0) throw InvalidParams("b must be >= 0");
    check_measure_shape(measure);
    for (double s : measure.nodes) {
        if (s > 0.0) throw InvalidParams("halfline representation nodes must be <= 0");
    }
    return {fn::QuadMonotoneHalfline{a, b, std::move(measure)}, Interval::positive_halfline(),
            ClassClaim::OperatorMonotone};
}

// ----------------------------------------------------------- Loewner tools

HermitianMatrix loewner_matrix(const FunctionSpec& f, std::span<const double> points,
                               std::optional<double> merge_eps) {
    const auto n = static_cast<Eigen::Index>(points.size());
    if (n == 0) throw InvalidParams("loewner_matrix needs at least one point");
    std::vector<double> values(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) values[i] = eval_scalar(f, points[i]);

    double eps;
    if (merge_eps) {
        eps = *merge_eps;
    } else if (f.domain().bounded()) {
        eps = 1e-7 * f.domain().length();
    } else {
        const auto [lo, hi] = std::minmax_element(points.begin(), points.end());
        eps = 1e-7 * std::max(1.0, *hi - *lo);
    }

    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double ti = points[static_cast<std::size_t>(i)];
            const double tj = points[static_cast<std::size_t>(j)];
            double v;
            if (std::abs(ti - tj) > eps) {
                v = (values[static_cast<std::size_t>(i)] - values[static_cast<std::size_t>(j)]) / (ti - tj);
            } else {
                v = eval_derivative(f, 0.5 * (ti + tj));
            }
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return HermitianMatrix(m);
}

CertifyVerdict certify_monotone(const FunctionSpec& f, const Interval& interval, int trials,
                                int points_per_trial, std::uint64_t seed) {
    if (trials < 1) throw InvalidParams("certify_monotone: trials must be >= 1");
    if (points_per_trial < 2) throw InvalidParams("certify_monotone: points_per_trial must be >= 2");
    if (!interval.bounded()) throw InvalidParams("certify_monotone: interval must be bounded");
    if (!f.domain().contains(interval)) {
        throw DomainViolation(f.id() + ": certification interval " + to_string(interval) +
                                  " leaves the domain " + to_string(f.domain()),
                              {interval.lo(), interval.hi()});
    }
    const double margin = std::max(interval.margin(), f.domain().margin());
    const double lo = interval.lo() + margin;
    const double hi = interval.hi() - margin;
    const double merge_eps = 1e-7 * interval.length();

    CertifyVerdict verdict;
    std::vector<double> pts(static_cast<std::size_t>(points_per_trial));
    for (int k = 0; k < trials; ++k) {
        Rng rng(derive_seed(seed, "certify", {static_cast<std::uint64_t>(k)}));
        for (double& t : pts) t = rng.uniform(lo, hi);
        const HermitianMatrix lm = loewner_matrix(f, pts, merge_eps);
        const double min_eig = spectrum_extrema(lm).min;
        const double psd_tol = 1e-9 * (1.0 + lm.matrix().cwiseAbs().maxCoeff());
        verdict.trials_run = k + 1;
        if (k == 0 || min_eig < verdict.worst_min_eig) verdict.worst_min_eig = min_eig;
        if (min_eig < -psd_tol) {
            verdict.accepted = false;
            verdict.witness = pts;
            verdict.witness_min_eig = min_eig;
            break;
        }
    }
    return verdict;
}

}  // namespace opilab
