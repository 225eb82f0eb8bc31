#include "opilab/errors.hpp"
#include "opilab/funcrep.hpp"
#include "opilab/json_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

using opilab::DiscreteMeasure;
using opilab::FunctionSpec;
using opilab::Interval;

double min_eig(const opilab::HermitianMatrix& m) { return opilab::spectrum_extrema(m).min; }

TEST(Interval, AdmitsRespectsClosednessAndMargin) {
    const Interval open = Interval::open(0.0, 1.0);
    EXPECT_FALSE(open.admits(0.0));
    EXPECT_FALSE(open.admits(1e-9));
    EXPECT_TRUE(open.admits(1e-7));
    const Interval closed(0.0, 1.0, true, false);
    EXPECT_TRUE(closed.admits(0.0));
    EXPECT_THROW(Interval(1.0, 1.0), opilab::InvalidParams);
}

TEST(EvalScalar, Examples) {
    EXPECT_DOUBLE_EQ(opilab::eval_scalar(FunctionSpec::mobius_monotone(0.5), 0.5), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(opilab::eval_scalar(FunctionSpec::mobius_convex(0.0), 0.3), 0.09);
    const auto id = opilab::build_monotone_from_measure(0.0, 1.0, {{0.0}, {1.0}});
    for (double t : {-0.9, -0.3, 0.0, 0.42, 0.99}) EXPECT_DOUBLE_EQ(opilab::eval_scalar(id, t), t);
}

TEST(EvalScalar, DomainViolation) {
    EXPECT_THROW(opilab::eval_scalar(FunctionSpec::log(), 0.0), opilab::DomainViolation);
    EXPECT_THROW(opilab::eval_scalar(FunctionSpec::mobius_monotone(0.5), 1.0), opilab::DomainViolation);
    EXPECT_THROW(opilab::eval_scalar(FunctionSpec::mobius_convex(0.5), -1.0), opilab::DomainViolation);
    EXPECT_NO_THROW(opilab::eval_scalar(FunctionSpec::power(0.5), 0.0));
}

TEST(EvalDerivative, Examples) {
    EXPECT_DOUBLE_EQ(opilab::eval_derivative(FunctionSpec::power(0.5), 4.0), 0.25);
    for (double lam : {-0.9, -0.2, 0.0, 0.7}) {
        EXPECT_DOUBLE_EQ(opilab::eval_derivative(FunctionSpec::mobius_monotone(lam), 0.0), 1.0);
    }
    EXPECT_DOUBLE_EQ(opilab::eval_derivative(FunctionSpec::square(), 3.0), 6.0);
}

TEST(EvalDerivative, MatchesCentralDifferences) {
    const auto gl = opilab::gauss_legendre_measure(4, -1.0, 1.0);
    const std::vector<FunctionSpec> fs = {
        FunctionSpec::power(0.5),
        FunctionSpec::power(-0.7),
        FunctionSpec::log(),
        FunctionSpec::inverse(),
        FunctionSpec::square(),
        FunctionSpec::affine(1.0, -2.0),
        FunctionSpec::mobius_monotone(-0.6),
        FunctionSpec::mobius_convex(0.8),
        FunctionSpec::mobius_convex(0.0),
        opilab::build_monotone_from_measure(0.2, 1.5, {{-0.5, 0.3, 0.9}, {0.2, 0.5, 0.3}}),
        opilab::build_convex_from_measure(0.1, -0.4, gl),
        opilab::build_monotone_halfline(0.5, 0.2, {{-1.0, -3.0, 0.0}, {0.5, 1.0, 0.1}}),
    };
    const double h = 1e-6;
    for (const auto& f : fs) {
        const Interval& d = f.domain();
        const double lo = d.bounded() ? d.lo() : 0.2;
        const double hi = d.bounded() ? d.hi() : 5.0;
        for (int i = 1; i < 20; ++i) {
            const double t = lo + (hi - lo) * i / 20.0;
            if (f.get_if<opilab::fn::Inverse>() && std::abs(t) < 0.1) continue;
            const double fd = (opilab::eval_scalar(f, t + h) - opilab::eval_scalar(f, t - h)) / (2 * h);
            const double an = opilab::eval_derivative(f, t);
            EXPECT_LE(std::abs(fd - an), 1e-6 * std::max(1.0, std::abs(an))) << f.id() << " t=" << t;
        }
    }
}

TEST(MobiusConvex, PartialFractionIdentity) {
    for (double lam : {-1.0, -0.5, -0.1, 0.3, 0.9, 1.0}) {
        const auto f = FunctionSpec::mobius_convex(lam);
        for (int i = 1; i < 40; ++i) {
            const double x = -1.0 + 2.0 * i / 40.0;
            const double v = opilab::eval_scalar(f, x);
            const double pf = -x / lam - 1.0 / (lam * lam) + 1.0 / (lam * lam * (1.0 - lam * x));
            EXPECT_LE(std::abs(v - pf), 1e-12 * (1 + std::abs(v))) << "lambda=" << lam << " x=" << x;
        }
    }
}

TEST(BuildConvex, Examples) {
    const auto sq = opilab::build_convex_from_measure(0.0, 0.0, {{0.0}, {1.0}});
    EXPECT_DOUBLE_EQ(opilab::eval_scalar(sq, 0.7), 0.7 * 0.7);
    EXPECT_EQ(sq.class_claim(), opilab::ClassClaim::OperatorConvex);
    EXPECT_FALSE(sq.is_linear());

    const auto aff = opilab::build_convex_from_measure(1.0, 2.0, {});
    EXPECT_TRUE(aff.is_linear());
    EXPECT_DOUBLE_EQ(opilab::eval_scalar(aff, 0.25), 1.5);

    const auto half = opilab::build_convex_from_measure(0.0, 0.0, {{0.5}, {1.0}});
    EXPECT_NEAR(opilab::eval_scalar(half, 0.4), 0.2, 1e-15);

    EXPECT_THROW(opilab::build_convex_from_measure(0, 0, {{1.5}, {1.0}}), opilab::InvalidParams);
    EXPECT_THROW(opilab::build_convex_from_measure(0, 0, {{0.5}, {-1.0}}), opilab::InvalidParams);
}

TEST(BuildMonotone, Examples) {
    const auto c = opilab::build_monotone_from_measure(0.7, 0.0, {{0.0}, {1.0}});
    EXPECT_TRUE(c.is_constant());
    EXPECT_DOUBLE_EQ(opilab::eval_scalar(c, 0.3), 0.7);

    const auto two = opilab::build_monotone_from_measure(0.0, 1.0, {{-0.5, 0.5}, {0.5, 0.5}});
    EXPECT_NEAR(opilab::eval_scalar(two, 0.5), 8.0 / 15.0, 1e-15);
    EXPECT_EQ(two.class_claim(), opilab::ClassClaim::OperatorMonotone);

    // Weights are normalized to total mass 1.
    const auto scaled = opilab::build_monotone_from_measure(0.0, 1.0, {{-0.5, 0.5}, {3.0, 3.0}});
    EXPECT_NEAR(opilab::eval_scalar(scaled, 0.5), 8.0 / 15.0, 1e-15);

    EXPECT_THROW(opilab::build_monotone_from_measure(0, 1, {{1.0}, {1.0}}), opilab::InvalidParams);
    EXPECT_THROW(opilab::build_monotone_from_measure(0, 1, {{-1.0}, {1.0}}), opilab::InvalidParams);
    EXPECT_THROW(opilab::build_monotone_from_measure(0, 1, {{0.0, 0.1}, {1.0, -0.1}}), opilab::InvalidParams);
    EXPECT_THROW(opilab::build_monotone_from_measure(0, -1, {{0.0}, {1.0}}), opilab::InvalidParams);
}

TEST(BuildHalfline, Examples) {
    const auto id = opilab::build_monotone_halfline(0.0, 1.0, {});
    EXPECT_DOUBLE_EQ(opilab::eval_scalar(id, 3.5), 3.5);
    EXPECT_EQ(id.domain().lo(), 0.0);
    EXPECT_FALSE(id.domain().lo_closed());

    const auto g = opilab::build_monotone_halfline(0.0, 0.0, {{-1.0}, {1.0}});
    EXPECT_NEAR(opilab::eval_scalar(g, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(opilab::eval_scalar(g, 3.0), 0.5, 1e-15);

    const auto inv = opilab::build_monotone_halfline(0.0, 0.0, {{0.0}, {1.0}});
    EXPECT_DOUBLE_EQ(opilab::eval_scalar(inv, 4.0), -0.25);
    EXPECT_LT(opilab::eval_scalar(inv, 1.0), opilab::eval_scalar(inv, 2.0));

    EXPECT_THROW(opilab::build_monotone_halfline(0, 0, {{0.5}, {1.0}}), opilab::InvalidParams);
    EXPECT_THROW(opilab::build_monotone_halfline(0, -1, {}), opilab::InvalidParams);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    const auto m = opilab::gauss_legendre_measure(5, -1.0, 1.0);
    double s0 = 0, s8 = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        s0 += m.weights[i];
        s8 += m.weights[i] * std::pow(m.nodes[i], 8);
    }
    EXPECT_NEAR(s0, 2.0, 1e-14);
    EXPECT_NEAR(s8, 2.0 / 9.0, 1e-14);
}

TEST(LoewnerMatrix, IdentityIsAllOnes) {
    const std::vector<double> pts = {1, 2, 3};
    const auto l = opilab::loewner_matrix(FunctionSpec::affine(0, 1), pts);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(l(i, j), 1.0);
    EXPECT_GE(min_eig(l), -1e-12);
}

TEST(LoewnerMatrix, SquareWitness) {
    const std::vector<double> pts = {1, 2};
    const auto l = opilab::loewner_matrix(FunctionSpec::square(), pts);
    EXPECT_DOUBLE_EQ(l(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(l(0, 1), 3.0);
    EXPECT_DOUBLE_EQ(l(1, 1), 4.0);
    // 2x2 closed form: trace/2 - sqrt((a-d)^2/4 + b^2)
    const double lam = 3.0 - std::sqrt(1.0 + 9.0);
    EXPECT_NEAR(min_eig(l), lam, 1e-14);
    EXPECT_NEAR(l(0, 0) * l(1, 1) - l(0, 1) * l(1, 0), -1.0, 1e-14);
}

TEST(LoewnerMatrix, SqrtIsPsd) {
    const std::vector<double> pts = {1, 4};
    const auto l = opilab::loewner_matrix(FunctionSpec::power(0.5), pts);
    EXPECT_DOUBLE_EQ(l(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(l(1, 1), 0.25);
    EXPECT_NEAR(l(0, 1), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(l(0, 0) * l(1, 1) - l(0, 1) * l(0, 1), 1.0 / 8 - 1.0 / 9, 1e-15);
    EXPECT_GT(min_eig(l), 0.0);
}

TEST(LoewnerMatrix, MergedPairsUseDerivative) {
    const std::vector<double> pts = {2.0, 2.0 + 1e-12, 5.0};
    const auto f = FunctionSpec::log();
    const auto l = opilab::loewner_matrix(f, pts, 1e-7);
    EXPECT_EQ(l(0, 1), l(1, 0));
    EXPECT_DOUBLE_EQ(l(0, 0), opilab::eval_derivative(f, 2.0));
    EXPECT_NEAR(l(0, 1), opilab::eval_derivative(f, 2.0), 1e-11);
}

TEST(Certify, Examples) {
    const Interval iv = Interval::open(0.1, 10.0);
    const auto ok = opilab::certify_monotone(FunctionSpec::power(0.5), iv, 100, 4, 1);
    EXPECT_TRUE(ok.accepted);
    EXPECT_EQ(ok.trials_run, 100);

    const auto bad = opilab::certify_monotone(FunctionSpec::square(), iv, 100, 4, 1);
    ASSERT_FALSE(bad.accepted);
    const auto l = opilab::loewner_matrix(FunctionSpec::square(), bad.witness);
    EXPECT_LT(min_eig(l), 0.0);

    EXPECT_TRUE(opilab::certify_monotone(FunctionSpec::affine(0, 1), Interval::open(-5, 5), 50, 5, 3).accepted);
}

TEST(Certify, DeterministicAndDomainChecked) {
    const Interval iv = Interval::open(0.1, 10.0);
    const auto a = opilab::certify_monotone(FunctionSpec::power(2.0), iv, 100, 3, 17);
    const auto b = opilab::certify_monotone(FunctionSpec::power(2.0), iv, 100, 3, 17);
    EXPECT_EQ(a.witness, b.witness);
    EXPECT_EQ(a.trials_run, b.trials_run);
    EXPECT_THROW(opilab::certify_monotone(FunctionSpec::log(), Interval::open(-1, 1), 10, 3, 1),
                 opilab::DomainViolation);
    EXPECT_THROW(opilab::certify_monotone(FunctionSpec::log(), Interval::positive_halfline(), 10, 3, 1),
                 opilab::InvalidParams);
}

TEST(Certify, BuiltMonotoneFunctionsAccepted) {
    const auto gl = opilab::gauss_legendre_measure(6, -0.95, 0.95, [](double x) { return 1.0 + x * x; });
    const auto f = opilab::build_monotone_from_measure(0.3, 2.0, gl);
    EXPECT_TRUE(opilab::certify_monotone(f, f.domain(), 200, 5, 8).accepted);
    const auto h = opilab::build_monotone_halfline(0.0, 0.5, {{-0.5, -2.0}, {1.0, 0.3}});
    EXPECT_TRUE(opilab::certify_monotone(h, Interval::open(0.05, 20.0), 200, 5, 8).accepted);
}

TEST(FunctionJson, RoundTrip) {
    const auto gl = opilab::gauss_legendre_measure(3, -0.9, 0.9);
    const std::vector<FunctionSpec> fs = {
        FunctionSpec::power(0.25),
        FunctionSpec::log().with_domain(Interval::open(0.1, 50)),
        FunctionSpec::mobius_monotone(-0.4),
        opilab::build_monotone_from_measure(0.1, 2.0, gl),
        opilab::build_convex_from_measure(0.0, 1.0, gl),
        opilab::build_monotone_halfline(0.5, 0.0, {{-1.0}, {0.5}}),
        FunctionSpec::square().with_claim(opilab::ClassClaim::OperatorMonotone),
    };
    for (const auto& f : fs) {
        const auto back = opilab::function_from_json(opilab::function_to_json(f));
        EXPECT_EQ(back.id(), f.id());
        EXPECT_EQ(back.domain().lo(), f.domain().lo());
        EXPECT_EQ(back.domain().hi(), f.domain().hi());
        EXPECT_EQ(back.domain().lo_closed(), f.domain().lo_closed());
        EXPECT_EQ(back.class_claim(), f.class_claim());
        const double t = f.domain().bounded() ? 0.5 * (f.domain().lo() + f.domain().hi()) : 2.0;
        EXPECT_DOUBLE_EQ(opilab::eval_scalar(back, t), opilab::eval_scalar(f, t));
    }
}

TEST(FunctionJson, Malformed) {
    EXPECT_THROW(opilab::function_from_json(nlohmann::json::parse(R"({"kind": "Nope"})")), opilab::ParseError);
    EXPECT_THROW(opilab::function_from_json(nlohmann::json::parse(R"({"kind": "Power"})")), opilab::ParseError);
    EXPECT_THROW(opilab::function_from_json(nlohmann::json::parse(R"([1, 2])")), opilab::ParseError);
    EXPECT_THROW(opilab::function_from_json(
                     nlohmann::json::parse(R"({"kind": "MobiusMonotone", "params": {"lambda": 1.0}})")),
                 opilab::InvalidParams);
}

TEST(FunctionSpec, ClassClaims) {
    EXPECT_EQ(FunctionSpec::power(0.5).class_claim(), opilab::ClassClaim::OperatorMonotone);
    EXPECT_EQ(FunctionSpec::power(1.0).class_claim(), opilab::ClassClaim::OperatorMonotone);
    EXPECT_NE(FunctionSpec::power(1.5).class_claim(), opilab::ClassClaim::OperatorMonotone);
    EXPECT_NE(FunctionSpec::power(-0.5).class_claim(), opilab::ClassClaim::OperatorMonotone);
    EXPECT_THROW(FunctionSpec::mobius_monotone(-1.0), opilab::InvalidParams);
    EXPECT_NO_THROW(FunctionSpec::mobius_convex(-1.0));
    EXPECT_THROW(FunctionSpec::mobius_convex(1.1), opilab::InvalidParams);
}

}  // namespace
