#include "opilab/json_io.hpp"

#include "opilab/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace opilab {

namespace {

double number_at(const nlohmann::json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        throw ParseError(std::string("expected numeric field '") + key + "'");
    }
    return obj.at(key).get<double>();
}

double endpoint(const nlohmann::json& v, double infinite) {
    if (v.is_null()) return infinite;
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return Interval::kInf;
        if (s == "-inf") return -Interval::kInf;
    }
    throw ParseError("domain endpoints must be numbers, null or \"inf\"/\"-inf\"");
}

nlohmann::json endpoint_json(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

ClassClaim claim_from_string(const std::string& s) {
    if (s == "OperatorMonotone") return ClassClaim::OperatorMonotone;
    if (s == "OperatorConvex") return ClassClaim::OperatorConvex;
    if (s == "Neither") return ClassClaim::Neither;
    throw ParseError("unknown class_claim '" + s + "'");
}

FunctionSpec kind_from_json(const std::string& kind, const nlohmann::json& params) {
    if (kind == "Affine") return FunctionSpec::affine(number_at(params, "c0"), number_at(params, "c1"));
    if (kind == "Power") return FunctionSpec::power(number_at(params, "r"));
    if (kind == "Log") return FunctionSpec::log();
    if (kind == "Inverse") return FunctionSpec::inverse();
    if (kind == "Square") return FunctionSpec::square();
    if (kind == "MobiusMonotone") return FunctionSpec::mobius_monotone(number_at(params, "lambda"));
    if (kind == "MobiusConvex") return FunctionSpec::mobius_convex(number_at(params, "lambda"));

    const auto measure = [&] {
        if (!params.contains("measure")) return DiscreteMeasure{};
        return measure_from_json(params.at("measure"));
    };
    if (kind == "QuadMonotoneUnit") {
        return build_monotone_from_measure(number_at(params, "f0"), number_at(params, "fp0"), measure());
    }
    if (kind == "QuadConvexUnit") {
        return build_convex_from_measure(number_at(params, "f0"), number_at(params, "alpha"), measure());
    }
    if (kind == "QuadMonotoneHalfline") {
        return build_monotone_halfline(number_at(params, "a"), number_at(params, "b"), measure());
    }
    throw ParseError("unknown function kind '" + kind + "'");
}

}  // namespace

HermitianMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.at("rows").is_array()) {
        throw ParseError("matrix literal must be an object with a \"rows\" array");
    }
    const auto& rows = j.at("rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    if (n == 0) throw ParseError("matrix literal has no rows");
    if (j.contains("dim") && (!j.at("dim").is_number_integer() || j.at("dim").get<Eigen::Index>() != n)) {
        throw ParseError("matrix literal: \"dim\" does not match the number of rows");
    }
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw ParseError("matrix literal: row " + std::to_string(i) + " has the wrong length");
        }
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto& v = row.at(static_cast<std::size_t>(k));
            if (!v.is_number()) throw ParseError("matrix literal: entries must be numbers");
            m(i, k) = v.get<double>();
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = i + 1; k < n; ++k) {
            if (std::abs(m(i, k) - m(k, i)) > kMatrixSymmetryTol) {
                std::ostringstream os;
                os << "matrix literal is not symmetric at (" << i << ", " << k << ")";
                throw ParseError(os.str());
            }
        }
    }
    return HermitianMatrix(m);
}

nlohmann::json matrix_to_json(const HermitianMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < m.dim(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return {{"dim", m.dim()}, {"rows", std::move(rows)}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j.contains("weights")) {
        throw ParseError("measure must be an object with \"nodes\" and \"weights\"");
    }
    try {
        return {j.at("nodes").get<std::vector<double>>(), j.at("weights").get<std::vector<double>>()};
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("measure: ") + e.what());
    }
}

nlohmann::json measure_to_json(const DiscreteMeasure& m) {
    return {{"nodes", m.nodes}, {"weights", m.weights}};
}

FunctionSpec function_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw ParseError("function spec must be an object with a string \"kind\"");
    }
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    if (!params.is_object()) throw ParseError("function spec: \"params\" must be an object");
    FunctionSpec f = kind_from_json(j.at("kind").get<std::string>(), params);

    if (j.contains("domain") && !j.at("domain").is_null()) {
        const auto& d = j.at("domain");
        if (!d.is_array() || d.size() != 2) throw ParseError("function spec: \"domain\" must be [lo, hi]");
        const double lo = endpoint(d.at(0), -Interval::kInf);
        const double hi = endpoint(d.at(1), Interval::kInf);
        const Interval& natural = f.domain();
        f = f.with_domain(Interval(lo, hi, natural.lo_closed() && lo == natural.lo(),
                                   natural.hi_closed() && hi == natural.hi()));
    }
    if (j.contains("class_claim")) {
        if (!j.at("class_claim").is_string()) throw ParseError("function spec: \"class_claim\" must be a string");
        f = f.with_claim(claim_from_string(j.at("class_claim").get<std::string>()));
    }
    return f;
}

nlohmann::json function_to_json(const FunctionSpec& f) {
    nlohmann::json params = nlohmann::json::object();
    std::visit(
        [&params](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, fn::Affine>) {
                params = {{"c0", k.c0}, {"c1", k.c1}};
            } else if constexpr (std::is_same_v<K, fn::Power>) {
                params = {{"r", k.r}};
            } else if constexpr (std::is_same_v<K, fn::MobiusMonotone> || std::is_same_v<K, fn::MobiusConvex>) {
                params = {{"lambda", k.lambda}};
            } else if constexpr (std::is_same_v<K, fn::QuadMonotoneUnit>) {
                params = {{"f0", k.f0}, {"fp0", k.fp0}, {"measure", measure_to_json(k.measure)}};
            } else if constexpr (std::is_same_v<K, fn::QuadConvexUnit>) {
                params = {{"f0", k.f0}, {"alpha", k.alpha}, {"measure", measure_to_json(k.measure)}};
            } else if constexpr (std::is_same_v<K, fn::QuadMonotoneHalfline>) {
                params = {{"a", k.a}, {"b", k.b}, {"measure", measure_to_json(k.measure)}};
            }
        },
        f.kind());
    return {{"kind", f.kind_name()},
            {"params", std::move(params)},
            {"domain", {endpoint_json(f.domain().lo()), endpoint_json(f.domain().hi())}},
            {"class_claim", std::string(to_string(f.class_claim()))}};
}

nlohmann::json load_json(const std::string& path_or_literal) {
    try {
        if (!path_or_literal.empty() && path_or_literal.front() == '{') {
            return nlohmann::json::parse(path_or_literal);
        }
        std::ifstream in(path_or_literal);
        if (!in) throw ParseError("cannot open '" + path_or_literal + "'");
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in '" + path_or_literal + "': " + e.what());
    }
}

}  // namespace opilab
