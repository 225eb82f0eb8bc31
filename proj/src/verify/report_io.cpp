#include "opilab/format.hpp"
#include "opilab/verify.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>

namespace opilab {

namespace {

// JSON has no NaN; errored trials carry a null margin instead.
nlohmann::ordered_json number_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

}  // namespace

void write_reports_jsonl(std::ostream& os, const std::vector<BoundReport>& reports) {
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["theorem_id"] = r.theorem_id;
        j["dim"] = r.dim;
        j["trial"] = r.trial;
        j["seed"] = r.seed;
        j["function"] = r.function_id.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.function_id);
        if (r.exponents) {
            j["exponents"] = {{"p", r.exponents->p}, {"q", r.exponents->q}, {"r", r.exponents->r}};
        } else {
            j["exponents"] = nullptr;
        }
        j["s"] = r.s ? nlohmann::ordered_json(*r.s) : nlohmann::ordered_json(nullptr);
        j["m"] = number_or_null(r.m);
        j["bound"] = number_or_null(r.bound);
        j["achieved_margin"] = number_or_null(r.achieved_margin);
        j["tolerance"] = number_or_null(r.tolerance);
        j["verdict"] = std::string(to_string(r.verdict));
        j["note"] = r.note;
        j["error"] = r.error;
        os << j.dump() << '\n';
    }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "theorem_id,dim,trials,holds,equality,violated,worst_margin\n";
    for (const auto& r : rows) {
        os << r.theorem_id << ',' << r.dim << ',' << r.trials << ',' << r.holds << ',' << r.equality << ','
           << r.violated << ',' << format_double(r.worst_margin) << '\n';
    }
}

}  // namespace opilab
