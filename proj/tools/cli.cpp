#include "cli.hpp"

#include "opilab/bounds.hpp"
#include "opilab/errors.hpp"
#include "opilab/format.hpp"
#include "opilab/json_io.hpp"
#include "opilab/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace opilab::cli {

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("OPILAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidParams(std::string("OPILAB_SEED is not an unsigned integer: ") + env);
        }
    }
    return 1;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
    std::vector<std::string> theorems;
    std::vector<int> dims;
    int trials = 50;
    std::uint64_t seed = 0;
    std::string out = "opilab-report";
    std::string config;
    std::string function;
    double tol_scale = kDefaultTolScale;
    int threads = 1;
};

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) out.push_back(tok);
        }
    }
    return out;
}

int cmd_verify(const VerifyArgs& flags, const CLI::App& sub, std::ostream& out, std::ostream& err) {
    SuiteConfig cfg = SuiteConfig::defaults();
    cfg.master_seed = default_seed();
    std::string out_dir = flags.out;
    std::string function_src;

    if (!flags.config.empty()) {
        const nlohmann::json j = load_json(flags.config);
        if (!j.is_object()) throw ParseError("verify config must be a JSON object");
        try {
            if (j.contains("theorem")) {
                const auto& t = j.at("theorem");
                cfg.theorems = t.is_string() ? split_list({t.get<std::string>()}) : t.get<std::vector<std::string>>();
            }
            if (j.contains("dims")) cfg.dims = j.at("dims").get<std::vector<int>>();
            if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
            if (j.contains("seed")) cfg.master_seed = j.at("seed").get<std::uint64_t>();
            if (j.contains("out")) out_dir = j.at("out").get<std::string>();
            if (j.contains("tol-scale")) cfg.tol_scale = j.at("tol-scale").get<double>();
            if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
            if (j.contains("function")) {
                const auto& f = j.at("function");
                function_src = f.is_string() ? f.get<std::string>() : f.dump();
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("verify config: ") + e.what());
        }
    }
    if (sub.count("--theorem") > 0) cfg.theorems = split_list(flags.theorems);
    if (sub.count("--dims") > 0) cfg.dims = flags.dims;
    if (sub.count("--trials") > 0) cfg.trials = flags.trials;
    if (sub.count("--seed") > 0) cfg.master_seed = flags.seed;
    if (sub.count("--out") > 0) out_dir = flags.out;
    if (sub.count("--tol-scale") > 0) cfg.tol_scale = flags.tol_scale;
    if (sub.count("--threads") > 0) cfg.threads = flags.threads;
    if (sub.count("--function") > 0) function_src = flags.function;
    if (!function_src.empty()) cfg.function_override = function_from_json(load_json(function_src));

    // Validates theorems/dims/trials before any file is touched.
    const SuiteResult result = run_suite(cfg);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream jsonl(std::filesystem::path(out_dir) / "reports.jsonl", std::ios::binary);
    std::ofstream csv(std::filesystem::path(out_dir) / "summary.csv", std::ios::binary);
    if (!jsonl || !csv) throw InvalidParams("cannot write reports under '" + out_dir + "'");
    write_reports_jsonl(jsonl, result.reports);
    write_summary_csv(csv, result.summary);

    write_summary_csv(out, result.summary);
    const int violated = result.count(Verdict::Violated);
    const int errored = result.count(Verdict::Errored);
    out << "reports: " << result.reports.size() << ", violated: " << violated << ", errored: " << errored
        << " -> " << out_dir << '\n';
    for (const auto& r : result.reports) {
        if (r.verdict == Verdict::Violated || r.verdict == Verdict::Errored) {
            err << r.theorem_id << " dim=" << r.dim << " trial=" << r.trial << " " << r.function_id << ": "
                << to_string(r.verdict) << " margin=" << format_double(r.achieved_margin)
                << (r.error.empty() ? "" : " (" + r.error + ")") << '\n';
            break;
        }
    }
    return violated + errored == 0 ? kExitOk : kExitViolated;
}

// ------------------------------------------------------------------ bounds

struct BoundsArgs {
    std::string id;
    std::map<std::string, double> values;
    std::string function;
    std::string matrix_a;
    std::string matrix_b;
};

const std::vector<std::string> kBoundParams = {"r", "normA", "normB", "m", "mA", "MB", "lambda", "b", "p", "q"};

class Params {
public:
    Params(const BoundsArgs& a, const CLI::App& sub) {
        for (const auto& name : kBoundParams) {
            if (sub.count("--" + name) > 0) given_[name] = a.values.at(name);
        }
        if (!a.matrix_a.empty() || !a.matrix_b.empty()) derive_from_matrices(a);
    }

    double operator[](const std::string& name) const {
        const auto it = given_.find(name);
        if (it == given_.end()) throw InvalidParams("missing --" + name);
        return it->second;
    }

    nlohmann::ordered_json echo() const {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const auto& name : kBoundParams) {
            if (const auto it = given_.find(name); it != given_.end()) j[name] = it->second;
        }
        return j;
    }

private:
    // Fills spectral scalars from matrix literals unless given explicitly.
    void derive_from_matrices(const BoundsArgs& a) {
        if (a.matrix_a.empty() || a.matrix_b.empty()) throw InvalidParams("--A and --B must be given together");
        const HermitianMatrix am = matrix_from_json(load_json(a.matrix_a));
        const HermitianMatrix bm = matrix_from_json(load_json(a.matrix_b));
        given_.try_emplace("normA", operator_norm(am));
        given_.try_emplace("normB", operator_norm(bm));
        given_.try_emplace("mA", spectrum_extrema(am).min);
        given_.try_emplace("MB", spectrum_extrema(bm).max);
        given_.try_emplace("m", strict_gap(am, bm));
    }

    std::map<std::string, double> given_;
};

FurutaExponents exponents_of(const Params& p) { return {p["p"], p["q"], p["r"]}; }

int cmd_bounds(const BoundsArgs& args, const CLI::App& sub, std::ostream& out) {
    const Params p(args, sub);
    const auto function = [&] {
        if (args.function.empty()) throw InvalidParams("missing --function");
        return function_from_json(load_json(args.function));
    };

    nlohmann::ordered_json value;
    const std::string& id = args.id;
    if (id == "thmA") {
        value = theorem_a_bound(p["r"], p["normA"], p["m"]);
    } else if (id == "thmA_log") {
        value = theorem_a_log_bound(p["normA"], p["m"]);
    } else if (id == "thmB") {
        value = theorem_b_bound(function(), p["normB"], p["m"]);
    } else if (id == "thmC") {
        const PowerLogPair c = theorem_c_bounds(p["r"], p["normB"], p["m"]);
        value = {{"power", c.power}, {"log", c.log}};
    } else if (id == "lemma31") {
        const InverseBounds b = lemma31_bounds(p["normA"], p["normB"], p["m"]);
        value = {{"i", b.bound_i}, {"ii", b.bound_ii}};
    } else if (id == "key") {
        value = key_lemma_bound(p["lambda"], p["MB"], p["mA"], p["m"]);
    } else if (id == "finite") {
        value = finite_interval_monotone_bound(function(), p["MB"], p["mA"], p["m"]);
    } else if (id == "k") {
        value = furuta_k(p["b"], p["m"], p["p"], p["q"], p["r"]);
    } else if (id == "thm41") {
        const FurutaExponents e = exponents_of(p);
        require_exponents(e.thm41_violations(), e);
        value = theorem41_bound(p["normB"], p["m"], e, p["mA"]);
    } else if (id == "thm42") {
        value = theorem42_bound(p["m"], p["mA"], p["r"]);
    } else if (id == "cor43") {
        const FurutaExponents e = exponents_of(p);
        require_exponents(e.cor43_violations(), e);
        value = corollary43_bound(p["normA"], p["m"], p["mA"], e);
    } else {
        throw InvalidParams("unknown bound '" + id +
                            "' (expected thmA, thmA_log, thmB, thmC, lemma31, key, finite, k, thm41, thm42, cor43)");
    }

    nlohmann::ordered_json j;
    j["bound"] = id;
    j["params"] = p.echo();
    if (!args.function.empty()) j["function"] = function().id();
    j["value"] = value;
    out << j.dump() << '\n';
    return kExitOk;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string p = "1,2";
    std::string q = "1,2";
    std::string r = "0,1";
    int dim = 2;
    int pairs = 3;
    std::uint64_t seed = 0;
    std::string out;
    double tol_scale = kDefaultTolScale;
};

/// "lo:hi:step" or "a,b,c".
std::vector<double> parse_grid(const std::string& spec, const std::string& name) {
    std::vector<double> values;
    try {
        if (spec.find(':') != std::string::npos) {
            std::stringstream ss(spec);
            std::string lo_s, hi_s, step_s;
            std::getline(ss, lo_s, ':');
            std::getline(ss, hi_s, ':');
            std::getline(ss, step_s, ':');
            const double lo = std::stod(lo_s);
            const double hi = std::stod(hi_s);
            const double step = std::stod(step_s);
            if (!(step > 0.0)) throw InvalidParams("--" + name + ": step must be > 0");
            if (hi >= lo) {
                const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
                for (long i = 0; i <= n; ++i) values.push_back(lo + static_cast<double>(i) * step);
            }
        } else {
            for (const auto& tok : split_list({spec})) values.push_back(std::stod(tok));
        }
    } catch (const std::logic_error&) {
        throw InvalidParams("--" + name + ": expected lo:hi:step or a comma list, got '" + spec + "'");
    }
    return values;
}

int cmd_sweep(const SweepArgs& args, const CLI::App& sub, std::ostream& out) {
    const std::vector<double> ps = parse_grid(args.p, "p");
    const std::vector<double> qs = parse_grid(args.q, "q");
    const std::vector<double> rs = parse_grid(args.r, "r");
    if (ps.empty() || qs.empty() || rs.empty()) throw InvalidParams("sweep grid is empty");
    if (args.dim < 1 || args.dim > 64) throw InvalidParams("--dim must lie in [1, 64]");
    if (args.pairs < 1) throw InvalidParams("--pairs must be >= 1");
    const std::uint64_t seed = sub.count("--seed") > 0 ? args.seed : default_seed();

    const Interval range = Interval::open(0.1, 3.0);
    std::vector<MatrixPair> pairs;
    for (int k = 0; k < args.pairs; ++k) {
        Rng rng(derive_seed(seed, "sweep_gap", {static_cast<std::uint64_t>(k)}));
        PairSpec spec;
        spec.dim = args.dim;
        spec.interval = range;
        spec.min_gap = rng.uniform(0.02, 0.3) * range.length();
        spec.seed = derive_seed(seed, "sweep_pair",
                                {static_cast<std::uint64_t>(args.dim), static_cast<std::uint64_t>(k)});
        pairs.push_back(gen_ordered_pair(spec));
    }

    std::ostringstream csv;
    csv << "p,q,r,valid_fi,valid_41,valid_42,bound,worst_margin,verdict\n";
    bool failed = false;
    for (double p : ps) {
        for (double q : qs) {
            for (double r : rs) {
                const FurutaExponents e{p, q, r};
                const bool fi = e.fi_valid();
                const bool t41 = e.thm41_valid();
                const bool t42 = e.thm42_valid();
                csv << format_double(p) << ',' << format_double(q) << ',' << format_double(r) << ','
                    << (fi ? "true" : "false") << ',' << (t41 ? "true" : "false") << ','
                    << (t42 ? "true" : "false") << ',';

                std::optional<FurutaBound> which;
                if (t42) {
                    which = FurutaBound::Thm42;
                } else if (t41) {
                    which = FurutaBound::Thm41;
                } else if (e.cor43_valid()) {
                    which = FurutaBound::Cor43;
                } else if (fi) {
                    which = FurutaBound::Plain;
                }
                if (!which) {
                    csv << ",,invalid\n";
                    continue;
                }

                std::optional<BoundReport> worst;
                Verdict verdict = Verdict::Holds;
                for (const auto& pr : pairs) {
                    try {
                        BoundReport rep = check_furuta(pr.a, pr.b, e, *which, args.tol_scale);
                        if (!worst || rep.achieved_margin < worst->achieved_margin) worst = rep;
                        if (rep.verdict == Verdict::Violated) verdict = Verdict::Violated;
                        if (rep.verdict == Verdict::HoldsWithEquality && verdict == Verdict::Holds) {
                            verdict = Verdict::HoldsWithEquality;
                        }
                    } catch (const Error&) {
                        if (verdict != Verdict::Violated) verdict = Verdict::Errored;
                    }
                }
                if (verdict == Verdict::Violated || verdict == Verdict::Errored) failed = true;
                if (worst) {
                    csv << format_double(worst->bound) << ',' << format_double(worst->achieved_margin) << ',';
                } else {
                    csv << ",,";
                }
                csv << to_string(verdict) << '\n';
            }
        }
    }

    if (args.out.empty()) {
        out << csv.str();
    } else {
        std::ofstream f(args.out, std::ios::binary);
        if (!f) throw InvalidParams("cannot write '" + args.out + "'");
        f << csv.str();
        out << "sweep: " << ps.size() * qs.size() * rs.size() << " cells -> " << args.out << '\n';
    }
    return failed ? kExitViolated : kExitOk;
}

// ----------------------------------------------------------------- certify

struct CertifyArgs {
    std::string function;
    double lo = 0.0;
    double hi = 0.0;
    int trials = 100;
    int points = 4;
    std::uint64_t seed = 0;
};

int cmd_certify(const CertifyArgs& args, const CLI::App& sub, std::ostream& out) {
    const FunctionSpec f = function_from_json(load_json(args.function));
    const bool has_lo = sub.count("--lo") > 0;
    const bool has_hi = sub.count("--hi") > 0;
    if (has_lo != has_hi) throw InvalidParams("--lo and --hi must be given together");
    if (!has_lo && !f.domain().bounded()) {
        throw InvalidParams(f.id() + " has an unbounded domain; pass --lo and --hi");
    }
    const Interval iv = has_lo ? Interval::open(args.lo, args.hi) : f.domain();
    const std::uint64_t seed = sub.count("--seed") > 0 ? args.seed : default_seed();

    const CertifyVerdict v = certify_monotone(f, iv, args.trials, args.points, seed);
    nlohmann::ordered_json j;
    j["function"] = f.id();
    j["interval"] = {iv.lo(), iv.hi()};
    j["verdict"] = v.accepted ? "Accept" : "Reject";
    j["trials_run"] = v.trials_run;
    j["worst_min_eig"] = v.worst_min_eig;
    if (!v.accepted) {
        j["witness"] = v.witness;
        j["witness_loewner_matrix"] = matrix_to_json(loewner_matrix(f, v.witness, 1e-7 * iv.length()))["rows"];
        j["witness_min_eig"] = v.witness_min_eig;
    }
    out << j.dump() << '\n';
    return v.accepted ? kExitOk : kExitViolated;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"opilab: operator inequality laboratory"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run a randomized verification suite");
    verify->add_option("--theorem", va.theorems, "theorem ids, comma separated");
    verify->add_option("--dims", va.dims, "matrix dimensions")->delimiter(',');
    verify->add_option("--trials", va.trials, "trials per (theorem, dim) cell");
    verify->add_option("--seed", va.seed, "master seed (default: $OPILAB_SEED or 1)");
    verify->add_option("--out", va.out, "output directory for reports.jsonl and summary.csv");
    verify->add_option("--config", va.config, "JSON config mirroring the flag names");
    verify->add_option("--function", va.function, "FunctionSpec JSON file or literal");
    verify->add_option("--tol-scale", va.tol_scale, "tolerance scale (default 1e-9)");
    verify->add_option("--threads", va.threads, "worker threads");

    BoundsArgs ba;
    for (const auto& name : kBoundParams) ba.values[name] = 0.0;
    auto* bounds = app.add_subcommand("bounds", "evaluate a scalar bound");
    bounds->add_option("id", ba.id, "bound id")->required();
    for (const auto& name : kBoundParams) bounds->add_option("--" + name, ba.values[name]);
    bounds->add_option("--function", ba.function, "FunctionSpec JSON file or literal");
    bounds->add_option("--A", ba.matrix_a, "matrix literal for A (derives normA, mA, m)");
    bounds->add_option("--B", ba.matrix_b, "matrix literal for B (derives normB, MB, m)");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "sweep a Furuta exponent grid");
    sweep->add_option("--p", sa.p, "lo:hi:step or comma list");
    sweep->add_option("--q", sa.q, "lo:hi:step or comma list");
    sweep->add_option("--r", sa.r, "lo:hi:step or comma list");
    sweep->add_option("--dim", sa.dim, "matrix dimension");
    sweep->add_option("--pairs", sa.pairs, "seeded pairs checked per valid cell");
    sweep->add_option("--seed", sa.seed, "seed (default: $OPILAB_SEED or 1)");
    sweep->add_option("--out", sa.out, "CSV output file (default stdout)");
    sweep->add_option("--tol-scale", sa.tol_scale, "tolerance scale (default 1e-9)");

    CertifyArgs ca;
    auto* certify = app.add_subcommand("certify", "certify operator monotonicity by Loewner matrices");
    certify->add_option("--function", ca.function, "FunctionSpec JSON file or literal")->required();
    certify->add_option("--lo", ca.lo, "interval lower end");
    certify->add_option("--hi", ca.hi, "interval upper end");
    certify->add_option("--trials", ca.trials, "random point sets");
    certify->add_option("--points", ca.points, "points per set");
    certify->add_option("--seed", ca.seed, "seed (default: $OPILAB_SEED or 1)");

    std::vector<std::string> argv_store = {"opilab"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (verify->parsed()) return cmd_verify(va, *verify, out, err);
        if (bounds->parsed()) return cmd_bounds(ba, *bounds, out);
        if (sweep->parsed()) return cmd_sweep(sa, *sweep, out);
        if (certify->parsed()) return cmd_certify(ca, *certify, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace opilab::cli
