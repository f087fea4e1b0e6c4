#include "photonstats/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "photonstats/errors.hpp"
#include "photonstats/estimators.hpp"
#include "photonstats/model_io.hpp"
#include "photonstats/photon_stats.hpp"
#include "photonstats/simulation.hpp"
#include "photonstats/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

namespace photonstats {

namespace {

using Json = nlohmann::ordered_json;

// Output contract: plain decimal, 15 significant digits.
double snap15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

// "3", "1,2,5", or "0..5"
std::vector<int> parse_k_list(const std::string& text) {
    auto range = text.find("..");
    std::vector<int> out;
    try {
        if (range != std::string::npos) {
            int lo = std::stoi(text.substr(0, range));
            int hi = std::stoi(text.substr(range + 2));
            if (hi < lo) throw ValidationError("--k range is empty: " + text);
            for (int k = lo; k <= hi; ++k) out.push_back(k);
            return out;
        }
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto comma = text.find(',', pos);
            std::string tok =
                text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            out.push_back(std::stoi(tok));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    } catch (const std::invalid_argument&) {
        throw ValidationError("cannot parse --k value: " + text);
    } catch (const std::out_of_range&) {
        throw ValidationError("--k value out of range: " + text);
    }
    if (out.empty()) throw ValidationError("--k list is empty");
    return out;
}

MultiIndex parse_multi_index(const std::string& text, int d) {
    auto parts = parse_k_list(text);
    if (text.find("..") != std::string::npos)
        throw ValidationError("a multi-index takes comma-separated entries, not a range");
    if (static_cast<int>(parts.size()) != d)
        throw ValidationError("multi-index has " + std::to_string(parts.size()) +
                              " entries for a " + std::to_string(d) + "-pixel model");
    return MultiIndex(parts.begin(), parts.end());
}

Json series_record(int label_order, const SeriesResult& r, bool joint, const std::string& klabel) {
    Json rec;
    if (joint)
        rec["k"] = klabel;
    else
        rec["k"] = label_order;
    rec["value"] = snap15(r.value);
    rec["truncation_order"] = r.truncation_order;
    rec["last_term_magnitude"] = snap15(r.last_term_magnitude);
    rec["accelerated"] = r.accelerated;
    rec["converged"] = r.converged;
    return rec;
}

std::string partition_label(const IntegerPartition& lambda) {
    std::string s;
    for (std::size_t i = 0; i < lambda.parts.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(lambda.parts[i]);
    }
    return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"photon counting statistics for Wishart-modeled intensities"};
    app.name("photonstats");
    app.require_subcommand(1);
    app.fallthrough(false);

    std::string model_path, k_text = "0", accel_text = "none", kind_text, out_path, column_spec;
    std::string zero_policy_text = "marginalize", policy_text = "standard", data_path;
    int order = 4, truncation = kDefaultTruncation, bound = kMaxJointOrder;
    int degree = 3, column = 1, dimension = 0, samples = 1000, workers = 1, korder = 1;
    double tol = kDefaultSeriesTol;
    std::uint64_t seed = 0, stream = 0, vseed = 2026;
    bool strict = false;
    std::vector<std::string> suites;

    auto* c_mom = app.add_subcommand("moments", "overall photocounter moments");
    c_mom->add_option("model", model_path, "model file")->required();
    c_mom->add_option("--order", order, "highest order (default 4)");

    auto* c_cum = app.add_subcommand("cumulants", "overall photocounter cumulants");
    c_cum->add_option("model", model_path, "model file")->required();
    c_cum->add_option("--order", order, "highest order (default 4)");

    auto* c_fac = app.add_subcommand("factorial", "overall factorial moments and cumulants");
    c_fac->add_option("model", model_path, "model file")->required();
    c_fac->add_option("--order", order, "highest order (default 4)");

    auto* c_pmf = app.add_subcommand("pmf", "counting distribution values");
    c_pmf->add_option("model", model_path, "model file")->required();
    c_pmf->add_option("--k", k_text, "count, list, or range (default 0)");
    c_pmf->add_option("--truncation", truncation, "series truncation (default 40)");
    c_pmf->add_option("--accel", accel_text, "none|euler")
        ->check(CLI::IsMember({"none", "euler"}));
    c_pmf->add_option("--tol", tol, "convergence tolerance (default 1e-10)");
    c_pmf->add_flag("--strict", strict, "exit 2 when a series fails to converge");

    auto* c_joint = app.add_subcommand("joint", "joint photocounter statistics");
    c_joint->add_option("model", model_path, "model file")->required();
    c_joint->add_option("--k", k_text, "multi-index, comma separated")->required();
    c_joint->add_option("--kind", kind_text,
                        "moment|cumulant|factorial-moment|factorial-cumulant|pmf")
        ->check(CLI::IsMember(
            {"moment", "cumulant", "factorial-moment", "factorial-cumulant", "pmf"}))
        ->default_str("moment");
    c_joint->add_option("--zero-policy", zero_policy_text, "marginalize|formal (moments)")
        ->check(CLI::IsMember({"marginalize", "formal"}));
    c_joint->add_option("--policy", policy_text, "standard|restricted (cumulants)")
        ->check(CLI::IsMember({"standard", "restricted"}));
    c_joint->add_option("--bound", bound, "joint order bound (default 6)");
    c_joint->add_option("--truncation", truncation, "series truncation for pmf");
    c_joint->add_option("--accel", accel_text, "none|euler")
        ->check(CLI::IsMember({"none", "euler"}));
    c_joint->add_option("--tol", tol, "convergence tolerance for pmf");
    c_joint->add_flag("--strict", strict, "exit 2 when the series fails to converge");

    auto* c_rand = app.add_subcommand("randomized", "statistics under a random wave count");
    c_rand->add_option("model", model_path, "model file (must carry count_model)")->required();
    c_rand->add_option("--kind", kind_text,
                       "moment|cumulant|factorial-moment|factorial-cumulant")
        ->check(CLI::IsMember({"moment", "cumulant", "factorial-moment", "factorial-cumulant"}))
        ->default_str("moment");
    c_rand->add_option("--k", korder, "order (default 1)");

    auto* c_est = app.add_subcommand("estimate", "estimators over sampled data");
    c_est->require_subcommand(1);
    auto* e_poly = c_est->add_subcommand("polykays", "unbiased cumulant-product estimators");
    e_poly->add_option("data", data_path, "CSV/whitespace sample file")->required();
    e_poly->add_option("--degree", degree, "highest degree (default 3)");
    e_poly->add_option("--column", column, "1-based data column (default 1)");
    auto* e_fac = c_est->add_subcommand("factorial", "factorial-moment estimators");
    e_fac->add_option("data", data_path, "CSV/whitespace sample file")->required();
    e_fac->add_option("--order", order, "highest order (default 4)");
    e_fac->add_option("--column", column, "1-based data column (default 1)");
    auto* e_cum = c_est->add_subcommand("cumulants", "k-statistics with jackknife errors");
    e_cum->add_option("data", data_path, "CSV/whitespace sample file")->required();
    e_cum->add_option("--order", order, "highest order (default 4)");
    e_cum->add_option("--column", column, "1-based data column (default 1)");
    auto* e_spec = c_est->add_subcommand("spectral", "spectral cumulant estimators");
    e_spec->add_option("data", data_path, "draws file: columns are trace powers T_1, T_2, ...")
        ->required();
    e_spec->add_option("--degree", degree, "highest degree (default 3)");
    e_spec->add_option("--dimension", dimension, "matrix dimension d")->required();

    auto* c_sim = app.add_subcommand("simulate", "draw intensity/count batches");
    c_sim->add_option("model", model_path, "model file")->required();
    c_sim->add_option("--samples", samples, "number of draws (default 1000)");
    c_sim->add_option("--seed", seed, "RNG seed (default 0)");
    c_sim->add_option("--stream", stream, "RNG stream index (default 0)");
    c_sim->add_option("--workers", workers, "parallel chunks (default 1)");
    c_sim->add_option("--kind", kind_text, "intensities|counts|randomized")
        ->check(CLI::IsMember({"intensities", "counts", "randomized"}))
        ->default_str("counts");
    c_sim->add_option("--out", out_path, "write CSV here instead of standard output");

    auto* c_ver = app.add_subcommand("verify", "closed-form arbitration report");
    c_ver->add_option("--suite", suites,
                      "all|conversions|wishart|photon|estimators|spectral|simulation");
    c_ver->add_option("--seed", vseed, "seed for the sampled checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* active = &app;
        while (!active->get_subcommands().empty()) active = active->get_subcommands().front();
        out << active->help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "run 'photonstats --help' for usage\n";
        return 64;
    }

    bool strict_violated = false;
    try {
        Json doc;

        if (c_mom->parsed() || c_cum->parsed() || c_fac->parsed()) {
            auto parsed = parse_model_file(model_path);
            if (order < 1) throw ValidationError("--order must be positive");
            doc["command"] = c_mom->parsed() ? "moments"
                             : c_cum->parsed() ? "cumulants"
                                               : "factorial";
            doc["model"] = model_digest(parsed.model);
            doc["order"] = order;
            if (c_mom->parsed()) {
                Json vals = Json::array();
                for (int k = 1; k <= order; ++k)
                    vals.push_back(snap15(overall_moment(parsed.model, k)));
                doc["values"] = std::move(vals);
            } else if (c_cum->parsed()) {
                Json vals = Json::array();
                for (int k = 1; k <= order; ++k)
                    vals.push_back(snap15(overall_cumulant(parsed.model, k)));
                doc["values"] = std::move(vals);
            } else {
                Json fm = Json::array(), fc = Json::array();
                for (int k = 1; k <= order; ++k) {
                    fm.push_back(snap15(overall_factorial_moment(parsed.model, k)));
                    fc.push_back(snap15(overall_factorial_cumulant(parsed.model, k)));
                }
                doc["factorial_moments"] = std::move(fm);
                doc["factorial_cumulants"] = std::move(fc);
            }
            out << doc.dump(2) << "\n";
        } else if (c_pmf->parsed()) {
            auto parsed = parse_model_file(model_path);
            auto accel = accel_text == "euler" ? SeriesAccel::euler : SeriesAccel::none;
            doc["command"] = "pmf";
            doc["model"] = model_digest(parsed.model);
            Json recs = Json::array();
            for (int k : parse_k_list(k_text)) {
                auto r = overall_pmf(parsed.model, k, truncation, accel, tol);
                if (!r.converged) strict_violated = true;
                recs.push_back(series_record(k, r, false, ""));
            }
            doc["records"] = std::move(recs);
            out << doc.dump(2) << "\n";
        } else if (c_joint->parsed()) {
            auto parsed = parse_model_file(model_path);
            const auto& m = parsed.model;
            MultiIndex k = parse_multi_index(k_text, m.d);
            std::string kind = kind_text.empty() ? "moment" : kind_text;
            doc["command"] = "joint";
            doc["model"] = model_digest(m);
            doc["kind"] = kind;
            doc["k"] = k_text;
            if (kind == "moment") {
                auto zp = zero_policy_text == "formal" ? ZeroPolicy::formal
                                                       : ZeroPolicy::marginalize;
                doc["zero_policy"] = zero_policy_text;
                doc["value"] = snap15(joint_moment(m, k, zp, bound));
            } else if (kind == "cumulant") {
                auto pol = policy_text == "restricted" ? JointCumulantPolicy::restricted
                                                       : JointCumulantPolicy::standard;
                doc["policy"] = policy_text;
                doc["value"] = snap15(joint_cumulant(m, k, pol, bound));
            } else if (kind == "factorial-moment") {
                doc["value"] = snap15(joint_factorial_moment(m, k, bound));
            } else if (kind == "factorial-cumulant") {
                doc["value"] = snap15(joint_factorial_cumulant(m, k, bound));
            } else {
                auto accel = accel_text == "euler" ? SeriesAccel::euler : SeriesAccel::none;
                auto r = joint_pmf_series(m, k, truncation, accel, tol, bound);
                if (!r.converged) strict_violated = true;
                doc["record"] = series_record(0, r, true, k_text);
            }
            out << doc.dump(2) << "\n";
        } else if (c_rand->parsed()) {
            auto parsed = parse_model_file(model_path);
            if (!parsed.count)
                throw ValidationError(
                    "randomized statistics need a count_model in the model file");
            std::string kind = kind_text.empty() ? "moment" : kind_text;
            RandomizedKind rk = RandomizedKind::moment;
            if (kind == "cumulant") rk = RandomizedKind::cumulant;
            if (kind == "factorial-moment") rk = RandomizedKind::factorial_moment;
            if (kind == "factorial-cumulant") rk = RandomizedKind::factorial_cumulant;
            doc["command"] = "randomized";
            doc["model"] = model_digest(parsed.model);
            doc["kind"] = kind;
            doc["k"] = korder;
            doc["value"] = snap15(randomized_stat(parsed.model, *parsed.count, rk, korder));
            out << doc.dump(2) << "\n";
        } else if (c_est->parsed()) {
            doc["command"] = "estimate";
            if (e_spec->parsed()) {
                std::ifstream in(data_path);
                if (!in) throw ValidationError("cannot open sample file: " + data_path);
                std::vector<std::vector<double>> rows;
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty() || line[0] == '#') continue;
                    std::vector<double> row;
                    std::istringstream ls(line);
                    std::string tok;
                    bool bad = false;
                    while (ls >> tok) {
                        if (!tok.empty() && tok.back() == ',') tok.pop_back();
                        try {
                            row.push_back(std::stod(tok));
                        } catch (...) {
                            bad = true;
                            break;
                        }
                    }
                    if (bad && rows.empty()) continue;  // header row
                    if (bad) throw ValidationError("bad numeric row in " + data_path);
                    if (!row.empty()) rows.push_back(std::move(row));
                }
                if (rows.empty()) throw ValidationError("sample input: no data rows");
                std::vector<SpectralSample> draws;
                draws.reserve(rows.size());
                for (const auto& row : rows) {
                    if (static_cast<int>(row.size()) < degree)
                        throw ValidationError("spectral rows need trace powers up to order " +
                                              std::to_string(degree));
                    draws.push_back(SpectralSample::from_trace_doubles(dimension, row));
                }
                doc["estimator"] = "spectral";
                doc["dimension"] = dimension;
                doc["draws"] = static_cast<int>(draws.size());
                Json vals = Json::array();
                for (int k = 1; k <= degree; ++k) {
                    for (const auto& lambda : enumerate_partitions(k)) {
                        double acc = 0;
                        for (const auto& s : draws) acc += spectral_polykay(s, lambda);
                        Json rec;
                        rec["partition"] = partition_label(lambda);
                        rec["value"] = snap15(acc / static_cast<double>(draws.size()));
                        vals.push_back(std::move(rec));
                    }
                }
                doc["values"] = std::move(vals);
            } else {
                auto xs = read_sample_file(data_path, column);
                doc["n"] = static_cast<int>(xs.size());
                doc["column"] = column;
                if (e_poly->parsed()) {
                    doc["estimator"] = "polykays";
                    auto sample = Sample::from_doubles(xs);
                    Json vals = Json::array();
                    for (int k = 1; k <= degree; ++k)
                        for (const auto& lambda : enumerate_partitions(k)) {
                            Json rec;
                            rec["partition"] = partition_label(lambda);
                            rec["value"] = snap15(polykay(sample, lambda));
                            vals.push_back(std::move(rec));
                        }
                    doc["values"] = std::move(vals);
                } else if (e_fac->parsed()) {
                    doc["estimator"] = "factorial";
                    auto sample = Sample::from_doubles(xs);
                    Json vals = Json::array();
                    for (int k = 1; k <= order; ++k)
                        vals.push_back(snap15(factorial_moment_ustat(sample, k)));
                    doc["values"] = std::move(vals);
                } else {
                    doc["estimator"] = "cumulants";
                    auto emp = empirical_cumulants(xs, order);
                    Json vals = Json::array(), errs = Json::array();
                    for (double v : emp.values) vals.push_back(snap15(v));
                    for (double v : emp.std_errors) errs.push_back(snap15(v));
                    doc["values"] = std::move(vals);
                    doc["std_errors"] = std::move(errs);
                }
            }
            out << doc.dump(2) << "\n";
        } else if (c_sim->parsed()) {
            auto parsed = parse_model_file(model_path);
            std::string kind = kind_text.empty() ? "counts" : kind_text;
            RngStream rng{seed, stream};
            SampleBatch batch;
            if (kind == "intensities")
                batch = sample_intensities(parsed.model, samples, rng, workers);
            else if (kind == "counts")
                batch = sample_counts(parsed.model, samples, rng, workers);
            else {
                if (!parsed.count)
                    throw ValidationError(
                        "randomized sampling needs a count_model in the model file");
                batch = sample_counts_randomized(parsed.model, *parsed.count, samples, rng,
                                                 workers);
            }
            if (out_path.empty()) {
                write_batch_csv(batch, out);
            } else {
                std::ofstream f(out_path);
                if (!f) throw ValidationError("cannot open output file: " + out_path);
                write_batch_csv(batch, f);
            }
        } else if (c_ver->parsed()) {
            auto rep = run_verification(suites, vseed);
            int passed = 0;
            for (const auto& c : rep.checks) {
                out << (c.pass ? "PASS" : "FAIL") << "  " << c.suite << "/" << c.name << "  ("
                    << c.detail << ")\n";
                passed += c.pass;
            }
            out << "\nclosed-form discrepancy ledger:\n";
            for (const auto& note : rep.notes) out << "  - " << note << "\n";
            out << "\nsummary: " << passed << "/" << rep.checks.size() << " checks passed\n";
            if (!rep.all_pass()) return 1;
        }
    } catch (const std::invalid_argument& e) {  // validation/bounds/coverage/dof/degenerate
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {  // numeric failures, io
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (strict && strict_violated) {
        err << "error: series did not converge at the requested truncation\n";
        return 2;
    }
    return 0;
}

}  // namespace photonstats
