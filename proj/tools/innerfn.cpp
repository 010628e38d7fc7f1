// innerfn: command-line front end for the inner-function toolkit.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "innerfn/innerfn.hpp"

using namespace innerfn;

namespace {

cplx parse_complex(const std::string& s, const std::string& what)
{
    double re = 0.0, im = 0.0;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%lf,%lf%c", &re, &im, &extra) == 2) return {re, im};
    if (std::sscanf(s.c_str(), "%lf%c", &re, &extra) == 1) return {re, 0.0};
    throw ConfigError(what, "cannot parse '" + s + "' as re or re,im");
}

// "atomic", "atomic:<mass>", "blaschke:<re>,<im>;<re>,<im>", "exponential",
// "polynomial:<c>"
json function_spec(const std::string& s, const std::string& frostman)
{
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    json spec;
    if (kind == "atomic") {
        spec = {{"type", "atomic"}, {"mass", rest.empty() ? 2.0 : parse_complex(rest, "function").real()}};
    } else if (kind == "blaschke") {
        json zs = json::array();
        std::size_t start = 0;
        while (start <= rest.size() && !rest.empty()) {
            const auto semi = rest.find(';', start);
            const std::string item = rest.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
            zs.push_back(complex_json(parse_complex(item, "function")));
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
        spec = {{"type", "finite_blaschke"}, {"zeros", zs}};
    } else if (kind == "exponential") {
        spec = {{"type", "infinite_blaschke"}, {"sequence", "exponential"}};
    } else if (kind == "polynomial") {
        spec = {{"type", "infinite_blaschke"},
                {"sequence", "polynomial_decay"},
                {"c", parse_complex(rest, "function").real()}};
    } else {
        throw ConfigError("function", "unknown function '" + s + "'");
    }
    if (!frostman.empty()) {
        spec = {{"type", "frostman"}, {"base", spec}, {"a", complex_json(parse_complex(frostman, "frostman"))}};
    }
    return spec;
}

void print_summary(const std::string& title, const SuiteOutcome& out)
{
    std::printf("%s\n", title.c_str());
    for (const auto& l : out.summary) std::printf("  %s\n", l.c_str());
    std::printf("status: %s\n", out.report.at("status").get<std::string>().c_str());
}

void write_outputs(const SuiteOutcome& out, const std::string& json_path, const std::string& csv_path)
{
    if (!json_path.empty()) write_file_atomic(json_path, dump_report(out.report));
    if (!csv_path.empty()) write_file_atomic(csv_path, blocks_csv(out.series));
}

struct CommonFlags {
    std::string function = "atomic";
    std::string frostman;
    std::string weight = "power:0";
    std::string out;
    std::string csv;
};

void add_function_flags(CLI::App* app, CommonFlags& f)
{
    app->add_option("--function", f.function,
                    "atomic[:mass] | blaschke:re,im;re,im | exponential | polynomial:c");
    app->add_option("--frostman", f.frostman, "wrap the function in a Frostman shift with this parameter");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Inner functions: evaluation, zeros, norms and verification suites"};
    app.require_subcommand(1);

    // eval
    CommonFlags ef;
    std::string z_str;
    int order = 0;
    double tol = 1e-12;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate an inner function or a derivative at a point");
    add_function_flags(eval_cmd, ef);
    eval_cmd->add_option("--z", z_str, "point re,im")->required();
    eval_cmd->add_option("--order", order, "0 value, 1 first derivative, 2 second derivative")
        ->check(CLI::Range(0, 2));
    eval_cmd->add_option("--tol", tol, "absolute error budget");

    // zeros
    auto* zeros_cmd = app.add_subcommand("zeros", "zeros of Frostman shifts");
    zeros_cmd->require_subcommand(1);
    std::string za_str;
    long zn = 100;
    double zmass = 2.0;
    std::string zout;
    auto* zat = zeros_cmd->add_subcommand("atomic-frostman", "exact zeros of S_a, n = -N..N in index order");
    zat->add_option("--a", za_str, "Frostman parameter re[,im]")->required();
    zat->add_option("--n", zn, "largest |n|")->check(CLI::Range(0L, 100000000L));
    zat->add_option("--mass", zmass, "point mass of the singular measure");
    zat->add_option("--out", zout, "CSV output (n,re,im)");
    CommonFlags znf;
    int zdepth = 10;
    auto* znum = zeros_cmd->add_subcommand("numeric", "argument-principle zeros of Theta_a up to r = 1 - 2^-depth");
    add_function_flags(znum, znf);
    znum->add_option("--a", za_str, "Frostman parameter re[,im]")->required();
    znum->add_option("--depth", zdepth)->check(CLI::Range(1, 20));
    znum->add_option("--out", zout, "CSV output (n,re,im), n is the rank by modulus");

    // norm
    CommonFlags nf;
    std::string kind = "mixed";
    double np = 2.0, nq = -1.0, nalpha = 0.0;
    int nm = 14;
    auto* norm_cmd = app.add_subcommand("norm", "truncated norms of Theta' (or Theta for besov)");
    add_function_flags(norm_cmd, nf);
    norm_cmd->add_option("--kind", kind, "mixed | hardy | besov")
        ->check(CLI::IsMember({"mixed", "hardy", "besov"}));
    norm_cmd->add_option("--p", np)->required();
    norm_cmd->add_option("--q", nq, "defaults to p");
    norm_cmd->add_option("--alpha", nalpha, "Besov smoothness");
    norm_cmd->add_option("--weight", nf.weight, "power:a | power_log:a,b | exponential | custom:name");
    norm_cmd->add_option("--m", nm, "radial truncation depth")->check(CLI::Range(1, 20));
    norm_cmd->add_option("--out", nf.out, "JSON output");
    norm_cmd->add_option("--csv", nf.csv, "CSV block output");

    // dyadic-sum
    CommonFlags df;
    std::string da_str = "0.36787944117144233";
    std::string dfrom;
    double dp = 1.0, dq = -1.0, ddelta = -1.0;
    int dmax = 20;
    auto* dsum_cmd = app.add_subcommand("dyadic-sum", "dyadic zero-count sums");
    add_function_flags(dsum_cmd, df);
    dsum_cmd->add_option("--a", da_str, "Frostman parameter re[,im] (single-point sum)");
    dsum_cmd->add_option("--delta", ddelta, "average over |a| < delta instead of a single point");
    std::optional<double> dcomplete;
    dsum_cmd->add_option("--zeros-csv", dfrom, "take the zeros from a CSV file written by 'zeros'");
    dsum_cmd->add_option("--complete-below", dcomplete,
                         "radius below which the CSV list is complete (printed by 'zeros'); required with --zeros-csv");
    dsum_cmd->add_option("--p", dp);
    dsum_cmd->add_option("--q", dq, "defaults to p");
    dsum_cmd->add_option("--weight", df.weight);
    dsum_cmd->add_option("--max-n", dmax)->check(CLI::Range(0, 40));
    dsum_cmd->add_option("--out", df.out, "JSON output");

    // weight-check
    std::string wspec = "power:0";
    int wdepth = 16;
    std::vector<double> wps;
    std::string wout;
    auto* wc_cmd = app.add_subcommand("weight-check", "doubling classes and exponents of a radial weight");
    wc_cmd->add_option("--weight", wspec)->required();
    wc_cmd->add_option("--depth", wdepth)->check(CLI::Range(8, 40));
    wc_cmd->add_option("--p", wps, "exponents p for the D-hat_p / D-check_p tests")->delimiter(',');
    wc_cmd->add_option("--out", wout, "JSON output");

    // verify
    CommonFlags vf;
    std::string suite, vconfig;
    std::optional<double> vp, vq, valpha, vdelta, vx, vC;
    std::optional<std::string> va;
    std::optional<int> vseed, vm_lo, vm_hi, vdepth;
    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    verify_cmd->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
    verify_cmd->add_option("--config", vconfig, "base config; flags override its keys");
    add_function_flags(verify_cmd, vf);
    verify_cmd->add_option("--weight", vf.weight, "radial weight (default power:0)");
    verify_cmd->add_option("--p", vp);
    verify_cmd->add_option("--q", vq);
    verify_cmd->add_option("--alpha", valpha, "weight exponent (1-r)^alpha; Besov smoothness for 'besov'");
    verify_cmd->add_option("--a", va, "Frostman parameter re[,im]");
    verify_cmd->add_option("--delta", vdelta);
    verify_cmd->add_option("--x", vx);
    verify_cmd->add_option("--C", vC);
    verify_cmd->add_option("--m-lo", vm_lo);
    verify_cmd->add_option("--m-hi", vm_hi);
    verify_cmd->add_option("--depth", vdepth, "radial truncation depth of norm-type quantities");
    verify_cmd->add_option("--seed", vseed);
    verify_cmd->add_option("--out", vf.out, "JSON report");
    verify_cmd->add_option("--csv", vf.csv, "CSV block data");

    // reproduce
    std::string rwhat, rout;
    Example7Options ro;
    auto* repro_cmd = app.add_subcommand("reproduce", "reproduce the atomic singular function thresholds");
    repro_cmd->add_option("what", rwhat)->required()->check(CLI::IsMember({"example7"}));
    repro_cmd->add_option("--zeros", ro.zeros_per_side, "zeros per side for the power sums");
    repro_cmd->add_option("--m", ro.norm_depth, "radial depth")->check(CLI::Range(6, 20));
    repro_cmd->add_option("--besov-depth", ro.besov_depth)->check(CLI::Range(6, 16));
    repro_cmd->add_option("--out", rout, "JSON report");

    // run
    std::string rconfig, run_out, run_csv;
    std::optional<int> run_seed;
    auto* run_cmd = app.add_subcommand("run", "run an experiment config");
    run_cmd->add_option("config", rconfig, "JSON config")->required();
    run_cmd->add_option("--out", run_out, "JSON report (overrides output.json)");
    run_cmd->add_option("--csv", run_csv, "CSV data (overrides output.csv)");
    run_cmd->add_option("--seed", run_seed, "overrides seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_pass : exit_usage;
    }

    try {
        if (*eval_cmd) {
            const auto fn = parse_function(function_spec(ef.function, ef.frostman));
            const cplx z = parse_complex(z_str, "z");
            const EvalResult r = order == 0   ? eval(fn.f, z, tol)
                                 : order == 1 ? eval_derivative(fn.f, z, tol)
                                              : eval_second_derivative(fn.f, z, tol);
            std::printf("value      %.17g %+.17gi\nerror      %.3e\nterms      %zu\n", r.value.real(),
                        r.value.imag(), r.error_bound, r.terms_used);
            return exit_pass;
        }
        if (*zat) {
            const cplx a = parse_complex(za_str, "a");
            std::vector<ZeroRow> rows;
            for (long n = -zn; n <= zn; ++n) rows.push_back({n, atomic_zero(a, n, zmass)});
            const std::string text = zeros_csv(rows);
            if (zout.empty()) {
                std::fputs(text.c_str(), stdout);
            } else {
                write_file_atomic(zout, text);
                const double complete = std::min(std::abs(atomic_zero(a, zn + 1, zmass)), std::abs(atomic_zero(a, -zn - 1, zmass)));
                std::printf("%zu zeros (complete below %.17g) written to %s\n", rows.size(), complete, zout.c_str());
            }
            return exit_pass;
        }
        if (*znum) {
            const auto fn = parse_function(function_spec(znf.function, znf.frostman));
            const cplx a = parse_complex(za_str, "a");
            const auto nz = zeros_of_shift(fn.f, a, dyadic_radius(zdepth));
            std::vector<ZeroRow> rows;
            for (std::size_t k = 0; k < nz.zeros.size(); ++k) rows.push_back({static_cast<long>(k), nz.zeros[k]});
            const std::string text = zeros_csv(rows);
            if (zout.empty()) {
                std::fputs(text.c_str(), stdout);
            } else {
                write_file_atomic(zout, text);
                std::printf("%zu zeros (complete below %.17g) written to %s\n", rows.size(), nz.complete_below,
                            zout.c_str());
            }
            return exit_pass;
        }
        if (*norm_cmd) {
            const auto fn = parse_function(function_spec(nf.function, nf.frostman));
            const auto wt = parse_weight(weight_spec_from_string(nf.weight));
            const double q = nq > 0 ? nq : np;
            TruncatedValue t;
            json extra = json::object();
            if (kind == "mixed") {
                t = mixed_norm_truncated(derivative_modulus(fn.f), {np, q, wt.w}, nm);
            } else if (kind == "hardy") {
                const auto h = hardy_norm_truncated(derivative_modulus(fn.f), np, nm);
                t = h.pth_power;
                extra = json{{"value", h.value}, {"means", h.means}};
            } else {
                t = besov_norm_truncated(analytic_value(fn.f), np, q, nalpha, nm);
            }
            const auto v = classify(t);
            json rep{{"schema_version", schema_version},
                     {"instance", json{{"kind", kind},
                                       {"function", fn.spec},
                                       {"weight", wt.spec},
                                       {"p", np},
                                       {"q", q},
                                       {"alpha", nalpha},
                                       {"m", nm}}},
                     {"truncated", to_json(t)},
                     {"verdict", to_json(v)},
                     {"extra", extra}};
            std::printf("truncated value  %.10g\n", t.value);
            std::printf("%s\n", detail::line(kind + " norm", v).c_str());
            if (!nf.out.empty()) write_file_atomic(nf.out, dump_report(rep));
            if (!nf.csv.empty()) write_file_atomic(nf.csv, blocks_csv({{kind, t}}));
            return v.verdict == Verdict::inconclusive ? exit_inconclusive : exit_pass;
        }
        if (*dsum_cmd) {
            const auto fn = parse_function(function_spec(df.function, df.frostman));
            const auto wt = parse_weight(weight_spec_from_string(df.weight));
            const double q = dq > 0 ? dq : dp;
            const MixedNormParams params{dp, q, wt.w};
            TruncatedValue t;
            json inst{{"function", fn.spec}, {"weight", wt.spec}, {"p", dp}, {"q", q}, {"max_n", dmax}};
            if (ddelta > 0) {
                const auto avgs = disc_average_profile(fn.f, ddelta, q / dp, dmax, 128);
                t = dyadic_sum_theorem1b(avgs, params, dmax);
                inst["delta"] = ddelta;
            } else {
                const cplx a = parse_complex(da_str, "a");
                DyadicProfile prof;
                if (!dfrom.empty()) {
                    const auto rows = parse_zeros_csv(read_file(dfrom));
                    if (!dcomplete) throw ConfigError("complete-below", "required with --zeros-csv");
                    prof = dyadic_counts(points_of(rows), dmax, *dcomplete, a);
                    inst["zeros_csv"] = dfrom;
                } else {
                    prof = shift_profile(fn.f, a, dmax);
                }
                t = single_point_sum(prof, params, dmax);
                inst["a"] = complex_json(a);
                inst["counts"] = prof.counts;
            }
            const auto v = classify(t);
            std::printf("truncated sum  %.10g\n%s\n", t.value, detail::line("dyadic sum", v).c_str());
            if (!df.out.empty()) {
                write_file_atomic(df.out, dump_report(json{{"schema_version", schema_version},
                                                           {"instance", inst},
                                                           {"truncated", to_json(t)},
                                                           {"verdict", to_json(v)}}));
            }
            return v.verdict == Verdict::inconclusive ? exit_inconclusive : exit_pass;
        }
        if (*wc_cmd) {
            const auto wt = parse_weight(weight_spec_from_string(wspec));
            const auto rep = classify_weight(wt.w, wps, wdepth);
            std::printf("weight        %s\nD-hat         %s\nD-check       %s\nR             %s\n", rep.weight.c_str(),
                        to_string(rep.dhat.status), to_string(rep.dcheck.status), rep.in_R() ? "yes" : "no");
            std::printf("alpha_hat     %.4f\nbeta_hat      %.4f\nexponent      %.4f\n", rep.alpha_hat, rep.beta_hat,
                        rep.fitted_exponent);
            for (const auto& pc : rep.p_classes) {
                std::printf("p = %-8g  D-hat_p %s, D-check_p %s\n", pc.p, to_string(pc.dhat_p.status),
                            to_string(pc.dcheck_p.status));
            }
            if (!wout.empty()) {
                write_file_atomic(wout, dump_report(json{{"schema_version", schema_version}, {"report", to_json(rep)}}));
            }
            const bool inconclusive =
                rep.dhat.status == Membership::inconclusive || rep.dcheck.status == Membership::inconclusive;
            return inconclusive ? exit_inconclusive : exit_pass;
        }
        if (*verify_cmd) {
            json config = vconfig.empty() ? json::object() : read_json_file(vconfig);
            config["schema_version"] = schema_version;
            config["suite"] = suite;
            if (!config.contains("function") || verify_cmd->count("--function") || verify_cmd->count("--frostman")) {
                config["function"] = function_spec(vf.function, vf.frostman);
            }
            if (!config.contains("weight") || verify_cmd->count("--weight")) {
                config["weight"] = weight_spec_from_string(vf.weight);
            }
            json& params = config["parameters"];
            if (params.is_null()) params = json::object();
            if (vp) params["p"] = *vp;
            if (vq) params["q"] = *vq;
            if (valpha) {
                if (suite == "besov") {
                    params["alpha"] = *valpha;
                } else {
                    config["weight"] = json{{"family", "power"}, {"alpha", *valpha}};
                }
            }
            if (va) params["a"] = complex_json(parse_complex(*va, "a"));
            if (vdelta) params["delta"] = *vdelta;
            if (vx) params["x"] = *vx;
            if (vC) params["C"] = *vC;
            if (vm_lo || vm_hi) {
                json r = params.contains("m_range") ? params["m_range"] : json::array({8, 14});
                if (vm_lo) r[0] = *vm_lo;
                if (vm_hi) r[1] = *vm_hi;
                params["m_range"] = r;
            }
            if (vdepth) params[suite == "besov" ? "besov_depth" : "norm_depth"] = *vdepth;
            if (vseed) config["seed"] = *vseed;
            const auto out = run_experiment(config);
            print_summary("suite " + suite, out);
            write_outputs(out, vf.out, vf.csv);
            return out.exit_code;
        }
        if (*repro_cmd) {
            const auto rep = reproduce_example7(ro);
            std::printf("zeros |n| <= 200: max |S(z_n) - a| = %.2e, closed-form gap error = %.2e\n", rep.max_residual,
                        rep.max_gap_error);
            std::printf("(1 - |z_n|) n^2 for 10 <= |n| <= 200 in [%.5f, %.5f]\n\n", rep.law_min, rep.law_max);
            std::printf("%-22s %-24s %-13s %-13s %8s\n", "quantity", "parameter", "expected", "verdict", "slope");
            for (const auto& r : rep.rows) {
                std::printf("%-22s %-24s %-13s %-13s %8.3f%s\n", r.quantity.c_str(), r.parameter.c_str(),
                            to_string(r.expected), to_string(r.got.verdict), r.got.fitted_slope,
                            r.misclassified() ? "  MISMATCH" : "");
            }
            if (!rout.empty()) write_file_atomic(rout, dump_report(rep.report));
            return rep.ok() ? exit_pass : exit_disagreement;
        }
        if (*run_cmd) {
            json config = read_json_file(rconfig);
            if (run_seed) config["seed"] = *run_seed;
            const auto out = run_experiment(config);
            std::string json_path = run_out, csv_path = run_csv;
            if (config.contains("output")) {
                const auto& o = config.at("output");
                if (json_path.empty()) json_path = cfg::string_or(o, "output", "json", "");
                if (csv_path.empty()) csv_path = cfg::string_or(o, "output", "csv", "");
            }
            print_summary("suite " + config.at("suite").get<std::string>(), out);
            write_outputs(out, json_path, csv_path);
            return out.exit_code;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_usage;
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "not resolved: %s\n", e.what());
        return exit_inconclusive;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    }
    return exit_usage;
}
