#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "innerfn/common.hpp"
#include "innerfn/inner.hpp"
#include "innerfn/norms.hpp"
#include "innerfn/verify.hpp"
#include "innerfn/weights.hpp"
#include "innerfn/zeros.hpp"

namespace innerfn {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

/// Schema violation; path names the offending field, e.g. "parameters.p".
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path))
    {
    }
    [[nodiscard]] const std::string& path() const { return path_; }

private:
    std::string path_;
};

// ---------------------------------------------------------------------------
// Field access with paths

namespace cfg {

inline std::string join(const std::string& base, const std::string& key)
{
    return base.empty() ? key : base + "." + key;
}

inline const json& require(const json& j, const std::string& base, const std::string& key)
{
    if (!j.is_object()) throw ConfigError(base.empty() ? "<root>" : base, "expected an object");
    if (!j.contains(key)) throw ConfigError(join(base, key), "missing required field");
    return j.at(key);
}

inline double number(const json& v, const std::string& path)
{
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

inline double require_number(const json& j, const std::string& base, const std::string& key)
{
    return number(require(j, base, key), join(base, key));
}

inline double number_or(const json& j, const std::string& base, const std::string& key, double dflt)
{
    if (!j.is_object() || !j.contains(key)) return dflt;
    return number(j.at(key), join(base, key));
}

inline std::string string_or(const json& j, const std::string& base, const std::string& key, std::string dflt)
{
    if (!j.is_object() || !j.contains(key)) return dflt;
    const auto& v = j.at(key);
    if (!v.is_string()) throw ConfigError(join(base, key), "expected a string");
    return v.get<std::string>();
}

inline std::string require_string(const json& j, const std::string& base, const std::string& key)
{
    const auto& v = require(j, base, key);
    if (!v.is_string()) throw ConfigError(join(base, key), "expected a string");
    return v.get<std::string>();
}

/// A complex number: a plain number or [re, im].
inline cplx complex_value(const json& v, const std::string& path)
{
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ConfigError(path, "expected a number or [re, im]");
}

inline std::vector<double> number_list(const json& v, const std::string& path)
{
    if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline void in_range(double x, double lo, double hi, const std::string& path)
{
    if (!(x >= lo && x <= hi)) {
        throw ConfigError(path, "value " + RadialWeight::fmt_num(x) + " outside [" + RadialWeight::fmt_num(lo) +
                                    ", " + RadialWeight::fmt_num(hi) + "]");
    }
}

}  // namespace cfg

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// Inner functions and weights from JSON

struct ParsedFunction {
    InnerFunction f;
    json spec;  // canonical form with defaults filled in
};

inline ParsedFunction parse_function(const json& j, const std::string& path = "function")
{
    const std::string type = cfg::require_string(j, path, "type");
    if (type == "atomic") {
        const double mass = cfg::number_or(j, path, "mass", 2.0);
        if (!(mass > 0.0)) throw ConfigError(path + ".mass", "must be positive");
        return {InnerFunction::atomic(mass), json{{"type", "atomic"}, {"mass", mass}}};
    }
    if (type == "finite_blaschke") {
        const auto& zs = cfg::require(j, path, "zeros");
        if (!zs.is_array()) throw ConfigError(path + ".zeros", "expected an array");
        std::vector<cplx> zeros;
        json canon = json::array();
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const std::string p = path + ".zeros[" + std::to_string(i) + "]";
            const cplx z = cfg::complex_value(zs[i], p);
            if (!(std::abs(z) < 1.0)) throw ConfigError(p, "zero must lie in the open unit disc");
            zeros.push_back(z);
            canon.push_back(complex_json(z));
        }
        const double lambda = cfg::number_or(j, path, "lambda", 0.0);
        return {InnerFunction::finite_blaschke(zeros, lambda),
                json{{"type", "finite_blaschke"}, {"zeros", canon}, {"lambda", lambda}}};
    }
    if (type == "infinite_blaschke") {
        const std::string seq = cfg::require_string(j, path, "sequence");
        if (seq == "exponential") {
            return {InnerFunction::infinite_blaschke(ZeroSequence::exponential()),
                    json{{"type", "infinite_blaschke"}, {"sequence", seq}}};
        }
        if (seq == "polynomial_decay") {
            const double c = cfg::require_number(j, path, "c");
            if (!(c > 1.0)) throw ConfigError(path + ".c", "must exceed 1 for the Blaschke condition");
            return {InnerFunction::infinite_blaschke(ZeroSequence::polynomial_decay(c)),
                    json{{"type", "infinite_blaschke"}, {"sequence", seq}, {"c", c}}};
        }
        throw ConfigError(path + ".sequence", "unknown sequence '" + seq + "'");
    }
    if (type == "frostman") {
        auto base = parse_function(cfg::require(j, path, "base"), path + ".base");
        const cplx a = cfg::complex_value(cfg::require(j, path, "a"), path + ".a");
        if (!(std::abs(a) < 1.0)) throw ConfigError(path + ".a", "need |a| < 1");
        return {frostman_shift(base.f, a), json{{"type", "frostman"}, {"base", base.spec}, {"a", complex_json(a)}}};
    }
    throw ConfigError(path + ".type", "unknown function type '" + type + "'");
}

struct ParsedWeight {
    RadialWeight w;
    json spec;
};

inline ParsedWeight parse_weight(const json& j, const std::string& path = "weight")
{
    const std::string fam = cfg::require_string(j, path, "family");
    if (fam == "power") {
        const double a = cfg::number_or(j, path, "alpha", 0.0);
        if (!(a > -1.0)) throw ConfigError(path + ".alpha", "must exceed -1");
        return {RadialWeight::power(a), json{{"family", fam}, {"alpha", a}}};
    }
    if (fam == "power_log") {
        const double a = cfg::require_number(j, path, "alpha");
        const double b = cfg::require_number(j, path, "beta");
        if (!(a > -1.0)) throw ConfigError(path + ".alpha", "must exceed -1");
        return {RadialWeight::power_log(a, b), json{{"family", fam}, {"alpha", a}, {"beta", b}}};
    }
    if (fam == "exponential") return {RadialWeight::exponential(), json{{"family", fam}}};
    if (fam == "custom") {
        const std::string name = cfg::require_string(j, path, "name");
        try {
            return {custom_weight(name), json{{"family", fam}, {"name", name}}};
        } catch (const Error& e) {
            throw ConfigError(path + ".name", e.what());
        }
    }
    throw ConfigError(path + ".family", "unknown weight family '" + fam + "'");
}

/// Short weight notation used on the command line: "power:0.25",
/// "power_log:1,1", "exponential", "custom:log_bergman".
inline json weight_spec_from_string(const std::string& s)
{
    const auto colon = s.find(':');
    const std::string fam = s.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    auto num = [&](const std::string& t) {
        try {
            std::size_t used = 0;
            const double v = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("weight", "cannot parse '" + s + "'");
        }
    };
    if (fam == "power") return {{"family", fam}, {"alpha", rest.empty() ? 0.0 : num(rest)}};
    if (fam == "power_log") {
        const auto comma = rest.find(',');
        if (comma == std::string::npos) throw ConfigError("weight", "power_log needs 'power_log:alpha,beta'");
        return {{"family", fam}, {"alpha", num(rest.substr(0, comma))}, {"beta", num(rest.substr(comma + 1))}};
    }
    if (fam == "exponential") return {{"family", fam}};
    if (fam == "custom") return {{"family", fam}, {"name", rest}};
    throw ConfigError("weight", "unknown weight family '" + fam + "'");
}

// ---------------------------------------------------------------------------
// Report serialization

inline json slope_json(double s)
{
    if (std::isfinite(s)) return s;
    return nullptr;
}

inline json to_json(const ConvergenceVerdict& v)
{
    return json{{"verdict", to_string(v.verdict)},
                {"fitted_slope", slope_json(v.fitted_slope)},
                {"depths_used", json::array({v.depth_lo, v.depth_hi})},
                {"residual", v.residual},
                {"note", v.note}};
}

inline json to_json(const TruncatedValue& t)
{
    return json{{"depth", t.depth}, {"value", t.value}, {"blocks", t.blocks}};
}

inline json to_json(const RatioReport& r)
{
    json pairs = json::array();
    for (const auto& p : r.pairs) {
        pairs.push_back(json{{"m", p.m}, {"left", p.left}, {"right", p.right}, {"ratio", p.ratio}});
    }
    return json{{"pairs", pairs},
                {"ratio_min", r.ratio_min},
                {"ratio_max", r.ratio_max},
                {"window", json::array({r.window_lo, r.window_hi})},
                {"window_ok", r.window_ok}};
}

inline json to_json(const HypothesisStamp& h) { return json{{"status", to_string(h.status)}, {"detail", h.detail}}; }

inline json to_json(const DualVerdict& d)
{
    return json{{"hypotheses", to_json(d.hypotheses)},
                {"verdict_norm", to_json(d.verdict_norm)},
                {"verdict_sum", to_json(d.verdict_sum)},
                {"agree", d.agree},
                {"norm_side", to_json(d.norm_side)},
                {"sum_side", to_json(d.sum_side)}};
}

inline json to_json(const WeightClassReport& r)
{
    auto test = [](const ClassTest& t) {
        return json{{"status", to_string(t.status)}, {"constant", t.constant}, {"history", t.history}};
    };
    json pc = json::array();
    for (const auto& p : r.p_classes) {
        pc.push_back(json{{"p", p.p}, {"dhat_p", test(p.dhat_p)}, {"dcheck_p", test(p.dcheck_p)}});
    }
    return json{{"weight", r.weight},
                {"grid_depth", r.grid_depth},
                {"K", r.K},
                {"dhat", test(r.dhat)},
                {"dcheck", test(r.dcheck)},
                {"in_R", r.in_R()},
                {"alpha_hat", r.alpha_hat},
                {"beta_hat", r.beta_hat},
                {"fitted_exponent", r.fitted_exponent},
                {"p_classes", pc}};
}

/// Canonical parameter hash (FNV-1a over the compact dump).
inline std::string instance_hash(const json& instance)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : instance.dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Files

/// Write via a temporary file in the same directory, then rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::filesystem::create_directories(dir);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json read_json_file(const std::filesystem::path& path)
{
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON in ") + path.string() + ": " + e.what());
    }
}

/// Report text: two-space indentation, trailing newline.
inline std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Zero CSV: columns n,re,im with %.17g so values round-trip exactly

struct ZeroRow {
    long n = 0;
    cplx z;
};

inline std::string zeros_csv(const std::vector<ZeroRow>& rows)
{
    std::string out = "n,re,im\n";
    char buf[96];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", r.n, r.z.real(), r.z.imag());
        out += buf;
    }
    return out;
}

inline std::vector<ZeroRow> parse_zeros_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::vector<ZeroRow> rows;
    if (!std::getline(in, line)) throw Error("zeros CSV: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool indexed = line == "n,re,im";
    if (!indexed && line != "re,im") throw Error("zeros CSV: expected header 'n,re,im' or 're,im'");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ZeroRow r;
        double re = 0, im = 0;
        const bool ok = indexed ? std::sscanf(line.c_str(), "%ld,%lf,%lf", &r.n, &re, &im) == 3
                                : std::sscanf(line.c_str(), "%lf,%lf", &re, &im) == 2;
        if (!ok) throw Error("zeros CSV: malformed line " + std::to_string(lineno));
        if (!indexed) r.n = static_cast<long>(rows.size());
        r.z = {re, im};
        rows.push_back(r);
    }
    return rows;
}

inline json zeros_json(const std::vector<ZeroRow>& rows)
{
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(json{{"n", r.n}, {"re", r.z.real()}, {"im", r.z.imag()}});
    return arr;
}

/// {"0": count, "1": count, ...} plus the parameter when known.
inline json to_json(const DyadicProfile& p)
{
    json counts = json::object();
    for (std::size_t n = 0; n < p.counts.size(); ++n) counts[std::to_string(n)] = p.counts[n];
    json j{{"max_n", p.max_n}, {"counts", counts}};
    if (p.a) j["a"] = complex_json(*p.a);
    return j;
}

inline std::vector<cplx> points_of(const std::vector<ZeroRow>& rows)
{
    std::vector<cplx> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.z);
    return out;
}

/// Plot data: one row per block of each named series.
inline std::string blocks_csv(const std::vector<std::pair<std::string, TruncatedValue>>& series)
{
    std::string out = "series,k,block,partial\n";
    char buf[160];
    for (const auto& [name, t] : series) {
        double run = 0.0;
        for (std::size_t k = 0; k < t.blocks.size(); ++k) {
            run += t.blocks[k];
            std::snprintf(buf, sizeof buf, ",%zu,%.17g,%.17g\n", k, t.blocks[k], run);
            out += name;
            out += buf;
        }
    }
    return out;
}

}  // namespace innerfn
