#include <filesystem>

#include <gtest/gtest.h>

#include "innerfn/experiment.hpp"
#include "innerfn/io.hpp"

using namespace innerfn;
namespace fs = std::filesystem;

namespace {

std::string config_error_path(const json& config)
{
    try {
        (void)run_experiment(config);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

fs::path scratch_dir()
{
    const auto d = fs::temp_directory_path() / ("innerfn_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST(Config, MissingParameterNamed)
{
    EXPECT_EQ(config_error_path(json::parse(R"({"suite": "theorem3", "parameters": {}})")), "parameters.p");
    EXPECT_EQ(config_error_path(json::parse(R"({"suite": "theorem3"})")), "parameters.p");
}

TEST(Config, SchemaViolationsNamed)
{
    EXPECT_EQ(config_error_path(json::parse(R"({"parameters": {"p": 1}})")), "suite");
    EXPECT_EQ(config_error_path(json::parse(R"({"suite": "nope"})")), "suite");
    EXPECT_EQ(config_error_path(json::parse(R"({"suite": "theorem3", "parameters": {"p": "x"}})")), "parameters.p");
    EXPECT_EQ(config_error_path(json::parse(R"({"suite": "theorem3", "parameters": {"p": 1, "bogus": 2}})")),
              "parameters.bogus");
    EXPECT_EQ(config_error_path(json::parse(R"({"suite": "theorem3", "parameters": {"p": 1, "C": 1.5}})")),
              "parameters.C");
    EXPECT_EQ(config_error_path(json::parse(R"({"suite": "theorem3", "function": {"type": "blob"}, "parameters": {"p": 1}})")),
              "function.type");
    EXPECT_EQ(config_error_path(json::parse(R"({"suite": "theorem3", "weight": {"family": "power_log", "alpha": 0}, "parameters": {"p": 1}})")),
              "weight.beta");
    EXPECT_EQ(config_error_path(json::parse(R"({"suite": "theorem3", "seed": -1, "parameters": {"p": 1}})")), "seed");
    EXPECT_EQ(config_error_path(json::parse(R"({"suite": "theorem3", "schema_version": 7, "parameters": {"p": 1}})")),
              "schema_version");
}

TEST(Config, FunctionSpecs)
{
    const auto b = parse_function(json::parse(R"({"type": "finite_blaschke", "zeros": [0.5, [0.1, -0.2]]})"));
    ASSERT_NE(b.f.as<FiniteBlaschke>(), nullptr);
    EXPECT_EQ(b.f.as<FiniteBlaschke>()->zeros.size(), 2u);
    const auto fr = parse_function(json::parse(R"({"type": "frostman", "base": {"type": "atomic"}, "a": 0.4})"));
    EXPECT_NE(fr.f.as<Frostman>(), nullptr);
    EXPECT_THROW(parse_function(json::parse(R"({"type": "finite_blaschke", "zeros": [1.5]})")), ConfigError);
    EXPECT_EQ(weight_spec_from_string("power:0.25")["alpha"].get<double>(), 0.25);
    EXPECT_EQ(weight_spec_from_string("custom:log_bergman")["name"].get<std::string>(), "log_bergman");
    EXPECT_EQ(weight_spec_from_string("power")["alpha"].get<double>(), 0.0);
    EXPECT_THROW(weight_spec_from_string("power:x"), ConfigError);
    EXPECT_THROW(weight_spec_from_string("power_log:1"), ConfigError);
}

TEST(Csv, ZeroRoundTripGivesIdenticalProfile)
{
    const cplx a(0.3, 0.2);
    const auto list = atomic_frostman_zeros(a, 500);
    std::vector<ZeroRow> rows;
    for (const auto& iz : list.zeros) rows.push_back({iz.n, iz.z});
    const auto back = parse_zeros_csv(zeros_csv(rows));
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].n, rows[i].n);
        EXPECT_EQ(back[i].z, rows[i].z);
    }
    const int max_n = complete_shells(list.complete_below);
    const auto p1 = dyadic_counts(list, max_n);
    const auto p2 = dyadic_counts(points_of(back), max_n, list.complete_below, a);
    EXPECT_EQ(p1, p2);
}

TEST(Csv, PlainHeaderAccepted)
{
    const auto rows = parse_zeros_csv("re,im\n0.5,0\n-0.25,0.125\n");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].z, cplx(-0.25, 0.125));
    EXPECT_THROW(parse_zeros_csv("x,y\n"), Error);
    EXPECT_THROW(parse_zeros_csv("n,re,im\n1,2\n"), Error);
}

TEST(Json, ProfileAndVerdicts)
{
    const auto j = to_json(dyadic_counts(std::vector<cplx>{0.0, 0.6, 0.8, 0.9}, 3));
    EXPECT_EQ(j["counts"]["2"].get<long>(), 1);
    EXPECT_EQ(j["max_n"].get<int>(), 3);

    const auto term = to_json(classify(std::vector<double>{1, 1, 1, 0, 0, 0}));
    EXPECT_TRUE(term["fitted_slope"].is_null());
    EXPECT_EQ(term["verdict"].get<std::string>(), "convergent");
}

TEST(Files, AtomicWriteReplacesContent)
{
    const auto dir = scratch_dir();
    const auto path = dir / "report.json";
    write_file_atomic(path, "first\n");
    write_file_atomic(path, "second\n");
    EXPECT_EQ(read_file(path), "second\n");
    EXPECT_FALSE(fs::exists(dir / "report.json.tmp"));
    fs::remove_all(dir);
}

TEST(Files, BadJsonNamesFile)
{
    const auto dir = scratch_dir();
    const auto path = dir / "bad.json";
    write_file_atomic(path, "{ not json");
    EXPECT_THROW(read_json_file(path), ConfigError);
    EXPECT_THROW(read_json_file(dir / "missing.json"), Error);
    fs::remove_all(dir);
}

TEST(Determinism, ByteIdenticalReports)
{
    const auto identities = json::parse(R"({"suite": "identities", "seed": 42, "parameters": {"samples": 2000}})");
    const auto a = dump_report(run_experiment(identities).report);
    const auto b = dump_report(run_experiment(identities).report);
    EXPECT_EQ(a, b);
    auto other = identities;
    other["seed"] = 43;
    EXPECT_NE(dump_report(run_experiment(other).report), a);

    const auto t3 = json::parse(R"({"suite": "theorem3",
        "function": {"type": "finite_blaschke", "zeros": [0.5]},
        "parameters": {"p": 2, "norm_depth": 10}})");
    EXPECT_EQ(dump_report(run_experiment(t3).report), dump_report(run_experiment(t3).report));
}

TEST(Determinism, ReportRecordsResolvedDefaults)
{
    const auto out = run_experiment(json::parse(R"({"suite": "identities", "parameters": {"samples": 100}})"));
    const auto& inst = out.report["instance"];
    EXPECT_EQ(inst["seed"].get<int>(), 1);
    EXPECT_EQ(inst["function"]["type"].get<std::string>(), "atomic");
    EXPECT_TRUE(inst["parameters"].contains("samples"));
    EXPECT_EQ(out.report["schema_version"].get<int>(), schema_version);
    EXPECT_EQ(out.report["instance_hash"].get<std::string>().size(), 16u);
    EXPECT_EQ(out.exit_code, exit_pass);
}
