#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "huakit/cli.hpp"
#include "oracles.hpp"

using namespace huakit;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

CliResult invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "huakit-tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

CampaignConfig small_config() {
    CampaignConfig c;
    c.inequalities = {InequalityId::ScalarHua, InequalityId::ModuleHua, InequalityId::OperatorHua};
    c.dims = {1, 2};
    c.trials = 40;
    c.seed = 3;
    return c;
}

}  // namespace

TEST(Campaign, VariantsCoverEveryInequality) {
    for (InequalityId id : kAllInequalities) {
        const auto vs = campaign_variants(id);
        EXPECT_FALSE(vs.empty()) << to_string(id);
        for (const auto& v : vs) EXPECT_EQ(v.id, id);
    }
    EXPECT_EQ(campaign_variants(InequalityId::WangHua).size(), 5u);
    // an override replaces the registry only where a function is a free parameter
    const auto op = campaign_variants(InequalityId::OperatorHua, catalog("cube"));
    ASSERT_EQ(op.size(), 1u);
    EXPECT_EQ(op[0].name, "cube");
    EXPECT_EQ(campaign_variants(InequalityId::ScalarHua, catalog("cube")).size(), 1u);
}

TEST(Campaign, RowCountsAddUp) {
    const auto s = run_campaign(small_config());
    EXPECT_FALSE(s.rows.empty());
    for (const auto& r : s.rows) {
        EXPECT_EQ(r.holds + r.fails, r.trials) << r.inequality << "/" << r.variant;
        EXPECT_LE(r.equalities, r.holds);
        EXPECT_LE(r.errors, r.fails);
        EXPECT_EQ(r.fails, 0u);
        EXPECT_GE(r.min_gap, r.threshold);
    }
    EXPECT_EQ(s.total_fails(), 0u);
}

TEST(Campaign, WorkerCountDoesNotChangeResults) {
    CampaignConfig c = small_config();
    const auto one = run_campaign(c);
    c.workers = 4;
    const auto four = run_campaign(c);
    ASSERT_EQ(one.rows.size(), four.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) EXPECT_EQ(one.rows[i], four.rows[i]);
    c.workers = 1;
    EXPECT_EQ(dump(to_json(one)), dump(to_json(run_campaign(c))));
}

TEST(Campaign, RejectsBadConfig) {
    CampaignConfig c = small_config();
    c.trials = 0;
    EXPECT_THROW(run_campaign(c), PreconditionError);
    c = small_config();
    c.dims = {0};
    EXPECT_THROW(run_campaign(c), PreconditionError);
}

TEST(Serialize, MatrixRoundTrip) {
    Stream rng(SeedSpec{1, "test/json", 0});
    const ComplexMatrix m = random_gaussian_matrix(3, 2, rng);
    EXPECT_EQ(complex_matrix_from_json(json::parse(to_json(m).dump())), m);
}

TEST(Serialize, SummaryRoundTrip) {
    const auto s = run_campaign(small_config());
    const json doc = json::parse(dump(to_json(s)));
    EXPECT_EQ(doc["schema"], "hua-kit/summary");
    EXPECT_EQ(doc["schema_version"], 1);
    EXPECT_FALSE(doc.contains("wall_seconds"));
    EXPECT_TRUE(to_json(s, true).contains("wall_seconds"));
    const CampaignConfig back = config_from_json(doc["config"]);
    EXPECT_EQ(back.dims, s.config.dims);
    EXPECT_EQ(back.seed, s.config.seed);
    ASSERT_EQ(doc["results"].size(), s.rows.size());
    for (std::size_t i = 0; i < s.rows.size(); ++i) EXPECT_EQ(campaign_row_from_json(doc["results"][i]), s.rows[i]);
}

TEST(Report, MergeSemantics) {
    CampaignConfig a = small_config();
    a.inequalities = {InequalityId::ScalarHua};
    CampaignConfig b = a;
    b.inequalities = {InequalityId::PecaricHua};
    const json ja = to_json(run_campaign(a)), jb = to_json(run_campaign(b));

    EXPECT_EQ(merge_summaries({ja}), ja);

    const json merged = merge_summaries({ja, jb, ja});
    EXPECT_EQ(merged["results"].size(), ja["results"].size() + jb["results"].size());
    EXPECT_EQ(merged["sources"].size(), 3u);
    for (const json& row : merged["results"]) EXPECT_FALSE(row.contains("flag"));

    CampaignConfig c = a;
    c.seed = 99;
    const json jc = to_json(run_campaign(c));
    const json conflicting = merge_summaries({ja, jc});
    EXPECT_EQ(conflicting["results"].size(), 2 * ja["results"].size());
    for (const json& row : conflicting["results"]) EXPECT_EQ(row["flag"], "conflict");

    json wrong = ja;
    wrong["schema_version"] = 2;
    EXPECT_THROW(merge_summaries({ja, wrong}), PreconditionError);
    json other = ja;
    other["schema"] = "something-else";
    EXPECT_THROW(merge_summaries({other}), PreconditionError);
}

TEST(Cli, VerifyScalarHuaPasses) {
    const auto r = invoke({"verify", "--ineq", "scalar-hua", "--trials", "1000", "--seed", "1", "--format", "json"});
    EXPECT_EQ(r.code, cli::kOk) << r.err;
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc["config"]["trials"], 1000);
    for (const json& row : doc["results"]) EXPECT_EQ(row["fails"], 0);
}

TEST(Cli, VerifyOperatorHuaWithCubeFails) {
    const auto r = invoke({"verify", "--ineq", "operator-hua", "--function", "cube", "--dims", "2", "--trials", "2000"});
    EXPECT_EQ(r.code, cli::kUnexpectedFails);
    EXPECT_NE(r.out.find("cube"), std::string::npos);
}

TEST(Cli, OutputFormats) {
    const auto csv = invoke({"verify", "--ineq", "scalar-hua", "--dims", "2", "--trials", "10", "--format", "csv"});
    EXPECT_EQ(csv.code, 0);
    EXPECT_EQ(csv.out.rfind("inequality,variant,dim,trials,holds,equalities,fails,errors,min_gap,", 0), 0u);
    const auto human = invoke({"verify", "--ineq", "scalar-hua", "--dims", "2", "--trials", "10"});
    EXPECT_NE(human.out.find("scalar-hua"), std::string::npos);

    const fs::path path = scratch("formats.json");
    const auto to_file = invoke({"verify", "--ineq", "scalar-hua", "--dims", "2", "--trials", "10", "--out", path.string()});
    EXPECT_EQ(to_file.code, 0);
    EXPECT_EQ(json::parse(slurp(path))["schema"], "hua-kit/summary");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({"verify", "--ineq", "bogus"}).code, cli::kUsage);
    EXPECT_EQ(invoke({"verify", "--trials", "0"}).code, cli::kUsage);
    EXPECT_EQ(invoke({"verify", "--function", "nope", "--ineq", "operator-hua"}).code, cli::kUsage);
    EXPECT_EQ(invoke({"falsify"}).code, cli::kUsage);
    EXPECT_EQ(invoke({"falsify", "--function", "cube", "--format", "csv"}).code, cli::kUsage);
    EXPECT_EQ(invoke({"report"}).code, cli::kUsage);
    EXPECT_EQ(invoke({}).code, cli::kUsage);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kUsage);
}

TEST(Cli, FalsifyExitCodes) {
    EXPECT_EQ(invoke({"falsify", "--function", "cube"}).code, cli::kOk);
    EXPECT_EQ(invoke({"falsify", "--function", "square", "--budget", "20000"}).code, cli::kBudgetExhausted);
}

TEST(Cli, FalsifyWriteAndReplay) {
    const fs::path path = scratch("cube-cx.json");
    const auto found = invoke({"falsify", "--function", "cube", "--seed", "4", "--out", path.string()});
    ASSERT_EQ(found.code, cli::kOk) << found.err;
    const json doc = json::parse(slurp(path));
    EXPECT_EQ(doc["schema"], "hua-kit/counterexample");
    EXPECT_EQ(doc["function"], "cube");
    EXPECT_GT(doc["violation"].get<double>(), 0.0);

    const auto replay = invoke({"falsify", "--replay", path.string()});
    EXPECT_EQ(replay.code, cli::kOk) << replay.out;
    EXPECT_EQ(replay.out.find("MISMATCH"), std::string::npos);

    json tampered = doc;
    tampered["gap"] = doc["gap"].get<double>() * 0.5;
    const fs::path bad = scratch("cube-cx-tampered.json");
    std::ofstream(bad) << tampered.dump();
    EXPECT_EQ(invoke({"falsify", "--replay", bad.string()}).code, cli::kUnexpectedFails);
}

TEST(Cli, ReportMergesFiles) {
    const fs::path a = scratch("a.json"), b = scratch("b.json"), m = scratch("merged.json");
    ASSERT_EQ(invoke({"verify", "--ineq", "scalar-hua", "--dims", "1", "--trials", "20", "--out", a.string()}).code, 0);
    ASSERT_EQ(invoke({"verify", "--ineq", "wang-hua", "--dims", "1", "--trials", "20", "--out", b.string()}).code, 0);
    ASSERT_EQ(invoke({"report", a.string(), b.string(), "--out", m.string()}).code, 0);
    const json merged = json::parse(slurp(m));
    EXPECT_EQ(merged["results"].size(), 6u);
    EXPECT_EQ(invoke({"report", scratch("does-not-exist.json").string()}).code, cli::kUsage);
}

TEST(Cli, SeedFromEnvironment) {
    ::setenv("HUA_KIT_SEED", "77", 1);
    const auto r = invoke({"verify", "--ineq", "scalar-hua", "--dims", "1", "--trials", "5", "--format", "json"});
    EXPECT_EQ(json::parse(r.out)["config"]["seed"], 77);
    const auto explicit_seed = invoke({"verify", "--ineq", "scalar-hua", "--dims", "1", "--trials", "5", "--seed", "8", "--format", "json"});
    EXPECT_EQ(json::parse(explicit_seed.out)["config"]["seed"], 8);
    ::setenv("HUA_KIT_SEED", "not-a-number", 1);
    EXPECT_EQ(invoke({"verify", "--ineq", "scalar-hua", "--trials", "5"}).code, cli::kUsage);
    ::unsetenv("HUA_KIT_SEED");
}
