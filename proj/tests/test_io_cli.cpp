#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fairalloc/cli.hpp"
#include "support.hpp"

using namespace fairalloc;
namespace fs = std::filesystem;

namespace {

const fs::path kSamples = FAIRALLOC_SAMPLES_DIR;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("fairalloc_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name, std::ios::binary) << text;
    return (path_ / name).string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fairalloc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return (kSamples / name).string(); }

}  // namespace

TEST(LoadInstance, RoundTrip) {
  const Instance inst = load_instance(slurp(sample("two_categories_three_agents.json")));
  EXPECT_EQ(inst.num_agents(), 3);
  EXPECT_EQ(inst.num_items(), 6);
  EXPECT_EQ(inst.num_categories(), 2);
  EXPECT_EQ(inst.category(0).items, (std::vector<int>{1, 4, 5}));
  const Instance again = instance_from_json(instance_to_json(inst));
  EXPECT_EQ(again.utilities(), inst.utilities());
  EXPECT_EQ(again.categories(), inst.categories());
}

TEST(LoadInstance, Errors) {
  EXPECT_THROW(load_instance("{"), ParseError);
  EXPECT_THROW(load_instance(R"({"utilities": [[1]], "categories": []})"), ParseError);
  EXPECT_THROW(load_instance(R"({"agents": 1, "utilities": [[1.5]], "categories": [{"items": [1], "capacity": 1}]})"),
               InstanceError);
  EXPECT_THROW(load_instance(R"({"agents": 1, "utilities": [[1]], "categories": [{"items": [2], "capacity": 1}]})"),
               InstanceError);
  EXPECT_THROW(load_instance(R"({"agents": 2, "utilities": [[1]], "categories": [{"items": [1], "capacity": 1}]})"),
               InstanceError);
  // two agents with capacity one cannot take three items
  EXPECT_THROW(load_instance(R"({"agents": 2, "utilities": [[1, 1, 1], [1, 1, 1]],
                                 "categories": [{"items": [1, 2, 3], "capacity": 1}]})"),
               InstanceError);
  EXPECT_THROW(load_instance(R"({"agents": 1, "utilities": [[1, 1]], "categories": [{"items": [1], "capacity": 1}]})"),
               InstanceError);
}

TEST(AllocationJson, DummiesAreListedSeparately) {
  const auto inst = normalize(Instance(2, {{4}, {7}}, {Category{{0}, 1}}));
  const Allocation a = Allocation::from_bundles(2, {{1}, {0}});
  const Json doc = allocation_to_json(inst, a);
  EXPECT_EQ(doc.at("assignment").dump(), R"({"1":2})");
  EXPECT_EQ(doc.at("dummies").dump(), R"({"2":1})");
  EXPECT_EQ(allocation_from_json(inst, doc), a);
  EXPECT_THROW(allocation_from_json(inst, Json::parse(R"({"assignment": {"2": 1}})")), ParseError);
  EXPECT_THROW(allocation_from_json(inst, Json::parse(R"({"assignment": {"1": 3}})")), ParseError);
  // a missing item stays unassigned and is rejected by the feasibility check
  EXPECT_THROW(is_feasible(inst, allocation_from_json(inst, Json::parse(R"({"assignment": {"1": 1}})"))),
               InstanceError);
}

TEST(BundleJson, RoundTripKeepsEveryField) {
  std::mt19937_64 rng(71);
  for (int it = 0; it < 15; ++it) {
    const auto inst = normalize(test_support::random_instance(rng));
    const auto b = find_witness(inst);
    const Json doc = bundle_to_json(inst, b);
    auto back = bundle_from_json(inst, Json::parse(doc.dump()));
    EXPECT_EQ(back.t_star, b.t_star);
    EXPECT_EQ(back.per_agent, b.per_agent);
    EXPECT_EQ(back.realloc, b.realloc);
    EXPECT_EQ(back.common, b.common);
    EXPECT_EQ(back.mode, b.mode);
    // certificates are recomputed, never read
    back.certificates = certify_bundle(inst, back);
    EXPECT_TRUE(back.certificates.all_pass());
    EXPECT_EQ(dump(bundle_to_json(inst, back)), dump(doc));
  }
}

TEST(BundleJson, ExplicitModeRoundTrip) {
  const auto inst = normalize(Instance(2, {{2, 1}, {2, 1}}, {Category{{0, 1}, 1}}));
  SearchOptions options;
  options.epsilon = EpsilonMode::explicit_;
  const auto b = find_witness(inst, options);
  const auto back = bundle_from_json(inst, Json::parse(dump(bundle_to_json(inst, b))));
  EXPECT_EQ(back.model.mode, EpsilonMode::explicit_);
  EXPECT_TRUE(certify_bundle(inst, back).all_pass());
}

TEST(BundleJson, RejectsBadDocuments) {
  const auto inst = normalize(Instance(2, {{2, 1}, {2, 1}}, {Category{{0, 1}, 1}}));
  Json doc = bundle_to_json(inst, find_witness(inst));
  Json wrong_format = doc;
  wrong_format["format"] = 99;
  EXPECT_THROW(bundle_from_json(inst, wrong_format), ParseError);
  Json short_t = doc;
  short_t["t_star"] = Json::array({"1/1"});
  EXPECT_THROW(bundle_from_json(inst, short_t), ParseError);
  Json off_simplex = doc;
  off_simplex["t_star"] = Json::array({"1/1", "1/1"});
  EXPECT_THROW(bundle_from_json(inst, off_simplex), ParseError);
  Json missing = doc;
  missing["allocations"].erase("2");
  EXPECT_THROW(bundle_from_json(inst, missing), ParseError);
}

TEST(Cli, SolveThenVerifyEverySample) {
  TempDir dir;
  for (const auto& entry : fs::directory_iterator(kSamples)) {
    const auto result = dir.file(entry.path().stem().string() + ".result.json");
    const auto solved = run_cli({"solve", "-i", entry.path().string(), "-o", result});
    EXPECT_EQ(solved.code, 0) << entry.path() << "\n" << solved.err;
    EXPECT_TRUE(solved.out.empty());
    const auto verified = run_cli({"verify", "-i", entry.path().string(), "-r", result});
    EXPECT_EQ(verified.code, 0) << entry.path() << "\n" << verified.err;
    EXPECT_TRUE(Json::parse(verified.out).at("pass").get<bool>());
    const auto oracle = run_cli({"oracle", "-i", entry.path().string(), "--check", result});
    EXPECT_EQ(oracle.code, 0) << entry.path() << "\n" << oracle.err;
  }
}

TEST(Cli, OutputIsByteStable) {
  const auto a = run_cli({"solve", "-i", sample("realloc_three_agents.json")});
  const auto b = run_cli({"solve", "-i", sample("realloc_three_agents.json"), "--threads", "3"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const Json doc = Json::parse(a.out);
  EXPECT_EQ(doc.at("format"), 1);
  EXPECT_EQ(doc.at("mode"), "arrangement");
  EXPECT_EQ(doc.at("heuristic"), false);
  EXPECT_TRUE(doc.at("certificates").at("all_pass").get<bool>());
}

TEST(Cli, ModesAndEpsilon) {
  const auto sweep = run_cli({"solve", "-i", sample("tie_two_agents.json"), "--mode", "sweep2"});
  EXPECT_EQ(sweep.code, 0);
  EXPECT_EQ(Json::parse(sweep.out).at("reallocation_set").dump(), "[1,2]");
  const auto grid = run_cli({"solve", "-i", sample("tie_two_agents.json"), "--mode", "grid", "--grid-depth", "2"});
  EXPECT_EQ(grid.code, 0);
  EXPECT_EQ(Json::parse(grid.out).at("heuristic"), true);
  const auto no_grid = run_cli({"solve", "-i", sample("tie_two_agents.json"), "--mode", "grid", "--grid-depth", "0"});
  EXPECT_EQ(no_grid.code, 1);
  const auto exp = run_cli({"solve", "-i", sample("tie_two_agents.json"), "--epsilon", "explicit", "--alpha", "1/1000"});
  EXPECT_EQ(exp.code, 0) << exp.err;
  EXPECT_EQ(Json::parse(exp.out).at("epsilon").at("mode"), "explicit");
}

TEST(Cli, TamperedResultFailsVerification) {
  TempDir dir;
  const auto result = dir.file("tie.json");
  ASSERT_EQ(run_cli({"solve", "-i", sample("tie_two_agents.json"), "-o", result}).code, 0);
  Json doc = Json::parse(slurp(result));
  std::swap(doc["allocations"]["1"], doc["allocations"]["2"]);
  const auto tampered = dir.write("tampered.json", doc.dump());
  const auto verified = run_cli({"verify", "-i", sample("tie_two_agents.json"), "-r", tampered});
  EXPECT_EQ(verified.code, 1);
  EXPECT_NE(verified.err.find("envy_free_for_owner"), std::string::npos);
  EXPECT_EQ(run_cli({"oracle", "-i", sample("tie_two_agents.json"), "--check", tampered}).code, 1);

  // a Pareto-dominated allocation gets a dominating witness
  const auto opposed_result = dir.file("opposed.json");
  ASSERT_EQ(run_cli({"solve", "-i", sample("opposed_two_agents.json"), "-o", opposed_result}).code, 0);
  Json bad = Json::parse(slurp(opposed_result));
  bad["allocations"]["1"]["assignment"] = {{"1", 2}, {"2", 1}};
  const auto dominated = dir.write("dominated.json", bad.dump());
  const auto report = run_cli({"verify", "-i", sample("opposed_two_agents.json"), "-r", dominated});
  EXPECT_EQ(report.code, 1);
  const Json checks = Json::parse(report.out).at("checks");
  bool has_witness = false;
  for (const auto& c : checks)
    if (c.at("check") == "pareto_optimal" && c.contains("witness")) has_witness = true;
  EXPECT_TRUE(has_witness);
}

TEST(Cli, UsageAndInputErrorsExitTwo) {
  TempDir dir;
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"solve"}).code, 2);
  EXPECT_EQ(run_cli({"solve", "-i", dir.file("missing.json")}).code, 2);
  EXPECT_EQ(run_cli({"solve", "-i", dir.write("bad.json", "{not json")}).code, 2);
  EXPECT_EQ(run_cli({"solve", "-i", dir.write("cap.json", R"({"agents": 2, "utilities": [[1, 1, 1], [1, 1, 1]],
      "categories": [{"items": [1, 2, 3], "capacity": 1}]})")}).code,
            2);
  EXPECT_EQ(run_cli({"solve", "-i", sample("tie_two_agents.json"), "--mode", "bogus"}).code, 2);
  EXPECT_EQ(run_cli({"solve", "-i", sample("tie_two_agents.json"), "--alpha", "1/1000"}).code, 2);
  EXPECT_EQ(run_cli({"solve", "-i", sample("mixed_three_agents.json"), "--mode", "sweep2"}).code, 2);
  EXPECT_EQ(run_cli({"verify", "-i", sample("tie_two_agents.json")}).code, 2);
  EXPECT_EQ(run_cli({"verify", "-i", sample("tie_two_agents.json"), "-r", dir.write("r.json", "[]")}).code, 2);
  EXPECT_EQ(run_cli({"solve", "--help"}).code, 0);
}

TEST(Cli, LimitsExitOne) {
  EXPECT_EQ(run_cli({"solve", "-i", sample("realloc_three_agents.json"), "--max-cycles", "1"}).code, 1);
  EXPECT_EQ(run_cli({"oracle", "-i", sample("realloc_three_agents.json"), "--enum-limit", "5"}).code, 1);
}

TEST(Cli, EnumerationLimitFromEnvironment) {
  ::setenv("FAIRALLOC_ENUM_LIMIT", "5", 1);
  const auto limited = run_cli({"oracle", "-i", sample("realloc_three_agents.json")});
  ::setenv("FAIRALLOC_ENUM_LIMIT", "many", 1);
  const auto invalid = run_cli({"oracle", "-i", sample("tie_two_agents.json")});
  ::unsetenv("FAIRALLOC_ENUM_LIMIT");
  EXPECT_EQ(limited.code, 1);
  EXPECT_EQ(invalid.code, 2);
  // the flag overrides the environment
  ::setenv("FAIRALLOC_ENUM_LIMIT", "5", 1);
  const auto overridden = run_cli({"oracle", "-i", sample("tie_two_agents.json"), "--enum-limit", "100"});
  ::unsetenv("FAIRALLOC_ENUM_LIMIT");
  EXPECT_EQ(overridden.code, 0);
}
