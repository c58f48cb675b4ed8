#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "biasaudit/audit.hpp"
#include "biasaudit/cli.hpp"
#include "biasaudit/io.hpp"
#include "biasaudit/weat.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using biasaudit::cli::runCli;
using Json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = runCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("biasaudit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const char* kEmbeddings =
    "8 3\n"
    "she 0.9 0.1 0.2\n"
    "woman 0.8 0.3 0.1\n"
    "he 0.1 0.9 0.2\n"
    "man 0.2 0.8 0.3\n"
    "nurse 0.7 0.2 0.5\n"
    "teacher 0.6 0.4 0.4\n"
    "pilot 0.2 0.7 0.6\n"
    "surgeon 0.3 0.6 0.5\n";

const char* kLists =
    "[group:female]\nshe\nwoman\n"
    "[group:male]\nhe\nman\n"
    "[pairs:gender]\nshe\nhe\nwoman\nman\n"
    "[targets:care]\nnurse\nteacher\n"
    "[targets:tech]\npilot\nsurgeon\n"
    "[targets:same]\nnurse\n"
    "[targets:ghost]\nghost\n";

}  // namespace

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"weat", "--embeddings", "x"}).code, 1);
  EXPECT_EQ(run({"audit", "--score", "nonsense", "--trials", "1"}).code, 1);
  EXPECT_EQ(run({"counterexample", "--kind", "other", "--out", path("o")}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, WeatExactPermutationMatchesEnumeration) {
  const auto e = write("e.txt", kEmbeddings), l = write("l.txt", kLists);
  const auto r = run({"weat", "--embeddings", e, "--wordlists", l, "--group-a", "female",
                      "--group-b", "male", "--targets-x", "care", "--targets-y", "tech",
                      "--permutations", "exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["permutation"]["evaluated"], 6);

  // Independent recomputation from the raw vectors.
  const auto space = biasaudit::io::loadEmbeddings(e);
  const testsupport::VecSet a{space.at("she"), space.at("woman")}, b{space.at("he"), space.at("man")};
  std::vector<double> s;
  for (const char* t : {"nurse", "teacher", "pilot", "surgeon"}) s.push_back(testsupport::naiveS(space.at(t), a, b));
  const auto oracle = testsupport::enumeratePermutations(s, 2);
  EXPECT_DOUBLE_EQ(j["permutation"]["p_value"].get<double>(), oracle.p());
  EXPECT_NEAR(j["effect_size"].get<double>(),
              testsupport::naiveEffectSize({s[0], s[1]}, {s[2], s[3]}), 1e-11);
  EXPECT_EQ(j["scores"].size(), 4u);
  EXPECT_EQ(j["scores"][2]["token"], "pilot");
}

TEST_F(CliTest, WeatIdenticalSingletonTargetsAreDegenerate) {
  const auto e = write("e.txt", kEmbeddings), l = write("l.txt", kLists);
  const auto r = run({"weat", "--embeddings", e, "--wordlists", l, "--group-a", "female",
                      "--group-b", "male", "--targets-x", "same", "--targets-y", "same"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("degenerate"), std::string::npos);
  EXPECT_TRUE(Json::parse(r.out)["effect_size"].is_null());
}

TEST_F(CliTest, DataErrors) {
  const auto e = write("e.txt", kEmbeddings), l = write("l.txt", kLists);
  const std::vector<std::string> base{"weat", "--embeddings", e, "--wordlists", l, "--group-a",
                                      "female", "--group-b", "male", "--targets-x"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };
  EXPECT_EQ(with({"ghost", "--targets-y", "same"}).code, 2);  // missing token
  EXPECT_EQ(with({"care", "--targets-y", "same"}).code, 2);   // unequal target sets
  EXPECT_EQ(with({"care", "--targets-y", "nope"}).code, 1);   // unknown section
  EXPECT_EQ(with({"care", "--targets-y", "tech", "--permutations", "many"}).code, 1);
  const auto bad = write("bad.txt", "2 3\nshe 1 0\n");
  const auto r = run({"attrdiff", "--embeddings", bad, "--wordlists", l, "--group-a", "female",
                      "--group-b", "male"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST_F(CliTest, ReportsAreByteIdentical) {
  const auto e = write("e.txt", kEmbeddings), l = write("l.txt", kLists);
  const std::vector<std::string> args{"weat", "--embeddings", e, "--wordlists", l, "--group-a",
                                      "female", "--group-b", "male", "--targets-x", "care",
                                      "--targets-y", "tech", "--permutations", "500", "--seed", "3"};
  const auto first = run(args);
  auto again = args;
  again.insert(again.end(), {"--workers", "1"});
  auto withWorkers = run(again);
  EXPECT_EQ(first.out, run(args).out);
  // Worker count changes the echoed arguments only.
  const Json a = Json::parse(first.out), b = Json::parse(withWorkers.out);
  EXPECT_EQ(a["permutation"], b["permutation"]);
}

TEST_F(CliTest, NumbersHaveTwelveSignificantDigits) {
  const auto e = write("e.txt", kEmbeddings), l = write("l.txt", kLists);
  const auto r = run({"attrdiff", "--embeddings", e, "--wordlists", l, "--group-a", "female",
                      "--group-b", "male"});
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  const auto space = biasaudit::io::loadEmbeddings(e);
  const double exact = biasaudit::attributeDifferenceNorm({space.at("she"), space.at("woman")},
                                                          {space.at("he"), space.at("man")});
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", exact);
  EXPECT_EQ(j["attribute_difference_norm"].get<double>(), std::strtod(buf, nullptr));
  EXPECT_EQ(j["inputs"]["embeddings"]["fnv1a64"].get<std::string>().size(), 16u);
}

TEST_F(CliTest, CorrelateCsv) {
  const auto e = write("e.txt", kEmbeddings), l = write("l.txt", kLists);
  const auto r = run({"correlate", "--embeddings", e, "--wordlists", l, "--pairs", "gender",
                      "--out", path("corr")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "direction,she-he,woman-man,PC1");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("she-he,1,", 0), 0u);
  EXPECT_TRUE(fs::exists(path("corr") + "/correlation.csv"));
  EXPECT_TRUE(fs::exists(path("corr") + "/correlate.json"));
}

TEST_F(CliTest, DirectBiasWarnsOnWeakPairCorrelation) {
  const auto e = write("e.txt", "4 3\na 1 0 0\nb -1 0 0\nc 0 1 0\nd 0 -1 0.01\n");
  const auto l = write("l.txt", "[pairs:p]\na\nb\nc\nd\n[targets:t]\na\n");
  const auto r = run({"directbias", "--embeddings", e, "--wordlists", l, "--pairs", "p",
                      "--neutral", "t", "--components", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["pair_direction_correlation"]["low"].get<bool>());
  EXPECT_EQ(j["warnings"].size(), 1u);
  EXPECT_EQ(j["explained_variance_ratios"].size(), 2u);
  const auto quiet = run({"directbias", "--embeddings", e, "--wordlists", l, "--pairs", "p",
                          "--neutral", "t", "--warn-threshold", "0"});
  EXPECT_TRUE(Json::parse(quiet.out)["warnings"].empty());
}

TEST_F(CliTest, DirectBiasCounterexampleReplays) {
  const auto out = path("ce");
  ASSERT_EQ(run({"counterexample", "--kind", "directbias", "--r", "2", "--out", out}).code, 0);
  const auto r = run({"directbias", "--embeddings", out + "/embeddings.txt", "--wordlists",
                      out + "/wordlists.txt", "--pairs", "defining", "--neutral", "neutral"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["words"][0]["direct_bias"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["explained_variance_ratios"][0].get<double>(), 0.8, 1e-12);
}

TEST_F(CliTest, CounterexampleFilesReproduceScores) {
  const auto out = path("wz");
  const auto r = run({"counterexample", "--kind", "weat-zero", "--dim", "7", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["witness"]["revalidated"].get<bool>());
  EXPECT_EQ(j["replay"][0], "weat");

  const auto ce = biasaudit::constructWeatZeroBias(7);
  const auto space = biasaudit::io::loadEmbeddings(out + "/embeddings.txt");
  const auto lists = biasaudit::io::loadWordlists(out + "/wordlists.txt");
  auto set = [&](biasaudit::io::SectionKind k, const char* n) {
    return biasaudit::io::resolve(space, lists.section(k, n));
  };
  using biasaudit::io::SectionKind;
  const auto inst = biasaudit::WeatInstance::make(
      biasaudit::TargetSet::make("X", set(SectionKind::Targets, "X")),
      biasaudit::TargetSet::make("Y", set(SectionKind::Targets, "Y")), set(SectionKind::Group, "A"),
      set(SectionKind::Group, "B"));
  const auto s1 = biasaudit::targetScores(inst), s0 = biasaudit::targetScores(ce.instance);
  for (std::size_t i = 0; i < s0.size(); ++i) EXPECT_NEAR(s1[i], s0[i], 1e-12);
  EXPECT_NEAR(biasaudit::effectSize(inst), biasaudit::effectSize(ce.instance), 1e-12);
}

TEST_F(CliTest, ExtremalCounterexampleReplaysToTwo) {
  const auto out = path("ex");
  ASSERT_EQ(run({"counterexample", "--kind", "weat-extremal", "--m", "4", "--dim", "6", "--seed",
                 "5", "--out", out}).code, 0);
  const auto r = run({"weat", "--embeddings", out + "/embeddings.txt", "--wordlists",
                      out + "/wordlists.txt", "--group-a", "A", "--group-b", "B", "--targets-x",
                      "X", "--targets-y", "Y"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["effect_size"].get<double>(), 2.0, 1e-11);
}

TEST_F(CliTest, AuditReport) {
  const auto r = run({"audit", "--score", "weat-d", "--dim", "4", "--trials", "6", "--out", path("a")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_FALSE(j["summary"]["unbiased_trustworthy_on_probe"].get<bool>());
  EXPECT_TRUE(j["summary"]["extrema_comparable_on_probe"].get<bool>());
  ASSERT_FALSE(j["trustworthiness"]["witnesses"].empty());
  EXPECT_TRUE(j["trustworthiness"]["witnesses"][0]["revalidated"].get<bool>());
  EXPECT_TRUE(fs::exists(path("a") + "/audit.json"));
  EXPECT_EQ(r.out, run({"audit", "--score", "weat-d", "--dim", "4", "--trials", "6", "--out", path("a")}).out);
}

TEST_F(CliTest, WeatOutWritesCsv) {
  const auto e = write("e.txt", kEmbeddings), l = write("l.txt", kLists);
  ASSERT_EQ(run({"weat", "--embeddings", e, "--wordlists", l, "--group-a", "female", "--group-b",
                 "male", "--targets-x", "care", "--targets-y", "tech", "--out", path("w")}).code, 0);
  std::ifstream csv(path("w") + "/scores.csv");
  std::string head;
  std::getline(csv, head);
  EXPECT_EQ(head, "set,index,token,s");
  std::size_t rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 4u);
}
