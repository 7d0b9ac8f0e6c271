#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hors/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = hors::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scheme(const std::string& name) { return std::string(HORS_SCHEME_DIR) + "/" + name; }

std::string golden(const std::string& name) {
  std::ifstream in(std::string(HORS_GOLDEN_DIR) + "/" + name, std::ios::binary);
  EXPECT_TRUE(in) << name;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_file(const std::string& name, const std::string& content = {}) {
  fs::path dir = fs::temp_directory_path() / "hors_cli_test";
  fs::create_directories(dir);
  fs::path p = dir / name;
  if (!content.empty()) std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST(Golden, Check) {
  auto r = run({"check", scheme("btree.hors")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("check_btree.txt"));
}

TEST(Golden, DeriveTrace) {
  auto r = run({"derive", scheme("diverge.hors"), "--policy", "oi", "--trace"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("derive_diverge_oi.txt"));
}

TEST(Golden, ValueTree) {
  auto r = run({"valuetree", scheme("btree.hors"), "--depth", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("valuetree_btree_oi_d4.txt"));
  EXPECT_NE(r.err.find("budget exhausted"), std::string::npos);
}

TEST(Golden, Analyze) {
  auto r = run({"analyze", scheme("mini.hors"), "--term", "F H"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("analyze_mini.txt"));
  auto s = run({"analyze", scheme("mini.hors"), "--term", "F H", "--format", "structured"});
  EXPECT_EQ(nlohmann::json::parse(s.out), nlohmann::json::parse(golden("analyze_mini.json")));
}

TEST(Golden, TransformToIO) {
  auto r = run({"transform", scheme("diverge.hors"), "--to", "io"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("transform_diverge_io.hors"));

  fs::path out = temp_file("bar.hors");
  ASSERT_EQ(run({"transform", scheme("diverge.hors"), "--to", "io", "-o", out.string()}).code, 0);
  auto d = run({"derive", out.string(), "--policy", "io", "--trace"});
  EXPECT_EQ(d.out, golden("derive_diverge_bar_io.txt"));
}

TEST(Golden, TransformToOI) {
  fs::path report = temp_file("mini.report");
  auto r = run({"transform", scheme("mini.hors"), "--to", "oi", "--report", report.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("transform_mini_oi.hors"));
  EXPECT_EQ(slurp(report), golden("transform_mini_oi.report"));

  // Without --report the sidecar sits next to --out.
  fs::path out = temp_file("mini_oi.hors");
  fs::remove(out.string() + ".report");
  ASSERT_EQ(run({"transform", scheme("mini.hors"), "--to", "oi", "-o", out.string()}).code, 0);
  EXPECT_EQ(slurp(out), golden("transform_mini_oi.hors"));
  EXPECT_EQ(slurp(out.string() + ".report"), golden("transform_mini_oi.report"));
}

TEST(Structured, EveryCommandCarriesTheFormatVersion) {
  std::vector<std::vector<std::string>> cmds = {
      {"check", scheme("diverge.hors")},
      {"derive", scheme("diverge.hors"), "--trace"},
      {"valuetree", scheme("diverge.hors")},
      {"analyze", scheme("diverge.hors")},
      {"transform", scheme("mini.hors"), "--to", "oi"},
  };
  for (auto cmd : cmds) {
    cmd.push_back("--format");
    cmd.push_back("structured");
    auto r = run(cmd);
    ASSERT_EQ(r.code, 0) << cmd[0] << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("format_version"), hors::cli::kFormatVersion);
    EXPECT_EQ(j.at("command"), cmd[0]);
  }
  auto v = nlohmann::json::parse(
      run({"valuetree", scheme("diverge.hors"), "--policy", "io", "--steps", "100", "--format",
           "structured"})
          .out);
  EXPECT_TRUE(v.at("exhausted_budget").get<bool>());
  EXPECT_TRUE(v.at("tree").at("label").is_null());
}

TEST(ExitCodes, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"transform", scheme("diverge.hors")}).code, 2);
  EXPECT_EQ(run({"transform", scheme("diverge.hors"), "--to", "xy"}).code, 2);
  EXPECT_EQ(run({"derive", scheme("diverge.hors"), "--policy", "lazy"}).code, 2);
  EXPECT_EQ(run({"valuetree", scheme("diverge.hors"), "--depth", "many"}).code, 2);
  EXPECT_EQ(run({"check", "--help"}).code, 0);
}

TEST(ExitCodes, DomainErrors) {
  auto missing = run({"check", "/nonexistent/file.hors"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(missing.err.rfind("error: ", 0), 0u);

  fs::path bad = temp_file("bad.hors", "terminal c : o\nnonterminal S : o\nrule S = d\n");
  auto parse = run({"check", bad.string()});
  EXPECT_EQ(parse.code, 1);
  EXPECT_NE(parse.err.find(":3:"), std::string::npos) << parse.err;

  fs::path invalid = temp_file("invalid.hors", "terminal c : o\nnonterminal S : o\nstart S\n");
  auto inv = run({"check", invalid.string()});
  EXPECT_EQ(inv.code, 1);
  EXPECT_NE(inv.err.find("missing rule"), std::string::npos) << inv.err;

  auto big = run({"analyze", scheme("btree.hors")});
  EXPECT_EQ(big.code, 1);
  EXPECT_NE(big.err.find("too many"), std::string::npos);

  auto term = run({"derive", scheme("diverge.hors"), "--term", "F c"});
  EXPECT_EQ(term.code, 1);
}

TEST(ExitCodes, BudgetExhaustionIsNotAnError) {
  auto r = run({"valuetree", scheme("diverge.hors"), "--policy", "io", "--steps", "1000"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "⊥\n");
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Binary, RunsAsAProcess) {
  const char* bin = std::getenv("HORS_BIN");
  if (!bin) GTEST_SKIP() << "HORS_BIN not set";
  fs::path out = temp_file("proc.txt");
  std::string cmd = std::string(bin) + " check " + scheme("diverge.hors") + " > " + out.string();
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(out), "ok: order 1, 3 nonterminals\n");
  std::string usage = std::string(bin) + " transform " + scheme("diverge.hors") + " 2>/dev/null";
  int status = std::system(usage.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
}
