#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run(const std::string& args) {
  const std::string err_path = ::testing::TempDir() + "cli_stderr.txt";
  const std::string cmd = std::string(INVOLUTIONS_CLI) + " " + args + " 2>" + err_path;
  CliRun r{};
  FILE* pipe = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  while (size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(err_path);
  r.err.assign(std::istreambuf_iterator<char>(in), {});
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string f; std::getline(in, f, sep);) v.push_back(f);
  return v;
}

// Rebuild a command line from the metadata record alone.
std::string args_from_meta(const json& meta) {
  std::ostringstream a;
  a << "--seed " << meta["seed"].get<std::uint64_t>() << " " << meta["command"].get<std::string>();
  for (const auto& [key, value] : meta["params"].items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) a << " --" << key;
    } else if (value.is_array()) {
      a << " --" << key << " ";
      for (size_t i = 0; i < value.size(); ++i) a << (i ? "," : "") << value[i].dump();
    } else {
      a << " --" << key << " " << (value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  return a.str();
}

}  // namespace

TEST(Cli, GapProbabilityWithMetadata) {
  const CliRun r = run("gap --w 0 --s -1.0 --terms 8");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  ASSERT_EQ(ls[0].rfind("# ", 0), 0u);
  const json meta = json::parse(ls[0].substr(2));
  EXPECT_EQ(meta["command"], "gap");
  EXPECT_EQ(meta["params"]["terms"], 8);
  EXPECT_TRUE(meta.contains("version"));
  EXPECT_TRUE(meta["tolerances"].contains("series_tail"));
  const auto header = split(ls[1], ',');
  const auto row = split(ls[2], ',');
  ASSERT_EQ(header.size(), row.size());
  const double p = std::stod(row[2]);
  EXPECT_EQ(header[2], "probability");
  EXPECT_GE(p, 0.0);
  EXPECT_LE(p, 1.0);
  EXPECT_NEAR(p, 0.58379, 5e-5);
}

TEST(Cli, AiryKernelAtOrigin) {
  const CliRun r = run("kernel-airy --u 0 --x 0 --y 0");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[1], "X,Y,f11,f12,f21,f22");
  EXPECT_NEAR(std::stod(split(ls[2], ',')[5]), 0.185329, 5e-6);
}

TEST(Cli, SampleIdentityInvolutions) {
  const CliRun r = run("sample --n 0 --m 5 --samples 3");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  for (int i = 2; i < 5; ++i) {
    const auto row = split(ls[i], ',');
    EXPECT_EQ(row[4], "1 2 3 4 5");
    EXPECT_EQ(row[5], "5");
  }
}

TEST(Cli, JsonMirrorsCsv) {
  const CliRun csv = run("kernel-finite --M 2 --q 0.3 --alpha 0.4 --x 1 --y 0");
  const CliRun js = run("--format json kernel-finite --M 2 --q 0.3 --alpha 0.4 --x 1 --y 0");
  ASSERT_EQ(csv.status, 0) << csv.err;
  ASSERT_EQ(js.status, 0) << js.err;
  const json doc = json::parse(js.out);
  const auto ls = lines(csv.out);
  EXPECT_EQ(json::parse(ls[0].substr(2)), doc["meta"]);
  EXPECT_EQ(split(ls[1], ','), doc["columns"].get<std::vector<std::string>>());
  const auto row = split(ls[2], ',');
  for (size_t i = 2; i < row.size(); ++i) EXPECT_EQ(std::stod(row[i]), doc["rows"][0][i].get<double>());
}

TEST(Cli, MetadataReproducesOutput) {
  for (const std::string args : {"--seed 7 sample --n 6 --m 3 --samples 20",
                                 "sample --Q 30 --alpha 0.7 --samples 10 --kmax 2",
                                 "gap --w 0.5 --s 0,-1 --terms 6",
                                 "density --regime poisson --points 2,4 --Q 4 --alpha 0.5"}) {
    const CliRun first = run(args);
    ASSERT_EQ(first.status, 0) << args << ": " << first.err;
    const json meta = json::parse(lines(first.out)[0].substr(2));
    const CliRun again = run(args_from_meta(meta));
    ASSERT_EQ(again.status, 0) << args_from_meta(meta) << ": " << again.err;
    EXPECT_EQ(first.out, again.out) << args;
  }
}

TEST(Cli, CompareTinyRunIsReportOnly) {
  const CliRun r = run("--format json compare --n 50 --samples 100");
  ASSERT_EQ(r.status, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_TRUE(doc["meta"]["report_only"].get<bool>());
  ASSERT_EQ(doc["rows"].size(), 2u);
  for (const auto& row : doc["rows"]) EXPECT_EQ(row[4], "report-only");
  const double ks = doc["rows"][0][1];
  EXPECT_GT(ks, 0.0);
  EXPECT_LT(ks, 1.0);
}

TEST(Cli, ErrorsAreMachineReadable) {
  const CliRun bad_value = run("gap --w 0 --s 0,0");
  EXPECT_NE(bad_value.status, 0);
  EXPECT_TRUE(bad_value.out.empty());
  const json e = json::parse(bad_value.err);
  EXPECT_EQ(e["error"], "invalid-argument");
  EXPECT_EQ(e["command"], "gap");
  EXPECT_FALSE(e["message"].get<std::string>().empty());

  const CliRun unknown = run("no-such-command");
  EXPECT_NE(unknown.status, 0);
  EXPECT_EQ(json::parse(unknown.err)["error"], "config-parse");

  const CliRun missing = run("kernel-airy --u 0 --x 0");
  EXPECT_NE(missing.status, 0);
  EXPECT_EQ(json::parse(missing.err)["error"], "config-parse");

  const CliRun out_of_range = run("gap --w 0 --s 1 --terms 13");
  EXPECT_NE(out_of_range.status, 0);
  EXPECT_EQ(json::parse(out_of_range.err)["error"], "config-parse");
}
