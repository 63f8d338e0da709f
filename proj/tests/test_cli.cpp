#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "eplt/cli.hpp"

namespace fs = std::filesystem;
using eplt::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "eplt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = eplt::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_config(const std::string& name, const Json& j) {
  const fs::path p = fs::temp_directory_path() / ("eplt_cli_" + name + ".json");
  std::ofstream(p) << j.dump();
  return p.string();
}

std::string drop_header(const std::string& s) { return s.substr(s.find('\n') + 1); }

}  // namespace

TEST(Cli, ThermalTableIsReproducible) {
  const auto a = invoke({"thermal", "--seed", "4"});
  const auto b = invoke({"thermal", "--seed", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out.rfind("# eplt thermal generated ", 0), 0u);
  EXPECT_NE(a.out.find("# table: thermal"), std::string::npos);
  EXPECT_EQ(drop_header(a.out), drop_header(b.out));
}

TEST(Cli, EpltVerifyPassesAndIsReproducible) {
  const auto cfg = write_config("verify", {{"d", 2},
                                           {"kT", 0.7},
                                           {"energies", {0.0, 1.0}},
                                           {"isotropic_steps", 3},
                                           {"random_states", 2},
                                           {"fef_restarts", 2}});
  const auto a = invoke({"eplt-verify", "--config", cfg, "--seed", "9"});
  const auto b = invoke({"eplt-verify", "--config", cfg, "--seed", "9"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(drop_header(a.out), drop_header(b.out));
  EXPECT_NE(a.out.find("# passed: true"), std::string::npos);
}

TEST(Cli, JsonFormatParses) {
  const auto r = invoke({"twirl-sample", "--format", "json", "--seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["command"], "twirl-sample");
  EXPECT_EQ(j["tables"]["twirl_sample"].size(), 10u);
}

TEST(Cli, OutFileMatchesStdout) {
  const fs::path p = fs::temp_directory_path() / "eplt_cli_out.csv";
  ASSERT_EQ(invoke({"dilation", "--out", p.string(), "--seed", "3"}).code, 0);
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(drop_header(buf.str()), drop_header(invoke({"dilation", "--seed", "3"}).out));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"no-such-command"}).code, 2);
  EXPECT_EQ(invoke({"thermal", "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({"thermal", "--config", "/nonexistent/cfg.json"}).code, 2);

  const auto over = write_config("over", {{"d", 2}, {"kT", 1.0}, {"epsilon", 0.99}});
  const auto r = invoke({"eplt-verify", "--config", over});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("limit"), std::string::npos);

  const auto family = write_config("family", {{"family", "unknown"}});
  EXPECT_EQ(invoke({"eplt-verify", "--config", family}).code, 2);

  const auto broken = fs::temp_directory_path() / "eplt_cli_broken.json";
  std::ofstream(broken) << "{ not json";
  EXPECT_EQ(invoke({"race", "--config", broken.string()}).code, 2);

  // a failing certification exits with 1
  const auto strict = write_config("strict", {{"tolerance", 0.0}, {"inputs", 2}});
  EXPECT_EQ(invoke({"dilation", "--config", strict}).code, 1);
}

TEST(Cli, HelpExitsCleanly) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("eplt-verify"), std::string::npos);
}

TEST(Cli, OtherFamiliesCertify) {
  for (const std::string family : {"multipartite", "zero-temperature", "alternative"}) {
    const auto cfg = write_config("family_" + family, {{"family", family},
                                                      {"isotropic_steps", 2},
                                                      {"random_states", 2},
                                                      {"fef_restarts", 2}});
    const auto r = invoke({"eplt-verify", "--config", cfg});
    EXPECT_EQ(r.code, 0) << family << ": " << r.err;
  }
}
