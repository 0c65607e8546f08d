// End-to-end runs of the invar binary: exit codes, outputs and files.

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "invar/poly_io.hpp"
#include "invar/report.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + INVAR_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("invar-cli-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const std::string p = (dir_ / name).string();
    std::ofstream(p) << text;
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t at = s.find(needle); at != std::string::npos; at = s.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_F(Cli, DicksonWritesPolynomialFiles) {
  const Result r = run("dickson --p 2 --e 1 --n 2");
  ASSERT_EQ(r.code, 0);
  const invar::PolyFile f = invar::parse_poly_file(r.out);
  ASSERT_EQ(f.polys.size(), 2u);
  EXPECT_EQ(f.polys[0].degree(), 3);
  EXPECT_EQ(f.polys[1].degree(), 2);

  const Result one = run("dickson --p 3 --e 1 --n 1");
  ASSERT_EQ(one.code, 0);
  EXPECT_NE(one.out.find("poly: x1^2\n"), std::string::npos);

  const Result four = run("dickson --p 2 --e 2 --n 2");
  ASSERT_EQ(four.code, 0);
  EXPECT_EQ(invar::parse_poly_file(four.out).polys[0].degree(), 15);
}

TEST_F(Cli, DicksonIsServedFromTheCacheByteForByte) {
  const std::string cache = path("cache");
  const Result a = run("dickson --p 3 --n 3 --cache-dir " + cache + " --out " + path("a.poly"));
  ASSERT_EQ(a.code, 0);
  ASSERT_FALSE(fs::is_empty(cache));
  const Result b = run("dickson --p 3 --n 3 --out " + path("b.poly"), "INVAR_CACHE_DIR=" + cache);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(invar::read_text_file(path("a.poly")), invar::read_text_file(path("b.poly")));
}

TEST_F(Cli, ResourceCapIsAnError) {
  EXPECT_EQ(run("dickson --p 3 --n 3 --max-terms 5").code, 2);
  EXPECT_EQ(run("dickson --p 4 --n 2").code, 2);
}

TEST_F(Cli, SymplecticAndAltn) {
  const Result s = run("symplectic --p 2 --n 2");
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(invar::parse_poly_file(s.out).polys.size(), 3u);
  const Result a = run("altn --p 5 --n 4 --order lex");
  ASSERT_EQ(a.code, 0);
  const invar::PolyFile f = invar::parse_poly_file(a.out);
  EXPECT_EQ(f.polys.size(), 5u);
  EXPECT_EQ(f.ring->order().name(), "lex");
}

TEST_F(Cli, GroebnerBasisOfAHandExample) {
  const std::string ideal = file("i.poly", "field: 5\nvars: x y\npoly: x^2\npoly: x*y + y^2\n");
  const Result r = run("gb " + ideal + " --out " + path("gb.poly"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(invar::read_poly_file(path("gb.poly")).polys.size(), 3u);
  EXPECT_EQ(run("gb " + file("bad.poly", "field: 5\nvars: x\npoly: x^^2\n")).code, 2);
  EXPECT_EQ(run("gb " + path("missing.poly")).code, 2);
}

TEST_F(Cli, MemberExitCodesFollowTheDichotomy) {
  for (auto [p, expect] : std::vector<std::pair<int, int>>{{3, 0}, {7, 1}}) {
    const Result a = run("altn --p " + std::to_string(p) + " --n 4");
    ASSERT_EQ(a.code, 0);
    const invar::PolyFile f = invar::parse_poly_file(a.out);
    const std::string header = invar::ring_header(*f.ring);
    std::string gens = header;
    for (int i = 0; i < 4; ++i) gens += "poly: " + f.polys[i].to_string() + "\n";
    const std::string ideal = file("e.poly", gens);
    const std::string delta = file("d.poly", header + "poly: " + f.polys[4].to_string() + "\n");
    const std::string cert = path("cert.witness");
    EXPECT_EQ(run("member " + ideal + " " + delta + " --out " + cert).code, expect) << "p=" << p;
    const Result check = run("replay " + cert);
    EXPECT_EQ(check.code, 0) << check.out;
  }
}

TEST_F(Cli, VerifyExamples) {
  const Result f = run("verify sp4-fpurity --q 2 --out " + path("r.txt"));
  EXPECT_EQ(f.code, 0);
  EXPECT_NE(f.out.find("closure-e=1"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("r.txt")));
  EXPECT_EQ(run("replay " + path("r.txt.witness")).code, 0);

  const Result d = run("verify alt-dichotomy --n 3 --p 5");
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("Delta not in I as required"), std::string::npos);

  const Result t = run("verify theorem-search --n 2 --q 3");
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("(1,2,2)"), std::string::npos);
  EXPECT_NE(t.out.find("theorem hypothesis q >= 4n-4 not met"), std::string::npos);
}

TEST_F(Cli, VerifyExitCodes) {
  EXPECT_EQ(run("verify no-such-claim").code, 2);
  EXPECT_EQ(run("verify sp4-fpurity").code, 2);                   // missing --q
  EXPECT_EQ(run("verify alt-T --n 3 --p 4").code, 2);             // not a prime
  EXPECT_EQ(run("verify sp4-c0 --q 3 --mode exact --max-terms 50").code, 2);  // SKIPPED
  EXPECT_EQ(run("verify relations-n3 --q 2 --i 1 --trials 2").code, 2);        // bound too weak
  EXPECT_EQ(run("verify sp4-c0 --q 2").code, 0);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("verify sp4-c0 --q 2 --output xml").code, 2);
}

TEST_F(Cli, FlagsOverrideEnvironment) {
  const Result env = run("verify relations-n3 --q 2 --i 1 --output machine", "INVAR_SEED=5");
  EXPECT_NE(env.out.find("seed=5"), std::string::npos);
  const Result flag = run("verify relations-n3 --q 2 --i 1 --output machine --seed 9", "INVAR_SEED=5");
  EXPECT_NE(flag.out.find("seed=9"), std::string::npos);
}

TEST_F(Cli, QuickSuiteMachineOutput) {
  const Result r = run("suite quick --output machine --out " + path("suite"));
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::size_t records = 0;
  for (std::string line; std::getline(in, line);) {
    ASSERT_EQ(line.rfind("claim=", 0), 0u) << line;
    EXPECT_NE(line.find("\tverdict=VERIFIED\t"), std::string::npos) << line;
    ++records;
  }
  EXPECT_GE(records, 12u);
  EXPECT_TRUE(fs::exists(path("suite/summary.txt")));
  EXPECT_EQ(run("replay " + path("suite/sp4-fpurity_q3_e_max4_relationyes.witness")).code, 0);
}

TEST_F(Cli, QuickSuiteTextEndsWithASummaryTable) {
  const Result r = run("suite quick");
  ASSERT_EQ(r.code, 0);
  EXPECT_GE(count(r.out, "verdict: VERIFIED"), 12u);
  EXPECT_NE(r.out.find("claim            params"), std::string::npos);
}
