#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <string>

#include "ulat/io/serialize.hpp"
#include "ulat/k2/rewrite.hpp"

namespace {

using ulat::io::json;

struct Run {
  int code;
  std::string out;
};

const std::string kData = ULAT_TEST_DATA_DIR "/cli/";

Run run(const std::string& args) {
  const std::string cmd = std::string(ULAT_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

TEST(Cli, RingReports) {
  auto r = run("ring decompose --spec " + kData + "z12.json");
  ASSERT_EQ(r.code, 0);
  const json d = json::parse(r.out);
  ASSERT_EQ(d["components"].size(), 2u);
  EXPECT_EQ(d["components"][0]["size"], 4);
  EXPECT_EQ(d["components"][1]["size"], 3);

  r = run("ring local --spec " + kData + "z8.json");
  ASSERT_EQ(r.code, 0);
  const json l = json::parse(r.out);
  EXPECT_EQ(l["nu"], 3);
  EXPECT_EQ(l["min_gens"], json::parse("[[2]]"));
  EXPECT_EQ(l["theta"], json::parse("[1]"));

  r = run("ring info --spec " + kData + "z4t.json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["size"], 8);
}

TEST(Cli, SpecErrorsExitTwo) {
  EXPECT_EQ(run("ring info --spec " + kData + "bad.json").code, 2);
  EXPECT_EQ(run("ring info --spec " + kData + "truncated.json").code, 2);
  EXPECT_EQ(run("ring info --spec " + kData + "missing.json").code, 2);
  EXPECT_EQ(run("ring nonsense").code, 2);
  EXPECT_EQ(run("tau bound --d 2 --k 0").code, 2);
}

TEST(Cli, SlFactorAndSweep) {
  auto r = run("sl factor --ring " + kData + "z5.json --d 3 --matrix " + kData + "m.json");
  ASSERT_EQ(r.code, 0);
  const json w = json::parse(r.out);
  EXPECT_TRUE(w["verified"].get<bool>());
  EXPECT_LE(w["nonzero_length"].get<int>(), 11);

  EXPECT_EQ(run("sl factor --ring " + kData + "z5.json --matrix " + kData + "nonsl.json").code, 3);

  r = run("sl sweep --ring " + kData + "z4.json --d 2 --exhaustive");
  ASSERT_EQ(r.code, 0);
  const json s = json::parse(r.out);
  EXPECT_EQ(s["count"], 48);
  EXPECT_LE(s["max_length"].get<int>(), 4);
  EXPECT_EQ(s["failures"], 0);
}

TEST(Cli, K2RewriteCheckAndTamper) {
  const std::string cert = ::testing::TempDir() + "/ulat_cert.json";
  auto r = run("k2 rewrite --ring " + kData + "z9.json --a 5 --b 5 --out " + cert);
  ASSERT_EQ(r.code, 0);
  json c = ulat::io::read_json_file(cert);
  EXPECT_TRUE(c["valid"].get<bool>());
  EXPECT_LE(c["tform_symbols"].size(), 2u);

  r = run("k2 check --cert " + cert);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["valid"].get<bool>());

  c["tform"]["s0"] = json::parse("[4]");
  std::FILE* f = std::fopen(cert.c_str(), "w");
  std::fputs(c.dump().c_str(), f);
  std::fclose(f);
  r = run("k2 check --cert " + cert);
  EXPECT_EQ(r.code, 4);
  EXPECT_FALSE(json::parse(r.out)["valid"].get<bool>());
}

TEST(Cli, Deterministic) {
  const std::string a = run("k2 rewrite --ring " + kData + "z9.json --a 5 --b 7").out;
  EXPECT_EQ(a, run("k2 rewrite --ring " + kData + "z9.json --a 5 --b 7").out);
  const std::string s = run("sl sweep --ring " + kData + "z4xz3.json --d 3 --samples 50 --seed 9").out;
  EXPECT_EQ(s, run("sl sweep --ring " + kData + "z4xz3.json --d 3 --samples 50 --seed 9").out);
}

TEST(Cli, TauAndSpectral) {
  auto r = run("tau bound --d 3 --k 0");
  ASSERT_EQ(r.code, 0);
  const json t = json::parse(r.out);
  EXPECT_EQ(t["K_dk"], "1/1034");
  EXPECT_EQ(t["weakened"], "1/1056");
  EXPECT_EQ(t["N"], "47");
  r = run("tau bound --d 3 --k 0 --be 11");
  EXPECT_EQ(json::parse(r.out)["shalom_bound"], "1/22");

  r = run("spectral gap --ring " + kData + "z2.json --d 3 --genset f1 --format json");
  ASSERT_EQ(r.code, 0);
  const json g = json::parse(r.out);
  EXPECT_EQ(g["vertices"], 168);
  EXPECT_EQ(g["degree"], 12);
  EXPECT_GT(g["gap"].get<double>(), 0);

  r = run("spectral gap --ring " + kData + "z2.json --d 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), ulat::spectral_csv_header());

  // An iteration budget that cannot converge.
  EXPECT_EQ(run("spectral gap --ring " + kData + "z2.json --d 3 --method iterative --tol 1e-300").code, 5);
}

// Certificates survive a JSON round trip and still replay.
TEST(Serialize, CertificateRoundTrip) {
  const json spec = json::parse(R"({"kind":"quotient","n":4,"vars":["t"],"relations":["t^2","2*t"],"monomials":["1","t"]})");
  const auto R = ulat::io::ring_from_json(spec);
  const auto L = ulat::local_structure(R);
  R.for_each_element([&](const ulat::RingElement& a) {
    if (!R.is_unit(a)) return;
    R.for_each_element([&](const ulat::RingElement& b) {
      if (!R.is_unit(b)) return;
      const auto c = ulat::rewrite_symbol(L, a, b);
      const json j = json::parse(ulat::io::certificate_json(spec, c).dump());
      const auto back = ulat::io::certificate_from_json(R, j);
      EXPECT_EQ(ulat::io::certificate_json(spec, back), j);
      EXPECT_TRUE(ulat::check_certificate(L, back));
    });
  });
}

TEST(Serialize, MatrixAndElements) {
  const auto R = ulat::make_zmod(7);
  const auto m = ulat::io::matrix_from_json(R, json::parse(R"({"d":2,"entries":[[8,[3]],[-1,0]]})"));
  EXPECT_EQ(m.at(0, 0), R.one());
  EXPECT_EQ(m.at(1, 0), R.from_int(6));
  EXPECT_EQ(ulat::io::matrix_from_json(R, ulat::io::to_json(m)).e, m.e);
  EXPECT_THROW(ulat::io::element_from_string(R, "[1,2]"), ulat::Error);
  EXPECT_THROW(ulat::io::ring_from_json(json::parse(R"({"kind":"field"})")), ulat::Error);
}

}  // namespace
