#include <catch2/catch_amalgamated.hpp>

#include <famdyn/corpus.hpp>
#include <famdyn/spec_io.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the installed binary with stdout/stderr captured to temp files.
CliResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path();
  const std::string tag = std::to_string(counter++);
  const fs::path out_p = dir / ("famdyn_cli_" + tag + ".out");
  const fs::path err_p = dir / ("famdyn_cli_" + tag + ".err");
  std::string cmd;
  if (!env.empty()) cmd = "env " + env + " ";
  cmd += std::string(FAMDYN_CLI_PATH) + " " + args + " > " + out_p.string() + " 2> " +
         err_p.string();
  const int raw = std::system(cmd.c_str());
  CliResult r;
  if (raw >= 0 && WIFEXITED(raw)) r.code = WEXITSTATUS(raw);
  r.out = slurp(out_p);
  r.err = slurp(err_p);
  fs::remove(out_p);
  fs::remove(err_p);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("corpus subcommand lists every built-in system") {
  const CliResult r = run_cli("corpus");
  REQUIRE(r.code == 0);
  const std::vector<std::string> got = lines_of(r.out);
  const std::vector<std::string> want = famdyn::corpus_names();
  CHECK(got == want);
}

TEST_CASE("corpus --emit prints a parseable spec file") {
  const CliResult r = run_cli("corpus --emit two-circles");
  REQUIRE(r.code == 0);
  const famdyn::SystemSpecFile spec = famdyn::parse_system_spec(r.out);
  CHECK(spec.name == "two-circles");
  CHECK(spec.family.k() == 2);

  const CliResult bad = run_cli("corpus --emit no-such-system");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("unknown") != std::string::npos);
}

TEST_CASE("orbit csv has the documented shape") {
  const CliResult r = run_cli("orbit --system two-circles --N 10 --format csv");
  REQUIRE(r.code == 0);
  const std::vector<std::string> rows = lines_of(r.out);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == "n,component,coord,x,y");
  CHECK(rows[1].rfind("0,0,0", 0) == 0);
  // Planar components carry ambient coordinates; no field is left empty.
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].find(",,") == std::string::npos);
}

TEST_CASE("orbit json tabulates stride and offset") {
  const CliResult r = run_cli("orbit --system doubling1 --N 9 --stride 2 --offset 1");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["system"] == "doubling1");
  CHECK(j["stride"] == 2);
  CHECK(j["offset"] == 1);
  REQUIRE(j["orbit"].is_array());
  REQUIRE(j["orbit"].size() == 10);  // n = 1, 3, ..., 19
  CHECK(j["orbit"][0]["n"] == 1);
  CHECK(j["orbit"][9]["n"] == 19);
}

TEST_CASE("detect emits the battery as json") {
  const CliResult r =
      run_cli("detect --system doubling2 --N 200 --grid 0.05 --window 20");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["system"] == "doubling2");
  CHECK(j["params"]["N"] == 200);
  CHECK(j["params"]["window"] == 20);
  CHECK_FALSE(j.contains("timings_ms"));
  REQUIRE(j["verdicts"].is_array());
  // proximal needs --y and is skipped by default
  CHECK(j["verdicts"].size() == 7);
  for (const json& v : j["verdicts"]) {
    CHECK(v.contains("name"));
    CHECK(v.contains("status"));
    CHECK(v.contains("measured"));
  }
}

TEST_CASE("detect includes proximal only with a partner point") {
  const CliResult with_y = run_cli(
      "detect --system doubling1 --N 100 --grid 0.05 --x 0:0.1 --y 0:0.3");
  REQUIRE(with_y.code == 0);
  const json j = json::parse(with_y.out);
  CHECK(j["verdicts"].size() == 8);

  const CliResult bad = run_cli("detect --system doubling1 --only proximal");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("--y") != std::string::npos);
}

TEST_CASE("detect --only restricts the battery") {
  const CliResult r =
      run_cli("detect --system rot-irrational --N 100 --grid 0.05 --only "
              "equicontinuity,sensitivity");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["verdicts"].size() == 2);
  CHECK(j["verdicts"][0]["name"] == "equicontinuity");
  CHECK(j["verdicts"][1]["name"] == "sensitivity");

  const CliResult bad = run_cli("detect --system doubling1 --only bogus");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("unknown detector") != std::string::npos);
}

TEST_CASE("detect csv uses the long record format") {
  const CliResult r = run_cli(
      "detect --system doubling1 --N 100 --grid 0.05 --only sensitivity --format csv");
  REQUIRE(r.code == 0);
  const std::vector<std::string> rows = lines_of(r.out);
  REQUIRE(rows.size() >= 3);
  CHECK(rows[0] == "record,field,value");
}

TEST_CASE("cli failure paths exit 1 with a message") {
  SECTION("unknown system") {
    const CliResult r = run_cli("detect --system nope");
    CHECK(r.code == 1);
    CHECK(r.err.find("unknown system") != std::string::npos);
  }

  SECTION("bad point literal") {
    const CliResult r = run_cli("orbit --system doubling1 --x banana");
    CHECK(r.code == 1);
    CHECK_FALSE(r.err.empty());
  }

  SECTION("bad spec file reports line and column") {
    const fs::path p = fs::temp_directory_path() / "famdyn_cli_bad_spec.json";
    {
      std::ofstream out(p);
      out << "{\n  \"name\": 3\n}\n";
    }
    const CliResult r = run_cli("detect --spec " + p.string());
    fs::remove(p);
    CHECK(r.code == 1);
    CHECK(r.err.find("invalid system spec") != std::string::npos);
    CHECK(r.err.find(":2:") != std::string::npos);
  }
}

TEST_CASE("environment variables fill unset flags") {
  const CliResult r = run_cli("detect --system doubling1 --grid 0.05 --only sensitivity",
                              "FAMDYN_N=50");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["params"]["N"] == 50);
}

TEST_CASE("spec files drive the cli and the digest is stable") {
  const fs::path p = fs::temp_directory_path() / "famdyn_cli_spec.json";
  const std::string text = famdyn::corpus_spec_json("tent2");
  {
    std::ofstream out(p, std::ios::binary);
    out << text;
  }
  const CliResult r =
      run_cli("detect --spec " + p.string() + " --N 100 --grid 0.05 --only sensitivity");
  fs::remove(p);
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["system"] == "tent2");
  char want[17];
  std::snprintf(want, sizeof want, "%016llx",
                static_cast<unsigned long long>(famdyn::fnv1a64(text)));
  CHECK(j["digest"] == want);
}

TEST_CASE("reports are byte-identical across reruns and worker counts") {
  const std::string detect_args =
      "detect --system doubling2 --N 300 --grid 0.05 --window 20";
  const CliResult a = run_cli(detect_args + " --workers 1");
  const CliResult b = run_cli(detect_args + " --workers 3");
  const CliResult c = run_cli(detect_args + " --workers 1");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);

  const std::string compare_args =
      "compare --system tent2 --N 1000 --grid 0.05 --window 0 --claims LYS,SEN";
  const CliResult d = run_cli(compare_args + " --workers 1");
  const CliResult e = run_cli(compare_args + " --workers 4");
  REQUIRE(d.code == 0);
  CHECK(d.out == e.out);
}

TEST_CASE("compare emits comparison records") {
  const CliResult r = run_cli(
      "compare --system two-circles --N 2000 --grid 0.05 --claims EQ,LYC --eps 0.05");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["comparisons"].is_array());
  REQUIRE(j["comparisons"].size() == 2);
  CHECK(j["comparisons"][0]["claim"] == "EQ");
  CHECK(j["comparisons"][0]["agreement"] == "disagreement_allowed");
  CHECK(j["comparisons"][1]["claim"] == "LYC");
  for (const json& c : j["comparisons"]) {
    CHECK(c.contains("family"));
    CHECK(c.contains("composed"));
    CHECK(c.contains("rationale"));
  }

  const CliResult bad = run_cli("compare --system doubling1 --claims NOPE");
  CHECK(bad.code == 1);
}

TEST_CASE("--out writes the report to a file") {
  const fs::path p = fs::temp_directory_path() / "famdyn_cli_report.json";
  const CliResult r = run_cli(
      "detect --system doubling1 --N 100 --grid 0.05 --only sensitivity --out " +
      p.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const json j = json::parse(slurp(p));
  CHECK(j["system"] == "doubling1");
  fs::remove(p);
}

TEST_CASE("help and version exit cleanly") {
  const CliResult help = run_cli("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("corpus") != std::string::npos);

  const CliResult version = run_cli("--version");
  CHECK(version.code == 0);
  CHECK_FALSE(version.out.empty());
}
