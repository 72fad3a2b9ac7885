#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ardi/cli.hpp"
#include "doctest.h"
#include "support/load.hpp"

using namespace ardi;

namespace {

struct CliRun {
  int exit_code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path =
      (std::filesystem::temp_directory_path() / ("ardi_cli_" + name)).string();
  std::ofstream file(path, std::ios::binary);
  file << content;
  return path;
}

}  // namespace

TEST_CASE("resolve reproduces the bundled expected outcomes") {
  CliRun result = run({"resolve", "corpus", "--space", "structural",
                       "--management", "weighted", "--topic", "gold"});
  CHECK(result.exit_code == 0);

  std::istringstream expected(test::read_file("corpus/expected_weighted.tsv"));
  std::istringstream got(result.out);
  std::string expected_line, got_line;
  while (std::getline(expected, expected_line)) {
    if (expected_line.empty() || expected_line[0] == '#') continue;
    REQUIRE(std::getline(got, got_line));
    CHECK(got_line.substr(0, got_line.rfind('\t')) == expected_line);
  }
  CHECK_FALSE(std::getline(got, got_line));
}

TEST_CASE("identical invocations produce byte-identical output") {
  CliRun first = run({"resolve", "corpus"});
  CliRun second = run({"resolve", "corpus"});
  CHECK(first.exit_code == 0);
  CHECK(first.out == second.out);

  CliRun records_a = run({"evaluate", "corpus", "--format", "records"});
  CliRun records_b = run({"evaluate", "corpus", "--format", "records"});
  CHECK(records_a.out == records_b.out);
}

TEST_CASE("evaluate runs under both managements") {
  CliRun weighted = run({"evaluate", "corpus", "--management", "weighted"});
  CliRun ordered = run({"evaluate", "corpus", "--management", "ordered"});
  CHECK(weighted.exit_code == 0);
  CHECK(ordered.exit_code == 0);
  CHECK(weighted.out.find("precision") != std::string::npos);
  CHECK(ordered.out.find("precision") != std::string::npos);
  CHECK(weighted.out != ordered.out);
}

TEST_CASE("the configuration grid spans spaces, topics and preference sets") {
  for (const char* space : {"structural", "full", "window:3"}) {
    for (const char* topic : {"gold", "auto"}) {
      for (const char* prefs : {"baseline", "final"}) {
        CliRun result = run({"evaluate", "corpus", "--space", space, "--topic",
                             topic, "--prefs", prefs, "--format", "records"});
        CHECK(result.exit_code == 0);
      }
    }
  }
}

TEST_CASE("report window-study covers rows 0..max-n") {
  CliRun table = run({"report", "window-study", "corpus", "--max-n", "14"});
  CHECK(table.exit_code == 0);
  CHECK(table.out.find("\n   14 ") != std::string::npos);
  CliRun records = run({"report", "window-study", "corpus", "--max-n", "14",
                        "--format", "records"});
  CHECK(records.out.find("window.14.pronominal\t") != std::string::npos);
  CHECK(records.out.find("window.0.adjectival\t") != std::string::npos);
}

TEST_CASE("report coverage and candidates emit tables and records") {
  CliRun coverage = run({"report", "coverage", "corpus"});
  CHECK(coverage.exit_code == 0);
  CHECK(coverage.out.find("same-ap") != std::string::npos);
  CHECK(coverage.out.find("95.9") != std::string::npos);  // reference baseline

  CliRun candidates = run({"report", "candidates", "corpus", "--spaces",
                           "structural,full,window:3"});
  CHECK(candidates.exit_code == 0);
  CHECK(candidates.out.find("window:3") != std::string::npos);
  CHECK(candidates.out.find("34.14") != std::string::npos);
}

TEST_CASE("topics command prints the salience ranking") {
  std::string path = write_temp(
      "topics_example.dlg",
      "<DIALOGUE ID=\"wk\">\n<AP ID=\"1\">\n"
      "<IT TYPE=\"I\" SPEAKER=\"A\">\n<U ID=\"u1\">\n<CL ID=\"c1\">"
      "<NP ID=\"n1\" HEAD=\"tren\" GEN=\"M\" NUM=\"S\" PER=\"3\">el tren</NP> "
      "va .</CL>\n</U>\n</IT>\n"
      "<IT TYPE=\"R\" SPEAKER=\"B\">\n<U ID=\"u2\">\n<CL ID=\"c2\">"
      "<NP ID=\"n2\" HEAD=\"tren\" GEN=\"M\" NUM=\"S\" PER=\"3\">el tren</NP> "
      "y <NP ID=\"n3\" HEAD=\"billete\" GEN=\"M\" NUM=\"S\" PER=\"3\">el "
      "billete</NP> van .</CL>\n</U>\n</IT>\n</AP>\n<AP ID=\"2\">\n"
      "<IT TYPE=\"I\" SPEAKER=\"A\">\n<U ID=\"u3\">\n<CL ID=\"c3\">"
      "<NP ID=\"n4\" HEAD=\"billete\" GEN=\"M\" NUM=\"S\" PER=\"3\">el "
      "billete</NP> va .</CL>\n</U>\n</IT>\n"
      "<IT TYPE=\"R\" SPEAKER=\"B\">\n<U ID=\"u4\">\n<CL ID=\"c4\">"
      "pues muy bien entonces .</CL>\n</U>\n</IT>\n</AP>\n</DIALOGUE>\n");
  CliRun result = run({"topics", path});
  CHECK(result.exit_code == 0);
  std::istringstream lines(result.out);
  std::string first, second;
  REQUIRE(std::getline(lines, first));
  REQUIRE(std::getline(lines, second));
  CHECK(first == "wk\tbillete\t19\t1");
  CHECK(second == "wk\ttren\t18\t0");
}

TEST_CASE("kappa command reads two annotation files") {
  std::string a = write_temp("kappa_a.tsv", "i1\tap\ni2\tturn\ni3\tap\n");
  std::string b = write_temp("kappa_b.tsv", "i1\tap\ni2\tturn\ni3\tap\n");
  CliRun result = run({"kappa", a, b, "--format", "records"});
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("kappa.value\t1.000000") != std::string::npos);
  CHECK(result.out.find("kappa.band\ttotal-reliability") != std::string::npos);
}

TEST_CASE("validate reports problems and sets the exit code") {
  CliRun clean = run({"validate", "corpus"});
  CHECK(clean.exit_code == 0);
  CHECK(clean.out.find("0 errors") != std::string::npos);

  std::string broken = write_temp("broken.dlg", "<DIALOGUE ID=\"b\">");
  CliRun failed = run({"validate", broken});
  CHECK(failed.exit_code == 1);
  CHECK(failed.err.find("error") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({"resolve", "corpus", "--no-such-flag"}).exit_code == 2);
  CHECK(run({"resolve", "no/such/path"}).exit_code == 2);
  CHECK(run({"frobnicate"}).exit_code == 2);
  CHECK(run({"evaluate", "corpus", "--space", "diagonal"}).exit_code == 2);

  CliRun help = run({"--help"});
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("resolve") != std::string::npos);
}

TEST_CASE("weight overrides flip outcomes that hang on one preference") {
  // with the verb-position preference muted, the nearer proper noun wins
  CliRun result = run({"resolve", "corpus/d02.dlg", "--weights",
                       "pron.verb_position=0"});
  CHECK(result.exit_code == 0);
  CHECK(result.out.rfind("d02\ta1\tn2\t35", 0) == 0);
}

TEST_CASE("flags beat the config file, the config file beats defaults") {
  std::string config = write_temp("ardi_test.conf",
                                  "# experiment configuration\n"
                                  "management = ordered\n"
                                  "space = structural\n");
  CliRun from_file = run({"resolve", "corpus/d01.dlg", "--config", config});
  CHECK(from_file.exit_code == 0);
  CHECK(from_file.out.rfind("d01\ta1\tn7", 0) == 0);  // ordered management

  CliRun overridden = run({"resolve", "corpus/d01.dlg", "--config", config,
                           "--management", "weighted"});
  CHECK(overridden.out.rfind("d01\ta1\tt\t40", 0) == 0);

  CliRun weights_file = run(
      {"resolve", "corpus/d02.dlg", "--config",
       write_temp("ardi_weights.conf", "weight.pron.verb_position = 0\n")});
  CHECK(weights_file.out.rfind("d02\ta1\tn2\t35", 0) == 0);
}

TEST_CASE("verbose resolve prints per-candidate audits") {
  CliRun result = run({"resolve", "corpus/d01.dlg", "--verbose"});
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("# candidate n7 provenance=previous_ap") !=
        std::string::npos);
  CHECK(result.out.find("score=25") != std::string::npos);
}

TEST_CASE("degraded spaces are reported on standard error") {
  CliRun result = run({"resolve", "corpus/d12.dlg"});
  CHECK(result.exit_code == 0);
  CHECK(result.err.find("degraded-space") != std::string::npos);
  CHECK(result.err.find("a4") != std::string::npos);
}
