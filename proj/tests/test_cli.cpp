#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kScratch = fs::temp_directory_path() / ("llwork_cli_test_" + std::to_string(::getpid()));

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + LLWORK_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string out(const std::string& name) { return (kScratch / name).string(); }

struct Cleanup {
  ~Cleanup() { fs::remove_all(kScratch); }
} cleanup;

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("--help") == 0);
  CHECK(run("") == 2);                                     // no command
  CHECK(run("ring-spectrum --bogus 1") == 2);              // unknown flag
  CHECK(run("ring-spectrum --n 0") == 2);                  // out of range
  CHECK(run("ring-spectrum --c abc --out-dir " + out("x")) == 2);
  CHECK(run("eos --mu-min 1 --mu-max 0 --out-dir " + out("x")) == 2);
  CHECK(run("work --protocol teleport --out-dir " + out("x")) == 2);
  CHECK(run("work --geometry ring --protocol ramp --out-dir " + out("x")) == 2);  // unsupported
  // no Yang-Yang fixed point at this filling: numeric failure
  CHECK(run("eos --c 1 --mu-min 0.5 --mu-max 1 --mu-points 2 --out-dir " + out("x")) == 3);
}

TEST_CASE("ring spectrum output carries the resolved configuration") {
  REQUIRE(run("ring-spectrum --n 2 --c inf --imax 2 --out-dir " + out("ring")) == 0);
  const std::string text = slurp(kScratch / "ring" / "ring_spectrum.csv");
  CHECK(text.find("# config.c = inf") != std::string::npos);
  CHECK(text.find("# config.imax = 2") != std::string::npos);
  CHECK(text.find("out-dir") == std::string::npos);
  CHECK(text.find("index,energy,residual,iterations,I1,I2,k1,k2") != std::string::npos);
}

TEST_CASE("config file values sit below command-line flags") {
  fs::create_directories(kScratch);
  const fs::path cfg = kScratch / "run.cfg";
  std::ofstream(cfg) << "# test configuration\nbeta = 0.5\nmu-points = 3\nmu-min = -4\nmu-max = -1\n";
  REQUIRE(run("--config " + cfg.string() + " eos --mu-points 2 --out-dir " + out("eos")) == 0);
  const auto doc = nlohmann::json::parse(slurp(kScratch / "eos" / "eos_coefficients.json"));
  CHECK(doc["config"]["beta"] == "0.5");
  CHECK(doc["config"]["mu-points"] == "2");
  std::ifstream iso(kScratch / "eos" / "eos_isotherm.csv");
  int data_rows = 0;
  for (std::string line; std::getline(iso, line);)
    if (!line.empty() && line[0] != '#' && line[0] != 'm') ++data_rows;
  CHECK(data_rows == 2);

  std::ofstream(cfg) << "no-such-key = 1\n";
  CHECK(run("--config " + cfg.string() + " eos --out-dir " + out("eos2")) == 2);
  std::ofstream(cfg) << "just words\n";
  CHECK(run("--config " + cfg.string() + " eos --out-dir " + out("eos2")) == 2);
  CHECK(run("--config " + (kScratch / "missing.cfg").string() + " eos") == 2);
}

TEST_CASE("work distribution file") {
  REQUIRE(run("work --geometry ring --protocol adiabatic --c 2 --beta 0.5 --out-dir " + out("w")) == 0);
  const std::string text = slurp(kScratch / "w" / "work_adiabatic.csv");
  CHECK(text.find("# jarzynski_relative_residual = ") != std::string::npos);
  CHECK(text.find("work,probability") != std::string::npos);
}
