#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "citemap/common.hpp"
#include "citemap/synth.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(CITEMAP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch() {
  const auto p = fs::temp_directory_path() / "citemap_cli_test";
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("cli exit codes") {
  const auto dir = scratch();
  const auto input = (dir / "in.txt").string();
  const auto out = (dir / "out").string();
  CHECK(run("synth --first-year 2000 --years 6 --documents 120 -o " + input) == 0);
  CHECK(run("run -i " + input + " --k 2 --out " + out) == 0);
  CHECK(fs::exists(fs::path(out) / "manifest.json"));
  CHECK(run("run -i " + input + " --tau 1.0 --out " + out) == 2);
  CHECK(run("run -i " + input + " --span 0 --out " + out) == 2);
  CHECK(run("run --bogus-flag") == 2);
  CHECK(run("") == 2);
  CHECK(run("net --out " + (dir / "empty").string()) == 1);
  CHECK(run("parse -i " + (dir / "missing.txt").string() + " --out " + out) == 1);
  CHECK(run("--version") == 0);
  fs::remove_all(dir);
}

TEST_CASE("cli flags override the config file") {
  const auto dir = scratch();
  const auto input = (dir / "in.txt").string();
  CHECK(run("synth --first-year 2000 --years 6 --documents 120 -o " + input) == 0);
  citemap::write_file_atomic((dir / "run.cfg").string(),
                             "input = " + input + "\nout = " + (dir / "a").string() + "\nspan = 3\ntau = 0.3\nk = 2\n");
  CHECK(run("run --config " + (dir / "run.cfg").string() + " --span 2") == 0);
  const auto manifest = citemap::read_file((dir / "a" / "manifest.json").string());
  CHECK(manifest.find("\"span\": 2") != std::string::npos);
  CHECK(manifest.find("\"tau\": 0.3") != std::string::npos);
  citemap::write_file_atomic((dir / "bad.cfg").string(), "tau = 1.5\n");
  CHECK(run("run --config " + (dir / "bad.cfg").string()) == 2);
  CHECK(run("run --config " + (dir / "none.cfg").string()) == 2);
  fs::remove_all(dir);
}

TEST_CASE("cli subcommands reproduce the full run") {
  const auto dir = scratch();
  const auto input = (dir / "in.txt").string();
  CHECK(run("synth --first-year 2000 --years 7 --documents 140 -o " + input) == 0);
  const std::string common = " -i " + input + " --k 2 --seed 9 --out " + (dir / "o").string();
  CHECK(run("run" + common) == 0);
  const auto whole = citemap::read_file((dir / "o" / "manifest.json").string());
  const auto svg = citemap::read_file((dir / "o" / "export" / "alluvial.svg").string());
  fs::remove_all(dir / "o");
  for (const char* s : {"parse", "clean", "freq", "windows", "net", "communities", "metrics", "factors", "flow", "layout",
                        "export", "plot"}) {
    CHECK(run(std::string(s) + common) == 0);
  }
  CHECK(citemap::read_file((dir / "o" / "manifest.json").string()) == whole);
  CHECK(citemap::read_file((dir / "o" / "export" / "alluvial.svg").string()) == svg);
  fs::remove_all(dir);
}
