#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "mbt/cli.hpp"
#include "mbt/io.hpp"

namespace fs = std::filesystem;
using mbt::cli::run;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = run(args, o, e);
  return {code, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("mbt_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors") {
    CHECK(call({}).code == mbt::cli::kUsage);
    CHECK(call({"fit", "--bogus"}).code == mbt::cli::kUsage);
    CHECK(call({"--help"}).code == mbt::cli::kOk);
  }

  TEST_CASE("simulate, fit, and replay byte for byte") {
    const auto dir = scratch("pipeline");
    const auto sim = call({"simulate", "--preset", "example1", "--N", "80", "--T", "6", "--seed", "1", "--out",
                           (dir / "sim").string()});
    REQUIRE(sim.code == 0);
    const auto vectors = mbt::io::read_file(dir / "sim" / "vectors.csv");
    CHECK(std::count(vectors.begin(), vectors.end(), '\n') == 80);

    const auto fit = call({"fit", "--data", (dir / "sim" / "vectors.csv").string(), "--n", "1", "--seeds", "2",
                           "--seed", "7", "--out", (dir / "fit").string()});
    REQUIRE(fit.code == 0);
    for (const char* f : {"model.json", "curves.csv", "fit_trace.json", "manifest.json"})
      CHECK(fs::exists(dir / "fit" / f));

    const auto replay = call({"replay", "--manifest", (dir / "fit" / "manifest.json").string(), "--out",
                              (dir / "again").string()});
    REQUIRE(replay.code == 0);
    for (const char* f : {"model.json", "curves.csv", "fit_trace.json"})
      CHECK(mbt::io::read_file(dir / "fit" / f) == mbt::io::read_file(dir / "again" / f));
    fs::remove_all(dir);
  }

  TEST_CASE("seed is drawn and recorded when absent") {
    const auto dir = scratch("seed");
    REQUIRE(call({"simulate", "--preset", "example1", "--N", "5", "--out", dir.string()}).code == 0);
    const auto manifest = mbt::io::read_file(dir / "manifest.json");
    CHECK(manifest.find("\"--seed\"") != std::string::npos);
    fs::remove_all(dir);
  }

  TEST_CASE("curves and extinction") {
    const auto dir = scratch("model");
    REQUIRE(call({"simulate", "--preset", "example1", "--N", "5", "--seed", "1", "--out", dir.string()}).code == 0);
    const auto model = (dir / "truth.json").string();
    REQUIRE(call({"extinction", "--model", model, "--max-age", "14", "--out", dir.string()}).code == 0);
    const auto ext = mbt::io::read_file(dir / "extinction.csv");
    CHECK(ext.rfind("age,extinction_probability\n", 0) == 0);
    CHECK(std::count(ext.begin(), ext.end(), '\n') == 16);
    REQUIRE(call({"curves", "--model", model, "--max-age", "3", "--out", dir.string()}).code == 0);
    CHECK(mbt::io::read_file(dir / "curves.csv").rfind("age,mortality,fertility,survival\n", 0) == 0);
    fs::remove_all(dir);
  }

  TEST_CASE("stable exit codes") {
    const auto dir = scratch("codes");
    fs::create_directories(dir);
    mbt::io::write_atomic(dir / "bad.csv", "age,fertility,mortality\n0,1,oops\n");
    CHECK(call({"fit", "--data", (dir / "bad.csv").string(), "--out", dir.string()}).code == mbt::cli::kParse);
    CHECK(call({"fit", "--data", (dir / "none.csv").string(), "--out", dir.string()}).code == mbt::cli::kIo);
    mbt::io::write_atomic(dir / "bad.json",
                          R"({"n":1,"alpha":[1],"D0":[[-1]],"D1":[[0.5]],"d":[0.1]})");
    CHECK(call({"validate", "--model", (dir / "bad.json").string(), "--out", dir.string()}).code ==
          mbt::cli::kValidation);
    CHECK(call({"select", "--criterion", "msil", "--data", (dir / "bad.csv").string(), "--out", dir.string()})
              .code == mbt::cli::kParse);
    CHECK(call({"simulate", "--preset", "nope", "--out", dir.string()}).code == mbt::cli::kStructural);
    fs::remove_all(dir);
  }

  TEST_CASE("msil rule is echoed") {
    const auto dir = scratch("msil");
    REQUIRE(call({"simulate", "--preset", "example1", "--N", "60", "--T", "5", "--seed", "2", "--out", dir.string()})
                .code == 0);
    const auto r = call({"select", "--criterion", "msil", "--rule", "mk1", "--n-range", "1..2", "--folds", "2",
                         "--seeds", "1", "--data", (dir / "vectors.csv").string(), "--seed", "1", "--out",
                         dir.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("rule mk1 gives M=") != std::string::npos);
    CHECK(fs::exists(dir / "selection.json"));
    fs::remove_all(dir);
  }
}
