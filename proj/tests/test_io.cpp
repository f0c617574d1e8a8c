#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "graphpde/io.hpp"

using namespace graphpde;

TEST_CASE("number formatting round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 2.3240812075600188e-01, 1e-300, 8.0}) {
    const std::string s = format_g17(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("csv serialization") {
  TimeSeries s;
  s.times = {0.0, 0.5};
  s.states = {{1.0, 2.0}, {3.0, 4.0}};
  const auto csv = series_to_csv(s, {"a", "b"});
  CHECK(csv == "t,a,b\n0,1,2\n0.5,3,4\n");
}

TEST_CASE("plot blocks per vertex") {
  TimeSeries s;
  s.times = {0.0, 1.0};
  s.states = {{1.0, 2.0}, {3.0, 4.0}};
  const auto dat = series_to_plot(s, {"a", "b"});
  CHECK(dat == "# a\n0 1\n1 3\n\n# b\n0 2\n1 4\n");
}

TEST_CASE("atomic write leaves no temp file") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "graphpde_io_test";
  fs::create_directories(dir);
  const auto path = (dir / "out.txt").string();
  write_text_atomic(path, "hello\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "hello\n");
  CHECK_FALSE(fs::exists(path + ".tmp"));
  fs::remove_all(dir);
}

TEST_CASE("config parser") {
  const std::string text = R"(
# comment
[scenario]
problem = logistic_dirichlet
a = 1.8
u0 = 8, 1, 0.5
T = 50   # trailing comment

[run]
tol = 1e-10
max_iters = 500
)";
  const auto cfg = Config::parse(text, "test.cfg");
  CHECK(cfg.get_string("scenario", "problem", "") == "logistic_dirichlet");
  CHECK(cfg.get_double("scenario", "a", 0.0) == doctest::Approx(1.8));
  CHECK(cfg.get_double("scenario", "T", 0.0) == doctest::Approx(50.0));
  CHECK(cfg.get_int("run", "max_iters", 0) == 500);
  const auto u0 = cfg.get_doubles("scenario", "u0");
  REQUIRE(u0.size() == 3);
  CHECK(u0[0] == 8.0);
  CHECK(u0[2] == 0.5);
  CHECK(cfg.get_string("missing", "key", "fallback") == "fallback");

  SUBCASE("errors carry the location") {
    try {
      Config::parse("[s]\nkey value\n", "broken.cfg");
      CHECK(false);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("broken.cfg:2") != std::string::npos);
    }
  }
  SUBCASE("key outside a section rejected") {
    CHECK_THROWS_AS(Config::parse("a = 1\n"), ParseError);
  }
  SUBCASE("bad numbers name the key") {
    const auto c = Config::parse("[s]\nx = abc\n", "n.cfg");
    CHECK_THROWS_AS(c.get_double("s", "x", 0.0), ParseError);
  }
}
