#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "graphpde/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = graphpde::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

const std::string kBadGraph = R"(vertices:
a, 1, interior
b, 1, boundary
edges:
a, b, 1
a, b, 2
)";

}  // namespace

TEST_CASE("cli validate") {
  SUBCASE("builtin demo passes") {
    const auto r = run_cli({"validate"});
    CHECK(r.code == 0);
    CHECK(r.out.find("pass") != std::string::npos);
  }
  SUBCASE("malformed graph exits 1 with a location") {
    const auto dir = fresh_dir("graphpde_cli_badgraph");
    write(dir / "g.txt", kBadGraph);
    const auto r = run_cli({"validate", "--graph", (dir / "g.txt").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("g.txt:6") != std::string::npos);  // duplicate edge line
    fs::remove_all(dir);
  }
  SUBCASE("axiom violation exits 2") {
    const auto dir = fresh_dir("graphpde_cli_invalid");
    // boundary vertex c has no interior neighbor
    write(dir / "g.txt",
          "vertices:\na, 1, interior\nb, 1, boundary\nc, 1, boundary\nedges:\na, b, 1\nb, c, "
          "1\n");
    const auto r = run_cli({"validate", "--graph", (dir / "g.txt").string()});
    CHECK(r.code == 2);
    CHECK(r.out.find("no interior neighbor") != std::string::npos);
    fs::remove_all(dir);
  }
  SUBCASE("unknown subcommand exits 1") {
    const auto r = run_cli({"frobnicate"});
    CHECK(r.code == 1);
  }
}

TEST_CASE("cli eig prints the demo eigenvalues at full precision") {
  const auto r = run_cli({"eig"});
  CHECK(r.code == 0);
  CHECK(r.out.find("== dirichlet ==") != std::string::npos);
  CHECK(r.out.find("0.23240812075600") != std::string::npos);
  CHECK(r.out.find("== neumann ==") != std::string::npos);
}

TEST_CASE("cli solve writes an all-zero trajectory for zero data") {
  const auto dir = fresh_dir("graphpde_cli_solvezero");
  write(dir / "run.cfg",
        "[scenario]\nproblem = linear\nreaction = none\nboundary = dirichlet\nu0 = 0\nT = "
        "1\ndt = 0.01\nstride = 10\n");
  const auto r = run_cli({"solve", "--config", (dir / "run.cfg").string(), "--out",
                          (dir / "out").string(), "--quiet"});
  CHECK(r.code == 0);
  const auto csv = slurp(dir / "out" / "trajectory.csv");
  CHECK(csv.find("t,x1,x2,x3,x4,x5") == 0);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    CHECK(line.substr(comma) == ",0,0,0,0,0");
  }
  const auto rep = slurp(dir / "out" / "report.json");
  CHECK(rep.find("\"meta\"") != std::string::npos);
  CHECK(rep.find("\"spectrum\"") != std::string::npos);
  CHECK(rep.find("\"verdicts\"") != std::string::npos);
  CHECK(rep.find("\"classification\"") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("cli classify reports hypothesis failures with exit 2") {
  const auto dir = fresh_dir("graphpde_cli_flag");
  write(dir / "run.cfg",
        "[scenario]\nproblem = kpp_cauchy\nreaction = polynomial\ncoeffs = 0, 1, 1, -2\n"
        "boundary = none\nu0 = 0.5\nT = 40\ndt = 0.001\nstride = 1000\n");
  const auto r = run_cli({"classify", "--config", (dir / "run.cfg").string(), "--out",
                          (dir / "out").string(), "--quiet"});
  CHECK(r.code == 2);
  const auto rep = slurp(dir / "out" / "report.json");
  CHECK(rep.find("\"hypothesis_ok\": false") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("cli steady on the demo supercritical problem") {
  const auto dir = fresh_dir("graphpde_cli_steady");
  write(dir / "run.cfg",
        "[scenario]\nproblem = steady\nreaction = logistic\na = 1.8\nb = 1\nboundary = "
        "dirichlet\ng = 0\nu0 = 8, 1, 0.5\n[output]\niterates = iterates.csv\n");
  const auto r = run_cli({"steady", "--config", (dir / "run.cfg").string(), "--out",
                          (dir / "out").string(), "--quiet"});
  CHECK(r.code == 0);
  const auto rep = slurp(dir / "out" / "report.json");
  CHECK(rep.find("\"converged\": true") != std::string::npos);
  CHECK(rep.find("\"unique\": true") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "iterates.csv"));
  fs::remove_all(dir);
}

TEST_CASE("cli demo outputs are byte-identical across runs") {
  const auto dir1 = fresh_dir("graphpde_cli_demo1");
  const auto dir2 = fresh_dir("graphpde_cli_demo2");
  const auto r1 = run_cli({"demo", "--out", dir1.string(), "--quiet"});
  const auto r2 = run_cli({"demo", "--out", dir2.string(), "--quiet"});
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  for (const char* name : {"report.json", "demo_extinction.csv", "demo_establishment.csv",
                           "demo_extinction_plot.dat", "demo_establishment_plot.dat"}) {
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
    CHECK_FALSE(slurp(dir1 / name).empty());
  }
  const auto rep = slurp(dir1 / "report.json");
  CHECK(rep.find("Extinction") != std::string::npos);
  CHECK(rep.find("ConvergenceToState") != std::string::npos);
  CHECK(rep.find("0.23240812075600") != std::string::npos);
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}
