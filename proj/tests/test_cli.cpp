#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.h"
#include "newton_lab/json_io.h"
#include "oracles.h"

using namespace newton_lab;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("range parsing") {
    CHECK(cli::parse_range("3..8") == std::vector<double>{3, 4, 5, 6, 7, 8});
    CHECK(cli::parse_range("4..24:4") == std::vector<double>{4, 8, 12, 16, 20, 24});
    CHECK(cli::parse_range("2") == std::vector<double>{2});
    CHECK(cli::parse_range("1..2:0.5") == std::vector<double>{1, 1.5, 2});
    CHECK_THROWS_AS(cli::parse_range("5..3"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_range("1..x"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_range("1..4:-1"), std::invalid_argument);
  }

  TEST_CASE("constants: Labelle value at n = 2") {
    const Run r = run({"constants", "--p", "2", "--N", "0", "--m", "1", "--n", "2"});
    CHECK(r.code == cli::kExitOk);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"kind", "p", "N", "a", "value", "reference", "abs_dev", "rel_dev", "method",
                                              "tolerance"});
    CHECK(std::stod(rows[1][4]) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.out.find('\r') == std::string::npos);
  }

  TEST_CASE("constants: mu table on the cube") {
    const Run r = run({"constants", "--p", "inf", "--N", "1", "--m", "1", "--body", "cube", "--n", "3..8"});
    CHECK(r.code == cli::kExitOk);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 7);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const int n = std::stoi(rows[i][3]);
      CHECK(std::stod(rows[i][5]) == doctest::Approx(oracle::mu(1, n)).epsilon(1e-11));
      CHECK(std::stod(rows[i][7]) < 1e-5);
    }
  }

  TEST_CASE("constants: JSON output and multi-term operators") {
    const Run r = run({"constants", "--p", "2", "--m", "2", "--body", "ball", "--op", "1,0:1;0,1:0:2", "--a", "3",
                       "--format", "json"});
    CHECK(r.code == cli::kExitOk);
    const Json j = Json::parse(r.out);
    CHECK(j["command"] == "constants");
    CHECK(j["seed"] == 20240101);
    CHECK(j["results"][0]["N"] == 1);
    CHECK(j["results"][0]["extremal"]["m"] == 2);
  }

  TEST_CASE("constants: entire function constant") {
    const Run r = run({"constants", "--kind", "entireE", "--m", "2", "--body", "cube"});
    CHECK(r.code == cli::kExitOk);
    const auto rows = parse_csv(r.out);
    CHECK(std::stod(rows[1][4]) == doctest::Approx(1 / std::numbers::pi).epsilon(1e-8));
  }

  TEST_CASE("configuration errors exit 2 and name the field") {
    for (const auto& [args, field] :
         {std::pair<std::vector<std::string>, std::string>{{"constants", "--p", "0", "--n", "2"}, "--p"},
          {{"remez", "--tau", "1.5"}, "--tau"},
          {{"constants", "--m", "5", "--a", "2"}, "--m"},
          {{"constants", "--m", "2", "--N", "1", "--a", "3"}, "--N"},
          {{"constants", "--a", "5..3"}, "--a"},
          {{"converge", "--p", "2", "--a", "0.5..2"}, "--a"},
          {{"constants", "--body", "torus", "--a", "2"}, "--body"},
          {{"constants", "--sigma", "1,2,3", "--m", "2", "--a", "2"}, "--sigma"},
          {{"constants", "--format", "xml", "--a", "2"}, "--format"}}) {
      const Run r = run(args);
      CHECK(r.code == cli::kExitConfig);
      CHECK(r.err.find(field) != std::string::npos);
    }
    CHECK(run({"constants", "--bogus", "1"}).code == cli::kExitConfig);
    CHECK(run({}).code == cli::kExitConfig);
  }

  TEST_CASE("help exits 0") {
    const Run r = run({"--help"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("lo..hi[:step]") != std::string::npos);
  }

  TEST_CASE("converge: mu column and summary file") {
    const auto path = std::filesystem::temp_directory_path() / "newton_lab_converge_summary.json";
    const Run r = run({"converge", "--p", "inf", "--m", "1", "--N", "2", "--a", "3..12", "--summary", path.string()});
    CHECK(r.code == cli::kExitOk);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 11);
    CHECK(rows[0] == std::vector<std::string>{"a", "tilde_m", "e_value", "rel_gap"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const int n = std::stoi(rows[i][0]);
      CHECK(std::stod(rows[i][2]) == doctest::Approx(oracle::mu(2, n)).epsilon(1e-11));
      CHECK(std::stod(rows[i][1]) == doctest::Approx(oracle::mu(2, n)).epsilon(1e-5));
    }
    std::ifstream in(path);
    const Json s = Json::parse(in);
    CHECK(s["command"] == "converge");
    CHECK(s.contains("seed"));
    CHECK(s.contains("final_gap"));
    CHECK(s.contains("monotone_fraction"));
    std::filesystem::remove(path);
  }

  TEST_CASE("remez: ratios below one") {
    const Run r = run({"remez", "--tau", "0.5", "--lambda", "1", "--a", "4..24:4"});
    CHECK(r.code == cli::kExitOk);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 7);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][3]) <= 1);
    const Run slow = run({"remez", "--tau", "0.99", "--a", "4..12:4"});
    CHECK(slow.code == cli::kExitOk);
  }

  TEST_CASE("inspect lattice, polar and cover") {
    const Json lattice = Json::parse(run({"inspect", "lattice", "--m", "2", "--body", "octahedron", "--a", "2"}).out);
    CHECK(lattice["count"] == 6);
    CHECK(lattice["points"].size() == 6);
    const Json polar = Json::parse(run({"inspect", "polar", "--body", "cube", "--m", "3"}).out);
    CHECK(polar["polar"]["lambda"] == 1.0);
    CHECK(polar["polar"]["name"] == "octahedron");
    const Run cover = run({"inspect", "cover", "--body", "ball", "--m", "2", "--delta", "2"});
    CHECK(cover.code == cli::kExitOk);
    const Json c = Json::parse(cover.out);
    CHECK(c["coverage"] == 1.0);
    CHECK(c["count"].get<int>() >= 2);
    CHECK(run({"inspect", "cover", "--delta", "1"}).code == cli::kExitConfig);
  }

  TEST_CASE("deterministic output across job counts") {
    const std::vector<std::string> base{"constants", "--p", "3", "--m", "1", "--N", "1", "--a", "2..5", "--format", "json"};
    auto with_jobs = base;
    with_jobs.insert(with_jobs.end(), {"--jobs", "4"});
    const Run a = run(base), b = run(base), c = run(with_jobs);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
  }

  TEST_CASE("NEWTON_LAB_JOBS overrides --jobs and is validated") {
    ::setenv("NEWTON_LAB_JOBS", "zero", 1);
    const Run bad = run({"constants", "--a", "2"});
    CHECK(bad.code == cli::kExitConfig);
    CHECK(bad.err.find("NEWTON_LAB_JOBS") != std::string::npos);
    ::setenv("NEWTON_LAB_JOBS", "3", 1);
    CHECK(run({"constants", "--a", "2..4", "--jobs", "1"}).code == cli::kExitOk);
    ::unsetenv("NEWTON_LAB_JOBS");
  }
}
