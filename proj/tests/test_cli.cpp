#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "egr/graph.hpp"
#include "egr/result_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return EGR_CLI_PATH; }

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out_file = dir / "stdout.txt";
  const std::string cmd =
      std::string(cli_path()) + " " + args + " > " + out_file.string() + " 2> " +
      (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.stdout_text = egr::read_text_file(out_file);
  return r;
}

fs::path make_temp_dir() {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / ("egr_cli_test_" + std::to_string(::getpid()) + "_" +
                                              std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

TEST_CASE("solve-max produces deterministic JSON and SVG with correct content") {
  fs::path dir = make_temp_dir();
  const std::string base = "solve-max --family cycle --n 6 --out " + (dir / "r1.json").string() +
                           " --svg " + (dir / "s1.svg").string();
  RunResult first = run_cli(base, dir);
  REQUIRE(first.exit_code == 0);

  RunResult second = run_cli("solve-max --family cycle --n 6 --out " + (dir / "r2.json").string() +
                                 " --svg " + (dir / "s2.svg").string(),
                             dir);
  REQUIRE(second.exit_code == 0);
  CHECK(egr::read_text_file(dir / "r1.json") == egr::read_text_file(dir / "r2.json"));
  CHECK(egr::read_text_file(dir / "s1.svg") == egr::read_text_file(dir / "s2.svg"));

  nlohmann::json r = nlohmann::json::parse(egr::read_text_file(dir / "r1.json"));
  CHECK(r["sense"] == "max-lambda2");
  CHECK(std::abs(r["lambda_star"].get<double>() - 1.0 / 6) <= 1e-6);
  CHECK(r["d"] == 2);
  CHECK(r["w"].size() == 6);
  CHECK(r["zero_weight_edges"].empty());
  CHECK(r["X"].size() == 6);
  CHECK(std::abs(r["total_variance"].get<double>() - 6.0) <= 1e-5);
  CHECK(r["certificate"]["overall"] == true);
  CHECK(r["solver_trace"].size() > 3);

  const std::string svg = egr::read_text_file(dir / "s1.svg");
  CHECK(count_occurrences(svg, "<circle") == 6);
  CHECK(count_occurrences(svg, "<line") == 6);
  CHECK(count_occurrences(svg, "projection") == 0);
  fs::remove_all(dir);
}

TEST_CASE("petersen SVG carries the projection annotation") {
  fs::path dir = make_temp_dir();
  RunResult r = run_cli("solve-max --family petersen --svg " + (dir / "p.svg").string(), dir);
  REQUIRE(r.exit_code == 0);
  const std::string svg = egr::read_text_file(dir / "p.svg");
  CHECK(count_occurrences(svg, "<circle") == 10);
  CHECK(count_occurrences(svg, "<line") == 15);
  CHECK(svg.find("d=5: 2-D projection") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("house_x result reports exactly one zero-weight edge") {
  fs::path dir = make_temp_dir();
  RunResult r = run_cli("solve-max --family house_x --out " + (dir / "hx.json").string(), dir);
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(egr::read_text_file(dir / "hx.json"));
  CHECK(j["zero_weight_edges"].size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("certify command round-trips a solved instance and flags a scaled one") {
  fs::path dir = make_temp_dir();
  egr::Graph g = egr::generate("cycle", 6);
  egr::write_text_file(dir / "hexagon.json", egr::graph_to_json(g));

  RunResult solved = run_cli("solve-max --family cycle --n 6 --out " + (dir / "r.json").string(), dir);
  REQUIRE(solved.exit_code == 0);
  nlohmann::json r = nlohmann::json::parse(egr::read_text_file(dir / "r.json"));

  egr::write_text_file(dir / "w.json", nlohmann::json{{"w", r["w"]}}.dump());
  egr::write_text_file(dir / "X.json", nlohmann::json{{"X", r["X"]}}.dump());

  RunResult pass = run_cli("certify --graph " + (dir / "hexagon.json").string() + " --weights " +
                               (dir / "w.json").string() + " --coords " + (dir / "X.json").string(),
                           dir);
  CHECK(pass.exit_code == 0);
  CHECK(pass.stdout_text.find("\"overall\": true") != std::string::npos);

  // shrink the coordinates: still feasible but no longer optimal
  nlohmann::json xs = r["X"];
  for (auto& row : xs)
    for (auto& v : row) v = v.get<double>() * 0.9;
  egr::write_text_file(dir / "X_scaled.json", nlohmann::json{{"X", xs}}.dump());
  RunResult fail = run_cli("certify --graph " + (dir / "hexagon.json").string() + " --weights " +
                               (dir / "w.json").string() + " --coords " +
                               (dir / "X_scaled.json").string(),
                           dir);
  CHECK(fail.exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("render command draws a provided realization") {
  fs::path dir = make_temp_dir();
  egr::Graph g = egr::generate("cycle", 4);
  egr::write_text_file(dir / "g.json", egr::graph_to_json(g));
  egr::write_text_file(dir / "X.json",
                       R"({"X": [[0.5, 0.5], [-0.5, 0.5], [-0.5, -0.5], [0.5, -0.5]]})");
  RunResult r = run_cli("render --graph " + (dir / "g.json").string() + " --coords " +
                            (dir / "X.json").string() + " --svg " + (dir / "sq.svg").string(),
                        dir);
  REQUIRE(r.exit_code == 0);
  const std::string svg = egr::read_text_file(dir / "sq.svg");
  CHECK(count_occurrences(svg, "<circle") == 4);
  CHECK(count_occurrences(svg, "<line") == 4);
  fs::remove_all(dir);
}

TEST_CASE("one-dimensional realizations render on a horizontal line") {
  fs::path dir = make_temp_dir();
  RunResult r = run_cli("solve-min --family cube --svg " + (dir / "c.svg").string() + " --out " +
                            (dir / "c.json").string(),
                        dir);
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(egr::read_text_file(dir / "c.json"));
  CHECK(j["sense"] == "min-lambdan");
  CHECK(j["d"] == 1);
  CHECK(std::abs(j["total_variance"].get<double>() - 2.0) <= 1e-5);
  const std::string svg = egr::read_text_file(dir / "c.svg");
  CHECK(count_occurrences(svg, "<circle") == 8);
  // every vertex sits at the same vertical position
  std::string first_cy;
  size_t pos = 0;
  while ((pos = svg.find("cy=\"", pos)) != std::string::npos) {
    pos += 4;
    const std::string cy = svg.substr(pos, svg.find('"', pos) - pos);
    if (first_cy.empty()) first_cy = cy;
    CHECK(cy == first_cy);
  }
  fs::remove_all(dir);
}

TEST_CASE("three-dimensional realizations render through the fixed projection") {
  fs::path dir = make_temp_dir();
  RunResult r = run_cli("solve-max --family cube --svg " + (dir / "c3.svg").string() + " --dims 3",
                        dir);
  REQUIRE(r.exit_code == 0);
  const std::string svg = egr::read_text_file(dir / "c3.svg");
  CHECK(count_occurrences(svg, "<circle") == 8);
  CHECK(count_occurrences(svg, "<line") == 12);
  CHECK(svg.find("projection") == std::string::npos);  // d == dims, no annotation
  fs::remove_all(dir);
}

TEST_CASE("CLI error paths exit with code 1") {
  fs::path dir = make_temp_dir();
  CHECK(run_cli("solve-max --graph /nonexistent/graph.json", dir).exit_code == 1);
  CHECK(run_cli("solve-max --family before_camels", dir).exit_code == 1);
  CHECK(run_cli("solve-max --family cycle --n 6 --phi-list 1,2", dir).exit_code == 1);
  // no graph source at all
  CHECK(run_cli("solve-max", dir).exit_code == 1);
  fs::remove_all(dir);
}

TEST_CASE("solve honours phi overrides") {
  fs::path dir = make_temp_dir();
  RunResult r = run_cli("solve-max --family cycle --n 3 --phi-list 0.5,1,1 --out " +
                            (dir / "t.json").string(),
                        dir);
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(egr::read_text_file(dir / "t.json"));
  CHECK(std::abs(j["lambda_star"].get<double>() - 1.2) <= 1e-6);  // 3 / (a + 2), a = 1/2

  // same spec through a phi file
  egr::write_text_file(dir / "phi.json", R"({"phi": [0.5, 1, 1]})");
  RunResult rf = run_cli("solve-max --family cycle --n 3 --phi " + (dir / "phi.json").string() +
                             " --out " + (dir / "tf.json").string(),
                         dir);
  REQUIRE(rf.exit_code == 0);
  CHECK(egr::read_text_file(dir / "t.json") == egr::read_text_file(dir / "tf.json"));

  // uniform squared length c scales the unit-distance answer by 1/c
  RunResult ru = run_cli("solve-max --family cycle --n 3 --phi-uniform 4 --out " +
                             (dir / "tu.json").string(),
                         dir);
  REQUIRE(ru.exit_code == 0);
  nlohmann::json ju = nlohmann::json::parse(egr::read_text_file(dir / "tu.json"));
  CHECK(std::abs(ju["lambda_star"].get<double>() - 0.25) <= 1e-6);
  fs::remove_all(dir);
}
