#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "glvortex/config.hpp"
#include "glvortex/experiment.hpp"
#include "glvortex/render.hpp"

using namespace glvortex;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("glvortex_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config(const std::string& name) {
  ExperimentConfig c;
  c.h = 1.0 / 16;
  c.eps_ladder = {0.3, 0.2};
  c.out_dir = scratch(name).string();
  return c;
}

}  // namespace

TEST_CASE("toml subset") {
  const auto doc = parse_toml(R"(# comment
name = "a \"quoted\" string"
n = 3
x = -1.5e-3
flag = true
list = [1, 2.5,
        3]
[section.inner]
key = 'literal'
)");
  CHECK(doc["name"] == "a \"quoted\" string");
  CHECK(doc["n"] == 3);
  CHECK(doc["x"].get<double>() == -1.5e-3);
  CHECK(doc["flag"] == true);
  CHECK(doc["list"].size() == 3);
  CHECK(doc["section"]["inner"]["key"] == "literal");

  CHECK(parse_toml(dump_toml(doc)) == doc);
  try {
    parse_toml("a = 1\nb = [1, 2\n");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Config);
  }
  CHECK_THROWS_AS(parse_toml("a = 1\na = 2\n"), Error);
  CHECK(parse_config_text(R"({"a": 1})")["a"] == 1);
}

TEST_CASE("experiment config round trip") {
  ExperimentConfig c;
  c.h = 1.0 / 3.0;
  c.shape = Shape::annulus(0.25, 1.0);
  c.eps_ladder = {0.3, 0.1 / 3.0};
  c.analysis.rho_ladder = {0.7, 0.3, 0.1};
  c.seed = 42;
  const auto once = config_from_json(parse_toml(experiment_to_toml(c)));
  CHECK(config_to_json(once) == config_to_json(c));
  const auto twice = config_from_json(parse_toml(experiment_to_toml(once)));
  CHECK(experiment_to_toml(twice) == experiment_to_toml(c));

  auto doc = config_to_json(c);
  doc["solver"]["bogus"] = 1;
  CHECK_THROWS_AS(config_from_json(doc), Error);
  doc = config_to_json(c);
  doc["target"]["name"] = "torus";
  CHECK_THROWS_AS(config_from_json(doc), Error);
  doc = config_to_json(c);
  doc["solver"]["eps_ladder"] = {0.1, 0.2};
  CHECK_THROWS_AS(config_from_json(doc), Error);

  const auto shipped = load_experiment(GLVORTEX_SOURCE_DIR "/configs/bbh-disk-d1.toml");
  CHECK(shipped.degree == 1);
  CHECK(shipped.eps_ladder.size() == 4);
}

TEST_CASE("minimal config gives a zero-energy checkpoint") {
  auto c = small_config("zero");
  c.degree = 0;
  REQUIRE(run_solve(c) == 0);
  const auto energies = slurp(fs::path(c.out_dir) / "energies.csv");
  CHECK(energies.rfind("# units", 0) == 0);
  std::istringstream in(energies);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cols.push_back(cell);
    REQUIRE(cols.size() == 7);
    CHECK(std::stod(cols[3]) == doctest::Approx(0.0).scale(1.0));
    ++rows;
  }
  CHECK(rows == 2);
  const auto analysis = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "analysis_eps0.2.json"));
  CHECK(analysis["energy"]["total"].get<double>() == doctest::Approx(0.0).scale(1.0));
  CHECK(analysis["census"]["vortices"].empty());
  fs::remove_all(c.out_dir);
}

TEST_CASE("runs are deterministic") {
  auto a = small_config("det_a");
  auto b = small_config("det_b");
  REQUIRE(run_solve(a) == 0);
  REQUIRE(run_solve(b) == 0);
  for (const char* f : {"energies.csv", "field_eps0.2.csv", "field_eps0.3.csv"}) {
    CHECK(slurp(fs::path(a.out_dir) / f) == slurp(fs::path(b.out_dir) / f));
  }
  auto s1 = small_config("sweep1");
  auto s4 = small_config("sweep4");
  REQUIRE(run_sweep(s1, 1) == 0);
  REQUIRE(run_sweep(s4, 4) == 0);
  CHECK(slurp(fs::path(s1.out_dir) / "sweep.csv") == slurp(fs::path(s4.out_dir) / "sweep.csv"));

  // Analyse and render a checkpoint.
  REQUIRE(run_analyze(a, (fs::path(a.out_dir) / "field_eps0.2.csv").string(), 0.2) == 0);
  CHECK(fs::exists(fs::path(a.out_dir) / "analysis.json"));
  REQUIRE(run_render(a, (fs::path(a.out_dir) / "field_eps0.2.csv").string()) == 0);
  CHECK(slurp(fs::path(a.out_dir) / "render.svg").find("<svg") != std::string::npos);
  for (const auto& c : {a, b, s1, s4}) fs::remove_all(c.out_dir);
}

TEST_CASE("cell and renorm runs write their tables") {
  auto c = small_config("cell");
  c.analysis.cell_radii = {2, 4};
  c.analysis.cell_resolution = 16;
  REQUIRE(run_cell(c) == 0);
  const auto cell = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "cell.json"));
  CHECK(cell["Q_hat"].get<double>() > 0.0);
  CHECK(fs::exists(fs::path(c.out_dir) / "cell_2d.csv"));

  c.h = 1.0 / 32;
  c.eps_ladder = {0.2, 0.1};
  c.analysis.rho_ladder = {0.8, 0.5, 0.2};
  REQUIRE(run_renorm(c) == 0);
  const auto r = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "renorm.json"));
  CHECK(r["singularities"].size() == 1);
  CHECK(slurp(fs::path(c.out_dir) / "expansion.csv").find("epsilon,measured,predicted,gap") !=
        std::string::npos);
  fs::remove_all(c.out_dir);
}

TEST_CASE("svg render") {
  auto dom = std::make_shared<const Domain>(Domain::build(Shape::disk(1.0), 1.0 / 128));
  Field vac(dom, 2);
  for (std::size_t p = 0; p < dom->size(); ++p)
    if (dom->kind(p) != NodeKind::Exterior) vac.set(p, {1.0, 0.0, 0.0});
  VortexCensus empty;
  const auto svg = render_svg(vac, Target::circle(), &empty, {});
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(svg.find("<circle") == std::string::npos);
  std::size_t lines = 0;
  for (std::size_t at = svg.find("<line"); at != std::string::npos; at = svg.find("<line", at + 1)) ++lines;
  CHECK(lines <= 64 * 64);
  CHECK(lines > 100);

  VortexCensus one;
  one.vortices.push_back({{0.0, 0.0}, 1, false});
  one.total = 1;
  const auto marked = render_svg(vac, Target::circle(), &one, {{{0.0, 0.0}, 0.1, 1, 0.0}});
  CHECK(marked.find("d=1") != std::string::npos);
  CHECK(marked.find("+1") != std::string::npos);

  Field cross(dom, 2);
  for (std::size_t p = 0; p < dom->size(); ++p)
    if (dom->kind(p) != NodeKind::Exterior) cross.set(p, {0.25, 0.0, 0.0});
  const auto c4 = render_svg(cross, Target::cross_field(4), nullptr, {});
  std::size_t c4_lines = 0;
  for (std::size_t at = c4.find("<line"); at != std::string::npos; at = c4.find("<line", at + 1)) ++c4_lines;
  CHECK(c4_lines == 4 * lines);
}
