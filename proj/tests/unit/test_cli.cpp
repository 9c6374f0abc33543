#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = levymass::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("LEVYMASS_TEST_TMP");
  const fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "levymass_cli";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells{""};
    for (char ch : line) {
      if (ch == ',') {
        cells.emplace_back();
      } else {
        cells.back() += ch;
      }
    }
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("spectrum example produces masses and coefficients") {
  const auto r = invoke({"spectrum", "--roots", "4", "9", "--lambda3", "1", "--m", "1"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc.at("masses") == json::array({1.0, 2.0, 3.0}));
  CHECK(doc.at("lambda") == json::array({-37.0, 50.0, -14.0, 1.0}));
  CHECK(doc.at("discriminant") == 25.0);
  CHECK(doc.at("meta").at("subcommand") == "spectrum");
  CHECK(doc.at("meta").contains("seed"));
  CHECK(doc.at("meta").at("config").at("--roots") == json::array({"4", "9"}));
}

TEST_CASE("exponent example with quadrature check") {
  const auto r = invoke({"exponent", "--m", "1", "--umax", "10", "--n", "64", "--check-quadrature"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 65);
  CHECK(rows[0] == std::vector<std::string>{"u", "eta_closed", "eta_quad", "abs_diff", "quad_error"});
  double worst = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) worst = std::max(worst, std::stod(rows[i][3]));
  CHECK(worst <= 1e-6);
  CHECK(r.out.rfind("# {", 0) == 0);
}

TEST_CASE("simulate is byte-identical across runs and replays") {
  const auto a = scratch("sim_a.csv");
  const auto b = scratch("sim_b.csv");
  const auto c = scratch("sim_c.csv");
  const std::vector<std::string> base{"simulate", "--m", "1", "--t", "1", "--paths", "1000", "--seed", "7"};
  auto with_out = [&](const fs::path& p) {
    auto v = base;
    v.insert(v.end(), {"--out", p.string()});
    return v;
  };
  REQUIRE(invoke(with_out(a)).code == 0);
  REQUIRE(invoke(with_out(b)).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  REQUIRE(invoke({"replay", "--from", a.string(), "--out", c.string()}).code == 0);
  CHECK(slurp(a) == slurp(c));

  auto other = base;
  other[8] = "8";
  CHECK(invoke(other).out != invoke(base).out);
  auto threaded = base;
  threaded.insert(threaded.end(), {"--threads", "2"});
  CHECK(csv_rows(invoke(threaded).out) == csv_rows(invoke(base).out));
}

TEST_CASE("every subcommand replays byte-for-byte from its echoed config") {
  const std::vector<std::vector<std::string>> runs{
      {"exponent", "--n", "8"},
      {"exponent", "--kind", "gaussian", "--beta", "0.5", "--format", "json"},
      {"density", "--dim", "3", "--n", "10", "--log"},
      {"evolve", "--grid", "64", "--steps", "4", "--every", "2", "--k0", "0.5"},
      {"transition", "--grid", "256", "--length", "32"},
      {"simulate", "--paths", "200", "--seed", "3", "--dump-paths"},
      {"spectrum", "--lambda", "-37", "50", "-14", "1", "--format", "csv"},
      {"propagator", "--roots", "4", "9", "--kind", "dirac", "--n", "11"},
      {"powercount"},
      {"selfenergy", "--cutoff-radius", "10"},
      {"poles", "--roots", "4", "9", "--A", "0.1", "--B", "0.05"},
      {"spectrum", "--roots", "4", "9", "--units", "hep", "--m", "938.272"},
  };
  int i = 0;
  for (const auto& args : runs) {
    CAPTURE(args[0]);
    const auto first = scratch("replay_src_" + std::to_string(i));
    const auto second = scratch("replay_dst_" + std::to_string(i));
    ++i;
    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", first.string()});
    const auto r = invoke(with_out);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    REQUIRE(invoke({"replay", "--from", first.string(), "--out", second.string()}).code == 0);
    CHECK(slurp(first) == slurp(second));
  }
}

TEST_CASE("csv and json carry the same table") {
  const auto csv = invoke({"powercount", "--format", "csv"});
  const auto js = invoke({"powercount"});
  REQUIRE(csv.code == 0);
  REQUIRE(js.code == 0);
  const auto doc = json::parse(js.out);
  const auto rows = csv_rows(csv.out);
  REQUIRE(rows.size() == doc.at("rows").size() + 1);
  CHECK(rows[0] == doc.at("columns").get<std::vector<std::string>>());
  CHECK(rows[4][4] == "");
  CHECK(doc.at("rows")[3][3] == true);
  CHECK(rows[1][4] == "A and B");
}

TEST_CASE("hep units apply only at the boundary") {
  const auto r = invoke({"spectrum", "--roots", "4", "9", "--units", "hep", "--m", "938.272"});
  REQUIRE(r.code == 0);
  const auto masses = json::parse(r.out).at("masses");
  CHECK(masses[0].get<double>() == doctest::Approx(938.272).epsilon(1e-14));
  CHECK(masses[2].get<double>() == doctest::Approx(3.0 * 938.272).epsilon(1e-14));
  // eta is dimensionless: u in MeV with m in MeV gives the natural-unit value.
  const auto a = csv_rows(invoke({"exponent", "--n", "4", "--units", "hep", "--m", "2", "--umax", "8"}).out);
  const auto b = csv_rows(invoke({"exponent", "--n", "4", "--m", "2", "--umax", "8"}).out);
  for (std::size_t k = 1; k < a.size(); ++k) {
    CHECK(std::stod(a[k][1]) == doctest::Approx(std::stod(b[k][1])).epsilon(1e-14));
  }
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == 64);
  CHECK(invoke({"bogus"}).code == 64);
  const auto unknown_flag = invoke({"exponent", "--bogus", "1"});
  CHECK(unknown_flag.code == 64);
  CHECK(unknown_flag.err.find("Usage") != std::string::npos);
  CHECK(invoke({"exponent", "--m", "abc"}).code == 64);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"exponent", "--m", "-1"}).code == 2);
  CHECK(invoke({"spectrum", "--roots", "4", "9", "--lambda3", "0"}).code == 2);
  CHECK(invoke({"spectrum"}).code == 2);
  CHECK(invoke({"selfenergy", "--roots", "4", "9"}).code == 2);
  CHECK(invoke({"transition", "--grid", "64", "--length", "8"}).code == 3);
  CHECK(invoke({"replay", "--from", "/nonexistent/file.csv"}).code == 2);
}

TEST_CASE("failed runs leave no files behind") {
  const auto target = scratch("should_not_exist.csv");
  const auto r = invoke({"transition", "--grid", "64", "--length", "8", "--out", target.string()});
  CHECK(r.code == 3);
  CHECK_FALSE(fs::exists(target));
  auto tmp = target;
  tmp += ".tmp";
  CHECK_FALSE(fs::exists(tmp));
}

TEST_CASE("default output directory from the environment") {
  const auto dir = scratch("envdir");
  ::setenv("LEVYMASS_OUTPUT_DIR", dir.string().c_str(), 1);
  const auto r = invoke({"powercount"});
  ::unsetenv("LEVYMASS_OUTPUT_DIR");
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(fs::exists(dir / "powercount.json"));
}
