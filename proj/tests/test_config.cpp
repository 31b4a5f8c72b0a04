#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tclab/config.hpp"
#include "tclab/experiments.hpp"

using namespace tclab;

TEST_CASE("every default config round-trips") {
  for (const auto& name : experiment_names()) {
    const ExperimentConfig c = default_config(name);
    CHECK_NOTHROW(validate(c));
    const std::string text = emit_config(c);
    const ExperimentConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(emit_config(back) == text);
  }
}

TEST_CASE("awkward values round-trip") {
  ExperimentConfig c = default_config("evolve");
  c.nu = {0.1, 1.0 / 3.0, 1e-300, 123456789.125};
  c.B = {-2.5};
  c.seed = (std::int64_t{1} << 62) + 7;
  c.out = "dir with spaces/\"quoted\"";
  CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("absent keys take the experiment defaults") {
  const auto c = parse_config("experiment = \"gp-check\"\n");
  CHECK(c == default_config("gp-check"));
  const auto d = parse_config("[params]\nnu = [1e-2]\n", "hardy");
  CHECK(d.experiment == "hardy");
  CHECK(d.nu == std::vector<double>{1e-2});
}

TEST_CASE("field-level rejection") {
  auto field_of = [](const std::string& text) {
    try {
      (void)parse_config(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  CHECK(field_of("[params]\nnu = []\n") == "params.nu");
  CHECK(field_of("[params]\nk = []\n") == "params.k");
  CHECK(field_of("[params]\nnu = [-1.0]\n") == "params.nu");
  CHECK(field_of("[params]\nnu = \"x\"\n") == "params.nu");
  CHECK(field_of("[params]\nbogus = 1\n") == "params.bogus");
  CHECK(field_of("[nowhere]\nx = 1\n") == "nowhere");
  CHECK(field_of("experiment = \"fly\"\n") == "experiment");
  CHECK(field_of("[grid]\nr_min = 5.0\nr_max = 2.0\n") == "grid.r_max");
  CHECK(field_of("[weights]\nphi = \"kappa*q\"\n") == "weights.phi");
  CHECK(field_of("[counterexample]\nx0 = 9.0\n") == "counterexample.x0");
  CHECK(field_of("jobs = 0\n") == "jobs");
  CHECK(field_of("nu = = 1\n") == "<toml>");
  CHECK_THROWS_AS(parse_config("experiment = \"hardy\"\n", "evolve"), ConfigError);
}

TEST_CASE("profile parsing") {
  const auto phi = parse_profile("kappa*r^-2", 0.5);
  CHECK(phi(2.0) == doctest::Approx(0.125));
  CHECK(parse_profile("r^-1", 1.0)(4.0) == doctest::Approx(0.25));
  CHECK(parse_profile("x", 1.0)(3.0) == 3.0);
  CHECK(parse_profile("1", 7.0)(3.0) == 1.0);
  CHECK(parse_profile("2*r*r", 1.0)(3.0) == doctest::Approx(18.0));
  CHECK_THROWS_AS(parse_profile("", 1.0), InvalidArgument);
  CHECK_THROWS_AS(parse_profile("r^", 1.0), InvalidArgument);
}

TEST_CASE("rejection happens before any computation") {
  ExperimentConfig c = default_config("evolve");
  c.nu.clear();
  CHECK_THROWS_AS(run(c), ConfigError);
}

TEST_CASE("dyadic-check run produces a passing verdict") {
  const auto b = run(default_config("dyadic-check"));
  REQUIRE(b.verdicts.size() == 1);
  CHECK(b.verdicts[0].id == "AC9.partition");
  CHECK(b.verdicts[0].passed);
  CHECK(b.all_passed());
}

TEST_CASE("pseudo-bound sweep: one row per tuple plus a slope verdict") {
  ExperimentConfig c = default_config("pseudo-bound");
  c.op = "couette";
  c.nu = {1e-2, 1e-3, 1e-4};
  c.k = {1, 2};
  c.B = {0.0};
  c.r_min = 0.0;
  c.r_max = 1.0;
  c.n_interior = 511;
  c.w_in = c.w_out = "unit";
  c.n_scan = 21;
  const auto b = run(c);
  REQUIRE(!b.tables.empty());
  CHECK(b.tables[0].rows.size() == 6);
  for (const auto& r : b.tables[0].rows) CHECK(r.size() == b.tables[0].header.size());
  CHECK(b.verdicts.at(0).id == "AC3.slope");
}

TEST_CASE("tables are deterministic and independent of the job count") {
  ExperimentConfig c = default_config("sharpness");
  c.jobs = 1;
  const auto a = run(c);
  c.jobs = 3;
  const auto b = run(c);
  REQUIRE(a.tables.size() == b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) CHECK(a.tables[i].csv() == b.tables[i].csv());
}

TEST_CASE("a failing tuple is recorded and the sweep continues") {
  ExperimentConfig c = default_config("thm1-weights");
  c.nu = {1e-1, 1e-6};  // the first violates the smallness hypothesis
  c.q = {0};
  c.n_interior = 499;
  c.t_end = 50.0;
  const auto b = run(c);
  CHECK(b.tuple_failures.size() == 1);
  CHECK(b.tuple_failures[0].find("tuple 0") != std::string::npos);
  CHECK(b.tables.at(0).rows.size() == 1);
  CHECK_FALSE(b.all_passed());
}

TEST_CASE("report bundle files") {
  const auto dir = std::filesystem::temp_directory_path() / "tclab-test-report";
  std::filesystem::remove_all(dir);
  const auto b = run(default_config("dyadic-check"));
  b.write(dir);
  CHECK(std::filesystem::exists(dir / "manifest.txt"));
  CHECK(std::filesystem::exists(dir / "verdicts.csv"));
  CHECK(std::filesystem::exists(dir / "dyadic.csv"));
  std::ifstream m(dir / "manifest.txt");
  std::string first;
  std::getline(m, first);
  CHECK(first == "experiment: dyadic-check");
  std::filesystem::remove_all(dir);
}

TEST_CASE("format_number is shortest round-trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-5) == "1e-05");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
