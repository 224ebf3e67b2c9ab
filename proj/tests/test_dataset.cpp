#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "qtube/errors.hpp"

using namespace qtube;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_csv(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("csv parse") {
  const Dataset d = parse_csv("x1,y\n0,1\n1,3\n2,5\n");
  CHECK(d.size() == 3);
  CHECK(d.dim() == 1);
  CHECK(d[2].x[0] == 2.0);
  CHECK(d[2].y == 5.0);
  const Dataset d2 = parse_csv("x1,x2,y\r\n1, 2 ,3\r\n\r\n4,5,6\r\n");
  CHECK(d2.size() == 2);
  CHECK(d2.dim() == 2);
  CHECK(d2[1].x[1] == 5.0);
}

TEST_CASE("csv errors carry locations") {
  CHECK(error_of("x1,y\n") == "no data rows");
  const std::string bad = error_of("x1,y\nabc,1\n");
  CHECK(bad.find("row 2") != std::string::npos);
  CHECK(bad.find("abc") != std::string::npos);
  CHECK(error_of("x1,y\n1,2\n3\n").find("row 3") != std::string::npos);
  CHECK(error_of("a,b\n1,2\n").find("header") != std::string::npos);
  CHECK(error_of("x1,y\n1,nan\n").find("row 2") != std::string::npos);
  CHECK(error_of("").find("header") != std::string::npos);
}

TEST_CASE("csv files") {
  const auto dir = std::filesystem::temp_directory_path() / "qtube_test_dataset";
  std::filesystem::create_directories(dir);
  const Dataset d = generate_synthetic(GeneratorSpec::parse("hetero"), 50, 3);
  write_csv(d, dir / "d.csv");
  CHECK(load_csv(dir / "d.csv") == d);
  CHECK(parse_csv(format_csv(d)) == d);
  std::ofstream(dir / "bad.csv") << "x1,y\n1,2\nabc,4\n";
  try {
    load_csv(dir / "bad.csv");
    FAIL("expected an error");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.csv") != std::string::npos);
    CHECK(msg.find("row 3") != std::string::npos);
  }
  CHECK_THROWS_AS(load_csv(dir / "missing.csv"), DataError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("dataset invariants") {
  CHECK_THROWS_AS(Dataset(std::vector<Sample>{}), DataError);
  CHECK_THROWS_AS(Dataset(std::vector<Sample>{{{1.0}, 1.0}, {{1.0, 2.0}, 1.0}}), DataError);
  CHECK_THROWS_AS(Dataset(std::vector<Sample>{{{INFINITY}, 1.0}}), DataError);
  const Dataset d = fixtures::values({5, 6, 7});
  const std::vector<std::size_t> idx{2, 0};
  const Dataset s = d.subset(idx);
  CHECK(s.size() == 2);
  CHECK(s[0].y == 7.0);
  CHECK(d.responses() == std::vector<double>{5, 6, 7});
}

TEST_CASE("generators are deterministic") {
  const GeneratorSpec g = GeneratorSpec::parse("linear:w=2,u=0.25");
  CHECK(generate_synthetic(g, 5, 7) == generate_synthetic(g, 5, 7));
  CHECK_FALSE(generate_synthetic(g, 5, 7) == generate_synthetic(g, 5, 8));
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("noise-free linear data lies on the line") {
  const Dataset d = generate_synthetic(GeneratorSpec::parse("linear:slope=2,u=0"), 200, 1);
  for (const Sample& s : d.samples()) CHECK(s.y == 2.0 * s.x[0]);
}

TEST_CASE("independent pair is uncorrelated") {
  const Dataset d = generate_synthetic(GeneratorSpec::parse("independent"), 100000, 5);
  double mx = 0, my = 0;
  for (const Sample& s : d.samples()) {
    mx += s.x[0];
    my += s.y;
  }
  mx /= 1e5;
  my /= 1e5;
  double sxy = 0, sxx = 0, syy = 0;
  for (const Sample& s : d.samples()) {
    sxy += (s.x[0] - mx) * (s.y - my);
    sxx += (s.x[0] - mx) * (s.x[0] - mx);
    syy += (s.y - my) * (s.y - my);
  }
  CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 0.01);
}

TEST_CASE("generator supports") {
  const Dataset lin = generate_synthetic(GeneratorSpec::parse("linear:slope=2,u=0.25"), 5000, 2);
  for (const Sample& s : lin.samples()) {
    CHECK(s.x[0] >= 0.0);
    CHECK(s.x[0] < 1.0);
    CHECK(std::abs(s.y - 2.0 * s.x[0]) <= 0.25);
  }
  const GeneratorSpec hg = GeneratorSpec::parse("hetero:s0=0.1,s1=0.4");
  const Dataset het = generate_synthetic(hg, 5000, 2);
  for (const Sample& s : het.samples()) CHECK(std::abs(s.y - hg.slope * s.x[0]) <= 0.1 + 0.4 * s.x[0] + 1e-15);
  const Dataset disk = generate_synthetic(GeneratorSpec::parse("disk"), 5000, 2);
  for (const Sample& s : disk.samples()) CHECK(s.x[0] * s.x[0] + s.y * s.y <= 1.0);
}

TEST_CASE("generator spec parsing") {
  const GeneratorSpec g = GeneratorSpec::parse("hetero:s0=0.2,s1=0.3,slope=1");
  CHECK(g.kind == GeneratorKind::kHeteroscedastic);
  CHECK(g.s0 == 0.2);
  CHECK(GeneratorSpec::parse(g.to_string()).s1 == 0.3);
  CHECK_FALSE(GeneratorSpec::parse("gauss").bounded_noise());
  CHECK(GeneratorSpec::parse("square").planar_only());
  CHECK_THROWS_AS(GeneratorSpec::parse("cauchy"), std::invalid_argument);
  CHECK_THROWS_AS(GeneratorSpec::parse("linear:zz=1"), std::invalid_argument);
  CHECK_THROWS_AS(GeneratorSpec::parse("linear:u"), std::invalid_argument);
  CHECK_THROWS_AS(GeneratorSpec::parse("linear:u=-1"), std::invalid_argument);
}
