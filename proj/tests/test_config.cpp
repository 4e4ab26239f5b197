// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wharray/config.hpp"
#include "wharray/error.hpp"

using namespace wharray;
constexpr double pi = std::numbers::pi;

namespace
{

void check_origin(const ArraySpec &a, double x, double y)
{
  const Point o = array_origin(a);
  CHECK(o.x == doctest::Approx(x).epsilon(1e-14).scale(1.0));
  CHECK(o.y == doctest::Approx(y).epsilon(1e-14).scale(1.0));
}

} // namespace

TEST_CASE("presets")
{
  for (const auto &name : preset_names())
  {
    const RunConfig c = preset_config(name);
    CAPTURE(name);
    CHECK(c.preset == name);
    CHECK(validate(c.problem, 200).empty());
    CHECK(!preset_description(name).empty());
    for (const auto &a : c.problem.arrays)
      CHECK(a.a == 0.001);
    CHECK(c.problem.theta_i == pi / 4);
    CHECK(c.problem.k == (name == "lattice-pass" ? 7.5 * pi : 5 * pi));
  }
  CHECK_THROWS_AS(preset_config("wedgie"), ValidationError);

  const RunConfig w = preset_config("wedge");
  REQUIRE(w.problem.arrays.size() == 2);
  CHECK(w.problem.arrays[0].alpha == 5 * pi / 6);
  CHECK(w.problem.arrays[1].alpha == -5 * pi / 6);
  check_origin(w.problem.arrays[0], 0.0, 0.0);
  check_origin(w.problem.arrays[1], 0.1 * std::cos(5 * pi / 6), -0.1 * std::sin(5 * pi / 6));

  const RunConfig f = preset_config("faraday-cage");
  REQUIRE(f.problem.arrays.size() == 12);
  for (int j = 1; j <= 12; ++j)
  {
    const double ang = j <= 7 ? (j - 1) * pi / 6 : (j - 13) * pi / 6;
    const ArraySpec &a = f.problem.arrays[j - 1];
    CHECK(a.s == 0.05);
    CHECK(std::remainder(a.alpha - ang, 2 * pi) == doctest::Approx(0.0).scale(1.0));
    check_origin(a, 0.1 * std::cos(ang), 0.1 * std::sin(ang));
  }
  REQUIRE(f.spl_region.has_value());
  CHECK(std::hypot(f.spl_region->cx, f.spl_region->cy) < 1e-12);

  // Six horizontal lines y = 0, -0.1, ..., each split into a right and a left half.
  const RunConfig l = preset_config("lattice-stop");
  REQUIRE(l.problem.arrays.size() == 12);
  for (int i = 0; i < 6; ++i)
  {
    const ArraySpec &r = l.problem.arrays[2 * i], &left = l.problem.arrays[2 * i + 1];
    CHECK(std::cos(r.alpha) == doctest::Approx(1.0));
    CHECK(std::cos(left.alpha) == doctest::Approx(-1.0));
    check_origin(r, 0.0, -0.1 * i);
    check_origin(left, -0.1, -0.1 * i);
  }
}

TEST_CASE("angle strings")
{
  CHECK(parse_angle("pi") == pi);
  CHECK(parse_angle("-pi") == -pi);
  CHECK(parse_angle("5pi/6") == 5 * pi / 6);
  CHECK(parse_angle("-5*pi/6") == -5 * pi / 6);
  CHECK(parse_angle("2.5pi") == 2.5 * pi);
  CHECK(parse_angle("pi/4") == pi / 4);
  CHECK(parse_angle("3/4") == 0.75);
  CHECK(parse_angle(" 0.3 ") == 0.3);
  CHECK(parse_angle("1e-3") == 1e-3);
  for (const char *bad : {"", "pie", "pi/0", "5/pi", "x", "1/2/3"})
  {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_angle(bad), ValidationError);
  }
}

TEST_CASE("round trip")
{
  for (const auto &name : preset_names())
  {
    CAPTURE(name);
    const RunConfig c = preset_config(name);
    CHECK(parse_config(write_config(c)) == c);
  }
  RunConfig c = preset_config("wedge-gaps");
  c.solver.compute_energy = true;
  c.solver.edge_window = 7;
  c.spl_region = Disk{0.1, -0.2, 0.03};
  c.output.field = "f.csv";
  c.grid.nx = 17;
  CHECK(parse_config(write_config(c)) == c);
}

TEST_CASE("config documents")
{
  const RunConfig c = parse_config(R"({
    "preset": "wedge",
    "k": "15pi",
    "theta_i": "pi/2",
    "truncation": 12,
    "arrays": {"2": {"alpha": "-2pi/3"}},
    "solver": {"energy": true},
    "field": {"x": [-0.5, 0.5], "nx": 11, "spl_region": [0, 0, "1/20"]}
  })");
  CHECK(c.problem.k == 15 * pi);
  CHECK(c.problem.theta_i == pi / 2);
  CHECK(c.problem.n_trunc == 12);
  CHECK(c.problem.arrays[0].alpha == 5 * pi / 6);
  CHECK(c.problem.arrays[1].alpha == -2 * pi / 3);
  CHECK(c.problem.arrays[1].theta0 == -5 * pi / 6);
  CHECK(c.solver.compute_energy);
  CHECK(c.grid.x_min == -0.5);
  CHECK(c.grid.nx == 11);
  CHECK(c.grid.ny == 201);
  REQUIRE(c.spl_region.has_value());
  CHECK(c.spl_region->r == 0.05);

  const RunConfig d = parse_config(R"({"k": 10, "arrays": [{"s": 0.2, "a": 0.002}]})");
  CHECK(d.problem.arrays.size() == 1);
  CHECK(d.problem.arrays[0].s == 0.2);

  auto message = [](const char *text) {
    try
    {
      parse_config(text);
    }
    catch (const ValidationError &e)
    {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("{\n\"k\": 5,\n\"arrays\": [,]\n}").find("line 3") != std::string::npos);
  CHECK(message(R"({"k": 5, "arays": []})").find("arays") != std::string::npos);
  CHECK(message(R"({"preset": "wedge", "arrays": {"3": {"s": 1}}})").find("arrays.3") !=
        std::string::npos);
  CHECK(message(R"({"preset": "wedge", "solver": {"p_tol": "tiny"}})").find("solver.p_tol") !=
        std::string::npos);
  CHECK(message(R"({"preset": "wedge", "k": -1})").find("'k'") != std::string::npos);
  CHECK(message(R"({"preset": "wedge", "truncation": 1.5})").find("truncation") !=
        std::string::npos);
  CHECK(message(R"({"k": 5})").find("arrays") != std::string::npos);
  CHECK(message("[1, 2]").find("top level") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ValidationError);
}
