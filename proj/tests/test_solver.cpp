// SPDX-License-Identifier: Apache-2.0

#include <boost/math/special_functions/hankel.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wharray/error.hpp"
#include "wharray/solver.hpp"

using namespace wharray;
constexpr double pi = std::numbers::pi;

namespace
{

cd h0(double x)
{
  return boost::math::cyl_hankel_1(0, x);
}

ProblemSpec wedge(int n)
{
  ProblemSpec p;
  p.k = 5 * pi;
  p.theta_i = pi / 4;
  p.n_trunc = n;
  p.arrays = {{0.1, 0.001, 5 * pi / 6, 0.0, 0.0}, {0.1, 0.001, -5 * pi / 6, 0.1, -5 * pi / 6}};
  return p;
}

ProblemSpec single(int n, double alpha = 0.3)
{
  ProblemSpec p;
  p.k = 5 * pi;
  p.theta_i = pi / 4;
  p.n_trunc = n;
  p.arrays = {{0.1, 0.001, alpha, 0.0, 0.0}};
  return p;
}

// Position straight from the polar parameters, without the library.
std::pair<double, double> pos(const ArraySpec &a, int n)
{
  return {a.r0 * std::cos(a.theta0) + n * a.s * std::cos(a.alpha),
          a.r0 * std::sin(a.theta0) + n * a.s * std::sin(a.alpha)};
}

double dist(const ArraySpec &a, int m, const ArraySpec &b, int n)
{
  const auto [x1, y1] = pos(a, m);
  const auto [x2, y2] = pos(b, n);
  return std::hypot(x1 - x2, y1 - y2);
}

double max_rel(const ScatteringSolution &a, const ScatteringSolution &b)
{
  double worst = 0.0;
  for (std::size_t j = 0; j < a.coeffs.size(); ++j)
    for (Eigen::Index m = 0; m < a.coeffs[j].size(); ++m)
      worst = std::max(worst, std::abs(a.coeffs[j][m] - b.coeffs[j][m]) /
                                  std::abs(b.coeffs[j][m]));
  return worst;
}

// Dense solve of the truncated point-scatterer system, assembled independently.
std::vector<Eigen::VectorXcd> dense_foldy(const ProblemSpec &p)
{
  const int n = p.n_trunc, J = p.num_arrays(), dim = J * (n + 1);
  Eigen::MatrixXcd a(dim, dim);
  Eigen::VectorXcd rhs(dim);
  for (int j = 0; j < J; ++j)
    for (int m = 0; m <= n; ++m)
    {
      const auto [x, y] = pos(p.arrays[j], m);
      rhs[j * (n + 1) + m] =
          -std::exp(cd(0, -p.k * (x * std::cos(p.theta_i) + y * std::sin(p.theta_i))));
      for (int l = 0; l < J; ++l)
        for (int q = 0; q <= n; ++q)
          a(j * (n + 1) + m, l * (n + 1) + q) =
              (j == l && m == q) ? h0(p.k * p.arrays[j].a) : h0(p.k * dist(p.arrays[j], m, p.arrays[l], q));
    }
  const Eigen::VectorXcd x = a.partialPivLu().solve(rhs);
  std::vector<Eigen::VectorXcd> out;
  for (int j = 0; j < J; ++j)
    out.push_back(x.segment(j * (n + 1), n + 1));
  return out;
}

} // namespace

TEST_CASE("driving vector")
{
  const ProblemSpec p = wedge(80);
  const KernelSet ks = factorize_arrays(p, 80);
  for (int j = 0; j < 2; ++j)
  {
    const KernelData &kd = *ks[j];
    const Eigen::VectorXcd a0 = driving_vector(kd, p, j, 80);
    const cd z = std::exp(cd(0, p.k * 0.1 * std::cos(p.arrays[j].alpha - p.theta_i)));
    const cd km = kminus_eval(kd, z);
    const auto [x, y] = pos(p.arrays[j], 0);
    const cd ph = std::exp(cd(0, -p.k * (x * std::cos(p.theta_i) + y * std::sin(p.theta_i))));
    CHECK(std::abs(a0[0] + ph * kd.lambda[0] / km) < 1e-13);
    for (int m = 1; m <= 80; ++m)
    {
      const cd rec = a0[m - 1] / z - ph / km * kd.lambda[m];
      CHECK(std::abs(a0[m] - rec) < 1e-12 * std::abs(a0[m]) + 1e-14);
    }
    if (j == 0)
      CHECK(std::abs(a0[0] + 1.0 / (kd.k0 * km)) < 1e-12);
  }
}

TEST_CASE("single array reduces to the driving vector")
{
  const auto r = solve(single(100));
  const Eigen::VectorXcd a0 = driving_vector(*r.kernels[0], single(100), 0, 100);
  CHECK((r.solution.coeffs[0] - a0).norm() <= 1e-12 * a0.norm());
  CHECK(r.solution.method == "block-solve");
}

TEST_CASE("mbar blocks")
{
  const ProblemSpec p = wedge(20);
  const int rows = 21, cols = 21, np = 40;

  // Delta sequence picks out the plain Hankel table.
  std::vector<cd> delta(np + 1, 0.0);
  delta[0] = 1.0;
  const Eigen::MatrixXcd d = mbar_block(delta, p, 0, 1, rows, cols, np);
  for (int n = 0; n < rows; n += 5)
    for (int q = 0; q < cols; q += 4)
      CHECK(std::abs(d(n, q) - h0(p.k * dist(p.arrays[0], n, p.arrays[1], q))) < 1e-12);

  // Wedge distances follow the closed form s (m^2 + (n+1)^2 - 2m(n+1) cos 2alpha)^{1/2}.
  const double c2a = std::cos(2 * p.arrays[0].alpha);
  for (int m = 0; m < 30; m += 7)
    for (int n = 0; n < 30; n += 5)
      CHECK(pair_distance(p, 0, m, 1, n) ==
            doctest::Approx(0.1 * std::sqrt(m * m + (n + 1.0) * (n + 1) - 2.0 * m * (n + 1) * c2a))
                .epsilon(1e-14));

  const KernelSet ks = factorize_arrays(p, 2 * np);
  const Eigen::MatrixXcd m12 = mbar_block(ks[0]->lambda, p, 0, 1, rows, cols, np);

  // Both arrays starting one spacing from the apex are mirror images, so both orderings
  // of the block coincide.
  ProblemSpec mirror = p;
  mirror.arrays[0].r0 = 0.1;
  mirror.arrays[0].theta0 = 5 * pi / 6;
  const Eigen::MatrixXcd s12 = mbar_block(ks[0]->lambda, mirror, 0, 1, rows, cols, np);
  const Eigen::MatrixXcd s21 = mbar_block(ks[1]->lambda, mirror, 1, 0, rows, cols, np);
  CHECK((s12 - s21).cwiseAbs().maxCoeff() < 1e-12 * s12.cwiseAbs().maxCoeff());

  // Entry (0,0) as a plain scalar sum.
  cd acc = 0.0;
  for (int q = np; q >= 0; --q)
    acc += ks[0]->lambda[q] * h0(p.k * dist(p.arrays[0], q, p.arrays[1], 0));
  CHECK(std::abs(m12(0, 0) - acc) < 1e-12 * std::abs(acc));
}

TEST_CASE("m block equals the quadruple sum")
{
  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  const ProblemSpec p = wedge(8);
  const int n = 8, np = 12;
  std::vector<cd> lam(np + n + 1);
  for (auto &v : lam)
    v = cd(g(rng), g(rng));
  const Eigen::MatrixXcd mb = mbar_block(lam, p, 1, 0, n + 1, n + 1, np);
  const Eigen::MatrixXcd m = m_block(lam, mb);

  Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int r = 0; r <= n; ++r)
    for (int q = 0; q <= n; ++q)
      for (int i = 0; i <= r; ++i)
        for (int pp = 0; pp <= np; ++pp)
          ref(r, q) += lam[r - i] * lam[pp] * h0(p.k * dist(p.arrays[1], pp + i, p.arrays[0], q));
  CHECK((m - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());

  std::vector<cd> unit(n + 1, 0.0);
  unit[0] = 1.0;
  CHECK((m_block(unit, mb) - mb).norm() == 0.0);
  CHECK((m.row(0) - lam[0] * mb.row(0)).norm() < 1e-14 * mb.row(0).norm() * std::abs(lam[0]));
}

TEST_CASE("solve paths agree")
{
  const ProblemSpec p = wedge(60);
  SolverOptions opt;
  opt.keep_mbar = true;
  const auto r = solve(p, opt);
  const auto two = two_array_solve(r.system);
  const auto swp = two_array_solve(r.system, true);
  CHECK(max_rel(two, r.solution) < 1e-10);
  CHECK(max_rel(swp, r.solution) < 1e-10);

  const auto neu = neumann_iterate(r.system, 400);
  REQUIRE(neu.spectral_radius < 1.0);
  CHECK(neu.converged);
  CHECK(max_rel(neu.iterates.back(), r.solution) < 1e-8);
  const Eigen::VectorXcd first = r.system.a0[0] - r.system.block(0, 1) * r.system.a0[1];
  CHECK((neu.iterates[0].coeffs[0] - first).norm() == 0.0);

  // Error ratio between successive iterates approaches the spectral radius.
  std::vector<double> err;
  for (const auto &it : neu.iterates)
    err.push_back((it.coeffs[0] - r.solution.coeffs[0]).norm());
  REQUIRE(err.size() > 6);
  for (int t = 3; t < 6; ++t)
    CHECK(err[t + 1] / err[t] == doctest::Approx(neu.spectral_radius).epsilon(0.1));

  // Scaled coupling forces divergence.
  BlockSystem big = r.system;
  const double scale = 2.0 / std::sqrt(neu.spectral_radius);
  big.m[1] *= scale;
  big.m[2] *= scale;
  CHECK_THROWS_AS(neumann_iterate(big, 200), ConvergenceError);

  // Zero coupling leaves the driving vectors.
  BlockSystem zero = r.system;
  zero.m[1].setZero();
  zero.m[2].setZero();
  const auto z = two_array_solve(zero);
  CHECK((z.coeffs[0] - zero.a0[0]).norm() == 0.0);
  CHECK((z.coeffs[1] - zero.a0[1]).norm() == 0.0);

  // Doubling the incident amplitude doubles every coefficient.
  BlockSystem twice = r.system;
  for (auto &v : twice.a0)
    v *= 2.0;
  const auto s2 = assemble_and_solve(twice);
  for (int j = 0; j < 2; ++j)
    CHECK((s2.coeffs[j] - 2.0 * r.solution.coeffs[j]).norm() <
          1e-12 * r.solution.coeffs[j].norm());
}

TEST_CASE("foldy residual")
{
  ProblemSpec p = wedge(30);
  ScatteringSolution sol;
  sol.coeffs = dense_foldy(p);
  CHECK(foldy_residual(p, sol, 0) < 1e-10);

  const cd bump = 1e-3;
  sol.coeffs[0][10] += bump;
  const double r = foldy_residual(p, sol, 0);
  CHECK(r == doctest::Approx(std::abs(bump * h0(p.k * 0.001))).epsilon(1e-6));

  // WH, single array: interior residual falls as N grows.
  double prev = 1e9;
  for (int n : {100, 200, 400})
  {
    const auto res = solve(single(n));
    CHECK(res.solution.foldy_residual < prev);
    prev = res.solution.foldy_residual;
  }
}

TEST_CASE("energy residual")
{
  const double ka = 5 * pi * 0.001;
  const cd g = -1.0 / h0(ka);
  const double closed = std::norm(g) + g.real();
  CHECK(energy_residual_exact_foldy(ka) == doctest::Approx(closed).epsilon(1e-10));
  const double bound = std::pow(ka / std::log(ka), 2);

  SolverOptions opt;
  opt.compute_energy = true;
  for (const ProblemSpec &p : {single(200), wedge(200)})
  {
    const auto r = solve(p, opt);
    CHECK(r.solution.energy_residual <= 10 * bound);
    CHECK(r.solution.energy_residual == doctest::Approx(closed).epsilon(0.01));
  }

  // Smaller scatterers: bound and residual shrink together.
  ProblemSpec p = single(200);
  p.arrays[0].a = 0.0001;
  const auto r = solve(p, opt);
  const double ka2 = 5 * pi * 0.0001;
  const double bound2 = std::pow(ka2 / std::log(ka2), 2);
  CHECK(r.solution.energy_residual <= 10 * bound2);
  CHECK(r.solution.energy_residual ==
        doctest::Approx(energy_residual_exact_foldy(ka2)).epsilon(0.01));
  CHECK(bound2 < bound);
}

TEST_CASE("determinant identity")
{
  SolverOptions opt;
  opt.keep_mbar = true;
  for (int n : {8, 32, 64})
  {
    const auto r = solve(wedge(n), opt);
    const Diagnostics d = diagnostics(r.system);
    REQUIRE(d.pairs.size() == 2);
    for (const auto &pr : d.pairs)
      CHECK(std::abs(pr.identity_residual) < 1e-6);
    CHECK(d.condition >= 1.0);
    CHECK(d.condition < 1e3);
    CHECK(d.spectral_radius < 1.0);
  }
}

TEST_CASE("resonance")
{
  ProblemSpec p = single(20, pi / 4);
  CHECK_THROWS_AS(solve(p), ResonanceError);
  p = single(20, pi / 4 + pi);
  const auto r = solve(p);
  CHECK(!r.warnings.empty());
  CHECK(r.solution.coeffs[0].allFinite());
}
