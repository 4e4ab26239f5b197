// SPDX-License-Identifier: Apache-2.0

#include "wharray/solver.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "wharray/error.hpp"
#include "wharray/parallel.hpp"
#include "wharray/specfun.hpp"

namespace wharray
{

namespace
{

// Scatterer positions of one array as origin + n * step.
struct Line
{
  double ox, oy, dx, dy;
  Line(const ArraySpec &arr)
  {
    const Point o = array_origin(arr);
    ox = o.x;
    oy = o.y;
    dx = arr.s * std::cos(arr.alpha);
    dy = arr.s * std::sin(arr.alpha);
  }
  double x(long n) const { return ox + n * dx; }
  double y(long n) const { return oy + n * dy; }
};

double line_distance(const Line &a, long m, const Line &b, long n)
{
  return std::hypot(a.x(m) - b.x(n), a.y(m) - b.y(n));
}

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

Vec apply_system(const BlockSystem &sys, const Vec &x)
{
  const int d = sys.n + 1;
  Vec y = x;
  for (int j = 0; j < sys.num_arrays; ++j)
    for (int l = 0; l < sys.num_arrays; ++l)
      if (j != l)
        y.segment(j * d, d).noalias() += sys.block(j, l) * x.segment(l * d, d);
  return y;
}

ScatteringSolution split_solution(const Vec &x, int num_arrays, int n, const std::string &tag)
{
  ScatteringSolution sol;
  sol.method = tag;
  for (int j = 0; j < num_arrays; ++j)
    sol.coeffs.push_back(x.segment(j * (n + 1), n + 1));
  return sol;
}

double smooth_step(double x)
{
  if (x <= 0.0)
    return 0.0;
  if (x >= 1.0)
    return 1.0;
  const double f = std::exp(-1.0 / x), g = std::exp(-1.0 / (1.0 - x));
  return f / (f + g);
}

void require_lambda(const std::vector<cd> &lambda, std::size_t len, const char *who)
{
  if (lambda.size() < len)
    throw ValidationError(std::string(who) + ": lambda sequence too short");
}

} // namespace

int default_edge_window(int n)
{
  return std::max(16, n / 10);
}

KernelSet factorize_arrays(const ProblemSpec &spec, int n, const SolverOptions &opt)
{
  KernelSet out;
  for (int j = 0; j < spec.num_arrays(); ++j)
  {
    const ArraySpec &arr = spec.arrays[j];
    std::shared_ptr<const KernelData> found;
    for (int i = 0; i < j; ++i)
      if (spec.arrays[i].s == arr.s && spec.arrays[i].a == arr.a)
        found = out[i];
    if (!found)
      found = std::make_shared<const KernelData>(
          factorize(spec.k, arr.s, arr.a, opt.contour_size, n, opt.kernel));
    out.push_back(found);
  }
  return out;
}

std::vector<std::string> check_resonance(const ProblemSpec &spec, double tol)
{
  std::vector<std::string> warnings;
  const auto report = resonance_report(spec, tol);
  for (std::size_t j = 0; j < report.size(); ++j)
  {
    if (report[j].outward)
    {
      std::ostringstream os;
      os << "array " << j + 1
         << ": outward resonance (k s/2pi)(1 - cos(alpha - theta_I)) is an integer; the "
            "driving pole sits on the kernel singularity";
      throw ResonanceError(os.str());
    }
    if (report[j].inward)
    {
      std::ostringstream os;
      os << "array " << j + 1 << ": inward resonance, solving anyway";
      warnings.push_back(os.str());
    }
  }
  return warnings;
}

Vec driving_vector(const KernelData &kd, const ProblemSpec &spec, int j, int n)
{
  require_lambda(kd.lambda, std::size_t(n) + 1, "driving_vector");
  const cd zj = pole_location(spec, j);
  if (std::abs(zj - std::polar(1.0, kd.ks())) < 1e-10)
    throw ResonanceError("driving_vector: pole z_j coincides with the kernel singularity");
  const cd pref = -incident_phase(spec, j, 0) / kminus_eval(kd, zj);
  const cd inv = 1.0 / zj;
  Vec out(n + 1);
  cd acc = 0.0;
  for (int m = 0; m <= n; ++m)
  {
    acc = acc * inv + kd.lambda[m];
    out[m] = pref * acc;
  }
  return out;
}

Mat mbar_block(const std::vector<cd> &lambda, const ProblemSpec &spec, int j, int l, int rows,
               int cols, int p)
{
  if (j == l)
    throw ValidationError("mbar_block: j and l must differ");
  require_lambda(lambda, std::size_t(p) + 1, "mbar_block");
  const Line lj(spec.arrays[j]), ll(spec.arrays[l]);
  const double k = spec.k;
  const int glen = rows + p;
  Mat out(rows, cols);

  if (double(rows) * (p + 1) <= 4096.0)
  {
    parallel_for(0, cols, [&](std::ptrdiff_t q) {
      std::vector<cd> g(glen);
      for (int r = 0; r < glen; ++r)
        g[r] = specfun::hankel0(k * line_distance(lj, r, ll, q));
      for (int r = 0; r < rows; ++r)
      {
        cd acc = 0.0;
        for (int i = 0; i <= p; ++i)
          acc += lambda[i] * g[r + i];
        out(r, q) = acc;
      }
    });
    return out;
  }

  // Correlation as a convolution with the reversed lambda sequence.
  const std::size_t f = detail::next_pow2(std::size_t(rows) + 2 * std::size_t(p) + 1);
  detail::FftPlan fwd(f, false), inv(f, true);
  std::vector<cd> lam_hat(f, cd(0.0));
  for (int i = 0; i <= p; ++i)
    lam_hat[i] = lambda[p - i] / double(f);
  fwd.execute(lam_hat);

  parallel_for(0, cols, [&](std::ptrdiff_t q) {
    std::vector<cd> g(f, cd(0.0));
    for (int r = 0; r < glen; ++r)
      g[r] = specfun::hankel0(k * line_distance(lj, r, ll, q));
    fwd.execute(g);
    for (std::size_t i = 0; i < f; ++i)
      g[i] *= lam_hat[i];
    inv.execute(g);
    for (int r = 0; r < rows; ++r)
      out(r, q) = g[p + r];
  });
  return out;
}

PTruncation choose_p(const std::vector<cd> &lambda, const ProblemSpec &spec, int j, int l, int n,
                     const SolverOptions &opt)
{
  std::vector<int> idx = {0, n / 3, (2 * n) / 3, n};
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  const Line lj(spec.arrays[j]), ll(spec.arrays[l]);
  const double k = spec.k;

  int p = opt.p_start > 0 ? opt.p_start : std::max(n, 32);
  std::vector<cd> sums(idx.size() * idx.size(), cd(0.0));
  int done = -1; // sums hold terms 0..done
  auto extend = [&](int upto) {
    require_lambda(lambda, std::size_t(upto) + 1, "choose_p");
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b)
      {
        cd acc = 0.0;
        for (int i = done + 1; i <= upto; ++i)
          acc += lambda[i] * specfun::hankel0(k * line_distance(lj, idx[a] + i, ll, idx[b]));
        sums[a * idx.size() + b] += acc;
      }
    done = upto;
  };

  extend(p);
  double change = 0.0;
  while (true)
  {
    const std::vector<cd> before = sums;
    extend(2 * p);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < sums.size(); ++i)
    {
      diff = std::max(diff, std::abs(sums[i] - before[i]));
      scale = std::max(scale, std::abs(sums[i]));
    }
    change = scale > 0.0 ? diff / scale : 0.0;
    if (change <= opt.p_tol)
      return {p, change};
    if (2 * p > opt.p_max)
    {
      std::ostringstream os;
      os << "mbar: inner truncation did not converge for blocks (" << j + 1 << ',' << l + 1
         << "): relative change " << change << " at P = " << p;
      throw ConvergenceError(os.str());
    }
    p *= 2;
  }
}

Mat m_block(const std::vector<cd> &lambda, const Mat &mbar)
{
  const int rows = static_cast<int>(mbar.rows());
  const int cols = static_cast<int>(mbar.cols());
  require_lambda(lambda, std::size_t(rows), "m_block");
  Mat out(rows, cols);
  if (rows <= 64)
  {
    for (int q = 0; q < cols; ++q)
      for (int m = 0; m < rows; ++m)
      {
        cd acc = 0.0;
        for (int n = 0; n <= m; ++n)
          acc += lambda[m - n] * mbar(n, q);
        out(m, q) = acc;
      }
    return out;
  }
  const std::size_t f = detail::next_pow2(2 * std::size_t(rows));
  detail::FftPlan fwd(f, false), inv(f, true);
  std::vector<cd> lam_hat(f, cd(0.0));
  for (int i = 0; i < rows; ++i)
    lam_hat[i] = lambda[i] / double(f);
  fwd.execute(lam_hat);
  parallel_for(0, cols, [&](std::ptrdiff_t q) {
    std::vector<cd> g(f, cd(0.0));
    for (int r = 0; r < rows; ++r)
      g[r] = mbar(r, q);
    fwd.execute(g);
    for (std::size_t i = 0; i < f; ++i)
      g[i] *= lam_hat[i];
    inv.execute(g);
    for (int r = 0; r < rows; ++r)
      out(r, q) = g[r];
  });
  return out;
}

BlockSystem build_system(const ProblemSpec &spec, const KernelSet &kernels,
                         const SolverOptions &opt)
{
  const int J = spec.num_arrays();
  const int n = spec.n_trunc;
  if (static_cast<int>(kernels.size()) != J)
    throw ValidationError("build_system: one kernel per array is required");

  BlockSystem sys;
  sys.n = n;
  sys.num_arrays = J;
  sys.m.resize(J * J);
  if (opt.keep_mbar)
    sys.mbar.resize(J * J);
  sys.p_used.assign(J * J, 0);

  // Long lambda sequences, shared between arrays with the same kernel.
  const int lam_len = J > 1 ? std::max(n, 2 * opt.p_max) : n;
  std::vector<std::shared_ptr<const std::vector<cd>>> lam(J);
  for (int j = 0; j < J; ++j)
  {
    for (int i = 0; i < j; ++i)
      if (kernels[i] == kernels[j])
        lam[j] = lam[i];
    if (!lam[j])
      lam[j] = std::make_shared<const std::vector<cd>>(lambda_coeffs(*kernels[j], lam_len));
    sys.lambda.emplace_back(lam[j]->begin(), lam[j]->begin() + n + 1);
  }

  for (int j = 0; j < J; ++j)
  {
    sys.a0.push_back(driving_vector(*kernels[j], spec, j, n));
    sys.z.push_back(pole_location(spec, j));
    sys.kminus_z.push_back(kminus_eval(*kernels[j], sys.z.back()));
  }

  for (int j = 0; j < J; ++j)
    for (int l = 0; l < J; ++l)
    {
      if (j == l)
        continue;
      const PTruncation pt = choose_p(*lam[j], spec, j, l, n, opt);
      sys.p_used[j * J + l] = pt.p;
      Mat mb = mbar_block(*lam[j], spec, j, l, n + 1, n + 1, pt.p);
      sys.m[j * J + l] = m_block(*lam[j], mb);
      if (opt.keep_mbar)
        sys.mbar[j * J + l] = std::move(mb);
    }
  return sys;
}

ScatteringSolution assemble_and_solve(const BlockSystem &sys)
{
  const int d = sys.n + 1;
  const int J = sys.num_arrays;
  const int dim = J * d;
  Vec b(dim);
  for (int j = 0; j < J; ++j)
    b.segment(j * d, d) = sys.a0[j];
  if (J == 1)
  {
    auto sol = split_solution(b, J, sys.n, "block-solve");
    sol.condition_estimate = 1.0;
    return sol;
  }

  Mat a = Mat::Identity(dim, dim);
  for (int j = 0; j < J; ++j)
    for (int l = 0; l < J; ++l)
      if (j != l)
        a.block(j * d, l * d, d, d) = sys.block(j, l);

  Eigen::PartialPivLU<Eigen::Ref<Mat>> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-15))
    throw SingularMatrixError("assemble_and_solve: block matrix is numerically singular (rcond = " +
                              std::to_string(rcond) + ")");
  Vec x = lu.solve(b);
  const Vec r = b - apply_system(sys, x);
  x += lu.solve(r);
  if (!x.allFinite())
    throw NumericalError("assemble_and_solve: non-finite solution");
  auto sol = split_solution(x, J, sys.n, "block-solve");
  sol.condition_estimate = 1.0 / rcond;
  return sol;
}

ScatteringSolution two_array_solve(const BlockSystem &sys, bool swapped)
{
  if (sys.num_arrays != 2)
    throw ValidationError("two_array_solve: exactly two arrays required");
  const int p = swapped ? 1 : 0, q = swapped ? 0 : 1;
  const Mat &mpq = sys.block(p, q);
  const Mat &mqp = sys.block(q, p);
  const int d = sys.n + 1;
  Mat s = Mat::Identity(d, d) - mpq * mqp;
  Eigen::PartialPivLU<Mat> lu(s);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-15))
    throw SingularMatrixError("two_array_solve: I - M M is numerically singular");
  const Vec rhs = sys.a0[p] - mpq * sys.a0[q];
  Vec ap = lu.solve(rhs);
  ap += lu.solve(rhs - s * ap);
  const Vec aq = sys.a0[q] - mqp * ap;
  ScatteringSolution sol;
  sol.method = "two-array";
  sol.coeffs.resize(2);
  sol.coeffs[p] = ap;
  sol.coeffs[q] = aq;
  sol.condition_estimate = 1.0 / rcond;
  return sol;
}

double spectral_radius_estimate(const Mat &a, const Mat &b, int iters)
{
  const int d = static_cast<int>(b.cols());
  Vec v(d);
  for (int i = 0; i < d; ++i)
    v[i] = cd(1.0 + 0.37 * std::sin(1.3 * i), 0.21 * std::cos(0.7 * i));
  v.normalize();
  const int window = std::max(10, iters / 4);
  double log_growth = 0.0;
  for (int t = 0; t < iters; ++t)
  {
    Vec w = a * (b * v);
    const double nw = w.norm();
    if (nw == 0.0)
      return 0.0;
    if (t >= iters - window)
      log_growth += std::log(nw);
    v = w / nw;
  }
  return std::exp(log_growth / window);
}

NeumannResult neumann_iterate(const BlockSystem &sys, int max_iters, double tol)
{
  if (sys.num_arrays != 2)
    throw ValidationError("neumann_iterate: exactly two arrays required");
  const Mat &m12 = sys.block(0, 1);
  const Mat &m21 = sys.block(1, 0);
  NeumannResult out;
  out.spectral_radius = spectral_radius_estimate(m12, m21);

  const Vec rhs = sys.a0[0] - m12 * sys.a0[1];
  Vec x = rhs;
  double prev_inc = std::numeric_limits<double>::infinity();
  int growth = 0;
  auto record = [&](const Vec &a1) {
    ScatteringSolution s;
    s.method = "neumann";
    s.coeffs = {a1, sys.a0[1] - m21 * a1};
    out.iterates.push_back(std::move(s));
  };
  record(x);
  for (int t = 0; t < max_iters; ++t)
  {
    const Vec next = rhs + m12 * (m21 * x);
    const double inc = (next - x).norm();
    x = next;
    record(x);
    if (!x.allFinite())
      throw ConvergenceError("neumann_iterate: iterate became non-finite");
    if (inc <= tol * x.norm())
    {
      out.converged = true;
      break;
    }
    growth = inc > prev_inc ? growth + 1 : 0;
    if (growth >= 3)
    {
      std::ostringstream os;
      os << "neumann_iterate: divergence detected (spectral radius estimate "
         << out.spectral_radius << ")";
      throw ConvergenceError(os.str());
    }
    prev_inc = inc;
  }
  return out;
}

double foldy_residual(const ProblemSpec &spec, const ScatteringSolution &sol, int edge_window)
{
  const int J = spec.num_arrays();
  const int n = sol.n();
  if (static_cast<int>(sol.coeffs.size()) != J)
    throw ValidationError("foldy_residual: solution does not match the spec");
  const int last = std::max(0, n - std::max(0, edge_window));
  std::vector<Line> lines;
  for (const auto &arr : spec.arrays)
    lines.emplace_back(arr);

  double worst = 0.0;
  for (int j = 0; j < J; ++j)
  {
    const ArraySpec &arr = spec.arrays[j];
    std::vector<cd> own(n + 1);
    own[0] = specfun::hankel0(spec.k * arr.a);
    for (int d = 1; d <= n; ++d)
      own[d] = specfun::hankel0(spec.k * arr.s * d);
    std::vector<double> res(last + 1);
    parallel_for(0, last + 1, [&](std::ptrdiff_t m) {
      cd acc = incident_phase(spec, j, static_cast<int>(m));
      for (int q = 0; q <= n; ++q)
        acc += sol.coeffs[j][q] * own[std::abs(q - int(m))];
      for (int l = 0; l < J; ++l)
      {
        if (l == j)
          continue;
        for (int q = 0; q <= n; ++q)
          acc += sol.coeffs[l][q] *
                 specfun::hankel0(spec.k * line_distance(lines[j], m, lines[l], q));
      }
      res[m] = std::abs(acc);
    });
    for (double r : res)
      worst = std::max(worst, r);
  }
  return worst;
}

double energy_residual_exact_foldy(double ka)
{
  const cd h = specfun::hankel0(ka);
  const cd g = -1.0 / h;
  return std::norm(g) + g.real();
}

EnergyReport energy_residual(const ProblemSpec &spec, const ScatteringSolution &sol,
                             const KernelSet &kernels, const SolverOptions &opt)
{
  const int J = spec.num_arrays();
  const int n = sol.n();
  if (static_cast<int>(sol.coeffs.size()) != J || static_cast<int>(kernels.size()) != J)
    throw ValidationError("energy_residual: solution does not match the spec");
  // The tapered tail behaves like a smooth window against exp(i phi m); the window must be
  // long compared with 1/phi for every oscillation present in the own-array sum.
  double phi = 2.0 * std::numbers::pi;
  for (int j = 0; j < J; ++j)
  {
    const ArraySpec &arr = spec.arrays[j];
    const double ks = spec.k * arr.s;
    for (double v : {ks * (1.0 - std::cos(arr.alpha - spec.theta_i)), 2.0 * ks})
      phi = std::min(phi, std::abs(std::remainder(v, 2.0 * std::numbers::pi)));
  }
  const int ext = static_cast<int>(
      std::min(32768.0, std::max({2.0 * n, 200.0, std::ceil(300.0 / std::max(phi, 1e-6))})));
  const int top = n + ext;
  const int edge = opt.edge_window >= 0 ? opt.edge_window : default_edge_window(n);
  std::vector<Line> lines;
  for (const auto &arr : spec.arrays)
    lines.emplace_back(arr);

  // Continue every array past N with the Wiener-Hopf representation. Cross-array sums stay
  // truncated at N, the same truncation the block system was solved with.
  std::vector<Vec> full(J);
  for (int j = 0; j < J; ++j)
  {
    const int lam_len = J > 1 ? std::max(top, 2 * opt.p_max) : top;
    const auto lambda = lambda_coeffs(*kernels[j], lam_len);
    KernelData kd = *kernels[j];
    kd.lambda.assign(lambda.begin(), lambda.begin() + top + 1);
    Vec a = driving_vector(kd, spec, j, top);
    for (int l = 0; l < J; ++l)
    {
      if (l == j)
        continue;
      const PTruncation pt = choose_p(lambda, spec, j, l, n, opt);
      const Mat mb = mbar_block(lambda, spec, j, l, top + 1, n + 1, pt.p);
      a -= m_block(lambda, mb) * sol.coeffs[l];
    }
    a.head(n + 1) = sol.coeffs[j];
    full[j] = a;
  }

  std::vector<double> weight(top + 1);
  const double t0 = n + ext / 3.0;
  for (int m = 0; m <= top; ++m)
    weight[m] = 1.0 - smooth_step((m - t0) / (top - t0));

  EnergyReport rep;
  rep.residual.resize(J);
  for (int j = 0; j < J; ++j)
  {
    const ArraySpec &arr = spec.arrays[j];
    const double ka = spec.k * arr.a;
    rep.bound = std::max(rep.bound, std::pow(ka / std::log(ka), 2));
    std::vector<cd> own(top + 1);
    for (int d = 1; d <= top; ++d)
      own[d] = specfun::hankel0(spec.k * arr.s * d);
    std::vector<cd> phi(n + 1);
    parallel_for(0, n + 1, [&](std::ptrdiff_t m) {
      cd acc = incident_phase(spec, j, static_cast<int>(m));
      for (int q = 0; q <= top; ++q)
        if (q != m)
          acc += weight[q] * full[j][q] * own[std::abs(q - int(m))];
      for (int l = 0; l < J; ++l)
      {
        if (l == j)
          continue;
        for (int q = 0; q <= n; ++q)
          acc += sol.coeffs[l][q] *
                 specfun::hankel0(spec.k * line_distance(lines[j], m, lines[l], q));
      }
      phi[m] = acc;
    });
    rep.residual[j].resize(n + 1);
    for (int m = 0; m <= n; ++m)
    {
      if (std::abs(phi[m]) < 1e-12)
      {
        rep.breakdown.emplace_back(j, m);
        rep.residual[j][m] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const cd g = sol.coeffs[j][m] / phi[m];
      rep.residual[j][m] = std::norm(g) + g.real();
      if (m <= n - edge)
        rep.max_residual = std::max(rep.max_residual, rep.residual[j][m]);
    }
  }
  return rep;
}

namespace
{

using mp_complex = boost::multiprecision::cpp_complex_50;
using mp_real = boost::multiprecision::cpp_bin_float_50;

double log_abs_det_mp(std::vector<mp_complex> a, int d)
{
  mp_real acc = 0;
  for (int c = 0; c < d; ++c)
  {
    int piv = c;
    mp_real best = abs(a[c * d + c]);
    for (int r = c + 1; r < d; ++r)
    {
      const mp_real v = abs(a[r * d + c]);
      if (v > best)
      {
        best = v;
        piv = r;
      }
    }
    if (best == 0)
      return -std::numeric_limits<double>::infinity();
    if (piv != c)
      for (int q = 0; q < d; ++q)
        std::swap(a[c * d + q], a[piv * d + q]);
    acc += log(best);
    const mp_complex inv = mp_complex(1) / a[c * d + c];
    for (int r = c + 1; r < d; ++r)
    {
      const mp_complex f = a[r * d + c] * inv;
      if (f == mp_complex(0))
        continue;
      for (int q = c + 1; q < d; ++q)
        a[r * d + q] -= f * a[c * d + q];
    }
  }
  return acc.convert_to<double>();
}

std::vector<mp_complex> to_mp(const Mat &m)
{
  const int d = static_cast<int>(m.rows());
  std::vector<mp_complex> out(std::size_t(d) * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      out[r * d + c] = mp_complex(m(r, c).real(), m(r, c).imag());
  return out;
}

} // namespace

Diagnostics diagnostics(const BlockSystem &sys)
{
  const int J = sys.num_arrays;
  if (J > 1 && sys.mbar.empty())
    throw ValidationError("diagnostics: system was built without keep_mbar");
  Diagnostics out;
  auto log_abs_det = [](const Mat &a) {
    Eigen::PartialPivLU<Mat> lu(a);
    double acc = 0.0;
    for (int i = 0; i < a.rows(); ++i)
      acc += std::log(std::abs(lu.matrixLU()(i, i)));
    return acc;
  };
  for (int j = 0; j < J; ++j)
    for (int l = 0; l < J; ++l)
    {
      if (j == l)
        continue;
      Diagnostics::Pair p;
      p.j = j;
      p.l = l;
      const Mat &mb = sys.mbar_block(j, l);
      const int d = static_cast<int>(mb.rows());
      if (d <= 256)
      {
        const std::vector<mp_complex> bar = to_mp(mb);
        std::vector<mp_complex> full(bar.size());
        const auto &lam = sys.lambda[j];
        parallel_for(0, d, [&](std::ptrdiff_t r) {
          for (int q = 0; q < d; ++q)
          {
            mp_complex acc = 0;
            for (int i = 0; i <= r; ++i)
              acc += mp_complex(lam[r - i].real(), lam[r - i].imag()) * bar[i * d + q];
            full[r * d + q] = acc;
          }
        });
        p.log_det_m = log_abs_det_mp(std::move(full), d);
        p.log_det_mbar = log_abs_det_mp(bar, d);
        out.determinant_method = "lu-50digit";
      }
      else
      {
        p.log_det_m = log_abs_det(sys.block(j, l));
        p.log_det_mbar = log_abs_det(mb);
        out.determinant_method = "lu-double";
      }
      p.identity_residual =
          p.log_det_m - (sys.n + 1) * std::log(std::abs(sys.lambda[j][0])) - p.log_det_mbar;
      out.pairs.push_back(p);
    }

  const int d = sys.n + 1;
  const int dim = J * d;
  Mat a = Mat::Identity(dim, dim);
  for (int j = 0; j < J; ++j)
    for (int l = 0; l < J; ++l)
      if (j != l)
        a.block(j * d, l * d, d, d) = sys.block(j, l);
  if (dim <= 2500)
  {
    Eigen::BDCSVD<Mat> svd(a);
    const auto &sv = svd.singularValues();
    out.condition = sv(0) / sv(sv.size() - 1);
    out.condition_method = "svd-2norm";
  }
  else
  {
    Eigen::PartialPivLU<Eigen::Ref<Mat>> lu(a);
    out.condition = 1.0 / lu.rcond();
    out.condition_method = "lu-rcond-1norm";
  }
  if (J == 2)
    out.spectral_radius = spectral_radius_estimate(sys.block(0, 1), sys.block(1, 0));
  return out;
}

SolveResult solve(const ProblemSpec &spec, const SolverOptions &opt)
{
  require_valid(spec, spec.n_trunc);
  SolveResult out;
  out.warnings = model_warnings(spec);
  for (auto &w : check_resonance(spec, opt.resonance_tol))
    out.warnings.push_back(std::move(w));
  out.kernels = factorize_arrays(spec, spec.n_trunc, opt);
  out.system = build_system(spec, out.kernels, opt);
  out.solution = assemble_and_solve(out.system);
  if (opt.compute_residuals)
  {
    const int edge = opt.edge_window >= 0 ? opt.edge_window : default_edge_window(spec.n_trunc);
    out.solution.foldy_residual = foldy_residual(spec, out.solution, edge);
  }
  if (opt.compute_energy)
    out.solution.energy_residual =
        energy_residual(spec, out.solution, out.kernels, opt).max_residual;
  return out;
}

} // namespace wharray
