// SPDX-License-Identifier: Apache-2.0

#include "wharray/reference.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "wharray/error.hpp"
#include "wharray/field.hpp"
#include "wharray/parallel.hpp"
#include "wharray/specfun.hpp"

namespace wharray
{

namespace
{

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

int total_unknowns(const ProblemSpec &spec)
{
  return spec.num_arrays() * (spec.n_trunc + 1);
}

ScatteringSolution split(const Vec &x, int num_arrays, int n, const char *tag)
{
  ScatteringSolution s;
  s.method = tag;
  for (int j = 0; j < num_arrays; ++j)
    s.coeffs.push_back(x.segment(j * (n + 1), n + 1));
  return s;
}

double angle_gap(double a, double b)
{
  return std::abs(std::remainder(a - b, 2.0 * std::numbers::pi));
}

} // namespace

cd infinite_array_exact(double k, double s, double theta_i, const KernelData &kd, int m,
                        int branch)
{
  if (m < 0 || (branch != 0 && branch != 1))
    throw ValidationError("infinite_array_exact: need m >= 0 and branch 0 or 1");
  const double ph = k * s * std::cos(theta_i);
  const cd kz = kernel_eval(kd, std::polar(1.0, ph));
  if (branch == 0)
    return -std::polar(1.0, -ph * m) / kz;
  return -std::polar(1.0, ph * (m + 1)) / kz;
}

ScatteringSolution infinite_array_solution(double k, double s, double theta_i,
                                           const KernelData &kd, int n)
{
  ProblemSpec probe;
  probe.k = k;
  probe.theta_i = theta_i;
  probe.arrays = {{s, kd.a, 0.0, 0.0, 0.0}};
  if (resonance_report(probe)[0].outward || resonance_report(probe)[0].inward)
    throw ResonanceError("infinite_array_exact: e^{iks cos theta_I} is a kernel singularity");
  ScatteringSolution out;
  out.method = "exact";
  out.coeffs.assign(2, Vec(n + 1));
  for (int m = 0; m <= n; ++m)
  {
    out.coeffs[0][m] = infinite_array_exact(k, s, theta_i, kd, m, 0);
    out.coeffs[1][m] = infinite_array_exact(k, s, theta_i, kd, m, 1);
  }
  return out;
}

bool is_infinite_line(const ProblemSpec &spec, double tol)
{
  if (spec.num_arrays() != 2)
    return false;
  const ArraySpec &a = spec.arrays[0], &b = spec.arrays[1];
  if (std::abs(a.s - b.s) > tol || std::abs(a.a - b.a) > tol)
    return false;
  const Point o1 = array_origin(a), o2 = array_origin(b);
  return std::hypot(o1.x, o1.y) <= tol && angle_gap(a.alpha, 0.0) <= tol &&
         angle_gap(b.alpha, std::numbers::pi) <= tol && std::abs(o2.x + a.s) <= tol &&
         std::abs(o2.y) <= tol;
}

ScatteringSolution direct_foldy_solve(const ProblemSpec &spec, int max_unknowns)
{
  require_valid(spec, spec.n_trunc);
  const int n = spec.n_trunc, J = spec.num_arrays(), dim = total_unknowns(spec);
  if (dim > max_unknowns)
  {
    std::ostringstream os;
    os << "direct_foldy_solve: " << dim << " unknowns exceed the cap of " << max_unknowns;
    throw ValidationError(os.str());
  }
  std::vector<Point> pos;
  std::vector<double> self;
  for (int j = 0; j < J; ++j)
    for (int m = 0; m <= n; ++m)
    {
      pos.push_back(scatterer_position(spec, j, m));
      self.push_back(spec.arrays[j].a);
    }
  Mat a(dim, dim);
  Vec rhs(dim);
  parallel_for(0, dim, [&](std::ptrdiff_t r) {
    rhs[r] = -incident_field_at(spec, pos[r]);
    for (int c = 0; c < dim; ++c)
    {
      const double d = c == r ? self[r] : std::hypot(pos[r].x - pos[c].x, pos[r].y - pos[c].y);
      a(r, c) = specfun::hankel0(spec.k * d);
    }
  });
  Eigen::PartialPivLU<Mat> lu(a);
  if (!(lu.rcond() > 1e-15))
    throw SingularMatrixError("direct_foldy_solve: system matrix is numerically singular");
  Vec x = lu.solve(rhs);
  x += lu.solve(rhs - a * x);
  ScatteringSolution s = split(x, J, n, "direct-foldy");
  s.condition_estimate = 1.0 / lu.rcond();
  s.foldy_residual = (a * x - rhs).cwiseAbs().maxCoeff();
  return s;
}

ScatteringSolution lsc_solve(const ProblemSpec &spec, int q)
{
  if (q < 2)
    throw ValidationError("lsc_solve: at least two collocation points per scatterer");
  require_valid(spec, spec.n_trunc);
  const int n = spec.n_trunc, J = spec.num_arrays(), dim = total_unknowns(spec);
  std::vector<Point> pos;
  std::vector<double> rad;
  for (int j = 0; j < J; ++j)
    for (int m = 0; m <= n; ++m)
    {
      pos.push_back(scatterer_position(spec, j, m));
      rad.push_back(spec.arrays[j].a);
    }
  const int rows = dim * q;
  Mat a(rows, dim);
  Vec rhs(rows);
  parallel_for(0, rows, [&](std::ptrdiff_t r) {
    const int owner = int(r / q);
    const double th = 2.0 * std::numbers::pi * double(r % q) / q;
    const Point p{pos[owner].x + rad[owner] * std::cos(th), pos[owner].y + rad[owner] * std::sin(th)};
    rhs[r] = -incident_field_at(spec, p);
    for (int c = 0; c < dim; ++c)
      a(r, c) = specfun::hankel0(spec.k * std::hypot(p.x - pos[c].x, p.y - pos[c].y));
  });
  Eigen::ColPivHouseholderQR<Mat> qr(a);
  if (qr.rank() < dim)
  {
    std::ostringstream os;
    os << "lsc_solve: collocation matrix has rank " << qr.rank() << " < " << dim;
    throw SingularMatrixError(os.str());
  }
  const Vec x = qr.solve(rhs);
  ScatteringSolution s = split(x, J, n, "lsc");
  const double lo = std::abs(qr.matrixQR()(dim - 1, dim - 1));
  s.condition_estimate = std::abs(qr.matrixQR()(0, 0)) / lo;
  return s;
}

ComparisonReport make_report(const ProblemSpec &spec, const std::string &label, int window)
{
  ComparisonReport r;
  r.k = spec.k;
  r.theta_i = spec.theta_i;
  r.n = spec.n_trunc;
  r.window = window >= 0 ? window : default_edge_window(spec.n_trunc);
  r.label = label;
  const int first = spec.num_arrays() == 2 ? -(r.n + 1) : 0;
  for (int i = first; i <= r.n; ++i)
    r.index.push_back(i);
  if (spec.num_arrays() < 1 || spec.num_arrays() > 2)
    throw ValidationError("compare: one or two arrays required");
  return r;
}

void compare(ComparisonReport &report, const std::string &name, const ScatteringSolution &a,
             const ScatteringSolution &b)
{
  const int J = report.index.front() < 0 ? 2 : 1;
  if (int(a.coeffs.size()) != J || int(b.coeffs.size()) != J || a.n() != report.n ||
      b.n() != report.n)
    throw ValidationError("compare: solutions do not match the report shape");
  ComparisonColumn col;
  col.name = name;
  for (int i : report.index)
  {
    const int arr = i < 0 ? 1 : 0;
    const int pos = i < 0 ? -i - 1 : i;
    const double d = std::abs(a.coeffs[arr][pos] - b.coeffs[arr][pos]);
    col.diff.push_back(d);
    col.max = std::max(col.max, d);
    if (pos < report.window)
      col.centre_max = std::max(col.centre_max, d);
    else if (pos > report.n - report.window)
      col.end_max = std::max(col.end_max, d);
    else
      col.interior_max = std::max(col.interior_max, d);
  }
  report.columns.push_back(std::move(col));
}

void ComparisonReport::write(std::ostream &os) const
{
  os << std::setprecision(17);
  os << "# k=" << k << " theta_i=" << theta_i << " N=" << n << " window=" << window;
  if (!label.empty())
    os << " label=" << label;
  os << '\n';
  for (const auto &c : columns)
    os << "# " << c.name << " max=" << c.max << " centre_max=" << c.centre_max
       << " interior_max=" << c.interior_max << " end_max=" << c.end_max << '\n';
  os << 'n';
  for (const auto &c : columns)
    os << ',' << c.name;
  os << '\n';
  for (std::size_t r = 0; r < index.size(); ++r)
  {
    os << index[r];
    for (const auto &c : columns)
      os << ',' << c.diff[r];
    os << '\n';
  }
}

} // namespace wharray
