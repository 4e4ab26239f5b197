// SPDX-License-Identifier: Apache-2.0

#include "wharray/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wharray/error.hpp"

namespace wharray
{

namespace
{

void check_index(const ProblemSpec &spec, int j, int n)
{
  if (j < 0 || j >= spec.num_arrays())
    throw ValidationError("array index " + std::to_string(j) + " out of range");
  if (n < 0)
    throw ValidationError("scatterer index " + std::to_string(n) + " is negative");
}

double frac_distance(double v)
{
  return std::abs(v - std::round(v));
}

} // namespace

Point array_origin(const ArraySpec &arr)
{
  return {arr.r0 * std::cos(arr.theta0), arr.r0 * std::sin(arr.theta0)};
}

Point scatterer_position(const ProblemSpec &spec, int j, int n)
{
  check_index(spec, j, n);
  const ArraySpec &arr = spec.arrays[j];
  const Point o = array_origin(arr);
  return {o.x + n * arr.s * std::cos(arr.alpha), o.y + n * arr.s * std::sin(arr.alpha)};
}

double pair_distance(const ProblemSpec &spec, int j, int m, int l, int n)
{
  const Point p = scatterer_position(spec, j, m);
  const Point q = scatterer_position(spec, l, n);
  // hypot is symmetric in its arguments and |dx| is exact under swapping, so
  // Lambda(j,m,l,n) == Lambda(l,n,j,m) bit-for-bit.
  return std::hypot(std::abs(p.x - q.x), std::abs(p.y - q.y));
}

std::vector<Violation> validate(const ProblemSpec &spec, int check_depth)
{
  std::vector<Violation> out;
  if (!(spec.k > 0.0) || !std::isfinite(spec.k))
    out.push_back({0, 0, 0, 0, "wavenumber must be positive"});
  if (spec.arrays.empty())
    out.push_back({0, 0, 0, 0, "at least one array is required"});
  if (spec.n_trunc < 0)
    out.push_back({0, 0, 0, 0, "truncation must be nonnegative"});

  bool params_ok = true;
  for (int j = 0; j < spec.num_arrays(); ++j)
  {
    const ArraySpec &arr = spec.arrays[j];
    if (!(arr.s > 0.0))
    {
      out.push_back({j, 0, j, 0, "spacing must be positive"});
      params_ok = false;
    }
    if (!(arr.a > 0.0))
    {
      out.push_back({j, 0, j, 0, "radius must be positive"});
      params_ok = false;
    }
    if (arr.r0 < 0.0)
      out.push_back({j, 0, j, 0, "origin radius must be nonnegative"});
    if (params_ok && !(arr.a < 0.5 * arr.s))
      out.push_back({j, 0, j, 1, "intra-array overlap: a >= s/2"});
  }
  if (!params_ok)
    return out;

  for (int j = 0; j < spec.num_arrays(); ++j)
  {
    for (int l = j + 1; l < spec.num_arrays(); ++l)
    {
      const double reach = spec.arrays[j].a + spec.arrays[l].a;
      for (int m = 0; m <= check_depth; ++m)
      {
        const Point p = scatterer_position(spec, j, m);
        for (int n = 0; n <= check_depth; ++n)
        {
          const Point q = scatterer_position(spec, l, n);
          if (std::hypot(p.x - q.x, p.y - q.y) <= reach)
          {
            std::ostringstream os;
            os << "cross-array overlap between array " << j + 1 << " scatterer " << m
               << " and array " << l + 1 << " scatterer " << n;
            out.push_back({j, m, l, n, os.str()});
          }
        }
      }
    }
  }
  return out;
}

void require_valid(const ProblemSpec &spec, int check_depth)
{
  const auto v = validate(spec, check_depth);
  if (v.empty())
    return;
  std::ostringstream os;
  os << v.size() << " geometry violation(s)";
  for (std::size_t i = 0; i < v.size() && i < 5; ++i)
    os << "; " << v[i].what;
  throw ValidationError(os.str());
}

std::vector<std::string> model_warnings(const ProblemSpec &spec)
{
  std::vector<std::string> out;
  for (int j = 0; j < spec.num_arrays(); ++j)
  {
    const double ka = spec.k * spec.arrays[j].a;
    if (ka > 0.1)
    {
      std::ostringstream os;
      os << "array " << j + 1 << ": k a = " << ka
         << " exceeds 0.1, point-scatterer model is questionable";
      out.push_back(os.str());
    }
  }
  return out;
}

cd incident_phase(const ProblemSpec &spec, int j, int m)
{
  check_index(spec, j, m);
  const ArraySpec &arr = spec.arrays[j];
  const double ph = -spec.k * arr.r0 * std::cos(arr.theta0 - spec.theta_i) -
                    spec.k * arr.s * m * std::cos(arr.alpha - spec.theta_i);
  return std::polar(1.0, ph);
}

cd pole_location(const ProblemSpec &spec, int j)
{
  check_index(spec, j, 0);
  const ArraySpec &arr = spec.arrays[j];
  return std::polar(1.0, spec.k * arr.s * std::cos(arr.alpha - spec.theta_i));
}

std::vector<ResonanceFlags> resonance_report(const ProblemSpec &spec, double tol)
{
  std::vector<ResonanceFlags> out;
  for (const ArraySpec &arr : spec.arrays)
  {
    const double base = spec.k * arr.s / (2.0 * std::numbers::pi);
    const double c = std::cos(arr.alpha - spec.theta_i);
    ResonanceFlags f;
    f.inward_distance = frac_distance(base * (1.0 + c));
    f.outward_distance = frac_distance(base * (1.0 - c));
    f.inward = f.inward_distance <= tol;
    f.outward = f.outward_distance <= tol;
    out.push_back(f);
  }
  return out;
}

} // namespace wharray
