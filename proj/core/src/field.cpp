// SPDX-License-Identifier: Apache-2.0

#include "wharray/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wharray/error.hpp"
#include "wharray/parallel.hpp"
#include "wharray/specfun.hpp"

namespace wharray
{

namespace
{

struct Scatterer
{
  double x, y, mask2;
  cd amp;
};

std::vector<Scatterer> collect(const ProblemSpec &spec, const ScatteringSolution &sol,
                               const GridSpec *g)
{
  if (static_cast<int>(sol.coeffs.size()) != spec.num_arrays())
    throw ValidationError("field: solution does not match the number of arrays");
  std::vector<Scatterer> out;
  for (int j = 0; j < spec.num_arrays(); ++j)
  {
    const double r = g ? mask_radius(spec.arrays[j], *g) : spec.arrays[j].a;
    for (Eigen::Index n = 0; n < sol.coeffs[j].size(); ++n)
    {
      const Point p = scatterer_position(spec, j, static_cast<int>(n));
      out.push_back({p.x, p.y, r * r, sol.coeffs[j][n]});
    }
  }
  return out;
}

} // namespace

void validate_grid(const GridSpec &g)
{
  if (g.nx < 1 || g.ny < 1)
    throw ValidationError("grid: nx and ny must be positive");
  if (!(g.x_max >= g.x_min) || !(g.y_max >= g.y_min))
    throw ValidationError("grid: bounds must satisfy min <= max");
}

double mask_radius(const ArraySpec &arr, const GridSpec &g)
{
  return std::max(arr.a, 1.1 * std::hypot(g.dx(), g.dy()));
}

cd incident_field_at(const ProblemSpec &spec, Point p)
{
  return std::polar(1.0, -spec.k * (p.x * std::cos(spec.theta_i) + p.y * std::sin(spec.theta_i)));
}

FieldGrid incident_field(const ProblemSpec &spec, const GridSpec &g)
{
  validate_grid(g);
  FieldGrid f;
  f.grid = g;
  f.values.resize(std::size_t(g.nx) * g.ny);
  f.mask.assign(f.values.size(), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      f.values[f.index(i, j)] = incident_field_at(spec, {g.x(i), g.y(j)});
  return f;
}

cd total_field_at(const ProblemSpec &spec, const ScatteringSolution &sol, Point p)
{
  cd acc = incident_field_at(spec, p);
  for (const Scatterer &s : collect(spec, sol, nullptr))
    acc += s.amp * specfun::hankel0(spec.k * std::hypot(p.x - s.x, p.y - s.y));
  return acc;
}

FieldGrid total_field(const ProblemSpec &spec, const ScatteringSolution &sol, const GridSpec &g)
{
  validate_grid(g);
  const std::vector<Scatterer> sc = collect(spec, sol, &g);
  FieldGrid f;
  f.grid = g;
  f.values.assign(std::size_t(g.nx) * g.ny, cd(0.0));
  f.mask.assign(f.values.size(), 0);
  parallel_for(0, std::ptrdiff_t(f.values.size()), [&](std::ptrdiff_t idx) {
    const double x = g.x(int(idx % g.nx));
    const double y = g.y(int(idx / g.nx));
    for (const Scatterer &s : sc)
    {
      const double dx = x - s.x, dy = y - s.y;
      if (dx * dx + dy * dy < s.mask2)
      {
        f.mask[idx] = 1;
        return;
      }
    }
    cd acc = incident_field_at(spec, {x, y});
    for (const Scatterer &s : sc)
      if (s.amp != cd(0.0))
        acc += s.amp * specfun::hankel0(spec.k * std::hypot(x - s.x, y - s.y));
    f.values[idx] = acc;
  });
  return f;
}

double spl(const FieldGrid &field, const Disk &region)
{
  double sum = 0.0;
  std::size_t count = 0;
  for (int j = 0; j < field.grid.ny; ++j)
    for (int i = 0; i < field.grid.nx; ++i)
    {
      const std::size_t idx = field.index(i, j);
      if (field.mask[idx])
        continue;
      if (std::hypot(field.grid.x(i) - region.cx, field.grid.y(j) - region.cy) > region.r)
        continue;
      sum += std::norm(field.values[idx]);
      ++count;
    }
  if (count == 0)
    throw ValidationError("spl: region contains no unmasked samples");
  return 10.0 * std::log10(sum / double(count));
}

double spl(const ProblemSpec &spec, const ScatteringSolution &sol, const Disk &region,
           int resolution)
{
  if (!(region.r > 0.0) || resolution < 2)
    throw ValidationError("spl: region radius and resolution must be positive");
  for (const Scatterer &s : collect(spec, sol, nullptr))
    if (std::hypot(s.x - region.cx, s.y - region.cy) <= region.r + std::sqrt(s.mask2))
      throw ValidationError("spl: region overlaps a scatterer");
  GridSpec g;
  g.x_min = region.cx - region.r;
  g.x_max = region.cx + region.r;
  g.y_min = region.cy - region.r;
  g.y_max = region.cy + region.r;
  g.nx = g.ny = resolution + 1;
  return spl(total_field(spec, sol, g), region);
}

Disk default_cage_region(const ProblemSpec &spec)
{
  const int J = spec.num_arrays();
  if (J == 0)
    throw ValidationError("default_cage_region: no arrays");
  Disk d;
  double smin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < J; ++j)
  {
    const Point o = array_origin(spec.arrays[j]);
    d.cx += o.x / J;
    d.cy += o.y / J;
    smin = std::min(smin, spec.arrays[j].s);
  }
  double near = std::numeric_limits<double>::infinity();
  for (int j = 0; j < J; ++j)
    for (int n = 0; n <= spec.n_trunc; ++n)
    {
      const Point p = scatterer_position(spec, j, n);
      near = std::min(near, std::hypot(p.x - d.cx, p.y - d.cy));
    }
  d.r = near - std::min(2.0 * smin, 0.5 * near);
  return d;
}

} // namespace wharray
