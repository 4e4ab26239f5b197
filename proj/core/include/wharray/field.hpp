// SPDX-License-Identifier: Apache-2.0

#ifndef WHARRAY_FIELD_HPP
#define WHARRAY_FIELD_HPP

#include <cstdint>
#include <vector>

#include "wharray/geometry.hpp"
#include "wharray/solver.hpp"

namespace wharray
{

struct GridSpec
{
  double x_min = -1.0;
  double x_max = 1.0;
  double y_min = -1.0;
  double y_max = 1.0;
  int nx = 101;
  int ny = 101;

  double dx() const { return nx > 1 ? (x_max - x_min) / (nx - 1) : 0.0; }
  double dy() const { return ny > 1 ? (y_max - y_min) / (ny - 1) : 0.0; }
  double x(int i) const { return x_min + i * dx(); }
  double y(int j) const { return y_min + j * dy(); }
};

// Samples are stored with x fastest: index = j * nx + i. Masked samples hold 0.
struct FieldGrid
{
  GridSpec grid;
  std::vector<cd> values;
  std::vector<std::uint8_t> mask;

  std::size_t index(int i, int j) const { return std::size_t(j) * grid.nx + i; }
};

struct Disk
{
  double cx = 0.0;
  double cy = 0.0;
  double r = 0.0;
};

void validate_grid(const GridSpec &g);

// max(a_j, 1.1 * cell diagonal).
double mask_radius(const ArraySpec &arr, const GridSpec &g);

cd incident_field_at(const ProblemSpec &spec, Point p);

FieldGrid incident_field(const ProblemSpec &spec, const GridSpec &g);

// Scatterers enter in array order, then by index, at every point.
cd total_field_at(const ProblemSpec &spec, const ScatteringSolution &sol, Point p);

FieldGrid total_field(const ProblemSpec &spec, const ScatteringSolution &sol, const GridSpec &g);

// 20 log10 of the RMS of |Phi| over unmasked grid samples inside the disk.
double spl(const FieldGrid &field, const Disk &region);

// Same metric on a dedicated sampling of the disk (samples per diameter `resolution`).
// Throws ValidationError if the disk reaches a scatterer.
double spl(const ProblemSpec &spec, const ScatteringSolution &sol, const Disk &region,
           int resolution = 64);

// Disk centred on the centroid of the array origins, radius d - min(2 s_min, d / 2) where d
// is the distance from the centre to the nearest scatterer (indices 0..N).
Disk default_cage_region(const ProblemSpec &spec);

} // namespace wharray

#endif
