// SPDX-License-Identifier: Apache-2.0

#ifndef WHARRAY_GEOMETRY_HPP
#define WHARRAY_GEOMETRY_HPP

#include <complex>
#include <string>
#include <vector>

namespace wharray
{

using cd = std::complex<double>;

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

// One semi-infinite array. Scatterer n sits at origin + n*s*(cos alpha, sin alpha) with
// the origin given in polar form (r0, theta0). Lengths in metres, angles in radians.
struct ArraySpec
{
  double s = 0.1;
  double a = 0.001;
  double alpha = 0.0;
  double r0 = 0.0;
  double theta0 = 0.0;
};

// Arrays are indexed from 0 in the API; text outputs number them from 1.
struct ProblemSpec
{
  double k = 1.0;
  double theta_i = 0.0;
  std::vector<ArraySpec> arrays;
  int n_trunc = 100;

  int num_arrays() const { return static_cast<int>(arrays.size()); }
};

Point array_origin(const ArraySpec &arr);
Point scatterer_position(const ProblemSpec &spec, int j, int n);
double pair_distance(const ProblemSpec &spec, int j, int m, int l, int n);

struct Violation
{
  int j = 0;
  int m = 0;
  int l = 0;
  int n = 0;
  std::string what;
};

// Pairwise overlap check on indices 0..check_depth. Also rejects non-physical parameters
// (s <= 0, a <= 0, k <= 0, N < 0) which are reported with j = l.
std::vector<Violation> validate(const ProblemSpec &spec, int check_depth);

// Throws ValidationError listing the first few violations.
void require_valid(const ProblemSpec &spec, int check_depth);

// Human-readable notes about modeling assumptions (k a > 0.1).
std::vector<std::string> model_warnings(const ProblemSpec &spec);

// exp(i k_I . R_m^{(j)}) with k_I = -k (cos theta_I, sin theta_I).
cd incident_phase(const ProblemSpec &spec, int j, int m);

// z_j = exp(i k s_j cos(alpha_j - theta_I)).
cd pole_location(const ProblemSpec &spec, int j);

struct ResonanceFlags
{
  bool inward = false;
  bool outward = false;
  double inward_distance = 0.0;
  double outward_distance = 0.0;
};

std::vector<ResonanceFlags> resonance_report(const ProblemSpec &spec, double tol = 1e-6);

} // namespace wharray

#endif
