// SPDX-License-Identifier: Apache-2.0

#ifndef WHARRAY_REFERENCE_HPP
#define WHARRAY_REFERENCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "wharray/kernel.hpp"
#include "wharray/solver.hpp"

namespace wharray
{

// Exact coefficients of the doubly infinite line: array 1 along +x from the origin, array 2
// along -x from (-s, 0). branch is 0 for array 1 and 1 for array 2.
cd infinite_array_exact(double k, double s, double theta_i, const KernelData &kd, int m,
                        int branch);

// Both arrays, m = 0..n.
ScatteringSolution infinite_array_solution(double k, double s, double theta_i,
                                           const KernelData &kd, int n);

// True when spec is the back-to-back pair infinite_array_exact describes.
bool is_infinite_line(const ProblemSpec &spec, double tol = 1e-12);

constexpr int kDirectFoldyCap = 8000;

// Dense solve of the truncated point-scatterer equations.
ScatteringSolution direct_foldy_solve(const ProblemSpec &spec, int max_unknowns = kDirectFoldyCap);

// Monopole least-squares collocation with q points on each scatterer rim.
ScatteringSolution lsc_solve(const ProblemSpec &spec, int q = 8);

struct ComparisonColumn
{
  std::string name;
  std::vector<double> diff;
  double max = 0.0;
  double centre_max = 0.0;   // position within the array < window
  double interior_max = 0.0; // window <= position <= N - window
  double end_max = 0.0;      // position > N - window
};

// Rows follow the ordering A^(2)_N, ..., A^(2)_0, A^(1)_0, ..., A^(1)_N labelled -(N+1)..N.
// Single-array solutions only use the non-negative labels.
struct ComparisonReport
{
  double k = 0.0;
  double theta_i = 0.0;
  int n = 0;
  int window = 0;
  std::string label;
  std::vector<int> index;
  std::vector<ComparisonColumn> columns;

  void write(std::ostream &os) const;
};

ComparisonReport make_report(const ProblemSpec &spec, const std::string &label, int window = -1);

// Appends |a - b| per index. Throws ValidationError on shape mismatch.
void compare(ComparisonReport &report, const std::string &name, const ScatteringSolution &a,
             const ScatteringSolution &b);

} // namespace wharray

#endif
