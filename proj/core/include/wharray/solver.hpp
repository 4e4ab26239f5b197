// SPDX-License-Identifier: Apache-2.0

#ifndef WHARRAY_SOLVER_HPP
#define WHARRAY_SOLVER_HPP

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "wharray/geometry.hpp"
#include "wharray/kernel.hpp"

namespace wharray
{

using KernelSet = std::vector<std::shared_ptr<const KernelData>>;

struct SolverOptions
{
  int contour_size = 4096;
  KernelOptions kernel;
  // Inner truncation of the Mbar sums: starts at max(N, 32) unless p_start > 0 and is
  // doubled until 16 sampled entries move by less than p_tol (relative).
  int p_start = 0;
  double p_tol = 1e-8;
  int p_max = 1 << 15;
  // Interior window for residual reporting: indices m <= N - edge_window. Negative means
  // max(16, N/10).
  int edge_window = -1;
  double resonance_tol = 1e-6;
  bool keep_mbar = false;
  bool compute_residuals = true;
  bool compute_energy = false;
};

int default_edge_window(int n);

struct ScatteringSolution
{
  std::vector<Eigen::VectorXcd> coeffs;
  std::string method;
  double condition_estimate = std::numeric_limits<double>::quiet_NaN();
  double foldy_residual = std::numeric_limits<double>::quiet_NaN();
  double energy_residual = std::numeric_limits<double>::quiet_NaN();

  int n() const { return coeffs.empty() ? -1 : static_cast<int>(coeffs[0].size()) - 1; }
};

struct BlockSystem
{
  int n = 0;
  int num_arrays = 0;
  std::vector<Eigen::VectorXcd> a0;
  std::vector<cd> z;
  std::vector<cd> kminus_z;
  // Row-major over (j, l); diagonal entries stay empty.
  std::vector<Eigen::MatrixXcd> m;
  std::vector<Eigen::MatrixXcd> mbar;
  std::vector<int> p_used;
  std::vector<std::vector<cd>> lambda; // per array, at least N+1 terms

  const Eigen::MatrixXcd &block(int j, int l) const { return m[j * num_arrays + l]; }
  const Eigen::MatrixXcd &mbar_block(int j, int l) const { return mbar[j * num_arrays + l]; }
};

// Factorizes one kernel per distinct (s, a); lambda holds n+1 terms.
KernelSet factorize_arrays(const ProblemSpec &spec, int n, const SolverOptions &opt = {});

// Throws ResonanceError for outward resonance; returns warnings for inward resonance.
std::vector<std::string> check_resonance(const ProblemSpec &spec, double tol);

Eigen::VectorXcd driving_vector(const KernelData &kd, const ProblemSpec &spec, int j, int n);

// Mbar_{nq} = sum_{p=0}^{P} lambda_p H0(k Lambda^{(j,l)}(p+n, q)), n < rows, q <= cols-1.
Eigen::MatrixXcd mbar_block(const std::vector<cd> &lambda, const ProblemSpec &spec, int j, int l,
                            int rows, int cols, int p);

struct PTruncation
{
  int p = 0;
  double change = 0.0;
};

// P-doubling test on 16 sampled entries; lambda must hold at least 2*p_max+1 terms.
PTruncation choose_p(const std::vector<cd> &lambda, const ProblemSpec &spec, int j, int l, int n,
                     const SolverOptions &opt);

// M = L Mbar with L lower-triangular Toeplitz in lambda.
Eigen::MatrixXcd m_block(const std::vector<cd> &lambda, const Eigen::MatrixXcd &mbar);

BlockSystem build_system(const ProblemSpec &spec, const KernelSet &kernels,
                         const SolverOptions &opt = {});

// Dense LU of the full J(N+1) system with one step of iterative refinement.
ScatteringSolution assemble_and_solve(const BlockSystem &sys);

// Eliminates array 2 and solves for array 1; swapped does it the other way round.
ScatteringSolution two_array_solve(const BlockSystem &sys, bool swapped = false);

double spectral_radius_estimate(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b,
                                int iters = 400);

struct NeumannResult
{
  std::vector<ScatteringSolution> iterates;
  double spectral_radius = 0.0;
  bool converged = false;
};

NeumannResult neumann_iterate(const BlockSystem &sys, int max_iters, double tol = 1e-13);

// max over j and m <= N - edge of |A_m H0(ka) + sum_{n!=m} ... + e^{ik.R_m}| with every sum
// truncated at N.
double foldy_residual(const ProblemSpec &spec, const ScatteringSolution &sol, int edge_window);

struct EnergyReport
{
  double max_residual = 0.0;         // max over the interior of |g|^2 + Re g
  double bound = 0.0;                // (ka / ln ka)^2, largest over arrays
  std::vector<std::vector<double>> residual; // per array, m = 0..N
  std::vector<std::pair<int, int>> breakdown; // scatterers with near-zero exciting field
};

// The exciting field Phi_n sums the own array continued beyond N through
// A = A0 - sum_l M A^(l) (rows N+1..N+ext, smoothly tapered) and the other arrays up to N.
EnergyReport energy_residual(const ProblemSpec &spec, const ScatteringSolution &sol,
                             const KernelSet &kernels, const SolverOptions &opt = {});

// Closed-form |g|^2 + Re g for g = -1/H0(ka).
double energy_residual_exact_foldy(double ka);

struct Diagnostics
{
  struct Pair
  {
    int j = 0;
    int l = 0;
    double log_det_m = 0.0;
    double log_det_mbar = 0.0;
    double identity_residual = 0.0; // log|det M| - (N+1) log|lambda_0| - log|det Mbar|
  };
  std::vector<Pair> pairs;
  // Blocks decay to below double resolution quickly, so up to 256 rows the determinants are
  // taken in 50-digit arithmetic with M recomputed from the stored Mbar.
  std::string determinant_method;
  double condition = 0.0;
  std::string condition_method;
  double spectral_radius = std::numeric_limits<double>::quiet_NaN();
};

// Requires a system built with keep_mbar.
Diagnostics diagnostics(const BlockSystem &sys);

// Full pipeline: validate, resonance check, factorize, build, solve, residuals.
struct SolveResult
{
  ScatteringSolution solution;
  BlockSystem system;
  KernelSet kernels;
  std::vector<std::string> warnings;
};

SolveResult solve(const ProblemSpec &spec, const SolverOptions &opt = {});

} // namespace wharray

#endif
