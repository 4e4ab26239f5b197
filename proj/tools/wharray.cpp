// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: solve, field, compare, diagnose, presets.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wharray/config.hpp"
#include "wharray/error.hpp"
#include "wharray/parallel.hpp"
#include "wharray/reference.hpp"

using namespace wharray;

namespace
{

struct Common
{
  std::string preset;
  std::string config;
  int truncation = -1;
  int threads = 0;
  std::string out;
  std::string k;
  std::string theta;
  std::string spl_region;
  std::string dump_kernel;
  std::string dump_a0;
  std::string coefficients;
  bool energy = false;
};

RunConfig resolve(const Common &c)
{
  if (!c.preset.empty() && !c.config.empty())
    throw ValidationError("use either --preset or --config, not both");
  if (c.preset.empty() && c.config.empty())
    throw ValidationError("one of --preset or --config is required");
  RunConfig cfg = c.preset.empty() ? load_config(c.config) : preset_config(c.preset);
  if (c.truncation >= 0)
    cfg.problem.n_trunc = c.truncation;
  if (!c.k.empty())
    cfg.problem.k = parse_angle(c.k);
  if (!c.theta.empty())
    cfg.problem.theta_i = parse_angle(c.theta);
  if (c.energy)
    cfg.solver.compute_energy = true;
  if (!c.spl_region.empty())
  {
    if (c.spl_region == "default")
      cfg.spl_region = default_cage_region(cfg.problem);
    else
    {
      std::vector<double> v;
      std::stringstream ss(c.spl_region);
      std::string item;
      while (std::getline(ss, item, ','))
        v.push_back(parse_angle(item));
      if (v.size() != 3)
        throw ValidationError("--spl-region expects cx,cy,r or 'default'");
      cfg.spl_region = Disk{v[0], v[1], v[2]};
    }
  }
  if (!(cfg.problem.k > 0.0))
    throw ValidationError("k must be positive");
  return cfg;
}

std::ofstream open_out(const std::string &path)
{
  std::ofstream os(path);
  if (!os)
    throw ValidationError("cannot open '" + path + "' for writing");
  os << std::setprecision(17);
  return os;
}

void write_header(std::ostream &os, const RunConfig &cfg, const char *kind)
{
  os << "# wharray " << kind << '\n';
  os << "# k=" << cfg.problem.k << " theta_i=" << cfg.problem.theta_i
     << " arrays=" << cfg.problem.num_arrays() << " N=" << cfg.problem.n_trunc << '\n';
}

void write_coefficients(std::ostream &os, const RunConfig &cfg,
                        const std::vector<Eigen::VectorXcd> &coeffs, const char *kind)
{
  write_header(os, cfg, kind);
  os << "j,m,re,im\n";
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    for (Eigen::Index m = 0; m < coeffs[j].size(); ++m)
      os << j + 1 << ',' << m << ',' << coeffs[j][m].real() << ',' << coeffs[j][m].imag() << '\n';
}

ScatteringSolution read_coefficients(const std::string &path, const RunConfig &cfg)
{
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open coefficient file '" + path + "'");
  const int J = cfg.problem.num_arrays(), n = cfg.problem.n_trunc;
  ScatteringSolution s;
  s.method = "file";
  s.coeffs.assign(J, Eigen::VectorXcd::Zero(n + 1));
  std::vector<std::vector<bool>> seen(J, std::vector<bool>(n + 1, false));
  std::string line;
  bool header_ok = false, table = false;
  long lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    if (line.rfind("# k=", 0) == 0)
    {
      std::ostringstream want;
      want << "arrays=" << J << " N=" << n;
      if (line.find(want.str()) == std::string::npos)
        throw ValidationError(path + ": header does not match the configuration (" + want.str() +
                              " expected)");
      header_ok = true;
      continue;
    }
    if (line.empty() || line[0] == '#')
      continue;
    if (!table)
    {
      if (line != "j,m,re,im")
        throw ValidationError(path + ": missing 'j,m,re,im' header row");
      table = true;
      continue;
    }
    std::stringstream ss(line);
    std::string f[4];
    for (auto &x : f)
      if (!std::getline(ss, x, ','))
        throw ValidationError(path + ": malformed row at line " + std::to_string(lineno));
    int j = 0, m = 0;
    double re = 0.0, im = 0.0;
    try
    {
      j = std::stoi(f[0]);
      m = std::stoi(f[1]);
      re = std::stod(f[2]);
      im = std::stod(f[3]);
    }
    catch (const std::exception &)
    {
      throw ValidationError(path + ": malformed row at line " + std::to_string(lineno));
    }
    if (j < 1 || j > J || m < 0 || m > n)
      throw ValidationError(path + ": index out of range at line " + std::to_string(lineno));
    s.coeffs[j - 1][m] = {re, im};
    seen[j - 1][m] = true;
  }
  if (!header_ok)
    throw ValidationError(path + ": missing '# k=' header line");
  for (const auto &v : seen)
    for (bool b : v)
      if (!b)
        throw ValidationError(path + ": coefficient table is incomplete");
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_resonance(std::ostream &os, const ProblemSpec &spec, double tol)
{
  const auto rep = resonance_report(spec, tol);
  for (std::size_t j = 0; j < rep.size(); ++j)
    os << "resonance_" << j + 1 << "=inward:" << rep[j].inward << ",outward:" << rep[j].outward
       << ",inward_distance:" << rep[j].inward_distance
       << ",outward_distance:" << rep[j].outward_distance << '\n';
}

int cmd_solve(const Common &c)
{
  const RunConfig cfg = resolve(c);
  const auto t0 = std::chrono::steady_clock::now();
  const SolveResult r = solve(cfg.problem, cfg.solver);
  const double t_solve = seconds_since(t0);
  for (const auto &w : r.warnings)
    std::cerr << "warning: " << w << '\n';

  double energy_bound = std::nan("");
  if (cfg.solver.compute_energy)
    energy_bound = energy_residual(cfg.problem, r.solution, r.kernels, cfg.solver).bound;

  const std::string coef = !c.out.empty() ? c.out
                           : !cfg.output.coefficients.empty() ? cfg.output.coefficients
                                                               : "coefficients.csv";
  const std::string diag = !cfg.output.diagnostics.empty() ? cfg.output.diagnostics
                                                           : coef + ".diag";
  {
    std::ofstream os = open_out(coef);
    write_coefficients(os, cfg, r.solution.coeffs, "coefficients");
  }
  {
    std::ofstream os = open_out(diag);
    write_header(os, cfg, "diagnostics");
    os << "method=" << r.solution.method << '\n';
    os << "condition_estimate=" << r.solution.condition_estimate << '\n';
    os << "foldy_interior_residual=" << r.solution.foldy_residual << '\n';
    os << "edge_window="
       << (cfg.solver.edge_window >= 0 ? cfg.solver.edge_window
                                       : default_edge_window(cfg.problem.n_trunc))
       << '\n';
    if (cfg.solver.compute_energy)
    {
      os << "energy_residual=" << r.solution.energy_residual << '\n';
      os << "energy_bound=" << energy_bound << '\n';
    }
    write_resonance(os, cfg.problem, cfg.solver.resonance_tol);
    for (std::size_t j = 0; j < r.kernels.size(); ++j)
      os << "kernel_" << j + 1 << "=K0:" << r.kernels[j]->k0.real() << ','
         << r.kernels[j]->k0.imag() << ",contour_size:" << r.kernels[j]->contour_size << '\n';
    const int J = r.system.num_arrays;
    for (int j = 0; j < J; ++j)
      for (int l = 0; l < J; ++l)
        if (j != l)
          os << "p_used_" << j + 1 << '_' << l + 1 << '=' << r.system.p_used[j * J + l] << '\n';
    for (const auto &w : r.warnings)
      os << "warning=" << w << '\n';
    os << "time_seconds=" << t_solve << '\n';
  }
  if (!c.dump_a0.empty())
  {
    std::ofstream os = open_out(c.dump_a0);
    write_coefficients(os, cfg, r.system.a0, "driving vectors");
  }
  if (!c.dump_kernel.empty())
  {
    std::ofstream os = open_out(c.dump_kernel);
    for (const auto &kd : r.kernels)
      dump_kernel(*kd, os);
  }
  std::cout << "wrote " << coef << " and " << diag << '\n';
  return 0;
}

int cmd_field(const Common &c)
{
  const RunConfig cfg = resolve(c);
  ScatteringSolution sol;
  if (!c.coefficients.empty())
    sol = read_coefficients(c.coefficients, cfg);
  else
  {
    SolverOptions opt = cfg.solver;
    opt.compute_residuals = false;
    const SolveResult r = solve(cfg.problem, opt);
    for (const auto &w : r.warnings)
      std::cerr << "warning: " << w << '\n';
    sol = r.solution;
  }
  const FieldGrid f = total_field(cfg.problem, sol, cfg.grid);
  const std::string path = !c.out.empty() ? c.out
                           : !cfg.output.field.empty() ? cfg.output.field
                                                        : "field.csv";
  std::ofstream os = open_out(path);
  const GridSpec &g = cfg.grid;
  os << "# wharray field\n";
  os << "# k=" << cfg.problem.k << " theta_i=" << cfg.problem.theta_i << " x=" << g.x_min << ','
     << g.x_max << " y=" << g.y_min << ',' << g.y_max << " nx=" << g.nx << " ny=" << g.ny << '\n';
  if (cfg.spl_region)
  {
    const double db = spl(cfg.problem, sol, *cfg.spl_region);
    os << "# spl_db=" << db << " region=" << cfg.spl_region->cx << ',' << cfg.spl_region->cy
       << ',' << cfg.spl_region->r << '\n';
    std::cout << std::setprecision(6) << "SPL " << db << " dB\n";
  }
  os << "x,y,re,im,mask\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
    {
      const std::size_t idx = f.index(i, j);
      os << g.x(i) << ',' << g.y(j) << ',' << f.values[idx].real() << ',' << f.values[idx].imag()
         << ',' << int(f.mask[idx]) << '\n';
    }
  std::cout << "wrote " << path << '\n';
  return 0;
}

int cmd_compare(const Common &c)
{
  const RunConfig cfg = resolve(c);
  const ProblemSpec &p = cfg.problem;
  if (p.num_arrays() > 2)
    throw ValidationError("compare: one or two arrays required");
  SolverOptions opt = cfg.solver;
  opt.compute_residuals = false;
  const SolveResult r = solve(p, opt);
  for (const auto &w : r.warnings)
    std::cerr << "warning: " << w << '\n';
  const ScatteringSolution lsc = lsc_solve(p, cfg.lsc_points);
  ComparisonReport rep = make_report(p, cfg.preset, opt.edge_window);
  if (is_infinite_line(p))
  {
    const ScatteringSolution ex =
        infinite_array_solution(p.k, p.arrays[0].s, p.theta_i, *r.kernels[0], p.n_trunc);
    compare(rep, "wh_exact", r.solution, ex);
    compare(rep, "lsc_exact", lsc, ex);
  }
  compare(rep, "wh_lsc", r.solution, lsc);
  const std::string path = !c.out.empty() ? c.out
                           : !cfg.output.compare.empty() ? cfg.output.compare
                                                          : "compare.csv";
  std::ofstream os = open_out(path);
  rep.write(os);
  for (const auto &col : rep.columns)
    std::cout << std::setprecision(6) << col.name << ": max " << col.max << ", centre "
              << col.centre_max << ", interior " << col.interior_max << ", ends " << col.end_max
              << '\n';
  std::cout << "wrote " << path << '\n';
  return 0;
}

int cmd_diagnose(const Common &c)
{
  const RunConfig cfg = resolve(c);
  SolverOptions opt = cfg.solver;
  opt.keep_mbar = true;
  const SolveResult r = solve(cfg.problem, opt);
  const Diagnostics d = diagnostics(r.system);
  std::ostringstream os;
  os << std::setprecision(17);
  write_header(os, cfg, "diagnose");
  os << "condition=" << d.condition << '\n';
  os << "condition_method=" << d.condition_method << '\n';
  if (!std::isnan(d.spectral_radius))
    os << "spectral_radius=" << d.spectral_radius << '\n';
  os << "foldy_interior_residual=" << r.solution.foldy_residual << '\n';
  os << "determinant_method=" << d.determinant_method << '\n';
  os << "j,l,log_det_m,log_det_mbar,identity_residual\n";
  for (const auto &pr : d.pairs)
    os << pr.j + 1 << ',' << pr.l + 1 << ',' << pr.log_det_m << ',' << pr.log_det_mbar << ','
       << pr.identity_residual << '\n';
  write_resonance(os, cfg.problem, cfg.solver.resonance_tol);
  for (const auto &w : r.warnings)
    os << "warning=" << w << '\n';
  if (c.out.empty())
    std::cout << os.str();
  else
  {
    std::ofstream f = open_out(c.out);
    f << os.str();
    std::cout << "wrote " << c.out << '\n';
  }
  return 0;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Plane-wave scattering by semi-infinite arrays of small sound-soft scatterers"};
  app.require_subcommand(1);
  Common c;
  std::string show;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--preset", c.preset, "Built-in configuration (see 'presets')");
    sub->add_option("--config", c.config, "JSON configuration file");
    sub->add_option("--truncation,-N", c.truncation, "Highest coefficient index per array");
    sub->add_option("--threads", c.threads, "Worker threads (0 = all cores, 1 = deterministic)");
    sub->add_option("--out,-o", c.out, "Output file");
    sub->add_option("--k", c.k, "Wavenumber override, e.g. 5pi");
    sub->add_option("--theta", c.theta, "Incident angle override, e.g. pi/4");
  };

  CLI::App *solve_cmd = app.add_subcommand("solve", "Solve for the scattering coefficients");
  add_common(solve_cmd);
  solve_cmd->add_option("--dump-kernel", c.dump_kernel, "Write c_n, lambda_n and K0 per kernel");
  solve_cmd->add_option("--dump-a0", c.dump_a0, "Write the driving vectors A0");
  solve_cmd->add_flag("--energy", c.energy, "Also evaluate the energy residual");

  CLI::App *field_cmd = app.add_subcommand("field", "Evaluate the total field on a grid");
  add_common(field_cmd);
  field_cmd->add_option("--coefficients", c.coefficients, "Coefficient file from 'solve'");
  field_cmd->add_option("--spl-region", c.spl_region, "cx,cy,r or 'default'");

  CLI::App *compare_cmd =
      app.add_subcommand("compare", "Compare WH, LSC and (infinite line) exact coefficients");
  add_common(compare_cmd);

  CLI::App *diag_cmd = app.add_subcommand("diagnose", "Determinants, conditioning, resonance");
  add_common(diag_cmd);

  CLI::App *presets_cmd = app.add_subcommand("presets", "List built-in configurations");
  presets_cmd->add_option("--show", show, "Print the configuration of one preset");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return 2;
  }

  try
  {
    set_num_threads(c.threads);
    if (*presets_cmd)
    {
      if (!show.empty())
        std::cout << write_config(preset_config(show));
      else
        for (const auto &n : preset_names())
          std::cout << std::left << std::setw(15) << n << preset_description(n) << '\n';
      return 0;
    }
    if (*solve_cmd)
      return cmd_solve(c);
    if (*field_cmd)
      return cmd_field(c);
    if (*compare_cmd)
      return cmd_compare(c);
    return cmd_diagnose(c);
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
