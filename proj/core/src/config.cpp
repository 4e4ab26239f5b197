// SPDX-License-Identifier: Apache-2.0

#include "wharray/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "wharray/error.hpp"

namespace wharray
{

namespace
{

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

struct PresetInfo
{
  const char *name;
  const char *description;
};

const PresetInfo kPresets[] = {
    {"wedge", "point scatterer wedge"},
    {"wedge-gaps", "wedge with missing scatterers"},
    {"wedge-extra", "wedge with extra scatterers"},
    {"faraday-cage", "multilayered Faraday cage, 12 arrays"},
    {"lattice-stop", "multiple infinite arrays, k = 5pi"},
    {"lattice-pass", "multiple infinite arrays, k = 7.5pi"},
    {"infinite-line", "doubly infinite line as two back-to-back arrays"},
    {"single-array", "one semi-infinite array along the x-axis"},
};

ArraySpec arr(double s, double alpha, double theta0, double r0)
{
  return {s, 0.001, alpha, r0, theta0};
}

std::vector<ArraySpec> lattice()
{
  std::vector<ArraySpec> out;
  for (int j = 1; j <= 12; ++j)
  {
    if (j % 2 == 1)
      out.push_back(arr(0.1, 0.0, -kPi / 2, 0.1 * (j - 1) / 2));
    else
    {
      const double h = j / 2.0 - 1.0;
      out.push_back(arr(0.1, kPi, -kPi + std::atan(h), 0.1 * std::sqrt(1.0 + h * h)));
    }
  }
  return out;
}

[[noreturn]] void field_error(const std::string &field, const std::string &what)
{
  throw ValidationError("config: field '" + field + "': " + what);
}

double real_value(const json &v, const std::string &field)
{
  if (v.is_number())
    return v.get<double>();
  if (v.is_string())
  {
    try
    {
      return parse_angle(v.get<std::string>());
    }
    catch (const ValidationError &e)
    {
      field_error(field, e.what());
    }
  }
  field_error(field, "expected a number or a multiple of pi");
}

int int_value(const json &v, const std::string &field)
{
  if (!v.is_number_integer())
    field_error(field, "expected an integer");
  return v.get<int>();
}

std::string string_value(const json &v, const std::string &field)
{
  if (!v.is_string())
    field_error(field, "expected a string");
  return v.get<std::string>();
}

void check_keys(const json &obj, const std::string &where, std::initializer_list<const char *> keys)
{
  for (auto it = obj.begin(); it != obj.end(); ++it)
  {
    bool known = false;
    for (const char *k : keys)
      known = known || it.key() == k;
    if (!known)
      field_error(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
  }
}

void apply_array(ArraySpec &a, const json &v, const std::string &where)
{
  if (!v.is_object())
    field_error(where, "expected an object");
  check_keys(v, where, {"s", "a", "alpha", "r0", "theta0"});
  if (v.contains("s"))
    a.s = real_value(v["s"], where + ".s");
  if (v.contains("a"))
    a.a = real_value(v["a"], where + ".a");
  if (v.contains("alpha"))
    a.alpha = real_value(v["alpha"], where + ".alpha");
  if (v.contains("r0"))
    a.r0 = real_value(v["r0"], where + ".r0");
  if (v.contains("theta0"))
    a.theta0 = real_value(v["theta0"], where + ".theta0");
}

std::pair<double, double> range_value(const json &v, const std::string &field)
{
  if (!v.is_array() || v.size() != 2)
    field_error(field, "expected [min, max]");
  return {real_value(v[0], field + "[0]"), real_value(v[1], field + "[1]")};
}

std::size_t line_of(const std::string &text, std::size_t byte)
{
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    line += text[i] == '\n';
  return line;
}

} // namespace

bool operator==(const RunConfig &a, const RunConfig &b)
{
  auto same_array = [](const ArraySpec &x, const ArraySpec &y) {
    return x.s == y.s && x.a == y.a && x.alpha == y.alpha && x.r0 == y.r0 && x.theta0 == y.theta0;
  };
  const ProblemSpec &p = a.problem, &q = b.problem;
  if (a.preset != b.preset || p.k != q.k || p.theta_i != q.theta_i || p.n_trunc != q.n_trunc ||
      p.arrays.size() != q.arrays.size())
    return false;
  for (std::size_t j = 0; j < p.arrays.size(); ++j)
    if (!same_array(p.arrays[j], q.arrays[j]))
      return false;
  const SolverOptions &s = a.solver, &t = b.solver;
  if (s.contour_size != t.contour_size || s.kernel.l0 != t.kernel.l0 ||
      s.kernel.k0_tol != t.kernel.k0_tol || s.kernel.contour_max != t.kernel.contour_max ||
      s.p_start != t.p_start || s.p_tol != t.p_tol || s.p_max != t.p_max ||
      s.edge_window != t.edge_window || s.resonance_tol != t.resonance_tol ||
      s.compute_energy != t.compute_energy)
    return false;
  const GridSpec &g = a.grid, &h = b.grid;
  if (g.x_min != h.x_min || g.x_max != h.x_max || g.y_min != h.y_min || g.y_max != h.y_max ||
      g.nx != h.nx || g.ny != h.ny)
    return false;
  if (a.spl_region.has_value() != b.spl_region.has_value())
    return false;
  if (a.spl_region && (a.spl_region->cx != b.spl_region->cx ||
                       a.spl_region->cy != b.spl_region->cy || a.spl_region->r != b.spl_region->r))
    return false;
  return a.lsc_points == b.lsc_points && a.output.coefficients == b.output.coefficients &&
         a.output.diagnostics == b.output.diagnostics && a.output.field == b.output.field &&
         a.output.compare == b.output.compare;
}

std::vector<std::string> preset_names()
{
  std::vector<std::string> out;
  for (const auto &p : kPresets)
    out.emplace_back(p.name);
  return out;
}

std::string preset_description(const std::string &name)
{
  for (const auto &p : kPresets)
    if (name == p.name)
      return p.description;
  throw ValidationError("unknown preset '" + name + "'");
}

RunConfig preset_config(const std::string &name)
{
  preset_description(name);
  RunConfig c;
  c.preset = name;
  ProblemSpec &p = c.problem;
  p.k = 5 * kPi;
  p.theta_i = kPi / 4;
  p.n_trunc = 100;
  if (name == "wedge")
    p.arrays = {arr(0.1, 5 * kPi / 6, 0.0, 0.0), arr(0.1, -5 * kPi / 6, -5 * kPi / 6, 0.1)};
  else if (name == "wedge-gaps")
    p.arrays = {arr(0.1, 5 * kPi / 6, 5 * kPi / 6, 0.3), arr(0.1, -5 * kPi / 6, -5 * kPi / 6, 0.3)};
  else if (name == "wedge-extra")
    p.arrays = {arr(0.1, 5 * kPi / 6, -kPi / 6, 0.45), arr(0.1, -5 * kPi / 6, kPi / 6, 0.45)};
  else if (name == "faraday-cage")
  {
    for (int j = 1; j <= 12; ++j)
    {
      const double ang = j <= 7 ? (j - 1) * kPi / 6 : (j - 13) * kPi / 6;
      p.arrays.push_back(arr(0.05, ang, ang, 0.1));
    }
    c.spl_region = default_cage_region(p);
  }
  else if (name == "lattice-stop" || name == "lattice-pass")
  {
    p.arrays = lattice();
    if (name == "lattice-pass")
      p.k = 7.5 * kPi;
  }
  else if (name == "infinite-line")
    p.arrays = {arr(0.1, 0.0, 0.0, 0.0), arr(0.1, kPi, kPi, 0.1)};
  else
    p.arrays = {arr(0.1, 0.0, 0.0, 0.0)};
  c.grid.nx = c.grid.ny = 201;
  return c;
}

double parse_angle(const std::string &text)
{
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch)))
      t += ch;
  auto number = [&](const std::string &s, double empty) {
    if (s.empty() || s == "+")
      return empty;
    if (s == "-")
      return -empty;
    std::size_t used = 0;
    double v = 0.0;
    try
    {
      v = std::stod(s, &used);
    }
    catch (const std::exception &)
    {
      used = 0;
    }
    if (used != s.size())
      throw ValidationError("cannot parse '" + text + "' as a real number");
    return v;
  };
  if (t.empty())
    throw ValidationError("empty angle");
  double den = 1.0;
  const std::size_t slash = t.find('/');
  if (slash != std::string::npos)
  {
    den = number(t.substr(slash + 1), std::nan(""));
    t = t.substr(0, slash);
    if (!(den != 0.0) || !std::isfinite(den))
      throw ValidationError("bad denominator in '" + text + "'");
  }
  const std::size_t pi_at = t.find("pi");
  double num;
  if (pi_at != std::string::npos)
  {
    if (pi_at + 2 != t.size())
      throw ValidationError("'pi' must end the numerator in '" + text + "'");
    std::string coef = t.substr(0, pi_at);
    if (!coef.empty() && coef.back() == '*')
      coef.pop_back();
    num = number(coef, 1.0) * kPi;
  }
  else
    num = number(t, std::nan(""));
  if (!std::isfinite(num))
    throw ValidationError("cannot parse '" + text + "' as a real number");
  return num / den;
}

RunConfig parse_config(const std::string &text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    std::ostringstream os;
    os << "config: parse error at line " << line_of(text, e.byte) << ": " << e.what();
    throw ValidationError(os.str());
  }
  if (!doc.is_object())
    throw ValidationError("config: top level must be an object");
  check_keys(doc, "", {"preset", "k", "theta_i", "truncation", "arrays", "solver", "field",
                       "lsc_points", "output"});

  RunConfig c;
  if (doc.contains("preset"))
    c = preset_config(string_value(doc["preset"], "preset"));
  ProblemSpec &p = c.problem;
  if (doc.contains("k"))
    p.k = real_value(doc["k"], "k");
  if (doc.contains("theta_i"))
    p.theta_i = real_value(doc["theta_i"], "theta_i");
  if (doc.contains("truncation"))
    p.n_trunc = int_value(doc["truncation"], "truncation");
  if (doc.contains("arrays"))
  {
    const json &a = doc["arrays"];
    if (a.is_array())
    {
      p.arrays.assign(a.size(), ArraySpec{});
      for (std::size_t j = 0; j < a.size(); ++j)
        apply_array(p.arrays[j], a[j], "arrays[" + std::to_string(j + 1) + "]");
    }
    else if (a.is_object())
    {
      // Partial override keyed by 1-based array number.
      for (auto it = a.begin(); it != a.end(); ++it)
      {
        std::size_t used = 0;
        int j = 0;
        try
        {
          j = std::stoi(it.key(), &used);
        }
        catch (const std::exception &)
        {
          used = 0;
        }
        if (used != it.key().size() || j < 1 || j > p.num_arrays())
          field_error("arrays." + it.key(), "not an existing array number");
        apply_array(p.arrays[j - 1], it.value(), "arrays." + it.key());
      }
    }
    else
      field_error("arrays", "expected a list or an object keyed by array number");
  }
  if (doc.contains("solver"))
  {
    const json &s = doc["solver"];
    if (!s.is_object())
      field_error("solver", "expected an object");
    check_keys(s, "solver", {"contour_size", "l0", "k0_tol", "contour_max", "p_start", "p_tol",
                             "p_max", "edge_window", "resonance_tol", "energy"});
    SolverOptions &o = c.solver;
    if (s.contains("contour_size"))
      o.contour_size = int_value(s["contour_size"], "solver.contour_size");
    if (s.contains("l0"))
      o.kernel.l0 = int_value(s["l0"], "solver.l0");
    if (s.contains("k0_tol"))
      o.kernel.k0_tol = real_value(s["k0_tol"], "solver.k0_tol");
    if (s.contains("contour_max"))
      o.kernel.contour_max = int_value(s["contour_max"], "solver.contour_max");
    if (s.contains("p_start"))
      o.p_start = int_value(s["p_start"], "solver.p_start");
    if (s.contains("p_tol"))
      o.p_tol = real_value(s["p_tol"], "solver.p_tol");
    if (s.contains("p_max"))
      o.p_max = int_value(s["p_max"], "solver.p_max");
    if (s.contains("edge_window"))
      o.edge_window = int_value(s["edge_window"], "solver.edge_window");
    if (s.contains("resonance_tol"))
      o.resonance_tol = real_value(s["resonance_tol"], "solver.resonance_tol");
    if (s.contains("energy"))
    {
      if (!s["energy"].is_boolean())
        field_error("solver.energy", "expected true or false");
      o.compute_energy = s["energy"].get<bool>();
    }
  }
  if (doc.contains("field"))
  {
    const json &f = doc["field"];
    if (!f.is_object())
      field_error("field", "expected an object");
    check_keys(f, "field", {"x", "y", "nx", "ny", "spl_region"});
    if (f.contains("x"))
      std::tie(c.grid.x_min, c.grid.x_max) = range_value(f["x"], "field.x");
    if (f.contains("y"))
      std::tie(c.grid.y_min, c.grid.y_max) = range_value(f["y"], "field.y");
    if (f.contains("nx"))
      c.grid.nx = int_value(f["nx"], "field.nx");
    if (f.contains("ny"))
      c.grid.ny = int_value(f["ny"], "field.ny");
    if (f.contains("spl_region"))
    {
      const json &r = f["spl_region"];
      if (r.is_null())
        c.spl_region.reset();
      else
      {
        if (!r.is_array() || r.size() != 3)
          field_error("field.spl_region", "expected [cx, cy, r] or null");
        c.spl_region = Disk{real_value(r[0], "field.spl_region[0]"),
                            real_value(r[1], "field.spl_region[1]"),
                            real_value(r[2], "field.spl_region[2]")};
      }
    }
  }
  if (doc.contains("lsc_points"))
    c.lsc_points = int_value(doc["lsc_points"], "lsc_points");
  if (doc.contains("output"))
  {
    const json &o = doc["output"];
    if (!o.is_object())
      field_error("output", "expected an object");
    check_keys(o, "output", {"coefficients", "diagnostics", "field", "compare"});
    if (o.contains("coefficients"))
      c.output.coefficients = string_value(o["coefficients"], "output.coefficients");
    if (o.contains("diagnostics"))
      c.output.diagnostics = string_value(o["diagnostics"], "output.diagnostics");
    if (o.contains("field"))
      c.output.field = string_value(o["field"], "output.field");
    if (o.contains("compare"))
      c.output.compare = string_value(o["compare"], "output.compare");
  }

  if (!(p.k > 0.0))
    field_error("k", "must be positive");
  if (p.n_trunc < 0)
    field_error("truncation", "must be nonnegative");
  if (p.arrays.empty())
    field_error("arrays", "at least one array is required");
  if (c.lsc_points < 2)
    field_error("lsc_points", "must be at least 2");
  try
  {
    validate_grid(c.grid);
  }
  catch (const ValidationError &e)
  {
    field_error("field", e.what());
  }
  return c;
}

RunConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw ValidationError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try
  {
    return parse_config(ss.str());
  }
  catch (const ValidationError &e)
  {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string write_config(const RunConfig &c)
{
  json doc = json::object();
  if (!c.preset.empty())
    doc["preset"] = c.preset;
  doc["k"] = c.problem.k;
  doc["theta_i"] = c.problem.theta_i;
  doc["truncation"] = c.problem.n_trunc;
  json arrays = json::array();
  for (const auto &a : c.problem.arrays)
    arrays.push_back({{"s", a.s}, {"a", a.a}, {"alpha", a.alpha}, {"r0", a.r0}, {"theta0", a.theta0}});
  doc["arrays"] = arrays;
  const SolverOptions &o = c.solver;
  doc["solver"] = {{"contour_size", o.contour_size}, {"l0", o.kernel.l0},
                   {"k0_tol", o.kernel.k0_tol},      {"contour_max", o.kernel.contour_max},
                   {"p_start", o.p_start},           {"p_tol", o.p_tol},
                   {"p_max", o.p_max},               {"edge_window", o.edge_window},
                   {"resonance_tol", o.resonance_tol}, {"energy", o.compute_energy}};
  json field = {{"x", {c.grid.x_min, c.grid.x_max}},
                {"y", {c.grid.y_min, c.grid.y_max}},
                {"nx", c.grid.nx},
                {"ny", c.grid.ny}};
  if (c.spl_region)
    field["spl_region"] = {c.spl_region->cx, c.spl_region->cy, c.spl_region->r};
  else
    field["spl_region"] = nullptr;
  doc["field"] = field;
  doc["lsc_points"] = c.lsc_points;
  doc["output"] = {{"coefficients", c.output.coefficients},
                   {"diagnostics", c.output.diagnostics},
                   {"field", c.output.field},
                   {"compare", c.output.compare}};
  return doc.dump(2) + "\n";
}

} // namespace wharray
