#include <critnls/config.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <critnls/dynamics.hpp>
#include <critnls/experiments.hpp>
#include <critnls/lp.hpp>
#include <critnls/random_fields.hpp>
#include <critnls/report_io.hpp>
#include <critnls/serialize.hpp>
#include <critnls/spectral.hpp>

namespace critnls {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Strict key-by-key reader: every accepted key is recorded, finish() rejects
// whatever was not consumed, and every diagnostic names the offending key.
class ConfigReader {
 public:
  ConfigReader(const json& obj, std::string scope)
      : obj_(obj), scope_(std::move(scope)) {
    if (!obj_.is_object())
      throw ConfigError(scope_ + ": config must be a JSON object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(scope_ + ": config key \"" + key + "\": " + msg);
  }

  int get_int(const std::string& key, int def, long long lo, long long hi) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_number_integer())
      fail(key, "must be an integer (got " + v->dump() + ")");
    const long long x = v->get<long long>();
    if (x < lo || x > hi)
      fail(key, "must lie in [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "] (got " + std::to_string(x) + ")");
    return static_cast<int>(x);
  }

  // Dimension key: the n >= 3 floor is the model's validity constraint and is
  // always cited; the ceiling depends on the grid family.
  int get_dim(const std::string& key, int def, int max_n) {
    const json* v = find(key);
    long long x = def;
    if (v) {
      if (!v->is_number_integer())
        fail(key, "must be an integer (got " + v->dump() + ")");
      x = v->get<long long>();
    }
    if (x < 3)
      fail(key, "dimension must satisfy n >= 3 (got " + std::to_string(x) +
                    "); the critical nonlinearity 4/(n-2) needs n >= 3");
    if (x > max_n) {
      if (max_n == 4)
        fail(key, "full tensor grids support n in {3, 4} (got " +
                      std::to_string(x) + "); use a radial command for larger n");
      fail(key, "radial kernels cover 3 <= n <= " + std::to_string(max_n) +
                    " (got " + std::to_string(x) + ")");
    }
    return static_cast<int>(x);
  }

  double get_double(const std::string& key, double def, double lo, double hi) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_number())
      fail(key, "must be a number (got " + v->dump() + ")");
    const double x = v->get<double>();
    if (!std::isfinite(x) || x < lo || x > hi) {
      std::ostringstream os;
      os << "must lie in [" << lo << ", " << hi << "] (got " << v->dump() << ")";
      fail(key, os.str());
    }
    return x;
  }

  bool get_bool(const std::string& key, bool def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_boolean()) fail(key, "must be a boolean (got " + v->dump() + ")");
    return v->get<bool>();
  }

  std::uint64_t get_seed(const std::string& key, std::uint64_t def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_number_integer())
      fail(key, "must be a non-negative integer (got " + v->dump() + ")");
    if (!v->is_number_unsigned() && v->get<long long>() < 0)
      fail(key, "must be a non-negative integer (got " + v->dump() + ")");
    return v->get<std::uint64_t>();
  }

  std::string get_enum(const std::string& key, const std::string& def,
                       const std::vector<std::string>& allowed,
                       bool required = false) {
    const json* v = find(key);
    if (!v) {
      if (required) fail(key, "required; one of " + join(allowed));
      return def;
    }
    if (!v->is_string()) fail(key, "must be a string (got " + v->dump() + ")");
    const std::string s = v->get<std::string>();
    for (const auto& a : allowed)
      if (s == a) return s;
    fail(key, "must be one of " + join(allowed) + " (got \"" + s + "\")");
  }

  std::string get_string(const std::string& key, bool required) {
    const json* v = find(key);
    if (!v) {
      if (required) fail(key, "required");
      return std::string();
    }
    if (!v->is_string()) fail(key, "must be a string (got " + v->dump() + ")");
    return v->get<std::string>();
  }

  std::vector<int> get_ints(const std::string& key, std::vector<int> def,
                            long long lo, long long hi) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_array() || v->empty())
      fail(key, "must be a non-empty array of integers (got " + v->dump() + ")");
    std::vector<int> out;
    for (const auto& e : *v) {
      if (!e.is_number_integer())
        fail(key, "must contain only integers (got element " + e.dump() + ")");
      const long long x = e.get<long long>();
      if (x < lo || x > hi)
        fail(key, "elements must lie in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] (got " + std::to_string(x) + ")");
      out.push_back(static_cast<int>(x));
    }
    return out;
  }

  std::vector<double> get_doubles(const std::string& key,
                                  std::vector<double> def, bool positive) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_array() || v->empty())
      fail(key, "must be a non-empty array of numbers (got " + v->dump() + ")");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number())
        fail(key, "must contain only numbers (got element " + e.dump() + ")");
      const double x = e.get<double>();
      if (!std::isfinite(x) || (positive && !(x > 0)))
        fail(key, std::string("elements must be finite") +
                      (positive ? " and > 0" : "") + " (got element " +
                      e.dump() + ")");
      out.push_back(x);
    }
    return out;
  }

  json get_object(const std::string& key) {
    const json* v = find(key);
    if (!v) return json::object();
    if (!v->is_object()) fail(key, "must be an object (got " + v->dump() + ")");
    return *v;
  }

  void check_window(double t0, double t1) const {
    if (!(t1 > t0)) {
      std::ostringstream os;
      os << "window end must exceed t0 = " << t0 << " (got " << t1 << ")";
      fail("t1", os.str());
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!used_.count(it.key()))
        throw ConfigError(scope_ + ": unknown config key \"" + it.key() + "\"");
  }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? ", " : "") + v[i];
    return s;
  }

  const json* find(const std::string& key) {
    used_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  json obj_;
  std::string scope_;
  std::set<std::string> used_;
};

bool is_pow2(double x) {
  int e = 0;
  return x > 0 && std::frexp(x, &e) == 0.5;
}

double get_mu(ConfigReader& r, double def) {
  const double mu = r.get_double("mu", def, -1.0, 1.0);
  if (mu != -1.0 && mu != 0.0 && mu != 1.0) {
    std::ostringstream os;
    os << "must be -1 (focusing), 0 (linear), or 1 (defocusing); got " << mu;
    r.fail("mu", os.str());
  }
  return mu;
}

SolverConfig get_solver(ConfigReader& r, const std::string& scope,
                        SolverConfig base) {
  const json sub = r.get_object("solver");
  ConfigReader sr(sub, scope + ".solver");
  base.max_sweeps = sr.get_int("max_sweeps", base.max_sweeps, 1, 10000);
  base.contraction_tol =
      sr.get_double("contraction_tol", base.contraction_tol, 0.0, 1.0);
  base.eta = sr.get_double("eta", base.eta, 1e-12, 1e3);
  base.residual_tol = sr.get_double("residual_tol", base.residual_tol, 0.0, 1e3);
  base.amplitude_ceiling =
      sr.get_double("amplitude_ceiling", base.amplitude_ceiling, 1.0, 1e300);
  base.time_points = sr.get_int("time_points", base.time_points, 2, 100000);
  sr.finish();
  return base;
}

json solver_doc(const SolverConfig& s) {
  json d;
  d["max_sweeps"] = s.max_sweeps;
  d["contraction_tol"] = s.contraction_tol;
  d["eta"] = s.eta;
  d["residual_tol"] = s.residual_tol;
  d["amplitude_ceiling"] = s.amplitude_ceiling;
  d["time_points"] = s.time_points;
  return d;
}

// ---------------------------------------------------------------------------
// check: strichartz
// ---------------------------------------------------------------------------

StrichartzConfig parse_strichartz(ConfigReader& r) {
  StrichartzConfig c;
  c.n = r.get_dim("n", c.n, 4);
  c.points_per_axis = r.get_int("points_per_axis", c.points_per_axis, 8, 512);
  c.extent = r.get_double("extent", c.extent, 1.0, 1024.0);
  c.seeds = r.get_int("seeds", c.seeds, 1, 10000);
  c.seed_base = r.get_seed("seed", c.seed_base);
  c.rescales = r.get_ints("rescales", c.rescales, -6, 6);
  c.t0 = r.get_double("t0", c.t0, -1e6, 1e6);
  c.t1 = r.get_double("t1", c.t1, -1e6, 1e6);
  r.check_window(c.t0, c.t1);
  c.time_points = r.get_int("time_points", c.time_points, 2, 10000);
  c.data_k_lo = r.get_int("data_k_lo", c.data_k_lo, -8, 8);
  c.data_k_hi = r.get_int("data_k_hi", c.data_k_hi, -8, 8);
  if (c.data_k_hi < c.data_k_lo)
    r.fail("data_k_hi", "band range is empty (data_k_hi < data_k_lo)");
  c.forcing_band = r.get_double("forcing_band", c.forcing_band, 1.0 / 256, 256);
  if (!is_pow2(c.forcing_band))
    r.fail("forcing_band", "band placements must be powers of two");
  c.max_spread = r.get_double("max_spread", c.max_spread, 1.0, 1e6);
  c.scale_tol = r.get_double("scale_tol", c.scale_tol, 0.0, 1.0);
  return c;
}

json dump_strichartz(const StrichartzConfig& c) {
  json d;
  d["n"] = c.n;
  d["points_per_axis"] = c.points_per_axis;
  d["extent"] = c.extent;
  d["seeds"] = c.seeds;
  d["seed"] = c.seed_base;
  d["rescales"] = c.rescales;
  d["t0"] = c.t0;
  d["t1"] = c.t1;
  d["time_points"] = c.time_points;
  d["data_k_lo"] = c.data_k_lo;
  d["data_k_hi"] = c.data_k_hi;
  d["forcing_band"] = c.forcing_band;
  d["max_spread"] = c.max_spread;
  d["scale_tol"] = c.scale_tol;
  return d;
}

// ---------------------------------------------------------------------------
// check: exotic-strichartz
// ---------------------------------------------------------------------------

ExoticStrichartzConfig parse_exotic(ConfigReader& r) {
  ExoticStrichartzConfig c;
  c.seeds = r.get_int("seeds", c.seeds, 1, 10000);
  c.seed_base = r.get_seed("seed", c.seed_base);
  c.rescales = r.get_ints("rescales", c.rescales, -6, 6);
  c.bands = r.get_doubles("bands", c.bands, /*positive=*/true);
  for (double b : c.bands)
    if (!is_pow2(b)) r.fail("bands", "band placements must be powers of two");
  c.t0 = r.get_double("t0", c.t0, -1e6, 1e6);
  c.t1 = r.get_double("t1", c.t1, -1e6, 1e6);
  r.check_window(c.t0, c.t1);
  c.time_points = r.get_int("time_points", c.time_points, 2, 10000);
  c.tensor3 = r.get_bool("tensor3", c.tensor3);
  c.radial7 = r.get_bool("radial7", c.radial7);
  if (!c.tensor3 && !c.radial7)
    r.fail("radial7", "at least one of tensor3/radial7 must stay enabled");
  c.tensor_points = r.get_int("tensor_points", c.tensor_points, 8, 512);
  c.tensor_extent = r.get_double("tensor_extent", c.tensor_extent, 1.0, 1024.0);
  c.radial_per_octave = r.get_int("radial_per_octave", c.radial_per_octave, 4, 1024);
  c.radial_t1 = r.get_double("radial_t1", c.radial_t1, 1e-6, 1e6);
  c.radial_r_lo = r.get_int("radial_r_lo", c.radial_r_lo, -30, 30);
  c.radial_r_hi = r.get_int("radial_r_hi", c.radial_r_hi, -30, 30);
  if (c.radial_r_hi <= c.radial_r_lo)
    r.fail("radial_r_hi", "radial octave range is empty");
  c.radial_rho_lo = r.get_int("radial_rho_lo", c.radial_rho_lo, -30, 30);
  c.radial_rho_hi = r.get_int("radial_rho_hi", c.radial_rho_hi, -30, 30);
  if (c.radial_rho_hi <= c.radial_rho_lo)
    r.fail("radial_rho_hi", "frequency octave range is empty");
  c.max_spread = r.get_double("max_spread", c.max_spread, 1.0, 1e6);
  c.scale_tol = r.get_double("scale_tol", c.scale_tol, 0.0, 1.0);
  return c;
}

json dump_exotic(const ExoticStrichartzConfig& c) {
  json d;
  d["seeds"] = c.seeds;
  d["seed"] = c.seed_base;
  d["rescales"] = c.rescales;
  d["bands"] = c.bands;
  d["t0"] = c.t0;
  d["t1"] = c.t1;
  d["time_points"] = c.time_points;
  d["tensor3"] = c.tensor3;
  d["radial7"] = c.radial7;
  d["tensor_points"] = c.tensor_points;
  d["tensor_extent"] = c.tensor_extent;
  d["radial_per_octave"] = c.radial_per_octave;
  d["radial_t1"] = c.radial_t1;
  d["radial_r_lo"] = c.radial_r_lo;
  d["radial_r_hi"] = c.radial_r_hi;
  d["radial_rho_lo"] = c.radial_rho_lo;
  d["radial_rho_hi"] = c.radial_rho_hi;
  d["max_spread"] = c.max_spread;
  d["scale_tol"] = c.scale_tol;
  return d;
}

// ---------------------------------------------------------------------------
// check: nonlinear-estimate
// ---------------------------------------------------------------------------

NonlinearEstimateConfig parse_nonlinear(ConfigReader& r) {
  NonlinearEstimateConfig c;
  c.dims = r.get_ints("dims", c.dims, 3, 8);
  for (int n : c.dims)
    if (n < 5)
      r.fail("dims", "the product-estimate campaign runs on radial grids for "
                     "n >= 5 (got " + std::to_string(n) + ")");
  c.seeds = r.get_int("seeds", c.seeds, 1, 10000);
  c.seed_base = r.get_seed("seed", c.seed_base);
  c.per_octave = r.get_int("per_octave", c.per_octave, 4, 1024);
  c.r_lo = r.get_int("r_lo", c.r_lo, -30, 30);
  c.r_hi = r.get_int("r_hi", c.r_hi, -30, 30);
  if (c.r_hi <= c.r_lo) r.fail("r_hi", "radial octave range is empty");
  c.rho_lo = r.get_int("rho_lo", c.rho_lo, -30, 30);
  c.rho_hi = r.get_int("rho_hi", c.rho_hi, -30, 30);
  if (c.rho_hi <= c.rho_lo) r.fail("rho_hi", "frequency octave range is empty");
  c.t0 = r.get_double("t0", c.t0, -1e6, 1e6);
  c.t1 = r.get_double("t1", c.t1, -1e6, 1e6);
  r.check_window(c.t0, c.t1);
  c.time_points = r.get_int("time_points", c.time_points, 2, 10000);
  c.max_spread = r.get_double("max_spread", c.max_spread, 1.0, 1e6);
  c.slope_margin = r.get_double("slope_margin", c.slope_margin, 0.0, 10.0);
  c.para_m_lo = r.get_int("para_m_lo", c.para_m_lo, -8, 8);
  c.para_m_hi = r.get_int("para_m_hi", c.para_m_hi, -8, 12);
  if (c.para_m_hi <= c.para_m_lo)
    r.fail("para_m_hi", "output-band sweep is empty");
  c.para_fit_lo = r.get_int("para_fit_lo", c.para_fit_lo, c.para_m_lo, c.para_m_hi);
  c.para_seeds = r.get_int("para_seeds", c.para_seeds, 1, 10000);
  return c;
}

json dump_nonlinear(const NonlinearEstimateConfig& c) {
  json d;
  d["dims"] = c.dims;
  d["seeds"] = c.seeds;
  d["seed"] = c.seed_base;
  d["per_octave"] = c.per_octave;
  d["r_lo"] = c.r_lo;
  d["r_hi"] = c.r_hi;
  d["rho_lo"] = c.rho_lo;
  d["rho_hi"] = c.rho_hi;
  d["t0"] = c.t0;
  d["t1"] = c.t1;
  d["time_points"] = c.time_points;
  d["max_spread"] = c.max_spread;
  d["slope_margin"] = c.slope_margin;
  d["para_m_lo"] = c.para_m_lo;
  d["para_m_hi"] = c.para_m_hi;
  d["para_fit_lo"] = c.para_fit_lo;
  d["para_seeds"] = c.para_seeds;
  return d;
}

// ---------------------------------------------------------------------------
// check: small-data
// ---------------------------------------------------------------------------

SmallDataConfig parse_small_data(ConfigReader& r) {
  SmallDataConfig c;
  c.n = r.get_dim("n", c.n, 4);
  c.points_per_axis = r.get_int("points_per_axis", c.points_per_axis, 8, 512);
  c.extent = r.get_double("extent", c.extent, 1.0, 1024.0);
  c.etas = r.get_doubles("etas", c.etas, /*positive=*/true);
  c.mu = get_mu(r, c.mu);
  c.t0 = r.get_double("t0", c.t0, -1e6, 1e6);
  c.t1 = r.get_double("t1", c.t1, -1e6, 1e6);
  r.check_window(c.t0, c.t1);
  c.solver = get_solver(r, "check", c.solver);
  c.max_spread = r.get_double("max_spread", c.max_spread, 1.0, 1e6);
  return c;
}

json dump_small_data(const SmallDataConfig& c) {
  json d;
  d["n"] = c.n;
  d["points_per_axis"] = c.points_per_axis;
  d["extent"] = c.extent;
  d["etas"] = c.etas;
  d["mu"] = c.mu;
  d["t0"] = c.t0;
  d["t1"] = c.t1;
  d["solver"] = solver_doc(c.solver);
  d["max_spread"] = c.max_spread;
  return d;
}

// ---------------------------------------------------------------------------
// check: lipschitz
// ---------------------------------------------------------------------------

LipschitzConfig parse_lipschitz(ConfigReader& r) {
  LipschitzConfig c;
  c.n = r.get_dim("n", c.n, 4);
  c.points_per_axis = r.get_int("points_per_axis", c.points_per_axis, 8, 512);
  c.extent = r.get_double("extent", c.extent, 1.0, 1024.0);
  c.base_free_w = r.get_double("base_free_w", c.base_free_w, 1e-9, 10.0);
  c.epsilons = r.get_doubles("epsilons", c.epsilons, /*positive=*/true);
  c.seed = r.get_seed("seed", c.seed);
  c.mu = get_mu(r, c.mu);
  c.t0 = r.get_double("t0", c.t0, -1e6, 1e6);
  c.t1 = r.get_double("t1", c.t1, -1e6, 1e6);
  r.check_window(c.t0, c.t1);
  c.solver = get_solver(r, "check", c.solver);
  c.slope_lo = r.get_double("slope_lo", c.slope_lo, 0.0, 10.0);
  c.slope_hi = r.get_double("slope_hi", c.slope_hi, c.slope_lo, 10.0);
  c.r2_min = r.get_double("r2_min", c.r2_min, 0.0, 1.0);
  c.decades_min = r.get_double("decades_min", c.decades_min, 0.0, 20.0);
  return c;
}

json dump_lipschitz(const LipschitzConfig& c) {
  json d;
  d["n"] = c.n;
  d["points_per_axis"] = c.points_per_axis;
  d["extent"] = c.extent;
  d["base_free_w"] = c.base_free_w;
  d["epsilons"] = c.epsilons;
  d["seed"] = c.seed;
  d["mu"] = c.mu;
  d["t0"] = c.t0;
  d["t1"] = c.t1;
  d["solver"] = solver_doc(c.solver);
  d["slope_lo"] = c.slope_lo;
  d["slope_hi"] = c.slope_hi;
  d["r2_min"] = c.r2_min;
  d["decades_min"] = c.decades_min;
  return d;
}

// ---------------------------------------------------------------------------
// stability
// ---------------------------------------------------------------------------

StabilityConfig parse_stability(ConfigReader& r) {
  StabilityConfig c;
  c.n = r.get_dim("n", c.n, 8);
  c.points_per_axis = r.get_int("points_per_axis", c.points_per_axis, 8, 512);
  c.extent = r.get_double("extent", c.extent, 1.0, 1024.0);
  c.radial_per_octave = r.get_int("radial_per_octave", c.radial_per_octave, 4, 1024);
  c.base_free_w = r.get_double("base_free_w", c.base_free_w, 1e-9, 10.0);
  c.epsilons = r.get_doubles("epsilons", c.epsilons, /*positive=*/true);
  c.seed = r.get_seed("seed", c.seed);
  c.mu = get_mu(r, c.mu);
  c.t0 = r.get_double("t0", c.t0, -1e6, 1e6);
  c.t1 = r.get_double("t1", c.t1, -1e6, 1e6);
  r.check_window(c.t0, c.t1);
  const std::string reg = r.get_enum(
      "regime", c.regime == StabilityRegime::short_time ? "short" : "long",
      {"short", "long"});
  c.regime = reg == "short" ? StabilityRegime::short_time
                            : StabilityRegime::long_time;
  c.nu = r.get_double("nu", c.nu, 1e-6, 10.0);
  c.eps0 = r.get_double("eps0", c.eps0, 1e-9, 100.0);
  c.theta_min = r.get_double("theta_min", c.theta_min, 0.0, 2.0);
  c.solver = get_solver(r, "stability", c.solver);
  c.r2_min = r.get_double("r2_min", c.r2_min, 0.0, 1.0);
  return c;
}

json dump_stability(const StabilityConfig& c) {
  json d;
  d["n"] = c.n;
  d["points_per_axis"] = c.points_per_axis;
  d["extent"] = c.extent;
  d["radial_per_octave"] = c.radial_per_octave;
  d["base_free_w"] = c.base_free_w;
  d["epsilons"] = c.epsilons;
  d["seed"] = c.seed;
  d["mu"] = c.mu;
  d["t0"] = c.t0;
  d["t1"] = c.t1;
  d["regime"] = c.regime == StabilityRegime::short_time ? "short" : "long";
  d["nu"] = c.nu;
  d["eps0"] = c.eps0;
  d["theta_min"] = c.theta_min;
  d["solver"] = solver_doc(c.solver);
  d["r2_min"] = c.r2_min;
  return d;
}

// ---------------------------------------------------------------------------
// scatter
// ---------------------------------------------------------------------------

ScatteringConfig parse_scattering(ConfigReader& r) {
  ScatteringConfig c;
  c.n = r.get_dim("n", c.n, 8);
  c.per_octave = r.get_int("per_octave", c.per_octave, 4, 1024);
  c.r_oct_lo = r.get_int("r_oct_lo", c.r_oct_lo, -30, 30);
  c.r_oct_hi = r.get_int("r_oct_hi", c.r_oct_hi, -30, 30);
  if (c.r_oct_hi <= c.r_oct_lo) r.fail("r_oct_hi", "radial octave range is empty");
  c.rho_oct_lo = r.get_int("rho_oct_lo", c.rho_oct_lo, -30, 30);
  c.rho_oct_hi = r.get_int("rho_oct_hi", c.rho_oct_hi, -30, 30);
  if (c.rho_oct_hi <= c.rho_oct_lo)
    r.fail("rho_oct_hi", "frequency octave range is empty");
  c.amplitude = r.get_double("amplitude", c.amplitude, 1e-9, 1e3);
  c.mu = get_mu(r, c.mu);
  c.horizon = r.get_double("horizon", c.horizon, 1e-6, 1e6);
  c.dt = r.get_double("dt", c.dt, 1e-9, 1e3);
  c.samples = r.get_int("samples", c.samples, 2, 100000);
  c.tail_tol = r.get_double("tail_tol", c.tail_tol, 0.0, 1.0);
  c.continuity_eps = r.get_doubles("continuity_eps", c.continuity_eps, true);
  c.continuity_spread_max =
      r.get_double("continuity_spread_max", c.continuity_spread_max, 1.0, 1e6);
  c.seed = r.get_seed("seed", c.seed);
  return c;
}

json dump_scattering(const ScatteringConfig& c) {
  json d;
  d["n"] = c.n;
  d["per_octave"] = c.per_octave;
  d["r_oct_lo"] = c.r_oct_lo;
  d["r_oct_hi"] = c.r_oct_hi;
  d["rho_oct_lo"] = c.rho_oct_lo;
  d["rho_oct_hi"] = c.rho_oct_hi;
  d["amplitude"] = c.amplitude;
  d["mu"] = c.mu;
  d["horizon"] = c.horizon;
  d["dt"] = c.dt;
  d["samples"] = c.samples;
  d["tail_tol"] = c.tail_tol;
  d["continuity_eps"] = c.continuity_eps;
  d["continuity_spread_max"] = c.continuity_spread_max;
  d["seed"] = c.seed;
  return d;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveSpec {
  std::string mode = "tensor";  // tensor | radial
  int n = 3;
  int points_per_axis = 64;
  double extent = 16.0;
  int per_octave = 96;
  int r_oct_lo = -8, r_oct_hi = 6;
  int rho_oct_lo = -6, rho_oct_hi = 2;
  std::string datum = "gaussian";  // gaussian | random-band
  double band = 1.0;
  double amplitude = 0.05;
  std::uint64_t seed = 1;
  double mu = 1.0;
  std::string method = "picard";  // picard | split-step | lawson
  double t0 = 0.0, t1 = 0.5;
  double dt = 0.0025;
  int record_points = 17;
  SolverConfig solver;
};

SolveSpec parse_solve(ConfigReader& r) {
  SolveSpec c;
  c.mode = r.get_enum("mode", c.mode, {"tensor", "radial"});
  c.n = r.get_dim("n", c.n, c.mode == "tensor" ? 4 : 8);
  c.points_per_axis = r.get_int("points_per_axis", c.points_per_axis, 8, 512);
  c.extent = r.get_double("extent", c.extent, 1.0, 1024.0);
  c.per_octave = r.get_int("per_octave", c.per_octave, 4, 1024);
  c.r_oct_lo = r.get_int("r_oct_lo", c.r_oct_lo, -30, 30);
  c.r_oct_hi = r.get_int("r_oct_hi", c.r_oct_hi, -30, 30);
  if (c.r_oct_hi <= c.r_oct_lo) r.fail("r_oct_hi", "radial octave range is empty");
  c.rho_oct_lo = r.get_int("rho_oct_lo", c.rho_oct_lo, -30, 30);
  c.rho_oct_hi = r.get_int("rho_oct_hi", c.rho_oct_hi, -30, 30);
  if (c.rho_oct_hi <= c.rho_oct_lo)
    r.fail("rho_oct_hi", "frequency octave range is empty");
  c.datum = r.get_enum("datum", c.datum, {"gaussian", "random-band"});
  c.band = r.get_double("band", c.band, 1.0 / 256, 256);
  if (!is_pow2(c.band)) r.fail("band", "band placements must be powers of two");
  c.amplitude = r.get_double("amplitude", c.amplitude, 1e-12, 1e6);
  c.seed = r.get_seed("seed", c.seed);
  c.mu = get_mu(r, c.mu);
  c.method = r.get_enum("method", c.method, {"picard", "split-step", "lawson"});
  if (c.method == "split-step" && c.mode == "radial")
    r.fail("method", "split-step integrates on full tensor grids only; "
                     "use lawson or picard on radial grids");
  c.t0 = r.get_double("t0", c.t0, -1e6, 1e6);
  c.t1 = r.get_double("t1", c.t1, -1e6, 1e6);
  r.check_window(c.t0, c.t1);
  c.dt = r.get_double("dt", c.dt, 1e-9, 1e3);
  c.record_points = r.get_int("record_points", c.record_points, 2, 100000);
  c.solver = get_solver(r, "solve", c.solver);
  return c;
}

json dump_solve(const SolveSpec& c) {
  json d;
  d["mode"] = c.mode;
  d["n"] = c.n;
  if (c.mode == "tensor") {
    d["points_per_axis"] = c.points_per_axis;
    d["extent"] = c.extent;
  } else {
    d["per_octave"] = c.per_octave;
    d["r_oct_lo"] = c.r_oct_lo;
    d["r_oct_hi"] = c.r_oct_hi;
    d["rho_oct_lo"] = c.rho_oct_lo;
    d["rho_oct_hi"] = c.rho_oct_hi;
  }
  d["datum"] = c.datum;
  if (c.datum == "random-band") {
    d["band"] = c.band;
    d["seed"] = c.seed;
  }
  d["amplitude"] = c.amplitude;
  d["mu"] = c.mu;
  d["method"] = c.method;
  d["t0"] = c.t0;
  d["t1"] = c.t1;
  if (c.method != "picard") d["dt"] = c.dt;
  d["record_points"] = c.record_points;
  d["solver"] = solver_doc(c.solver);
  return d;
}

// ---------------------------------------------------------------------------
// command-level validation
// ---------------------------------------------------------------------------

const std::vector<std::string> kCheckExperiments = {
    "strichartz", "exotic-strichartz", "nonlinear-estimate", "small-data",
    "lipschitz"};

void merge_into(json& dst, const json& src) {
  for (auto it = src.begin(); it != src.end(); ++it) dst[it.key()] = it.value();
}

json validate_check(const json& raw) {
  ConfigReader r(raw, "check");
  const std::string ex =
      r.get_enum("experiment", "", kCheckExperiments, /*required=*/true);
  json d;
  d["experiment"] = ex;
  if (ex == "strichartz")
    merge_into(d, dump_strichartz(parse_strichartz(r)));
  else if (ex == "exotic-strichartz")
    merge_into(d, dump_exotic(parse_exotic(r)));
  else if (ex == "nonlinear-estimate")
    merge_into(d, dump_nonlinear(parse_nonlinear(r)));
  else if (ex == "small-data")
    merge_into(d, dump_small_data(parse_small_data(r)));
  else
    merge_into(d, dump_lipschitz(parse_lipschitz(r)));
  r.finish();
  return d;
}

// ---------------------------------------------------------------------------
// execution
// ---------------------------------------------------------------------------

ExperimentReport dispatch_check(const json& cfg) {
  ConfigReader r(cfg, "check");
  const std::string ex =
      r.get_enum("experiment", "", kCheckExperiments, /*required=*/true);
  if (ex == "strichartz") return check_strichartz(parse_strichartz(r));
  if (ex == "exotic-strichartz") return check_exotic_strichartz(parse_exotic(r));
  if (ex == "nonlinear-estimate")
    return check_nonlinear_estimate(parse_nonlinear(r));
  if (ex == "small-data") return small_data_experiment(parse_small_data(r));
  return lipschitz_experiment(parse_lipschitz(r));
}

int finish_report(const ExperimentReport& rep, const fs::path& out) {
  for (const auto& p : write_report_bundle(rep, out.string()))
    std::cout << "wrote " << p << "\n";
  std::cout << rep.id << ": " << verdict_name(rep.verdict)
            << (rep.reason.empty() ? "" : " (" + rep.reason + ")") << "\n";
  switch (rep.verdict) {
    case ExperimentReport::Verdict::pass:
      return 0;
    case ExperimentReport::Verdict::inconclusive:
      return 2;
    default:
      return 1;
  }
}

int run_solve(const json& cfg, const fs::path& out) {
  ConfigReader r(cfg, "solve");
  const SolveSpec c = parse_solve(r);
  const Grid g = c.mode == "tensor"
                     ? Grid::tensor(c.n, c.points_per_axis, c.extent)
                     : Grid::radial_octaves(c.n, c.per_octave, c.r_oct_lo,
                                            c.r_oct_hi, c.rho_oct_lo,
                                            c.rho_oct_hi);
  Field u0 = [&] {
    if (c.datum == "gaussian") return cplx(c.amplitude, 0.0) * gaussian_datum(g);
    Rng rng(c.seed);
    Field f = random_band_field(g, c.band, rng);
    f *= cplx(c.amplitude / hdot_norm(f, 1.0), 0.0);
    return g.mode() == GridMode::full_tensor ? fourier_inverse(f) : std::move(f);
  }();
  const NonlinearitySpec spec =
      c.mu == 0.0 ? NonlinearitySpec::linear() : NonlinearitySpec::power(c.n, c.mu);

  json summary;
  summary["config"] = dump_solve(c);
  Trajectory traj = [&] {
    if (c.method == "picard") {
      SolverConfig sc = c.solver;
      sc.time_points = std::max(sc.time_points, c.record_points);
      SolveResult res = picard_solve(u0, c.t0, c.t1, spec, sc);
      summary["sweeps"] = res.sweeps;
      summary["diff_history"] = res.diff_history;
      summary["residual"] = res.residual;
      summary["free_w_norm"] = res.free_w_norm;
      return std::move(res.u);
    }
    if (c.method == "split-step")
      return split_step_solve(u0, c.t0, c.t1, spec, c.dt, c.record_points);
    return lawson_solve(u0, c.t0, c.t1, spec, c.dt, c.record_points);
  }();

  const double m0 = l2_norm(traj.slices.front());
  double drift = 0;
  for (const auto& f : traj.slices) {
    const double m = l2_norm(f);
    drift = std::max(drift, std::abs(m * m / (m0 * m0) - 1.0));
  }
  summary["mass_initial"] = m0;
  summary["mass_drift"] = drift;
  summary["hdot1_final"] = hdot_norm(traj.slices.back(), 1.0);
  summary["energy_initial"] = hamiltonian(traj.slices.front(), spec);
  summary["energy_final"] = hamiltonian(traj.slices.back(), spec);

  const fs::path traj_path = out / "trajectory.bin";
  save_trajectory(traj, traj_path.string());
  const fs::path sum_path = out / "solve.json";
  std::ofstream f(sum_path);
  f << summary.dump(2) << "\n";
  std::cout << "wrote " << traj_path.string() << "\n"
            << "wrote " << sum_path.string() << "\n"
            << "solve: done (mass drift " << drift << ")\n";
  return 0;
}

int run_report(const json& cfg, const fs::path& out) {
  const std::string input = cfg.at("input").get<std::string>();
  std::ifstream f(input);
  if (!f) {
    std::cerr << "error: cannot open report file " << input << "\n";
    return 1;
  }
  const json doc = json::parse(f);
  return finish_report(report_from_json(doc), out);
}

}  // namespace

std::string version_stamp() {
  return std::string("critnls 1.0.0 (bands ") + kBumpProfileId + ")";
}

std::string default_output_root() {
  const char* env = std::getenv("CRITNLS_OUT");
  return env && *env ? std::string(env) : std::string("critnls-out");
}

json validate_config(const std::string& command, const json& raw) {
  if (command == "check") return validate_check(raw);
  if (command == "stability") {
    ConfigReader r(raw, "stability");
    const StabilityConfig c = parse_stability(r);
    r.finish();
    return dump_stability(c);
  }
  if (command == "scatter") {
    ConfigReader r(raw, "scatter");
    const ScatteringConfig c = parse_scattering(r);
    r.finish();
    return dump_scattering(c);
  }
  if (command == "solve") {
    ConfigReader r(raw, "solve");
    const SolveSpec c = parse_solve(r);
    r.finish();
    return dump_solve(c);
  }
  if (command == "report") {
    ConfigReader r(raw, "report");
    json d;
    d["input"] = r.get_string("input", /*required=*/true);
    r.finish();
    return d;
  }
  throw ConfigError("unknown command \"" + command +
                    "\"; expected solve, check, stability, scatter, or report");
}

int run(const RunManifest& manifest) {
  try {
    const json cfg = validate_config(manifest.command, manifest.config);

    std::string leaf = manifest.command;
    if (manifest.command == "check")
      leaf += "-" + cfg.at("experiment").get<std::string>();
    const fs::path out = manifest.out_dir.empty()
                             ? fs::path(default_output_root()) / leaf
                             : fs::path(manifest.out_dir);
    const fs::path man_path = out / "manifest.json";
    if (fs::exists(man_path) && !manifest.force) {
      std::cerr << "error: " << man_path.string()
                << " already exists; refusing to overwrite a finished run "
                   "(pass --force to redo it in place)\n";
      return 1;
    }
    fs::create_directories(out);

    json man;
    man["version"] =
        manifest.version.empty() ? version_stamp() : manifest.version;
    man["command"] = manifest.command;
    if (!manifest.config_path.empty())
      man["config_path"] = manifest.config_path;
    man["threads"] = manifest.threads;
    man["config"] = cfg;
    {
      std::ofstream f(man_path);
      f << man.dump(2) << "\n";
    }

    if (manifest.command == "solve") return run_solve(cfg, out);
    if (manifest.command == "report") return run_report(cfg, out);
    ExperimentReport rep;
    if (manifest.command == "check")
      rep = dispatch_check(cfg);
    else if (manifest.command == "stability") {
      ConfigReader r(cfg, "stability");
      rep = stability_experiment(parse_stability(r));
    } else {
      ConfigReader r(cfg, "scatter");
      rep = scattering_experiment(parse_scattering(r));
    }
    return finish_report(rep, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace critnls
