#pragma once
#include <stdexcept>
#include <utility>
#include <vector>

#include <critnls/nonlinearity.hpp>
#include <critnls/trajectory.hpp>

namespace critnls {

struct SolverConfig {
  int max_sweeps = 25;
  // successive-iterate distance (sup-in-time L^2, the cheap stand-in for the
  // full S0 metric) relative to max(1, ||u0||_2)
  double contraction_tol = 1e-10;
  // smallness threshold on the measured free-evolution W norm
  double eta = 0.1;
  // integral-equation defect allowed in a returned solution (floor set by the
  // trapezoid panel rule, so it tracks the time resolution, not contraction)
  double residual_tol = 1e-3;
  // divergence guard: sup-amplitude ceiling relative to the initial sup
  double amplitude_ceiling = 1e6;
  int time_points = 17;  // trajectory samples including both endpoints
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// The measured free-evolution W norm exceeded eta, or iterates failed to
// contract within max_sweeps.
struct SmallnessError : SolverError {
  double measured_w = 0;
  SmallnessError(const std::string& msg, double w) : SolverError(msg), measured_w(w) {}
};
struct DivergenceError : SolverError {
  int step_index = -1;
  DivergenceError(const std::string& msg, int step) : SolverError(msg), step_index(step) {}
};
struct ResidualError : SolverError {
  double residual = 0;
  ResidualError(const std::string& msg, double r) : SolverError(msg), residual(r) {}
};

// Solution slices are physical on tensor grids and frequency-side on radial
// grids: the log-radial quadrature cannot represent a well-dispersed field in
// physical space (fine oscillations beyond node density alias), while the
// frequency samples stay faithful, so conserved quantities and scattering
// data are measured there.
Trajectory free_evolution(const Field& u0, double t0, double t1, int count);

// t -> -i int_{t0}^t e^{i(t-s)Delta} F(s) ds on the forcing's own time lattice,
// via the exact-propagator trapezoid recursion
//   I_{k+1} = e^{i delta Delta}(I_k - (i delta/2) F_k) - (i delta/2) F_{k+1}.
// t0 must match the forcing's initial time.
Trajectory duhamel_integral(const Trajectory& forcing, double t0);

struct SolveResult {
  Trajectory u;
  std::vector<double> diff_history;  // sup-in-time L^2 of successive differences
  double residual = 0;               // final integral-equation defect (same metric)
  double free_w_norm = 0;            // measured smallness hypothesis
  int sweeps = 0;
};

// Picard iteration of the integral equation u = e^{i(t-t0)Delta}u0 + I[f(u)]:
// requires the measured free-evolution W norm <= eta, iterates until the
// successive-difference metric drops below tolerance, and verifies the defect
// of the returned trajectory.
SolveResult picard_solve(const Field& u0, double t0, double t1,
                         const NonlinearitySpec& spec, const SolverConfig& config);

// Strang splitting (half free flight, exact nonlinear phase, half free
// flight); tensor grids only — on log-radial grids the quadrature round trip
// per step amplifies off-band error exponentially (use lawson_solve there).
// Mass is conserved to rounding: every substep is an exact L^2 isometry.
Trajectory split_step_solve(const Field& u0, double t0, double t1,
                            const NonlinearitySpec& spec, double dt, int record_count);

// Exponential (integrating-factor) midpoint integrator, frequency-side: the
// free flow is applied as an exact diagonal phase and only the nonlinear rate
// passes through the quadrature transforms, so it is stable on radial grids.
// Works on tensor grids too; second order in dt.
Trajectory lawson_solve(const Field& u0, double t0, double t1,
                        const NonlinearitySpec& spec, double dt, int record_count);

struct Subdivision {
  std::vector<std::pair<double, double>> intervals;
  double total_norm = 0;  // L^{2(n+2)/(n-2)}_{t,x} of the whole trajectory
  double ceiling = 0;     // (1 + total/threshold)^{2(n+2)/(n-2)} reference count
};

// Greedy left-to-right partition of the time interval such that the restricted
// L^{2(n+2)/(n-2)}_{t,x} norm of each piece is at most threshold.
Subdivision subdivide_by_norm(const Trajectory& u, double threshold);

struct ScatteringReport {
  Field state;                     // v(T) = e^{-iT Delta} u(T), the candidate u_+(0)
  std::vector<double> increments;  // ||v(t_{k+1}) - v(t_k)||_{Hdot^1}
  bool converged = false;
  double tail_ratio = 0;  // last increment / first increment
};

// Pulls back the trajectory along the free flow and reports the Cauchy
// increments of v(t) = e^{-it Delta} u(t) in Hdot^1; convergence requires the
// final-third increments to be nonincreasing with tail_ratio < tail_tol.
ScatteringReport scattering_state(const Trajectory& u, double tail_tol = 1e-3);

// Mass and Hamiltonian diagnostics: 0.5 ||grad u||_2^2 + mu (1/(p+2)) ||u||_{p+2}^{p+2}.
double hamiltonian(const Field& u, const NonlinearitySpec& spec);

}  // namespace critnls
