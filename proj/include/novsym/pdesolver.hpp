#ifndef NOVSYM_PDESOLVER_HPP
#define NOVSYM_PDESOLVER_HPP

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <vector>

#include "novsym/expr.hpp"

namespace novsym {

/// Uniform periodic grid x_j = j L / n with x_n identified with x_0.
struct Grid {
  int n = 256;
  double length = 2 * EIGEN_PI;

  double dx() const { return length / n; }
  Eigen::ArrayXd nodes() const;
};

/// Validates n >= 16 and power of two.
Grid make_grid(int n, double length = 2 * EIGEN_PI);

enum class Scheme { Spectral, FiniteDifference };

/// Evolution runs on the momentum field m = u - u_xx:
///   m_t = -u^2 m_x - 3 u u_x m,
/// with u recovered by inverting (1 - d_xx); the algebraic equivalence with
/// the original equation is established symbolically in the test suite.
struct SolverState {
  double time = 0;
  Eigen::ArrayXd u;
  Eigen::ArrayXd m;
};

struct SimulateOptions {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::Spectral;
  int snapshot_every = 0;  // record full fields every k steps (0: ends only)
};

struct SimulationResult {
  std::vector<SolverState> snapshots;
  std::vector<std::pair<double, double>> h1_history;  // (t, H1) every step
  double h1_initial = 0;
  double h1_final = 0;
  double h1_max_drift_rel = 0;
  std::optional<double> blowup_time;
  bool cfl_warning = false;
  double mean_m_initial = 0;
  double mean_m_final = 0;
  double helmholtz_defect_max = 0;  // max relative |(1-dxx)u - m| over steps
};

SimulationResult simulate(const Eigen::ArrayXd& u0, const Grid& grid,
                          const SimulateOptions& opts);

/// Quadrature of u^2 + u_x^2 over the period (trapezoidal; exact for the
/// spectral representation of periodic data).
double h1_functional(const Grid& grid, const Eigen::ArrayXd& u, Scheme scheme);

// building blocks, exposed for the test suite
Eigen::ArrayXd spectral_derivative(const Grid& grid, const Eigen::ArrayXd& f, int order);
Eigen::ArrayXd fd_derivative1(const Grid& grid, const Eigen::ArrayXd& f);
Eigen::ArrayXd fd_derivative2(const Grid& grid, const Eigen::ArrayXd& f);
Eigen::ArrayXd helmholtz_apply(const Grid& grid, const Eigen::ArrayXd& u, Scheme scheme);
Eigen::ArrayXd helmholtz_invert(const Grid& grid, const Eigen::ArrayXd& m, Scheme scheme);

/// Pointwise strong-form residual of the equation on a smooth candidate
/// u(t, x), all derivatives taken with sixth-order centered differences of
/// spacing h; returns the maximum absolute residual over the sample set.
double residual_scan(const std::function<double(double, double)>& u_exact,
                     const std::vector<double>& ts, const std::vector<double>& xs,
                     double h = 1e-2);

}  // namespace novsym

#endif
