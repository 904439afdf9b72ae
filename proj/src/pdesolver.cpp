#include "novsym/pdesolver.hpp"

#include <cmath>
#include <complex>

namespace novsym {

namespace {

using Cplx = std::complex<double>;

bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

/// Iterative radix-2 transform; forward uses e^{-i...}, inverse leaves the
/// 1/n scaling to the caller.
void fft_inplace(std::vector<Cplx>& a, bool inverse) {
  size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2 * EIGEN_PI / static_cast<double>(len) * (inverse ? 1 : -1);
    Cplx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      Cplx w(1);
      for (size_t k = 0; k < len / 2; ++k) {
        Cplx even = a[i + k];
        Cplx odd = a[i + k + len / 2] * w;
        a[i + k] = even + odd;
        a[i + k + len / 2] = even - odd;
        w *= wl;
      }
    }
  }
}

std::vector<Cplx> to_spectrum(const Eigen::ArrayXd& f) {
  std::vector<Cplx> a(static_cast<size_t>(f.size()));
  for (Eigen::Index i = 0; i < f.size(); ++i) a[static_cast<size_t>(i)] = Cplx(f[i], 0);
  fft_inplace(a, false);
  return a;
}

Eigen::ArrayXd from_spectrum(std::vector<Cplx> a) {
  fft_inplace(a, true);
  Eigen::ArrayXd f(static_cast<Eigen::Index>(a.size()));
  double inv = 1.0 / static_cast<double>(a.size());
  for (size_t i = 0; i < a.size(); ++i) f[static_cast<Eigen::Index>(i)] = a[i].real() * inv;
  return f;
}

int signed_mode(int k, int n) { return k <= n / 2 ? k : k - n; }

/// Zero the top third of the spectrum (cubic nonlinearity).
void dealias(std::vector<Cplx>& a, int n) {
  int cut = n / 3;
  for (int k = 0; k < n; ++k) {
    int sk = std::abs(signed_mode(k, n));
    if (sk > cut) a[static_cast<size_t>(k)] = 0;
  }
}

/// Symbol of the fourth-order second-derivative stencil at mode k.
double fd2_symbol(int k, int n, double h) {
  double th = 2 * EIGEN_PI * k / n;
  return (-2 * std::cos(2 * th) + 32 * std::cos(th) - 30) / (12 * h * h);
}

struct SchemeOps {
  const Grid& grid;
  Scheme scheme;

  Eigen::ArrayXd d1(const Eigen::ArrayXd& f) const {
    return scheme == Scheme::Spectral ? spectral_derivative(grid, f, 1) : fd_derivative1(grid, f);
  }

  Eigen::ArrayXd rhs(const Eigen::ArrayXd& m) const {
    Eigen::ArrayXd u = helmholtz_invert(grid, m, scheme);
    Eigen::ArrayXd ux = d1(u);
    Eigen::ArrayXd mx = d1(m);
    Eigen::ArrayXd n = -(u * u * mx) - 3.0 * (u * ux * m);
    if (scheme == Scheme::Spectral) {
      auto spec = to_spectrum(n);
      dealias(spec, grid.n);
      n = from_spectrum(std::move(spec));
    }
    return n;
  }
};

}  // namespace

Eigen::ArrayXd Grid::nodes() const {
  Eigen::ArrayXd x(n);
  for (int j = 0; j < n; ++j) x[j] = length * j / n;
  return x;
}

Grid make_grid(int n, double length) {
  if (n < 16 || !is_pow2(n))
    throw EvalError("grid size must be a power of two and at least 16, got " +
                    std::to_string(n));
  if (!(length > 0)) throw EvalError("grid length must be positive");
  return Grid{n, length};
}

Eigen::ArrayXd spectral_derivative(const Grid& grid, const Eigen::ArrayXd& f, int order) {
  int n = grid.n;
  auto a = to_spectrum(f);
  for (int k = 0; k < n; ++k) {
    if (order % 2 == 1 && k == n / 2) {
      a[static_cast<size_t>(k)] = 0;  // Nyquist mode has no odd derivative
      continue;
    }
    double kappa = 2 * EIGEN_PI * signed_mode(k, n) / grid.length;
    a[static_cast<size_t>(k)] *= std::pow(Cplx(0, kappa), order);
  }
  return from_spectrum(std::move(a));
}

Eigen::ArrayXd fd_derivative1(const Grid& grid, const Eigen::ArrayXd& f) {
  int n = grid.n;
  double h = grid.dx();
  Eigen::ArrayXd d(n);
  auto at = [&](int i) { return f[((i % n) + n) % n]; };
  for (int i = 0; i < n; ++i)
    d[i] = (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) / (12 * h);
  return d;
}

Eigen::ArrayXd fd_derivative2(const Grid& grid, const Eigen::ArrayXd& f) {
  int n = grid.n;
  double h = grid.dx();
  Eigen::ArrayXd d(n);
  auto at = [&](int i) { return f[((i % n) + n) % n]; };
  for (int i = 0; i < n; ++i)
    d[i] = (-at(i + 2) + 16 * at(i + 1) - 30 * at(i) + 16 * at(i - 1) - at(i - 2)) / (12 * h * h);
  return d;
}

Eigen::ArrayXd helmholtz_apply(const Grid& grid, const Eigen::ArrayXd& u, Scheme scheme) {
  if (scheme == Scheme::Spectral) return u - spectral_derivative(grid, u, 2);
  return u - fd_derivative2(grid, u);
}

Eigen::ArrayXd helmholtz_invert(const Grid& grid, const Eigen::ArrayXd& m, Scheme scheme) {
  int n = grid.n;
  auto a = to_spectrum(m);
  for (int k = 0; k < n; ++k) {
    double lambda;
    if (scheme == Scheme::Spectral) {
      double kappa = 2 * EIGEN_PI * signed_mode(k, n) / grid.length;
      lambda = 1 + kappa * kappa;
    } else {
      lambda = 1 - fd2_symbol(k, n, grid.dx());
    }
    a[static_cast<size_t>(k)] /= lambda;
  }
  return from_spectrum(std::move(a));
}

double h1_functional(const Grid& grid, const Eigen::ArrayXd& u, Scheme scheme) {
  Eigen::ArrayXd ux = scheme == Scheme::Spectral ? spectral_derivative(grid, u, 1)
                                                 : fd_derivative1(grid, u);
  return grid.dx() * (u * u + ux * ux).sum();
}

SimulationResult simulate(const Eigen::ArrayXd& u0, const Grid& grid,
                          const SimulateOptions& opts) {
  if (u0.size() != grid.n) throw EvalError("initial field does not match the grid");
  if (!(opts.dt != 0) || !std::isfinite(opts.dt)) throw EvalError("bad time step");
  SchemeOps ops{grid, opts.scheme};

  SimulationResult out;
  Eigen::ArrayXd m = helmholtz_apply(grid, u0, opts.scheme);
  Eigen::ArrayXd u = helmholtz_invert(grid, m, opts.scheme);

  long nsteps = static_cast<long>(std::llround(opts.t_end / opts.dt));
  if (nsteps < 0) throw EvalError("t_end and dt have opposite signs");

  out.h1_initial = h1_functional(grid, u, opts.scheme);
  out.h1_history.push_back({0.0, out.h1_initial});
  out.mean_m_initial = grid.dx() * m.sum();
  out.snapshots.push_back({0.0, u, m});

  double cfl_bound = 0.5 * grid.dx();
  double t = 0;
  for (long step = 0; step < nsteps; ++step) {
    double umax = u.abs().maxCoeff();
    if (std::abs(opts.dt) * umax * umax > cfl_bound) out.cfl_warning = true;

    if (opts.scheme == Scheme::Spectral) {
      // two-stage Gauss collocation (fourth order, no damping on the
      // imaginary axis, so the quadratic functional survives steep fronts);
      // stages by fixed-point iteration
      const double r3 = std::sqrt(3.0);
      const double a11 = 0.25, a12 = 0.25 - r3 / 6, a21 = 0.25 + r3 / 6, a22 = 0.25;
      Eigen::ArrayXd k1 = ops.rhs(m);
      Eigen::ArrayXd k2 = k1;
      double scale = std::max(1.0, k1.abs().maxCoeff());
      for (int it = 0; it < 300; ++it) {
        Eigen::ArrayXd n1 = ops.rhs(m + opts.dt * (a11 * k1 + a12 * k2));
        Eigen::ArrayXd n2 = ops.rhs(m + opts.dt * (a21 * k1 + a22 * k2));
        double delta =
            std::max((n1 - k1).abs().maxCoeff(), (n2 - k2).abs().maxCoeff());
        k1.swap(n1);
        k2.swap(n2);
        if (!k1.allFinite() || !k2.allFinite()) break;
        if (delta <= 1e-13 * scale) break;
      }
      m = m + (opts.dt / 2.0) * (k1 + k2);
    } else {
      // classical explicit fourth-order step
      Eigen::ArrayXd k1 = ops.rhs(m);
      Eigen::ArrayXd k2 = ops.rhs(m + 0.5 * opts.dt * k1);
      Eigen::ArrayXd k3 = ops.rhs(m + 0.5 * opts.dt * k2);
      Eigen::ArrayXd k4 = ops.rhs(m + opts.dt * k3);
      m = m + (opts.dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    t = (step + 1) * opts.dt;

    if (!m.allFinite()) {
      out.blowup_time = t;
      break;
    }
    u = helmholtz_invert(grid, m, opts.scheme);

    double defect = (helmholtz_apply(grid, u, opts.scheme) - m).abs().maxCoeff() /
                    std::max(1e-30, m.abs().maxCoeff());
    out.helmholtz_defect_max = std::max(out.helmholtz_defect_max, defect);

    double h1 = h1_functional(grid, u, opts.scheme);
    out.h1_history.push_back({t, h1});
    if (opts.snapshot_every > 0 && (step + 1) % opts.snapshot_every == 0 && step + 1 < nsteps)
      out.snapshots.push_back({t, u, m});
  }

  out.snapshots.push_back({t, u, m});
  out.h1_final = out.h1_history.back().second;
  out.mean_m_final = grid.dx() * m.sum();
  double scale = std::abs(out.h1_initial) > 0 ? std::abs(out.h1_initial) : 1.0;
  for (const auto& [tt, h] : out.h1_history) {
    (void)tt;
    out.h1_max_drift_rel = std::max(out.h1_max_drift_rel, std::abs(h - out.h1_initial) / scale);
  }
  return out;
}

// ---------------------------------------------------------------------------
// pointwise residual of a smooth candidate
// ---------------------------------------------------------------------------

namespace {

/// Sixth-order centered first derivative.
double stencil_d1(const std::function<double(double)>& f, double x, double h) {
  return (-f(x - 3 * h) + 9 * f(x - 2 * h) - 45 * f(x - h) + 45 * f(x + h) - 9 * f(x + 2 * h) +
          f(x + 3 * h)) /
         (60 * h);
}

/// Sixth-order centered second derivative.
double stencil_d2(const std::function<double(double)>& f, double x, double h) {
  return (2 * f(x - 3 * h) - 27 * f(x - 2 * h) + 270 * f(x - h) - 490 * f(x) + 270 * f(x + h) -
          27 * f(x + 2 * h) + 2 * f(x + 3 * h)) /
         (180 * h * h);
}

}  // namespace

double residual_scan(const std::function<double(double, double)>& u_exact,
                     const std::vector<double>& ts, const std::vector<double>& xs, double h) {
  double worst = 0;
  for (double t : ts) {
    for (double x : xs) {
      auto uxx_of = [&](double tt) {
        return stencil_d2([&](double xx) { return u_exact(tt, xx); }, x, h);
      };
      double u = u_exact(t, x);
      double ut = stencil_d1([&](double tt) { return u_exact(tt, x); }, t, h);
      double ux = stencil_d1([&](double xx) { return u_exact(t, xx); }, x, h);
      double uxx = uxx_of(t);
      double uxxx = stencil_d1(
          [&](double xx) {
            return stencil_d2([&](double yy) { return u_exact(t, yy); }, xx, h);
          },
          x, h);
      double utxx = stencil_d1(uxx_of, t, h);
      double r = ut - utxx + 4 * u * u * ux - 3 * u * ux * uxx - u * u * uxxx;
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

}  // namespace novsym
