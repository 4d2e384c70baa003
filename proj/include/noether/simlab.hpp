#pragma once

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "noether/calculus.hpp"
#include "noether/expr.hpp"
#include "noether/field_system.hpp"

namespace noether::sim {

using cplx = std::complex<double>;

inline constexpr double kDriftFloor = 1e-30;

/// Relative drift |x - x0| / max(|x0|, floor).
inline double relative_drift(cplx x, cplx x0) { return std::abs(x - x0) / std::max(std::abs(x0), kDriftFloor); }

// Fixed-order pairwise summation: the result depends only on the input order.
template <class T>
T pairwise_sum(const T* p, std::size_t n) {
  if (n <= 8) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(p, h) + pairwise_sum(p + h, n - h);
}

// Exact integer powers by repeated multiplication (std::pow on complex goes through log).
template <class T>
T ipow(T x, int p) {
  if (p < 0) return T(1) / ipow(x, -p);
  T r(1);
  for (; p > 0; p >>= 1, x *= x)
    if (p & 1) r *= x;
  return r;
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

/// Periodic box centered at the origin; node j on an axis sits at (j - N/2) dx.
struct Grid {
  int dim = 1;
  std::vector<int> points;
  std::vector<double> length;

  void validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
    if (static_cast<int>(points.size()) != dim || static_cast<int>(length.size()) != dim)
      throw std::invalid_argument("grid needs one point count and one length per axis");
    for (int k = 0; k < dim; ++k) {
      int n = points[static_cast<std::size_t>(k)];
      if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("points per axis must be a power of two");
      if (!(length[static_cast<std::size_t>(k)] > 0) || !std::isfinite(length[static_cast<std::size_t>(k)]))
        throw std::invalid_argument("box length must be positive");
    }
  }
  double dx(int axis) const { return length.at(static_cast<std::size_t>(axis)) / points.at(static_cast<std::size_t>(axis)); }
  std::size_t size() const {
    std::size_t s = 1;
    for (int n : points) s *= static_cast<std::size_t>(n);
    return s;
  }
  double cell_volume() const {
    double v = 1;
    for (int k = 0; k < dim; ++k) v *= dx(k);
    return v;
  }
  double node(int axis, int j) const { return (j - points[static_cast<std::size_t>(axis)] / 2) * dx(axis); }
  // Row-major index decomposition (last axis fastest).
  std::array<int, 3> index(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int k = dim - 1; k >= 0; --k) {
      idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(points[static_cast<std::size_t>(k)]));
      flat /= static_cast<std::size_t>(points[static_cast<std::size_t>(k)]);
    }
    return idx;
  }
  double coordinate(std::size_t flat, int axis) const { return node(axis, index(flat)[static_cast<std::size_t>(axis)]); }
  double wavenumber(int axis, int j) const {
    int n = points[static_cast<std::size_t>(axis)];
    int m = j < n / 2 ? j : j - n;
    return 2 * std::numbers::pi * m / length[static_cast<std::size_t>(axis)];
  }
  bool operator==(const Grid&) const = default;
};

inline double integrate(const std::vector<double>& v, const Grid& g) { return pairwise_sum(v) * g.cell_volume(); }
inline cplx integrate(const std::vector<cplx>& v, const Grid& g) { return pairwise_sum(v) * g.cell_volume(); }

/// FFTW plans for one grid (FFTW_ESTIMATE: plan choice is deterministic).
class Spectral {
public:
  explicit Spectral(const Grid& g) : grid_(g), n_(g.size()) {
    g.validate();
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_));
    if (!buf_) throw std::bad_alloc();
    fwd_ = fftw_plan_dft(g.dim, g.points.data(), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(g.dim, g.points.data(), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Spectral() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  void forward(std::vector<cplx>& v) const { run(v, fwd_, 1.0); }
  void backward(std::vector<cplx>& v) const { run(v, bwd_, 1.0 / static_cast<double>(n_)); }

  /// Wavenumber of flat spectral index `flat` along `axis`; the Nyquist mode
  /// is zeroed for odd derivatives.
  double k(std::size_t flat, int axis) const { return grid_.wavenumber(axis, grid_.index(flat)[static_cast<std::size_t>(axis)]); }
  bool nyquist(std::size_t flat, int axis) const {
    return grid_.index(flat)[static_cast<std::size_t>(axis)] == grid_.points[static_cast<std::size_t>(axis)] / 2;
  }
  double k2(std::size_t flat) const {
    double s = 0;
    for (int a = 0; a < grid_.dim; ++a) s += k(flat, a) * k(flat, a);
    return s;
  }
  const Grid& grid() const { return grid_; }

private:
  void run(std::vector<cplx>& v, fftw_plan p, double scale) const {
    if (v.size() != n_) throw std::invalid_argument("array size does not match the grid");
    for (std::size_t i = 0; i < n_; ++i) {
      buf_[i][0] = v[i].real();
      buf_[i][1] = v[i].imag();
    }
    fftw_execute(p);
    for (std::size_t i = 0; i < n_; ++i) v[i] = cplx(buf_[i][0] * scale, buf_[i][1] * scale);
  }

  Grid grid_;
  std::size_t n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

// ---------------------------------------------------------------- Schrodinger

struct SchrodingerState {
  Grid grid;
  std::vector<cplx> psi;
  double t = 0;
  double hbar = 1;
  double m = 1;
};

struct MarginViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GaussianSpec {
  std::vector<double> center;
  double sigma = 1;
  std::vector<double> k0;
  double amplitude = 1;
};

/// psi(x) = A exp(-|x - x0|^2 / (4 sigma^2) + i k0.x)
inline SchrodingerState init_gaussian(const Grid& g, const GaussianSpec& s, double hbar = 1, double m = 1) {
  g.validate();
  if (static_cast<int>(s.center.size()) != g.dim || static_cast<int>(s.k0.size()) != g.dim)
    throw std::invalid_argument("center and k0 need one entry per axis");
  for (int a = 0; a < g.dim; ++a) {
    if (s.sigma < 4 * g.dx(a)) throw MarginViolation("sigma must be at least 4 dx");
    if (std::abs(s.center[static_cast<std::size_t>(a)]) + 8 * s.sigma > g.length[static_cast<std::size_t>(a)] / 2)
      throw MarginViolation("packet must stay 8 sigma away from the boundary");
  }
  SchrodingerState st{g, std::vector<cplx>(g.size()), 0, hbar, m};
  for (std::size_t i = 0; i < g.size(); ++i) {
    double r2 = 0, phase = 0;
    for (int a = 0; a < g.dim; ++a) {
      double x = g.coordinate(i, a);
      double d = x - s.center[static_cast<std::size_t>(a)];
      r2 += d * d;
      phase += s.k0[static_cast<std::size_t>(a)] * x;
    }
    st.psi[i] = s.amplitude * std::exp(cplx(-r2 / (4 * s.sigma * s.sigma), phase));
  }
  return st;
}

/// Closed-form charges of the Gaussian packet on infinite space.
struct GaussianOracle {
  cplx q;
  std::vector<cplx> q_moment;
  double norm;
};

inline GaussianOracle gaussian_oracle(const GaussianSpec& s) {
  const double sp = std::sqrt(std::numbers::pi);
  cplx q = s.amplitude;
  double norm = s.amplitude * s.amplitude;
  for (std::size_t a = 0; a < s.center.size(); ++a) {
    q *= 2 * s.sigma * sp * std::exp(cplx(-s.k0[a] * s.k0[a] * s.sigma * s.sigma, s.k0[a] * s.center[a]));
    norm *= s.sigma * std::sqrt(2 * std::numbers::pi);
  }
  GaussianOracle o{q, {}, norm};
  for (std::size_t a = 0; a < s.center.size(); ++a) o.q_moment.push_back(cplx(s.center[a], 2 * s.sigma * s.sigma * s.k0[a]) * q);
  return o;
}

/// Exact free propagator: each mode is multiplied by exp(-i hbar |k|^2 dt / 2m).
/// Negative dt runs the evolution backwards.
class SchrodingerStepper {
public:
  SchrodingerStepper(const Grid& g, double dt, double hbar, double m) : fft_(g), dt_(dt), factor_(g.size()) {
    if (!std::isfinite(dt)) throw std::invalid_argument("dt must be finite");
    for (std::size_t i = 0; i < g.size(); ++i) factor_[i] = std::exp(cplx(0, -hbar * fft_.k2(i) * dt / (2 * m)));
  }
  void step(SchrodingerState& s) const {
    fft_.forward(s.psi);
    for (std::size_t i = 0; i < factor_.size(); ++i) s.psi[i] *= factor_[i];
    fft_.backward(s.psi);
    s.t += dt_;
  }
  void evolve(SchrodingerState& s, long steps) const {
    for (long n = 0; n < steps; ++n) step(s);
  }
  double dt() const { return dt_; }

private:
  Spectral fft_;
  double dt_;
  std::vector<cplx> factor_;
};

inline void step_schrodinger(SchrodingerState& s, double dt) { SchrodingerStepper(s.grid, dt, s.hbar, s.m).step(s); }

/// Numeric values for named constants (unbound ones default to 1).
using ConstantValues = std::map<std::string, double>;

/// Pointwise values of a symbolic integrand on a Schrodinger state. Jets are
/// computed spectrally: spatial derivatives by i k, time derivatives through the
/// free equation psi_t = i hbar lap(psi) / 2m. Fields named psi (complex) or
/// psi_R / psi_I (real parts) refer to the state.
class StateEvaluator {
public:
  StateEvaluator(const SchrodingerState& s, ConstantValues constants)
      : s_(s), fft_(s.grid), consts_(std::move(constants)) {
    hat_ = s.psi;
    fft_.forward(hat_);
  }

  std::vector<cplx> evaluate(const Expr& e) {
    std::vector<cplx> out(s_.grid.size(), cplx(0));
    for (const auto& [mono, coeff] : e.terms()) {
      std::vector<cplx> term(s_.grid.size(), coeff.to_complex());
      for (const auto& [sym, power] : mono.factors()) {
        for (std::size_t i = 0; i < term.size(); ++i) term[i] *= ipow(atom(sym, i), power);
      }
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += term[i];
    }
    return out;
  }

  cplx integral(const Expr& e) { return integrate(evaluate(e), s_.grid); }

private:
  cplx atom(const Symbol& sym, std::size_t i) {
    switch (sym.kind) {
      case SymbolKind::Coordinate:
        if (sym.axis == 0) return s_.t;
        if (sym.axis > s_.grid.dim) return 0;
        return s_.grid.coordinate(i, sym.axis - 1);
      case SymbolKind::Constant: {
        auto it = consts_.find(sym.name);
        return it == consts_.end() ? 1.0 : it->second;
      }
      case SymbolKind::Parameter: throw std::invalid_argument("integrand contains parameter " + sym.name);
      case SymbolKind::Jet: return jet(sym)[i];
    }
    return 0;
  }

  const std::vector<cplx>& jet(const Symbol& sym) {
    auto key = std::make_pair(sym.field, sym.orders);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const std::string& n = sym.field.name;
    enum class Part { Full, Conj, Re, Im } part;
    if (sym.field.kind == FieldKind::Complex)
      part = Part::Full;
    else if (sym.field.kind == FieldKind::Conjugate)
      part = Part::Conj;
    else if (n.size() > 2 && n.substr(n.size() - 2) == "_R")
      part = Part::Re;
    else if (n.size() > 2 && n.substr(n.size() - 2) == "_I")
      part = Part::Im;
    else
      throw std::invalid_argument("field " + n + " has no meaning on a Schrodinger state");

    std::vector<cplx> v = hat_;
    const double c = s_.hbar / (2 * s_.m);
    for (std::size_t i = 0; i < v.size(); ++i) {
      cplx f = ipow(cplx(0, -c * fft_.k2(i)), sym.orders[0]);
      for (int a = 1; a < kMaxAxes; ++a) {
        int o = sym.orders[static_cast<std::size_t>(a)];
        if (o == 0) continue;
        if (a > s_.grid.dim) {
          f = 0;
          break;
        }
        if (o % 2 == 1 && fft_.nyquist(i, a - 1)) f = 0;
        f *= ipow(cplx(0, fft_.k(i, a - 1)), o);
      }
      v[i] *= f;
    }
    fft_.backward(v);
    for (auto& z : v) {
      switch (part) {
        case Part::Full: break;
        case Part::Conj: z = std::conj(z); break;
        case Part::Re: z = z.real(); break;
        case Part::Im: z = z.imag(); break;
      }
    }
    return cache_.emplace(key, std::move(v)).first->second;
  }

  const SchrodingerState& s_;
  Spectral fft_;
  ConstantValues consts_;
  std::vector<cplx> hat_;
  std::map<std::pair<FieldRef, Orders>, std::vector<cplx>> cache_;
};

inline std::vector<cplx> measure_charges(const SchrodingerState& s, const std::vector<Expr>& integrands,
                                         const ConstantValues& constants = {}) {
  StateEvaluator ev(s, constants);
  std::vector<cplx> out;
  for (const auto& e : integrands) out.push_back(ev.integral(e));
  return out;
}

/// Probability mass within `margin` nodes of the box faces (boundary monitor).
inline double boundary_mass(const SchrodingerState& s, int margin) {
  std::vector<double> v(s.psi.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto idx = s.grid.index(i);
    for (int a = 0; a < s.grid.dim; ++a) {
      int j = idx[static_cast<std::size_t>(a)], n = s.grid.points[static_cast<std::size_t>(a)];
      if (j < margin || j >= n - margin) {
        v[i] = std::norm(s.psi[i]);
        break;
      }
    }
  }
  return integrate(v, s.grid);
}

inline double max_norm(const std::vector<cplx>& v) {
  double m = 0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

/// max |evolve(a + b) - evolve(a) - evolve(b)|.
inline double superposition_check(const SchrodingerState& a, const SchrodingerState& b, long steps, double dt) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("states live on different grids");
  SchrodingerStepper st(a.grid, dt, a.hbar, a.m);
  SchrodingerState sum = a, ea = a, eb = b;
  for (std::size_t i = 0; i < sum.psi.size(); ++i) sum.psi[i] += b.psi[i];
  st.evolve(sum, steps);
  st.evolve(ea, steps);
  st.evolve(eb, steps);
  std::vector<cplx> d(sum.psi.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = sum.psi[i] - ea.psi[i] - eb.psi[i];
  return max_norm(d);
}

/// max |evolve(evolve(s, dt), -dt) - s|.
inline double time_reversal_defect(const SchrodingerState& s, long steps, double dt) {
  SchrodingerState w = s;
  SchrodingerStepper(s.grid, dt, s.hbar, s.m).evolve(w, steps);
  SchrodingerStepper(s.grid, -dt, s.hbar, s.m).evolve(w, steps);
  std::vector<cplx> d(w.psi.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = w.psi[i] - s.psi[i];
  return max_norm(d);
}

// ---------------------------------------------------------------- balance

/// Composite Simpson weights for n intervals (n even) of width h.
inline std::vector<double> simpson_weights(std::size_t intervals, double h) {
  if (intervals == 0 || intervals % 2 != 0) throw std::invalid_argument("Simpson's rule needs an even number of intervals");
  std::vector<double> w(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) w[i] = (i == 0 || i == intervals) ? h / 3 : (i % 2 ? 4 * h / 3 : 2 * h / 3);
  return w;
}

template <class T>
T weighted_sum(const std::vector<T>& v, const std::vector<double>& w) {
  std::vector<T> p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i] * w[i];
  return pairwise_sum(p);
}

/// Interval [lo, hi] on the 1D grid, given by node indices (hi may equal N,
/// the periodic image of node 0).
struct Region {
  double lo = 0;
  double hi = 0;
};

struct BalanceResult {
  cplx inside_t1;
  cplx inside_t2;
  cplx flux;
  cplx defect;
  bool full_box = false;
};

/// Evaluates  int_Omega [rho(t2) - rho(t1)] dx + int_{t1}^{t2} [j(hi) - j(lo)] dt
/// for a 1D state evolved from `s` over `steps` steps of `dt`, using
/// composite Simpson rules in space and time. The full periodic box has no
/// boundary: the flux is zero and the periodic rectangle rule is used.
inline BalanceResult measure_balance(const SchrodingerState& s, const Expr& rho, const Expr& flux, double dt, long steps,
                                     const Region& r, const ConstantValues& constants = {}) {
  const Grid& g = s.grid;
  if (g.dim != 1) throw std::invalid_argument("balance is measured on 1D grids");
  const int n = g.points[0];
  const double h = g.dx(0);
  if (!(r.hi > r.lo)) throw std::invalid_argument("degenerate sub-box");
  auto node_of = [&](double x) {
    double j = x / h + n / 2.0;
    long jr = std::lround(j);
    if (std::abs(j - static_cast<double>(jr)) > 1e-9 || jr < 0 || jr > n)
      throw std::invalid_argument("sub-box faces must lie on grid nodes inside the box");
    return static_cast<int>(jr);
  };
  const int jlo = node_of(r.lo), jhi = node_of(r.hi);
  BalanceResult out;
  out.full_box = jlo == 0 && jhi == n;
  if (!out.full_box && (jhi - jlo) % 2 != 0) throw std::invalid_argument("sub-box must span an even number of cells");
  if (steps <= 0 || steps % 2 != 0) throw std::invalid_argument("balance window needs an even, positive step count");

  auto inside = [&](const SchrodingerState& st) {
    StateEvaluator ev(st, constants);
    auto v = ev.evaluate(rho);
    if (out.full_box) return integrate(v, g);
    std::vector<cplx> seg;
    for (int j = jlo; j <= jhi; ++j) seg.push_back(v[static_cast<std::size_t>(j % n)]);
    return weighted_sum(seg, simpson_weights(static_cast<std::size_t>(jhi - jlo), h));
  };

  SchrodingerStepper stepper(g, dt, s.hbar, s.m);
  SchrodingerState w = s;
  out.inside_t1 = inside(w);
  std::vector<cplx> boundary;
  for (long k = 0; k <= steps; ++k) {
    if (!out.full_box) {
      StateEvaluator ev(w, constants);
      auto j = ev.evaluate(flux);
      boundary.push_back(j[static_cast<std::size_t>(jhi % n)] - j[static_cast<std::size_t>(jlo)]);
    }
    if (k < steps) stepper.step(w);
  }
  out.inside_t2 = inside(w);
  out.flux = out.full_box ? cplx(0) : weighted_sum(boundary, simpson_weights(static_cast<std::size_t>(steps), dt));
  out.defect = out.inside_t2 - out.inside_t1 + out.flux;
  return out;
}

// ---------------------------------------------------------------- Maxwell (1D)

/// Temporal gauge, one transverse component: a = A_2(x, t) at nodes and integer
/// times, e = F_02 = da/dt at nodes and half times, b = F_12 = da/dx at half
/// nodes. In these variables E_y = e and B_z = -b.
struct MaxwellState {
  Grid grid;
  std::vector<double> a;  // time t
  std::vector<double> e;  // time t + dt/2
  double t = 0;
};

struct CourantViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {
inline void check_courant(const Grid& g, double dt) {
  if (!(dt > 0) || dt > g.dx(0) / std::sqrt(static_cast<double>(g.dim))) throw CourantViolation("dt violates the Courant condition");
}

inline std::vector<double> b_half(const MaxwellState& s) {
  const std::size_t n = s.a.size();
  const double h = s.grid.dx(0);
  std::vector<double> b(n);
  for (std::size_t j = 0; j < n; ++j) b[j] = (s.a[(j + 1) % n] - s.a[j]) / h;
  return b;
}
}  // namespace detail

/// Starts the leapfrog from a(x, 0) = a0 and da/dt(x, 0) = e0; the half-step
/// field is e0 + (dt/2) d2a/dx2, accurate to second order.
inline MaxwellState init_maxwell(const Grid& g, std::vector<double> a0, std::vector<double> e0, double dt) {
  g.validate();
  if (g.dim != 1) throw std::invalid_argument("the Maxwell solver is one-dimensional");
  if (a0.size() != g.size() || e0.size() != g.size()) throw std::invalid_argument("initial data size mismatch");
  detail::check_courant(g, dt);
  MaxwellState s{g, std::move(a0), std::move(e0), 0};
  auto b = detail::b_half(s);
  const std::size_t n = b.size();
  const double h = g.dx(0);
  for (std::size_t j = 0; j < n; ++j) s.e[j] += 0.5 * dt * (b[j] - b[(j + n - 1) % n]) / h;
  return s;
}

inline void step_maxwell(MaxwellState& s, double dt) {
  const double h = s.grid.dx(0);
  detail::check_courant(s.grid, dt);
  const std::size_t n = s.a.size();
  for (std::size_t j = 0; j < n; ++j) s.a[j] += dt * s.e[j];
  auto b = detail::b_half(s);
  for (std::size_t j = 0; j < n; ++j) s.e[j] += dt * (b[j] - b[(j + n - 1) % n]) / h;
  s.t += dt;
}

inline double maxwell_integral_e(const MaxwellState& s) { return integrate(s.e, s.grid); }
inline double maxwell_integral_b(const MaxwellState& s) {
  auto b = detail::b_half(s);
  return -integrate(b, s.grid);
}
inline double maxwell_energy(const MaxwellState& s) {
  auto b = detail::b_half(s);
  std::vector<double> w(b.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = 0.5 * (s.e[j] * s.e[j] + b[j] * b[j]);
  return integrate(w, s.grid);
}

/// Max-norm of the discrete divergence of a symbolic current on the evolved
/// field, at time t + 2 dt. Fields are collocated at nodes with centered
/// differences, so the value is O(dx^2 + dt^2) for an exactly conserved current.
/// The two nodes beside the periodic seam are skipped (x is not periodic).
inline double maxwell_current_residual(const MaxwellState& s, double dt, const std::vector<Expr>& current) {
  const std::size_t n = s.a.size();
  const double h = s.grid.dx(0);
  std::vector<std::vector<double>> a{s.a};
  MaxwellState w = s;
  for (int k = 0; k < 4; ++k) {
    step_maxwell(w, dt);
    a.push_back(w.a);
  }
  const double tc = s.t + 2 * dt;
  auto jet_value = [&](const Symbol& sym, int level, std::size_t j) -> double {
    if (sym.field.name != "A_2") return 0;
    const auto& lv = a[static_cast<std::size_t>(level)];
    int o0 = sym.orders[0], o1 = sym.orders[1];
    if (sym.orders[2] || sym.orders[3]) return 0;
    if (o0 == 0 && o1 == 0) return lv[j];
    if (o0 == 1 && o1 == 0)
      return (a[static_cast<std::size_t>(level + 1)][j] - a[static_cast<std::size_t>(level - 1)][j]) / (2 * dt);
    if (o0 == 0 && o1 == 1) return (lv[(j + 1) % n] - lv[(j + n - 1) % n]) / (2 * h);
    throw std::invalid_argument("current uses derivatives beyond first order");
  };
  auto eval = [&](const Expr& e, int level, std::size_t j) {
    cplx v = 0;
    for (const auto& [mono, coeff] : e.terms()) {
      cplx t = coeff.to_complex();
      for (const auto& [sym, p] : mono.factors()) {
        double x = 0;
        switch (sym.kind) {
          case SymbolKind::Jet: x = jet_value(sym, level, j); break;
          case SymbolKind::Coordinate:
            x = sym.axis == 0 ? tc + (level - 2) * dt : sym.axis == 1 ? s.grid.node(0, static_cast<int>(j)) : 0.0;
            break;
          default: x = 1; break;
        }
        t *= ipow(x, p);
      }
      v += t;
    }
    return v.real();
  };
  std::vector<Expr> explicit_div;
  for (int mu = 2; mu < static_cast<int>(current.size()); ++mu)
    explicit_div.push_back(partial(current[static_cast<std::size_t>(mu)], Symbol::coordinate(mu)));
  double worst = 0;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    double r = (eval(current[0], 3, j) - eval(current[0], 1, j)) / (2 * dt) +
               (eval(current[1], 2, j + 1) - eval(current[1], 2, j - 1)) / (2 * h);
    for (const auto& d : explicit_div) r += eval(d, 2, j);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace noether::sim
