#include "kelab/geometry.hpp"

#include "kelab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kelab {

std::size_t FiberGrid::stride(int axis) const {
  std::size_t s = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k > axis; --k)
    s *= static_cast<std::size_t>(dims[k]);
  return s;
}

void FiberGrid::unravel(std::size_t idx, int* out) const {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = static_cast<int>(idx % static_cast<std::size_t>(dims[k]));
    idx /= static_cast<std::size_t>(dims[k]);
  }
}

void FiberGrid::torus_s(std::size_t idx, double* s) const {
  int mi[4];
  unravel(idx, mi);
  for (std::size_t k = 0; k < dims.size(); ++k)
    s[k] = (mi[k] + 0.5) / static_cast<double>(dims[k]);
}

std::array<cplx, 2> FiberGrid::point(std::size_t idx) const {
  std::array<cplx, 2> p{cplx(0, 0), cplx(0, 0)};
  if (chart == ChartKind::torus) {
    double s[4];
    torus_s(idx, s);
    for (int j = 0; j < n; ++j) p[j] = s[2 * j] + tau * s[2 * j + 1];
  } else {
    int mi[2];
    unravel(idx, mi);
    double hu = L() / N_rad, ht = 2.0 * M_PI / N_ang;
    double u = -L() + (mi[0] + 0.5) * hu;
    double th = (mi[1] + 0.5) * ht;
    p[0] = std::exp(cplx(u, th));
  }
  return p;
}

double FiberGrid::annulus_u(std::size_t idx) const {
  int mi[2];
  unravel(idx, mi);
  return -L() + (mi[0] + 0.5) * (L() / N_rad);
}

bool FiberGrid::is_boundary_cell(std::size_t idx) const {
  if (chart != ChartKind::annulus) return false;
  int mi[2];
  unravel(idx, mi);
  double hu = L() / N_rad;
  double u = -L() + (mi[0] + 0.5) * hu;
  if (mi[0] == 0 || mi[0] == N_rad - 1) return true;
  return (u + L() <= guard_u) || (-u <= guard_u);
}

double torus_distance_sq(cplx tau, cplx dz) {
  double ti = tau.imag();
  double s2 = dz.imag() / ti;
  double s1 = dz.real() - tau.real() * s2;
  s1 -= std::floor(s1 + 0.5);
  s2 -= std::floor(s2 + 0.5);
  double best = std::numeric_limits<double>::infinity();
  for (int k = -1; k <= 1; ++k)
    for (int m = -1; m <= 1; ++m) {
      cplx c = (s1 + k) + tau * (s2 + m);
      best = std::min(best, std::norm(c));
    }
  return best;
}

double FiberGrid::distance_sq(const std::array<cplx, 2>& p, const std::array<cplx, 2>& q) const {
  if (chart == ChartKind::torus) {
    double d = 0.0;
    for (int j = 0; j < n; ++j) d += torus_distance_sq(tau, p[j] - q[j]);
    return d;
  }
  return std::norm(p[0] - q[0]);
}

double FiberGrid::pole_distance_sq(std::size_t idx, const std::array<cplx, 2>& center,
                                   int axis) const {
  std::array<cplx, 2> p = point(idx);
  if (chart == ChartKind::torus) {
    if (n == 1) return torus_distance_sq(tau, p[0] - center[0]);
    return torus_distance_sq(tau, p[axis] - center[axis]);
  }
  return std::norm(p[0] - center[0]);
}

double FiberGrid::cell_diameter() const {
  if (chart == ChartKind::torus) {
    double h = 1.0 / N;
    return h * (std::abs(cplx(1, 0)) + std::abs(tau));
  }
  double hu = L() / N_rad, ht = 2.0 * M_PI / N_ang;
  return std::hypot(hu, ht);  // upper bound: |z| < 1 scales both down
}

FiberGrid build_torus_fiber(int n, cplx tau, int N) {
  if (n != 1 && n != 2) throw std::invalid_argument("build_torus_fiber: n must be 1 or 2");
  if (!(tau.imag() > 0.0)) throw std::invalid_argument("build_torus_fiber: Im(tau) must be positive");
  if (N < 16) throw std::invalid_argument("build_torus_fiber: N < 16 is too coarse");
  FiberGrid g;
  g.chart = ChartKind::torus;
  g.n = n;
  g.tau = tau;
  g.N = N;
  g.dims.assign(2 * n, N);
  double area = tau.imag();  // fundamental parallelogram of Z + tau Z
  double vol = (n == 1) ? area : area * area;
  std::size_t cells = 1;
  for (int k = 0; k < 2 * n; ++k) cells *= static_cast<std::size_t>(N);
  g.cell_area = GridField(g.dims, vol / static_cast<double>(cells));
  g.total_volume = vol;
  return g;
}

FiberGrid build_annulus_fiber(double r_in, int N_rad, int N_ang, double guard_u) {
  if (!(r_in > 0.0 && r_in < 1.0))
    throw std::invalid_argument("build_annulus_fiber: r_in must lie in (0,1)");
  if (N_rad < 16 || N_ang < 16)
    throw std::invalid_argument("build_annulus_fiber: resolution below 16");
  if (guard_u < 0.0 || 2.0 * guard_u >= -std::log(r_in))
    throw std::invalid_argument("build_annulus_fiber: guard band covers the whole chart");
  FiberGrid g;
  g.chart = ChartKind::annulus;
  g.n = 1;
  g.r_in = r_in;
  g.N_rad = N_rad;
  g.N_ang = N_ang;
  g.guard_u = guard_u;
  g.dims = {N_rad, N_ang};
  g.cell_area = GridField(g.dims);
  double Lv = -std::log(r_in);
  double hu = Lv / N_rad, ht = 2.0 * M_PI / N_ang;
  // exact cell areas: integral of e^{2u} du dtheta over the cell, so the
  // total telescopes to pi (1 - r_in^2) exactly.
  for (int i = 0; i < N_rad; ++i) {
    double u = -Lv + (i + 0.5) * hu;
    double a = std::exp(2.0 * u) * std::sinh(hu) * ht;
    for (int j = 0; j < N_ang; ++j) g.cell_area[static_cast<std::size_t>(i) * N_ang + j] = a;
  }
  g.total_volume = kahan_sum(g.cell_area.v);
  return g;
}

// ---- HermitianField ----

HermitianField HermitianField::zeros(int n, const std::vector<int>& dims) {
  HermitianField f;
  f.n = n;
  f.a11 = GridField(dims, 0.0);
  if (n == 2) {
    f.a22 = GridField(dims, 0.0);
    f.a12.assign(f.a11.size(), cplx(0, 0));
  }
  return f;
}

double HermitianField::min_eigenvalue(std::size_t i) const {
  if (n == 1) return a11[i];
  double tr = a11[i] + a22[i];
  double det2 = a11[i] * a22[i] - std::norm(a12[i]);
  double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det2));
  return tr / 2.0 - disc;
}

double HermitianField::det(std::size_t i) const {
  if (n == 1) return a11[i];
  return a11[i] * a22[i] - std::norm(a12[i]);
}

GridField ma_density(const HermitianField& A) {
  GridField d(A.a11.dims);
  if (A.n == 1) {
    d.v = A.a11.v;
  } else {
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = A.a11[i] * A.a22[i] - std::norm(A.a12[i]);
  }
  return d;
}

GridField mixed_density(const HermitianField& A, const HermitianField& B) {
  GridField d(A.a11.dims);
  if (A.n == 1) {
    // a single (1,1)-factor: the polarization is trivial
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = 0.5 * (A.a11[i] + B.a11[i]);
    // not used for n = 1 (callers pick A or B directly); keep symmetric form
  } else {
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = 0.5 * (A.a11[i] * B.a22[i] + A.a22[i] * B.a11[i]) -
             (A.a12[i] * std::conj(B.a12[i])).real();
  }
  return d;
}

// ---- background form ----

namespace {

// smooth periodic potential for the model_fs background (torus)
GridField fs_potential_torus(const FiberGrid& g, double amp) {
  GridField rho(g.dims);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    double s[4];
    g.torus_s(i, s);
    double val = std::cos(2.0 * M_PI * s[0]) * std::sin(2.0 * M_PI * s[1]);
    if (g.n == 2) val += std::cos(2.0 * M_PI * (s[2] + s[3]));
    rho[i] = amp * val;
  }
  return rho;
}

}  // namespace

HermitianForm background_form(std::shared_ptr<const FiberGrid> grid, BackgroundKind kind,
                              double volume, double fs_amplitude) {
  if (volume <= 0.0) throw std::invalid_argument("background_form: volume must be positive");
  const FiberGrid& g = *grid;
  HermitianForm form;
  form.grid = grid;
  form.coef = HermitianField::zeros(g.n, g.dims);

  double c = (g.n == 1) ? volume / g.total_volume : std::sqrt(volume / g.total_volume);
  form.coef.a11 = GridField(g.dims, c);
  if (g.n == 2) form.coef.a22 = GridField(g.dims, c);

  if (kind == BackgroundKind::model_fs) {
    // chi = c I + i ddbar(rho): stays in the same class, so the class volume
    // is unchanged (exactly, by discrete Stokes).
    GridField rho = (g.chart == ChartKind::torus)
                        ? fs_potential_torus(g, fs_amplitude)
                        : GridField(g.dims);
    if (g.chart == ChartKind::annulus) {
      for (std::size_t i = 0; i < rho.size(); ++i) {
        double u = g.annulus_u(i);
        rho[i] = fs_amplitude * std::cos(M_PI * (u + g.L()) / g.L());
      }
    }
    HermitianField h = complex_hessian(g, rho);
    for (std::size_t i = 0; i < form.coef.size(); ++i) {
      form.coef.a11[i] += h.a11[i];
      if (g.n == 2) {
        form.coef.a22[i] += h.a22[i];
        form.coef.a12[i] += h.a12[i];
      }
    }
  }

  for (std::size_t i = 0; i < form.coef.size(); ++i)
    if (form.coef.min_eigenvalue(i) <= 0.0)
      throw std::invalid_argument("background_form: coefficients not positive definite");

  if (g.chart == ChartKind::annulus && kind == BackgroundKind::model_fs) {
    form.class_volume = kahan_dot(ma_density(form.coef).v, g.cell_area.v);
  } else {
    form.class_volume = volume;
  }
  return form;
}

// ---- volume density ----

double density_value(const FiberGrid& grid, const std::vector<PoleSpec>& poles, double t,
                     double smooth_amp, std::size_t idx) {
  double val = 1.0;
  if (smooth_amp != 0.0) {
    if (grid.chart == ChartKind::torus) {
      double s[4];
      grid.torus_s(idx, s);
      double b = std::cos(2.0 * M_PI * s[0]) * std::cos(2.0 * M_PI * s[1]);
      if (grid.n == 2) b += std::sin(2.0 * M_PI * (s[2] - s[3]));
      val = std::exp(smooth_amp * b);
    } else {
      double u = grid.annulus_u(idx);
      val = std::exp(smooth_amp * std::cos(M_PI * (2.0 * u + grid.L()) / grid.L()));
    }
  }
  for (const PoleSpec& p : poles) {
    double q = grid.pole_distance_sq(idx, p.center, p.axis);
    val *= std::pow(q + t * t, p.a);
  }
  return val;
}

VolumeDensity volume_density(std::shared_ptr<const FiberGrid> grid,
                             const std::vector<PoleSpec>& poles, double t,
                             std::optional<double> normalize_to, double smooth_amp) {
  const FiberGrid& g = *grid;
  for (const PoleSpec& p : poles) {
    if (p.a <= -1.0)
      throw std::invalid_argument(
          "volume_density: exponent a <= -1 is not integrable (non-klt)");
    if (p.a > 1.0) throw std::invalid_argument("volume_density: exponent a > 1");
    if (g.n == 2 && (p.axis < 0 || p.axis > 1))
      throw std::invalid_argument("volume_density: pole axis out of range");
  }
  if (t < 0.0) throw std::invalid_argument("volume_density: t must be nonnegative");

  VolumeDensity d;
  d.grid = grid;
  d.poles = poles;
  d.t = t;
  d.smooth_amp = smooth_amp;
  d.density = GridField(g.dims);
  double min_q = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.density.size(); ++i) {
    d.density[i] = density_value(g, poles, t, smooth_amp, i);
    for (const PoleSpec& p : poles)
      min_q = std::min(min_q, g.pole_distance_sq(i, p.center, p.axis));
  }
  if (!poles.empty() && !(min_q > 0.0))
    throw std::invalid_argument("volume_density: a pole coincides with a cell center");

  double raw = kahan_dot(d.density.v, g.cell_area.v);
  if (!std::isfinite(raw) || raw <= 0.0)
    throw std::invalid_argument("volume_density: density mass not finite and positive");
  if (normalize_to) {
    d.c_t = *normalize_to / raw;
    for (double& x : d.density.v) x *= d.c_t;
    d.total_mass = *normalize_to;
  } else {
    d.c_t = 1.0;
    d.total_mass = raw;
  }
  return d;
}

// ---- families ----

std::vector<double> geometric_t_grid(double t_max, double ratio, int count, bool append_zero) {
  if (!(t_max > 0.0)) throw std::invalid_argument("geometric_t_grid: t_max must be positive");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("geometric_t_grid: ratio must lie in (0,1)");
  if (count < 2) throw std::invalid_argument("geometric_t_grid: need at least 2 fibers");
  std::vector<double> t;
  double v = t_max;
  for (int k = 0; k < count; ++k) {
    t.push_back(v);
    v *= ratio;
  }
  if (append_zero) t.push_back(0.0);
  return t;
}

void validate_t_grid(const std::vector<double>& t) {
  if (t.size() < 2) throw std::invalid_argument("t grid: need at least 2 fibers");
  for (std::size_t k = 0; k + 1 < t.size(); ++k)
    if (!(t[k] > t[k + 1]))
      throw std::invalid_argument("t grid: values must be strictly decreasing");
  if (t.back() < 0.0) throw std::invalid_argument("t grid: negative parameter");
}

}  // namespace kelab
