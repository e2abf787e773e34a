#include "kelab/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace kelab {

namespace {

struct WrapTables {
  std::vector<int> p1, m1, p2, m2;
  explicit WrapTables(int N) : p1(N), m1(N), p2(N), m2(N) {
    for (int i = 0; i < N; ++i) {
      p1[i] = (i + 1) % N;
      m1[i] = (i + N - 1) % N;
      p2[i] = (i + 2) % N;
      m2[i] = (i + N - 2) % N;
    }
  }
};

// ---- torus, one complex dimension: compact central stencils ----

void hessian_torus1(const FiberGrid& g, const GridField& phi, GridField& out) {
  const int N = g.N;
  const double rho = g.tau.real() / g.tau.imag();
  const double sig = 1.0 / g.tau.imag();
  const double N2 = static_cast<double>(N) * N;
  const double c00 = 0.25 * (1.0 + rho * rho) * N2;
  const double c11 = 0.25 * sig * sig * N2;
  const double c01 = -0.5 * rho * sig * (N2 / 4.0);
  WrapTables w(N);
  const double* f = phi.v.data();
  for (int i = 0; i < N; ++i) {
    const int ip = w.p1[i], im = w.m1[i];
    for (int j = 0; j < N; ++j) {
      const int jp = w.p1[j], jm = w.m1[j];
      const double fc = f[i * N + j];
      double d00 = f[ip * N + j] - 2.0 * fc + f[im * N + j];
      double d11 = f[i * N + jp] - 2.0 * fc + f[i * N + jm];
      double x01 = f[ip * N + jp] - f[ip * N + jm] - f[im * N + jp] + f[im * N + jm];
      out[static_cast<std::size_t>(i) * N + j] = c00 * d00 + c11 * d11 + c01 * x01;
    }
  }
}

void hessian_annulus(const FiberGrid& g, const GridField& phi, GridField& out) {
  const int Nr = g.N_rad, Na = g.N_ang;
  const double hu = g.L() / Nr, ht = 2.0 * M_PI / Na;
  const double cu = 0.25 / (hu * hu), ct = 0.25 / (ht * ht);
  WrapTables w(Na);
  const double* f = phi.v.data();
  for (int i = 0; i < Nr; ++i) {
    if (i == 0 || i == Nr - 1) {
      for (int j = 0; j < Na; ++j) out[static_cast<std::size_t>(i) * Na + j] = 0.0;
      continue;
    }
    const double e2u = std::exp(-2.0 * (-g.L() + (i + 0.5) * hu));
    for (int j = 0; j < Na; ++j) {
      const double fc = f[i * Na + j];
      double duu = f[(i + 1) * Na + j] - 2.0 * fc + f[(i - 1) * Na + j];
      double dtt = f[i * Na + w.p1[j]] - 2.0 * fc + f[i * Na + w.m1[j]];
      out[static_cast<std::size_t>(i) * Na + j] = e2u * (cu * duu + ct * dtt);
    }
  }
}

// ---- torus, two complex dimensions: composed centered differences ----
//
// d/dz_j = c1 A_{2j} + c2 A_{2j+1} with A_k the centered difference along
// grid axis k; the Hessian entries are the composed (wide) stencils.

struct Torus2Coef {
  double q;  // N^2/4, common stencil scale
  cplx h11_00, h11_11, h11_01;  // H_jj: A^2_even, A^2_odd, cross
  cplx h12_02, h12_03, h12_12, h12_13;
  explicit Torus2Coef(const FiberGrid& g) {
    const double N2 = static_cast<double>(g.N) * g.N;
    q = N2 / 4.0;
    cplx c1 = cplx(g.tau.imag(), g.tau.real()) / (2.0 * g.tau.imag());
    cplx c2 = cplx(0.0, -1.0) / (2.0 * g.tau.imag());
    cplx cb1 = std::conj(c1), cb2 = std::conj(c2);
    h11_00 = c1 * cb1;
    h11_11 = c2 * cb2;
    h11_01 = c1 * cb2 + c2 * cb1;
    h12_02 = c1 * cb1;
    h12_03 = c1 * cb2;
    h12_12 = c2 * cb1;
    h12_13 = c2 * cb2;
  }
};

// the ten wide stencil values at one cell
struct Stencils2 {
  double a00, a11, a22, a33;  // A_k^2
  double a01, a23;            // in-dimension crosses
  double a02, a03, a12, a13;  // cross-dimension
};

inline Stencils2 wide_stencils(const double* f, const WrapTables& w, int N, int i0, int i1,
                               int i2, int i3, double q) {
  auto idx = [N](int a, int b, int c, int d) -> std::size_t {
    return ((static_cast<std::size_t>(a) * N + b) * N + c) * N + d;
  };
  const double fc = f[idx(i0, i1, i2, i3)];
  Stencils2 s;
  s.a00 = (f[idx(w.p2[i0], i1, i2, i3)] - 2.0 * fc + f[idx(w.m2[i0], i1, i2, i3)]) * q;
  s.a11 = (f[idx(i0, w.p2[i1], i2, i3)] - 2.0 * fc + f[idx(i0, w.m2[i1], i2, i3)]) * q;
  s.a22 = (f[idx(i0, i1, w.p2[i2], i3)] - 2.0 * fc + f[idx(i0, i1, w.m2[i2], i3)]) * q;
  s.a33 = (f[idx(i0, i1, i2, w.p2[i3])] - 2.0 * fc + f[idx(i0, i1, i2, w.m2[i3])]) * q;
  s.a01 = (f[idx(w.p1[i0], w.p1[i1], i2, i3)] - f[idx(w.p1[i0], w.m1[i1], i2, i3)] -
           f[idx(w.m1[i0], w.p1[i1], i2, i3)] + f[idx(w.m1[i0], w.m1[i1], i2, i3)]) * q;
  s.a23 = (f[idx(i0, i1, w.p1[i2], w.p1[i3])] - f[idx(i0, i1, w.p1[i2], w.m1[i3])] -
           f[idx(i0, i1, w.m1[i2], w.p1[i3])] + f[idx(i0, i1, w.m1[i2], w.m1[i3])]) * q;
  s.a02 = (f[idx(w.p1[i0], i1, w.p1[i2], i3)] - f[idx(w.p1[i0], i1, w.m1[i2], i3)] -
           f[idx(w.m1[i0], i1, w.p1[i2], i3)] + f[idx(w.m1[i0], i1, w.m1[i2], i3)]) * q;
  s.a03 = (f[idx(w.p1[i0], i1, i2, w.p1[i3])] - f[idx(w.p1[i0], i1, i2, w.m1[i3])] -
           f[idx(w.m1[i0], i1, i2, w.p1[i3])] + f[idx(w.m1[i0], i1, i2, w.m1[i3])]) * q;
  s.a12 = (f[idx(i0, w.p1[i1], w.p1[i2], i3)] - f[idx(i0, w.p1[i1], w.m1[i2], i3)] -
           f[idx(i0, w.m1[i1], w.p1[i2], i3)] + f[idx(i0, w.m1[i1], w.m1[i2], i3)]) * q;
  s.a13 = (f[idx(i0, w.p1[i1], i2, w.p1[i3])] - f[idx(i0, w.p1[i1], i2, w.m1[i3])] -
           f[idx(i0, w.m1[i1], i2, w.p1[i3])] + f[idx(i0, w.m1[i1], i2, w.m1[i3])]) * q;
  return s;
}

inline void combine_hessian(const Torus2Coef& c, const Stencils2& s, double& h11, double& h22,
                            cplx& h12) {
  h11 = (c.h11_00 * s.a00 + c.h11_11 * s.a11 + c.h11_01 * s.a01).real();
  h22 = (c.h11_00 * s.a22 + c.h11_11 * s.a33 + c.h11_01 * s.a23).real();
  h12 = c.h12_02 * s.a02 + c.h12_03 * s.a03 + c.h12_12 * s.a12 + c.h12_13 * s.a13;
}

void hessian_torus2(const FiberGrid& g, const GridField& phi, HermitianField& out) {
  const int N = g.N;
  Torus2Coef c(g);
  WrapTables w(N);
  const double* f = phi.v.data();
  std::size_t k = 0;
  for (int i0 = 0; i0 < N; ++i0)
    for (int i1 = 0; i1 < N; ++i1)
      for (int i2 = 0; i2 < N; ++i2)
        for (int i3 = 0; i3 < N; ++i3, ++k) {
          Stencils2 s = wide_stencils(f, w, N, i0, i1, i2, i3, c.q);
          combine_hessian(c, s, out.a11[k], out.a22[k], out.a12[k]);
        }
}

}  // namespace

HermitianField complex_hessian(const FiberGrid& g, const GridField& phi) {
  HermitianField h = HermitianField::zeros(g.n, g.dims);
  if (g.chart == ChartKind::annulus) {
    hessian_annulus(g, phi, h.a11);
  } else if (g.n == 1) {
    hessian_torus1(g, phi, h.a11);
  } else {
    hessian_torus2(g, phi, h);
  }
  return h;
}

std::array<ComplexField, 2> complex_gradient(const FiberGrid& g, const GridField& phi) {
  std::array<ComplexField, 2> out;
  const double* f = phi.v.data();
  if (g.chart == ChartKind::annulus) {
    const int Nr = g.N_rad, Na = g.N_ang;
    const double hu = g.L() / Nr, ht = 2.0 * M_PI / Na;
    WrapTables w(Na);
    out[0].assign(phi.size(), cplx(0, 0));
    for (int i = 0; i < Nr; ++i) {
      double u = -g.L() + (i + 0.5) * hu;
      for (int j = 0; j < Na; ++j) {
        double du;
        if (i == 0)
          du = (f[(i + 1) * Na + j] - f[i * Na + j]) / hu;
        else if (i == Nr - 1)
          du = (f[i * Na + j] - f[(i - 1) * Na + j]) / hu;
        else
          du = (f[(i + 1) * Na + j] - f[(i - 1) * Na + j]) / (2.0 * hu);
        double dt = (f[i * Na + w.p1[j]] - f[i * Na + w.m1[j]]) / (2.0 * ht);
        double th = (j + 0.5) * ht;
        cplx z = std::exp(cplx(u, th));
        out[0][static_cast<std::size_t>(i) * Na + j] = cplx(du, -dt) / (2.0 * z);
      }
    }
    return out;
  }
  const int N = g.N;
  WrapTables w(N);
  cplx c1 = cplx(g.tau.imag(), g.tau.real()) / (2.0 * g.tau.imag());
  cplx c2 = cplx(0.0, -1.0) / (2.0 * g.tau.imag());
  const double half_N = 0.5 * N;
  if (g.n == 1) {
    out[0].assign(phi.size(), cplx(0, 0));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        double a0 = (f[w.p1[i] * N + j] - f[w.m1[i] * N + j]) * half_N;
        double a1 = (f[i * N + w.p1[j]] - f[i * N + w.m1[j]]) * half_N;
        out[0][static_cast<std::size_t>(i) * N + j] = c1 * a0 + c2 * a1;
      }
    return out;
  }
  out[0].assign(phi.size(), cplx(0, 0));
  out[1].assign(phi.size(), cplx(0, 0));
  auto idx = [N](int a, int b, int c, int d) -> std::size_t {
    return ((static_cast<std::size_t>(a) * N + b) * N + c) * N + d;
  };
  std::size_t k = 0;
  for (int i0 = 0; i0 < N; ++i0)
    for (int i1 = 0; i1 < N; ++i1)
      for (int i2 = 0; i2 < N; ++i2)
        for (int i3 = 0; i3 < N; ++i3, ++k) {
          double a0 = (f[idx(w.p1[i0], i1, i2, i3)] - f[idx(w.m1[i0], i1, i2, i3)]) * half_N;
          double a1 = (f[idx(i0, w.p1[i1], i2, i3)] - f[idx(i0, w.m1[i1], i2, i3)]) * half_N;
          double a2 = (f[idx(i0, i1, w.p1[i2], i3)] - f[idx(i0, i1, w.m1[i2], i3)]) * half_N;
          double a3 = (f[idx(i0, i1, i2, w.p1[i3])] - f[idx(i0, i1, i2, w.m1[i3])]) * half_N;
          out[0][k] = c1 * a0 + c2 * a1;
          out[1][k] = c1 * a2 + c2 * a3;
        }
  return out;
}

void ma_linearized_apply(const FiberGrid& g, const HermitianField& M, const GridField& w,
                         const double* x, double* y) {
  if (g.chart == ChartKind::annulus) {
    const int Nr = g.N_rad, Na = g.N_ang;
    const double hu = g.L() / Nr, ht = 2.0 * M_PI / Na;
    const double cu = 0.25 / (hu * hu), ct = 0.25 / (ht * ht);
    WrapTables wt(Na);
    for (int i = 0; i < Nr; ++i) {
      const double e2u = (i == 0 || i == Nr - 1)
                             ? 0.0
                             : std::exp(-2.0 * (-g.L() + (i + 0.5) * hu));
      for (int j = 0; j < Na; ++j) {
        std::size_t k = static_cast<std::size_t>(i) * Na + j;
        double lap = 0.0;
        if (e2u != 0.0) {
          double duu = x[(i + 1) * Na + j] - 2.0 * x[k] + x[(i - 1) * Na + j];
          double dtt = x[i * Na + wt.p1[j]] - 2.0 * x[k] + x[i * Na + wt.m1[j]];
          lap = e2u * (cu * duu + ct * dtt);
        }
        y[k] = w[k] * x[k] - lap;
      }
    }
    return;
  }
  const int N = g.N;
  if (g.n == 1) {
    const double rho = g.tau.real() / g.tau.imag();
    const double sig = 1.0 / g.tau.imag();
    const double N2 = static_cast<double>(N) * N;
    const double c00 = 0.25 * (1.0 + rho * rho) * N2;
    const double c11 = 0.25 * sig * sig * N2;
    const double c01 = -0.5 * rho * sig * (N2 / 4.0);
    WrapTables wt(N);
    for (int i = 0; i < N; ++i) {
      const int ip = wt.p1[i], im = wt.m1[i];
      for (int j = 0; j < N; ++j) {
        const int jp = wt.p1[j], jm = wt.m1[j];
        std::size_t k = static_cast<std::size_t>(i) * N + j;
        double d00 = x[ip * N + j] - 2.0 * x[k] + x[im * N + j];
        double d11 = x[i * N + jp] - 2.0 * x[k] + x[i * N + jm];
        double x01 = x[ip * N + jp] - x[ip * N + jm] - x[im * N + jp] + x[im * N + jm];
        y[k] = w[k] * x[k] - (c00 * d00 + c11 * d11 + c01 * x01);
      }
    }
    return;
  }
  Torus2Coef c(g);
  WrapTables wt(N);
  std::size_t k = 0;
  for (int i0 = 0; i0 < N; ++i0)
    for (int i1 = 0; i1 < N; ++i1)
      for (int i2 = 0; i2 < N; ++i2)
        for (int i3 = 0; i3 < N; ++i3, ++k) {
          Stencils2 s = wide_stencils(x, wt, N, i0, i1, i2, i3, c.q);
          double h11, h22;
          cplx h12;
          combine_hessian(c, s, h11, h22, h12);
          double tr = M.a22[k] * h11 + M.a11[k] * h22 -
                      2.0 * (M.a12[k] * std::conj(h12)).real();
          y[k] = w[k] * x[k] - tr;
        }
}

GridField ma_linearized_diagonal(const FiberGrid& g, const HermitianField& M,
                                 const GridField& w) {
  GridField d(g.dims);
  if (g.chart == ChartKind::annulus) {
    const double hu = g.L() / g.N_rad, ht = 2.0 * M_PI / g.N_ang;
    for (std::size_t k = 0; k < d.size(); ++k) {
      int mi[2];
      g.unravel(k, mi);
      double e2u = (mi[0] == 0 || mi[0] == g.N_rad - 1)
                       ? 0.0
                       : std::exp(-2.0 * g.annulus_u(k));
      d[k] = w[k] + e2u * 0.5 * (1.0 / (hu * hu) + 1.0 / (ht * ht));
    }
    return d;
  }
  const double N2 = static_cast<double>(g.N) * g.N;
  if (g.n == 1) {
    const double rho = g.tau.real() / g.tau.imag();
    const double sig = 1.0 / g.tau.imag();
    const double c = 0.5 * N2 * (1.0 + rho * rho + sig * sig);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = w[k] + c;
    return d;
  }
  Torus2Coef c(g);
  const double center = 2.0 * c.q * (c.h11_00 + c.h11_11).real();  // -diag of A_k^2 pair
  for (std::size_t k = 0; k < d.size(); ++k)
    d[k] = w[k] + (M.a11[k] + M.a22[k]) * center;
  return d;
}

GridField prolong(const FiberGrid& coarse, const FiberGrid& fine, const GridField& field) {
  if (coarse.chart != fine.chart || coarse.n != fine.n)
    throw std::invalid_argument("prolong: chart mismatch");
  GridField out(fine.dims);
  const int naxes = static_cast<int>(fine.dims.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    int mi[4];
    fine.unravel(k, mi);
    // accumulate multilinear interpolation over axes
    double acc = 0.0;
    int corners = 1 << naxes;
    for (int mask = 0; mask < corners; ++mask) {
      double wgt = 1.0;
      std::size_t idx = 0;
      for (int a = 0; a < naxes; ++a) {
        int Nf = fine.dims[a], Nc = coarse.dims[a];
        double sc = (mi[a] + 0.5) / Nf * Nc - 0.5;
        int i0 = static_cast<int>(std::floor(sc));
        double fr = sc - i0;
        int ia;
        bool periodic = !(fine.chart == ChartKind::annulus && a == 0);
        if (mask & (1 << a)) {
          ia = i0 + 1;
          wgt *= fr;
        } else {
          ia = i0;
          wgt *= 1.0 - fr;
        }
        if (periodic)
          ia = ((ia % Nc) + Nc) % Nc;
        else
          ia = std::min(std::max(ia, 0), Nc - 1);
        idx = idx * static_cast<std::size_t>(Nc) + static_cast<std::size_t>(ia);
      }
      acc += wgt * field[idx];
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace kelab
