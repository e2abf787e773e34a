#ifndef KELAB_GEOMETRY_HPP
#define KELAB_GEOMETRY_HPP

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kelab/grid_field.hpp"

namespace kelab {

using cplx = std::complex<double>;

enum class ChartKind : std::uint8_t { torus = 0, annulus = 1 };

/// Discretized model fiber. Cells are centered (half-cell offset from the
/// lattice), so lattice-symmetric points such as pole centers never coincide
/// with a cell center.
///
/// torus:   fundamental domain of C^n / (Z + tau Z)^n, n = 1 or 2, N cells
///          per axis, periodic in all axes.
/// annulus: {r_in < |z| < 1} in log-polar coordinates (u, theta),
///          u = log r in (-L, 0), L = -log r_in; N_rad x N_ang cells,
///          periodic in theta only. Radial rings within guard_u of either
///          end (at least one ring per side) carry Dirichlet data.
struct FiberGrid {
  ChartKind chart = ChartKind::torus;
  int n = 1;

  // torus parameters
  cplx tau{0.0, 1.0};
  int N = 0;

  // annulus parameters
  double r_in = 0.0;
  int N_rad = 0, N_ang = 0;
  double guard_u = 0.0;

  std::vector<int> dims;
  GridField cell_area;        // exact real 2n-volume per cell
  double total_volume = 0.0;  // sum of cell_area

  std::size_t cell_count() const { return cell_area.size(); }

  // ---- index helpers ----
  std::size_t stride(int axis) const;
  void unravel(std::size_t idx, int* out) const;

  // ---- coordinates ----
  /// torus: lattice coordinates s in [0,1)^{2n} of a cell center.
  void torus_s(std::size_t idx, double* s) const;
  /// chart point of a cell center; for n = 2 both coordinates.
  std::array<cplx, 2> point(std::size_t idx) const;
  /// annulus: u = log r at a cell center.
  double annulus_u(std::size_t idx) const;

  double L() const { return -std::log(r_in); }

  /// annulus: true if the cell carries Dirichlet data (guard band).
  bool is_boundary_cell(std::size_t idx) const;

  /// shortest squared distance between two chart points. On the torus this
  /// is the flat distance in C^n/(Z + tau Z)^n; on the annulus it is planar.
  double distance_sq(const std::array<cplx, 2>& p, const std::array<cplx, 2>& q) const;

  /// squared distance from a point to the pole locus through `center`
  /// (point pole for n = 1; coordinate divisor {z_axis = center_axis} for n = 2).
  double pole_distance_sq(std::size_t idx, const std::array<cplx, 2>& center, int axis) const;

  /// max cell extent (used for the near-pole guard radius).
  double cell_diameter() const;
};

double torus_distance_sq(cplx tau, cplx dz);

FiberGrid build_torus_fiber(int n, cplx tau, int N);
FiberGrid build_annulus_fiber(double r_in, int N_rad, int N_ang, double guard_u = 0.0);

/// Per-cell Hermitian coefficient matrix of a (1,1)-form. For n = 1 only a11
/// is used; for n = 2 the matrix is [[a11, a12], [conj(a12), a22]].
/// The Monge-Ampere density of the form against cell_area is det of this
/// matrix.
struct HermitianField {
  int n = 1;
  GridField a11;
  GridField a22;   // n == 2
  ComplexField a12;  // n == 2

  static HermitianField zeros(int n, const std::vector<int>& dims);
  std::size_t size() const { return a11.size(); }
  /// smallest eigenvalue of the cell matrix
  double min_eigenvalue(std::size_t i) const;
  double det(std::size_t i) const;
};

/// det of A per cell.
GridField ma_density(const HermitianField& A);
/// polarized mixed determinant D(A,B) per cell; D(A,A) = det A.
GridField mixed_density(const HermitianField& A, const HermitianField& B);

enum class BackgroundKind { flat, model_fs };

/// Background (1,1)-form chi.
struct HermitianForm {
  std::shared_ptr<const FiberGrid> grid;
  HermitianField coef;
  double class_volume = 0.0;  // V = integral of det(coef)

  GridField density() const { return ma_density(coef); }
};

HermitianForm background_form(std::shared_ptr<const FiberGrid> grid, BackgroundKind kind,
                              double volume, double fs_amplitude = 0.25);

/// One pole of the degenerating density: local factor (q + |t|^2)^a with
/// q the squared chart distance to the pole locus.
struct PoleSpec {
  std::array<cplx, 2> center{cplx(0, 0), cplx(0, 0)};
  double a = 0.0;  // exponent, must lie in (-1, 1]
  int axis = 0;    // n = 2: divisor {z_axis = center_axis}
};

/// Positive reference density Omega_t against cell_area.
struct VolumeDensity {
  std::shared_ptr<const FiberGrid> grid;
  std::vector<PoleSpec> poles;
  double t = 0.0;
  double c_t = 1.0;
  double smooth_amp = 0.0;
  GridField density;
  double total_mass = 0.0;
};

/// Evaluate the un-normalized density at a chart point (the construction
/// formula, exposed so tests can re-evaluate it independently of the grid).
double density_value(const FiberGrid& grid, const std::vector<PoleSpec>& poles, double t,
                     double smooth_amp, std::size_t cell_idx);

VolumeDensity volume_density(std::shared_ptr<const FiberGrid> grid,
                             const std::vector<PoleSpec>& poles, double t,
                             std::optional<double> normalize_to,
                             double smooth_amp = 0.0);

/// Degenerating family: shared grid and background, geometric t-ladder.
struct FamilyConfig {
  std::vector<double> t_values;  // strictly decreasing, at most one zero
  std::shared_ptr<const FiberGrid> grid;
  HermitianForm background;
  std::vector<PoleSpec> poles;
  bool normalize = true;
  double smooth_amp = 0.0;
};

std::vector<double> geometric_t_grid(double t_max, double ratio, int count, bool append_zero);
void validate_t_grid(const std::vector<double>& t);

}  // namespace kelab

#endif
