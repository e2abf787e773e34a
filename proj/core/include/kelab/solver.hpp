#ifndef KELAB_SOLVER_HPP
#define KELAB_SOLVER_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "kelab/geometry.hpp"
#include "kelab/operators.hpp"

namespace kelab {

enum CellMask : std::uint8_t {
  mask_none = 0,
  mask_pole_guard = 1,  // within one cell of a t = 0 pole: integrated, never a sup/inf witness
  mask_dirichlet = 2,   // boundary data cell (annulus guard band)
};

struct SolverOptions {
  double residual_tol = 1e-9;   // sup-norm of the Monge-Ampere defect
  int max_newton = 60;
  double armijo_c = 1e-4;       // sufficient-decrease factor, halving steps
  double linear_tol = 1e-10;    // relative Krylov tolerance
  int max_linear_iters = 50000;
  std::vector<int> ladder;      // coarse cells-per-axis, ascending (optional)
  bool verbose = false;
};

struct SolveStats {
  int newton_iters = 0;
  long linear_iters = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  bool warm_started = false;
};

/// Scalar potential on a fiber, with the validity mask and the residual the
/// solver achieved.
struct PotentialField {
  std::shared_ptr<const FiberGrid> grid;
  GridField phi;
  std::vector<std::uint8_t> mask;
  double residual_sup = 0.0;

  bool is_witness(std::size_t i) const { return mask.empty() || mask[i] == mask_none; }
  bool is_solved(std::size_t i) const {
    return mask.empty() || (mask[i] & mask_dirichlet) == 0;
  }
  /// sup / inf of phi over witness cells
  double sup() const;
  double inf() const;
};

class SolveError : public std::runtime_error {
 public:
  enum class Kind { non_convergence, positivity_loss, boundary_data_missing };
  SolveError(Kind k, const std::string& msg, double last_residual = 0.0)
      : std::runtime_error(msg), kind(k), last_residual(last_residual) {}
  Kind kind;
  double last_residual;
};

struct ResidualReport {
  GridField field;  // per-cell defect against cell_area (zero at data cells)
  double sup = 0.0;
  double l1 = 0.0;
};

/// Defect of (chi + i ddbar phi)^n - e^phi Omega, per cell.
ResidualReport residual(const PotentialField& phi, const HermitianForm& chi,
                        const VolumeDensity& omega);

/// Solve (chi + i ddbar phi)^n = e^phi Omega by damped Newton iteration.
/// `dirichlet` supplies boundary-band values on the annulus (full-size field,
/// read only at data cells). `initial` optionally warm-starts the iteration.
PotentialField solve_ke(const std::shared_ptr<const FiberGrid>& grid, const HermitianForm& chi,
                        const VolumeDensity& omega, const SolverOptions& opts = {},
                        const GridField* dirichlet = nullptr, const GridField* initial = nullptr,
                        SolveStats* stats = nullptr);

struct FiberResult {
  double t = 0.0;
  std::optional<PotentialField> phi;
  SolveStats stats;
  std::string error;  // empty on success
};

/// Solve every fiber of the family in decreasing t, warm-starting each solve
/// from the previous potential. Failures are recorded and the remaining
/// fibers still run (cold-started).
std::vector<FiberResult> continuation_solve(const FamilyConfig& family,
                                            const SolverOptions& opts = {});

/// Mask cells within one cell diameter of a pole center (applied at t = 0).
std::vector<std::uint8_t> pole_guard_mask(const FiberGrid& grid,
                                          const std::vector<PoleSpec>& poles, double t);

}  // namespace kelab

#endif
