#pragma once

#include <Eigen/Dense>
#include <vector>

#include "winguide/geometry.hpp"

namespace winguide {

/// Matching system at energy E.  Mode ansatz: window region expanded in
/// cross-section modes with even longitudinal profiles normalized to 1 at
/// x = a, outer region in per-strip Dirichlet modes decaying like
/// exp(-kappa_n (x-a)).  Imposing trace continuity (outer trace zero-extended
/// across the wall segment) and derivative matching projected on the outer
/// bases, the inner coefficients b satisfy A b = 0 with
///   A[n][m] = O[n][m] * (t_m(E) + kappa_n),
/// where O is the transverse overlap matrix, t_m = nu tanh(nu a) for
/// evanescent inner modes and -k tan(k a) for propagating ones.
struct SecularSystem {
  double energy = 0.0;
  int n_inner = 0;
  int n_outer = 0;                  // total outer count (both strips stacked)
  Eigen::MatrixXd matrix;           // n_outer x n_inner
  std::vector<double> inner_rates;  // nu_m (evanescent) or k_m (propagating)
  std::vector<bool> propagating;    // rate_m < E
  std::vector<double> outer_rates;  // kappa_n, stacked upper then lower strip
};

[[nodiscard]] SecularSystem assemble_secular(const Geometry& g, double E, int n_inner,
                                             int n_outer);

/// Smallest singular value of the matching matrix scaled by the largest row
/// norm (dimensionless root criterion).
[[nodiscard]] double smallest_singular_value(const SecularSystem& sys);

enum class SolveStatus {
  Converged,
  NoEigenvalueResolved,  // no root of the matching system found in the bracket
  PrecisionFloor,        // root hugs the threshold below 1e-13 * threshold
};

struct EigenResult {
  SolveStatus status = SolveStatus::NoEigenvalueResolved;
  double energy = 0.0;            // best eigenvalue estimate (extrapolated over N)
  double root_energy = 0.0;       // secular root at the final truncation level
  double gap = 0.0;               // threshold - energy
  double residual = 0.0;          // scaled sigma_min at the secular root
  double truncation_error = 0.0;  // estimated remaining error (tail of the
                                  // level moves at the measured decay ratio)
  int n_modes = 0;
  Eigen::VectorXd kernel_vector;  // inner coefficients b at the secular root
};

/// Per-level solver diagnostic (one entry per truncation doubling).
struct LevelTrace {
  int n = 0;
  double root_energy = 0.0;  // secular root at this level
  double energy = 0.0;       // level energy estimate (Richardson ladder)
  double sigma = 0.0;        // scaled sigma_min at the root
};

/// Ground state below the threshold: scan sigma_min over log(gap), golden
/// section plus a flank-intersection polish at the minimum, and double the
/// (square) truncation until the estimated remaining error drops below
/// tol * gap.  Secular roots converge like 1/N (window-edge singularity), so
/// each level carries a two-step Richardson ladder (1/N, then 1/N^2 removed)
/// and `energy` reports the deepest rung still below threshold; `root_energy`
/// keeps the raw final-level root that `residual` and `kernel_vector` refer
/// to.
[[nodiscard]] EigenResult solve_ground_state(const Geometry& g, double tol = 1e-6,
                                             int n_max = 1024,
                                             std::vector<LevelTrace>* trace = nullptr);

}  // namespace winguide
