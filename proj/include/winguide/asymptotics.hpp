#pragma once

#include <utility>
#include <vector>

#include "winguide/constant_chain.hpp"
#include "winguide/geometry.hpp"
#include "winguide/modematch.hpp"

namespace winguide {

struct SweepRow {
  double a = 0.0;
  double energy = 0.0;
  double gap = 0.0;
  int n_modes = 0;
  double residual = 0.0;
  SolveStatus status = SolveStatus::NoEigenvalueResolved;
};

struct SweepResult {
  double d1 = 0.0;
  double d2 = 0.0;
  std::vector<SweepRow> rows;       // sorted by a ascending
  double fit_slope = 0.0;           // d log(gap) / d log(a) over the fit window
  double fit_coefficient = 0.0;     // gap ~ coefficient * a^slope
  double fit_window_lo = 0.0;       // a-range actually used by the fit
  double fit_window_hi = 0.0;
  int fit_rows = 0;
};

/// Ground-state solves over strictly increasing half-widths (all < pi*d/8),
/// with the power law fitted over the lower half of the a-range; rows that
/// hit the precision floor (or resolve no eigenvalue) are excluded from the
/// fit.  threads = 0 reads WINGUIDE_THREADS (0 or unset: hardware
/// concurrency).
[[nodiscard]] SweepResult sweep(double d1, double d2, const std::vector<double>& half_widths,
                                double tol = 1e-6, int n_max = 1024, int threads = 0);

struct FitResult {
  double slope = 0.0;
  double coefficient = 0.0;  // gap ~ coefficient * a^slope
  double window_lo = 0.0;
  double window_hi = 0.0;
  int n_used = 0;
  double rms = 0.0;  // rms misfit in log(gap)
};

/// Least-squares power law on log-log axes.  lower_half restricts to points
/// at or below the geometric midpoint of the a-range.
[[nodiscard]] FitResult fit_power_law(const std::vector<std::pair<double, double>>& a_gap,
                                      bool lower_half = true);

enum class SandwichStatus { Pass, Fail, Inconclusive };

struct SandwichRow {
  double a = 0.0;
  double gap = 0.0;
  double lower = 0.0;       // |trial quotient|: gap must be >= this
  double upper = 0.0;       // c1 * a^4: gap must be <= this
  bool lower_ok = false;
  bool upper_ok = false;
  bool applicable = false;  // a <= a_star and the solve converged
  SandwichStatus status = SandwichStatus::Inconclusive;
};

struct SandwichReport {
  ConstantChain chain;
  std::vector<SandwichRow> rows;
  bool pass = false;          // every applicable row passed, and one exists
  bool inconclusive = false;  // no applicable rows at all
};

/// Two-sided check lower <= gap <= upper per sweep row.  trial_values are
/// the optimized trial quotients (negative), one per sweep row in order.
[[nodiscard]] SandwichReport sandwich_report(const SweepResult& sweep,
                                             const std::vector<double>& trial_values,
                                             const ConstantChain& chain);

}  // namespace winguide
