#pragma once

#include "winguide/errors.hpp"

namespace winguide {

enum class ModeFamily {
  OuterDirichlet,         // sqrt(2/w) sin(n pi (y-lo)/w) on [lo, lo+w]
  InnerNeumannDirichlet,  // sqrt(2/w) cos((m-1/2) pi y/w) on [0, w]
  InnerFullDirichlet,     // sqrt(2/W) sin(m pi (y+d2)/W) on [-d2, d1], W = d1+d2
};

/// Normalized transverse eigenfunction of one of the three cross-section
/// problems.  Every family is a single sinusoid A sin(omega y + phi), which is
/// what makes all overlaps and partial norms closed-form.
class TransverseMode {
 public:
  static TransverseMode outer_dirichlet(int n, double width, double lo = 0.0);
  static TransverseMode inner_neumann_dirichlet(int m, double width);
  static TransverseMode inner_full_dirichlet(int m, double d1, double d2);

  [[nodiscard]] double value(double y) const;
  /// Transverse eigenvalue (separation rate): freq^2.
  [[nodiscard]] double rate() const { return freq_ * freq_; }
  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return lo_ + width_; }
  [[nodiscard]] double width() const { return width_; }
  [[nodiscard]] int index() const { return index_; }
  [[nodiscard]] ModeFamily family() const { return family_; }
  [[nodiscard]] double amp() const { return amp_; }
  [[nodiscard]] double freq() const { return freq_; }
  [[nodiscard]] double phase() const { return phase_; }

 private:
  TransverseMode(ModeFamily f, int idx, double lo, double width, double amp, double freq,
                 double phase)
      : family_(f), index_(idx), lo_(lo), width_(width), amp_(amp), freq_(freq), phase_(phase) {}

  ModeFamily family_;
  int index_;
  double lo_, width_;
  double amp_, freq_, phase_;  // value(y) = amp * sin(freq*y + phase)
};

/// <outer, inner> over the outer mode's interval, closed form via
/// product-to-sum.  The outer interval must be contained in the inner one.
/// Near-resonant frequency pairs switch to the analytic limit.
[[nodiscard]] double overlap(const TransverseMode& outer, const TransverseMode& inner);

/// integral of mode(y)^2 over [lo + t0, lo + t1], offsets relative to the
/// mode's interval start; requires 0 <= t0 < t1 <= width.
[[nodiscard]] double mode_norm_on_subinterval(const TransverseMode& mode, double t0, double t1);

}  // namespace winguide
