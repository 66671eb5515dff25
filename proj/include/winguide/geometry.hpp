#pragma once

#include "winguide/errors.hpp"

namespace winguide {

/// Two parallel Dirichlet strips of widths d1 (above) and d2 (below) coupled
/// through a window of half-width a in the common boundary y = 0.
/// d2 == 0 selects the half-strip reduction: one strip of width d1 with a
/// Neumann window of half-width a on its lower edge (the symmetric problem
/// folded across y = 0).
class Geometry {
 public:
  Geometry(double d1, double d2, double a) : d1_(d1), d2_(d2), a_(a) { validate(); }

  [[nodiscard]] double d1() const { return d1_; }
  [[nodiscard]] double d2() const { return d2_; }
  [[nodiscard]] double a() const { return a_; }

  /// Wider strip width; sets the essential-spectrum threshold (pi/d)^2.
  [[nodiscard]] double d() const { return d2_ > d1_ ? d2_ : d1_; }
  /// Full cross-section width of the coupled region.
  [[nodiscard]] double D() const { return d1_ + d2_; }
  [[nodiscard]] bool half_strip() const { return d2_ == 0.0; }

 private:
  void validate() const;

  double d1_, d2_, a_;
};

/// Energy interval known a priori to contain the ground state, with the top
/// end pulled strictly below the threshold so root searches stay inside the
/// discrete-spectrum region.
struct SpectralWindow {
  double e_min;
  double e_max;
  double margin;  // relative shrink applied at the top end
};

/// Bottom of the essential spectrum, (pi/d)^2 with d the wider strip width.
[[nodiscard]] double threshold(const Geometry& g);

/// A priori bracket for the ground state:
///   two-strip: ((pi/D)^2, (pi/d)^2),  half-strip: ((pi/2d)^2, (pi/d)^2),
/// with e_max = (pi/d)^2 * (1 - margin).
[[nodiscard]] SpectralWindow eigen_bracket(const Geometry& g, double margin = 1e-12);

}  // namespace winguide
