#include "winguide/geometry.hpp"

#include <cmath>
#include <string>

namespace winguide {

void Geometry::validate() const {
  if (!(d1_ > 0.0) || !std::isfinite(d1_))
    throw ValidationError("geometry: d1 must be positive, got " + std::to_string(d1_));
  if (!(d2_ >= 0.0) || !std::isfinite(d2_))
    throw ValidationError("geometry: d2 must be nonnegative, got " + std::to_string(d2_));
  if (!(a_ > 0.0) || !std::isfinite(a_))
    throw ValidationError("geometry: a must be positive, got " + std::to_string(a_));
  const double dmax = d2_ > d1_ ? d2_ : d1_;
  // The window must stay narrower than the wider strip; the asymptotic regime
  // (and every estimate here) lives in a < d.
  if (a_ >= dmax)
    throw ValidationError("geometry: window half-width a = " + std::to_string(a_) +
                          " must be smaller than the wider strip width d = " +
                          std::to_string(dmax));
}

double threshold(const Geometry& g) {
  const double d = g.d();
  return (M_PI / d) * (M_PI / d);
}

SpectralWindow eigen_bracket(const Geometry& g, double margin) {
  if (!(margin > 0.0) || margin >= 1.0)
    throw ValidationError("eigen_bracket: margin must lie in (0,1)");
  const double top = threshold(g);
  double bottom;
  if (g.half_strip()) {
    const double w = 2.0 * g.d();  // folded problem: full width 2d
    bottom = (M_PI / w) * (M_PI / w);
  } else {
    bottom = (M_PI / g.D()) * (M_PI / g.D());
  }
  return SpectralWindow{bottom, top * (1.0 - margin), margin};
}

}  // namespace winguide
