#include "winguide/transverse.hpp"

#include <cmath>
#include <string>

namespace winguide {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ValidationError(std::string("transverse mode: ") + name + " must be positive");
}

void require_index(int idx) {
  if (idx < 1) throw ValidationError("transverse mode: index must be >= 1");
}

// integral of cos(omega*y + phi) over [lo, hi] in the cancellation-free
// product form 2 cos(omega*c + phi) sin(omega*l/2)/omega; the omega -> 0
// limit is l*cos(phi at center).
double cos_integral(double omega, double phi, double lo, double hi, double resonance_tol) {
  const double len = hi - lo;
  const double center = 0.5 * (lo + hi);
  if (std::abs(omega) < resonance_tol) return len * std::cos(omega * center + phi);
  return 2.0 * std::cos(omega * center + phi) * std::sin(0.5 * omega * len) / omega;
}

}  // namespace

TransverseMode TransverseMode::outer_dirichlet(int n, double width, double lo) {
  require_index(n);
  require_positive(width, "width");
  const double freq = n * M_PI / width;
  // sqrt(2/w) sin(n pi (y - lo)/w)
  return TransverseMode(ModeFamily::OuterDirichlet, n, lo, width, std::sqrt(2.0 / width), freq,
                        -freq * lo);
}

TransverseMode TransverseMode::inner_neumann_dirichlet(int m, double width) {
  require_index(m);
  require_positive(width, "width");
  const double freq = (m - 0.5) * M_PI / width;
  // sqrt(2/w) cos((m-1/2) pi y/w) = sqrt(2/w) sin(freq*y + pi/2)
  return TransverseMode(ModeFamily::InnerNeumannDirichlet, m, 0.0, width, std::sqrt(2.0 / width),
                        freq, 0.5 * M_PI);
}

TransverseMode TransverseMode::inner_full_dirichlet(int m, double d1, double d2) {
  require_index(m);
  require_positive(d1, "d1");
  require_positive(d2, "d2");
  const double W = d1 + d2;
  const double freq = m * M_PI / W;
  // sqrt(2/W) sin(m pi (y + d2)/W)
  return TransverseMode(ModeFamily::InnerFullDirichlet, m, -d2, W, std::sqrt(2.0 / W), freq,
                        freq * d2);
}

double TransverseMode::value(double y) const { return amp_ * std::sin(freq_ * y + phase_); }

double overlap(const TransverseMode& outer, const TransverseMode& inner) {
  const double eps = 1e-12 * outer.width();
  if (outer.lo() < inner.lo() - eps || outer.hi() > inner.hi() + eps)
    throw ValidationError("overlap: outer mode interval must be contained in the inner one");
  // sin A sin B = (cos(A-B) - cos(A+B))/2 over the outer interval.
  const double res_tol = 1e-8 * M_PI / inner.width();
  const double lo = outer.lo(), hi = outer.hi();
  const double i_minus = cos_integral(outer.freq() - inner.freq(), outer.phase() - inner.phase(),
                                      lo, hi, res_tol);
  const double i_plus = cos_integral(outer.freq() + inner.freq(), outer.phase() + inner.phase(),
                                     lo, hi, res_tol);
  return 0.5 * outer.amp() * inner.amp() * (i_minus - i_plus);
}

double mode_norm_on_subinterval(const TransverseMode& mode, double t0, double t1) {
  if (!(t0 >= 0.0) || !(t0 < t1) || !(t1 <= mode.width() * (1.0 + 1e-12)))
    throw ValidationError("mode_norm_on_subinterval: need 0 <= t0 < t1 <= width");
  // sin^2 = (1 - cos(2*(freq*y+phase)))/2
  const double lo = mode.lo() + t0, hi = mode.lo() + std::min(t1, mode.width());
  const double res_tol = 1e-8 * M_PI / mode.width();
  const double osc = cos_integral(2.0 * mode.freq(), 2.0 * mode.phase(), lo, hi, res_tol);
  return 0.5 * mode.amp() * mode.amp() * ((hi - lo) - osc);
}

}  // namespace winguide
