#include "winguide/quadrature.hpp"

#include <cmath>

#include "winguide/errors.hpp"

namespace winguide {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  double tol_abs;
  int max_depth;

  double recurse(double a, double b, double fa, double fm, double fb, double whole,
                 int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= max_depth || std::abs(delta) <= 15.0 * tol_abs)
      return left + right + delta / 15.0;
    return recurse(a, m, fa, flm, fm, left, depth + 1) +
           recurse(m, b, fm, frm, fb, right, depth + 1);
  }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_floor) {
  if (!(b > a)) throw ValidationError("integrate: need b > a");
  // Coarse scale estimate on a fixed grid to anchor the relative tolerance.
  double scale = 0.0;
  const int kProbe = 32;
  for (int i = 0; i <= kProbe; ++i) {
    const double t = a + (b - a) * i / kProbe;
    scale += std::abs(f(t));
  }
  scale *= (b - a) / kProbe;
  const double tol_abs = std::max(rel_tol * scale, abs_floor);

  // Seed the adaptive pass with a composite grid over a prime number of
  // panels: a periodic integrand can land zeros on all five dyadic nodes of a
  // single panel and silently pass for 0, but not on the same fractions of
  // thirteen panels at once.
  const int kPanels = 13;
  const Simpson s{f, tol_abs / kPanels, 48};
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double pa = a + (b - a) * i / kPanels;
    const double pb = (i + 1 == kPanels) ? b : a + (b - a) * (i + 1) / kPanels;
    const double pm = 0.5 * (pa + pb);
    const double fa = f(pa), fm = f(pm), fb = f(pb);
    const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    total += s.recurse(pa, pb, fa, fm, fb, whole, 0);
  }
  return total;
}

}  // namespace winguide
