#pragma once

#include <functional>

namespace winguide {

/// Adaptive Simpson integration of f over [a, b] to the given relative
/// tolerance (with an absolute floor for integrals near zero).  Intended for
/// smooth or piecewise-smooth 1-D integrands; split at known kinks for best
/// behavior.
[[nodiscard]] double integrate(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-12, double abs_floor = 1e-300);

}  // namespace winguide
