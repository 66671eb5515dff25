#pragma once

namespace winguide {

/// Everything needed to evaluate the certified lower-bound coefficient c1 in
/// gap <= c1 * a^4, assembled from the tail-coupling constant C, the
/// admissible weight delta, the window-form constant c0(m), and the final
/// quartic coefficient.
struct ConstantChain {
  double d = 0.0;
  double a_max = 0.0;
  double C = 0.0;       // tail-coupling constant (16/d)(2 pi^2/(3 d^2) + E1(2 pi/d))
  double a_star = 0.0;  // largest a with delta = 1 admissible: sqrt(2 pi/(d C))
  double delta = 0.0;   // min(1, 2 pi/(d C a_max^2))
  double m = 0.0;       // (pi/8) sqrt(delta)
  double c0 = 0.0;      // (m/sqrt 3) tanh(m/sqrt 3)
  double c1 = 0.0;      // 2 (4 pi^2/(c0 d^3))^2
};

/// Exponential integral E1(z) = integral_1^inf exp(-z x)/x dx, z > 0.
/// Series for small z, continued fraction otherwise; 1e-14 level accuracy.
[[nodiscard]] double expint_e1(double z);

/// C(d) = (16/d) (2 pi^2/(3 d^2) + E1(2 pi/d)).
[[nodiscard]] double gamma_constant(double d);

/// Assemble the full chain for window half-widths up to a_max.
[[nodiscard]] ConstantChain build_chain(double d, double a_max);

}  // namespace winguide
