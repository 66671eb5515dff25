#include "winguide/constant_chain.hpp"

#include <cmath>
#include <limits>

#include "winguide/errors.hpp"

namespace winguide {

double expint_e1(double z) {
  if (!(z > 0.0)) throw ValidationError("expint_e1: need z > 0");
  if (z <= 1.0) {
    // E1(z) = -gamma - ln z + sum_{k>=1} (-1)^{k+1} z^k/(k k!)
    const double euler_gamma = 0.57721566490153286060651209008240243;
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 60; ++k) {
      term *= -z / k;
      const double add = -term / k;  // (-1)^{k+1} z^k/(k k!)
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return -euler_gamma - std::log(z) + sum;
  }
  // Modified Lentz for the continued fraction
  //   E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/(...)))).
  const double tiny = 1e-300;
  double b = z + 1.0;
  double c = 1.0 / tiny;
  double dd = 1.0 / b;
  double hcf = dd;
  for (int i = 1; i <= 200; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    dd = an * dd + b;
    if (std::abs(dd) < tiny) dd = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    dd = 1.0 / dd;
    const double delta = dd * c;
    hcf *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return hcf * std::exp(-z);
}

double gamma_constant(double d) {
  if (!(d > 0.0)) throw ValidationError("gamma_constant: need d > 0");
  return (16.0 / d) * (2.0 * M_PI * M_PI / (3.0 * d * d) + expint_e1(2.0 * M_PI / d));
}

ConstantChain build_chain(double d, double a_max) {
  if (!(d > 0.0)) throw ValidationError("build_chain: need d > 0");
  if (!(a_max > 0.0)) throw ValidationError("build_chain: a_max must be positive");
  ConstantChain ch;
  ch.d = d;
  ch.a_max = a_max;
  ch.C = gamma_constant(d);
  ch.a_star = std::sqrt(2.0 * M_PI / (d * ch.C));
  ch.delta = std::min(1.0, 2.0 * M_PI / (d * ch.C * a_max * a_max));
  ch.m = (M_PI / 8.0) * std::sqrt(ch.delta);
  const double mu = ch.m / std::sqrt(3.0);
  ch.c0 = mu * std::tanh(mu);
  const double r = 4.0 * M_PI * M_PI / (ch.c0 * d * d * d);
  ch.c1 = 2.0 * r * r;
  return ch;
}

}  // namespace winguide
