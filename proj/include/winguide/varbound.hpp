#pragma once

#include "winguide/geometry.hpp"

namespace winguide {

/// Parameters of the two-piece trial function psi = F + G:
///   F = alpha * f1(x) chi_1(y), f1 = 1 on the window, exp(-kappa(|x|-a)) outside;
///   G = eta * cos(pi x/(2a)) R(y) on |x| <= a, with R a boundary-layer profile
///       (exponential down to mid-strip, linear cutoff to the far wall).
struct TrialParams {
  double alpha = 1.0;
  double kappa = 0.0;
  double eta = 0.0;
};

/// All closed-form ingredients of the Rayleigh quotient at one parameter
/// point.  "L" is the exact quadratic form |grad psi|^2 - (pi/d)^2 |psi|^2;
/// the identity eliminating the transverse F-energy is exact, so L is free of
/// large cancellations.
struct TrialTerms {
  double R2 = 0.0;        // |R|^2 on the wider strip (both strips summed below)
  double Rp2 = 0.0;       // |R'|^2, wider strip
  double R2_sum = 0.0;    // |R|^2 summed over the strips carrying G
  double Rp2_sum = 0.0;   // |R'|^2 summed likewise
  double chiR = 0.0;      // <chi_1, R> on the wider strip (quadrature)
  double Fx2 = 0.0;       // |F_x|^2 = alpha^2 kappa
  double Gx2 = 0.0;       // eta^2 (pi^2/4a) * R2_sum
  double Gy2 = 0.0;       // eta^2 a * Rp2_sum
  double G2 = 0.0;        // eta^2 a * R2_sum
  double FG = 0.0;        // (F, G) = alpha eta (4a/pi) <chi_1, R>
  double intG0 = 0.0;     // window-trace integral of G at y = 0: 4 a eta/pi
  double coupling = 0.0;  // -2 alpha (pi/d) sqrt(2/d) * intG0
  double L = 0.0;         // Fx2 + Gx2 + Gy2 - (pi/d)^2 G2 + coupling
  double psi2 = 0.0;      // |psi|^2 = alpha^2(2a + 1/kappa) + 2 FG + G2
  double value = 0.0;     // L / psi2
};

struct TrialBound {
  TrialParams params;
  TrialTerms terms;
  double value = 0.0;             // optimized exact Rayleigh quotient (negative)
  double paper_chain_value = 0.0; // chained inequality estimate, see impl notes
};

enum class TrialVariant { Symmetric, Nonsymmetric };

/// Exact closed-form evaluation of the trial quotient at given parameters.
/// Variant is selected from the geometry: equal widths (or half-strip) use the
/// symmetric trial on the wider strip; unequal widths add the mirrored
/// boundary-layer profile in the narrower strip.
[[nodiscard]] TrialTerms trial_terms(const Geometry& g, const TrialParams& p);
[[nodiscard]] TrialTerms trial_terms_variant(const Geometry& g, const TrialParams& p,
                                             TrialVariant variant);

/// Minimize the exact quotient: closed-form eta for fixed kappa (ratio of
/// quadratics), golden section over log kappa seeded at 2^6 a^2/(pi d^3).
[[nodiscard]] TrialBound optimize_trial(const Geometry& g);

}  // namespace winguide
