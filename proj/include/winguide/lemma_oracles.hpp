#pragma once

#include <functional>
#include <vector>

#include "winguide/errors.hpp"

namespace winguide {

/// Uniform 1-D grid: nodes t0 + i*h, i = 0..n, h = (t1-t0)/n.
struct Grid1D {
  int n;
  double t0, t1;
  [[nodiscard]] double h() const { return (t1 - t0) / n; }
};

/// Piecewise-constant coefficient: values[k] on [breaks[k], breaks[k+1]].
/// Empty means identically zero.
struct PiecewiseConstCoeff {
  std::vector<double> breaks;
  std::vector<double> values;
};

struct BoundarySpec {
  enum class Kind { Free, Dirichlet };
  Kind kind = Kind::Free;
  double value = 0.0;  // only meaningful for Dirichlet
};

/// integral of weight(t) * phi(t) dt = target (discretized with the lumped
/// node weights).
struct LinearConstraintSpec {
  std::function<double(double)> weight;
  double target = 0.0;
};

/// Q[phi] = integral of phi'^2 + mass(t) phi^2 subject to endpoint conditions
/// and linear constraints.  Free endpoints are natural (Neumann).
struct QuadraticFormSpec {
  PiecewiseConstCoeff mass;
  BoundarySpec left, right;
  std::vector<LinearConstraintSpec> constraints;
};

struct FormMinimum {
  double value = 0.0;
  std::vector<double> t, phi;
};

/// Second-order finite-difference minimization of the form.  With any
/// inhomogeneous constraint (nonzero Dirichlet value or target) the minimum of
/// Q itself is returned; with all constraints homogeneous the Rayleigh minimum
/// Q[phi]/|phi|^2 is returned instead.  Constraints are eliminated by
/// null-space projection, never penalized.  Runs the grid at n and 2n and
/// requires agreement to 1% before returning the finer result.
[[nodiscard]] FormMinimum min_quadratic_form(const QuadraticFormSpec& spec, const Grid1D& grid);

/// Single-grid variant (no n vs 2n check); used for convergence studies.
[[nodiscard]] FormMinimum min_quadratic_form_on_grid(const QuadraticFormSpec& spec,
                                                     const Grid1D& grid);

/// min of integral phi'^2 + m^2 phi^2 over [0, 12/m] with phi(0) = 1, free
/// right end; continuum value m (exponential minimizer, truncation-tail
/// negligible at this length).
[[nodiscard]] FormMinimum lemma1_minimum(double m, int n);

/// Rayleigh minimum of phi'^2 / phi^2 on [-b, b] with Dirichlet ends; continuum
/// value (pi/(2b))^2.
[[nodiscard]] FormMinimum lemma2_minimum(double b, int n);

struct Lemma3Result {
  double rayleigh_min = 0.0;   // min phi'^2/|phi|^2, phi(d)=0, <phi,chi1>=0
  double epsilon2 = 0.0;       // rayleigh_min/(pi/d)^2 - 1
  double xi1 = 0.0;            // 8/(3 pi)
  double route_epsilon1 = 0.0; // overlap threshold delivered by the two-mode route
  double route_gamma_cap = 0.0;
  double route_epsilon2 = 0.0; // gap fraction guaranteed by the route
};

/// Spectral-gap oracle: fundamental-mode-orthogonal functions on the half
/// cross-section carry transverse energy strictly above the threshold.  The
/// explicit two-mode route delivers a (smaller) certified epsilon pair.
[[nodiscard]] Lemma3Result lemma3_gap(double d, const Grid1D& grid);

struct Lemma4Result {
  double numeric = 0.0;      // a * discrete minimum of the window form
  double closed_form = 0.0;  // (m/sqrt(3)) tanh(m/sqrt(3))
};

/// Window-localization oracle: minimize
///   integral phi'^2 + (m/a)^2 integral_{0..a} phi^2 - (pi/d)^2 integral phi^2
/// over phi(0)=1, phi(d)=0, <phi,chi1>=0, and compare a*minimum against the
/// closed-form constant.
[[nodiscard]] Lemma4Result lemma4_constant(double m, double d, double a, const Grid1D& grid);

[[nodiscard]] double lemma4_c0(double m);

/// Overlap threshold epsilon1 delivered by the two-mode route at the given
/// admissible gamma cap (default 0.75).
[[nodiscard]] double lemma3_route_epsilon1(double gamma_cap = 0.75);

/// Largest a with 2*|chi1 restricted to [0,a]| below epsilon1 (bisection on
/// the closed-form partial norm).
[[nodiscard]] double lemma_a0(double d, double epsilon1);

}  // namespace winguide
