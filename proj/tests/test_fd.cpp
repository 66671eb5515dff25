#include <doctest.h>

#include <cmath>
#include <numbers>

#include "winguide/errors.hpp"
#include "winguide/fd_oracle.hpp"
#include "winguide/geometry.hpp"

using namespace winguide;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("grid validation") {
  const Geometry g(1.0, 1.0, 0.3);
  CHECK_THROWS_AS((void)fd_ground_state(g, GridSpec{0.0, 4.0}), ValidationError);
  CHECK_THROWS_AS((void)fd_ground_state(g, GridSpec{-0.1, 4.0}), ValidationError);
  // Box shorter than four strip widths.
  CHECK_THROWS_AS((void)fd_ground_state(g, GridSpec{1.0 / 20.0, 2.0}), ValidationError);
  // Window edge not on the grid: a/h must be an integer.
  CHECK_THROWS_AS((void)fd_ground_state(g, GridSpec{1.0 / 7.0, 4.0}), ValidationError);
  // Tiny windows are below the oracle's resolution by contract.
  CHECK_THROWS_AS((void)fd_ground_state(Geometry(1.0, 1.0, 0.05), GridSpec{1.0 / 20.0, 4.0}),
                  ValidationError);
}

TEST_CASE("discrete transverse threshold carries the standard dispersion error") {
  // Pure strip of width 1 at h = 1/80: lowest transverse eigenvalue of the
  // second-difference operator is (4/h^2) sin^2(pi h/2) = pi^2 - (pi^4/12) h^2 + ...
  const double h = 1.0 / 80.0;
  const FdResult r = fd_ground_state(Geometry(1.0, 1.0, 0.3), GridSpec{h, 4.0});
  const double err = kPi * kPi - r.discrete_threshold;
  CHECK(err == doctest::Approx(std::pow(kPi, 4) / 12.0 * h * h).epsilon(2e-3));
}

TEST_CASE("grid eigenvalues sit below the discrete threshold") {
  const FdResult r = fd_ground_state(Geometry(1.0, 1.0, 0.3), GridSpec{1.0 / 40.0, 4.0});
  CHECK(r.energy_h < r.discrete_threshold);
  CHECK(r.energy_h2 < r.discrete_threshold);
  CHECK(r.energy < r.discrete_threshold);
  CHECK(r.unknowns > 0);
}

TEST_CASE("two-strip grid and folded half-strip grid agree") {
  // Equal widths: the even reflection across the window line is exact on the
  // grid, so the assembled problems carry identical spectra.
  const FdResult two = fd_ground_state(Geometry(1.0, 1.0, 0.3), GridSpec{1.0 / 20.0, 4.0});
  const FdResult half = fd_ground_state(Geometry(1.0, 0.0, 0.3), GridSpec{1.0 / 20.0, 4.0});
  CHECK(two.energy_h == doctest::Approx(half.energy_h).epsilon(1e-12));
  CHECK(two.energy_h2 == doctest::Approx(half.energy_h2).epsilon(1e-12));
}

TEST_CASE("extrapolated eigenvalue change shrinks ~4x per h halving") {
  // Raw grid values converge O(h) (window-edge corners); the extrapolant is
  // second order, so its per-halving change contracts by about four.
  const Geometry g(1.0, 1.0, 0.3);
  const double e0 = fd_ground_state(g, GridSpec{1.0 / 40.0, 4.0}).energy;
  const double e1 = fd_ground_state(g, GridSpec{1.0 / 80.0, 4.0}).energy;
  const double e2 = fd_ground_state(g, GridSpec{1.0 / 160.0, 4.0}).energy;
  const double ratio = (e1 - e0) / (e2 - e1);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("domain truncation error decays exponentially in the box length") {
  // The bound state decays like exp(-kappa |x|) with kappa = sqrt(gap), about
  // 1.09 at a = 0.3, so each extra unit of box length shrinks the truncation
  // error by roughly exp(2 kappa) ~ 9.
  const Geometry g(1.0, 1.0, 0.3);
  const double e4 = fd_ground_state(g, GridSpec{1.0 / 40.0, 4.0}).energy;
  const double e5 = fd_ground_state(g, GridSpec{1.0 / 40.0, 5.0}).energy;
  const double e6 = fd_ground_state(g, GridSpec{1.0 / 40.0, 6.0}).energy;
  const double e7 = fd_ground_state(g, GridSpec{1.0 / 40.0, 7.0}).energy;
  CHECK(std::abs(e4 - e7) > 4.0 * std::abs(e5 - e7));
  CHECK(std::abs(e5 - e7) > 4.0 * std::abs(e6 - e7));
  // At the reference box used elsewhere the truncation residue is negligible.
  CHECK(std::abs(e6 - e7) < 1e-5 * std::abs(e7));
}
