#include <doctest.h>

#include <cmath>
#include <numbers>

#include "winguide/quadrature.hpp"
#include "winguide/transverse.hpp"

using namespace winguide;
namespace {
constexpr double pi = std::numbers::pi;

double quad_overlap(const TransverseMode& u, const TransverseMode& v, double lo, double hi) {
  return integrate([&](double y) { return u.value(y) * v.value(y); }, lo, hi, 1e-13);
}
}  // namespace

TEST_CASE("outer Dirichlet modes: normalization, ends, rate") {
  for (int n = 1; n <= 5; ++n) {
    auto m = TransverseMode::outer_dirichlet(n, 0.7, -0.2);
    CHECK(m.value(-0.2) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(m.value(0.5) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(quad_overlap(m, m, -0.2, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.rate() == doctest::Approx(n * n * pi * pi / 0.49).epsilon(1e-13));
  }
}

TEST_CASE("inner Neumann-Dirichlet modes: free end at 0, pinned end at w") {
  const double w = 1.3;
  for (int m = 1; m <= 5; ++m) {
    auto u = TransverseMode::inner_neumann_dirichlet(m, w);
    CHECK(u.value(w) == doctest::Approx(0.0).epsilon(1e-13));
    // derivative vanishes at y = 0: central difference
    const double h = 1e-6;
    CHECK((u.value(h) - u.value(-h)) / (2 * h) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(quad_overlap(u, u, 0.0, w) == doctest::Approx(1.0).epsilon(1e-12));
    const double want = (m - 0.5) * pi / w;
    CHECK(u.rate() == doctest::Approx(want * want).epsilon(1e-13));
  }
}

TEST_CASE("inner full-Dirichlet modes span the joined cross-section") {
  const double d1 = 1.0, d2 = 0.6;
  for (int m = 1; m <= 4; ++m) {
    auto u = TransverseMode::inner_full_dirichlet(m, d1, d2);
    CHECK(u.value(-d2) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(u.value(d1) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(quad_overlap(u, u, -d2, d1) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mode families are orthonormal within each family") {
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      auto oi = TransverseMode::outer_dirichlet(i, 1.0);
      auto oj = TransverseMode::outer_dirichlet(j, 1.0);
      CHECK(quad_overlap(oi, oj, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
      auto ni = TransverseMode::inner_neumann_dirichlet(i, 1.0);
      auto nj = TransverseMode::inner_neumann_dirichlet(j, 1.0);
      CHECK(quad_overlap(ni, nj, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("closed-form overlap matches quadrature") {
  SUBCASE("half-strip family pair") {
    for (int n = 1; n <= 6; ++n)
      for (int m = 1; m <= 6; ++m) {
        auto outer = TransverseMode::outer_dirichlet(n, 1.0);
        auto inner = TransverseMode::inner_neumann_dirichlet(m, 1.0);
        CHECK(overlap(outer, inner) ==
              doctest::Approx(quad_overlap(outer, inner, 0.0, 1.0)).epsilon(1e-11));
      }
  }
  SUBCASE("two-strip: upper and lower outer against the joined basis") {
    const double d1 = 1.0, d2 = 0.7;
    for (int n = 1; n <= 4; ++n)
      for (int m = 1; m <= 5; ++m) {
        auto up = TransverseMode::outer_dirichlet(n, d1, 0.0);
        auto dn = TransverseMode::outer_dirichlet(n, d2, -d2);
        auto inner = TransverseMode::inner_full_dirichlet(m, d1, d2);
        CHECK(overlap(up, inner) == doctest::Approx(quad_overlap(up, inner, 0.0, d1)).epsilon(1e-11));
        CHECK(overlap(dn, inner) == doctest::Approx(quad_overlap(dn, inner, -d2, 0.0)).epsilon(1e-11));
      }
  }
  SUBCASE("near-resonant pair takes the analytic limit without blowing up") {
    // equal frequencies: outer sin(n pi y) vs joined sin(m pi (y+1)/2) at m = 2n
    auto outer = TransverseMode::outer_dirichlet(1, 1.0);
    auto inner = TransverseMode::inner_full_dirichlet(2, 1.0, 1.0);
    double got = overlap(outer, inner);
    CHECK(std::isfinite(got));
    CHECK(got == doctest::Approx(quad_overlap(outer, inner, 0.0, 1.0)).epsilon(1e-11));
  }
}

TEST_CASE("fundamental-pair overlap equals 8/(3 pi)") {
  // <sqrt(2) sin(pi y), sqrt(2) cos(pi y/2)> on [0,1] = 8/(3 pi); the window
  // coupling constant every bound in the package leans on.
  auto chi = TransverseMode::outer_dirichlet(1, 1.0);
  auto phi = TransverseMode::inner_neumann_dirichlet(1, 1.0);
  CHECK(overlap(chi, phi) == doctest::Approx(8.0 / (3.0 * pi)).epsilon(1e-12));
  CHECK(std::abs(overlap(chi, phi) - 8.0 / (3.0 * pi)) < 1e-12);
}

TEST_CASE("partial norms on subintervals") {
  auto chi = TransverseMode::outer_dirichlet(1, 1.0);
  // full interval: normalized
  CHECK(mode_norm_on_subinterval(chi, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // closed form for [0, t]: t - sin(2 pi t)/(2 pi)
  for (double t : {0.05, 0.2, 0.5, 0.9}) {
    const double want = t - std::sin(2 * pi * t) / (2 * pi);
    CHECK(mode_norm_on_subinterval(chi, 0.0, t) == doctest::Approx(want).epsilon(1e-13));
  }
  CHECK_THROWS_AS((void)mode_norm_on_subinterval(chi, -0.1, 0.5), ValidationError);
  CHECK_THROWS_AS((void)mode_norm_on_subinterval(chi, 0.5, 0.2), ValidationError);
  CHECK_THROWS_AS((void)mode_norm_on_subinterval(chi, 0.0, 1.2), ValidationError);
}

TEST_CASE("index and width validation") {
  CHECK_THROWS_AS(TransverseMode::outer_dirichlet(0, 1.0), ValidationError);
  CHECK_THROWS_AS(TransverseMode::outer_dirichlet(1, 0.0), ValidationError);
  CHECK_THROWS_AS(TransverseMode::inner_neumann_dirichlet(-2, 1.0), ValidationError);
  CHECK_THROWS_AS(TransverseMode::inner_full_dirichlet(1, 1.0, -0.1), ValidationError);
}
