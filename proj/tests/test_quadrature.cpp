#include <doctest.h>

#include <cmath>
#include <numbers>

#include "winguide/errors.hpp"
#include "winguide/quadrature.hpp"

using namespace winguide;
namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("polynomials are integrated to round-off") {
  CHECK(integrate([](double x) { return 1.0; }, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return x * x * x; }, -1.0, 2.0) ==
        doctest::Approx(15.0 / 4.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return 5 * x * x * x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("oscillatory and exponential integrands") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, pi) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 30.0) ==
        doctest::Approx(1.0 - std::exp(-30.0)).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(40 * x) * std::sin(40 * x); }, 0.0, pi) ==
        doctest::Approx(pi / 2).epsilon(1e-11));
}

TEST_CASE("near-zero integrals honor the absolute floor") {
  // odd function: true value 0; must not spin forever chasing relative accuracy
  double v = integrate([](double x) { return x; }, -1.0, 1.0, 1e-12, 1e-14);
  CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("reversed and degenerate intervals are rejected") {
  CHECK_THROWS_AS((void)integrate([](double x) { return x; }, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS((void)integrate([](double x) { return x; }, 2.0, 1.0), ValidationError);
}
