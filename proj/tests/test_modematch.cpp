#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "winguide/errors.hpp"
#include "winguide/geometry.hpp"
#include "winguide/modematch.hpp"
#include "winguide/transverse.hpp"
#include "winguide/varbound.hpp"

using namespace winguide;

namespace {

SecularSystem wrap(const Eigen::MatrixXd& m) {
  SecularSystem sys;
  sys.matrix = m;
  sys.n_outer = static_cast<int>(m.rows());
  sys.n_inner = static_cast<int>(m.cols());
  return sys;
}

}  // namespace

TEST_CASE("smallest singular value: identity and exact rank deficiency") {
  CHECK(smallest_singular_value(wrap(Eigen::MatrixXd::Identity(6, 6))) == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd dup = Eigen::MatrixXd::Random(7, 7);
  dup.col(3) = dup.col(5);  // duplicated column: exact kernel
  CHECK(smallest_singular_value(wrap(dup)) <= 1e-12);

  // Cross-check a generic matrix against a full SVD.
  Eigen::MatrixXd r(5, 5);
  int k = 1;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) r(i, j) = std::sin(0.7 * k++) + ((i == j) ? 2.0 : 0.0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
  double scale = 0.0;
  for (int i = 0; i < 5; ++i) scale = std::max(scale, r.row(i).norm());
  CHECK(smallest_singular_value(wrap(r)) ==
        doctest::Approx(svd.singularValues().minCoeff() / scale).epsilon(1e-10));
}

TEST_CASE("secular matrix: all-evanescent sign structure") {
  const Geometry g(1.0, 0.0, 0.3);
  // Below the lowest inner rate everything is evanescent: t_m > 0, kappa_n > 0,
  // so A and the overlap matrix carry identical signs entry by entry.
  const auto sys = assemble_secular(g, 2.0, 6, 6);
  for (const bool p : sys.propagating) CHECK_FALSE(p);
  for (int n = 0; n < 6; ++n)
    for (int m = 0; m < 6; ++m) {
      const auto chi = TransverseMode::outer_dirichlet(n + 1, g.d1());
      const auto phi = TransverseMode::inner_neumann_dirichlet(m + 1, g.d1());
      const double o = overlap(chi, phi);
      if (std::abs(o) > 1e-14) {
        CHECK(sys.matrix(n, m) * o > 0.0);
        CHECK(std::abs(sys.matrix(n, m)) > std::abs(o));  // t_m + kappa_n > 1 here
      }
    }
}

TEST_CASE("secular matrix rejects energies at or above the outer threshold") {
  const Geometry g(1.0, 1.0, 0.3);
  CHECK_THROWS_AS((void)assemble_secular(g, threshold(g), 8, 8), ValidationError);
  CHECK_THROWS_AS((void)assemble_secular(g, threshold(g) + 1.0, 8, 8), ValidationError);
  CHECK_THROWS_AS((void)assemble_secular(g, 8.5, 0, 8), ValidationError);
}

TEST_CASE("narrow-window limit: matching matrix approaches O * diag(t + kappa) with trivial kernel") {
  // As a -> 0 the window couples nothing: t_m -> 0 keeps rows diagonal-dominant
  // via the overlap structure and sigma_min stays far from zero.
  const Geometry g(1.0, 0.0, 1e-4);
  const auto sys = assemble_secular(g, 5.0, 8, 8);
  const double sigma = smallest_singular_value(sys);
  CHECK(sigma > 1e-3);

  // The same system with the window terms t_m removed entirely (pure
  // O * diag(kappa)): removing the O(a) window admittance moves sigma_min only
  // at O(a) relative size.
  Eigen::MatrixXd bare = sys.matrix;
  for (int n = 0; n < 8; ++n)
    for (int m = 0; m < 8; ++m)
      bare(n, m) = overlap(TransverseMode::outer_dirichlet(n + 1, g.d1()),
                           TransverseMode::inner_neumann_dirichlet(m + 1, g.d1())) *
                   sys.outer_rates[static_cast<size_t>(n)];
  const double sigma_bare = smallest_singular_value(wrap(bare));
  CHECK(sigma == doctest::Approx(sigma_bare).epsilon(1e-2));
}

TEST_CASE("sigma_min regression fixture at a fixed off-root energy") {
  // Frozen reference: d = 1 half-strip, a = 0.3, E = 8.5, N = 8.
  const auto sys = assemble_secular(Geometry(1.0, 0.0, 0.3), 8.5, 8, 8);
  CHECK(smallest_singular_value(sys) == doctest::Approx(0.00070037104756786141).epsilon(1e-10));
}

TEST_CASE("ground state solve: convergence, bracket, and kernel invariants") {
  const Geometry g(1.0, 0.0, 0.3);
  std::vector<LevelTrace> trace;
  const EigenResult r = solve_ground_state(g, 1e-6, 1024, &trace);

  REQUIRE(r.status == SolveStatus::Converged);
  const auto br = eigen_bracket(g);
  CHECK(r.energy > br.e_min);
  CHECK(r.energy < br.e_max);
  CHECK(r.root_energy > br.e_min);
  CHECK(r.root_energy < br.e_max);
  CHECK(r.gap == doctest::Approx(threshold(g) - r.energy).epsilon(1e-14));
  CHECK(r.gap > 0.0);
  CHECK(r.truncation_error < 1e-6 * r.gap);

  // Residual: scaled sigma_min at the located root stays deep below the
  // dimensionless root criterion.
  CHECK(r.residual >= 0.0);
  CHECK(r.residual < 1e-10);

  // Kernel vector solves the matching system at the root energy.  The bound
  // tracks the root-polish resolution: the located root sits within ~1e-8 of
  // the singular-value minimum, and the residual grows linearly off it.
  const auto sys = assemble_secular(g, r.root_energy, r.n_modes, r.n_modes);
  REQUIRE(r.kernel_vector.size() == sys.matrix.cols());
  const double rel = (sys.matrix * r.kernel_vector).norm() / r.kernel_vector.norm();
  CHECK(rel < 1e-7);

  // Truncation error shrinks monotonically along the doubling ladder.
  REQUIRE(trace.size() >= 3);
  for (size_t i = 2; i < trace.size(); ++i) {
    const double prev = std::abs(trace[i - 1].energy - trace[i - 2].energy);
    const double cur = std::abs(trace[i].energy - trace[i - 1].energy);
    CHECK(cur < prev);
  }
}

TEST_CASE("tolerance domain is open") {
  const Geometry g(1.0, 0.0, 0.3);
  CHECK_THROWS_AS((void)solve_ground_state(g, 1e-4, 64), ValidationError);
  CHECK_THROWS_AS((void)solve_ground_state(g, 1e-14, 64), ValidationError);
  CHECK_THROWS_AS((void)solve_ground_state(g, 0.5, 64), ValidationError);
  CHECK_THROWS_AS((void)solve_ground_state(g, -1e-6, 64), ValidationError);
  CHECK_THROWS_AS((void)solve_ground_state(g, 1e-6, 4), ValidationError);
}

TEST_CASE("mode cap reached without truncation stability is an error") {
  CHECK_THROWS_AS((void)solve_ground_state(Geometry(1.0, 0.0, 0.3), 2e-14, 64), ConvergenceError);
}

TEST_CASE("two-strip solve equals the folded half-strip solve") {
  // Equal widths fold onto the half cross-section; the joined system at one
  // doubling deeper carries the identical even sector.
  for (const double a : {0.1, 0.3}) {
    const EigenResult two = solve_ground_state(Geometry(1.0, 1.0, a), 1e-6, 1024);
    const EigenResult half = solve_ground_state(Geometry(1.0, 0.0, a), 1e-6, 1024);
    REQUIRE(two.status == SolveStatus::Converged);
    REQUIRE(half.status == SolveStatus::Converged);
    CHECK(two.energy == doctest::Approx(half.energy).epsilon(1e-8));
  }
}

TEST_CASE("window-edge matching residual of the reconstructed trace") {
  // At the matching plane x = a the inner trace determines the outer trace by
  // projection.  The trace kinks at the slit tip (square-root corner behavior
  // of the eigenfunction), so the projected tail can only decay first order in
  // the mode count: the L2 mismatch should halve per doubling.
  const Geometry g(1.0, 0.0, 0.3);
  std::vector<LevelTrace> trace;
  (void)solve_ground_state(g, 1e-6, 1024, &trace);

  auto rel_mismatch = [&](int n) {
    double root = 0.0;
    for (const auto& lv : trace)
      if (lv.n == n) root = lv.root_energy;
    REQUIRE(root > 0.0);
    const auto sys = assemble_secular(g, root, n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.matrix, Eigen::ComputeThinV);
    const Eigen::VectorXd b = svd.matrixV().col(n - 1);

    std::vector<TransverseMode> inner, outer;
    for (int m = 1; m <= n; ++m) {
      inner.push_back(TransverseMode::inner_neumann_dirichlet(m, g.d1()));
      outer.push_back(TransverseMode::outer_dirichlet(m, g.d1()));
    }
    Eigen::VectorXd c(n);  // outer coefficients: projection of the inner trace
    for (int k = 0; k < n; ++k) {
      c(k) = 0.0;
      for (int m = 0; m < n; ++m)
        c(k) += b(m) * overlap(outer[static_cast<size_t>(k)], inner[static_cast<size_t>(m)]);
    }
    const int quad = 4096;
    const double w = g.d1();
    double mismatch2 = 0.0, norm2 = 0.0;
    for (int i = 0; i < quad; ++i) {
      const double y = (i + 0.5) * w / quad;
      double in = 0.0, out = 0.0;
      for (int m = 0; m < n; ++m) {
        in += b(m) * inner[static_cast<size_t>(m)].value(y);
        out += c(m) * outer[static_cast<size_t>(m)].value(y);
      }
      mismatch2 += (in - out) * (in - out);
      norm2 += in * in;
    }
    return std::sqrt(mismatch2 / norm2);
  };

  const double m16 = rel_mismatch(16);
  const double m32 = rel_mismatch(32);
  const double m64 = rel_mismatch(64);
  CHECK(m64 < 2e-2);
  CHECK(m16 / m32 == doctest::Approx(2.0).epsilon(0.15));
  CHECK(m32 / m64 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("gap dominates the optimized trial quotient") {
  // The exact Rayleigh quotient of any trial function bounds the ground state
  // from above, so the resolved gap must weakly exceed |quotient|.
  for (const double a : {0.05, 0.1}) {
    const Geometry g(1.0, 0.0, a);
    const EigenResult r = solve_ground_state(g, 1e-6, 2048);
    REQUIRE(r.status == SolveStatus::Converged);
    const TrialBound tb = optimize_trial(g);
    CHECK(tb.value < 0.0);
    CHECK(r.gap >= -tb.value);
  }
}
