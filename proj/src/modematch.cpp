#include "winguide/modematch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "winguide/errors.hpp"
#include "winguide/transverse.hpp"

namespace winguide {

namespace {

constexpr double kPi = std::numbers::pi;

// t_m(E): logarithmic x-derivative at x = a of the even inner profile with
// transverse rate r = (freq_m)^2.  Evanescent (r > E): nu tanh(nu a) with
// nu = sqrt(r - E); propagating: -k tan(k a).  Near a tan pole the value is
// regularized by nudging k a off the pole; the search bracket keeps E low
// enough that poles cannot occur for the window widths of interest.
double inner_t(double rate, double E, double a, bool* prop) {
  const double diff = rate - E;
  if (diff >= 0.0) {
    if (prop) *prop = false;
    const double nu = std::sqrt(diff);
    return nu * std::tanh(nu * a);
  }
  if (prop) *prop = true;
  const double k = std::sqrt(-diff);
  double ka = k * a;
  const double half_periods = std::round(ka / kPi - 0.5);
  const double pole = (half_periods + 0.5) * kPi;
  if (std::abs(ka - pole) < 1e-12) ka = pole + 1e-13;
  return -k * std::tan(ka);
}

}  // namespace

SecularSystem assemble_secular(const Geometry& g, double E, int n_inner, int n_outer) {
  if (n_inner < 1 || n_outer < 1) throw ValidationError("mode counts must be positive");
  if (!(E > 0.0)) throw ValidationError("energy must be positive");

  SecularSystem sys;
  sys.energy = E;
  sys.n_inner = n_inner;
  sys.n_outer = n_outer;

  const double a = g.a();

  // Inner basis over the full window cross-section.
  std::vector<TransverseMode> inner;
  inner.reserve(static_cast<size_t>(n_inner));
  for (int m = 1; m <= n_inner; ++m) {
    if (g.half_strip()) {
      inner.push_back(TransverseMode::inner_neumann_dirichlet(m, g.d1()));
    } else {
      inner.push_back(TransverseMode::inner_full_dirichlet(m, g.d1(), g.d2()));
    }
  }
  sys.inner_rates.resize(static_cast<size_t>(n_inner));
  sys.propagating.resize(static_cast<size_t>(n_inner));

  std::vector<double> tvals(static_cast<size_t>(n_inner));
  for (int m = 0; m < n_inner; ++m) {
    bool prop = false;
    const double r = inner[static_cast<size_t>(m)].rate();
    tvals[static_cast<size_t>(m)] = inner_t(r, E, a, &prop);
    const double diff = r - E;
    sys.inner_rates[static_cast<size_t>(m)] = std::sqrt(std::abs(diff));
    sys.propagating[static_cast<size_t>(m)] = prop;
  }

  // Outer bases per strip.  For two strips the outer index is stacked, with
  // counts split so both strips reach comparable transverse frequencies.
  struct OuterStrip {
    double width;
    double lo;
    int count;
  };
  std::vector<OuterStrip> strips;
  if (g.half_strip()) {
    strips.push_back({g.d1(), 0.0, n_outer});
  } else {
    const double D = g.D();
    int n1 = static_cast<int>(std::round(n_outer * g.d1() / D));
    n1 = std::clamp(n1, 1, n_outer - 1);
    strips.push_back({g.d1(), 0.0, n1});
    strips.push_back({g.d2(), -g.d2(), n_outer - n1});
  }

  sys.outer_rates.resize(static_cast<size_t>(n_outer));
  sys.matrix.resize(n_outer, n_inner);

  int row = 0;
  for (const auto& s : strips) {
    for (int n = 1; n <= s.count; ++n, ++row) {
      const auto chi = TransverseMode::outer_dirichlet(n, s.width, s.lo);
      const double diff = chi.rate() - E;
      if (diff <= 0.0)
        throw ValidationError("energy is above the outer channel threshold");
      const double kappa = std::sqrt(diff);
      sys.outer_rates[static_cast<size_t>(row)] = kappa;
      for (int m = 0; m < n_inner; ++m) {
        const double o = overlap(chi, inner[static_cast<size_t>(m)]);
        sys.matrix(row, m) = o * (tvals[static_cast<size_t>(m)] + kappa);
      }
    }
  }
  return sys;
}

namespace {

// sigma_min and the corresponding right singular vector.  Square systems use
// one LU of A and power iteration on (A^T A)^{-1} = A^{-1} A^{-T} (two
// triangular-solve pairs per step, no normal matrix); rectangular ones fall
// back to LU of A^T A.  A degenerate factorization falls through to SVD.
struct SigmaPair {
  double sigma = 0.0;
  Eigen::VectorXd vec;
};

SigmaPair sigma_min_with_vector(const Eigen::MatrixXd& A) {
  SigmaPair out;
  double scale = 0.0;
  for (int i = 0; i < A.rows(); ++i) scale = std::max(scale, A.row(i).norm());
  out.vec = Eigen::VectorXd::Zero(A.cols());
  if (!(scale > 0.0) || !std::isfinite(scale)) return out;

  const int n = static_cast<int>(A.cols());
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  bool ok = true;
  double lambda = 0.0;  // converges to 1/sigma_min^2
  if (A.rows() == A.cols()) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    for (int it = 0; it < 30; ++it) {
      Eigen::VectorXd z = lu.transpose().solve(v);
      Eigen::VectorXd w = lu.solve(z);
      const double wn = w.norm();
      if (!std::isfinite(wn)) {
        ok = false;
        break;
      }
      if (wn == 0.0) {
        out.vec = v;
        return out;  // exact kernel hit
      }
      const double next = v.dot(w);
      v = w / wn;
      if (std::abs(next - lambda) <= 1e-12 * std::abs(next)) {
        lambda = next;
        break;
      }
      lambda = next;
    }
  } else {
    const Eigen::MatrixXd AtA = A.transpose() * A;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(AtA);
    for (int it = 0; it < 30; ++it) {
      Eigen::VectorXd w = lu.solve(v);
      const double wn = w.norm();
      if (!std::isfinite(wn)) {
        ok = false;
        break;
      }
      if (wn == 0.0) {
        out.vec = v;
        return out;
      }
      const double next = v.dot(w);
      v = w / wn;
      if (std::abs(next - lambda) <= 1e-12 * std::abs(next)) {
        lambda = next;
        break;
      }
      lambda = next;
    }
  }
  if (ok && std::isfinite(lambda) && lambda > 0.0) {
    out.sigma = 1.0 / std::sqrt(lambda) / scale;
    out.vec = v;
    return out;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  const double smin = svd.singularValues().tail(1)(0);
  out.vec = svd.matrixV().col(A.cols() - 1);
  if (!std::isfinite(smin)) return out;  // treat a blown-up solve as a kernel
  out.sigma = smin / scale;
  return out;
}

}  // namespace

double smallest_singular_value(const SecularSystem& sys) {
  return sigma_min_with_vector(sys.matrix).sigma;
}

namespace {

double sigma_at_tau(const Geometry& g, double thr, double tau, int n_modes) {
  const double E = thr - std::exp(tau);
  const auto sys = assemble_secular(g, E, n_modes, n_modes);
  return smallest_singular_value(sys);
}

// One resolved minimum of sigma_min over tau = log(threshold - E).
struct TauMin {
  bool found = false;    // an interior minimum was localized
  bool v_shaped = false; // flanks have opposite slopes (root-like dip)
  double tau = 0.0;
  double sigma = 0.0;
};

// Golden section down to a coarse bracket, then a flank fit: near a root
// sigma_min(tau) is a V whose bottom sits in a numerical noise well, so the
// vertex is recovered by intersecting least-squares lines fitted to the two
// flanks (flank values carry only relative round-off, the well does not).
TauMin refine_minimum(const Geometry& g, double thr, int n_modes, double lo, double hi) {
  constexpr double kGr = 0.6180339887498949;  // (sqrt(5)-1)/2
  double x1 = hi - kGr * (hi - lo);
  double x2 = lo + kGr * (hi - lo);
  double f1 = sigma_at_tau(g, thr, x1, n_modes);
  double f2 = sigma_at_tau(g, thr, x2, n_modes);
  int guard = 0;
  while (hi - lo > 3e-5 && ++guard < 300) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGr * (hi - lo);
      f1 = sigma_at_tau(g, thr, x1, n_modes);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGr * (hi - lo);
      f2 = sigma_at_tau(g, thr, x2, n_modes);
    }
  }

  TauMin out;
  out.found = true;
  const double tc = 0.5 * (lo + hi);
  constexpr double kH = 1e-4;  // flank sample spacing, well clear of the noise well
  auto fit_line = [&](double off_sign, double* slope, double* icept) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 1; k <= 3; ++k) {
      const double x = tc + off_sign * k * kH;
      const double y = sigma_at_tau(g, thr, x, n_modes);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double det = 3.0 * sxx - sx * sx;
    *slope = (3.0 * sxy - sx * sy) / det;
    *icept = (sy - *slope * sx) / 3.0;
  };
  double bl, al, br, ar;
  fit_line(-1.0, &bl, &al);
  fit_line(+1.0, &br, &ar);
  out.tau = tc;
  if (bl < 0.0 && br > 0.0) {
    out.v_shaped = true;
    const double vertex = (ar - al) / (bl - br);
    if (std::abs(vertex - tc) <= 4.0 * kH) out.tau = vertex;
  }
  out.sigma = sigma_at_tau(g, thr, out.tau, n_modes);
  return out;
}

// Full-bracket scan for the first truncation level.
TauMin scan_minimum(const Geometry& g, int n_modes) {
  const double thr = threshold(g);
  const auto win = eigen_bracket(g);
  // gap range: from (thr - bottom) down to the precision floor.
  const double tau_hi = std::log(thr - win.e_min);
  const double tau_lo = std::log(thr * 1e-13);

  constexpr int kScan = 240;
  std::vector<double> taus(kScan + 1), sigmas(kScan + 1);
  for (int i = 0; i <= kScan; ++i) {
    taus[static_cast<size_t>(i)] = tau_hi + (tau_lo - tau_hi) * double(i) / double(kScan);
    sigmas[static_cast<size_t>(i)] = sigma_at_tau(g, thr, taus[static_cast<size_t>(i)], n_modes);
  }

  // Deepest interior local minimum of the scan.
  int best = -1;
  for (int i = 1; i < kScan; ++i) {
    const double s = sigmas[static_cast<size_t>(i)];
    if (s <= sigmas[static_cast<size_t>(i - 1)] && s <= sigmas[static_cast<size_t>(i + 1)]) {
      if (best < 0 || s < sigmas[static_cast<size_t>(best)]) best = i;
    }
  }
  if (best < 0) return {};
  return refine_minimum(g, thr, n_modes, taus[static_cast<size_t>(best + 1)],
                        taus[static_cast<size_t>(best - 1)]);
}

// Warm-started refinement around the previous level's root; widens and
// retries when the minimum pins to a window edge (tracking lag).
TauMin track_minimum(const Geometry& g, int n_modes, double tau_prev, double window) {
  const double thr = threshold(g);
  const auto win = eigen_bracket(g);
  const double tau_top = std::log(thr - win.e_min);
  const double tau_floor = std::log(thr * 1e-13);
  double w = window;
  for (int attempt = 0; attempt < 7; ++attempt) {
    const double lo = std::max(tau_prev - w, tau_floor);
    const double hi = std::min(tau_prev + w, tau_top);
    TauMin tm = refine_minimum(g, thr, n_modes, lo, hi);
    const double margin = 0.02 * (hi - lo);
    const bool at_edge = tm.tau <= lo + margin || tm.tau >= hi - margin;
    if (!at_edge || (lo == tau_floor && hi == tau_top)) return tm;
    w *= 2.5;
  }
  return {};
}

}  // namespace

EigenResult solve_ground_state(const Geometry& g, double tol, int n_max,
                               std::vector<LevelTrace>* trace) {
  if (!(tol > 1e-14) || !(tol < 1e-4))
    throw ValidationError("tolerance must lie in (1e-14, 1e-4)");
  if (n_max < 8) throw ValidationError("mode cap must be at least 8");

  const double thr = threshold(g);
  const double floor_gap = 1e-13 * thr;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  EigenResult res;
  double raw_prev = nan;   // secular root at N/2
  double rich_prev = nan;  // first-step extrapolant at N/2
  double level_prev = nan; // reported level estimate at N/2
  double dest_prev = nan;  // previous ladder move, for the decay ratio
  double prev_tau = 0.0, dtau = 0.1;  // seed window covers a typical first move
  bool have_prev = false;

  // Base count for the doubling ladder.  For two strips pick it so the
  // balanced per-strip split is as close to exact as possible: doubling then
  // scales both strip counts together and the truncation error stays a smooth
  // function of 1/N, instead of wobbling with the split rounding (which costs
  // the extrapolation an order).
  int n0 = 8;
  if (!g.half_strip()) {
    const double q = g.d1() / g.D();
    double best = 1.0;
    for (int c = 8; c < 24; ++c) {
      const double f = std::abs(c * q - std::round(c * q));
      if (f < best - 1e-12) {
        best = f;
        n0 = c;
      }
    }
  }

  for (int n = n0; n <= n_max; n *= 2) {
    TauMin tm;
    if (!have_prev) {
      tm = scan_minimum(g, n);
    } else {
      const double window = std::clamp(4.0 * std::abs(dtau) + 0.02, 0.05, 1.0);
      tm = track_minimum(g, n, prev_tau, window);
    }
    if (!tm.found || (!tm.v_shaped && tm.sigma > 1e-8)) {
      res.status = SolveStatus::NoEigenvalueResolved;
      res.n_modes = n;
      return res;
    }
    const double gap_raw = std::exp(tm.tau);
    const double raw = thr - gap_raw;
    if (have_prev) dtau = tm.tau - prev_tau;
    prev_tau = tm.tau;

    if (gap_raw < floor_gap * 1.0000001) {
      // The root itself collided with the resolvable floor below threshold.
      res.status = SolveStatus::PrecisionFloor;
      res.root_energy = raw;
      res.energy = raw;
      res.gap = gap_raw;
      res.residual = tm.sigma;
      res.n_modes = n;
      return res;
    }

    // Roots converge like 1/N (window-edge singularity), so one Richardson
    // step leaves a clean 1/N^2 remainder and a second leaves 1/N^3.  The
    // ladder itself is built from raw roots only; the reported level estimate
    // takes the deepest rung that still lies below threshold, since coarse
    // levels (error ratio not yet 2) can overshoot into the continuum.
    const double e1 = std::isfinite(raw_prev) ? 2.0 * raw - raw_prev : nan;
    const double e2 = (std::isfinite(e1) && std::isfinite(rich_prev))
                          ? e1 + (e1 - rich_prev) / 3.0
                          : nan;
    double level = raw;
    if (std::isfinite(e1) && thr - e1 >= floor_gap) level = e1;
    if (std::isfinite(e2) && thr - e2 >= floor_gap) level = e2;
    if (trace) trace->push_back({n, raw, level, tm.sigma});

    res.root_energy = raw;
    res.energy = level;
    res.gap = thr - level;
    res.residual = tm.sigma;
    res.n_modes = n;

    if (std::isfinite(level_prev)) {
      // Remaining error from the measured decay of successive ladder moves:
      // if moves shrink by the ratio r per level the tail sums to dest/(r-1).
      // The ratio is clamped so an erratic or stalling sequence stays
      // conservative instead of faking convergence.
      const double dest = std::abs(level - level_prev);
      double err = dest;
      if (dest == 0.0) {
        err = 0.0;
      } else if (std::isfinite(dest_prev)) {
        // Cap at 8, the design decay of the deepest rung: a sign-flip in the
        // ladder can make one move accidentally tiny, and an uncapped ratio
        // would then understate the tail.
        const double r = std::clamp(dest_prev / dest, 1.5, 8.0);
        err = dest / (r - 1.0);
      }
      res.truncation_error = err;
      if (std::isfinite(dest_prev) && err < tol * res.gap) {
        if (tm.sigma > 1e-8) {
          res.status = SolveStatus::NoEigenvalueResolved;
          return res;
        }
        res.status = SolveStatus::Converged;
        const auto sys = assemble_secular(g, raw, n, n);
        res.kernel_vector = sigma_min_with_vector(sys.matrix).vec;
        return res;
      }
      dest_prev = dest;
    }
    raw_prev = raw;
    rich_prev = e1;
    level_prev = level;
    have_prev = true;
  }
  throw ConvergenceError("no convergence: mode cap " + std::to_string(n_max) +
                         " reached before truncation stability at tolerance " +
                         std::to_string(tol));
}

}  // namespace winguide
