#include "winguide/lemma_oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "winguide/transverse.hpp"

namespace winguide {

namespace {

void validate_grid(const Grid1D& g) {
  if (g.n < 64) throw ValidationError("grid: need at least 64 intervals");
  if (!(g.t1 > g.t0)) throw ValidationError("grid: need t1 > t0");
}

// Average of the piecewise-constant coefficient over [x0, x1] (exact).
double cell_average(const PiecewiseConstCoeff& c, double x0, double x1) {
  if (c.values.empty()) return 0.0;
  double acc = 0.0;
  for (size_t k = 0; k < c.values.size(); ++k) {
    const double lo = std::max(x0, c.breaks[k]);
    const double hi = std::min(x1, c.breaks[k + 1]);
    if (hi > lo) acc += c.values[k] * (hi - lo);
  }
  return acc / (x1 - x0);
}

// Linear finite elements with lumped mass give a tridiagonal stiffness-plus-
// coefficient matrix K and a diagonal mass M.  Everything below works on that
// structure directly: factorizations, eigenvalue counts, and solves are all
// O(N), so the n-vs-2n verification grids stay cheap.
struct Assembled {
  std::vector<double> kdiag, koff;         // K, koff[i] couples nodes i, i+1
  std::vector<double> weights;             // lumped mass diagonal
  std::vector<std::vector<double>> rows;   // integral constraint rows
  std::vector<double> targets;
  bool pin_left = false, pin_right = false;
  double left_value = 0.0, right_value = 0.0;
  std::vector<double> t;
};

Assembled assemble(const QuadraticFormSpec& spec, const Grid1D& grid) {
  validate_grid(grid);
  if (!spec.mass.values.empty()) {
    if (spec.mass.breaks.size() != spec.mass.values.size() + 1)
      throw ValidationError("mass coefficient: breaks must have values.size()+1 entries");
    for (size_t k = 0; k + 1 < spec.mass.breaks.size(); ++k)
      if (!(spec.mass.breaks[k] < spec.mass.breaks[k + 1]))
        throw ValidationError("mass coefficient: breakpoints must increase");
  }

  const int n = grid.n;
  const double h = grid.h();
  const int N = n + 1;
  Assembled out;
  out.kdiag.assign(N, 0.0);
  out.koff.assign(N - 1, 0.0);
  out.weights.assign(N, 0.0);
  out.t.resize(N);
  for (int i = 0; i < N; ++i) out.t[i] = grid.t0 + i * h;

  for (int i = 0; i < n; ++i) {  // stiffness, cell by cell
    out.kdiag[i] += 1.0 / h;
    out.kdiag[i + 1] += 1.0 / h;
    out.koff[i] -= 1.0 / h;
  }
  for (int i = 0; i < N; ++i) {
    const double lo = std::max(grid.t0, out.t[i] - 0.5 * h);
    const double hi = std::min(grid.t1, out.t[i] + 0.5 * h);
    const double w = hi - lo;
    out.weights[i] = w;
    out.kdiag[i] += w * cell_average(spec.mass, lo, hi);
  }

  out.pin_left = spec.left.kind == BoundarySpec::Kind::Dirichlet;
  out.pin_right = spec.right.kind == BoundarySpec::Kind::Dirichlet;
  out.left_value = spec.left.value;
  out.right_value = spec.right.value;
  for (const auto& lc : spec.constraints) {
    std::vector<double> r(N);
    for (int i = 0; i < N; ++i) r[i] = out.weights[i] * lc.weight(out.t[i]);
    out.rows.push_back(std::move(r));
    out.targets.push_back(lc.target);
  }
  return out;
}

// Dirichlet nodes sit at the ends, so the free unknowns are one contiguous
// tridiagonal block; integral constraints are handled as a border on top of it.
struct FreeSystem {
  int i0 = 0, nf = 0;                      // first free node, free count
  std::vector<double> kd, ko, w;           // restricted K and mass
  std::vector<std::vector<double>> R;      // restricted constraint rows
  std::vector<double> g;                   // targets minus pinned contributions
  double pivmin = 0.0;                     // pivot floor for LDL^T counting
};

FreeSystem restrict_to_free(const Assembled& a) {
  const int N = static_cast<int>(a.kdiag.size());
  FreeSystem s;
  s.i0 = a.pin_left ? 1 : 0;
  const int i1 = a.pin_right ? N - 2 : N - 1;
  s.nf = i1 - s.i0 + 1;
  if (s.nf < 2) throw ValidationError("min_quadratic_form: no free unknowns");
  s.kd.assign(a.kdiag.begin() + s.i0, a.kdiag.begin() + i1 + 1);
  s.ko.assign(a.koff.begin() + s.i0, a.koff.begin() + i1);
  s.w.assign(a.weights.begin() + s.i0, a.weights.begin() + i1 + 1);
  for (size_t k = 0; k < a.rows.size(); ++k) {
    s.R.emplace_back(a.rows[k].begin() + s.i0, a.rows[k].begin() + i1 + 1);
    double t = a.targets[k];
    if (a.pin_left) t -= a.rows[k][0] * a.left_value;
    if (a.pin_right) t -= a.rows[k][N - 1] * a.right_value;
    s.g.push_back(t);
  }
  double bmax2 = 1.0;
  for (double b : s.ko) bmax2 = std::max(bmax2, b * b);
  s.pivmin = std::numeric_limits<double>::min() * bmax2;
  return s;
}

// LDL^T of K - lambda M on the free block.  Pivots floored away from zero so
// the negative-pivot count (Sturm count of eigenvalues below lambda) and the
// subsequent solves stay finite even when lambda grazes a Ritz value.
struct TriFactor {
  std::vector<double> d, l;
  int negatives = 0;

  TriFactor(const FreeSystem& s, double lambda) : d(s.nf), l(s.nf > 0 ? s.nf - 1 : 0) {
    for (int j = 0; j < s.nf; ++j) {
      double dj = s.kd[j] - lambda * s.w[j];
      if (j > 0) dj -= s.ko[j - 1] * l[j - 1];
      if (std::abs(dj) < s.pivmin) dj = dj < 0.0 ? -s.pivmin : s.pivmin;
      if (dj < 0.0) ++negatives;
      d[j] = dj;
      if (j + 1 < s.nf) l[j] = s.ko[j] / dj;
    }
  }

  std::vector<double> solve(const FreeSystem& s, const std::vector<double>& rhs) const {
    std::vector<double> x(rhs);
    for (int j = 1; j < s.nf; ++j) x[j] -= l[j - 1] * x[j - 1];
    for (int j = 0; j < s.nf; ++j) x[j] /= d[j];
    for (int j = s.nf - 2; j >= 0; --j) x[j] -= l[j] * x[j + 1];
    return x;
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Schur complement of the constraint border: M_s = R (K - lambda M)^{-1} R'.
Eigen::MatrixXd border_schur(const FreeSystem& s, const TriFactor& f,
                             std::vector<std::vector<double>>& Y) {
  const int m = static_cast<int>(s.R.size());
  Y.clear();
  Eigen::MatrixXd ms(m, m);
  for (int k = 0; k < m; ++k) Y.push_back(f.solve(s, s.R[k]));
  for (int k = 0; k < m; ++k)
    for (int j = 0; j <= k; ++j) ms(k, j) = ms(j, k) = dot(s.R[k], Y[j]);
  return ms;
}

// Number of constrained eigenvalues of (K, M) below lambda on {R x = 0}.
// Border the factorization with the constraint rows: the inertia of the
// bordered matrix is nu(K - lambda M) + nu(-M_s), and subtracting the m
// multiplier directions leaves the constrained count.
int constrained_count(const FreeSystem& s, double lambda) {
  const TriFactor f(s, lambda);
  int count = f.negatives;
  const int m = static_cast<int>(s.R.size());
  if (m > 0) {
    std::vector<std::vector<double>> Y;
    const Eigen::MatrixXd ms = border_schur(s, f, Y);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ms, Eigen::EigenvaluesOnly);
    for (int k = 0; k < m; ++k)
      if (es.eigenvalues()(k) > 0.0) ++count;  // nu(-M_s) = #pos(M_s)
    count -= m;
  }
  return count;
}

// Solve the bordered system (K - sigma M) x + R' mu = rhs, R x = g.
std::vector<double> bordered_solve(const FreeSystem& s, const TriFactor& f,
                                   const std::vector<double>& rhs, const std::vector<double>& g) {
  std::vector<double> u = f.solve(s, rhs);
  const int m = static_cast<int>(s.R.size());
  if (m == 0) return u;
  std::vector<std::vector<double>> Y;
  const Eigen::MatrixXd ms = border_schur(s, f, Y);
  Eigen::VectorXd t(m);
  for (int k = 0; k < m; ++k) t(k) = dot(s.R[k], u) - g[k];
  const Eigen::VectorXd mu = ms.fullPivLu().solve(t);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < s.nf; ++j) u[j] -= mu(k) * Y[k][j];
  return u;
}

FormMinimum minimize_on(const Assembled& a, const Grid1D& grid) {
  const int N = grid.n + 1;
  FormMinimum out;
  out.t = a.t;
  FreeSystem s = restrict_to_free(a);
  const int m = static_cast<int>(s.R.size());

  bool homogeneous = (!a.pin_left || a.left_value == 0.0) &&
                     (!a.pin_right || a.right_value == 0.0);
  for (double t : s.g) homogeneous = homogeneous && t == 0.0;

  std::vector<double> full(N, 0.0);
  if (a.pin_left) full[0] = a.left_value;
  if (a.pin_right) full[N - 1] = a.right_value;

  if (homogeneous) {
    // Rayleigh minimum of x'Kx / x'Mx on the constraint null space, by
    // bisection on the constrained eigenvalue count.
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int j = 0; j < s.nf; ++j) {
      const double spread = (j > 0 ? std::abs(s.ko[j - 1]) : 0.0) +
                            (j + 1 < s.nf ? std::abs(s.ko[j]) : 0.0);
      lo = std::min(lo, (s.kd[j] - spread) / s.w[j]);
      hi = std::max(hi, (s.kd[j] + spread) / s.w[j]);
    }
    const double pad = 1e-10 * (hi - lo) + 1e-30;
    lo -= pad;
    hi += pad;
    if (constrained_count(s, hi) < 1)
      throw ConvergenceError("min_quadratic_form: no eigenvalue inside the spectral bracket");
    for (int it = 0; it < 160; ++it) {
      const double mid = 0.5 * (lo + hi);
      (constrained_count(s, mid) >= 1 ? hi : lo) = mid;
      if (hi - lo <= 1e-13 * std::max(std::abs(lo), std::abs(hi)) + 1e-15) break;
    }
    out.value = 0.5 * (lo + hi);

    // Minimizer by inverse iteration on the bordered system, shifted just
    // below the converged eigenvalue.
    const double sigma = lo - 1e-9 * std::max(1.0, std::abs(lo));
    const TriFactor f(s, sigma);
    std::vector<double> x(s.nf), zeros(m, 0.0);
    for (int j = 0; j < s.nf; ++j) x[j] = std::sin(M_PI * (j + 1) / (s.nf + 1.0));
    for (int it = 0; it < 3; ++it) {
      std::vector<double> rhs(s.nf);
      for (int j = 0; j < s.nf; ++j) rhs[j] = s.w[j] * x[j];
      x = bordered_solve(s, f, rhs, zeros);
      double nrm2 = 0.0;
      for (int j = 0; j < s.nf; ++j) nrm2 += s.w[j] * x[j] * x[j];
      const double nrm = std::sqrt(nrm2);
      if (nrm > 0.0)
        for (double& v : x) v /= nrm;
    }
    for (int j = 0; j < s.nf; ++j) full[s.i0 + j] = x[j];
  } else {
    // Affine constraints: direct bordered KKT solve at lambda = 0.  The
    // inertia of that factorization certifies the reduced Hessian.
    if (constrained_count(s, 0.0) != 0)
      throw CheckError("min_quadratic_form: reduced Hessian is not positive semidefinite");
    const TriFactor f(s, 0.0);
    std::vector<double> rhs(s.nf, 0.0);
    if (a.pin_left) rhs[0] -= a.koff[0] * a.left_value;
    if (a.pin_right) rhs[s.nf - 1] -= a.koff[N - 2] * a.right_value;
    std::vector<double> x = bordered_solve(s, f, rhs, s.g);

    // One step of iterative refinement tightens the constraint residual.  The
    // residual below omits the multiplier term R' mu, but a bordered solve
    // absorbs that component exactly into the multiplier correction, so the
    // primal correction responds only to the true defect.
    std::vector<double> res(s.nf), gres(s.g);
    for (int j = 0; j < s.nf; ++j) {
      double kx = s.kd[j] * x[j];
      if (j > 0) kx += s.ko[j - 1] * x[j - 1];
      if (j + 1 < s.nf) kx += s.ko[j] * x[j + 1];
      res[j] = rhs[j] - kx;
    }
    for (int k = 0; k < m; ++k) gres[k] = s.g[k] - dot(s.R[k], x);
    const std::vector<double> corr = bordered_solve(s, f, res, gres);
    for (int j = 0; j < s.nf; ++j) x[j] += corr[j];

    for (int j = 0; j < s.nf; ++j) full[s.i0 + j] = x[j];
    double q = 0.0;
    for (int i = 0; i < N; ++i) q += a.kdiag[i] * full[i] * full[i];
    for (int i = 0; i + 1 < N; ++i) q += 2.0 * a.koff[i] * full[i] * full[i + 1];
    out.value = q;
  }

  out.phi = std::move(full);
  return out;
}

}  // namespace

FormMinimum min_quadratic_form_on_grid(const QuadraticFormSpec& spec, const Grid1D& grid) {
  return minimize_on(assemble(spec, grid), grid);
}

FormMinimum min_quadratic_form(const QuadraticFormSpec& spec, const Grid1D& grid) {
  const FormMinimum coarse = min_quadratic_form_on_grid(spec, grid);
  const FormMinimum fine = min_quadratic_form_on_grid(spec, Grid1D{2 * grid.n, grid.t0, grid.t1});
  const double scale = std::max(std::abs(fine.value),
                                std::pow(M_PI / (grid.t1 - grid.t0), 2) * 1e-7);
  if (std::abs(fine.value - coarse.value) > 0.01 * scale)
    throw ConvergenceError("min_quadratic_form: values at n and 2n differ by more than 1%");
  return fine;
}

FormMinimum lemma1_minimum(double m, int n) {
  if (!(m > 0)) throw ValidationError("lemma1: m must be positive");
  const double T = 12.0 / m;
  QuadraticFormSpec spec;
  spec.mass = PiecewiseConstCoeff{{0.0, T}, {m * m}};
  spec.left = {BoundarySpec::Kind::Dirichlet, 1.0};
  spec.right = {BoundarySpec::Kind::Free, 0.0};
  return min_quadratic_form(spec, Grid1D{n, 0.0, T});
}

FormMinimum lemma2_minimum(double b, int n) {
  if (!(b > 0)) throw ValidationError("lemma2: b must be positive");
  QuadraticFormSpec spec;
  spec.left = {BoundarySpec::Kind::Dirichlet, 0.0};
  spec.right = {BoundarySpec::Kind::Dirichlet, 0.0};
  return min_quadratic_form(spec, Grid1D{n, -b, b});
}

double lemma3_route_epsilon1(double gamma_cap) {
  if (!(gamma_cap > 0.0) || !(gamma_cap < 1.0))
    throw ValidationError("lemma3 route: gamma cap must lie in (0,1)");
  const double xi1 = 8.0 / (3.0 * M_PI);
  const double s = std::sqrt(1.0 - xi1 * xi1);
  // Largest overlap threshold t for which |(xi, Phi)| <= t still forces
  // |gamma_1| <= gamma_cap:  xi1*g - s*sqrt(1-g^2) = t at g = gamma_cap.
  const double t = xi1 * gamma_cap - s * std::sqrt(1.0 - gamma_cap * gamma_cap);
  if (!(t > 0.0))
    throw ValidationError("lemma3 route: gamma cap too small, no positive threshold");
  return t;
}

Lemma3Result lemma3_gap(double d, const Grid1D& grid) {
  if (!(d > 0)) throw ValidationError("lemma3: d must be positive");
  const TransverseMode chi1 = TransverseMode::outer_dirichlet(1, d);
  QuadraticFormSpec spec;
  spec.left = {BoundarySpec::Kind::Free, 0.0};
  spec.right = {BoundarySpec::Kind::Dirichlet, 0.0};
  spec.constraints.push_back({[chi1](double t) { return chi1.value(t); }, 0.0});
  Grid1D g{grid.n, 0.0, d};
  const FormMinimum fm = min_quadratic_form(spec, g);

  Lemma3Result out;
  out.rayleigh_min = fm.value;
  const double thr = (M_PI / d) * (M_PI / d);
  out.epsilon2 = fm.value / thr - 1.0;
  out.xi1 = 8.0 / (3.0 * M_PI);
  const double cap = 0.75;
  out.route_gamma_cap = cap;
  out.route_epsilon1 = lemma3_route_epsilon1(cap);
  // A fundamental-coefficient cap |gamma_1| <= cap pins the transverse energy
  // of the even extension at (9 - 8 cap^2) (pi/2d)^2 or above.
  out.route_epsilon2 = (9.0 - 8.0 * cap * cap) / 4.0 - 1.0;
  return out;
}

double lemma4_c0(double m) {
  if (!(m > 0)) throw ValidationError("lemma4: m must be positive");
  const double mu = m / std::sqrt(3.0);
  return mu * std::tanh(mu);
}

double lemma_a0(double d, double epsilon1) {
  if (!(d > 0) || !(epsilon1 > 0)) throw ValidationError("lemma_a0: bad inputs");
  const TransverseMode chi1 = TransverseMode::outer_dirichlet(1, d);
  auto excess = [&](double a) {
    return 2.0 * std::sqrt(mode_norm_on_subinterval(chi1, 0.0, a)) - epsilon1;
  };
  double lo = 1e-9 * d, hi = 0.5 * d;
  if (excess(hi) < 0.0) return hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return lo;
}

Lemma4Result lemma4_constant(double m, double d, double a, const Grid1D& grid) {
  if (!(m > 0) || !(d > 0) || !(a > 0) || !(a < d))
    throw ValidationError("lemma4: need m > 0 and 0 < a < d");
  const double a0 = lemma_a0(d, lemma3_route_epsilon1());
  const double a_uniform = m * d / (M_PI * std::sqrt(3.0));
  if (!(a < a0) || !(a < a_uniform))
    throw ValidationError("lemma4: a = " + std::to_string(a) +
                          " violates the smallness restriction min(" + std::to_string(a0) + ", " +
                          std::to_string(a_uniform) + ")");

  const double thr = (M_PI / d) * (M_PI / d);
  const TransverseMode chi1 = TransverseMode::outer_dirichlet(1, d);
  QuadraticFormSpec spec;
  spec.mass = PiecewiseConstCoeff{{0.0, a, d}, {(m / a) * (m / a) - thr, -thr}};
  spec.left = {BoundarySpec::Kind::Dirichlet, 1.0};
  spec.right = {BoundarySpec::Kind::Dirichlet, 0.0};
  spec.constraints.push_back({[chi1](double t) { return chi1.value(t); }, 0.0});
  const FormMinimum fm = min_quadratic_form(spec, Grid1D{grid.n, 0.0, d});

  Lemma4Result out;
  out.numeric = a * fm.value;
  out.closed_form = lemma4_c0(m);
  return out;
}

}  // namespace winguide
