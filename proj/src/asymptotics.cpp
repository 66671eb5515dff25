#include "winguide/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <thread>

#include "winguide/errors.hpp"

namespace winguide {

namespace {

int resolve_threads(int requested, size_t jobs) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("WINGUIDE_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  return static_cast<int>(std::min<size_t>(static_cast<size_t>(n), jobs));
}

}  // namespace

SweepResult sweep(double d1, double d2, const std::vector<double>& half_widths, double tol,
                  int n_max, int threads) {
  if (half_widths.empty()) throw ValidationError("sweep needs at least one half-width");
  const double d = std::max(d1, d2);
  for (size_t i = 0; i < half_widths.size(); ++i) {
    (void)Geometry(d1, d2, half_widths[i]);  // validates
    if (i > 0 && !(half_widths[i] > half_widths[i - 1]))
      throw ValidationError("half-widths must be strictly increasing");
    if (!(half_widths[i] < std::numbers::pi * d / 8.0))
      throw ValidationError("sweep half-widths must stay below pi*d/8");
  }

  SweepResult out;
  out.d1 = d1;
  out.d2 = d2;
  out.rows.resize(half_widths.size());
  for (size_t i = 0; i < half_widths.size(); ++i) out.rows[i].a = half_widths[i];

  const int n_threads = resolve_threads(threads, half_widths.size());
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= half_widths.size()) return;
      try {
        const EigenResult r = solve_ground_state(Geometry(d1, d2, half_widths[i]), tol, n_max);
        out.rows[i].energy = r.energy;
        out.rows[i].gap = r.gap;
        out.rows[i].n_modes = r.n_modes;
        out.rows[i].residual = r.residual;
        out.rows[i].status = r.status;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<std::pair<double, double>> usable;
  for (const auto& row : out.rows)
    if (row.status == SolveStatus::Converged && row.gap > 0.0)
      usable.emplace_back(row.a, row.gap);
  if (usable.size() >= 2) {
    const FitResult fit = fit_power_law(usable, /*lower_half=*/true);
    out.fit_slope = fit.slope;
    out.fit_coefficient = fit.coefficient;
    out.fit_window_lo = fit.window_lo;
    out.fit_window_hi = fit.window_hi;
    out.fit_rows = fit.n_used;
  }
  return out;
}

FitResult fit_power_law(const std::vector<std::pair<double, double>>& a_gap, bool lower_half) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [a, gap] : a_gap)
    if (a > 0.0 && gap > 0.0) pts.emplace_back(std::log(a), std::log(gap));
  if (pts.size() < 2) throw ValidationError("power-law fit needs at least two usable points");

  if (lower_half) {
    double lo = pts.front().first, hi = pts.front().first;
    for (const auto& p : pts) {
      lo = std::min(lo, p.first);
      hi = std::max(hi, p.first);
    }
    const double mid = 0.5 * (lo + hi);
    std::vector<std::pair<double, double>> keep;
    for (const auto& p : pts)
      if (p.first <= mid + 1e-12 * std::max(1.0, std::abs(mid))) keep.push_back(p);
    if (keep.size() >= 2) pts.swap(keep);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  if (!(std::abs(det) > 0.0)) throw ValidationError("power-law fit is degenerate");
  FitResult fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.coefficient = std::exp((sy - fit.slope * sx) / n);
  fit.n_used = static_cast<int>(pts.size());
  double wlo = pts.front().first, whi = pts.front().first, ss = 0.0;
  for (const auto& [x, y] : pts) {
    wlo = std::min(wlo, x);
    whi = std::max(whi, x);
    const double r = y - (fit.slope * x + std::log(fit.coefficient));
    ss += r * r;
  }
  fit.window_lo = std::exp(wlo);
  fit.window_hi = std::exp(whi);
  fit.rms = std::sqrt(ss / n);
  return fit;
}

SandwichReport sandwich_report(const SweepResult& sweep, const std::vector<double>& trial_values,
                               const ConstantChain& chain) {
  if (trial_values.size() != sweep.rows.size())
    throw ValidationError("trial-bound values do not match the sweep grid");

  SandwichReport rep;
  rep.chain = chain;
  rep.rows.reserve(sweep.rows.size());
  bool any = false;
  bool all = true;
  for (size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& src = sweep.rows[i];
    SandwichRow row;
    row.a = src.a;
    row.gap = src.gap;
    row.lower = std::abs(trial_values[i]);
    row.upper = chain.c1 * std::pow(src.a, 4);
    row.applicable = src.a <= chain.a_star && src.status == SolveStatus::Converged;
    row.lower_ok = row.lower <= row.gap;
    row.upper_ok = row.gap <= row.upper;
    if (!row.applicable) {
      row.status = SandwichStatus::Inconclusive;
    } else if (row.lower_ok && row.upper_ok) {
      row.status = SandwichStatus::Pass;
      any = true;
    } else {
      row.status = SandwichStatus::Fail;
      all = false;
    }
    rep.rows.push_back(row);
  }
  rep.pass = any && all;
  rep.inconclusive = !any && all;  // nothing applicable: not a pass, not a failure
  return rep;
}

}  // namespace winguide
