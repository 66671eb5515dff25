// winguide: waveguide-window bound states — solver, bounds, oracles.
//
// Subcommand map: solve (mode-matching ground state), sweep/fit/sandwich
// (quartic-law study), bound-upper (trial-function quotient),
// bound-lower-constants (explicit constant chain), lemma (variational
// oracles 1-4), oracle-fd (finite-difference cross-check).
//
// Exit codes: 0 ok, 2 validation, 3 non-convergence, 4 failed check.

#include <charconv>
#include <ctime>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "winguide/asymptotics.hpp"
#include "winguide/constant_chain.hpp"
#include "winguide/errors.hpp"
#include "winguide/fd_oracle.hpp"
#include "winguide/lemma_oracles.hpp"
#include "winguide/modematch.hpp"
#include "winguide/transverse.hpp"
#include "winguide/varbound.hpp"

namespace {

using njson = nlohmann::ordered_json;
using namespace winguide;

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

struct GeometryArgs {
  double d1 = 1.0;
  double d2 = 0.0;
  double a = 0.0;
  std::string config;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--d1", d1, "upper strip width")->capture_default_str();
    cmd->add_option("--d2", d2, "lower strip width (0: one-strip reduction)")
        ->capture_default_str();
    cmd->add_option("--a", a, "window half-width");
    cmd->add_option("--config", config, "plain-text file with keys d1, d2, a");
  }

  // config file supplies defaults; explicit flags override
  void load_config(const CLI::App* cmd) {
    if (config.empty()) return;
    std::ifstream in(config);
    if (!in) throw ValidationError("cannot open config file: " + config);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::replace(line.begin(), line.end(), '=', ' ');
      std::istringstream ls(line);
      std::string key;
      double value;
      if (!(ls >> key >> value)) continue;
      if (key == "d1" && cmd->count("--d1") == 0) d1 = value;
      else if (key == "d2" && cmd->count("--d2") == 0) d2 = value;
      else if (key == "a" && cmd->count("--a") == 0) a = value;
      else if (key != "d1" && key != "d2" && key != "a")
        throw ValidationError("unknown config key: " + key);
    }
  }

  [[nodiscard]] Geometry geometry() const { return Geometry(d1, d2, a); }
};

void emit(const std::string& text, const std::string& out_path, bool meta) {
  std::string payload;
  if (meta) {
    char stamp[32] = {0};
    const std::time_t now = std::time(nullptr);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    payload = std::string("# winguide ") + kVersion + " " + stamp + "\n";
  }
  payload += text;
  if (out_path.empty()) {
    std::fputs(payload.c_str(), stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + out_path);
    out << payload;
  }
}

std::vector<double> parse_a_list(const std::string& csv) {
  std::vector<double> vals;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    vals.push_back(std::stod(tok));
  }
  return vals;
}

struct CsvRow {
  double a, E, gap, residual;
  int n_modes;
};

std::vector<CsvRow> read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV: " + path);
  if (line != "a,E,gap,n_modes,residual")
    throw ValidationError("unexpected CSV header: " + line);
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    CsvRow r{};
    if (!(ls >> r.a >> r.E >> r.gap >> r.n_modes >> r.residual))
      throw ValidationError("malformed CSV row: " + line);
    rows.push_back(r);
  }
  return rows;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"bound states of laterally window-coupled Dirichlet strips"};
  app.require_subcommand(1);
  std::string out_path;
  bool meta = false;
  app.add_option("--out", out_path, "write output to a file instead of stdout");
  app.add_flag("--meta", meta, "prepend a '# version date' header line");

  // ---- solve ----
  auto* solve_cmd = app.add_subcommand("solve", "mode-matching ground state");
  GeometryArgs solve_geo;
  solve_geo.add_flags(solve_cmd);
  double solve_tol = 1e-6;
  int solve_nmax = 1024;
  solve_cmd->add_option("--tol", solve_tol, "relative-to-gap truncation tolerance")
      ->capture_default_str();
  solve_cmd->add_option("--n-max", solve_nmax, "mode-count cap")->capture_default_str();

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand("sweep", "gap(a) table as CSV");
  GeometryArgs sweep_geo;
  sweep_geo.add_flags(sweep_cmd);
  std::string sweep_alist;
  double sweep_amin = 0.02, sweep_amax = 0.16;
  double sweep_tol = 1e-6;
  int sweep_nmax = 1024, sweep_threads = 0;
  sweep_cmd->add_option("--a-list", sweep_alist, "comma-separated half-widths");
  sweep_cmd->add_option("--a-min", sweep_amin, "geometric grid start")->capture_default_str();
  sweep_cmd->add_option("--a-max", sweep_amax, "geometric grid end (ratio sqrt 2)")
      ->capture_default_str();
  sweep_cmd->add_option("--tol", sweep_tol, "solver tolerance")->capture_default_str();
  sweep_cmd->add_option("--n-max", sweep_nmax, "mode-count cap")->capture_default_str();
  sweep_cmd->add_option("--threads", sweep_threads, "worker threads (0: WINGUIDE_THREADS/auto)")
      ->capture_default_str();

  // ---- bound-upper ----
  auto* upper_cmd = app.add_subcommand("bound-upper", "optimized trial-function quotient");
  GeometryArgs upper_geo;
  upper_geo.add_flags(upper_cmd);

  // ---- bound-lower-constants ----
  auto* chain_cmd = app.add_subcommand("bound-lower-constants", "explicit constant chain");
  double chain_d = 1.0, chain_amax = 0.16;
  chain_cmd->add_option("--d", chain_d, "strip width")->capture_default_str();
  chain_cmd->add_option("--a-max", chain_amax, "largest half-width the chain must cover")
      ->capture_default_str();

  // ---- lemma ----
  auto* lemma_cmd = app.add_subcommand("lemma", "variational oracle for inequalities 1-4");
  int lemma_which = 0;
  double lemma_m = std::numbers::pi / 8.0, lemma_b = 0.0, lemma_d = 1.0, lemma_a = 0.05;
  int lemma_n = 512;
  lemma_cmd->add_option("--which", lemma_which, "lemma selector 1..4")->required();
  lemma_cmd->add_option("--m", lemma_m, "mass parameter (lemmas 1, 4)")->capture_default_str();
  lemma_cmd->add_option("--b", lemma_b, "half-interval (lemma 2; default 12/m)");
  lemma_cmd->add_option("--d", lemma_d, "strip width (lemmas 3, 4)")->capture_default_str();
  lemma_cmd->add_option("--a", lemma_a, "window half-width (lemma 4)")->capture_default_str();
  lemma_cmd->add_option("--n", lemma_n, "grid intervals")->capture_default_str();

  // ---- oracle-fd ----
  auto* fd_cmd = app.add_subcommand("oracle-fd", "finite-difference ground state");
  fd_cmd->set_help_flag("--help", "print help");  // frees -h for the grid step
  GeometryArgs fd_geo;
  fd_geo.add_flags(fd_cmd);
  double fd_h = 1.0 / 160.0, fd_X = 6.0;
  fd_cmd->add_option("--h", fd_h, "grid step (d1/h, d2/h, a/h, X/h integral)")
      ->capture_default_str();
  fd_cmd->add_option("--x", fd_X, "box half-length")->capture_default_str();

  // ---- fit ----
  auto* fit_cmd = app.add_subcommand("fit", "power-law fit of a sweep CSV");
  std::string fit_csv;
  double fit_d1 = 0.0, fit_d2 = 0.0;
  bool fit_full = false;
  fit_cmd->add_option("--csv", fit_csv, "sweep CSV path")->required();
  fit_cmd->add_option("--d1", fit_d1, "strip width for the precision-floor cut (optional)");
  fit_cmd->add_option("--d2", fit_d2, "second strip width for the floor cut");
  fit_cmd->add_flag("--full-window", fit_full, "fit all rows, not just the lower half");

  // ---- sandwich ----
  auto* sand_cmd = app.add_subcommand("sandwich", "two-sided quartic-law check");
  std::string sand_csv, sand_upper, sand_chain;
  GeometryArgs sand_geo;
  sand_cmd->add_option("--csv", sand_csv, "sweep CSV path")->required();
  sand_cmd->add_option("--upper", sand_upper,
                       "bound-upper JSON lines, one object per CSV row (default: recompute)");
  sand_cmd->add_option("--chain", sand_chain,
                       "bound-lower-constants JSON (default: recompute)");
  sand_geo.add_flags(sand_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::exit(app.exit(e));
    }
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (*solve_cmd) {
    solve_geo.load_config(solve_cmd);
    const EigenResult r = solve_ground_state(solve_geo.geometry(), solve_tol, solve_nmax);
    if (r.status == SolveStatus::NoEigenvalueResolved)
      throw ConvergenceError("no eigenvalue resolved below threshold (n_max = " +
                             std::to_string(r.n_modes) + ")");
    njson j;
    j["E"] = r.energy;
    j["gap"] = r.gap;
    j["residual"] = r.residual;
    j["n_modes"] = r.n_modes;
    emit(j.dump() + "\n", out_path, meta);
    return 0;
  }

  if (*sweep_cmd) {
    sweep_geo.load_config(sweep_cmd);
    std::vector<double> as = parse_a_list(sweep_alist);
    if (as.empty())
      for (double a = sweep_amin; a <= sweep_amax * (1 + 1e-9); a *= std::numbers::sqrt2)
        as.push_back(a);
    const SweepResult sw =
        sweep(sweep_geo.d1, sweep_geo.d2, as, sweep_tol, sweep_nmax, sweep_threads);
    std::string csv = "a,E,gap,n_modes,residual\n";
    for (const auto& row : sw.rows) {
      csv += fmt(row.a) + "," + fmt(row.energy) + "," + fmt(row.gap) + "," +
             std::to_string(row.n_modes) + "," + fmt(row.residual) + "\n";
    }
    emit(csv, out_path, meta);
    return 0;
  }

  if (*upper_cmd) {
    upper_geo.load_config(upper_cmd);
    const TrialBound tb = optimize_trial(upper_geo.geometry());
    njson j;
    j["value"] = tb.value;
    j["kappa"] = tb.params.kappa;
    j["eta"] = tb.params.eta;
    j["paper_chain_value"] = tb.paper_chain_value;
    emit(j.dump() + "\n", out_path, meta);
    return 0;
  }

  if (*chain_cmd) {
    const ConstantChain ch = build_chain(chain_d, chain_amax);
    njson j;
    j["d"] = ch.d;
    j["C"] = ch.C;
    j["a_star"] = ch.a_star;
    j["delta"] = ch.delta;
    j["m"] = ch.m;
    j["c0"] = ch.c0;
    j["c1"] = ch.c1;
    emit(j.dump() + "\n", out_path, meta);
    return 0;
  }

  if (*lemma_cmd) {
    double numeric = 0.0, closed = 0.0;
    bool ok = false;
    switch (lemma_which) {
      case 1: {
        numeric = lemma1_minimum(lemma_m, lemma_n).value;
        closed = lemma_m;  // m * alpha^2 with alpha = 1
        ok = std::abs(numeric / closed - 1.0) <= 0.01;
        break;
      }
      case 2: {
        const double b = lemma_b > 0.0 ? lemma_b : 12.0 / lemma_m;
        numeric = lemma2_minimum(b, lemma_n).value;
        closed = std::pow(std::numbers::pi / (2.0 * b), 2);
        ok = std::abs(numeric / closed - 1.0) <= 0.005;
        break;
      }
      case 3: {
        const auto l3 = lemma3_gap(lemma_d, Grid1D{lemma_n, 0.0, lemma_d});
        numeric = l3.rayleigh_min;
        closed = std::pow(std::numbers::pi / lemma_d, 2);  // must exceed the threshold
        ok = l3.epsilon2 > 0.0;
        break;
      }
      case 4: {
        const auto l4 = lemma4_constant(lemma_m, lemma_d, lemma_a, Grid1D{lemma_n, 0.0, lemma_d});
        numeric = l4.numeric;
        closed = l4.closed_form;
        ok = numeric >= closed;
        break;
      }
      default:
        throw ValidationError("lemma selector must be 1, 2, 3, or 4");
    }
    njson j;
    j["numeric"] = numeric;
    j["closed_form"] = closed;
    j["ratio"] = numeric / closed;
    emit(j.dump() + "\n", out_path, meta);
    if (!ok) throw CheckError("lemma " + std::to_string(lemma_which) + " check failed");
    return 0;
  }

  if (*fd_cmd) {
    fd_geo.load_config(fd_cmd);
    const FdResult r = fd_ground_state(fd_geo.geometry(), GridSpec{fd_h, fd_X});
    njson j;
    j["E"] = r.energy;
    j["h"] = r.h;
    j["X"] = r.X;
    emit(j.dump() + "\n", out_path, meta);
    return 0;
  }

  if (*fit_cmd) {
    const auto rows = read_sweep_csv(fit_csv);
    double floor_cut = 0.0;
    if (fit_d1 > 0.0 || fit_d2 > 0.0)
      floor_cut = 1e-13 * std::pow(std::numbers::pi / std::max(fit_d1, fit_d2), 2);
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
      if (r.gap > floor_cut) pts.emplace_back(r.a, r.gap);
    const FitResult fit = fit_power_law(pts, !fit_full);
    njson j;
    j["slope"] = fit.slope;
    j["coefficient"] = fit.coefficient;
    j["window_lo"] = fit.window_lo;
    j["window_hi"] = fit.window_hi;
    j["n_used"] = fit.n_used;
    j["rms"] = fit.rms;
    emit(j.dump() + "\n", out_path, meta);
    return 0;
  }

  if (*sand_cmd) {
    sand_geo.load_config(sand_cmd);
    const auto rows = read_sweep_csv(sand_csv);
    if (rows.empty()) throw ValidationError("sandwich needs a non-empty sweep CSV");

    SweepResult sw;
    sw.d1 = sand_geo.d1;
    sw.d2 = sand_geo.d2;
    for (const auto& r : rows) {
      SweepRow row;
      row.a = r.a;
      row.energy = r.E;
      row.gap = r.gap;
      row.n_modes = r.n_modes;
      row.residual = r.residual;
      row.status = SolveStatus::Converged;
      sw.rows.push_back(row);
    }

    ConstantChain chain;
    if (!sand_chain.empty()) {
      std::ifstream in(sand_chain);
      if (!in) throw ValidationError("cannot open chain JSON: " + sand_chain);
      njson j = njson::parse(in);
      chain.d = j.at("d").get<double>();
      chain.C = j.at("C").get<double>();
      chain.a_star = j.at("a_star").get<double>();
      chain.delta = j.at("delta").get<double>();
      chain.m = j.at("m").get<double>();
      chain.c0 = j.at("c0").get<double>();
      chain.c1 = j.at("c1").get<double>();
    } else {
      chain = build_chain(std::max(sand_geo.d1, sand_geo.d2), rows.back().a);
    }

    std::vector<double> uppers;
    if (!sand_upper.empty()) {
      std::ifstream in(sand_upper);
      if (!in) throw ValidationError("cannot open bound-upper JSON: " + sand_upper);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        uppers.push_back(njson::parse(line).at("value").get<double>());
      }
    } else {
      for (const auto& r : rows)
        uppers.push_back(optimize_trial(Geometry(sand_geo.d1, sand_geo.d2, r.a)).value);
    }

    const SandwichReport rep = sandwich_report(sw, uppers, chain);
    njson j;
    j["pass"] = rep.pass;
    j["inconclusive"] = rep.inconclusive;
    j["a_star"] = rep.chain.a_star;
    j["c1"] = rep.chain.c1;
    njson jrows = njson::array();
    for (const auto& row : rep.rows) {
      njson jr;
      jr["a"] = row.a;
      jr["gap"] = row.gap;
      jr["lower"] = row.lower;
      jr["upper"] = row.upper;
      jr["lower_ok"] = row.lower_ok;
      jr["upper_ok"] = row.upper_ok;
      jr["status"] = row.status == SandwichStatus::Pass         ? "pass"
                     : row.status == SandwichStatus::Fail       ? "fail"
                                                                : "inconclusive";
      jrows.push_back(jr);
    }
    j["rows"] = jrows;
    emit(j.dump() + "\n", out_path, meta);
    if (!rep.pass) throw CheckError(rep.inconclusive ? "sandwich inconclusive: no applicable rows"
                                                     : "sandwich check failed");
    return 0;
  }

  return 2;  // unreachable: require_subcommand
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const CheckError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
