#include "ymlab/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ymlab/calculus.hpp"
#include "ymlab/error.hpp"
#include "ymlab/heat_flow.hpp"
#include "ymlab/norms.hpp"
#include "ymlab/parallel.hpp"
#include "ymlab/sampling.hpp"
#include "ymlab/snapshot.hpp"
#include "ymlab/spectral.hpp"
#include "ymlab/variational.hpp"

namespace ymlab {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Stream labels for the counter RNG; one per independent draw family.
constexpr std::uint64_t kStreamConnection = 1;
constexpr std::uint64_t kStreamVariation = 2;
constexpr std::uint64_t kStreamHardy = 0x6861726479000000ull;
constexpr std::uint64_t kStreamGfs = 0x6766736368000000ull;

const std::vector<Mode>& default_connection_modes() {
  static const std::vector<Mode> m{{0, 0, {0, 1, 0}, 0.4, 0.1}, {1, 1, {0, 0, 1}, 0.35, 0.7},
                                   {2, 2, {1, 0, 0}, 0.3, 1.3}, {0, 2, {0, 1, 1}, 0.2, 0.4},
                                   {1, 0, {1, 0, 1}, 0.25, 2.0}, {2, 1, {1, 1, 0}, 0.2, 0.3}};
  return m;
}

const std::vector<Mode>& default_variation_modes() {
  static const std::vector<Mode> m{{0, 1, {1, 1, 0}, 0.5, 0.2}, {1, 2, {0, 1, 0}, 0.4, 0.9},
                                   {2, 0, {0, 0, 1}, 0.3, 1.7}, {0, 0, {1, 0, 0}, 0.3, 0.5},
                                   {1, 1, {1, 0, 1}, 0.2, 2.2}};
  return m;
}

std::string fmt(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

class Artifacts {
 public:
  Artifacts(std::string dir, std::string scenario, std::string hash)
      : dir_(std::move(dir)), scenario_(std::move(scenario)), hash_(std::move(hash)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + dir_ + "'");
  }

  std::string header() const {
    return "# ymlab " + scenario_ + " config_hash=" + hash_ + " schema=" +
           std::to_string(kConfigSchemaVersion) + "\n";
  }

  void write(const std::string& rel, const std::string& text) {
    std::ofstream f(fs::path(dir_) / rel, std::ios::binary);
    f << text;
    if (!f) throw Error(ErrorCode::Io, "cannot write '" + rel + "'");
    files.push_back(rel);
  }

  void csv(const std::string& rel, const std::string& columns,
           const std::vector<std::vector<double>>& rows) {
    std::string out = header() + columns + "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + fmt(r[i]);
      out += "\n";
    }
    write(rel, out);
  }

  void snapshot(const std::string& rel, const FormField& f) {
    const fs::path p = fs::path(dir_) / rel;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    write_snapshot(f, p.string());
    files.push_back(rel);
  }

  std::vector<std::string> files;

 private:
  std::string dir_, scenario_, hash_;
};

std::string snapshot_name(const char* field, std::size_t node) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "snapshots/%s_%05zu.ymf", field, node);
  return buf;
}

bool snapshot_due(int every, std::size_t node, std::size_t last) {
  return every > 0 && (node % static_cast<std::size_t>(every) == 0 || node == last);
}

double rel_diff(const FormField& a, const FormField& b) {
  const double den = norm2(b);
  return norm2(a - b) / (den > 0.0 ? den : 1.0);
}

struct Setup {
  Grid grid;
  const GroupSpec* group;
  FormField A0;
  FormField w0;
};

Setup make_setup(const ExperimentConfig& cfg) {
  const Grid grid(cfg.n, cfg.L);
  const GroupSpec& group = GroupSpec::get(cfg.group);
  FormField A0 = build_initial(cfg.connection, grid, group, cfg.seed, kStreamConnection, false);
  FormField w0 = build_initial(cfg.variation, grid, group, cfg.seed, kStreamVariation, true);
  return {grid, &group, std::move(A0), std::move(w0)};
}

FlowOptions flow_options(const ExperimentConfig& cfg) {
  FlowOptions f;
  f.cfl_safety = cfg.cfl_safety;
  f.enforce_monotone = false;
  return f;
}

AugmentedOptions augmented_options(const ExperimentConfig& cfg, bool balances, int refine = 1) {
  AugmentedOptions o;
  o.cfl_safety = cfg.cfl_safety;
  o.refine = refine;
  o.b = cfg.b;
  o.track_balances = balances;
  return o;
}

ReportEntry monotone_entry(const FlowTrajectory& traj) {
  const double v = static_cast<double>(traj.monotone_violations.size());
  return inequality_entry("flow/monotone_violations", v, 0.0, 0.0,
                          "||B(t_n)||_2 non-increasing, per-node tolerance 1e-10 relative");
}

double max_relative(const std::vector<double>& v, const std::vector<double>& scale) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    m = std::max(m, std::abs(v[i]) / std::max(scale[i], 1e-300));
  return m;
}

// ---------------------------------------------------------------- heatflow

void run_heatflow(const ExperimentConfig& cfg, Artifacts& out, DiagnosticsReport& rep) {
  const Setup s = make_setup(cfg);
  const TimeGrid tg = TimeGrid::clustered(cfg.T, cfg.nodes, cfg.gamma);
  const FlowTrajectory traj = ym_flow(s.A0, tg, flow_options(cfg));
  std::vector<std::vector<double>> rows;
  for (const auto& r : heat_flow_series(traj, cfg.a))
    rows.push_back({r.t, r.B2, r.B3, r.B6, r.Binf, r.rho, r.Adot2, r.weighted_B2});
  out.csv("heatflow.csv", "t,B_L2,B_L3,B_L6,B_Linf,rho,Adot_L2,weighted_B2", rows);
  for (std::size_t n = 0; n < traj.size(); ++n)
    if (snapshot_due(cfg.snapshot_every, n, traj.size() - 1))
      out.snapshot(snapshot_name("A", n), traj.A[n]);
  rep.add(monotone_entry(traj));
}

// ------------------------------------------------------------- variational

void run_variational(const ExperimentConfig& cfg, Artifacts& out, DiagnosticsReport& rep) {
  const Setup s = make_setup(cfg);
  const TimeGrid tg = TimeGrid::clustered(cfg.T, cfg.nodes, cfg.gamma);
  const FlowTrajectory traj = ym_flow(s.A0, tg, flow_options(cfg));
  const AugmentedSolution sol = solve_augmented(s.w0, traj, augmented_options(cfg, true));
  const std::vector<double> action = b_action_series(sol, traj, cfg.b);
  const EnergyBalances& bal = sol.balances;
  std::vector<std::vector<double>> rows;
  for (std::size_t n = 0; n < sol.size(); ++n) {
    const auto& st = sol.states[n];
    rows.push_back({st.t, norm2(st.w), norm2(cov_d(traj.A[n], st.w)), norm2(st.psi),
                    lp_norm(st.psi, 6.0), action[n], bal.order0[n], bal.order1[n],
                    bal.order2[n]});
    if (snapshot_due(cfg.snapshot_every, n, sol.size() - 1))
      out.snapshot(snapshot_name("w", n), st.w);
  }
  out.csv("variational.csv",
          "t,w_L2,dAw_L2,psi_L2,psi_L6,b_action,balance_energy,balance_gradient,balance_rate",
          rows);
  rows.clear();
  for (const auto& r : initial_behavior_monitor(sol, traj, cfg.b))
    rows.push_back({r.t, r.weighted_energy, r.weighted_integral});
  out.csv("initial_behavior.csv", "t,weighted_energy,weighted_integral", rows);

  const std::string prov = "max_n |balance| / scale, RK4 accumulators";
  rep.add(inequality_entry("variational/balance_energy", max_relative(bal.order0, bal.scale0),
                           cfg.balance_tolerance, 0.0, prov));
  rep.add(inequality_entry("variational/balance_gradient", max_relative(bal.order1, bal.scale1),
                           cfg.balance_tolerance, 0.0, prov));
  rep.add(inequality_entry("variational/balance_rate", max_relative(bal.order2, bal.scale2),
                           cfg.balance_tolerance, 0.0, prov));
  rep.add(monotone_entry(traj));
}

// ----------------------------------------------------------------- recover

void run_recover(const ExperimentConfig& cfg, Artifacts& out, DiagnosticsReport& rep) {
  if (cfg.tau.empty()) throw Error(ErrorCode::Configuration, "recover needs recover.tau");
  const Setup s = make_setup(cfg);
  const TimeGrid tg = TimeGrid::clustered(cfg.T, cfg.nodes, cfg.gamma, cfg.tau);
  const FlowTrajectory traj = ym_flow(s.A0, tg, flow_options(cfg));
  const AugmentedSolution sol = solve_augmented(s.w0, traj, augmented_options(cfg, false));
  const std::vector<FormField> v =
      recover_v(sol, traj, {0.0, cfg.b, RecoveryMode::AlmostStrong});

  std::vector<double> taus = cfg.tau;
  std::sort(taus.begin(), taus.end(), std::greater<>());
  std::vector<std::vector<double>> rows;
  std::vector<double> sups;
  double worst_identity = 0.0;
  for (double tau : taus) {
    const std::vector<FormField> vt = recover_v(sol, traj, {tau, cfg.b, RecoveryMode::Strong});
    const FormField alpha = sol.eta_from_zero(*traj.times.find(tau));
    double sup = 0.0, identity = 0.0;
    for (std::size_t n = 0; n < traj.size(); ++n) {
      if (traj.times[n] <= 1.0) sup = std::max(sup, norm2(v[n] - vt[n]));
      FormField r = v[n] - cov_d(traj.A[n], alpha);
      r -= vt[n];
      identity = std::max(identity, norm2(r) / std::max(norm2(v[n]), 1e-300));
    }
    sups.push_back(sup);
    worst_identity = std::max(worst_identity, identity);
    rows.push_back({tau, sup, identity});
  }
  out.csv("recover.csv", "tau,sup_dist,vertical_identity", rows);

  rep.add(inequality_entry("recover/vertical_identity", worst_identity, 1e-12, 0.0,
                           "v_tau = v - d_A alpha_tau with shared quadrature"));
  double increase = 0.0;
  for (std::size_t i = 1; i < sups.size(); ++i) increase = std::max(increase, sups[i] - sups[i - 1]);
  rep.add(inequality_entry("recover/sup_monotone", increase, 0.0, 0.0,
                           "sup_{t<=1} ||v - v_tau|| non-increasing as tau decreases"));
  if (sups.size() > 1)
    rep.add(inequality_entry("recover/sup_reduction", sups.back(), 0.3 * sups.front(), 0.0,
                             "smallest tau within 0.3 of the largest"));
  if (cfg.recover_direct) {
    const std::vector<FormField> direct = solve_direct_variational(s.w0, traj);
    rep.add(inequality_entry("recover/direct_match", rel_diff(v.back(), direct.back()), 5e-3,
                             0.0, "relative L2 at T against RK4 on the variational equation"));
  }
  rep.add(monotone_entry(traj));
}

// ------------------------------------------------------------------ checks

std::optional<GfsCalibration> resolve_calibration(const ExperimentConfig& cfg, const Grid& grid,
                                                  const GroupSpec& group, Artifacts& out) {
  if (cfg.gfs_calibration == "calibrate") {
    GfsCalibration c = calibrate_gfs(grid, group, cfg.seed, cfg.calibration_samples);
    out.write("gfs_calibration.json", c.to_json());
    return c;
  }
  if (!cfg.gfs_calibration.empty()) {
    std::ifstream f(cfg.gfs_calibration);
    if (!f) throw Error(ErrorCode::Configuration, "cannot read '" + cfg.gfs_calibration + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    GfsCalibration c = GfsCalibration::from_json(ss.str());
    if (c.group != to_string(group.name()) || c.n != grid.n() || c.L != grid.L())
      throw Error(ErrorCode::Configuration, "calibration artifact was made for another lattice");
    return c;
  }
  if (cfg.gfs_gamma) {
    GfsCalibration c;
    c.gamma = *cfg.gfs_gamma;
    c.c = group.commutator_bound();
    c.seed = cfg.seed;
    c.n = grid.n();
    c.L = grid.L();
    c.group = to_string(group.name());
    return c;
  }
  return std::nullopt;
}

void hardy_sweep(const ExperimentConfig& cfg, DiagnosticsReport& rep) {
  static const double betas[] = {0.0, 0.5, 0.9};
  const TimeGrid tg = TimeGrid::clustered(1.0, 128, 2.0);
  const auto& t = tg.nodes();
  for (int i = 0; i < cfg.hardy_samples; ++i) {
    CounterRng rng(cfg.seed, kStreamHardy + static_cast<std::uint64_t>(i));
    const double beta = betas[i % 3];
    const double c0 = 2.0 * rng.uniform() - 1.0, c1 = 2.0 * rng.uniform() - 1.0;
    const double om = 20.0 * rng.uniform(), ph = 6.283185307179586 * rng.uniform();
    const double kink = rng.uniform(), d0 = 2.0 * rng.uniform() - 1.0;
    const double d1 = 4.0 * rng.uniform() - 2.0;
    std::vector<double> g(t.size());
    for (std::size_t n = 0; n < t.size(); ++n)
      g[n] = t[n] < kink ? c0 + c1 * std::cos(om * t[n] + ph) : d0 + d1 * (t[n] - kink);
    char name[32];
    std::snprintf(name, sizeof name, "hardy/%03d", i);
    rep.add(hardy_check(t, g, beta, name));
  }
}

void gfs_sweep(const ExperimentConfig& cfg, const Grid& grid, const GroupSpec& group,
               const std::optional<GfsCalibration>& cal, DiagnosticsReport& rep) {
  for (int i = 0; i < cfg.gfs_samples; ++i) {
    const std::uint64_t base = kStreamGfs + 4 * static_cast<std::uint64_t>(i);
    CounterRng rng(cfg.seed, base);
    SpectralSampler sa;
    sa.roughness = 0.75 + 1.5 * rng.uniform();
    sa.rms = 0.1 + 0.9 * rng.uniform();
    sa.kmax = 1 + static_cast<int>(rng.uniform() * (grid.n() / 4));
    SpectralSampler sw;
    sw.roughness = 0.25 + 2.0 * rng.uniform();
    sw.zero_mean = rng.uniform() < 0.5;
    const int degree = 1 + (i % 2);
    const FormField A = sample_spectral(grid, group, 1, sa, cfg.seed, base + 1);
    const FormField w = sample_spectral(grid, group, degree, sw, cfg.seed, base + 2);
    char name[32];
    std::snprintf(name, sizeof name, "gfs/%03d", i);
    rep.add(gfs_check(w, A, cal, name));
  }
}

void run_checks(const ExperimentConfig& cfg, Artifacts& out, DiagnosticsReport& rep) {
  const Grid grid(cfg.n, cfg.L);
  const GroupSpec& group = GroupSpec::get(cfg.group);
  const std::optional<GfsCalibration> cal = resolve_calibration(cfg, grid, group, out);
  if (!cal && cfg.gfs_samples > 0)
    throw Error(ErrorCode::Configuration,
                "checks.gfs_calibration is unset (use 'calibrate', a calibration file, or "
                "checks.gfs_gamma)");
  hardy_sweep(cfg, rep);
  if (cfg.gfs_samples > 0) gfs_sweep(cfg, grid, group, cal, rep);

  if (cfg.identities) {
    InitialData cd = cfg.connection, vd = cfg.variation;
    // Refinement needs data that is the same function at both resolutions.
    if (cd.kind != InitialData::Kind::Modes) cd = InitialData{};
    if (vd.kind != InitialData::Kind::Modes) vd = InitialData{};
    const std::uint64_t seed = cfg.seed;
    const SmoothPairFactory factory = [&](const Grid& g) {
      return std::make_pair(build_initial(cd, g, group, seed, kStreamConnection, false),
                            build_initial(vd, g, group, seed, kStreamVariation, true));
    };
    const TimeGrid tg = TimeGrid::clustered(cfg.T, cfg.nodes, cfg.gamma);
    const auto [A0, w0] = factory(grid);
    const FlowTrajectory traj = ym_flow(A0, tg, flow_options(cfg));
    BalanceRuns runs{solve_augmented(w0, traj, augmented_options(cfg, true, 1)).balances,
                     solve_augmented(w0, traj, augmented_options(cfg, true, 2)).balances};
    rep.merge(identity_suite(factory, cfg.n, cfg.L, runs));
  }
  out.write("diagnostics.json", rep.to_json(cfg.hash()));
  out.write("diagnostics.csv", rep.to_csv(cfg.hash()));
}

// ------------------------------------------------------------------ oracle

double inverse_erfc(double y) {
  double lo = 0.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid) > y ? lo : hi) = mid;
  }
  return hi;
}

void run_oracle(const ExperimentConfig& cfg, Artifacts& out, DiagnosticsReport& rep) {
  if (cfg.group != GroupName::U1)
    throw Error(ErrorCode::Configuration, "oracle scenario needs group = U1");
  const Setup s = make_setup(cfg);
  // Coulomb gauge, where the flow is the heat equation
  const FormField A0 = helmholtz_split(s.A0).divergence_free;
  if (!(norm2(A0) > 0.0)) throw Error(ErrorCode::Configuration, "oracle data has no Coulomb part");

  const TimeGrid tg = TimeGrid::clustered(cfg.T, cfg.nodes, cfg.gamma);
  const FlowTrajectory traj = ym_flow(A0, tg, flow_options(cfg));
  const double err_discrete = rel_diff(traj.A.back(), spectral_heat(A0, cfg.T, Symbol::Discrete));
  const double err_continuum =
      rel_diff(traj.A.back(), spectral_heat(A0, cfg.T, Symbol::Continuum));

  const double tail_target = 0.005;
  const double T_rho = oracle_horizon(A0, tail_target);
  const TimeGrid tr = TimeGrid::clustered(T_rho, cfg.nodes, cfg.gamma);
  const FlowTrajectory traj_rho = ym_flow(A0, tr, flow_options(cfg));
  const double a = 0.5;
  const double rho = action_rho(traj_rho, a);
  const double h_half = h_half_seminorm(A0);
  const double target = 0.5 * std::sqrt(M_PI / 2.0) * h_half * h_half;
  const double ratio = rho / target;
  const double rho_T = std::pow(spectral_norm(A0,
                                              [&](double lam) {
                                                if (lam <= 0.0) return 0.0;
                                                return 0.5 * lam * std::sqrt(M_PI / (2.0 * lam)) *
                                                       std::erf(std::sqrt(2.0 * lam * T_rho));
                                              }),
                                2);
  const double tail = 1.0 - rho_T / target;

  std::vector<std::vector<double>> rows{{cfg.T, err_discrete, err_continuum, T_rho, rho, rho_T,
                                         target, ratio, tail}};
  out.csv("oracle.csv",
          "T,heat_err_discrete,heat_err_continuum,T_rho,rho,rho_exact_T,half_norm_target,ratio,"
          "tail",
          rows);
  rep.add(inequality_entry("oracle/heat_discrete", err_discrete, 5e-3, 0.0,
                           "relative L2 against the exact discrete heat semigroup"));
  rep.add(inequality_entry("oracle/rho_ratio", std::abs(ratio - 1.0), 0.02, 0.0,
                           "rho(T) against sqrt(pi/2)/2 times the squared H^1/2 seminorm"));
  rep.add(inequality_entry("oracle/rho_tail", tail, tail_target, 0.0,
                           "analytic per-mode tail erfc(sqrt(2 lambda T))"));
  rep.add(monotone_entry(traj));
}

}  // namespace

FormField build_initial(const InitialData& d, const Grid& grid, const GroupSpec& group,
                        std::uint64_t seed, std::uint64_t stream, bool variation) {
  switch (d.kind) {
    case InitialData::Kind::Zero:
      return FormField(grid, group, 1);
    case InitialData::Kind::Spectral:
      return sample_spectral(grid, group, 1, d.spectral, seed, stream);
    case InitialData::Kind::Modes:
      break;
  }
  if (!d.modes.empty()) return sample_modes(grid, group, 1, d.modes);
  std::vector<Mode> modes = variation ? default_variation_modes() : default_connection_modes();
  for (auto& m : modes) m.basis %= group.dim();
  return sample_modes(grid, group, 1, modes);
}

double oracle_horizon(const FormField& A0, double tail) {
  require_abelian(A0, "oracle_horizon");
  const Grid& g = A0.grid();
  Fft3 fft(g.n());
  const int n = g.n(), nh = fft.half();
  std::vector<std::complex<double>> spec;
  std::vector<double> power(fft.spectrum_size(), 0.0);
  for (int c = 0; c < A0.components(); ++c) {
    fft.forward(A0.channel(c, 0), spec);
    for (std::size_t i = 0; i < spec.size(); ++i) power[i] += std::norm(spec[i]);
  }
  const double peak = *std::max_element(power.begin(), power.end());
  double lam_min = std::numeric_limits<double>::infinity();
  for (int kz = 0; kz < n; ++kz)
    for (int ky = 0; ky < n; ++ky)
      for (int kx = 0; kx < nh; ++kx) {
        const double p = power[(static_cast<std::size_t>(kz) * n + ky) * nh + kx];
        const double lam = discrete_symbol(g, kx, ky, kz);
        if (lam > 0.0 && p > 1e-24 * peak) lam_min = std::min(lam_min, lam);
      }
  if (!std::isfinite(lam_min)) throw Error(ErrorCode::InvalidInput, "field has no nonzero modes");
  const double x = inverse_erfc(tail);
  return x * x / (2.0 * lam_min);
}

RunOutcome run_experiment(ExperimentConfig cfg, const RunOptions& opt) {
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.snapshot_every) cfg.snapshot_every = *opt.snapshot_every;
  if (opt.scenario) cfg.scenario = opt.scenario;
  if (!cfg.scenario) throw Error(ErrorCode::Configuration, "no scenario given");
  validate_config(cfg);
  if (opt.threads > 0) set_threads(opt.threads);

  RunOutcome res;
  res.scenario = *cfg.scenario;
  const std::string hash = cfg.hash();
  Artifacts out(opt.out_dir, to_string(res.scenario), hash);
  switch (res.scenario) {
    case Scenario::HeatFlow: run_heatflow(cfg, out, res.report); break;
    case Scenario::Variational: run_variational(cfg, out, res.report); break;
    case Scenario::Recover: run_recover(cfg, out, res.report); break;
    case Scenario::Checks: run_checks(cfg, out, res.report); break;
    case Scenario::Oracle: run_oracle(cfg, out, res.report); break;
  }

  ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["scenario"] = to_string(res.scenario);
  j["config_hash"] = hash;
  j["version"] = kVersion;
  j["seed"] = cfg.seed;
  j["pass"] = res.report.all_pass();
  ordered_json checks = ordered_json::array();
  for (const auto& e : res.report.entries())
    checks.push_back({{"name", e.name},
                      {"value", e.lhs},
                      {"bound", e.rhs},
                      {"verdict", e.pass ? "pass" : "fail"}});
  j["checks"] = std::move(checks);
  ordered_json files = ordered_json::array();
  for (const auto& f : out.files) files.push_back(f);
  j["files"] = std::move(files);
  out.write("summary.json", j.dump(2) + "\n");
  res.files = out.files;
  return res;
}

}  // namespace ymlab
