// Acceptance runs A1-A10. One line per criterion; exit status is the number
// of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "support.hpp"
#include "ymlab/calculus.hpp"
#include "ymlab/diagnostics.hpp"
#include "ymlab/error.hpp"
#include "ymlab/heat_flow.hpp"
#include "ymlab/norms.hpp"
#include "ymlab/quadrature.hpp"
#include "ymlab/runner.hpp"
#include "ymlab/semigroup.hpp"
#include "ymlab/spectral.hpp"
#include "ymlab/variational.hpp"

using namespace ymtest;
namespace fs = std::filesystem;

namespace {

// Tolerances, fixed by the acceptance criteria.
constexpr double kA1Error = 5e-3;
constexpr double kA1Ratio = 3.2;
constexpr double kA2Monotone = 1e-10;
constexpr double kA3Match = 5e-3;
constexpr double kA3Identity = 1e-12;
constexpr double kA4Reduction = 0.3;
constexpr double kA5Ratio = 0.02;
constexpr double kA5Tail = 0.005;
constexpr double kA6Lo = 3.2, kA6Hi = 4.8, kA6Order = 12.0;
constexpr double kA8Ratio = 0.9;
constexpr double kA8Match = 5e-3;
constexpr double kA9Slack = 1e-3;

int failures = 0;

void line(const char* id, bool pass, const std::string& detail, double seconds) {
  std::printf("%s %s  %s  [%.1fs]\n", id, pass ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

template <class F>
void criterion(const char* id, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  line(id, pass, detail, s);
}

FormField coulomb_modes(const Grid& g) {
  const std::vector<Mode> modes{{1, 0, {1, 0, 0}, 0.5, 0.3}, {2, 0, {0, 2, 0}, 0.3, 1.1},
                                {0, 0, {0, 1, 1}, 0.2, 0.2}, {2, 0, {1, 1, 0}, 0.2, 0.7},
                                {0, 0, {0, 0, 2}, 0.15, 0.4}};
  return helmholtz_split(sample_modes(g, GroupSpec::get(GroupName::U1), 1, modes)).divergence_free;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const double two_pi = 2 * M_PI;

  criterion("A1", [&](std::string& d) {
    const double T = 0.5;
    auto run = [&](int n, double& err_discrete) {
      const Grid g(n, two_pi);
      const FormField A0 = coulomb_modes(g);
      const FlowTrajectory tr = ym_flow(A0, TimeGrid::clustered(T, 20, 1.0));
      err_discrete = rel(tr.A.back(), spectral_heat(A0, T, Symbol::Discrete));
      return rel(tr.A.back(), spectral_heat(A0, T, Symbol::Continuum));
    };
    double ed16 = 0, ed32 = 0;
    const double ec16 = run(16, ed16), ec32 = run(32, ed32);
    const double ratio = ec16 / ec32;
    d = fmt("err32(discrete)=%.3e", ed32) + fmt(" err32(continuum)=%.3e", ec32) +
        fmt(" ratio16/32=%.3f", ratio);
    return ed32 <= kA1Error && ec32 <= kA1Error && ratio >= kA1Ratio;
  });

  criterion("A2", [&](std::string& d) {
    const Grid g(16, two_pi);
    std::size_t violations = 0;
    double worst = -1.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      SpectralSampler s;
      s.roughness = 0.5;
      s.rms = 0.5;
      const FormField A0 = sample_spectral(g, GroupSpec::get(GroupName::SU2), 1, s, seed, 1);
      FlowOptions o;
      o.enforce_monotone = false;
      o.monotone_tolerance = kA2Monotone;
      const FlowTrajectory tr = ym_flow(A0, TimeGrid::clustered(0.25, 40, 2.0), o);
      violations += tr.monotone_violations.size();
      for (std::size_t n = 1; n < tr.size(); ++n)
        worst = std::max(worst, norm2(tr.B[n]) / norm2(tr.B[n - 1]) - 1.0);
    }
    d = "violations=" + std::to_string(violations) + fmt(" max relative step change=%.3e", worst);
    return violations == 0;
  });

  criterion("A3", [&](std::string& d) {
    const Grid g(16, two_pi);
    const FlowTrajectory tr = ym_flow(smooth_A(g), TimeGrid::clustered(0.25, 40, 2.0));
    const FormField v0 = smooth_w(g);
    const AugmentedSolution sol = solve_augmented(v0, tr);
    const auto v = recover_v(sol, tr, {0.0, 0.75, RecoveryMode::AlmostStrong});
    const auto direct = solve_direct_variational(v0, tr);
    const double match = rel(v.back(), direct.back());
    // identity with a cutoff node tau
    const std::size_t k = tr.size() / 2;
    const auto vt = recover_v(sol, tr, {tr.times[k], 0.75, RecoveryMode::Strong});
    const FormField alpha = sol.eta_from_zero(k);
    double ident = 0.0;
    for (std::size_t n = 0; n < tr.size(); ++n)
      ident = std::max(ident, norm2(v[n] - cov_d(tr.A[n], alpha) - vt[n]) / norm2(v[n]));
    d = fmt("recovered vs direct=%.3e", match) + fmt(" identity=%.3e", ident);
    return match <= kA3Match && ident <= kA3Identity;
  });

  criterion("A4", [&](std::string& d) {
    const Grid g(16, two_pi);
    const std::vector<double> taus{0.2, 0.1, 0.05, 0.025};
    const TimeGrid tg = TimeGrid::clustered(1.0, 60, 2.0, taus);
    const FlowTrajectory tr = ym_flow(smooth_A(g), tg);
    const AugmentedSolution sol = solve_augmented(smooth_w(g), tr);
    const auto v = recover_v(sol, tr, {0.0, 0.75, RecoveryMode::AlmostStrong});
    std::vector<double> sups;
    for (double tau : taus) {
      const auto vt = recover_v(sol, tr, {tau, 0.75, RecoveryMode::Strong});
      double sup = 0.0;
      for (std::size_t n = 0; n < tr.size(); ++n)
        if (tr.times[n] <= 1.0) sup = std::max(sup, norm2(v[n] - vt[n]));
      sups.push_back(sup);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < sups.size(); ++i) monotone = monotone && sups[i] < sups[i - 1];
    d = "sup=";
    for (double s : sups) d += fmt("%.4g ", s);
    d += fmt("final/initial=%.3f", sups.back() / sups.front());
    return monotone && sups.back() <= kA4Reduction * sups.front();
  });

  criterion("A5", [&](std::string& d) {
    // pre-verify the constant: int_0^inf s^{-1/2} e^{-2s} ds = Gamma(1/2)/sqrt(2)
    const double c = std::tgamma(0.5) / std::sqrt(2.0);
    const bool constant_ok = std::abs(c - std::sqrt(M_PI / 2)) < 1e-15;
    const Grid g(32, two_pi);
    SpectralSampler s;
    s.roughness = 0.5;
    s.rms = 0.5;
    s.kmax = 3;
    s.coulomb = true;
    const FormField A0 = sample_spectral(g, GroupSpec::get(GroupName::U1), 1, s, 1, 1);
    const double T = oracle_horizon(A0, kA5Tail);
    const double lam_tail = std::erfc(std::sqrt(2.0 * discrete_symbol(g, 1, 0, 0) * T));
    const FlowTrajectory tr = ym_flow(A0, TimeGrid::clustered(T, 60, 3.0));
    const double hh = h_half_seminorm(A0);
    const double ratio = action_rho(tr, 0.5) / (0.5 * c * hh * hh);
    d = fmt("T=%.4f", T) + fmt(" worst-mode tail=%.2e", lam_tail) +
        fmt(" ratio-1=%.3e", ratio - 1.0);
    return constant_ok && lam_tail < kA5Tail * (1 + 1e-9) && std::abs(ratio - 1.0) <= kA5Ratio;
  });

  criterion("A6", [&](std::string& d) {
    const SmoothPairFactory factory = [](const Grid& g) {
      return std::make_pair(smooth_A(g), smooth_w(g));
    };
    const Grid g(16, two_pi);
    const FlowTrajectory tr = ym_flow(smooth_A(g), TimeGrid::clustered(0.25, 40, 2.0));
    AugmentedOptions o;
    o.track_balances = true;
    BalanceRuns runs{solve_augmented(smooth_w(g), tr, o).balances, {}};
    o.refine = 2;
    runs.fine = solve_augmented(smooth_w(g), tr, o).balances;
    const DiagnosticsReport r = identity_suite(factory, 16, two_pi, runs);
    bool pass = true;
    for (const auto& e : r.entries()) {
      const double ratio = e.lhs / e.rhs;
      const bool balance = e.name.rfind("balance/", 0) == 0;
      const bool ok = balance ? ratio >= kA6Order : (ratio >= kA6Lo && ratio <= kA6Hi);
      pass = pass && ok && e.pass;
      d += e.name.substr(e.name.find('/') + 1) + fmt("=%.2f ", ratio);
    }
    return pass;
  });

  criterion("A7", [&](std::string& d) {
    ExperimentConfig c = parse_config(
        "schema_version = 1\nscenario = checks\ngroup = SU2\ngrid.n = 16\n"
        "checks.gfs_calibration = calibrate\nchecks.identities = false\n");
    RunOptions o;
    o.out_dir = "acceptance_a7";
    const RunOutcome r = run_experiment(c, o);
    int hardy = 0, gfs = 0, hardy_pass = 0, gfs_pass = 0;
    for (const auto& e : r.report.entries()) {
      if (e.name.rfind("hardy/", 0) == 0) hardy++, hardy_pass += e.pass;
      if (e.name.rfind("gfs/", 0) == 0) gfs++, gfs_pass += e.pass;
    }
    const GfsCalibration again =
        calibrate_gfs(Grid(16, c.L), GroupSpec::get(GroupName::SU2), c.seed, 1000);
    const bool reproducible = again.to_json() == slurp("acceptance_a7/gfs_calibration.json");
    d = "hardy " + std::to_string(hardy_pass) + "/" + std::to_string(hardy) + ", gfs " +
        std::to_string(gfs_pass) + "/" + std::to_string(gfs) + fmt(", gamma=%.4g", again.gamma) +
        (reproducible ? ", calibration reproducible" : ", calibration NOT reproducible");
    fs::remove_all("acceptance_a7");
    return hardy == 100 && gfs == 100 && hardy_pass == 100 && gfs_pass == 100 && reproducible;
  });

  criterion("A8", [&](std::string& d) {
    const Grid g(16, two_pi);
    const FormField A0 = smooth_A(g), w0 = smooth_w(g);
    const PicardHorizon ph = choose_picard_horizon(A0, w0, 0.2, 40, 10);
    const auto ratios = ph.result.ratios();
    bool geometric = ratios.size() >= 3;
    double worst = 0.0;
    for (std::size_t k = 1; k < ratios.size(); ++k) worst = std::max(worst, ratios[k]);
    geometric = geometric && worst < kA8Ratio;
    AugmentedOptions o;
    o.form = RhsForm::Bochner;
    const AugmentedSolution sol = solve_augmented(w0, ph.traj, o);
    double match = 0.0;
    for (std::size_t n = 0; n < ph.traj.size(); ++n)
      match = std::max(match, rel(ph.result.limit()[n], sol.states[n].w));
    d = fmt("T=%.4g", ph.T) + " iterations=" + std::to_string(ph.result.corrections.size()) +
        fmt(" max ratio after 2=%.3f", worst) + fmt(" limit vs augmented=%.3e", match);
    return geometric && match <= kA8Match;
  });

  criterion("A9", [&](std::string& d) {
    const Grid g(16, two_pi);
    SpectralSampler s;
    s.roughness = 0.75;
    s.rms = 0.6;
    const GroupSpec& su2 = GroupSpec::get(GroupName::SU2);
    const FlowTrajectory tr =
        ym_flow(sample_spectral(g, su2, 1, s, 3, 1), TimeGrid::clustered(0.25, 40, 2.0));
    const FormField v0 = smooth_w(g);
    FormField delta = sample_spectral(g, su2, 1, s, 3, 2);
    delta *= 1e-3;
    const auto a = solve_direct_variational(v0, tr);
    const auto b = solve_direct_variational(v0 + delta, tr);
    std::vector<double> binf;
    for (const auto& B : tr.B) binf.push_back(2.0 * su2.commutator_bound() * lp_norm(B, INFINITY));
    const std::vector<double> expo = power_trapezoid_cumulative(tr.times.nodes(), binf, 0.0);
    const double d0 = norm2(b.front() - a.front());
    double worst = 0.0, worst_later = 0.0;
    bool pass = true;
    for (std::size_t n = 0; n < tr.size(); ++n) {
      const double bound = d0 * std::exp(expo[n]) * (1 + kA9Slack);
      const double dv = norm2(b[n] - a[n]);
      worst = std::max(worst, dv / bound);
      if (n > 0) worst_later = std::max(worst_later, dv / bound);
      pass = pass && dv <= bound;
    }
    d = fmt("max ||dv||/bound=%.3e", worst) + fmt(" (t>0: %.3e)", worst_later);
    return pass;
  });

  criterion("A10", [&](std::string& d) {
    const fs::path work = "acceptance_a10";
    fs::remove_all(work);
    fs::create_directories(work);
    std::ofstream(work / "checks.cfg") << "schema_version = 1\ngrid.n = 8\ntime.T = 0.05\n"
                                          "time.nodes = 10\nchecks.gfs_calibration = calibrate\n"
                                          "checks.calibration_samples = 50\n"
                                          "checks.hardy_samples = 10\nchecks.gfs_samples = 10\n";
    std::ofstream(work / "flow.cfg") << "schema_version = 1\ngrid.n = 16\ntime.T = 0.1\n"
                                        "time.nodes = 20\nrecover.tau = 0.05, 0.025\n";
    const std::vector<std::pair<std::string, std::string>> runs{
        {"heatflow", "flow.cfg"}, {"variational", "flow.cfg"}, {"recover", "flow.cfg"},
        {"checks", "checks.cfg"}};
    bool same = true;
    int files = 0;
    for (const auto& [scenario, cfg] : runs) {
      std::vector<fs::path> outs;
      for (int threads : {1, 4, 8}) {
        const fs::path out = work / (scenario + "_t" + std::to_string(threads));
        const std::string cmd = std::string(YMLAB_CLI) + " " + scenario + " --config " +
                                (work / cfg).string() + " --out " + out.string() +
                                " --threads " + std::to_string(threads) +
                                " --snapshot-every 5 --seed 7 > /dev/null 2>&1";
        // exit 1 is a failed science check with all artifacts written; determinism is what counts here
        const int rc = std::system(cmd.c_str());
        const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
        if (code != 0 && code != 1) {
          d += scenario + " exited " + std::to_string(code) + "; ";
          same = false;
        }
        outs.push_back(out);
      }
      for (const auto& e : fs::recursive_directory_iterator(outs[0])) {
        if (!e.is_regular_file()) continue;
        const fs::path rel = fs::relative(e.path(), outs[0]);
        const std::string ref = slurp(e.path());
        ++files;
        for (std::size_t i = 1; i < outs.size(); ++i)
          if (slurp(outs[i] / rel) != ref) {
            same = false;
            d += scenario + "/" + rel.string() + " differs; ";
          }
      }
    }
    d += std::to_string(files) + " files compared across threads {1,4,8}";
    if (same) fs::remove_all(work);
    return same;
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
