#include "ymlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ymlab/calculus.hpp"
#include "ymlab/error.hpp"
#include "ymlab/norms.hpp"
#include "ymlab/parallel.hpp"
#include "ymlab/quadrature.hpp"
#include "ymlab/sampling.hpp"

namespace ymlab {

using nlohmann::ordered_json;

void DiagnosticsReport::add(ReportEntry e) {
  auto pos = std::upper_bound(entries_.begin(), entries_.end(), e.name,
                              [](const std::string& n, const ReportEntry& x) { return n < x.name; });
  entries_.insert(pos, std::move(e));
}

void DiagnosticsReport::merge(const DiagnosticsReport& other) {
  for (const auto& e : other.entries_) add(e);
}

bool DiagnosticsReport::all_pass() const { return failures() == 0; }

std::size_t DiagnosticsReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const ReportEntry& e) { return !e.pass; }));
}

std::string DiagnosticsReport::to_json(const std::string& config_hash) const {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config_hash"] = config_hash;
  j["pass"] = all_pass();
  j["failures"] = failures();
  ordered_json arr = ordered_json::array();
  for (const auto& e : entries_) {
    arr.push_back({{"name", e.name},
                   {"lhs", e.lhs},
                   {"rhs", e.rhs},
                   {"residual", e.residual},
                   {"tolerance", e.tolerance},
                   {"verdict", e.pass ? "pass" : "fail"},
                   {"provenance", e.provenance}});
  }
  j["entries"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string DiagnosticsReport::to_csv(const std::string& config_hash) const {
  std::ostringstream os;
  os.precision(17);
  os << "# ymlab diagnostics schema=" << kReportSchemaVersion << " config_hash=" << config_hash
     << "\n";
  os << "name,lhs,rhs,residual,tolerance,verdict\n";
  for (const auto& e : entries_)
    os << e.name << ',' << e.lhs << ',' << e.rhs << ',' << e.residual << ',' << e.tolerance << ','
       << (e.pass ? "pass" : "fail") << "\n";
  return os.str();
}

ReportEntry inequality_entry(std::string name, double lhs, double rhs, double tolerance,
                             std::string provenance) {
  const double residual = std::max(0.0, lhs - rhs);
  return {std::move(name), lhs, rhs, residual, tolerance,
          std::isfinite(lhs) && std::isfinite(rhs) && residual <= tolerance, std::move(provenance)};
}

ReportEntry refinement_entry(std::string name, double coarse, double fine, std::string provenance,
                             double lo, double hi) {
  const double ratio = fine > 0.0 ? coarse / fine : std::numeric_limits<double>::infinity();
  const double mid = 0.5 * (lo + hi);
  const double residual = std::isfinite(ratio) ? std::abs(ratio - mid) : ratio;
  return {std::move(name), coarse, fine, residual, 0.5 * (hi - lo),
          std::isfinite(ratio) && ratio >= lo && ratio <= hi, std::move(provenance)};
}

ReportEntry order_entry(std::string name, double coarse, double fine, double min_ratio,
                        std::string provenance) {
  const double ratio = fine > 0.0 ? coarse / fine : std::numeric_limits<double>::infinity();
  const double residual = std::max(0.0, min_ratio - ratio);
  return {std::move(name), coarse, fine, residual, 0.0, !std::isnan(ratio) && ratio >= min_ratio,
          std::move(provenance)};
}

namespace {

struct HardySides {
  double lhs, rhs;
};

HardySides hardy_sides(std::span<const double> t, std::span<const double> g, double beta) {
  const std::size_t N = t.size();
  // G(t_n) = int_{t_n}^T g, exact for the piecewise-linear interpolant of g
  std::vector<double> G(N, 0.0);
  for (std::size_t i = N - 1; i-- > 0;) G[i] = G[i + 1] + 0.5 * (t[i + 1] - t[i]) * (g[i] + g[i + 1]);
  std::vector<double> G2(N), g2(N);
  for (std::size_t i = 0; i < N; ++i) {
    G2[i] = G[i] * G[i];
    g2[i] = g[i] * g[i];
  }
  const double c = 4.0 / ((1.0 - beta) * (1.0 - beta));
  return {power_trapezoid(t, G2, beta), c * power_trapezoid(t, g2, beta - 2.0)};
}

}  // namespace

ReportEntry hardy_check(std::span<const double> t, std::span<const double> g, double beta,
                        std::string name) {
  if (!(beta < 1.0)) throw Error(ErrorCode::InvalidInput, "hardy_check needs beta < 1");
  if (t.size() != g.size() || t.size() < 3)
    throw Error(ErrorCode::InvalidInput, "hardy_check needs >= 3 matching samples");
  if (t.front() != 0.0) throw Error(ErrorCode::InvalidInput, "hardy_check nodes must start at 0");
  const HardySides fine = hardy_sides(t, g, beta);
  std::vector<double> tc, gc;
  for (std::size_t i = 0; i < t.size(); i += 2) {
    tc.push_back(t[i]);
    gc.push_back(g[i]);
  }
  if (tc.back() != t.back()) {
    tc.push_back(t.back());
    gc.push_back(g.back());
  }
  const HardySides coarse = hardy_sides(tc, gc, beta);
  const double qerr = std::abs(fine.lhs - coarse.lhs) + std::abs(fine.rhs - coarse.rhs);
  return inequality_entry(std::move(name), fine.lhs, fine.rhs * (1.0 + 1e-6), qerr,
                          "constant 4/(1-beta)^2; tolerance = half-resolution quadrature estimate");
}

std::string GfsCalibration::to_json() const {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "gfs_calibration";
  j["group"] = group;
  j["n"] = n;
  j["L"] = L;
  j["seed"] = seed;
  j["samples"] = samples;
  j["kappa_measured"] = kappa_measured;
  j["safety"] = safety;
  j["kappa"] = kappa;
  j["commutator_bound"] = c;
  j["gamma"] = gamma;
  return j.dump(2) + "\n";
}

GfsCalibration GfsCalibration::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("kind").get<std::string>() != "gfs_calibration")
      throw Error(ErrorCode::Configuration, "not a gfs calibration artifact");
    GfsCalibration c;
    c.group = j.at("group").get<std::string>();
    c.n = j.at("n").get<int>();
    c.L = j.at("L").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.samples = j.at("samples").get<int>();
    c.kappa_measured = j.at("kappa_measured").get<double>();
    c.safety = j.at("safety").get<double>();
    c.kappa = j.at("kappa").get<double>();
    c.c = j.at("commutator_bound").get<double>();
    c.gamma = j.at("gamma").get<double>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Configuration, std::string("bad calibration artifact: ") + e.what());
  }
}

GfsCalibration calibrate_gfs(const Grid& grid, const GroupSpec& group, std::uint64_t seed,
                             int samples, double safety) {
  if (samples < 1) throw Error(ErrorCode::InvalidInput, "calibration needs >= 1 sample");
  const FormField zero = zero_connection(grid, group);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    CounterRng pick(seed, 0x6766730000000000ull + static_cast<std::uint64_t>(s));
    FormField w(grid, group, 1);
    if (s % 2 == 0) {
      SpectralSampler spec;
      spec.roughness = 0.25 + 2.0 * pick.uniform();
      spec.kmax = static_cast<int>(pick.uniform() * (grid.n() / 2 + 1));
      spec.zero_mean = pick.uniform() < 0.5;
      w = sample_spectral(grid, group, 1, spec, seed, 0x6766740000000000ull + s);
    } else {
      const double width = grid.h() * (0.75 + 4.0 * pick.uniform());
      w = sample_bump(grid, group, 1, width, seed, 0x6766750000000000ull + s);
    }
    const double h1 = h1A_norm(w, zero);
    if (h1 > 0.0) worst = std::max(worst, lp_norm(w, 6.0) / h1);
  }
  GfsCalibration c;
  c.kappa_measured = worst;
  c.safety = safety;
  c.kappa = safety * worst;
  c.c = group.commutator_bound();
  c.gamma = 27.0 / 4.0 * std::pow(c.kappa, 6) * std::pow(c.c, 4);
  c.seed = seed;
  c.samples = samples;
  c.n = grid.n();
  c.L = grid.L();
  c.group = to_string(group.name());
  return c;
}

ReportEntry gfs_check(const FormField& omega, const FormField& A,
                      const std::optional<GfsCalibration>& cal, std::string name) {
  if (!cal) throw Error(ErrorCode::Configuration, "gfs_check needs a gamma calibration");
  const double h1 = h1A_norm(omega, A);
  const double lhs = 0.5 * h1 * h1;
  const double ds = norm2(cov_d_star(A, omega));
  const double dd = omega.degree() < 3 ? norm2(cov_d(A, omega)) : 0.0;
  const double b = norm2(curvature(A));
  const double w2 = norm2(omega);
  const double rhs = ds * ds + dd * dd + (1.0 + cal->gamma * std::pow(b, 4)) * w2 * w2;
  return inequality_entry(std::move(name), lhs, rhs, 1e-12 * std::max(lhs, rhs),
                          "lambda(B) = 1 + gamma ||B||^4 with calibrated gamma = " +
                              std::to_string(cal->gamma) + " (seed " + std::to_string(cal->seed) +
                              ")");
}

namespace {

double safe_ratio(double num, double den) {
  return den > 0.0 ? num / den : num;
}

FormField neg(FormField f) {
  f *= -1.0;
  return f;
}

}  // namespace

double bianchi_residual(const FormField& A) {
  const FormField B = curvature(A);
  return safe_ratio(norm2(cov_d(A, B)), h_b_norm(B, SobolevSpec{1.0, std::nullopt}));
}

double weitzenbock_residual(const FormField& A, const FormField& u) {
  const FormField B = curvature(A);
  const FormField hodge = neg(hodge_laplacian(A, u));
  FormField r = hodge;
  r += bochner_laplacian(A, u);
  r -= interior_comm(u, B);
  return safe_ratio(norm2(r), norm2(hodge));
}

double coderivative_residual(const FormField& A, const FormField& w) {
  const FormField B = curvature(A);
  const FormField Adot = neg(cov_d_star(A, B));
  const FormField t1 = cov_d_star(A, cov_d_star(A, cov_d(A, w)));
  const FormField t2 = cov_d_star(A, interior_comm(w, B));
  const FormField t3 = interior_comm(w, Adot);
  FormField r = t1;
  r += t2;
  r -= t3;
  return safe_ratio(norm2(r), norm2(t1) + norm2(t2) + norm2(t3));
}

double psi_evolution_residual(const FormField& A, const FormField& w) {
  const FormField B = curvature(A);
  const FormField Adot = neg(cov_d_star(A, B));
  FormField wd = bochner_laplacian(A, w);
  wd.axpy(-2.0, interior_comm(w, B));
  const FormField psi = cov_d_star(A, w);
  FormField psid = cov_d_star(A, wd);
  psid += interior_comm(Adot, w);
  const FormField lap = cov_d_star(A, cov_d(A, psi));
  const FormField src = interior_comm(Adot, w);
  FormField r = psid;
  r += lap;
  r.axpy(-2.0, src);
  return safe_ratio(norm2(r), norm2(psid) + norm2(lap) + 2.0 * norm2(src));
}

double second_derivative_residual(const FormField& A, const FormField& w) {
  const FormField B = curvature(A);
  const FormField Adot = neg(cov_d_star(A, B));
  const FormField Bdot = cov_d(A, Adot);
  FormField wd = bochner_laplacian(A, w);
  wd.axpy(-2.0, interior_comm(w, B));
  // Delta_A is quadratic in A, so the polarisation below is its exact
  // derivative along A'.
  FormField dlap = bochner_laplacian(A + Adot, w);
  dlap -= bochner_laplacian(A - Adot, w);
  dlap *= 0.5;
  FormField wdd = bochner_laplacian(A, wd);
  wdd += dlap;
  wdd.axpy(-2.0, interior_comm(wd, B));
  wdd.axpy(-2.0, interior_comm(w, Bdot));

  FormField rhs = neg(hodge_laplacian(A, wd));
  rhs += cov_d_star(A, wedge_comm(Adot, w));
  rhs += interior_comm(Adot, cov_d(A, w));
  rhs += cov_d(A, interior_comm(Adot, w));
  rhs += wedge_comm(Adot, cov_d_star(A, w));
  rhs += interior_comm(wd, B);
  rhs += interior_comm(w, Bdot);
  FormField r = wdd;
  r += rhs;
  return safe_ratio(norm2(r), norm2(wdd) + norm2(rhs));
}

double vertical_residual(const FormField& A, const FormField& alpha) {
  const FormField B = curvature(A);
  const FormField Adot = neg(cov_d_star(A, B));
  const FormField z = cov_d(A, alpha);
  const FormField zd = wedge_comm(Adot, alpha);
  const FormField lap = cov_d_star(A, cov_d(A, z));
  const FormField src = interior_comm(z, B);
  FormField r = zd;
  r += lap;
  r += src;
  return safe_ratio(norm2(r), norm2(zd) + norm2(lap) + norm2(src));
}

double split_residual(const FormField& A, const FormField& A_bar, const FormField& w) {
  const FormField B = curvature(A);
  FormField lhs = bochner_laplacian(A_bar, w);
  lhs += operator_K(w, A - A_bar, A_bar, B);
  FormField rhs = bochner_laplacian(A, w);
  rhs.axpy(-2.0, interior_comm(w, B));
  FormField r = lhs;
  r -= rhs;
  return safe_ratio(norm2(r), norm2(rhs));
}

DiagnosticsReport identity_suite(const SmoothPairFactory& factory, int n, double L,
                                 const std::optional<BalanceRuns>& balances) {
  DiagnosticsReport rep;
  const Grid coarse(n, L), fine(2 * n, L);
  const auto [Ac, wc] = factory(coarse);
  const auto [Af, wf] = factory(fine);
  const std::string prov = "order-2 refinement window [3.2, 4.8], n=" + std::to_string(n) +
                           " -> " + std::to_string(2 * n);
  rep.add(refinement_entry("identity/bianchi", bianchi_residual(Ac), bianchi_residual(Af), prov));
  rep.add(refinement_entry("identity/weitzenbock", weitzenbock_residual(Ac, wc),
                           weitzenbock_residual(Af, wf), prov));
  rep.add(refinement_entry("identity/coderivative", coderivative_residual(Ac, wc),
                           coderivative_residual(Af, wf), prov));
  rep.add(refinement_entry("identity/psi_evolution", psi_evolution_residual(Ac, wc),
                           psi_evolution_residual(Af, wf), prov));
  rep.add(refinement_entry("identity/second_derivative", second_derivative_residual(Ac, wc),
                           second_derivative_residual(Af, wf), prov));
  rep.add(refinement_entry("identity/vertical", vertical_residual(Ac, cov_d_star(Ac, wc)),
                           vertical_residual(Af, cov_d_star(Af, wf)), prov));
  if (balances) {
    auto last = [](const std::vector<double>& v) { return v.empty() ? 0.0 : std::abs(v.back()); };
    const std::string bprov = "RK4 balance under dt halving, ratio >= 12";
    rep.add(order_entry("balance/energy", last(balances->coarse.order0),
                        last(balances->fine.order0), 12.0, bprov));
    rep.add(order_entry("balance/gradient", last(balances->coarse.order1),
                        last(balances->fine.order1), 12.0, bprov));
    rep.add(order_entry("balance/rate", last(balances->coarse.order2),
                        last(balances->fine.order2), 12.0, bprov));
  }
  return rep;
}

}  // namespace ymlab
