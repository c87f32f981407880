#include "ymlab/heat_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ymlab/calculus.hpp"
#include "ymlab/error.hpp"
#include "ymlab/norms.hpp"
#include "ymlab/quadrature.hpp"

namespace ymlab {

TimeGrid TimeGrid::clustered(double T, int N, double gamma, std::span<const double> pinned) {
  if (!(T > 0.0) || N < 1 || !(gamma >= 1.0))
    throw Error(ErrorCode::InvalidInput, "time grid needs T > 0, N >= 1, gamma >= 1");
  std::vector<double> t(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) t[n] = T * std::pow(static_cast<double>(n) / N, gamma);
  t.back() = T;
  for (double p : pinned) {
    if (!(p > 0.0) || p > T)
      throw Error(ErrorCode::InvalidInput, "pinned time outside (0, T]");
    t.push_back(p);
  }
  std::sort(t.begin(), t.end());
  const double tol = 1e-12 * T;
  std::vector<double> merged;
  for (double v : t)
    if (merged.empty() || v - merged.back() > tol) merged.push_back(v);
    else if (std::find(pinned.begin(), pinned.end(), v) != pinned.end()) merged.back() = v;
  TimeGrid g = from_nodes(std::move(merged));
  g.gamma_ = gamma;
  return g;
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2 || nodes.front() != 0.0)
    throw Error(ErrorCode::InvalidInput, "time grid must start at 0 and have >= 2 nodes");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw Error(ErrorCode::InvalidInput, "time nodes must be strictly increasing");
  TimeGrid g;
  g.nodes_ = std::move(nodes);
  return g;
}

std::optional<std::size_t> TimeGrid::find(double t) const {
  const double tol = 1e-12 * T();
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (std::abs(nodes_[i] - t) <= tol) return i;
  return std::nullopt;
}

double rk4_stability_limit(const Grid& g) { return g.h() * g.h() / 6.0; }

int substep_count(const Grid& g, double a, double b, double cfl_safety, int refine) {
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
    throw Error(ErrorCode::Configuration, "cfl_safety must lie in (0, 1]");
  if (refine < 1) throw Error(ErrorCode::Configuration, "substep refinement must be >= 1");
  const double dt_max = cfl_safety * rk4_stability_limit(g);
  const double steps = std::ceil((b - a) / dt_max * (1.0 - 1e-12));
  return std::max(1, static_cast<int>(steps)) * refine;
}

FormField FlowTrajectory::A_at(std::size_t node, double t) const {
  if (node + 1 >= A.size()) return A.back();
  const double t0 = times[node], t1 = times[node + 1];
  const double th = (t - t0) / (t1 - t0);
  FormField out = A[node];
  out *= 1.0 - th;
  out.axpy(th, A[node + 1]);
  return out;
}

FormField FlowTrajectory::A_slope(std::size_t node) const {
  if (node + 1 >= A.size()) return A.back().zeros_like();
  FormField out = A[node + 1];
  out -= A[node];
  out *= 1.0 / (times[node + 1] - times[node]);
  return out;
}

double FlowTrajectory::curvature_cache_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    FormField d = curvature(A[i]);
    d -= B[i];
    const double scale = std::max(norm2(B[i]), std::numeric_limits<double>::min());
    worst = std::max(worst, norm2(d) / scale);
  }
  return worst;
}

FormField ym_rhs(const FormField& A) {
  FormField r = cov_d_star(A, curvature(A));
  r *= -1.0;
  return r;
}

FormField ym_step(const FormField& A, double dt, std::size_t step_index) {
  if (A.degree() != 1) throw Error(ErrorCode::InvalidDegree, "ym_step needs a connection 1-form");
  if (!(dt > 0.0) || dt > rk4_stability_limit(A.grid()) * (1.0 + 1e-12))
    throw Error(ErrorCode::Configuration,
                "RK4 step dt = " + std::to_string(dt) + " exceeds the stability bound h^2/6 = " +
                    std::to_string(rk4_stability_limit(A.grid())));
  const FormField k1 = ym_rhs(A);
  FormField y = A;
  y.axpy(0.5 * dt, k1);
  const FormField k2 = ym_rhs(y);
  y = A;
  y.axpy(0.5 * dt, k2);
  const FormField k3 = ym_rhs(y);
  y = A;
  y.axpy(dt, k3);
  const FormField k4 = ym_rhs(y);
  FormField out = A;
  out.axpy(dt / 6.0, k1);
  out.axpy(dt / 3.0, k2);
  out.axpy(dt / 3.0, k3);
  out.axpy(dt / 6.0, k4);
  if (!out.is_finite())
    throw Error(ErrorCode::Divergence, "non-finite value in YM step", step_index);
  return out;
}

FlowTrajectory ym_flow(const FormField& A0, const TimeGrid& tg, const FlowOptions& opt) {
  if (!A0.is_finite()) throw Error(ErrorCode::InvalidInput, "initial connection is not finite");
  FlowTrajectory traj{tg, {}, {}, Quadrature::PowerWeightedTrapezoid, {}};
  traj.A.reserve(tg.size());
  traj.B.reserve(tg.size());
  traj.A.push_back(A0);
  traj.B.push_back(curvature(A0));
  double prev = norm2(traj.B.back());
  for (std::size_t n = 0; n + 1 < tg.size(); ++n) {
    const int m = substep_count(A0.grid(), tg[n], tg[n + 1], opt.cfl_safety, opt.refine);
    const double dt = (tg[n + 1] - tg[n]) / m;
    FormField A = traj.A.back();
    try {
      for (int s = 0; s < m; ++s) A = ym_step(A, dt, n + 1);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Divergence)
        throw Error(ErrorCode::Divergence, "YM flow diverged before node " + std::to_string(n + 1),
                    n + 1);
      throw;
    }
    FormField B = curvature(A);
    const double cur = norm2(B);
    if (cur > prev + opt.monotone_tolerance * prev) {
      if (opt.enforce_monotone)
        throw Error(ErrorCode::Divergence,
                    "||B|| increased at node " + std::to_string(n + 1) +
                        "; integrator failure, reduce cfl_safety",
                    n + 1);
      traj.monotone_violations.push_back(n + 1);
    }
    prev = cur;
    traj.A.push_back(std::move(A));
    traj.B.push_back(std::move(B));
  }
  return traj;
}

namespace {

void require_action_exponent(double a) {
  if (!(a >= 0.5 && a < 1.0)) throw Error(ErrorCode::InvalidInput, "a must lie in [1/2, 1)");
}

std::vector<double> energy_series(const FlowTrajectory& traj) {
  std::vector<double> e(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double b = norm2(traj.B[i]);
    e[i] = b * b;
  }
  return e;
}

}  // namespace

std::vector<double> action_rho_series(const FlowTrajectory& traj, double a) {
  require_action_exponent(a);
  if (traj.size() == 0) throw Error(ErrorCode::InvalidInput, "empty trajectory");
  const auto e = energy_series(traj);
  auto r = power_trapezoid_cumulative(traj.times.nodes(), e, a);
  for (double& v : r) v *= 0.5;
  return r;
}

double action_rho(const FlowTrajectory& traj, double a) {
  return action_rho_series(traj, a).back();
}

std::vector<HeatFlowRow> heat_flow_series(const FlowTrajectory& traj, double a) {
  const auto rho = action_rho_series(traj, a);
  std::vector<HeatFlowRow> rows;
  rows.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const FormField& B = traj.B[i];
    const double t = traj.times[i];
    const double b2 = norm2(B);
    const FormField Adot = cov_d_star(traj.A[i], B);
    rows.push_back({t, b2, lp_norm(B, 3.0), lp_norm(B, 6.0),
                    lp_norm(B, std::numeric_limits<double>::infinity()), rho[i], norm2(Adot),
                    std::pow(t, 1.0 - a) * b2 * b2});
  }
  return rows;
}

}  // namespace ymlab
