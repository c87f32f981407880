#include "ymlab/variational.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ymlab/calculus.hpp"
#include "ymlab/error.hpp"
#include "ymlab/norms.hpp"
#include "ymlab/quadrature.hpp"

namespace ymlab {

namespace {

void require_consistent_curvature(const FormField& A, const FormField& B) {
  FormField d = curvature(A);
  d -= B;
  const double scale = std::max(norm2(B), 1.0);
  if (norm2(d) > 1e-12 * scale)
    throw Error(ErrorCode::InconsistentState, "B does not match curvature(A)");
}

double sq(double x) { return x * x; }

FormField rhs_unchecked(const FormField& w, const FormField& A, const FormField& B, RhsForm form) {
  FormField out = form == RhsForm::Hodge ? hodge_laplacian(A, w) : bochner_laplacian(A, w);
  out.axpy(form == RhsForm::Hodge ? -1.0 : -2.0, interior_comm(w, B));
  return out;
}

// Integrands of the three energy identities at one (w, A, A') point.
struct BalanceRates {
  double r0 = 0.0, r1 = 0.0, r2 = 0.0;
};

struct StageEval {
  FormField k;
  BalanceRates rates;
};

StageEval evaluate_stage(const FormField& w, const FormField& A, const FormField& Adot,
                         RhsForm form, bool balances) {
  const FormField B = curvature(A);
  StageEval out{rhs_unchecked(w, A, B, form), {}};
  if (!balances) return out;
  const FormField& wd = out.k;
  const FormField dw = cov_d(A, w);
  const FormField dsw = cov_d_star(A, w);
  const FormField g = interior_comm(w, B);
  // order 0: 2(||d_A w||^2 + ||d_A^* w||^2) + 2 (B, [w ^ w])
  out.rates.r0 = 2.0 * (sq(norm2(dw)) + sq(norm2(dsw))) + 2.0 * inner(B, wedge_comm(w, w));
  // order 1
  FormField Lw = cov_d_star(A, dw);
  Lw += cov_d(A, dsw);
  Lw *= -1.0;
  const FormField aw = wedge_comm(Adot, w);
  const FormField aiw = interior_comm(Adot, w);
  out.rates.r1 = sq(norm2(wd)) + sq(norm2(Lw)) - 2.0 * (inner(aw, dw) + inner(aiw, dsw)) -
                 sq(norm2(g));
  // order 2
  const FormField dwd = cov_d(A, wd);
  const FormField dswd = cov_d_star(A, wd);
  FormField mixed = interior_comm(Adot, dw);
  mixed += wedge_comm(Adot, dsw);
  FormField gdot = interior_comm(wd, B);
  gdot += interior_comm(w, cov_d(A, Adot));
  out.rates.r2 = 2.0 * (sq(norm2(dwd)) + sq(norm2(dswd))) +
                 2.0 * (inner(aw, dwd) + inner(aiw, dswd) + inner(mixed, wd) + inner(gdot, wd));
  return out;
}

double order1_energy(const FormField& w, const FormField& A) {
  return sq(norm2(cov_d(A, w))) + sq(norm2(cov_d_star(A, w)));
}

}  // namespace

FormField augmented_rhs(const FormField& w, const FormField& A, const FormField& B) {
  require_consistent_curvature(A, B);
  return rhs_unchecked(w, A, B, RhsForm::Bochner);
}

FormField augmented_rhs_hodge(const FormField& w, const FormField& A, const FormField& B) {
  require_consistent_curvature(A, B);
  return rhs_unchecked(w, A, B, RhsForm::Hodge);
}

FormField augmented_rhs(const FormField& w, const FormField& A, const FormField& B,
                        RhsForm form) {
  return form == RhsForm::Hodge ? augmented_rhs_hodge(w, A, B) : augmented_rhs(w, A, B);
}

FormField AugmentedSolution::eta_from_zero(std::size_t n) const {
  if (n == 0) return sliver.zeros_like();
  FormField e = states[n].eta;
  e += sliver;
  return e;
}

AugmentedSolution solve_augmented(const FormField& w0, const FlowTrajectory& traj,
                                  const AugmentedOptions& opt) {
  if (w0.degree() != 1) throw Error(ErrorCode::InvalidDegree, "w0 must be a 1-form");
  if (!w0.is_finite()) throw Error(ErrorCode::InvalidInput, "w0 is not finite");
  if (traj.size() < 2) throw Error(ErrorCode::InvalidInput, "trajectory needs >= 2 nodes");
  w0.require_same_shape(traj.A.front(), "solve_augmented");
  const Grid& grid = w0.grid();
  const auto& t = traj.times;
  if (!(opt.b >= 0.0 && opt.b < 1.0)) throw Error(ErrorCode::InvalidInput, "b must lie in [0, 1)");
  AugmentedSolution sol{{}, FormField(grid, w0.group(), 0), {}};
  sol.states.reserve(traj.size());
  sol.states.push_back({w0, 0.0, cov_d_star(traj.A[0], w0), FormField(grid, w0.group(), 0)});

  auto& bal = sol.balances;
  double q0 = 0.0, q1 = 0.0, q2 = 0.0;
  double e0 = 0.0, f0 = 0.0, wd0 = 0.0;
  if (opt.track_balances) {
    e0 = sq(norm2(w0));
    f0 = order1_energy(w0, traj.A[0]);
    wd0 = sq(norm2(rhs_unchecked(w0, traj.A[0], traj.B[0], opt.form)));
    bal.order0.push_back(0.0);
    bal.order1.push_back(0.0);
    bal.order2.push_back(0.0);
    bal.scale0.push_back(e0);
    bal.scale1.push_back(f0);
    bal.scale2.push_back(wd0);
  }

  FormField w = w0;
  for (std::size_t n = 0; n + 1 < traj.size(); ++n) {
    const int m = substep_count(grid, t[n], t[n + 1], opt.cfl_safety, opt.refine);
    const double dt = (t[n + 1] - t[n]) / m;
    const FormField Adot = traj.A_slope(n);
    for (int s = 0; s < m; ++s) {
      const double ts = t[n] + s * dt;
      const FormField Am = traj.A_at(n, ts + 0.5 * dt);
      const auto k1 = evaluate_stage(w, traj.A_at(n, ts), Adot, opt.form, opt.track_balances);
      FormField y = w;
      y.axpy(0.5 * dt, k1.k);
      const auto k2 = evaluate_stage(y, Am, Adot, opt.form, opt.track_balances);
      y = w;
      y.axpy(0.5 * dt, k2.k);
      const auto k3 = evaluate_stage(y, Am, Adot, opt.form, opt.track_balances);
      y = w;
      y.axpy(dt, k3.k);
      const auto k4 = evaluate_stage(y, traj.A_at(n, ts + dt), Adot, opt.form,
                                     opt.track_balances);
      w.axpy(dt / 6.0, k1.k);
      w.axpy(dt / 3.0, k2.k);
      w.axpy(dt / 3.0, k3.k);
      w.axpy(dt / 6.0, k4.k);
      if (opt.track_balances) {
        auto rk = [dt](double a, double b, double c, double d) {
          return dt / 6.0 * (a + 2.0 * b + 2.0 * c + d);
        };
        q0 += rk(k1.rates.r0, k2.rates.r0, k3.rates.r0, k4.rates.r0);
        q1 += rk(k1.rates.r1, k2.rates.r1, k3.rates.r1, k4.rates.r1);
        q2 += rk(k1.rates.r2, k2.rates.r2, k3.rates.r2, k4.rates.r2);
      }
    }
    if (!w.is_finite())
      throw Error(ErrorCode::Divergence,
                  "augmented solve diverged before node " + std::to_string(n + 1), n + 1);
    const FormField& An = traj.A[n + 1];
    VariationalState st{w, t[n + 1], cov_d_star(An, w), FormField(grid, w0.group(), 0)};
    if (n + 1 >= 2) {
      st.eta = sol.states[n].eta;
      const double half = 0.5 * (t[n + 1] - t[n]);
      st.eta.axpy(half, sol.states[n].psi);
      st.eta.axpy(half, st.psi);
    }
    sol.states.push_back(std::move(st));
    if (opt.track_balances) {
      const double e = sq(norm2(w));
      const double f = order1_energy(w, An);
      const double wd = sq(norm2(rhs_unchecked(w, An, traj.B[n + 1], opt.form)));
      bal.order0.push_back(e - e0 + q0);
      bal.order1.push_back(f - f0 + q1);
      bal.order2.push_back(wd - wd0 + q2);
      bal.scale0.push_back(std::max(e0, e) + std::abs(q0));
      bal.scale1.push_back(std::max(f0, f) + std::abs(q1));
      bal.scale2.push_back(std::max(wd0, wd) + std::abs(q2));
    }
  }
  sol.sliver = sol.states[1].psi;
  sol.sliver *= t[1] * 2.0 / (opt.b + 1.0);
  return sol;
}

std::vector<FormField> recover_v(const AugmentedSolution& sol, const FlowTrajectory& traj,
                                 const RecoveryConfig& cfg) {
  if (cfg.tau < 0.0) throw Error(ErrorCode::InvalidInput, "tau must be >= 0");
  if ((cfg.tau == 0.0) != (cfg.mode == RecoveryMode::AlmostStrong))
    throw Error(ErrorCode::InvalidInput, "recovery mode inconsistent with tau");
  if (sol.size() != traj.size())
    throw Error(ErrorCode::InvalidInput, "states do not cover the trajectory");
  std::size_t k = 0;
  if (cfg.tau > 0.0) {
    const auto idx = traj.times.find(cfg.tau);
    if (!idx) throw Error(ErrorCode::InvalidInput, "tau is not a node of the time grid");
    k = *idx;
  }
  const FormField eta_tau = sol.eta_from_zero(k);
  std::vector<FormField> v;
  v.reserve(sol.size());
  for (std::size_t n = 0; n < sol.size(); ++n) {
    FormField eta = sol.eta_from_zero(n);
    eta -= eta_tau;
    FormField vn = sol.states[n].w;
    vn += cov_d(traj.A[n], eta);
    v.push_back(std::move(vn));
  }
  return v;
}

std::vector<FormField> vertical_solution(const FormField& alpha, const FlowTrajectory& traj) {
  if (alpha.degree() != 0) throw Error(ErrorCode::InvalidDegree, "alpha must be a 0-form");
  std::vector<FormField> z;
  z.reserve(traj.size());
  for (const auto& A : traj.A) z.push_back(cov_d(A, alpha));
  return z;
}

FormField variational_rhs(const FormField& v, const FormField& A, const FormField& B) {
  FormField out = cov_d_star(A, cov_d(A, v));
  out += interior_comm(v, B);
  out *= -1.0;
  return out;
}

FormField direct_variational_step(const FormField& v, const FormField& A, const FormField& B,
                                  double dt) {
  const FormField k1 = variational_rhs(v, A, B);
  FormField y = v;
  y.axpy(0.5 * dt, k1);
  const FormField k2 = variational_rhs(y, A, B);
  y = v;
  y.axpy(0.5 * dt, k2);
  const FormField k3 = variational_rhs(y, A, B);
  y = v;
  y.axpy(dt, k3);
  const FormField k4 = variational_rhs(y, A, B);
  FormField out = v;
  out.axpy(dt / 6.0, k1);
  out.axpy(dt / 3.0, k2);
  out.axpy(dt / 3.0, k3);
  out.axpy(dt / 6.0, k4);
  if (!out.is_finite()) throw Error(ErrorCode::Divergence, "direct variational step diverged");
  return out;
}

std::vector<FormField> solve_direct_variational(const FormField& v0, const FlowTrajectory& traj,
                                                const DirectOptions& opt) {
  if (v0.degree() != 1) throw Error(ErrorCode::InvalidDegree, "v0 must be a 1-form");
  const Grid& grid = v0.grid();
  const auto& t = traj.times;
  std::vector<FormField> out;
  out.reserve(traj.size());
  out.push_back(v0);
  FormField v = v0;
  for (std::size_t n = 0; n + 1 < traj.size(); ++n) {
    const int m = substep_count(grid, t[n], t[n + 1], opt.cfl_safety, opt.refine);
    const double dt = (t[n + 1] - t[n]) / m;
    for (int s = 0; s < m; ++s) {
      const double ts = t[n] + s * dt;
      const FormField A0 = traj.A_at(n, ts);
      const FormField Am = traj.A_at(n, ts + 0.5 * dt);
      const FormField A1 = traj.A_at(n, ts + dt);
      const FormField Bm = curvature(Am);
      const FormField k1 = variational_rhs(v, A0, curvature(A0));
      FormField y = v;
      y.axpy(0.5 * dt, k1);
      const FormField k2 = variational_rhs(y, Am, Bm);
      y = v;
      y.axpy(0.5 * dt, k2);
      const FormField k3 = variational_rhs(y, Am, Bm);
      y = v;
      y.axpy(dt, k3);
      const FormField k4 = variational_rhs(y, A1, curvature(A1));
      v.axpy(dt / 6.0, k1);
      v.axpy(dt / 3.0, k2);
      v.axpy(dt / 3.0, k3);
      v.axpy(dt / 6.0, k4);
    }
    if (!v.is_finite())
      throw Error(ErrorCode::Divergence,
                  "direct variational solve diverged before node " + std::to_string(n + 1), n + 1);
    out.push_back(v);
  }
  return out;
}

std::vector<double> b_action_series(const AugmentedSolution& sol, const FlowTrajectory& traj,
                                    double b) {
  if (!(b >= 0.0 && b < 1.0)) throw Error(ErrorCode::InvalidInput, "b must lie in [0, 1)");
  std::vector<double> f(sol.size());
  for (std::size_t n = 0; n < sol.size(); ++n) f[n] = sq(h1A_norm(sol.states[n].w, traj.A[n]));
  return power_trapezoid_cumulative(traj.times.nodes(), f, b);
}

double b_action(const AugmentedSolution& sol, const FlowTrajectory& traj, double b) {
  return b_action_series(sol, traj, b).back();
}

std::vector<InitialBehaviorRow> initial_behavior_monitor(const AugmentedSolution& sol,
                                                         const FlowTrajectory& traj, double b,
                                                         RhsForm form) {
  if (!(b >= 0.0 && b < 1.0)) throw Error(ErrorCode::InvalidInput, "b must lie in [0, 1)");
  const std::size_t N = sol.size();
  std::vector<double> energy(N), rate(N);
  for (std::size_t n = 0; n < N; ++n) {
    const FormField& w = sol.states[n].w;
    const FormField& A = traj.A[n];
    energy[n] = order1_energy(w, A);
    rate[n] = sq(norm2(rhs_unchecked(w, A, traj.B[n], form))) + sq(norm2(hodge_laplacian(A, w)));
  }
  const auto integral = power_trapezoid_cumulative(traj.times.nodes(), rate, b - 1.0);
  std::vector<InitialBehaviorRow> rows(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double tn = traj.times[n];
    rows[n] = {tn, std::pow(tn, 1.0 - b) * energy[n], integral[n]};
  }
  return rows;
}

namespace {

using detail::Staggered;

// out_I += coef * [avg_{e_j -> I} a_j, x_I] for a 1-form a, any form x.
void bracket_component(const FormField& a, int j, const Staggered& x, Staggered& out,
                       double coef) {
  const Grid& g = a.grid();
  const Staggered aj = detail::move_to(g, detail::take(a, j), x.mask);
  detail::bracket_acc(a.group(), g.sites(), aj.v, x.v, out.v, coef);
}

}  // namespace

FormField mult_operator_M(const FormField& w, const FormField& alpha, const FormField& A_bar,
                          const FormField& B) {
  if (alpha.degree() != 1 || A_bar.degree() != 1)
    throw Error(ErrorCode::InvalidDegree, "alpha and A_bar must be 1-forms");
  FormField out = w.zeros_like();
  out.axpy(-2.0, interior_comm(w, B));
  if (w.group().structure().empty()) return out;
  const Grid& g = w.grid();
  const std::size_t N = g.sites();
  FormField div = cov_d_star(A_bar, alpha);
  div *= -1.0;
  for (int c = 0; c < w.components(); ++c) {
    const Staggered wc = detail::take(w, c);
    Staggered acc(wc.mask, wc.dim, N);
    for (int j = 0; j < 3; ++j) {
      Staggered inner_br(wc.mask, wc.dim, N);
      bracket_component(alpha, j, wc, inner_br, 1.0);
      bracket_component(alpha, j, inner_br, acc, 1.0);
    }
    const Staggered dv = detail::move_to(g, detail::take(div, 0), wc.mask);
    detail::bracket_acc(w.group(), N, dv.v, wc.v, acc.v, 1.0);
    detail::add_into(out, c, acc);
  }
  return out;
}

FormField operator_K(const FormField& w, const FormField& alpha, const FormField& A_bar,
                     const FormField& B) {
  FormField out = mult_operator_M(w, alpha, A_bar, B);
  if (w.group().structure().empty()) return out;
  const Grid& g = w.grid();
  const std::size_t N = g.sites();
  for (int j = 0; j < 3; ++j) {
    const auto dj = covariant_partial(A_bar, w, j);
    for (int c = 0; c < w.components(); ++c) {
      const Staggered centred = detail::move_to(g, dj[c], w.mask(c));
      Staggered acc(w.mask(c), w.dim(), N);
      bracket_component(alpha, j, centred, acc, 2.0);
      detail::add_into(out, c, acc);
    }
  }
  return out;
}

}  // namespace ymlab
