#include "ymlab/semigroup.hpp"

#include <cmath>
#include <string>

#include "ymlab/calculus.hpp"
#include "ymlab/error.hpp"
#include "ymlab/variational.hpp"

namespace ymlab {

CgResult conjugate_gradient(const std::function<FormField(const FormField&)>& apply,
                            const FormField& rhs, FormField& x, double tol, int max_iter) {
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) {
    x.fill(0.0);
    return {};
  }
  FormField r = rhs;
  r -= apply(x);
  FormField p = r;
  double rr = inner(r, r);
  for (int it = 0; it < max_iter; ++it) {
    const double rel = std::sqrt(rr) / bnorm;
    if (rel <= tol) return {it, rel};
    const FormField Ap = apply(p);
    const double alpha = rr / inner(p, Ap);
    x.axpy(alpha, p);
    r.axpy(-alpha, Ap);
    const double rr_new = inner(r, r);
    p *= rr_new / rr;
    p += r;
    rr = rr_new;
  }
  const double rel = std::sqrt(rr) / bnorm;
  if (rel <= tol) return {max_iter, rel};
  throw Error(ErrorCode::Numeric, "CG did not converge in " + std::to_string(max_iter) +
                                      " iterations (residual " + std::to_string(rel) + ")");
}

FormField apply_semigroup(const FormField& A_bar, double t, const FormField& f, int m) {
  if (t < 0.0) throw Error(ErrorCode::InvalidInput, "semigroup time must be >= 0");
  if (m < 1) throw Error(ErrorCode::InvalidInput, "semigroup needs m >= 1 substeps");
  if (t == 0.0) return f;
  const double tau = t / m;
  auto op = [&](const FormField& u) {
    FormField out = u;
    out.axpy(-tau, bochner_laplacian(A_bar, u));
    return out;
  };
  const int max_iter = 10 * f.grid().n();
  FormField u = f;
  for (int s = 0; s < m; ++s) {
    FormField x = u;
    conjugate_gradient(op, u, x, 1e-10, max_iter);
    u = std::move(x);
  }
  return u;
}

std::vector<double> PicardResult::ratios() const {
  std::vector<double> r;
  for (std::size_t k = 1; k < corrections.size(); ++k)
    r.push_back(corrections[k - 1] > 0.0 ? corrections[k] / corrections[k - 1] : 0.0);
  return r;
}

PicardResult solve_mild_picard(const FormField& w0, const FlowTrajectory& traj, int n_iter,
                               const PicardOptions& opt) {
  if (n_iter < 1) throw Error(ErrorCode::InvalidInput, "n_iter must be >= 1");
  const auto& t = traj.times;
  const std::size_t N = traj.size();
  if (N < 2) throw Error(ErrorCode::InvalidInput, "trajectory needs >= 2 nodes");
  const double dt = t[1] - t[0];
  for (std::size_t n = 1; n < N; ++n)
    if (std::abs((t[n] - t[n - 1]) - dt) > 1e-9 * dt)
      throw Error(ErrorCode::InvalidInput, "Picard iteration needs uniform time nodes");
  PicardResult res{{}, {}, traj.A.back()};
  const FormField& Abar = res.A_bar;
  auto R = [&](const FormField& f) { return apply_semigroup(Abar, dt, f, opt.substeps); };

  std::vector<FormField> alpha;
  alpha.reserve(N);
  for (std::size_t n = 0; n < N; ++n) alpha.push_back(traj.A[n] - Abar);

  std::vector<FormField> free;
  free.reserve(N);
  free.push_back(w0);
  for (std::size_t n = 1; n < N; ++n) free.push_back(R(free.back()));
  res.iterates.push_back(free);

  int bad = 0;
  for (int k = 0; k < n_iter; ++k) {
    const auto& prev = res.iterates.back();
    std::vector<FormField> F;
    F.reserve(N);
    for (std::size_t n = 0; n < N; ++n)
      F.push_back(operator_K(prev[n], alpha[n], Abar, traj.B[n]));
    std::vector<FormField> next;
    next.reserve(N);
    next.push_back(w0);
    FormField S = w0.zeros_like();
    double corr = 0.0, scale = 0.0;
    for (std::size_t n = 1; n < N; ++n) {
      FormField arg = S;
      arg.axpy(n == 1 ? 0.5 * dt : dt, F[n - 1]);
      S = R(arg);
      FormField wn = free[n];
      wn += S;
      wn.axpy(0.5 * dt, F[n]);
      if (!wn.is_finite())
        throw Error(ErrorCode::Divergence, "Picard iterate diverged", n);
      corr = std::max(corr, norm2(wn - prev[n]));
      scale = std::max(scale, norm2(wn));
      next.push_back(std::move(wn));
    }
    res.iterates.push_back(std::move(next));
    res.corrections.push_back(corr);
    const std::size_t c = res.corrections.size();
    if (c >= 2 && res.corrections[c - 1] >= res.corrections[c - 2]) {
      if (++bad >= 3)
        throw Error(ErrorCode::HorizonTooLong,
                    "Picard corrections did not contract for 3 consecutive iterations");
    } else {
      bad = 0;
    }
    if (corr <= opt.tolerance * scale) break;
  }
  return res;
}

PicardHorizon choose_picard_horizon(const FormField& A0, const FormField& w0, double T0,
                                    int nodes, int n_iter, const PicardOptions& opt,
                                    const FlowOptions& flow, int max_halvings) {
  double T = T0;
  for (int h = 0; h <= max_halvings; ++h, T *= 0.5) {
    FlowTrajectory traj = ym_flow(A0, TimeGrid::clustered(T, nodes, 1.0), flow);
    try {
      PicardResult r = solve_mild_picard(w0, traj, n_iter, opt);
      const auto q = r.ratios();
      bool contracting = true;
      for (double v : q)
        if (v >= 1.0) contracting = false;
      if (contracting) return {T, std::move(traj), std::move(r)};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::HorizonTooLong) throw;
    }
  }
  throw Error(ErrorCode::HorizonTooLong, "no contracting Picard horizon found");
}

}  // namespace ymlab
