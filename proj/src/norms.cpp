#include "ymlab/norms.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ymlab/calculus.hpp"
#include "ymlab/error.hpp"
#include "ymlab/parallel.hpp"
#include "ymlab/spectral.hpp"

namespace ymlab {

double lp_norm(const FormField& f, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidInput, "lp_norm needs p >= 1");
  const std::size_t N = f.sites();
  std::vector<double> sq(N, 0.0);
  const auto d = f.data();
  const std::size_t channels = d.size() / N;
  for (std::size_t ch = 0; ch < channels; ++ch)
    for (std::size_t i = 0; i < N; ++i) sq[i] += d[ch * N + i] * d[ch * N + i];
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : sq) m = std::max(m, v);
    return std::sqrt(m);
  }
  if (p == 2.0) return std::sqrt(f.grid().cell_volume() * pairwise_sum(sq));
  for (double& v : sq) v = std::pow(v, 0.5 * p);
  return std::pow(f.grid().cell_volume() * pairwise_sum(sq), 1.0 / p);
}

double covariant_gradient_sq(const FormField& f, const FormField& A) {
  std::vector<double> partial;
  for (int j = 0; j < 3; ++j)
    for (const auto& s : covariant_partial(A, f, j)) {
      std::vector<double> sq(s.v.size());
      for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = s.v[i] * s.v[i];
      partial.push_back(pairwise_sum(sq));
    }
  return f.grid().cell_volume() * pairwise_sum(partial);
}

double h1A_norm(const FormField& f, const FormField& A) {
  const double l2 = norm2(f);
  return std::sqrt(covariant_gradient_sq(f, A) + l2 * l2);
}

namespace {

bool is_zero(const FormField& f) {
  for (double v : f.data())
    if (v != 0.0) return false;
  return true;
}

double lanczos_fractional(const FormField& f, const FormField& A, double b,
                          const LanczosOptions& opt) {
  const double fnorm = norm2(f);
  if (fnorm == 0.0) return 0.0;
  auto apply = [&](const FormField& v) {
    FormField r = v;
    r -= bochner_laplacian(A, v);
    return r;
  };
  std::vector<FormField> basis;
  std::vector<double> alpha, beta;
  FormField v = f;
  v *= 1.0 / fnorm;
  double previous = std::numeric_limits<double>::quiet_NaN();
  double estimate = fnorm * fnorm;
  for (int k = 0; k < opt.max_nodes; ++k) {
    basis.push_back(v);
    FormField w = apply(v);
    const double a = inner(w, v);
    alpha.push_back(a);
    w.axpy(-a, v);
    if (k > 0) w.axpy(-beta.back(), basis[k - 1]);
    for (const auto& q : basis) w.axpy(-inner(w, q), q);  // full reorthogonalisation

    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) T(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    double q = 0.0;
    for (int i = 0; i < m; ++i) {
      const double tau = es.eigenvectors()(0, i);
      q += tau * tau * std::pow(std::max(es.eigenvalues()(i), 1.0), b);
    }
    estimate = fnorm * fnorm * q;
    const double bn = norm2(w);
    if (std::isfinite(previous) && std::abs(estimate - previous) <= opt.tolerance * estimate) break;
    if (bn <= 1e-14 * std::abs(a)) break;  // invariant subspace reached
    previous = estimate;
    beta.push_back(bn);
    v = std::move(w);
    v *= 1.0 / bn;
  }
  return std::sqrt(estimate);
}

}  // namespace

double h_b_norm(const FormField& f, const SobolevSpec& spec, const LanczosOptions& opt) {
  if (!(spec.b >= 0.0 && spec.b <= 1.0))
    throw Error(ErrorCode::InvalidInput, "Sobolev index b must lie in [0,1]");
  if (spec.b == 0.0) return lp_norm(f, 2.0);
  if (!spec.reference_connection || is_zero(*spec.reference_connection)) {
    const double b = spec.b;
    return spectral_norm(f, [b](double lam) { return std::pow(1.0 + lam, b); });
  }
  const FormField& A = *spec.reference_connection;
  if (A.degree() != 1) throw Error(ErrorCode::InvalidDegree, "reference connection must be a 1-form");
  return lanczos_fractional(f, A, spec.b, opt);
}

}  // namespace ymlab
