#include "ymlab/calculus.hpp"

#include <bit>
#include <string>

#include "ymlab/error.hpp"

namespace ymlab {

namespace detail {

Staggered take(const FormField& f, int c) {
  Staggered s(f.mask(c), f.dim(), f.sites());
  const auto src = f.component(c);
  std::copy(src.begin(), src.end(), s.v.begin());
  return s;
}

void add_into(FormField& f, int c, const Staggered& s, double coef) {
  auto dst = f.component(c);
  const std::size_t len = dst.size();
  const double* src = s.v.data();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < len; ++i) dst[i] += coef * src[i];
}

Staggered move_to(const Grid& g, const Staggered& s, unsigned to_mask) {
  Staggered cur = s;
  const std::size_t N = g.sites();
  for (int axis = 0; axis < 3; ++axis) {
    const unsigned bit = 1u << axis;
    if ((cur.mask & bit) == (to_mask & bit)) continue;
    Staggered next(cur.mask ^ bit, cur.dim, N);
    for (int a = 0; a < cur.dim; ++a)
      stencil::average(g, cur.channel(a, N), next.channel(a, N), axis, (cur.mask >> axis) & 1u);
    cur = std::move(next);
  }
  return cur;
}

Staggered diff(const Grid& g, const Staggered& s, int axis) {
  const std::size_t N = g.sites();
  Staggered out(s.mask ^ (1u << axis), s.dim, N);
  for (int a = 0; a < s.dim; ++a)
    stencil::diff(g, s.channel(a, N), out.channel(a, N), axis, (s.mask >> axis) & 1u);
  return out;
}

void bracket_acc(const GroupSpec& grp, std::size_t sites, std::span<const double> x,
                 std::span<const double> y, std::span<double> out, double coef) {
  for (const auto& sc : grp.structure()) {
    const double* xa = x.data() + sc.a * sites;
    const double* yb = y.data() + sc.b * sites;
    double* oc = out.data() + sc.c * sites;
    const double f = coef * sc.f;
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < sites; ++i) oc[i] += f * xa[i] * yb[i];
  }
}

Staggered bracket(const GroupSpec& grp, std::size_t sites, const Staggered& x,
                  const Staggered& y) {
  Staggered out(x.mask, x.dim, sites);
  bracket_acc(grp, sites, x.v, y.v, out.v, 1.0);
  return out;
}

void axpy(Staggered& s, double coef, const Staggered& o) {
  for (std::size_t i = 0; i < s.v.size(); ++i) s.v[i] += coef * o.v[i];
}

}  // namespace detail

using detail::Staggered;

namespace {

void require_degree(const FormField& f, int degree, const char* what) {
  if (f.degree() != degree)
    throw Error(ErrorCode::InvalidDegree, std::string(what) + " expects a " +
                                              std::to_string(degree) + "-form");
}

void require_compatible(const FormField& a, const FormField& b, const char* what) {
  if (a.grid() != b.grid() || &a.group() != &b.group())
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": grid or group mismatch");
}

bool abelian(const FormField& f) { return f.group().structure().empty(); }

}  // namespace

FormField zero_connection(const Grid& g, const GroupSpec& grp) { return FormField(g, grp, 1); }

FormField ext_d(const FormField& f) {
  if (f.degree() >= 3) throw Error(ErrorCode::InvalidDegree, "ext_d of a 3-form");
  FormField out(f.grid(), f.group(), f.degree() + 1);
  for (int k = 0; k < out.components(); ++k) {
    const unsigned K = out.mask(k);
    for (int j = 0; j < 3; ++j) {
      if (!(K & (1u << j))) continue;
      const unsigned I = K & ~(1u << j);
      const int ci = f.component_of(I);
      const double sign = wedge_sign(1u << j, I);
      for (int a = 0; a < f.dim(); ++a)
        stencil::diff(f.grid(), f.channel(ci, a), out.channel(k, a), j, 0u, sign, true);
    }
  }
  return out;
}

FormField coext_d(const FormField& f) {
  if (f.degree() <= 0) throw Error(ErrorCode::InvalidDegree, "coext_d of a 0-form");
  FormField out(f.grid(), f.group(), f.degree() - 1);
  for (int i = 0; i < out.components(); ++i) {
    const unsigned I = out.mask(i);
    for (int j = 0; j < 3; ++j) {
      if (I & (1u << j)) continue;
      const int ck = f.component_of(I | (1u << j));
      const double sign = wedge_sign(1u << j, I);
      for (int a = 0; a < f.dim(); ++a)
        stencil::diff(f.grid(), f.channel(ck, a), out.channel(i, a), j, 1u, -sign, true);
    }
  }
  return out;
}

FormField wedge_comm(const FormField& u, const FormField& v) {
  require_compatible(u, v, "wedge_comm");
  const int deg = u.degree() + v.degree();
  if (deg > 3) throw Error(ErrorCode::InvalidDegree, "wedge_comm degree exceeds 3");
  FormField out(u.grid(), u.group(), deg);
  if (abelian(u)) return out;
  const Grid& g = u.grid();
  const std::size_t N = g.sites();
  for (int ci = 0; ci < u.components(); ++ci) {
    const unsigned I = u.mask(ci);
    for (int cj = 0; cj < v.components(); ++cj) {
      const unsigned J = v.mask(cj);
      if (I & J) continue;
      const unsigned K = I | J;
      const Staggered ua = detail::move_to(g, detail::take(u, ci), K);
      const Staggered va = detail::move_to(g, detail::take(v, cj), K);
      detail::bracket_acc(u.group(), N, ua.v, va.v, out.component(out.component_of(K)),
                          wedge_sign(I, J));
    }
  }
  return out;
}

FormField interior_comm(const FormField& u, const FormField& v) {
  require_compatible(u, v, "interior_comm");
  const int r = v.degree() - u.degree();
  if (r < 0) throw Error(ErrorCode::InvalidDegree, "interior_comm needs deg v >= deg u");
  FormField out(u.grid(), u.group(), r);
  if (abelian(u)) return out;
  const Grid& g = u.grid();
  const std::size_t N = g.sites();
  // <[a, b], c> = -<b, [a, c]> turns the transpose of w -> [u ^ w] into
  // -sum sign(I,J) avg_{K->J} [avg_{I->K} u_I, v_K].
  for (int cj = 0; cj < out.components(); ++cj) {
    const unsigned J = out.mask(cj);
    for (int ci = 0; ci < u.components(); ++ci) {
      const unsigned I = u.mask(ci);
      if (I & J) continue;
      const unsigned K = I | J;
      const Staggered ua = detail::move_to(g, detail::take(u, ci), K);
      Staggered t(K, u.dim(), N);
      detail::bracket_acc(u.group(), N, ua.v, v.component(v.component_of(K)), t.v, 1.0);
      detail::add_into(out, cj, detail::move_to(g, t, J), -wedge_sign(I, J));
    }
  }
  return out;
}

FormField cov_d(const FormField& A, const FormField& u) {
  require_degree(A, 1, "cov_d connection");
  FormField out = ext_d(u);
  require_compatible(A, u, "cov_d");
  if (!abelian(A)) out += wedge_comm(A, u);
  return out;
}

FormField cov_d_star(const FormField& A, const FormField& u) {
  require_degree(A, 1, "cov_d_star connection");
  FormField out = coext_d(u);
  require_compatible(A, u, "cov_d_star");
  if (!abelian(A)) out += interior_comm(A, u);
  return out;
}

FormField curvature(const FormField& A) {
  require_degree(A, 1, "curvature");
  FormField B = ext_d(A);
  if (!abelian(A)) B.axpy(0.5, wedge_comm(A, A));
  return B;
}

std::vector<Staggered> covariant_partial(const FormField& A, const FormField& u, int j) {
  require_degree(A, 1, "covariant_partial connection");
  require_compatible(A, u, "covariant_partial");
  const Grid& g = u.grid();
  const std::size_t N = g.sites();
  std::vector<Staggered> out;
  out.reserve(u.components());
  const Staggered Aj = detail::take(A, j);
  for (int c = 0; c < u.components(); ++c) {
    const Staggered uc = detail::take(u, c);
    Staggered r = detail::diff(g, uc, j);
    if (!abelian(A)) {
      const Staggered a = detail::move_to(g, Aj, r.mask);
      const Staggered um = detail::move_to(g, uc, r.mask);
      detail::bracket_acc(u.group(), N, a.v, um.v, r.v, 1.0);
    }
    out.push_back(std::move(r));
  }
  return out;
}

void covariant_partial_transpose_acc(const FormField& A, const std::vector<Staggered>& y, int j,
                                     FormField& out, double coef) {
  const Grid& g = out.grid();
  const std::size_t N = g.sites();
  const Staggered Aj = detail::take(A, j);
  for (int c = 0; c < out.components(); ++c) {
    const Staggered& yc = y[c];
    // diff^T = -diff in the opposite direction
    Staggered r = detail::diff(g, yc, j);
    for (double& x : r.v) x = -x;
    if (!abelian(A)) {
      const Staggered a = detail::move_to(g, Aj, yc.mask);
      Staggered t(yc.mask, yc.dim, N);
      detail::bracket_acc(out.group(), N, a.v, yc.v, t.v, 1.0);
      detail::axpy(r, -1.0, detail::move_to(g, t, out.mask(c)));
    }
    detail::add_into(out, c, r, coef);
  }
}

FormField bochner_laplacian(const FormField& A, const FormField& u) {
  FormField out = u.zeros_like();
  for (int j = 0; j < 3; ++j) {
    const auto z = covariant_partial(A, u, j);
    covariant_partial_transpose_acc(A, z, j, out, -1.0);
  }
  return out;
}

FormField hodge_laplacian(const FormField& A, const FormField& u) {
  FormField out = u.zeros_like();
  if (u.degree() < 3) out -= cov_d_star(A, cov_d(A, u));
  if (u.degree() > 0) out -= cov_d(A, cov_d_star(A, u));
  return out;
}

}  // namespace ymlab
