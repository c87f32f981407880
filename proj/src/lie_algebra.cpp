#include "ymlab/lie_algebra.hpp"

#include <algorithm>
#include <cmath>

#include "ymlab/error.hpp"
#include "ymlab/parallel.hpp"

namespace ymlab {

namespace {
constexpr Complex kI{0.0, 1.0};
}

std::string to_string(GroupName g) { return g == GroupName::U1 ? "U1" : "SU2"; }

GroupName parse_group(const std::string& s) {
  if (s == "U1") return GroupName::U1;
  if (s == "SU2") return GroupName::SU2;
  throw Error(ErrorCode::InvalidInput, "unknown group '" + s + "'");
}

SmallMatrix SmallMatrix::identity(int size) {
  SmallMatrix m;
  m.size = size;
  m(0, 0) = 1.0;
  m(1, 1) = size == 2 ? 1.0 : 0.0;
  return m;
}

SmallMatrix SmallMatrix::adjoint() const {
  SmallMatrix r;
  r.size = size;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

SmallMatrix SmallMatrix::operator*(const SmallMatrix& o) const {
  SmallMatrix r;
  r.size = size;
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < size; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

SmallMatrix SmallMatrix::operator+(const SmallMatrix& o) const {
  SmallMatrix r = *this;
  for (int i = 0; i < 4; ++i) r.a[i] += o.a[i];
  return r;
}

SmallMatrix SmallMatrix::operator-(const SmallMatrix& o) const {
  SmallMatrix r = *this;
  for (int i = 0; i < 4; ++i) r.a[i] -= o.a[i];
  return r;
}

SmallMatrix SmallMatrix::operator*(Complex s) const {
  SmallMatrix r = *this;
  for (auto& v : r.a) v *= s;
  return r;
}

Complex SmallMatrix::trace() const {
  return size == 2 ? (*this)(0, 0) + (*this)(1, 1) : (*this)(0, 0);
}

double SmallMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

LieValue::LieValue(std::initializer_list<double> c) : dim(static_cast<int>(c.size())) {
  std::copy(c.begin(), c.end(), coeffs.begin());
}

double LieValue::norm() const { return std::sqrt(dot(*this)); }

double LieValue::dot(const LieValue& o) const {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += coeffs[a] * o.coeffs[a];
  return s;
}

LieValue LieValue::operator+(const LieValue& o) const {
  LieValue r(dim);
  for (int a = 0; a < dim; ++a) r.coeffs[a] = coeffs[a] + o.coeffs[a];
  return r;
}

LieValue LieValue::operator-(const LieValue& o) const {
  LieValue r(dim);
  for (int a = 0; a < dim; ++a) r.coeffs[a] = coeffs[a] - o.coeffs[a];
  return r;
}

LieValue LieValue::operator*(double s) const {
  LieValue r(dim);
  for (int a = 0; a < dim; ++a) r.coeffs[a] = coeffs[a] * s;
  return r;
}

const GroupSpec& GroupSpec::get(GroupName name) {
  static const GroupSpec u1(GroupName::U1);
  static const GroupSpec su2(GroupName::SU2);
  return name == GroupName::U1 ? u1 : su2;
}

double GroupSpec::inner(const SmallMatrix& x, const SmallMatrix& y) const {
  return -ip_normalization_ * (x * y).trace().real();
}

GroupSpec::GroupSpec(GroupName name) : name_(name) {
  if (name == GroupName::U1) {
    dim_ = 1;
    matrix_size_ = 1;
    ip_normalization_ = 1.0;
    SmallMatrix e;
    e.size = 1;
    e(0, 0) = kI;
    basis_.push_back(e);
  } else {
    dim_ = 3;
    matrix_size_ = 2;
    ip_normalization_ = 2.0;
    SmallMatrix s1, s2, s3;
    s1(0, 1) = 1.0;
    s1(1, 0) = 1.0;
    s2(0, 1) = -kI;
    s2(1, 0) = kI;
    s3(0, 0) = 1.0;
    s3(1, 1) = -1.0;
    for (const auto& s : {s1, s2, s3}) basis_.push_back(s * Complex(0.0, -0.5));
  }

  // Structure constants by projecting matrix commutators onto the basis.
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) {
      const SmallMatrix br = basis_[a] * basis_[b] - basis_[b] * basis_[a];
      for (int c = 0; c < dim_; ++c) {
        const double f = inner(br, basis_[c]);
        if (std::abs(f) > 1e-14) structure_.push_back({a, b, c, std::round(f * 1e12) / 1e12});
      }
    }

  // Commutator bound: largest singular value of ad(x) over sampled unit x.
  if (!structure_.empty()) {
    CounterRng rng(0x5eed, 0xad);
    double best = 0.0;
    for (int s = 0; s < 256 + dim_; ++s) {
      LieValue x(dim_);
      if (s < dim_) {
        x.coeffs[s] = 1.0;
      } else {
        for (int a = 0; a < dim_; ++a) x.coeffs[a] = rng.normal();
        x = x * (1.0 / x.norm());
      }
      // ad(x)^T ad(x) power iteration
      LieValue y(dim_);
      for (int a = 0; a < dim_; ++a) y.coeffs[a] = 1.0 + 0.1 * a;
      double sigma = 0.0;
      for (int it = 0; it < 200; ++it) {
        LieValue z(dim_);
        for (const auto& sc : structure_) z.coeffs[sc.c] += sc.f * x.coeffs[sc.a] * y.coeffs[sc.b];
        const double nz = z.norm();
        LieValue t(dim_);
        for (const auto& sc : structure_) t.coeffs[sc.b] += sc.f * x.coeffs[sc.a] * z.coeffs[sc.c];
        const double nt = t.norm();
        if (nt == 0.0) break;
        sigma = nz / y.norm();
        y = t * (1.0 / nt);
      }
      best = std::max(best, sigma);
    }
    commutator_bound_ = best;
  }
}

void require_same_group(const LieValue& x, const LieValue& y, const GroupSpec& g) {
  if (x.dim != g.dim() || y.dim != g.dim())
    throw Error(ErrorCode::InvalidInput, "Lie value dimension does not match group " +
                                             to_string(g.name()));
}

LieValue commutator(const LieValue& x, const LieValue& y, const GroupSpec& g) {
  require_same_group(x, y, g);
  LieValue r(g.dim());
  for (const auto& sc : g.structure()) r.coeffs[sc.c] += sc.f * x.coeffs[sc.a] * y.coeffs[sc.b];
  return r;
}

double ad_invariance_check(const LieValue& x, const LieValue& y, const LieValue& z,
                           const GroupSpec& g) {
  require_same_group(x, y, g);
  require_same_group(x, z, g);
  return std::abs(commutator(x, y, g).dot(z) + y.dot(commutator(x, z, g)));
}

SmallMatrix to_matrix(const LieValue& x, const GroupSpec& g) {
  SmallMatrix m;
  m.size = g.matrix_size();
  for (int a = 0; a < g.dim(); ++a) m = m + g.basis()[a] * Complex(x.coeffs[a], 0.0);
  return m;
}

LieValue from_matrix(const SmallMatrix& m, const GroupSpec& g) {
  LieValue x(g.dim());
  for (int a = 0; a < g.dim(); ++a) x.coeffs[a] = g.inner(m, g.basis()[a]);
  return x;
}

SmallMatrix group_exp(const LieValue& x, const GroupSpec& g) {
  if (g.name() == GroupName::U1) {
    SmallMatrix u = SmallMatrix::identity(1);
    u(0, 0) = std::exp(kI * x.coeffs[0]);
    return u;
  }
  // X = -(i/2) c.sigma, so exp(X) = cos(|c|/2) I - i sin(|c|/2) (c/|c|).sigma
  const double th = std::sqrt(x.dot(x));
  const double half = 0.5 * th;
  const double s = th > 1e-300 ? std::sin(half) / th : 0.5;
  const double n1 = x.coeffs[0] * s, n2 = x.coeffs[1] * s, n3 = x.coeffs[2] * s;
  SmallMatrix u;
  u.size = 2;
  u(0, 0) = Complex(std::cos(half), -n3);
  u(0, 1) = Complex(-n2, -n1);
  u(1, 0) = Complex(n2, -n1);
  u(1, 1) = Complex(std::cos(half), n3);
  return u;
}

LieValue group_log(const SmallMatrix& u, const GroupSpec& g) {
  if (g.name() == GroupName::U1) {
    LieValue x(1);
    x.coeffs[0] = std::arg(u(0, 0));
    return x;
  }
  // u = a0 I - i (a.sigma) with a0 = cos(th/2), |a| = sin(th/2)
  const double a0 = 0.5 * (u(0, 0) + u(1, 1)).real();
  const double a3 = -0.5 * (u(0, 0) - u(1, 1)).imag();
  const double a1 = -0.5 * (u(0, 1) + u(1, 0)).imag();
  const double a2 = 0.5 * (u(1, 0) - u(0, 1)).real();
  const double sn = std::sqrt(a1 * a1 + a2 * a2 + a3 * a3);
  const double th = 2.0 * std::atan2(sn, a0);
  const double scale = sn > 1e-300 ? th / sn : 2.0;
  return LieValue{a1 * scale, a2 * scale, a3 * scale};
}

LieValue adjoint_action(const SmallMatrix& u, const LieValue& x, const GroupSpec& g) {
  if (g.name() == GroupName::U1) return x;
  return from_matrix(u * to_matrix(x, g) * u.adjoint(), g);
}

}  // namespace ymlab
