#include "ymlab/quadrature.hpp"

#include <cmath>

#include "ymlab/error.hpp"
#include "ymlab/parallel.hpp"

namespace ymlab {

namespace {

// b^q - a^q for 0 <= a < b, accurate when b - a << a
double power_diff(double a, double b, double q) {
  if (a == 0.0) return std::pow(b, q);
  return std::pow(a, q) * std::expm1(q * std::log1p((b - a) / a));
}

}  // namespace

void power_interval_weights(double a, double b, double alpha, double& wa, double& wb) {
  if (!(b > a) || a < 0.0) throw Error(ErrorCode::InvalidInput, "quadrature nodes must increase");
  if (a == 0.0 && alpha >= 1.0)
    throw Error(ErrorCode::InvalidInput, "s^-alpha is not integrable at 0 for alpha >= 1");
  if (alpha == 0.0) {
    wa = wb = 0.5 * (b - a);
    return;
  }
  if (alpha == 1.0 || alpha == 2.0) {
    // log moments
    const double l = std::log1p((b - a) / a);
    const double m0 = alpha == 1.0 ? l : (1.0 / a - 1.0 / b);
    const double m1 = alpha == 1.0 ? (b - a) : l;
    wa = (b * m0 - m1) / (b - a);
    wb = (m1 - a * m0) / (b - a);
    return;
  }
  const double m0 = power_diff(a, b, 1.0 - alpha) / (1.0 - alpha);
  const double m1 = power_diff(a, b, 2.0 - alpha) / (2.0 - alpha);
  wa = (b * m0 - m1) / (b - a);
  wb = (m1 - a * m0) / (b - a);
}

std::vector<double> power_trapezoid_weights(std::span<const double> t, double alpha) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    double wa, wb;
    power_interval_weights(t[i], t[i + 1], alpha, wa, wb);
    w[i] += wa;
    w[i + 1] += wb;
  }
  return w;
}

std::vector<double> power_trapezoid_cumulative(std::span<const double> t,
                                               std::span<const double> f, double alpha) {
  if (t.size() != f.size()) throw Error(ErrorCode::InvalidInput, "quadrature size mismatch");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    double wa, wb;
    power_interval_weights(t[i], t[i + 1], alpha, wa, wb);
    out[i + 1] = out[i] + wa * f[i] + wb * f[i + 1];
  }
  return out;
}

double power_trapezoid(std::span<const double> t, std::span<const double> f, double alpha) {
  if (t.size() != f.size()) throw Error(ErrorCode::InvalidInput, "quadrature size mismatch");
  if (t.size() < 2) return 0.0;
  const auto w = power_trapezoid_weights(t, alpha);
  std::vector<double> terms(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) terms[i] = w[i] * f[i];
  return pairwise_sum(terms);
}

}  // namespace ymlab
