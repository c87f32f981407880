#pragma once

#include <span>
#include <vector>

namespace ymlab {

/// Power-weighted trapezoid (product integration): weights w with
/// sum_i w_i f(t_i) = int_{t_0}^{t_N} s^{-alpha} p(s) ds, where p is the
/// piecewise-linear interpolant of f. Exact for s^{-alpha} * (affine in s)
/// on each interval. t must be strictly increasing and nonnegative; t_0 = 0
/// requires alpha < 1.
std::vector<double> power_trapezoid_weights(std::span<const double> t, double alpha);

/// Running integrals I_n = int_{t_0}^{t_n} s^{-alpha} p(s) ds.
std::vector<double> power_trapezoid_cumulative(std::span<const double> t,
                                               std::span<const double> f, double alpha);

double power_trapezoid(std::span<const double> t, std::span<const double> f, double alpha);

/// The two endpoint weights of one interval [a, b].
void power_interval_weights(double a, double b, double alpha, double& wa, double& wb);

}  // namespace ymlab
