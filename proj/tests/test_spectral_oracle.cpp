#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "ymlab/calculus.hpp"
#include "ymlab/error.hpp"
#include "ymlab/heat_flow.hpp"
#include "ymlab/quadrature.hpp"
#include "ymlab/runner.hpp"
#include "ymlab/spectral.hpp"

using namespace ymtest;

namespace {

// Lower incomplete gamma by its power series; independent of the library.
double lower_gamma(double s, double x) {
  double term = 1.0 / s, sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= x / (s + k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::pow(x, s) * std::exp(-x) * sum;
}

FormField single_mode(const Grid& g, int k, double amp) {
  const Mode m{1, 0, {k, 0, 0}, amp, 0.4};
  return sample_modes(g, GroupSpec::get(GroupName::U1), 1, std::vector<Mode>{m});
}

}  // namespace

TEST_CASE("Gamma integral constant sqrt(pi/2)") {
  // int_0^inf s^{-1/2} e^{-2s} ds = Gamma(1/2) / sqrt(2)
  CHECK(std::tgamma(0.5) / std::sqrt(2.0) == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-15));
  const TimeGrid tg = TimeGrid::clustered(20.0, 4000, 3.0);
  std::vector<double> f;
  for (double s : tg.nodes()) f.push_back(std::exp(-2.0 * s));
  CHECK(power_trapezoid(tg.nodes(), f, 0.5) == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-6));
  CHECK(lower_gamma(0.5, 40.0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
}

TEST_CASE("discrete symbol against the continuum one") {
  const Grid g(32, 2 * M_PI);
  CHECK(continuum_symbol(g, 1, 2, 0) == doctest::Approx(5.0));
  // lambda_h = |k|^2 (1 - (k h)^2 / 12 + ...)
  const double lh = discrete_symbol(g, 1, 0, 0), h = g.h();
  CHECK(lh == doctest::Approx(1.0 - h * h / 12.0).epsilon(1e-5));
  CHECK(discrete_symbol(g, 0, 0, 0) == 0.0);
  CHECK(discrete_symbol(g, 31, 0, 0) == doctest::Approx(lh));
}

TEST_CASE("spectral heat on a single mode") {
  const Grid g(16, 3.0);
  const FormField f = single_mode(g, 2, 0.8);
  const double lam = discrete_symbol(g, 2, 0, 0), t = 0.3;
  FormField expect = f;
  expect *= std::exp(-lam * t);
  CHECK(norm2(spectral_heat(f, t) - expect) < 1e-13 * norm2(f));
  CHECK_THROWS_AS(spectral_heat(smooth_A(g), t), Error);
}

TEST_CASE("per-mode rho closed form") {
  // A(t) = e^{-lambda t} A0, ||B||^2 = lambda ||A0||^2 e^{-2 lambda t}, so
  // rho(T) = 1/2 lambda ||A0||^2 (2 lambda)^{a-1} gamma(1 - a, 2 lambda T).
  const Grid g(16, 2 * M_PI);
  const FormField A0 = single_mode(g, 1, 0.5);
  const double lam = discrete_symbol(g, 1, 0, 0), T = 1.5;
  const double a2 = norm2(A0) * norm2(A0);
  for (double a : {0.5, 0.75}) {
    const FlowTrajectory tr = ym_flow(A0, TimeGrid::clustered(T, 60, 3.0));
    const double exact = 0.5 * lam * a2 * std::pow(2 * lam, a - 1) * lower_gamma(1 - a, 2 * lam * T);
    CHECK(action_rho(tr, a) == doctest::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("oracle horizon makes the slowest mode's tail small") {
  const Grid g(16, 2 * M_PI);
  const FormField A0 = single_mode(g, 2, 1.0) + single_mode(g, 1, 0.1);
  const double T = oracle_horizon(A0, 0.005);
  const double lam = discrete_symbol(g, 1, 0, 0);
  CHECK(std::erfc(std::sqrt(2 * lam * T)) == doctest::Approx(0.005).epsilon(1e-9));
}

TEST_CASE("flow converges to the continuum heat solution at second order") {
  auto err = [](int n) {
    const Grid g(n, 2 * M_PI);
    const std::vector<Mode> modes{{1, 0, {1, 0, 0}, 0.5, 0.3}, {2, 0, {0, 2, 0}, 0.3, 1.1},
                                  {0, 0, {0, 1, 1}, 0.2, 0.2}, {2, 0, {1, 1, 0}, 0.2, 0.7}};
    FormField A0 = sample_modes(g, GroupSpec::get(GroupName::U1), 1, modes);
    A0 = helmholtz_split(A0).divergence_free;
    const FlowTrajectory tr = ym_flow(A0, TimeGrid::clustered(0.25, 10, 1.0));
    return rel(tr.A.back(), spectral_heat(A0, 0.25, Symbol::Continuum));
  };
  const double e8 = err(8), e16 = err(16);
  CHECK(e8 / e16 > 3.2);
}
