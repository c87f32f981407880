#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "ymlab/calculus.hpp"
#include "ymlab/diagnostics.hpp"
#include "ymlab/error.hpp"
#include "ymlab/gauge.hpp"
#include "ymlab/norms.hpp"

using namespace ymtest;

TEST_CASE("d_A and d_A^* are exact adjoints for any connection") {
  const Grid g(8, 2.0);
  const FormField A = random_field(g, GroupName::SU2, 1, 1, 1.0, 1.0);
  for (int p = 0; p < 3; ++p) {
    const FormField f = random_field(g, GroupName::SU2, p, 10 + p);
    const FormField h = random_field(g, GroupName::SU2, p + 1, 20 + p);
    const double lhs = inner(cov_d(A, f), h), rhs = inner(f, cov_d_star(A, h));
    CHECK(std::abs(lhs - rhs) < 1e-12 * (std::abs(lhs) + 1.0));
  }
}

TEST_CASE("Laplacians are symmetric and nonpositive") {
  const Grid g(8, 2.0);
  const FormField A = random_field(g, GroupName::SU2, 1, 2, 1.0, 1.0);
  const FormField u = random_field(g, GroupName::SU2, 1, 3);
  const FormField v = random_field(g, GroupName::SU2, 1, 4);
  CHECK(inner(bochner_laplacian(A, u), v) == doctest::Approx(inner(u, bochner_laplacian(A, v))));
  CHECK(inner(hodge_laplacian(A, u), v) == doctest::Approx(inner(u, hodge_laplacian(A, v))));
  CHECK(inner(bochner_laplacian(A, u), u) < 0.0);
  CHECK(inner(hodge_laplacian(A, u), u) < 0.0);
  CHECK(-inner(bochner_laplacian(A, u), u) ==
        doctest::Approx(covariant_gradient_sq(u, A)).epsilon(1e-12));
}

TEST_CASE("wedge of two 1-forms is symmetric, interior product antisymmetric") {
  const Grid g(8, 2.0);
  const FormField u = random_field(g, GroupName::SU2, 1, 5);
  const FormField v = random_field(g, GroupName::SU2, 1, 6);
  CHECK(norm2(wedge_comm(u, v) - wedge_comm(v, u)) < 1e-13 * norm2(wedge_comm(u, v)));
  CHECK(norm2(interior_comm(u, v) + interior_comm(v, u)) < 1e-13 * norm2(interior_comm(u, v)));
}

TEST_CASE("abelian curvature is dA and commutator terms vanish") {
  const Grid g(8, 2.0);
  const FormField A = random_field(g, GroupName::U1, 1, 7);
  CHECK(norm2(curvature(A) - ext_d(A)) == 0.0);
  CHECK(norm2(wedge_comm(A, A)) == 0.0);
  CHECK(bianchi_residual(A) < 1e-12);
  const FormField w = random_field(g, GroupName::U1, 1, 8);
  CHECK(weitzenbock_residual(A, w) < 1e-12);
}

TEST_CASE("flat lattice identity |grad w|^2 = |dw|^2 + |d*w|^2") {
  const Grid g(8, 2.0);
  const FormField w = random_field(g, GroupName::U1, 1, 9);
  const FormField zero = zero_connection(g, w.group());
  const double d1 = norm2(ext_d(w)), d2 = norm2(coext_d(w));
  CHECK(covariant_gradient_sq(w, zero) == doctest::Approx(d1 * d1 + d2 * d2).epsilon(1e-12));
}

TEST_CASE("second-order identities on smooth SU2 data") {
  // Residuals must fall by about 4 under h -> h/2.
  const Grid c(8, 2 * M_PI), f(16, 2 * M_PI);
  const FormField Ac = smooth_A(c), Af = smooth_A(f), wc = smooth_w(c), wf = smooth_w(f);
  const double rb = bianchi_residual(Ac) / bianchi_residual(Af);
  const double rw = weitzenbock_residual(Ac, wc) / weitzenbock_residual(Af, wf);
  CHECK(rb > 3.2);
  CHECK(rb < 4.8);
  CHECK(rw > 3.2);
  CHECK(rw < 4.8);
}

TEST_CASE("gauge covariance holds to second order") {
  auto defect = [](int n) {
    const Grid g(n, 2 * M_PI);
    const GroupSpec& grp = GroupSpec::get(GroupName::SU2);
    const std::vector<Mode> gm{{0, 0, {1, 0, 0}, 0.6, 0.0}, {0, 2, {0, 1, 1}, 0.4, 0.5}};
    const GaugeField gf = GaugeField::from_generator(sample_modes(g, grp, 0, gm));
    const FormField A = smooth_A(g);
    const FormField B = curvature(A);
    const FormField Bg = curvature(gauge_transform(A, gf));
    return rel(Bg, gauge_transform_form(B, gf));
  };
  const double d8 = defect(8), d16 = defect(16);
  CHECK(d16 < 0.05);
  CHECK(d8 / d16 > 3.0);
}

TEST_CASE("pure gauge connection has small curvature") {
  const Grid g(16, 2 * M_PI);
  const GroupSpec& grp = GroupSpec::get(GroupName::SU2);
  const std::vector<Mode> gm{{0, 1, {1, 1, 0}, 0.8, 0.2}};
  const FormField A = pure_gauge(GaugeField::from_generator(sample_modes(g, grp, 0, gm)));
  CHECK(norm2(curvature(A)) < 0.05 * norm2(ext_d(A)) + 1e-12);
}

TEST_CASE("degree errors") {
  const Grid g(8, 1.0);
  const FormField A(g, GroupName::SU2, 1);
  const FormField f3(g, GroupName::SU2, 3), f0(g, GroupName::SU2, 0);
  CHECK_THROWS_AS(ext_d(f3), Error);
  CHECK_THROWS_AS(coext_d(f0), Error);
  CHECK_THROWS_AS(curvature(f0), Error);
  CHECK_THROWS_AS(interior_comm(FormField(g, GroupName::SU2, 2), A), Error);
}
