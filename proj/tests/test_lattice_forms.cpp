#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "support.hpp"
#include "ymlab/calculus.hpp"
#include "ymlab/error.hpp"
#include "ymlab/norms.hpp"
#include "ymlab/snapshot.hpp"
#include "ymlab/spectral.hpp"

using namespace ymtest;

TEST_CASE("component layout and staggered positions") {
  const Grid g(8, 2.0);
  CHECK(component_count(0) == 1);
  CHECK(component_count(1) == 3);
  CHECK(component_count(2) == 3);
  CHECK(component_count(3) == 1);
  CHECK_THROWS_AS(FormField(g, GroupName::U1, 4), Error);
  const auto p = g.position(1, 2, 3, 0b011);
  CHECK(p[0] == doctest::Approx(0.25 * 1.5));
  CHECK(p[1] == doctest::Approx(0.25 * 2.5));
  CHECK(p[2] == doctest::Approx(0.25 * 3.0));
  CHECK(wedge_sign(0b001, 0b010) == 1);
  CHECK(wedge_sign(0b010, 0b001) == -1);
}

TEST_CASE("d squared vanishes") {
  const Grid g(8, 3.0);
  for (GroupName grp : {GroupName::U1, GroupName::SU2}) {
    const FormField f0 = random_field(g, grp, 0, 1);
    const FormField f1 = random_field(g, grp, 1, 2);
    CHECK(norm2(ext_d(ext_d(f0))) < 1e-11 * norm2(f0));
    CHECK(norm2(ext_d(ext_d(f1))) < 1e-11 * norm2(f1));
    const FormField f3 = random_field(g, grp, 3, 3);
    CHECK(norm2(coext_d(coext_d(f3))) < 1e-11 * norm2(f3));
  }
}

TEST_CASE("coext_d is the L2 adjoint of ext_d") {
  const Grid g(8, 2.5);
  for (int p = 0; p < 3; ++p) {
    const FormField f = random_field(g, GroupName::SU2, p, 10 + p);
    const FormField h = random_field(g, GroupName::SU2, p + 1, 20 + p);
    const double lhs = inner(ext_d(f), h), rhs = inner(f, coext_d(h));
    CHECK(std::abs(lhs - rhs) < 1e-12 * (std::abs(lhs) + 1.0));
  }
}

TEST_CASE("interior product is the transpose of the wedge") {
  const Grid g(8, 2.0);
  const FormField u = random_field(g, GroupName::SU2, 1, 1);
  for (int p = 0; p < 3; ++p) {
    const FormField w = random_field(g, GroupName::SU2, p, 30 + p);
    const FormField v = random_field(g, GroupName::SU2, p + 1, 40 + p);
    const double lhs = inner(w, interior_comm(u, v)), rhs = inner(wedge_comm(u, w), v);
    CHECK(std::abs(lhs - rhs) < 1e-12 * (std::abs(lhs) + 1.0));
  }
}

TEST_CASE("1-D stencil symbol") {
  // For f = cos(2 pi k x / L) dy the lattice Laplacian acts as the scalar
  // -4 sin^2(pi k / n) / h^2.
  const int n = 16;
  const double L = 5.0, h = L / n;
  const Grid g(n, L);
  for (int k : {1, 3, 7}) {
    const Mode m{1, 0, {k, 0, 0}, 1.0, 0.3};
    const FormField f = sample_modes(g, GroupSpec::get(GroupName::U1), 1, std::vector<Mode>{m});
    const double s = std::sin(M_PI * k / n);
    const double lam = 4.0 * s * s / (h * h);
    const FormField lap = hodge_laplacian(zero_connection(g, f.group()), f);
    FormField expect = f;
    expect *= -lam;
    CHECK(norm2(lap - expect) < 1e-11 * lam * norm2(f));
    CHECK(discrete_symbol(g, k, 0, 0) == doctest::Approx(lam).epsilon(1e-13));
  }
}

TEST_CASE("norm axioms") {
  const Grid g(8, 2.0);
  const FormField f = random_field(g, GroupName::SU2, 1, 5);
  const FormField h = random_field(g, GroupName::SU2, 1, 6);
  for (double p : {1.0, 2.0, 3.0, 6.0, double(INFINITY)}) {
    CHECK(lp_norm(f + h, p) <= lp_norm(f, p) + lp_norm(h, p) + 1e-12);
    CHECK(lp_norm(-2.5 * f, p) == doctest::Approx(2.5 * lp_norm(f, p)));
    CHECK(lp_norm(f.zeros_like(), p) == 0.0);
  }
  CHECK(lp_norm(f, 2.0) == doctest::Approx(norm2(f)));
  // constant field: ||c||_p = |c| L^{3/p}
  FormField c(g, GroupName::U1, 0);
  c.fill(3.0);
  CHECK(lp_norm(c, 3.0) == doctest::Approx(3.0 * 2.0));
  CHECK(lp_norm(c, INFINITY) == doctest::Approx(3.0));
  CHECK_THROWS_AS(lp_norm(f, 0.5), Error);
}

TEST_CASE("Parseval and the flat Sobolev norms") {
  const Grid g(16, 3.0);
  const FormField f = random_field(g, GroupName::SU2, 1, 8);
  CHECK(spectral_norm(f, [](double) { return 1.0; }) == doctest::Approx(norm2(f)).epsilon(1e-12));
  const Mode m{2, 0, {2, 1, 0}, 0.7, 0.1};
  const FormField s = sample_modes(g, GroupSpec::get(GroupName::U1), 1, std::vector<Mode>{m});
  const double lam = discrete_symbol(g, 2, 1, 0);
  for (double b : {0.0, 0.25, 0.5, 1.0})
    CHECK(h_b_norm(s, {b, std::nullopt}) ==
          doctest::Approx(std::pow(1.0 + lam, b / 2) * norm2(s)).epsilon(1e-10));
  // h_b is monotone in b
  double prev = 0.0;
  for (double b : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    const double v = h_b_norm(f, {b, std::nullopt});
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("covariant Sobolev norm by Lanczos matches the flat value for a constant U1 connection") {
  const Grid g(8, 2.0);
  const FormField f = random_field(g, GroupName::U1, 1, 4, 1.5);
  FormField A(g, GroupName::U1, 1);
  A.fill(0.8);  // ad A = 0 in U1
  for (double b : {0.5, 0.75}) {
    const double flat = h_b_norm(f, {b, std::nullopt});
    const double cov = h_b_norm(f, {b, A}, {40, 1e-12});
    CHECK(cov == doctest::Approx(flat).epsilon(1e-6));
  }
  CHECK(h1A_norm(f, A) == doctest::Approx(h_b_norm(f, {1.0, std::nullopt})).epsilon(1e-10));
}

TEST_CASE("Helmholtz split is orthogonal and exact") {
  const Grid g(16, 2.0);
  const FormField f = random_field(g, GroupName::U1, 1, 12);
  const HelmholtzParts p = helmholtz_split(f);
  CHECK(norm2(p.divergence_free + p.gradient_part - f) < 1e-12 * norm2(f));
  CHECK(std::abs(inner(p.divergence_free, p.gradient_part)) < 1e-12 * norm2(f) * norm2(f));
  CHECK(norm2(coext_d(p.divergence_free)) < 1e-10 * norm2(f));
  CHECK(norm2(ext_d(p.gradient_part)) < 1e-10 * norm2(f));
  const FormField su2 = random_field(g, GroupName::SU2, 1, 13);
  CHECK_THROWS_AS(helmholtz_split(su2), Error);
  const HelmholtzParts q = flat_helmholtz_split(su2);
  CHECK(norm2(coext_d(q.divergence_free)) < 1e-10 * norm2(su2));
}

TEST_CASE("snapshot round trip is bit exact") {
  const Grid g(8, 1.7);
  const FormField f = random_field(g, GroupName::SU2, 2, 21);
  const auto bytes = encode_snapshot(f);
  const FormField r = decode_snapshot(bytes);
  CHECK(r.degree() == 2);
  CHECK(r.grid() == g);
  CHECK(r.group().name() == GroupName::SU2);
  CHECK(std::equal(r.data().begin(), r.data().end(), f.data().begin()));
  const std::string path = "snapshot_roundtrip.ymf";
  write_snapshot(f, path);
  const FormField s = read_snapshot(path);
  CHECK(std::equal(s.data().begin(), s.data().end(), f.data().begin()));
  std::remove(path.c_str());
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(bad), Error);
  bad = bytes;
  bad.pop_back();
  CHECK_THROWS_AS(decode_snapshot(bad), Error);
}

TEST_CASE("arithmetic requires matching shapes") {
  const Grid g(8, 1.0);
  FormField a(g, GroupName::SU2, 1);
  const FormField b(g, GroupName::U1, 1);
  CHECK_THROWS_AS(a += b, Error);
  CHECK(a.is_finite());
  a.data()[3] = NAN;
  CHECK_FALSE(a.is_finite());
}
