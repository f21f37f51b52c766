#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rotconv/norms.hpp"
#include "rotconv/operators.hpp"
#include "rotconv/snapshot.hpp"
#include "rotconv/transform.hpp"
#include "test_support.hpp"

using namespace rotconv;
using rotconv::testing::max_abs;
using rotconv::testing::max_abs_diff;
using std::numbers::pi;

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(3, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2), std::invalid_argument);
  CHECK_THROWS_AS(Grid(4, 5, 4), std::invalid_argument);
  Grid g(8);
  CHECK(g.contains({4, -3, 0}));
  CHECK_FALSE(g.contains({-4, 0, 0}));
  CHECK_THROWS_AS(g.index_of({5, 0, 0}), std::out_of_range);
  CHECK(g.index_of({-1, 0, 2}) == g.index(7, 0, 2));
}

TEST_CASE("forward transform of constants and single modes") {
  Grid g(16);
  auto one = PhysicalField::sample(g, [](double, double, double) { return 1.0; });
  auto F = forward_transform(one);
  CHECK(std::abs(F.coeff({0, 0, 0}) - Complex(1.0)) < 1e-15);
  F.set_coeff({0, 0, 0}, 0.0);
  CHECK(F.max_abs() < 1e-15);

  auto s = PhysicalField::sample(g, [](double x, double, double) { return std::sin(x); });
  auto S = forward_transform(s);
  CHECK(std::abs(S.coeff({1, 0, 0}) - Complex(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(S.coeff({-1, 0, 0}) - Complex(0.0, 0.5)) < 1e-15);
  S.set_coeff({1, 0, 0}, 0.0);
  S.set_coeff({-1, 0, 0}, 0.0);
  CHECK(S.max_abs() < 1e-15);
}

TEST_CASE("inverse transform of constants and sin x") {
  Grid g(16);
  SpectralField C(g);
  C.set_coeff({0, 0, 0}, 2.5);
  auto c = inverse_transform(C);
  for (double v : c.values()) CHECK(v == doctest::Approx(2.5).epsilon(1e-15));

  SpectralField S(g);
  S.set_coeff({1, 0, 0}, Complex(0.0, -0.5));
  S.set_coeff({-1, 0, 0}, Complex(0.0, 0.5));
  auto s = inverse_transform(S);
  auto exact = PhysicalField::sample(g, [](double x, double, double) { return std::sin(x); });
  CHECK(max_abs_diff(s, exact) <= 1e-12);
}

TEST_CASE("round trip over seeded random fields") {
  Grid g(8, 8, 8);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto f = testing::random_physical(g, seed);
    auto back = inverse_transform(forward_transform(f));
    REQUIRE(max_abs_diff(f, back) <= 1e-12 * max_abs(f));
  }
  Grid h(32, 16, 24);
  auto f = testing::random_physical(h, 7);
  CHECK(max_abs_diff(f, inverse_transform(forward_transform(f))) <= 1e-12 * max_abs(f));
}

TEST_CASE("random symmetric coefficients reconstruct a real field") {
  Grid g(16);
  auto F = testing::random_spectral(g, 3);
  CHECK(F.symmetry_defect() <= 1e-15 * F.max_abs());
  // inverse without the symmetry check: the imaginary residue is what we test
  auto [re, im] = inverse_transform_pair(F, SpectralField(g));
  CHECK(max_abs(im) <= 1e-12 * max_abs(re));
}

TEST_CASE("asymmetric coefficients and non-finite samples are rejected") {
  Grid g(8);
  SpectralField F(g);
  F.set_coeff({1, 0, 0}, 1.0);
  CHECK_THROWS_AS(inverse_transform(F), std::invalid_argument);
  PhysicalField f(g);
  f[5] = std::nan("");
  CHECK_THROWS_AS(forward_transform(f), std::invalid_argument);
}

TEST_CASE("pair inverse matches two single inverses") {
  Grid g(16);
  auto F = testing::random_spectral(g, 11);
  auto G = testing::random_spectral(g, 12);
  auto [f, h] = inverse_transform_pair(F, G);
  CHECK(max_abs_diff(f, inverse_transform(F)) <= 1e-13);
  CHECK(max_abs_diff(h, inverse_transform(G)) <= 1e-13);
}

TEST_CASE("one-dimensional transforms") {
  const int n = 16;
  std::vector<double> p(n);
  for (int l = 0; l < n; ++l) p[l] = std::cos(2.0 * kTwoPi * l / n) + 0.25;
  auto c = forward_transform_1d(p);
  CHECK(std::abs(c[0] - Complex(0.25)) < 1e-15);
  CHECK(std::abs(c[2] - Complex(0.5)) < 1e-15);
  auto back = inverse_transform_1d(c);
  for (int l = 0; l < n; ++l) CHECK(back[l] == doctest::Approx(p[l]).epsilon(1e-14));
  CHECK_THROWS(forward_transform_1d(std::span<const double>{}));
}

TEST_CASE("derivative symbols") {
  Grid g(16);
  auto s = forward_transform(
      PhysicalField::sample(g, [](double x, double, double) { return std::sin(x); }));
  auto ds = inverse_transform(apply_symbol(s, symbols::d_dx(g)));
  auto cosx = PhysicalField::sample(g, [](double x, double, double) { return std::cos(x); });
  CHECK(max_abs_diff(ds, cosx) <= 1e-12);

  auto f = PhysicalField::sample(
      g, [](double x, double y, double z) { return std::sin(x) * std::cos(z); });
  auto lap = inverse_transform(apply_symbol(forward_transform(f), symbols::laplacian_h(g)));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(lap[i] == doctest::Approx(-f[i]).epsilon(1e-12));
}

TEST_CASE("derivative exactness on every resolved single mode") {
  Grid g(8);
  const Symbol dx = symbols::d_dx(g), dy = symbols::d_dy(g), dz = symbols::d_dz(g);
  for (int k1 = -3; k1 <= 3; ++k1) {
    for (int k2 = -3; k2 <= 3; ++k2) {
      for (int k3 = -3; k3 <= 3; ++k3) {
        auto f = PhysicalField::sample(g, [&](double x, double y, double z) {
          return std::cos(k1 * x + k2 * y + k3 * z);
        });
        auto F = forward_transform(f);
        auto exact = [&](int kj) {
          return PhysicalField::sample(g, [&](double x, double y, double z) {
            return -kj * std::sin(k1 * x + k2 * y + k3 * z);
          });
        };
        CHECK(max_abs_diff(inverse_transform(apply_symbol(F, dx)), exact(k1)) <= 1e-12);
        CHECK(max_abs_diff(inverse_transform(apply_symbol(F, dy)), exact(k2)) <= 1e-12);
        CHECK(max_abs_diff(inverse_transform(apply_symbol(F, dz)), exact(k3)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("A^-1/2 annihilates the horizontal-mean sector") {
  Grid g(8);
  SpectralField F(g);
  F.set_coeff({0, 0, 2}, Complex(0.3, 0.1));
  F.set_coeff({0, 0, -2}, Complex(0.3, -0.1));
  F.set_coeff({1, 0, 0}, 0.5);
  F.set_coeff({-1, 0, 0}, 0.5);
  auto G = apply_symbol(F, symbols::a_power(g, -0.5));
  CHECK(G.coeff({0, 0, 2}) == Complex(0.0));
  CHECK(std::abs(G.coeff({1, 0, 0}) - Complex(0.5)) < 1e-15);
}

TEST_CASE("reality-breaking symbols are rejected") {
  Grid g(8);
  CHECK_THROWS_AS(Symbol(g, [](const Wavevector& k) { return Complex(k.k1); }),
                  std::invalid_argument);
  CHECK_THROWS_AS(Symbol(g, [](const Wavevector&) { return Complex(0.0, 1.0); }),
                  std::invalid_argument);
  CHECK_NOTHROW(Symbol(g, [](const Wavevector& k) { return Complex(k.k1 * k.k1); }));
}

TEST_CASE("apply_symbol linearity") {
  Grid g(16);
  const Symbol s = symbols::helmholtz_z_power(g, 0.5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto F = testing::random_spectral(g, 2 * seed);
    auto G = testing::random_spectral(g, 2 * seed + 1);
    const double a = 0.7, b = -1.3;
    auto lhs = apply_symbol(a * F + b * G, s);
    auto rhs = a * apply_symbol(F, s) + b * apply_symbol(G, s);
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, std::abs(lhs[i] - rhs[i]));
    CHECK(m <= 1e-12 * lhs.max_abs());
  }
}

TEST_CASE("dealias cutoff, idempotence, energy") {
  Grid g(32);
  SpectralField F(g);
  F.set_coeff({15, 0, 0}, 1.0);
  F.set_coeff({-15, 0, 0}, 1.0);
  F.set_coeff({1, 1, 1}, 2.0);
  F.set_coeff({-1, -1, -1}, 2.0);
  auto D = dealias(F);
  CHECK(D.coeff({15, 0, 0}) == Complex(0.0));
  CHECK(D.coeff({1, 1, 1}) == Complex(2.0));

  auto R = forward_transform(testing::random_physical(g, 5));
  auto D1 = dealias(R);
  auto D2 = dealias(D1);
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(D1[i] == D2[i]);
  CHECK(spectral_l2_norm(D1) <= spectral_l2_norm(R));
}

TEST_CASE("Lp norms of closed forms") {
  Grid g(64);
  auto one = PhysicalField::sample(g, [](double, double, double) { return 1.0; });
  for (double p : {1.0, 2.0, 3.0, 6.0}) {
    CHECK(lp_norm(one, p) == doctest::Approx(std::pow(8.0 * pi * pi * pi, 1.0 / p)).epsilon(1e-13));
  }
  CHECK(lp_norm(one, kInfinity) == 1.0);
  auto s = PhysicalField::sample(g, [](double x, double, double) { return std::sin(x); });
  CHECK(lp_norm(s, 2.0) == doctest::Approx(std::sqrt(4.0 * pi * pi * pi)).epsilon(1e-13));
  CHECK(std::abs(lp_norm(s, kInfinity) - 1.0) <= 1e-3);
  CHECK_THROWS_AS(lp_norm(s, 0.5), std::invalid_argument);
}

TEST_CASE("Parseval") {
  Grid g(16, 8, 12);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto f = testing::random_physical(g, seed);
    const double l2 = lp_norm(f, 2.0);
    CHECK(l2 * l2 == doctest::Approx(std::pow(spectral_l2_norm(forward_transform(f)), 2)).epsilon(1e-10));
  }
}

TEST_CASE("vector magnitude norm") {
  Grid g(16);
  auto a = PhysicalField::sample(g, [](double x, double, double) { return std::sin(x); });
  auto b = PhysicalField::sample(g, [](double x, double, double) { return std::cos(x); });
  const PhysicalField* comps[] = {&a, &b};
  CHECK(lp_norm(comps, 6.0) == doctest::Approx(std::pow(8.0 * pi * pi * pi, 1.0 / 6.0)).epsilon(1e-13));
  CHECK(lp_norm(comps, kInfinity) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("anisotropic norms") {
  Grid g(32);
  auto f = PhysicalField::sample(
      g, [](double x, double, double z) { return std::sin(x) * std::cos(z); });
  auto F = forward_transform(f);
  CHECK(aniso_norm(F, 0.0, 0.0, 3.0) == doctest::Approx(lp_norm(f, 3.0)).epsilon(1e-14));
  CHECK(aniso_norm(F, 0.5, 0.0, 2.0) ==
        doctest::Approx(std::sqrt(2.0) * lp_norm(f, 2.0)).epsilon(1e-12));
  auto s = forward_transform(
      PhysicalField::sample(g, [](double x, double, double) { return std::sin(x); }));
  CHECK(aniso_norm(s, 0.0, 0.5, 2.0) == doctest::Approx(std::sqrt(4.0 * pi * pi * pi)).epsilon(1e-12));
  auto c = forward_transform(
      PhysicalField::sample(g, [](double, double, double z) { return 1.0 + std::cos(z); }));
  CHECK_THROWS_AS(aniso_norm(c, 0.0, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("snapshot round trip and corruption") {
  Grid g(4, 6, 8);
  auto f = testing::random_physical(g, 9);
  std::stringstream buf;
  write_snapshot(buf, "theta", f);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "RCS1");
  CHECK(bytes.size() == 4 + 16 + 5 + 8 * g.size());
  auto snap = read_snapshot(buf);
  CHECK(snap.name == "theta");
  CHECK(snap.field.grid() == g);
  CHECK(max_abs_diff(snap.field, f) == 0.0);

  std::stringstream bad("RCS2xxxxxxxxxxxxxxxx");
  CHECK_THROWS_AS(read_snapshot(bad), std::runtime_error);
  std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_snapshot(truncated), std::runtime_error);
}
