#include "rotconv/multiplier.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "rotconv/norms.hpp"
#include "rotconv/operators.hpp"
#include "rotconv/random_field.hpp"
#include "rotconv/transform.hpp"

namespace rotconv {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num == 0) throw std::invalid_argument("Rational: division by zero");
  return Rational(a.num * b.den, a.den * b.num);
}

bool operator<=(const Rational& a, const Rational& b) { return a.num * b.den <= b.num * a.den; }

const std::vector<MultiplierSpec>& multiplier_catalog() {
  static const std::vector<MultiplierSpec> catalog = {
      {"W", {0}, {2}, {1}, {3}, "w from theta: |k_h|^4 / (k3^2 + |k_h|^6)"},
      {"E1", {5, 9}, {13, 3}, {2}, {6},
       "w bounded in L^2 by theta, squared multiplier with (1+k3^2)^{5/9}"},
      {"E2", {1, 4}, {13, 6}, {1}, {3},
       "(I-d_zz)^{1/4} A^{1/6} w bounded in L^3 by theta; gives sup_z ||w||_L6(xy) <= C ||theta||_3"},
      {"E3", {3, 5}, {7, 10}, {1}, {3},
       "(I-d_zz)^{1/10} A^{1/5} (u,v) bounded by theta; gives ||(u,v)||_{10/3} <= C ||theta||_2"},
      {"E4", {3, 5}, {6, 5}, {1}, {3},
       "(I-d_zz)^{1/10} A^{1/5} d_x (u,v) bounded in L^6 by theta; gives ||d_x (u,v)||_inf <= C ||theta||_6"},
      {"E5", {1, 3}, {2}, {1}, {3},
       "(I-d_zz)^{1/3} A^{-1/2} w bounded in L^2 by A^{-1/2} theta"},
      {"LapW", {0}, {3}, {1}, {3}, "Delta_h w from theta: |k_h|^6 / (k3^2 + |k_h|^6)"},
      {"LapU", {1, 2}, {3, 2}, {1}, {3},
       "Delta_h (u,v) from theta: |k_h|^3 |k3| / (k3^2 + |k_h|^6) with |k3| <= (1+k3^2)^{1/2}"},
  };
  return catalog;
}

const MultiplierSpec& catalog_entry(const std::string& name) {
  for (const auto& e : multiplier_catalog()) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("catalog_entry: unknown multiplier " + name);
}

double multiplier_value(const MultiplierSpec& spec, const Wavevector& k) {
  if (k.horizontal_mean()) return 0.0;
  const double kh2 = k.horizontal_sq();
  const double k32 = static_cast<double>(k.k3) * k.k3;
  const double num = std::pow(1.0 + k32, spec.a.value()) * std::pow(kh2, spec.b.value());
  const double den = std::pow(k32, spec.c.value()) + std::pow(kh2, spec.d.value());
  return num / den;
}

Rational hypothesis_sum(const MultiplierSpec& spec) {
  if (spec.c.num == 0 || spec.d.num == 0) {
    throw std::invalid_argument("hypothesis_check: c and d must be positive");
  }
  return spec.a / spec.c + spec.b / spec.d;
}

bool hypothesis_check(const MultiplierSpec& spec) { return hypothesis_sum(spec) <= Rational(1); }

double lattice_sup(const MultiplierSpec& spec, int K) {
  if (K < 8) throw std::invalid_argument("lattice_sup: K must be at least 8");
  // m depends on k1^2 + k2^2 and k3^2 only, so one octant covers the cube.
  double sup = 0.0;
  for (int k1 = 0; k1 <= K; ++k1) {
    for (int k2 = 0; k2 <= k1; ++k2) {
      for (int k3 = 0; k3 <= K; ++k3) {
        sup = std::max(sup, multiplier_value(spec, {k1, k2, k3}));
      }
    }
  }
  return sup;
}

double empirical_lp_ratio(const MultiplierSpec& spec, double p, int trials, std::uint64_t seed) {
  if (!(p > 1.0) || std::isinf(p)) {
    throw std::invalid_argument("empirical_lp_ratio: p must lie in (1, infinity)");
  }
  if (trials < 1) throw std::invalid_argument("empirical_lp_ratio: trials must be positive");
  const Grid grid(32);
  const Symbol m(grid, [&spec](const Wavevector& k) { return Complex(multiplier_value(spec, k)); });
  double ratio = 0.0;
  for (int t = 0; t < trials; ++t) {
    const SpectralField F = random_band_limited(grid, 1, 10, seed + static_cast<std::uint64_t>(t));
    const double num = lp_norm(inverse_transform(apply_symbol(F, m)), p);
    const double den = lp_norm(inverse_transform(F), p);
    ratio = std::max(ratio, num / den);
  }
  return ratio;
}

std::string catalog_json() {
  nlohmann::ordered_json doc;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : multiplier_catalog()) {
    doc["entries"].push_back({{"name", e.name},
                              {"a", e.a.str()},
                              {"b", e.b.str()},
                              {"c", e.c.str()},
                              {"d", e.d.str()},
                              {"source_anchor", e.source_anchor}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace rotconv
