#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotconv/grid.hpp"

namespace rotconv {

/// Exact nonnegative-capable rational with positive denominator, kept reduced.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d = 1);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<=(const Rational& a, const Rational& b);
};

/// m(k) = (1+k3^2)^a |k_h|^{2b} / ((k3^2)^c + |k_h|^{2d}), zero on k1 = k2 = 0.
struct MultiplierSpec {
  std::string name;
  Rational a, b, c, d;
  std::string source_anchor;  ///< the estimate this entry certifies
};

/// Named entries used by the velocity-from-temperature estimates.
const std::vector<MultiplierSpec>& multiplier_catalog();
/// Throws std::out_of_range for an unknown name.
const MultiplierSpec& catalog_entry(const std::string& name);

double multiplier_value(const MultiplierSpec& spec, const Wavevector& k);

/// a/c + b/d <= 1 in exact arithmetic. Throws std::invalid_argument if c or d is 0.
bool hypothesis_check(const MultiplierSpec& spec);
/// a/c + b/d, exactly.
Rational hypothesis_sum(const MultiplierSpec& spec);

/// max of multiplier_value over |k_i| <= K. Throws std::invalid_argument for K < 8.
double lattice_sup(const MultiplierSpec& spec, int K);

/// max over seeded random band-limited f (zero horizontal mean) of
/// ||m f||_p / ||f||_p on a 32^3 grid. Requires 1 < p < infinity.
double empirical_lp_ratio(const MultiplierSpec& spec, double p, int trials, std::uint64_t seed);

/// JSON document {"entries": [{name, a, b, c, d, source_anchor}, ...]};
/// exponents as "p/q" strings.
std::string catalog_json();

}  // namespace rotconv
