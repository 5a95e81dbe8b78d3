#pragma once

// Shared test-side oracles and generators. Everything here is intentionally
// independent of the library's integration/walk machinery: plain loops only.

#include <random>
#include <utility>
#include <vector>

#include "vascorr/natural_function.hpp"

namespace vascorr::testing {

// Splits [A, B] at every integer (no run merging, no schedules) and sums
// value * (1/left - 1/right) piece by piece.
inline Rational naive_integrate(const NaturalFunction& phi, const Rational& A,
                                const Rational& B) {
  Rational total(0);
  Rational left = A;
  while (left < B) {
    Rational right = Rational(floor_rational(left)) + 1;
    if (right > B) right = B;
    const Rational v = evaluate(phi, left);
    if (v != 0) total += v * (Rational(1) / left - Rational(1) / right);
    left = right;
  }
  return total;
}

inline Rational random_rational(std::mt19937_64& rng, int num_lo = -9, int num_hi = 9,
                                int den_hi = 9) {
  std::uniform_int_distribution<int> num(num_lo, num_hi);
  std::uniform_int_distribution<int> den(1, den_hi);
  return Rational(num(rng)) / den(rng);
}

// Zero-sum natural function with integer coefficients in [-5, 5] and
// denominators <= 30, built from zero-sum building blocks
//   {a: t, 2a: -2t}  and  {a: t, a+1: -t, a(a+1): -t}
// with rejection on the coefficient budget.
inline NaturalFunction random_zero_sum(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> block_count(1, 4);
  std::uniform_int_distribution<int> block_kind(0, 1);
  std::uniform_int_distribution<int> scale(-2, 2);
  for (;;) {
    std::vector<std::pair<long long, Rational>> terms;
    const int blocks = block_count(rng);
    for (int b = 0; b < blocks; ++b) {
      int t = scale(rng);
      if (t == 0) t = 1;
      if (block_kind(rng) == 0) {
        std::uniform_int_distribution<long long> base(1, 15);
        const long long a = base(rng);
        terms.emplace_back(a, Rational(t));
        terms.emplace_back(2 * a, Rational(-2 * t));
      } else {
        std::uniform_int_distribution<long long> base(1, 4);
        const long long a = base(rng);
        terms.emplace_back(a, Rational(t));
        terms.emplace_back(a + 1, Rational(-t));
        terms.emplace_back(a * (a + 1), Rational(-t));
      }
    }
    NaturalFunction phi = make_natural(terms);
    if (phi.is_zero() || !phi.certified_zero_sum()) continue;
    bool in_budget = true;
    for (const auto& [a, alpha] : phi.terms())
      if (abs(alpha) > 5) in_budget = false;
    if (in_budget) return phi;
  }
}

}  // namespace vascorr::testing
