#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vascorr/rational.hpp"

namespace vascorr {

/// Mobius function: (-1)^k on squarefree n with k prime factors, 0 otherwise.
/// Deterministic trial division; intended for n up to ~10^6.
inline int mobius(long long n) {
  if (n <= 0) throw std::domain_error("mobius: argument must be positive");
  int factors = 0;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      ++factors;
    }
  }
  if (n > 1) ++factors;
  return (factors % 2 == 0) ? 1 : -1;
}

/// 1 if n is a power of two (2^0 = 1 included), else 0.
inline int psi_pow2(long long n) {
  if (n <= 0) throw std::domain_error("psi_pow2: argument must be positive");
  return (n & (n - 1)) == 0 ? 1 : 0;
}

/// Dense arithmetic sequence a(1..N), exact rational values.
/// Index 0 exists but is unused; indexing is 1-based.
class ArithSeq {
 public:
  explicit ArithSeq(std::size_t n) : values_(n + 1, Rational(0)) {
    if (n == 0) throw std::domain_error("ArithSeq: length must be at least 1");
  }

  std::size_t size() const { return values_.size() - 1; }

  Rational& operator[](std::size_t m) { return values_.at(m); }
  const Rational& operator[](std::size_t m) const { return values_.at(m); }

  friend bool operator==(const ArithSeq& a, const ArithSeq& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<Rational> values_;
};

/// delta(1)=1, delta(m)=0 for m>1: the Dirichlet convolution identity.
inline ArithSeq delta_seq(std::size_t n) {
  ArithSeq s(n);
  s[1] = 1;
  return s;
}

inline ArithSeq ones_seq(std::size_t n) {
  ArithSeq s(n);
  for (std::size_t m = 1; m <= n; ++m) s[m] = 1;
  return s;
}

inline ArithSeq mobius_seq(std::size_t n) {
  ArithSeq s(n);
  for (std::size_t m = 1; m <= n; ++m) s[m] = mobius(static_cast<long long>(m));
  return s;
}

inline ArithSeq psi_seq(std::size_t n) {
  ArithSeq s(n);
  for (std::size_t m = 1; m <= n; ++m) s[m] = psi_pow2(static_cast<long long>(m));
  return s;
}

/// Dirichlet coefficients of 1/(1 - 2^{1-s}): value 2^h at 2^h, zero
/// elsewhere. Convolving with mu yields the closed-form coefficients c_k.
inline ArithSeq pow2_weight_seq(std::size_t n) {
  ArithSeq s(n);
  for (std::size_t m = 1; m <= n; m *= 2) s[m] = static_cast<long long>(m);
  return s;
}

/// alt(m) = (-1)^{m+1}
inline ArithSeq alternating_seq(std::size_t n) {
  ArithSeq s(n);
  for (std::size_t m = 1; m <= n; ++m) s[m] = (m % 2 == 1) ? 1 : -1;
  return s;
}

/// (f*g)(m) = sum_{d|m} f(d) g(m/d), exact.
inline ArithSeq dirichlet_convolve(const ArithSeq& f, const ArithSeq& g) {
  if (f.size() != g.size())
    throw std::invalid_argument("dirichlet_convolve: length mismatch");
  const std::size_t n = f.size();
  ArithSeq h(n);
  for (std::size_t d = 1; d <= n; ++d) {
    if (f[d] == 0) continue;
    for (std::size_t q = 1; d * q <= n; ++q) h[d * q] += f[d] * g[q];
  }
  return h;
}

/// Dirichlet inverse g of f, requiring f(1) != 0:
///   g(1) = 1/f(1),  g(m) = -(1/f(1)) sum_{d|m, d>1} f(d) g(m/d).
inline ArithSeq dirichlet_inverse(const ArithSeq& f) {
  if (f[1] == 0)
    throw std::domain_error("dirichlet_inverse: f(1) = 0 is not invertible");
  const std::size_t n = f.size();
  ArithSeq g(n);
  g[1] = Rational(1) / f[1];
  for (std::size_t m = 2; m <= n; ++m) {
    Rational s(0);
    for (std::size_t d = 2; d * d <= m; ++d) {
      if (m % d != 0) continue;
      s += f[d] * g[m / d];
      std::size_t e = m / d;
      if (e != d) s += f[e] * g[d];
    }
    s += f[m] * g[1];  // d = m (m >= 2 so d > 1)
    g[m] = -s / f[1];
  }
  return g;
}

/// Closed form for the first-correction coefficients: with k = 2^r m, m odd,
/// c_k = 2^{max(r-1,0)} mu(m).
inline long long coeff_closed(long long k) {
  if (k <= 0) throw std::domain_error("coeff_closed: argument must be positive");
  int r = 0;
  while (k % 2 == 0) {
    k /= 2;
    ++r;
  }
  long long pow2 = r == 0 ? 1 : (1LL << (r - 1));
  return pow2 * mobius(k);
}

}  // namespace vascorr
