#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vascorr/rational.hpp"

namespace vascorr {

/// Finite combination of dilated floor functions, sum_a alpha_a * floor(x/a),
/// stored as a canonical sparse map denominator -> nonzero coefficient.
/// certified_zero_sum() is true iff sum_a alpha_a / a = 0 exactly, which makes
/// the function bounded and periodic.
class NaturalFunction {
 public:
  using TermMap = std::map<long long, Rational>;

  NaturalFunction() : certified_zero_sum_(true) {}

  explicit NaturalFunction(const std::vector<std::pair<long long, Rational>>& terms) {
    for (const auto& [a, alpha] : terms) {
      if (a < 1) throw std::domain_error("NaturalFunction: denominators must be positive");
      terms_[a] += alpha;
    }
    for (auto it = terms_.begin(); it != terms_.end();)
      it = (it->second == 0) ? terms_.erase(it) : std::next(it);
    certify();
    build_fast_terms();
  }

  const TermMap& terms() const { return terms_; }
  bool certified_zero_sum() const { return certified_zero_sum_; }
  bool is_zero() const { return terms_.empty(); }

  /// Coefficient at denominator a; zero when absent.
  Rational coefficient(long long a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  long long max_denominator() const {
    return terms_.empty() ? 1 : terms_.rbegin()->first;
  }

  // small integer coefficients and denominators: enables int64 evaluation
  bool has_fast_terms() const { return !fast_terms_.empty() || terms_.empty(); }
  const std::vector<std::pair<long long, long long>>& fast_terms() const {
    return fast_terms_;
  }

  friend bool operator==(const NaturalFunction& f, const NaturalFunction& g) {
    return f.terms_ == g.terms_;
  }

 private:
  void certify() {
    Rational s(0);
    for (const auto& [a, alpha] : terms_) s += alpha / a;
    certified_zero_sum_ = (s == 0);
  }

  void build_fast_terms() {
    constexpr long long kLimit = 1LL << 31;
    for (const auto& [a, alpha] : terms_) {
      if (a >= kLimit || !is_integer(alpha) || abs(numerator(alpha)) >= kLimit) {
        fast_terms_.clear();
        return;
      }
      fast_terms_.emplace_back(a, numerator(alpha).convert_to<long long>());
    }
  }

  TermMap terms_;
  std::vector<std::pair<long long, long long>> fast_terms_;
  bool certified_zero_sum_ = true;
};

inline NaturalFunction make_natural(
    const std::vector<std::pair<long long, Rational>>& terms) {
  return NaturalFunction(terms);
}

/// phi + lambda * psi, merged and re-certified.
inline NaturalFunction add_scaled(const NaturalFunction& phi,
                                  const NaturalFunction& psi,
                                  const Rational& lambda) {
  std::vector<std::pair<long long, Rational>> merged(phi.terms().begin(),
                                                     phi.terms().end());
  for (const auto& [a, alpha] : psi.terms()) merged.emplace_back(a, lambda * alpha);
  return NaturalFunction(merged);
}

/// Pointwise value sum_a alpha_a * floor(x/a), exact; right-continuous.
inline Rational evaluate(const NaturalFunction& phi, const Rational& x) {
  if (x < 0) throw std::domain_error("evaluate: x must be nonnegative");
  if (phi.has_fast_terms() && is_integer(x) && fits_int64(numerator(x))) {
    const long long m = numerator(x).convert_to<long long>();
    __int128 acc = 0;
    for (const auto& [a, alpha] : phi.fast_terms())
      acc += static_cast<__int128>(alpha) * (m / a);
    return Rational(int128_to_integer(acc));
  }
  Rational total(0);
  for (const auto& [a, alpha] : phi.terms())
    total += alpha * Rational(floor_rational(x / Rational(a)));
  return total;
}

/// Jump of phi at the integer m: sum of coefficients over denominators a | m.
inline Rational jump_at(const NaturalFunction& phi, long long m) {
  if (m < 1) throw std::domain_error("jump_at: m must be positive");
  Rational j(0);
  for (const auto& [a, alpha] : phi.terms())
    if (m % a == 0) j += alpha;
  return j;
}

/// sum_a |alpha_a|; bounds |phi| on [0,inf) when phi is zero-sum certified.
inline Rational sup_bound(const NaturalFunction& phi) {
  Rational s(0);
  for (const auto& [a, alpha] : phi.terms()) s += abs(alpha);
  return s;
}

/// lcm of the denominators; the integer-interval value sequence repeats with
/// this period. Only meaningful (and only allowed) for zero-sum functions.
inline Integer period(const NaturalFunction& phi) {
  if (!phi.certified_zero_sum())
    throw std::domain_error("period: function is not certified zero-sum");
  Integer l(1);
  for (const auto& [a, alpha] : phi.terms()) l = lcm(l, Integer(a));
  return l;
}

/// Values on the integer intervals [m, m+1), 0 <= m < horizon.
struct StepProfile {
  std::vector<Rational> values;
  long long horizon = 0;
  std::optional<Integer> period;
};

inline StepProfile profile(const NaturalFunction& phi, long long horizon) {
  if (horizon < 0) throw std::domain_error("profile: horizon must be nonnegative");
  StepProfile p;
  p.horizon = horizon;
  p.values.reserve(static_cast<std::size_t>(horizon));
  for (long long m = 0; m < horizon; ++m)
    p.values.push_back(evaluate(phi, Rational(m)));
  if (phi.certified_zero_sum()) p.period = period(phi);
  return p;
}

namespace detail {

// Balanced accumulator: keeps partial sums of ~equal magnitude so GMP
// denominators stay near the lcm of each block instead of the running lcm.
class PairwiseSum {
 public:
  void push(Rational r) {
    std::size_t level = 0;
    while (level < stack_.size() && occupied_[level]) {
      r += stack_[level];
      occupied_[level] = false;
      ++level;
    }
    if (level == stack_.size()) {
      stack_.push_back(std::move(r));
      occupied_.push_back(true);
    } else {
      stack_[level] = std::move(r);
      occupied_[level] = true;
    }
  }

  Rational total() const {
    Rational t(0);
    for (std::size_t i = 0; i < stack_.size(); ++i)
      if (occupied_[i]) t += stack_[i];
    return t;
  }

 private:
  std::vector<Rational> stack_;
  std::vector<bool> occupied_;
};

// Walk the value runs of phi over [A, B), apply `transform` to each run value,
// and sum transform(v) * (1/left - 1/right) over the runs. Jumps happen only
// at integer multiples of the term denominators, so runs are enumerated with a
// schedule of next-multiple candidates.
template <class Fn>
Rational fold_weighted_pieces(const NaturalFunction& phi, const Rational& A,
                              const Rational& B, Fn&& transform) {
  if (A < 0 || A > B) throw std::domain_error("weighted integral: require 0 <= A <= B");
  if (A == B) return Rational(0);

  const long long first_m = to_int64(floor_rational(A)) + 1;
  const long long last_m =
      is_integer(B) ? to_int64(numerator(B)) - 1 : to_int64(floor_rational(B));

  // (next multiple, denominator, coefficient)
  using Entry = std::tuple<long long, long long, const Rational*>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> schedule;
  for (const auto& [a, alpha] : phi.terms()) {
    const long long q = first_m / a + (first_m % a != 0 ? 1 : 0);
    if (q > last_m / a) continue;  // no multiple of a inside the window
    schedule.emplace(q * a, a, &alpha);
  }

  PairwiseSum acc;
  Rational v = evaluate(phi, A);
  Rational prev = A;
  auto emit = [&](const Rational& right) {
    Rational t = transform(v);
    if (t == 0) return;
    if (prev == 0)
      throw std::domain_error("weighted integral: divergent at 0 (nonzero value on [0,1))");
    acc.push(t * (Rational(1) / prev - Rational(1) / right));
  };

  while (!schedule.empty()) {
    const long long m = std::get<0>(schedule.top());
    Rational jump(0);
    while (!schedule.empty() && std::get<0>(schedule.top()) == m) {
      auto [pos, a, alpha] = schedule.top();
      schedule.pop();
      jump += *alpha;
      if (a <= last_m - pos) schedule.emplace(pos + a, a, alpha);
    }
    if (jump == 0) continue;
    emit(Rational(m));
    v += jump;
    prev = m;
  }
  emit(B);
  return acc.total();
}

}  // namespace detail

/// Exact integral of phi(x) x^-2 over the finite window [A, B].
inline Rational integrate_weighted(const NaturalFunction& phi, const Rational& A,
                                   const Rational& B) {
  return detail::fold_weighted_pieces(phi, A, B,
                                      [](const Rational& v) { return v; });
}

/// Exact harmonic numbers H_n = sum_{m<=n} 1/m with nested reuse: each query
/// extends the nearest smaller cached value by a divide-and-conquer range sum.
/// Not thread-safe; share one instance per sweep for near-linear total cost.
class HarmonicTable {
 public:
  const Rational& at(long long n) {
    if (n < 0) throw std::domain_error("HarmonicTable: index must be nonnegative");
    auto it = cache_.upper_bound(n);
    --it;  // cache_ always holds 0 -> H_0
    if (it->first == n) return it->second;
    Rational h = it->second + range_reciprocal_sum(it->first + 1, n);
    return cache_.emplace(n, std::move(h)).first->second;
  }

 private:
  static Rational range_reciprocal_sum(long long lo, long long hi) {
    if (lo > hi) return Rational(0);
    if (hi - lo < 8) {
      Rational s(0);
      for (long long m = lo; m <= hi; ++m) s += Rational(1) / m;
      return s;
    }
    const long long mid = lo + (hi - lo) / 2;
    return range_reciprocal_sum(lo, mid) + range_reciprocal_sum(mid + 1, hi);
  }

  std::map<long long, Rational> cache_{{0, Rational(0)}};
};

/// Integer-window overload: same exact value as the piecewise route via the
/// telescoped form  int_1^X floor(x/a) x^-2 dx = H_q/a - q/X,  q = floor(X/a).
inline Rational integrate_weighted(const NaturalFunction& phi, long long A,
                                   long long B, HarmonicTable& harmonics) {
  if (A < 0 || A > B) throw std::domain_error("weighted integral: require 0 <= A <= B");
  auto prefix = [&](long long upper) {  // integral over [1, upper]
    Rational t(0);
    if (upper <= 1) return t;
    // denominators descending so harmonic queries ascend (cheap increments)
    for (auto it = phi.terms().rbegin(); it != phi.terms().rend(); ++it) {
      const long long q = upper / it->first;
      t += it->second * (harmonics.at(q) / it->first - Rational(q) / upper);
    }
    return t;
  };
  Rational low = prefix(A);
  return prefix(B) - low;
}

/// Closed form, exact truncation, and rigorous tail bound for
/// int_1^inf phi(x) x^-2 dx of a zero-sum function.
struct InfiniteIntegral {
  Real closed_form;          // -sum_a alpha_a ln(a)/a
  Rational truncated;        // exact integral over [1, X]
  Rational tail_bound;       // sup_bound(phi) / X
  long long truncation_point = 0;
};

inline InfiniteIntegral integral_to_infinity(const NaturalFunction& phi,
                                             long long truncation_point,
                                             HarmonicTable& harmonics) {
  if (!phi.certified_zero_sum())
    throw std::domain_error("integral_to_infinity: function is not certified zero-sum");
  if (truncation_point < 1)
    throw std::domain_error("integral_to_infinity: truncation point must be >= 1");
  sync_real_precision();
  Real closed(0);
  for (const auto& [a, alpha] : phi.terms())
    closed -= Real(alpha) * log(Real(a)) / a;
  InfiniteIntegral r{std::move(closed),
                     integrate_weighted(phi, 1, truncation_point, harmonics),
                     sup_bound(phi) / truncation_point, truncation_point};
  return r;
}

inline InfiniteIntegral integral_to_infinity(const NaturalFunction& phi,
                                             long long truncation_point = 1LL << 16) {
  HarmonicTable harmonics;
  return integral_to_infinity(phi, truncation_point, harmonics);
}

/// Exact int_A^B |phi(x) - ref|^p x^-2 dx for p in {1, 2}.
inline Rational norm_weighted(const NaturalFunction& phi, const Rational& ref,
                              int p, const Rational& A, const Rational& B) {
  if (p != 1 && p != 2) throw std::domain_error("norm_weighted: p must be 1 or 2");
  if (A < 1) throw std::domain_error("norm_weighted: require 1 <= A <= B");
  return detail::fold_weighted_pieces(phi, A, B, [&](const Rational& v) {
    Rational d = v - ref;
    return p == 1 ? Rational(abs(d)) : Rational(d * d);
  });
}

}  // namespace vascorr
