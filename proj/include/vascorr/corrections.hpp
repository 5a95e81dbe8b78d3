#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vascorr/natural_function.hpp"
#include "vascorr/numtheory.hpp"

namespace vascorr {

/// The three Vasyunin seed constructions. Each seed(n) is an idempotent
/// zero-sum step function equal to 1 on [n, n+1) and 0 on [0, n).
enum class SeedFamily { First, Second, Third };

inline const char* to_string(SeedFamily f) {
  switch (f) {
    case SeedFamily::First: return "first";
    case SeedFamily::Second: return "second";
    case SeedFamily::Third: return "third";
  }
  return "?";
}

inline std::optional<SeedFamily> seed_family_from_string(std::string_view s) {
  if (s == "first") return SeedFamily::First;
  if (s == "second") return SeedFamily::Second;
  if (s == "third") return SeedFamily::Third;
  return std::nullopt;
}

/// First:  floor(x/n) - 2 floor(x/2n)
/// Second: floor(x/n) - floor(x/(n+1)) - floor(x/(n(n+1)))
/// Third:  floor(x/n) - floor(x/(n+1)) - floor(x/2n) + floor(x/2(n+1))
///         - floor(x/(2n(n+1)))
inline NaturalFunction seed(SeedFamily family, long long n) {
  if (n < 1) throw std::domain_error("seed: n must be positive");
  if (n > (1LL << 30)) throw std::domain_error("seed: n too large");
  const Rational one(1), minus_one(-1), minus_two(-2);
  switch (family) {
    case SeedFamily::First:
      return make_natural({{n, one}, {2 * n, minus_two}});
    case SeedFamily::Second:
      return make_natural({{n, one}, {n + 1, minus_one}, {n * (n + 1), minus_one}});
    case SeedFamily::Third:
      return make_natural({{n, one},
                           {n + 1, minus_one},
                           {2 * n, minus_one},
                           {2 * (n + 1), one},
                           {2 * n * (n + 1), minus_one}});
  }
  throw std::domain_error("seed: unknown family");
}

/// A correction phi_n = sum_{k=1}^n c_k seed(k) with coefficients from the
/// recurrence c_n = 1 - sum_{k<n} c_k seed_k(n).
struct Correction {
  SeedFamily family = SeedFamily::First;
  long long n = 0;
  std::vector<Rational> coeffs;  // c_1..c_n, index 0 holds c_1
  NaturalFunction phi;

  const Rational& c(long long k) const { return coeffs.at(static_cast<std::size_t>(k - 1)); }
};

/// Incremental builder: extends coefficients and the assembled phi one index
/// at a time, so sweeps over n cost O(n^2) small-integer work instead of
/// rebuilding each prefix from scratch.
class CorrectionBuilder {
 public:
  explicit CorrectionBuilder(SeedFamily family) : family_(family) {}

  void extend_to(long long n) {
    if (n < 1) throw std::domain_error("build_correction: n must be positive");
    while (current_n_ < n) {
      const long long m = current_n_ + 1;
      seeds_.push_back(seed(family_, m));
      const NaturalFunction& seed_m = seeds_.back();
      if (evaluate(seed_m, Rational(m)) != 1)
        throw std::domain_error(
            "build_correction: seed_n(n) != 1, recurrence is ill-posed for this family");
      Rational c(1);
      for (long long k = 1; k < m; ++k)
        c -= coeffs_[static_cast<std::size_t>(k - 1)] *
             evaluate(seeds_[static_cast<std::size_t>(k - 1)], Rational(m));
      if (family_ == SeedFamily::First && !is_integer(c))
        throw std::domain_error("build_correction: first-family coefficient not integral");
      coeffs_.push_back(c);
      for (const auto& [a, alpha] : seed_m.terms()) phi_terms_[a] += c * alpha;
      current_n_ = m;
    }
  }

  long long size() const { return current_n_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  Correction snapshot() const {
    std::vector<std::pair<long long, Rational>> terms(phi_terms_.begin(),
                                                      phi_terms_.end());
    Correction corr{family_, current_n_, coeffs_, make_natural(terms)};
    if (!corr.phi.certified_zero_sum())
      throw std::domain_error("build_correction: assembled phi lost the zero-sum certificate");
    return corr;
  }

 private:
  SeedFamily family_;
  long long current_n_ = 0;
  std::vector<Rational> coeffs_;
  std::vector<NaturalFunction> seeds_;
  std::map<long long, Rational> phi_terms_;
};

inline Correction build_correction(SeedFamily family, long long n) {
  CorrectionBuilder builder(family);
  builder.extend_to(n);
  return builder.snapshot();
}

/// Witness for the plateau phi_n = 1 on [1, n+1) (and 0 on [0,1)).
struct PlateauReport {
  bool pass = false;
  long long first_failure = -1;  // interval index m, or -1 when pass
  Rational value;                // value found on [m, m+1)
};

inline PlateauReport verify_plateau(const Correction& corr) {
  StepProfile prof = profile(corr.phi, corr.n + 1);
  for (long long m = 0; m <= corr.n; ++m) {
    const Rational expected = (m == 0) ? Rational(0) : Rational(1);
    const Rational& got = prof.values[static_cast<std::size_t>(m)];
    if (got != expected) return {false, m, got};
  }
  return {true, -1, Rational(0)};
}

/// Canonical coefficient map of a first-family correction:
///   phi_n = sum_{k<=n} mu(k) floor(x/k) - 2 sum_{n/2 < k <= n} c_k floor(x/2k).
inline NaturalFunction to_canonical(const Correction& corr) {
  if (corr.family != SeedFamily::First)
    throw std::domain_error(
        "to_canonical: closed canonical form applies to the first family only");
  std::vector<std::pair<long long, Rational>> terms;
  for (long long k = 1; k <= corr.n; ++k) {
    int mu = mobius(k);
    if (mu != 0) terms.emplace_back(k, Rational(mu));
  }
  for (long long k = corr.n / 2 + 1; k <= corr.n; ++k)
    terms.emplace_back(2 * k, Rational(-2) * corr.c(k));
  return make_natural(terms);
}

/// Checks that the canonical coefficients of phi at denominators k <= n equal
/// mu(k); holds for every family once the plateau reaches n+1.
struct LeadingCoeffReport {
  bool pass = false;
  long long first_mismatch = -1;
  Rational found;
  int expected = 0;
};

inline LeadingCoeffReport leading_coefficients_check(const Correction& corr) {
  for (long long k = 1; k <= corr.n; ++k) {
    const int mu = mobius(k);
    const Rational found = corr.phi.coefficient(k);
    if (found != mu) return {false, k, found, mu};
  }
  return {true, -1, Rational(0), 0};
}

}  // namespace vascorr
