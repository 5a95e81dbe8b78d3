#pragma once

#include <chrono>
#include <ctime>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vascorr/corrections.hpp"
#include "vascorr/natural_function.hpp"
#include "vascorr/numtheory.hpp"

namespace vascorr {

/// Exact truncated norm plus a rigorous bound on the omitted tail: the true
/// infinite-window value lies in [truncated - tail_bound, truncated + tail_bound].
struct NormEstimate {
  Rational truncated;
  long long truncation_point = 0;
  Rational tail_bound;
  std::string decimal;  // rendering of `truncated` at the configured precision
};

/// Default truncation policy X = n * 2^12: keeps the tail bound below ~1e-3
/// for the flagged rows while the exact window stays desk-scale.
inline long long default_truncation(long long n) { return n << 12; }

namespace detail {

inline NormEstimate delta_norm_impl(const Rational& c_n, const NaturalFunction& seed_n,
                                    long long n, long long truncation_point) {
  if (n < 2) throw std::domain_error("delta_norm: n must be at least 2");
  if (truncation_point < n)
    throw std::domain_error("delta_norm: truncation point must be >= n");
  const NaturalFunction diff = add_scaled(NaturalFunction(), seed_n, c_n);
  NormEstimate est;
  est.truncated = norm_weighted(diff, Rational(0), 1, Rational(1), Rational(truncation_point));
  est.truncation_point = truncation_point;
  est.tail_bound = abs(c_n) * sup_bound(seed_n) / truncation_point;
  est.decimal = decimal_string(est.truncated);
  return est;
}

}  // namespace detail

/// ||phi_n - phi_{n-1}||_1 = |c_n| int_1^X seed_n(x) x^-2 dx, exact over [1, X].
inline NormEstimate delta_norm(SeedFamily family, long long n, long long truncation_point) {
  if (n < 2) throw std::domain_error("delta_norm: n must be at least 2");
  CorrectionBuilder builder(family);
  builder.extend_to(n);
  return detail::delta_norm_impl(builder.coeffs().back(), seed(family, n), n,
                                 truncation_point);
}

/// I_n = int_1^inf (phi_n(x) - 1) x^-2 dx as (optional closed form, exact
/// truncation, tail bound). The closed form exists for the first family:
/// I_n = ln(2) * sum_{k<=n} c_k/k - 1, recorded via its exact rational factor.
struct IntegralDiagnostic {
  std::optional<Rational> log2_factor;  // first family: I_n = ln(2)*factor - 1
  std::optional<Real> closed_form;
  Rational truncated;
  long long truncation_point = 0;
  Rational tail_bound;
  std::string decimal;  // rendering of `truncated`
};

namespace detail {

inline IntegralDiagnostic integral_diagnostic_impl(SeedFamily family,
                                                   const std::vector<Rational>& coeffs,
                                                   const NaturalFunction& phi,
                                                   long long n, long long truncation_point,
                                                   HarmonicTable& harmonics) {
  IntegralDiagnostic diag;
  diag.truncation_point = truncation_point;
  // int_1^X (phi - 1) x^-2 dx = int_1^X phi x^-2 dx - (1 - 1/X)
  diag.truncated = integrate_weighted(phi, 1, truncation_point, harmonics) -
                   (Rational(1) - Rational(1) / truncation_point);
  diag.tail_bound = (Rational(1) + sup_bound(phi)) / truncation_point;
  diag.decimal = decimal_string(diag.truncated);
  if (family == SeedFamily::First) {
    Rational factor(0);
    for (long long k = 1; k <= n; ++k)
      factor += coeffs[static_cast<std::size_t>(k - 1)] / k;
    diag.log2_factor = factor;
    sync_real_precision();
    diag.closed_form = log2_constant() * Real(factor) - 1;
  }
  return diag;
}

}  // namespace detail

inline IntegralDiagnostic integral_diagnostic(SeedFamily family, long long n,
                                              long long truncation_point,
                                              HarmonicTable& harmonics) {
  if (n < 1) throw std::domain_error("integral_diagnostic: n must be positive");
  if (truncation_point == 0) truncation_point = default_truncation(n);
  if (truncation_point < 1)
    throw std::domain_error("integral_diagnostic: truncation point must be >= 1");
  CorrectionBuilder builder(family);
  builder.extend_to(n);
  Correction corr = builder.snapshot();
  return detail::integral_diagnostic_impl(family, corr.coeffs, corr.phi, n,
                                          truncation_point, harmonics);
}

inline IntegralDiagnostic integral_diagnostic(SeedFamily family, long long n,
                                              long long truncation_point = 0) {
  HarmonicTable harmonics;
  return integral_diagnostic(family, n, truncation_point, harmonics);
}

struct DivergenceRow {
  long long n = 0;
  Rational c_n;
  std::optional<NormEstimate> delta_l1;  // absent at n = 1
  IntegralDiagnostic integral;
};

struct ReportMetadata {
  std::string x_policy;  // "default" or "fixed:<X>"
  unsigned precision = 0;
  std::string timestamp;  // ISO 8601, build time; not part of serialized output
};

struct DivergenceReport {
  SeedFamily family = SeedFamily::First;
  std::vector<DivergenceRow> rows;  // n = 1..n_max; delta rows start at 2
  std::optional<bool> non_cauchy;   // first family only
  ReportMetadata metadata;
};

inline std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
  return buf;
}

/// Sweep n = 1..n_max; per-row truncation X = n*2^12 unless overridden.
/// For the first family the non-Cauchy flag records that the rigorous lower
/// bound truncated - tail_bound is >= 3/10 at every n = 2^r <= n_max.
inline DivergenceReport divergence_report(SeedFamily family, long long n_max,
                                          std::optional<long long> x_override = {}) {
  if (n_max < 2) throw std::domain_error("divergence_report: n_max must be at least 2");
  if (x_override && *x_override < n_max)
    throw std::domain_error("divergence_report: fixed truncation point must be >= n_max");
  DivergenceReport report;
  report.family = family;
  report.metadata.x_policy =
      x_override ? "fixed:" + std::to_string(*x_override) : "default";
  report.metadata.precision = decimal_precision();
  report.metadata.timestamp = iso8601_now();

  CorrectionBuilder builder(family);
  HarmonicTable harmonics;
  const Rational three_tenths(3, 10);
  bool all_powers_large = true;
  for (long long n = 1; n <= n_max; ++n) {
    builder.extend_to(n);
    DivergenceRow row;
    row.n = n;
    row.c_n = builder.coeffs().back();
    const long long x_n = x_override ? *x_override : default_truncation(n);
    if (n >= 2) {
      row.delta_l1 = detail::delta_norm_impl(row.c_n, seed(family, n), n, x_n);
      if (family == SeedFamily::First && (n & (n - 1)) == 0 &&
          row.delta_l1->truncated - row.delta_l1->tail_bound < three_tenths)
        all_powers_large = false;
    }
    Correction corr = builder.snapshot();
    row.integral = detail::integral_diagnostic_impl(family, corr.coeffs, corr.phi, n,
                                                    x_n, harmonics);
    report.rows.push_back(std::move(row));
  }
  if (family == SeedFamily::First) report.non_cauchy = all_powers_large;
  return report;
}

/// Exact check of -sum_{k|m} c_k (-1)^{m/k} = delta(m) for all m <= N.
struct AuditReport {
  bool pass = false;
  long long first_failure = -1;
  long long residual = 0;  // lhs - delta(m) at the first failure
};

inline AuditReport identity_audit(long long n_limit,
                                  const std::function<long long(long long)>& coeff) {
  if (n_limit < 1) throw std::domain_error("identity_audit: N must be positive");
  for (long long m = 1; m <= n_limit; ++m) {
    long long lhs = 0;
    for (long long k = 1; k * k <= m; ++k) {
      if (m % k != 0) continue;
      const long long q = m / k;
      lhs -= coeff(k) * ((q % 2 == 0) ? 1 : -1);
      if (q != k) lhs -= coeff(q) * ((k % 2 == 0) ? 1 : -1);
    }
    const long long expected = (m == 1) ? 1 : 0;
    if (lhs != expected) return {false, m, lhs - expected};
  }
  return {true, -1, 0};
}

inline AuditReport identity_audit(long long n_limit) {
  return identity_audit(n_limit, [](long long k) { return coeff_closed(k); });
}

}  // namespace vascorr
