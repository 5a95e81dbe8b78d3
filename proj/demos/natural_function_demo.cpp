// Small tour of the exact core: build f_1 = [x] - 2[x/2], inspect its step
// profile, and integrate it against x^-2 dx both over a finite window and
// to infinity (closed form + truncation + tail bound).

#include <cstdio>

#include "vascorr/natural_function.hpp"

int main() {
  using namespace vascorr;
  set_decimal_precision(30);

  NaturalFunction f1 = make_natural({{1, Rational(1)}, {2, Rational(-2)}});
  std::printf("f1 zero-sum: %s, period %s\n",
              f1.certified_zero_sum() ? "yes" : "no", period(f1).str().c_str());

  StepProfile prof = profile(f1, 6);
  std::printf("profile: ");
  for (const Rational& v : prof.values) std::printf("%s ", rational_to_string(v).c_str());
  std::printf("\n");

  Rational window = integrate_weighted(f1, Rational(1), Rational(4));
  std::printf("int_1^4 f1 x^-2 dx = %s = %s\n", rational_to_string(window).c_str(),
              decimal_string(window).c_str());

  InfiniteIntegral full = integral_to_infinity(f1, 1 << 16);
  std::printf("int_1^inf f1 x^-2 dx:\n  closed form %s\n  truncated   %s (X=%lld)\n"
              "  tail bound  %s\n",
              decimal_string(full.closed_form).c_str(),
              decimal_string(full.truncated).c_str(), full.truncation_point,
              decimal_string(full.tail_bound).c_str());
  return 0;
}
