#include "lora/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lora {

double log_binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw std::domain_error("log_binomial: require 0 <= k <= n, got n=" + std::to_string(n) +
                            " k=" + std::to_string(k));
  }
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double bessel_i0_scaled(double x) {
  if (std::isnan(x) || x < 0.0) {
    throw std::domain_error("bessel_i0_scaled: require x >= 0");
  }
  if (x < 15.0) {
    // I0(x) = sum_k (x^2/4)^k / (k!)^2; terms decay fast enough here that
    // the scaled value exp(-x) * sum has no intermediate overflow.
    const double q = x * x / 4.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < sum * 1e-18) break;
    }
    return std::exp(-x) * sum;
  }
  // Asymptotic series exp(-x) I0(x) ~ (2 pi x)^{-1/2} sum_k t_k with
  // t_0 = 1, t_{k+1} = t_k (2k+1)^2 / (8 x (k+1)). Truncated at the
  // smallest term; for x >= 15 that term is below 1e-13 of the sum.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 40; ++k) {
    const double ratio =
        static_cast<double>(2 * k + 1) * static_cast<double>(2 * k + 1) / (8.0 * x * (k + 1));
    const double next = term * ratio;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

namespace {

struct PoissonProbe {
  double cdf;  // P(Poisson(y) <= k)
  double pmf;  // P(Poisson(y) == k)
};

// CDF and PMF of Poisson(y) at k via stable recurrences. For y < 700 the
// recursion runs upward from exp(-y) with full relative accuracy; larger y
// starts from the log-domain mode value, whose accuracy is limited by the
// lgamma cancellation (~1e-10 relative near y = 1e6, documented
// degradation for extreme arguments).
PoissonProbe poisson_cdf_pmf(double y, std::int64_t k) {
  if (k < 0) return {0.0, 0.0};
  if (y < 700.0) {
    double p = std::exp(-y);
    double cdf = p;
    for (std::int64_t j = 1; j <= k; ++j) {
      p *= y / static_cast<double>(j);
      cdf += p;
      if (p == 0.0) break;  // underflow far above the mode; tail is gone
    }
    return {std::min(cdf, 1.0), p};
  }
  const std::int64_t mode = std::min<std::int64_t>(k, static_cast<std::int64_t>(y));
  const double log_pmode = -y + static_cast<double>(mode) * std::log(y) - std::lgamma(mode + 1.0);
  const double p_mode = std::exp(log_pmode);
  double cdf = p_mode;
  double p = p_mode;
  for (std::int64_t j = mode; j > 0; --j) {
    p *= static_cast<double>(j) / y;
    cdf += p;
    if (p < cdf * 1e-19) break;
  }
  double pmf = p_mode;
  for (std::int64_t j = mode + 1; j <= k; ++j) {
    pmf *= y / static_cast<double>(j);
    cdf += pmf;
    if (pmf == 0.0) break;
  }
  return {std::min(cdf, 1.0), pmf};
}

}  // namespace

double marcum_q1(double a, double b) {
  if (std::isnan(a) || std::isnan(b) || a < 0.0 || b < 0.0) {
    throw std::domain_error("marcum_q1: require a >= 0 and b >= 0");
  }
  if (b == 0.0) return 1.0;
  if (a == 0.0) return std::exp(-b * b / 2.0);

  const double x = a * a / 2.0;
  const double y = b * b / 2.0;

  // Start far enough below the Poisson(x) mode that the skipped weight is
  // negligible, then walk upward until the unsummed mixture tail can no
  // longer move the result at working precision.
  const double spread = 12.0 * std::sqrt(x) + 30.0;
  const std::int64_t klo =
      std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(x - spread)));
  double w;
  if (klo == 0) {
    w = std::exp(-x);
  } else {
    w = std::exp(-x + static_cast<double>(klo) * std::log(x) - std::lgamma(klo + 1.0));
  }
  auto probe = poisson_cdf_pmf(y, klo);
  double cdf = probe.cdf;
  double pmf = probe.pmf;
  double sum = w * cdf;
  std::int64_t k = klo;
  const std::int64_t kmax = klo + (1 << 26);
  while (k < kmax) {
    ++k;
    w *= x / static_cast<double>(k);
    pmf *= y / static_cast<double>(k);
    cdf = std::min(cdf + pmf, 1.0);
    sum += w * cdf;
    if (static_cast<double>(k) <= x) continue;
    // Past the mode the weight ratio x / (k + 1) keeps shrinking, so the
    // unsummed terms are bounded by the geometric tail of w times cdf <= 1.
    // Testing that bound against the running sum keeps small results
    // accurate; a stop on the accumulated weight alone would truncate the
    // upper mixture tail while its cdf factors are still of order one.
    const double ratio = x / static_cast<double>(k + 1);
    const double remainder = w * ratio / (1.0 - ratio);
    if (remainder <= sum * 5e-16 + 1e-300) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

NoncentralChi2::NoncentralChi2(double s, double sigma0_2) : s_(s), sigma0_2_(sigma0_2) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw std::domain_error("NoncentralChi2: require s >= 0");
  }
  if (!(sigma0_2 > 0.0) || !std::isfinite(sigma0_2)) {
    throw std::domain_error("NoncentralChi2: require sigma0_2 > 0");
  }
}

double NoncentralChi2::pdf(double r) const {
  if (std::isnan(r) || r < 0.0) {
    throw std::domain_error("NoncentralChi2::pdf: require r >= 0");
  }
  const double root = std::sqrt(r);
  const double diff = root - s_;
  return std::exp(-diff * diff / (2.0 * sigma0_2_)) * bessel_i0_scaled(s_ * root / sigma0_2_) /
         (2.0 * sigma0_2_);
}

double NoncentralChi2::cdf(double r) const {
  if (std::isnan(r) || r < 0.0) {
    throw std::domain_error("NoncentralChi2::cdf: require r >= 0");
  }
  const double sigma0 = std::sqrt(sigma0_2_);
  return 1.0 - marcum_q1(s_ / sigma0, std::sqrt(r) / sigma0);
}

}  // namespace lora
