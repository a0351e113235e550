#include "lora/analytic_ser.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lora/quadrature.hpp"
#include "lora/specfun.hpp"

namespace lora {

namespace {

// Alternating binomial sum shared by the Rician closed form and its
// noncoherent special case. Terms are built in long double with the exact
// recurrence C(M-1, n+1) = C(M-1, n) (M-1-n) / (n+1) and combined with
// Neumaier-compensated summation. The dominant residual error is the
// cancellation between O(max|term|) partials, estimated from the ratio of
// the absolute-value sum to the result.
ExactSerResult alternating_binomial_ser(std::uint32_t m_size, double mu_h_sq, double sigma_h2,
                                        double rho) {
  if (rho == 0.0) {
    return {static_cast<double>(m_size - 1) / static_cast<double>(m_size), 0.0, false};
  }
  long double sum = 0.0L;
  long double comp = 0.0L;
  long double abs_sum = 0.0L;
  long double coeff = 1.0L;  // C(M-1, n) maintained across n
  for (std::uint32_t n = 1; n < m_size; ++n) {
    coeff *= static_cast<long double>(m_size - n) / static_cast<long double>(n);
    const long double den =
        static_cast<long double>(n + 1) + static_cast<long double>(n) * sigma_h2 * rho;
    long double term =
        coeff / den * std::exp(-static_cast<long double>(n) * rho * mu_h_sq / den);
    if ((n & 1u) == 0u) term = -term;
    const long double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
    abs_sum += std::fabs(term);
  }
  sum += comp;

  ExactSerResult result;
  if (!std::isfinite(static_cast<double>(sum)) || !std::isfinite(static_cast<double>(abs_sum))) {
    result.ser = std::numeric_limits<double>::quiet_NaN();
    result.est_rel_error = std::numeric_limits<double>::infinity();
    result.degraded = true;
    return result;
  }
  // Each term carries a few ulps (exp, divide, recurrence roundings once
  // the integer coefficients exceed the 64-bit significand); cancellation
  // amplifies that by abs_sum / |sum|.
  const long double mag = std::max(std::fabs(sum), static_cast<long double>(LDBL_MIN));
  result.est_rel_error = static_cast<double>(abs_sum / mag * (8.0L * LDBL_EPSILON));
  result.degraded = result.est_rel_error > 1e-8;
  result.ser = std::clamp(static_cast<double>(sum), 0.0, 1.0);
  return result;
}

}  // namespace

ExactSerResult ser_exact_rician(const LinkBudget& budget, const ExactSerOptions& options) {
  const int sf = budget.params().sf();
  if (sf > options.max_sf) {
    throw std::domain_error("ser_exact_rician: sf=" + std::to_string(sf) +
                            " exceeds the alternating-sum precision cap (max_sf=" +
                            std::to_string(options.max_sf) + ")");
  }
  return alternating_binomial_ser(budget.params().m_size(), std::norm(budget.channel().mu_h()),
                                  budget.channel().sigma_h2(), budget.es_n0());
}

double ser_noncoherent(const LoRaParams& params, double es_n0) {
  if (!(es_n0 >= 0.0) || !std::isfinite(es_n0)) {
    throw std::domain_error("ser_noncoherent: require es_n0 >= 0");
  }
  return alternating_binomial_ser(params.m_size(), 1.0, 0.0, es_n0).ser;
}

IntegrationResult ser_numeric_integration_full(const LinkBudget& budget) {
  const std::uint32_t m_size = budget.params().m_size();
  if (budget.es_n0() == 0.0) {
    // All bins identically distributed; the detector guesses.
    return {static_cast<double>(m_size - 1) / static_cast<double>(m_size), 0.0, true, 0};
  }
  const double en0 = budget.energy() * budget.channel().n0();
  const double m_minus_1 = static_cast<double>(m_size - 1);
  const NoncentralChi2 dist = budget.metric_distribution();

  const auto integrand = [&](double r) {
    // P(any of M-1 iid Exp(E N0) wrong bins exceeds r), kept in expm1/log1p
    // form so values near 0 and near 1 both stay accurate.
    const double u = std::exp(-r / en0);
    double tail;
    if (u >= 1.0) {
      tail = 1.0;
    } else {
      tail = -std::expm1(m_minus_1 * std::log1p(-u));
    }
    return dist.pdf(r) * tail;
  };

  // Upper limit: grow until the matched-bin tail mass (which bounds the
  // discarded integral, since the bracket is <= 1) is below 1e-14.
  const double s = budget.s();
  const double sigma0 = std::sqrt(budget.sigma0_sq());
  const double a = s / sigma0;
  double r_hi = std::max({(s + 10.0 * sigma0) * (s + 10.0 * sigma0), 64.0 * budget.sigma0_sq(),
                          en0 * (std::log(m_minus_1) + 8.0)});
  for (int i = 0; i < 200 && marcum_q1(a, std::sqrt(r_hi) / sigma0) > 1e-14; ++i) {
    r_hi *= 1.5;
  }

  // Breakpoints at the density peak, its shoulders, and the noise scale;
  // the adaptive refinement handles the rest.
  const double log_m1 = std::log(std::max(m_minus_1, 2.0));
  std::vector<double> pts = {0.0,
                             en0,
                             en0 * log_m1,
                             0.25 * s * s,
                             s * s,
                             2.0 * s * s,
                             budget.sigma0_sq(),
                             16.0 * budget.sigma0_sq(),
                             r_hi};
  // At high SNR the wrong-bin tail decays on the scale en0 while the
  // density lives many orders of magnitude higher, so without steps along
  // that decay the initial rule never samples it and reports a converged
  // zero for the whole region. e^-64 is beyond any representable
  // contribution, so the ladder can stop there.
  for (double j : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
    pts.push_back(en0 * (log_m1 + j));
  }
  for (auto& p : pts) p = std::clamp(p, 0.0, r_hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const auto quad = integrate_adaptive(integrand, pts, 1e-12, 4000);
  IntegrationResult result;
  result.ser = std::clamp(quad.value, 0.0, 1.0);
  result.abs_error = quad.error;
  result.converged = quad.converged;
  result.intervals = quad.intervals;
  return result;
}

double ser_numeric_integration(const LinkBudget& budget) {
  const auto result = ser_numeric_integration_full(budget);
  if (!result.converged) {
    throw std::runtime_error("ser_numeric_integration: quadrature budget exhausted");
  }
  return result.ser;
}

double ber_from_ser(const LoRaParams& params, double ser) {
  if (std::isnan(ser) || ser < 0.0 || ser > 1.0) {
    throw std::invalid_argument("ber_from_ser: ser must lie in [0, 1]");
  }
  const double half_m = static_cast<double>(1ull << (params.sf() - 1));
  const double m_minus_1 = static_cast<double>((1ull << params.sf()) - 1ull);
  return ser * half_m / m_minus_1;
}

}  // namespace lora
