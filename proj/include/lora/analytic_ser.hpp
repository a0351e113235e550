#pragma once

#include "lora/link_budget.hpp"
#include "lora/params.hpp"

namespace lora {

struct ExactSerOptions {
  /// Largest spreading factor accepted by the alternating sum. The sum
  /// over C(M-1, n) terms cancels catastrophically as M grows; raising
  /// the cap evaluates anyway and reports the damage via est_rel_error.
  int max_sf = 7;
};

struct ExactSerResult {
  double ser = 0.0;
  /// Upper estimate of the relative rounding error left after compensated
  /// long double summation.
  double est_rel_error = 0.0;
  /// Set when est_rel_error exceeds 1e-8, i.e. the value should not be
  /// used as a reference.
  bool degraded = false;
};

/// Closed-form symbol error rate over the Rician block-fading channel:
///   sum_{n=1}^{M-1} (-1)^{n+1} C(M-1, n) / (n+1 + n sigma_h2 rho)
///     * exp(-n rho |mu_h|^2 / (n+1 + n sigma_h2 rho)),  rho = Es/N0.
/// es_n0 == 0 returns the exact limit (M-1)/M. Throws std::domain_error
/// when sf exceeds options.max_sf.
ExactSerResult ser_exact_rician(const LinkBudget& budget, const ExactSerOptions& options = {});

/// Noncoherent orthogonal-signaling special case (sigma_h2 = 0, mu_h = 1):
///   sum_{n=1}^{M-1} (-1)^{n+1} C(M-1, n) / (n+1) exp(-n rho / (n+1)).
double ser_noncoherent(const LoRaParams& params, double es_n0);

struct IntegrationResult {
  double ser = 0.0;
  double abs_error = 0.0;
  bool converged = false;
  int intervals = 0;
};

/// SER by direct quadrature of
///   integral f_R0(r) (1 - (1 - exp(-r / (E N0)))^(M-1)) dr
/// where f_R0 is the matched-bin metric density. The wrong-bin factor is
/// evaluated through expm1/log1p so deep-SNR tails keep full precision;
/// the upper limit is chosen so the truncated tail is below 1e-14.
IntegrationResult ser_numeric_integration_full(const LinkBudget& budget);

/// Convenience wrapper; throws std::runtime_error if the quadrature budget
/// is exhausted before the error target is met.
double ser_numeric_integration(const LinkBudget& budget);

/// Gray-agnostic orthogonal mapping: BER = SER * 2^(sf-1) / (2^sf - 1).
double ber_from_ser(const LoRaParams& params, double ser);

}  // namespace lora
