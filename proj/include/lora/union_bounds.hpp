#pragma once

#include "lora/link_budget.hpp"
#include "lora/params.hpp"

namespace lora {

/// Arguments of the two Marcum terms in the union bounds, derived from the
/// dominant-error-event geometry: the wrong-bin maximum concentrates near
/// r* = E N0 ln(M-1), and conditioning the matched bin on that level gives
/// a Rice/Rice comparison with the parameters below.
struct MarcumArgs {
  double alpha1;  // sqrt(2 |mu_h|^2 / (sigma_h2 + 1/rho))
  double beta1;   // sqrt(2 ln(M-1) / (1 + sigma_h2 rho))
  double alpha2;  // sqrt(2 |mu_h|^2 rho / ((1 + sigma_h2 rho)(2 + sigma_h2 rho)))
  double beta2;   // sqrt(2 ln(M-1) (1 + 1/(1 + sigma_h2 rho)))
  double r_star;        // E N0 ln(M-1), the wrong-bin concentration level
  double s_tilde;       // s / sqrt(1 + sigma0^2/sigma1^2), folded Rice mean
  double r_tilde_star;  // (1 + sigma0^2/sigma1^2) r_star, folded threshold
};

MarcumArgs marcum_args(const LinkBudget& budget);

/// A bound evaluation: raw is the formula value, value clamps it to [0, 1].
struct BoundValue {
  double value = 0.0;
  double raw = 0.0;
};

/// Union upper bound
///   1 - Q1(alpha1, beta1)
///     + (M-1)/(2 + sigma_h2 rho) exp(-|mu_h|^2 / (sigma_h2 + 2/rho))
///       * Q1(alpha2, beta2).
BoundValue ser_upper(const LinkBudget& budget);

/// Matching lower bound: half the crossover term plus half the miss term,
/// structurally upper/2.
BoundValue ser_lower(const LinkBudget& budget);

/// Exponential relaxations replacing Q1(alpha2, beta2) by
/// exp(-(beta2 -+ alpha2)^2 / 2); valid only when beta2 > alpha2, otherwise
/// std::domain_error.
BoundValue ser_upper_exp(const LinkBudget& budget);
BoundValue ser_lower_exp(const LinkBudget& budget);

/// Rayleigh (mu_h = 0) closed forms; no Marcum evaluation needed.
///   upper: 1 + (1/(2 + sigma_h2 rho) - 1) exp(-ln(M-1)/(1 + sigma_h2 rho))
///   lower: 1/2 + (1/(2 + sigma_h2 rho) - 1)/2 * the same exponential.
/// Require sigma_h2 > 0.
BoundValue ser_upper_rayleigh(const LoRaParams& params, double sigma_h2, double es_n0);
BoundValue ser_lower_rayleigh(const LoRaParams& params, double sigma_h2, double es_n0);

}  // namespace lora
