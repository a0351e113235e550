#include "lora/union_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lora/specfun.hpp"

namespace lora {

namespace {

struct BoundTerms {
  double miss;       // 1 - Q1(alpha1, beta1)
  double prefactor;  // (M-1) / (2 + sigma_h2 rho) * exp(-|mu|^2 / (sigma_h2 + 2/rho))
  MarcumArgs args;
};

// rho == 0 is served through IEEE semantics: 1/rho and 2/rho become +inf,
// which drive alpha1, alpha2 and the exponent to their zero-SNR limits.
BoundTerms bound_terms(const LinkBudget& budget) {
  const std::uint32_t m_size = budget.params().m_size();
  if (m_size < 2) {
    throw std::domain_error("union bounds: require m_size >= 2");
  }
  const double rho = budget.es_n0();
  const double mu_sq = std::norm(budget.channel().mu_h());
  const double sigma_h2 = budget.channel().sigma_h2();
  const double log_m1 = std::log(static_cast<double>(m_size - 1));
  const double sr = sigma_h2 * rho;

  MarcumArgs args;
  args.alpha1 = std::sqrt(2.0 * mu_sq / (sigma_h2 + 1.0 / rho));
  args.beta1 = std::sqrt(2.0 * log_m1 / (1.0 + sr));
  args.alpha2 = std::sqrt(2.0 * mu_sq * rho / ((1.0 + sr) * (2.0 + sr)));
  args.beta2 = std::sqrt(2.0 * log_m1 * (1.0 + 1.0 / (1.0 + sr)));
  args.r_star = budget.energy() * budget.channel().n0() * log_m1;
  args.s_tilde = budget.s() / std::sqrt(2.0 + sr);
  args.r_tilde_star = (2.0 + sr) * args.r_star;

  BoundTerms terms;
  terms.args = args;
  terms.miss = 1.0 - marcum_q1(args.alpha1, args.beta1);
  terms.prefactor = static_cast<double>(m_size - 1) / (2.0 + sr) *
                    std::exp(-mu_sq / (sigma_h2 + 2.0 / rho));
  return terms;
}

BoundValue clamp_bound(double raw) { return {std::clamp(raw, 0.0, 1.0), raw}; }

void require_exp_domain(const MarcumArgs& args) {
  if (!(args.beta2 > args.alpha2)) {
    throw std::domain_error(
        "union bounds: exponential Marcum relaxation requires beta2 > alpha2");
  }
}

}  // namespace

MarcumArgs marcum_args(const LinkBudget& budget) { return bound_terms(budget).args; }

BoundValue ser_upper(const LinkBudget& budget) {
  const auto t = bound_terms(budget);
  return clamp_bound(t.miss + t.prefactor * marcum_q1(t.args.alpha2, t.args.beta2));
}

BoundValue ser_lower(const LinkBudget& budget) {
  const auto t = bound_terms(budget);
  return clamp_bound(0.5 * t.miss + 0.5 * t.prefactor * marcum_q1(t.args.alpha2, t.args.beta2));
}

BoundValue ser_upper_exp(const LinkBudget& budget) {
  const auto t = bound_terms(budget);
  require_exp_domain(t.args);
  const double gap = t.args.beta2 - t.args.alpha2;
  return clamp_bound(t.miss + t.prefactor * std::exp(-gap * gap / 2.0));
}

BoundValue ser_lower_exp(const LinkBudget& budget) {
  const auto t = bound_terms(budget);
  require_exp_domain(t.args);
  const double gap = t.args.beta2 + t.args.alpha2;
  return clamp_bound(0.5 * t.miss + 0.5 * t.prefactor * std::exp(-gap * gap / 2.0));
}

namespace {

double rayleigh_raw(const LoRaParams& params, double sigma_h2, double es_n0, bool lower) {
  if (!(sigma_h2 > 0.0)) {
    throw std::domain_error("rayleigh bounds: require sigma_h2 > 0");
  }
  if (!(es_n0 >= 0.0)) {
    throw std::domain_error("rayleigh bounds: require es_n0 >= 0");
  }
  const double log_m1 = std::log(static_cast<double>(params.m_size() - 1));
  const double sr = sigma_h2 * es_n0;
  const double core = (1.0 / (2.0 + sr) - 1.0) * std::exp(-log_m1 / (1.0 + sr));
  return lower ? 0.5 + 0.5 * core : 1.0 + core;
}

}  // namespace

BoundValue ser_upper_rayleigh(const LoRaParams& params, double sigma_h2, double es_n0) {
  return clamp_bound(rayleigh_raw(params, sigma_h2, es_n0, false));
}

BoundValue ser_lower_rayleigh(const LoRaParams& params, double sigma_h2, double es_n0) {
  return clamp_bound(rayleigh_raw(params, sigma_h2, es_n0, true));
}

}  // namespace lora
