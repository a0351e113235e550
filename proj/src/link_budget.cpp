#include "lora/link_budget.hpp"

#include <cmath>
#include <stdexcept>

namespace lora {

LinkBudget::LinkBudget(LoRaParams params, ChannelParams channel, double es_n0)
    : params_(std::move(params)), channel_(std::move(channel)), es_n0_(es_n0) {
  if (!(es_n0 >= 0.0) || !std::isfinite(es_n0)) {
    throw std::invalid_argument("LinkBudget: es_n0 must be finite and >= 0");
  }
  energy_ = es_n0_ * channel_.n0();
  const double tol = 1e-9 * std::max(1.0, energy_);
  if (std::abs(params_.symbol_energy() - energy_) > tol) {
    throw std::invalid_argument(
        "LinkBudget: params.symbol_energy inconsistent with es_n0 * n0");
  }
  const cplx mu = channel_.mu_h();
  s_ = energy_ * std::abs(mu);
  mu1_ = energy_ * mu.real();
  mu2_ = energy_ * mu.imag();
  const double en0 = energy_ * channel_.n0();
  sigma0_sq_ = (energy_ * energy_ * channel_.sigma_h2() + en0) / 2.0;
  sigma1_sq_ = en0 / 2.0;
}

LinkBudget LinkBudget::from_es_n0(int sf, const ChannelParams& channel, double es_n0) {
  if (!(es_n0 >= 0.0) || !std::isfinite(es_n0)) {
    throw std::invalid_argument("LinkBudget: es_n0 must be finite and >= 0");
  }
  return LinkBudget(LoRaParams(sf, es_n0 * channel.n0()), channel, es_n0);
}

LinkBudget LinkBudget::from_ebn0_db(int sf, const ChannelParams& channel, double ebn0_db) {
  const double eb_n0 = std::pow(10.0, ebn0_db / 10.0);
  return from_es_n0(sf, channel, static_cast<double>(sf) * eb_n0);
}

NoncentralChi2 LinkBudget::metric_distribution() const {
  if (!(es_n0_ > 0.0)) {
    throw std::domain_error("LinkBudget: metric distribution degenerates at es_n0 == 0");
  }
  return NoncentralChi2(s_, sigma0_sq_);
}

}  // namespace lora
