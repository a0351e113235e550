#pragma once

#include "lora/channel.hpp"
#include "lora/params.hpp"
#include "lora/specfun.hpp"

namespace lora {

/// Binds modulation, channel, and operating point, and derives the decision
/// metric statistics used throughout the analytic layer:
///   correct bin:  |E H + w0|^2 with w0 ~ CN(0, E N0), i.e. a noncentral
///                 chi-square with s = E |mu_h| and per-dimension variance
///                 sigma0^2 = (E^2 sigma_h2 + E N0) / 2;
///   wrong bins:   |w|^2 with w ~ CN(0, E N0), exponential with mean E N0
///                 and per-dimension variance sigma1^2 = E N0 / 2.
/// The symbol energy is authoritative from es_n0: E = es_n0 * n0. es_n0 == 0
/// is allowed so closed forms can be evaluated at their zero-SNR limit.
class LinkBudget {
 public:
  LinkBudget(LoRaParams params, ChannelParams channel, double es_n0);

  /// es_n0 = sf * eb_n0 with eb_n0 = 10^(ebn0_db / 10).
  static LinkBudget from_ebn0_db(int sf, const ChannelParams& channel, double ebn0_db);
  static LinkBudget from_es_n0(int sf, const ChannelParams& channel, double es_n0);

  const LoRaParams& params() const { return params_; }
  const ChannelParams& channel() const { return channel_; }

  double es_n0() const { return es_n0_; }
  double energy() const { return energy_; }

  double s() const { return s_; }
  double mu1() const { return mu1_; }
  double mu2() const { return mu2_; }
  double sigma0_sq() const { return sigma0_sq_; }
  double sigma1_sq() const { return sigma1_sq_; }

  /// Distribution of the matched-bin metric; requires es_n0 > 0.
  NoncentralChi2 metric_distribution() const;

 private:
  LoRaParams params_;
  ChannelParams channel_;
  double es_n0_;
  double energy_;
  double s_, mu1_, mu2_, sigma0_sq_, sigma1_sq_;
};

}  // namespace lora
