#pragma once

#include <span>

#include "lora/params.hpp"
#include "lora/rng.hpp"
#include "lora/signal.hpp"

namespace lora {

/// Flat block-fading channel H ~ CN(mu_h, sigma_h2) with additive white
/// noise of per-sample variance n0. One tap realization applies to a whole
/// symbol. The Rician K factor is |mu_h|^2 / sigma_h2.
class ChannelParams {
 public:
  explicit ChannelParams(cplx mu_h, double sigma_h2, double n0 = 1.0);

  /// Unit-power preset: |mu_h|^2 + sigma_h2 = 1 with real nonnegative mean.
  /// k_factor = 0 is Rayleigh; +infinity degenerates to a fixed unit tap.
  static ChannelParams from_k_factor(double k_factor, double n0 = 1.0);
  static ChannelParams rayleigh(double n0 = 1.0) { return from_k_factor(0.0, n0); }

  cplx mu_h() const { return mu_; }
  double sigma_h2() const { return sigma2_; }
  double n0() const { return n0_; }

  /// |mu_h|^2 / sigma_h2; +infinity when sigma_h2 == 0.
  double k_factor() const;

  bool noise_enabled() const { return noise_enabled_; }

  /// Diagnostic copy whose apply_channel adds no noise (tap only).
  ChannelParams without_noise() const;

 private:
  cplx mu_;
  double sigma2_;
  double n0_;
  bool noise_enabled_ = true;
};

/// One tap draw H = mu_h + CN(0, sigma_h2). Consumes exactly one normal
/// pair; sigma_h2 == 0 returns mu_h exactly.
cplx sample_tap(const ChannelParams& channel, PhiloxStream& rng);

/// Faded observation y[k] = H x[k] + n[k] together with the tap that
/// produced it.
struct FadedObservation {
  std::vector<cplx> samples;
  cplx tap;
};

FadedObservation apply_channel(const ChannelParams& channel, const BasebandSymbol& symbol,
                               PhiloxStream& rng);

/// Allocation-free variant; out.size() must equal x.size(). Returns the tap.
cplx apply_channel(const ChannelParams& channel, std::span<const cplx> x, PhiloxStream& rng,
                   std::span<cplx> out);

}  // namespace lora
