#include "lora/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lora {

ChannelParams::ChannelParams(cplx mu_h, double sigma_h2, double n0)
    : mu_(mu_h), sigma2_(sigma_h2), n0_(n0) {
  if (!std::isfinite(mu_.real()) || !std::isfinite(mu_.imag())) {
    throw std::invalid_argument("ChannelParams: mu_h must be finite");
  }
  if (!(sigma2_ >= 0.0) || !std::isfinite(sigma2_)) {
    throw std::invalid_argument("ChannelParams: sigma_h2 must be finite and >= 0");
  }
  if (!(n0_ > 0.0) || !std::isfinite(n0_)) {
    throw std::invalid_argument("ChannelParams: n0 must be finite and > 0");
  }
}

ChannelParams ChannelParams::from_k_factor(double k_factor, double n0) {
  if (std::isnan(k_factor) || k_factor < 0.0) {
    throw std::invalid_argument("ChannelParams: k_factor must be >= 0");
  }
  if (std::isinf(k_factor)) {
    return ChannelParams(cplx(1.0, 0.0), 0.0, n0);
  }
  const double sigma2 = 1.0 / (1.0 + k_factor);
  const double mu = std::sqrt(k_factor / (1.0 + k_factor));
  return ChannelParams(cplx(mu, 0.0), sigma2, n0);
}

double ChannelParams::k_factor() const {
  if (sigma2_ == 0.0) return std::numeric_limits<double>::infinity();
  return std::norm(mu_) / sigma2_;
}

ChannelParams ChannelParams::without_noise() const {
  ChannelParams copy = *this;
  copy.noise_enabled_ = false;
  return copy;
}

cplx sample_tap(const ChannelParams& channel, PhiloxStream& rng) {
  return channel.mu_h() + rng.next_cnormal(channel.sigma_h2());
}

cplx apply_channel(const ChannelParams& channel, std::span<const cplx> x, PhiloxStream& rng,
                   std::span<cplx> out) {
  if (out.size() != x.size()) {
    throw std::invalid_argument("apply_channel: output span size mismatch");
  }
  const cplx tap = sample_tap(channel, rng);
  if (channel.noise_enabled()) {
    const double n0 = channel.n0();
    for (std::size_t k = 0; k < x.size(); ++k) {
      out[k] = tap * x[k] + rng.next_cnormal(n0);
    }
  } else {
    for (std::size_t k = 0; k < x.size(); ++k) {
      out[k] = tap * x[k];
    }
  }
  return tap;
}

FadedObservation apply_channel(const ChannelParams& channel, const BasebandSymbol& symbol,
                               PhiloxStream& rng) {
  FadedObservation obs;
  obs.samples.resize(symbol.samples.size());
  obs.tap = apply_channel(channel, symbol.samples, rng, obs.samples);
  return obs;
}

}  // namespace lora
