#include "lora/signal.hpp"

#include <stdexcept>
#include <utility>

namespace lora {

namespace detail {

void fft_pow2(std::span<cplx> data, std::span<const cplx> twiddle) {
  const std::size_t n = data.size();
  if (n < 2 || (n & (n - 1)) != 0 || twiddle.size() != n / 2) {
    throw std::invalid_argument("fft_pow2: size must be a power of two with n/2 twiddles");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = data[base + k];
        const cplx v = data[base + k + half] * twiddle[k * stride];
        data[base + k] = u + v;
        data[base + k + half] = u - v;
      }
    }
  }
}

}  // namespace detail

void modulate(const LoRaParams& params, SymbolIndex m, std::span<cplx> out) {
  const std::uint64_t msize = params.m_size();
  if (m.value >= msize) {
    throw std::out_of_range("modulate: symbol index out of range");
  }
  if (out.size() != msize) {
    throw std::invalid_argument("modulate: output span must have m_size samples");
  }
  const auto chirp = params.upchirp();
  const auto tone = params.tone();
  const double amp = params.sample_amplitude();
  for (std::uint64_t k = 0; k < msize; ++k) {
    out[k] = amp * chirp[k] * tone[(m.value * k) % msize];
  }
}

BasebandSymbol modulate(const LoRaParams& params, SymbolIndex m) {
  BasebandSymbol sym;
  sym.samples.resize(params.m_size());
  modulate(params, m, sym.samples);
  return sym;
}

void dechirp_dft(const LoRaParams& params, std::span<const cplx> received, std::span<cplx> work,
                 std::span<double> bins) {
  const std::size_t msize = params.m_size();
  if (received.size() != msize) {
    throw std::invalid_argument("dechirp_dft: received length must equal m_size");
  }
  if (work.size() != msize || bins.size() != msize) {
    throw std::invalid_argument("dechirp_dft: work and bins must have m_size elements");
  }
  const auto chirp = params.upchirp();
  const double amp = params.sample_amplitude();
  for (std::size_t k = 0; k < msize; ++k) {
    work[k] = received[k] * std::conj(chirp[k]) * amp;
  }
  detail::fft_pow2(work, params.dft_twiddles());
  for (std::size_t k = 0; k < msize; ++k) {
    bins[k] = std::norm(work[k]);
  }
}

DecisionMetrics dechirp_dft(const LoRaParams& params, std::span<const cplx> received) {
  DecisionMetrics metrics;
  metrics.bins.resize(params.m_size());
  std::vector<cplx> work(params.m_size());
  dechirp_dft(params, received, work, metrics.bins);
  return metrics;
}

std::size_t detect(std::span<const double> bins) {
  if (bins.empty()) {
    throw std::invalid_argument("detect: empty metrics");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < bins.size(); ++i) {
    if (bins[i] > bins[best]) best = i;
  }
  return best;
}

SymbolIndex detect(const DecisionMetrics& metrics) {
  return SymbolIndex{static_cast<std::uint32_t>(detect(std::span<const double>(metrics.bins)))};
}

}  // namespace lora
