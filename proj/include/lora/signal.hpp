#pragma once

#include <span>
#include <vector>

#include "lora/params.hpp"

namespace lora {

/// One modulated symbol, m_size complex baseband samples.
struct BasebandSymbol {
  std::vector<cplx> samples;
};

/// Squared-magnitude DFT bins of the de-chirped observation; the detector
/// picks the argmax.
struct DecisionMetrics {
  std::vector<double> bins;
};

/// x_m[k] = sqrt(E/M) (-1)^k exp(i pi k^2 / M) exp(i 2 pi m k / M).
BasebandSymbol modulate(const LoRaParams& params, SymbolIndex m);

/// Allocation-free variant; out.size() must equal m_size.
void modulate(const LoRaParams& params, SymbolIndex m, std::span<cplx> out);

/// Multiplies by the conjugate reference chirp and takes |DFT|^2 per bin.
DecisionMetrics dechirp_dft(const LoRaParams& params, std::span<const cplx> received);

/// Allocation-free variant; work and bins must both have size m_size. work is
/// scratch and holds the de-chirped spectrum on return.
void dechirp_dft(const LoRaParams& params, std::span<const cplx> received, std::span<cplx> work,
                 std::span<double> bins);

/// Argmax over bins; ties resolve to the lowest index.
std::size_t detect(std::span<const double> bins);
SymbolIndex detect(const DecisionMetrics& metrics);

namespace detail {

/// In-place radix-2 DIT FFT. data.size() must be a power of two and twiddle
/// must hold exp(-i 2 pi j / n) for j in [0, n/2).
void fft_pow2(std::span<cplx> data, std::span<const cplx> twiddle);

}  // namespace detail

}  // namespace lora
