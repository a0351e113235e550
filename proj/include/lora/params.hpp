#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace lora {

using cplx = std::complex<double>;

/// Zero-based constellation index; valid values are [0, m_size).
struct SymbolIndex {
  std::uint32_t value = 0;
};

/// Immutable modulation parameters plus the cached phase tables used by the
/// modulator and the de-chirp transform. Copies share the tables, so passing
/// by value and sharing across threads is cheap and safe.
class LoRaParams {
 public:
  /// sf in [1, 16]; symbol_energy >= 0 in noise-normalized linear units.
  LoRaParams(int sf, double symbol_energy);

  int sf() const { return sf_; }
  std::uint32_t m_size() const { return m_size_; }
  double symbol_energy() const { return symbol_energy_; }

  /// Per-sample magnitude sqrt(E/M) of the constant-envelope chirp.
  double sample_amplitude() const { return amplitude_; }

  /// Bits per complex dimension: sf / m_size.
  double spectral_efficiency() const {
    return static_cast<double>(sf_) / static_cast<double>(m_size_);
  }

  /// Unit-magnitude up-chirp phases (-1)^k exp(i pi k^2 / M). Phases are
  /// reduced with exact integer arithmetic mod 2M before the trig call, so
  /// the table stays accurate at M = 65536.
  std::span<const cplx> upchirp() const { return tables_->chirp; }

  /// exp(i 2 pi j / M) for j in [0, M); modulate() indexes it with m*k mod M.
  std::span<const cplx> tone() const { return tables_->tone; }

  /// Forward-DFT twiddles exp(-i 2 pi j / M) for j in [0, M/2).
  std::span<const cplx> dft_twiddles() const { return tables_->twiddle; }

 private:
  struct Tables {
    std::vector<cplx> chirp;
    std::vector<cplx> tone;
    std::vector<cplx> twiddle;
  };

  int sf_;
  std::uint32_t m_size_;
  double symbol_energy_;
  double amplitude_;
  std::shared_ptr<const Tables> tables_;
};

/// m = sum_j bits[j] * 2^j. bits.size() must equal the spreading factor.
SymbolIndex symbol_from_bits(const LoRaParams& params, std::span<const std::uint8_t> bits);

/// Inverse of symbol_from_bits; returns sf bits, LSB first.
std::vector<std::uint8_t> bits_from_symbol(const LoRaParams& params, SymbolIndex m);

}  // namespace lora
