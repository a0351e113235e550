#include "lora/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lora {

LoRaParams::LoRaParams(int sf, double symbol_energy) : sf_(sf), symbol_energy_(symbol_energy) {
  if (sf < 1 || sf > 16) {
    throw std::invalid_argument("LoRaParams: sf must be in [1, 16], got " + std::to_string(sf));
  }
  if (!(symbol_energy >= 0.0) || !std::isfinite(symbol_energy)) {
    throw std::invalid_argument("LoRaParams: symbol_energy must be finite and >= 0");
  }
  m_size_ = 1u << sf;
  amplitude_ = std::sqrt(symbol_energy_ / static_cast<double>(m_size_));

  auto tables = std::make_shared<Tables>();
  const std::uint64_t m = m_size_;
  tables->chirp.resize(m);
  tables->tone.resize(m);
  tables->twiddle.resize(m / 2);
  const double pi_over_m = std::numbers::pi / static_cast<double>(m);
  for (std::uint64_t k = 0; k < m; ++k) {
    // (-1)^k exp(i pi k^2 / M) = exp(i pi (k^2 + k M) / M); reduce mod 2M.
    const std::uint64_t p = (k * k + k * m) % (2 * m);
    tables->chirp[k] = std::polar(1.0, pi_over_m * static_cast<double>(p));
    tables->tone[k] = std::polar(1.0, 2.0 * pi_over_m * static_cast<double>(k));
  }
  for (std::uint64_t j = 0; j < m / 2; ++j) {
    tables->twiddle[j] = std::polar(1.0, -2.0 * pi_over_m * static_cast<double>(j));
  }
  tables_ = std::move(tables);
}

SymbolIndex symbol_from_bits(const LoRaParams& params, std::span<const std::uint8_t> bits) {
  if (bits.size() != static_cast<std::size_t>(params.sf())) {
    throw std::invalid_argument("symbol_from_bits: expected sf bits");
  }
  std::uint32_t m = 0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] > 1) throw std::invalid_argument("symbol_from_bits: bits must be 0 or 1");
    m |= static_cast<std::uint32_t>(bits[j]) << j;
  }
  return SymbolIndex{m};
}

std::vector<std::uint8_t> bits_from_symbol(const LoRaParams& params, SymbolIndex m) {
  if (m.value >= params.m_size()) {
    throw std::out_of_range("bits_from_symbol: symbol index out of range");
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(params.sf()));
  for (std::size_t j = 0; j < bits.size(); ++j) {
    bits[j] = static_cast<std::uint8_t>((m.value >> j) & 1u);
  }
  return bits;
}

}  // namespace lora
