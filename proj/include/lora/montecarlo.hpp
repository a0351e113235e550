#pragma once

#include <cstdint>
#include <optional>

#include "lora/link_budget.hpp"

namespace lora {

struct McConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;
  /// Trials per RNG substream. Batch b of a run draws only from stream
  /// (seed, b), so results are identical for any worker count.
  std::uint32_t batch_size = 1u << 16;
  /// Stop at the first batch, in batch order, whose inclusion brings the
  /// cumulative error count to this target; batches beyond it are dropped
  /// even when a parallel wave has already computed them.
  std::optional<std::uint64_t> target_errors;
  unsigned parallel_workers = 1;
};

struct McResult {
  std::uint64_t errors = 0;
  std::uint64_t trials_run = 0;
  double ser_hat = 0.0;
  double std_error = 0.0;  // sqrt(p(1-p)/n)
  double ci95_low = 0.0;
  double ci95_high = 0.0;
};

/// Transmit uniform random symbols through the faded noisy channel, detect,
/// and count errors. Deterministic for a given (seed, batch_size, trials,
/// target_errors) regardless of parallel_workers.
McResult simulate_ser(const LinkBudget& budget, const McConfig& config);

}  // namespace lora
