#include "lora/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lora/channel.hpp"
#include "lora/rng.hpp"
#include "lora/signal.hpp"

namespace lora {

namespace {

struct Workspace {
  std::vector<cplx> tx, rx, spectrum;
  std::vector<double> bins;

  explicit Workspace(std::uint32_t m_size)
      : tx(m_size), rx(m_size), spectrum(m_size), bins(m_size) {}
};

std::uint64_t run_batch(const LinkBudget& budget, std::uint64_t seed, std::uint64_t batch_index,
                        std::uint32_t n_trials, Workspace& ws) {
  PhiloxStream rng(seed, batch_index);
  const LoRaParams& params = budget.params();
  const ChannelParams& channel = budget.channel();
  const std::uint32_t m_mask = params.m_size() - 1;
  std::uint64_t errors = 0;
  for (std::uint32_t t = 0; t < n_trials; ++t) {
    const std::uint32_t m = rng.next_u32() & m_mask;
    modulate(params, SymbolIndex{m}, ws.tx);
    apply_channel(channel, ws.tx, rng, ws.rx);
    dechirp_dft(params, ws.rx, ws.spectrum, ws.bins);
    if (detect(ws.bins) != m) ++errors;
  }
  return errors;
}

}  // namespace

McResult simulate_ser(const LinkBudget& budget, const McConfig& config) {
  if (config.trials == 0) throw std::invalid_argument("simulate_ser: trials must be >= 1");
  if (config.batch_size == 0) throw std::invalid_argument("simulate_ser: batch_size must be >= 1");
  if (config.parallel_workers == 0) {
    throw std::invalid_argument("simulate_ser: parallel_workers must be >= 1");
  }
  if (!(budget.es_n0() > 0.0)) {
    throw std::invalid_argument("simulate_ser: require es_n0 > 0");
  }

  const std::uint64_t n_batches = (config.trials + config.batch_size - 1) / config.batch_size;
  const auto batch_len = [&](std::uint64_t b) -> std::uint32_t {
    const std::uint64_t begin = b * config.batch_size;
    return static_cast<std::uint32_t>(std::min<std::uint64_t>(config.batch_size,
                                                              config.trials - begin));
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(config.parallel_workers, n_batches));

  std::vector<std::uint64_t> batch_errors(n_batches, 0);
  const auto run_range_dynamic = [&](std::uint64_t begin, std::uint64_t end) {
    // Dynamic assignment is safe: batch b depends only on (seed, b).
    std::atomic<std::uint64_t> next{begin};
    const auto work = [&] {
      Workspace ws(budget.params().m_size());
      for (std::uint64_t b = next.fetch_add(1); b < end; b = next.fetch_add(1)) {
        batch_errors[b] = run_batch(budget, config.seed, b, batch_len(b), ws);
      }
    };
    if (workers == 1) {
      work();
      return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  };

  McResult result;
  if (!config.target_errors) {
    run_range_dynamic(0, n_batches);
    for (std::uint64_t b = 0; b < n_batches; ++b) {
      result.errors += batch_errors[b];
      result.trials_run += batch_len(b);
    }
  } else {
    // The stop point is the first batch index whose cumulative error count
    // reaches the target, scanned in batch order. Waves are only an
    // execution detail: a wave may compute batches past the stop point,
    // but their counts are discarded, so (errors, trials_run) match for
    // every worker count.
    const std::uint64_t target = std::max<std::uint64_t>(*config.target_errors, 1);
    std::uint64_t done = 0;
    bool reached = false;
    while (done < n_batches && !reached) {
      const std::uint64_t wave_end = std::min<std::uint64_t>(done + workers, n_batches);
      run_range_dynamic(done, wave_end);
      for (std::uint64_t b = done; b < wave_end && !reached; ++b) {
        result.errors += batch_errors[b];
        result.trials_run += batch_len(b);
        if (result.errors >= target) reached = true;
      }
      done = wave_end;
    }
  }

  const double n = static_cast<double>(result.trials_run);
  const double p = static_cast<double>(result.errors) / n;
  result.ser_hat = p;
  result.std_error = std::sqrt(p * (1.0 - p) / n);
  const double z95 = 1.959963984540054;
  result.ci95_low = std::max(0.0, p - z95 * result.std_error);
  result.ci95_high = std::min(1.0, p + z95 * result.std_error);
  return result;
}

}  // namespace lora
