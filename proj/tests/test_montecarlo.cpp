#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>

#include "lora/analytic_ser.hpp"
#include "lora/channel.hpp"
#include "lora/link_budget.hpp"
#include "lora/montecarlo.hpp"

#include "ser_exact_sf5_k1.inc"

namespace {

lora::LinkBudget budget_at(int sf, double k_factor, double ebn0_db) {
  return lora::LinkBudget::from_ebn0_db(sf, lora::ChannelParams::from_k_factor(k_factor),
                                        ebn0_db);
}

}  // namespace

TEST_CASE("no noise and no fading means no errors") {
  const auto channel = lora::ChannelParams::from_k_factor(
                           std::numeric_limits<double>::infinity())
                           .without_noise();
  const auto budget = lora::LinkBudget::from_es_n0(7, channel, 10.0);
  const auto res = lora::simulate_ser(budget, {.trials = 10'000, .seed = 1});
  CHECK(res.errors == 0);
  CHECK(res.trials_run == 10'000);
  CHECK(res.ser_hat == 0.0);
}

TEST_CASE("worker count never changes the outcome") {
  const auto budget = budget_at(5, 1.0, 0.0);
  lora::McConfig base{.trials = 200'001, .seed = 7, .batch_size = 4096};
  base.parallel_workers = 1;
  const auto serial = lora::simulate_ser(budget, base);
  base.parallel_workers = 8;
  const auto parallel = lora::simulate_ser(budget, base);
  CHECK(serial.errors == parallel.errors);
  CHECK(serial.trials_run == parallel.trials_run);
  CHECK(serial.ser_hat == parallel.ser_hat);
  CHECK(serial.trials_run == 200'001);
}

TEST_CASE("estimate agrees with the closed form within four sigma") {
  const auto budget = budget_at(5, 1.0, 0.0);
  const auto res = lora::simulate_ser(
      budget, {.trials = 1'000'000, .seed = 42, .parallel_workers = 8});
  const double ref = kSerExactSf5K1[0].ser;
  CHECK(std::abs(res.ser_hat - ref) < 4.0 * res.std_error);
  CHECK(res.ci95_low <= res.ser_hat);
  CHECK(res.ser_hat <= res.ci95_high);
  CHECK(res.std_error == doctest::Approx(std::sqrt(ref * (1 - ref) / 1e6)).epsilon(0.05));
}

TEST_CASE("vanishing SNR approaches the pure guessing rate") {
  const auto budget =
      lora::LinkBudget::from_es_n0(5, lora::ChannelParams::from_k_factor(1.0), 5e-6);
  const auto res = lora::simulate_ser(budget, {.trials = 100'000, .seed = 3});
  CHECK(std::abs(res.ser_hat - 31.0 / 32.0) < 4.0 * res.std_error);
}

TEST_CASE("error target stops at a batch boundary and stays deterministic") {
  const auto budget = budget_at(5, 1.0, 5.0);
  lora::McConfig cfg{.trials = 1'000'000, .seed = 11, .batch_size = 1000};
  cfg.target_errors = 50;
  cfg.parallel_workers = 1;
  const auto serial = lora::simulate_ser(budget, cfg);
  cfg.parallel_workers = 4;
  const auto parallel = lora::simulate_ser(budget, cfg);
  CHECK(serial.errors == parallel.errors);
  CHECK(serial.trials_run == parallel.trials_run);
  CHECK(serial.errors >= 50);
  CHECK(serial.trials_run < 1'000'000);
  CHECK(serial.trials_run % 1000 == 0);
}

TEST_CASE("a target beyond reach runs the full trial budget") {
  const auto budget = budget_at(5, 1.0, 40.0);
  lora::McConfig cfg{.trials = 20'000, .seed = 2, .batch_size = 4096};
  cfg.target_errors = 1'000'000;
  const auto res = lora::simulate_ser(budget, cfg);
  CHECK(res.trials_run == 20'000);
}

TEST_CASE("configuration validation") {
  const auto budget = budget_at(5, 1.0, 10.0);
  CHECK_THROWS_AS(lora::simulate_ser(budget, {.trials = 0}), std::invalid_argument);
  CHECK_THROWS_AS(lora::simulate_ser(budget, {.trials = 10, .batch_size = 0}),
                  std::invalid_argument);
  lora::McConfig cfg{.trials = 10};
  cfg.parallel_workers = 0;
  CHECK_THROWS_AS(lora::simulate_ser(budget, cfg), std::invalid_argument);
  const auto zero_snr =
      lora::LinkBudget::from_es_n0(5, lora::ChannelParams::from_k_factor(1.0), 0.0);
  CHECK_THROWS_AS(lora::simulate_ser(zero_snr, {.trials = 10}), std::invalid_argument);
}

TEST_CASE("single-worker throughput meets the symbol rate floor") {
  // Guards against an accidental complexity blow-up in the per-trial
  // chain, which would cost an order of magnitude, not a few percent.
  // Best-of-three with a coarse floor keeps shared-machine load noise
  // from failing the build.
  const auto budget = budget_at(7, 1.0, 10.0);
  double best_rate = 0.0;
  for (std::uint64_t attempt = 0; attempt < 3; ++attempt) {
    const lora::McConfig cfg{.trials = 100'000, .seed = 5 + attempt};
    const auto start = std::chrono::steady_clock::now();
    const auto res = lora::simulate_ser(budget, cfg);
    const auto stop = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(stop - start).count();
    CHECK(res.trials_run == 100'000);
    best_rate = std::max(best_rate, static_cast<double>(res.trials_run) / seconds);
  }
  CHECK(best_rate > 4e4);
}

TEST_CASE("estimator calibration against the numeric reference") {
  // Nine points, the estimate should sit inside the 99 percent interval
  // essentially always; allow a single excursion.
  int excursions = 0;
  for (int db = 0; db <= 40; db += 5) {
    const auto budget = budget_at(7, 1.0, db);
    const double ref = lora::ser_numeric_integration(budget);
    const auto res = lora::simulate_ser(
        budget, {.trials = 1'000'000, .seed = 1234, .parallel_workers = 8});
    const double sigma = std::max(res.std_error, std::sqrt(ref * (1 - ref) / 1e6));
    if (std::abs(res.ser_hat - ref) > 2.576 * sigma) ++excursions;
  }
  CHECK(excursions <= 1);
}
