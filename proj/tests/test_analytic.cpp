#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lora/analytic_ser.hpp"
#include "lora/channel.hpp"
#include "lora/link_budget.hpp"
#include "lora/params.hpp"
#include "lora/specfun.hpp"

#include "ser_exact_sf5_k1.inc"
#include "ser_noncoherent_cases.inc"

namespace {

lora::LinkBudget budget_at(int sf, double k_factor, double ebn0_db) {
  return lora::LinkBudget::from_ebn0_db(sf, lora::ChannelParams::from_k_factor(k_factor),
                                        ebn0_db);
}

}  // namespace

TEST_CASE("zero SNR gives the pure guessing rate for every spreading factor") {
  for (int sf = 2; sf <= 7; ++sf) {
    const auto budget =
        lora::LinkBudget::from_es_n0(sf, lora::ChannelParams::from_k_factor(1.0), 0.0);
    const auto res = lora::ser_exact_rician(budget);
    const double m = static_cast<double>(1u << sf);
    CHECK(res.ser == (m - 1.0) / m);
    CHECK_FALSE(res.degraded);
  }
}

TEST_CASE("closed form matches the frozen SF5 K=1 reference curve") {
  for (const auto& c : kSerExactSf5K1) {
    const auto res = lora::ser_exact_rician(budget_at(5, 1.0, c.ebn0_db));
    REQUIRE_FALSE(res.degraded);
    CHECK(std::abs(res.ser - c.ser) < 1e-10 * c.ser);
  }
}

TEST_CASE("noncoherent special case matches references where the sum is stable") {
  for (const auto& c : kSerNoncoherent) {
    if (c.sf > 5) {
      // The SF7 sum cancels past long double resolution; the closed form
      // must flag it rather than silently return noise.
      const auto pure_los = lora::ChannelParams::from_k_factor(
          std::numeric_limits<double>::infinity());
      const auto budget = lora::LinkBudget::from_es_n0(c.sf, pure_los, c.es_n0);
      CHECK(lora::ser_exact_rician(budget).degraded);
      continue;
    }
    const lora::LoRaParams params(c.sf, c.es_n0);
    CHECK(std::abs(lora::ser_noncoherent(params, c.es_n0) - c.ser) < 1e-10 * c.ser);
  }
}

TEST_CASE("noncoherent case equals the closed form with the scatter turned off") {
  const auto pure_los = lora::ChannelParams::from_k_factor(
      std::numeric_limits<double>::infinity());
  for (double es_n0 : {1.0, 5.0, 20.0, 40.0}) {
    const auto budget = lora::LinkBudget::from_es_n0(5, pure_los, es_n0);
    const auto res = lora::ser_exact_rician(budget);
    CHECK(lora::ser_noncoherent(budget.params(), es_n0) == res.ser);
  }
}

TEST_CASE("alternating sum flags its own cancellation damage") {
  // At SF7 the summands reach ~1e35 while the result is ~1e-3, so no
  // 80-bit accumulation can recover the value; the estimate must say so.
  const auto res7 = lora::ser_exact_rician(budget_at(7, 1.0, 20.0));
  CHECK(res7.degraded);
  const auto res6 = lora::ser_exact_rician(budget_at(6, 1.0, 10.0));
  CHECK(res6.degraded);
  const auto res5 = lora::ser_exact_rician(budget_at(5, 1.0, 0.0));
  CHECK_FALSE(res5.degraded);
  CHECK(res5.est_rel_error < 1e-10);
}

TEST_CASE("spreading factors beyond the cap are rejected or opt-in") {
  const auto budget = budget_at(8, 1.0, 10.0);
  CHECK_THROWS_AS(lora::ser_exact_rician(budget), std::domain_error);
  const auto res = lora::ser_exact_rician(budget, {.max_sf = 8});
  CHECK(res.degraded);
  CHECK(res.ser >= 0.0);
  CHECK(res.ser <= 1.0);
}

TEST_CASE("numeric integration agrees with the closed form at SF5") {
  for (std::size_t i : {0u, 10u, 20u, 30u, 40u}) {
    const auto& c = kSerExactSf5K1[i];
    const auto budget = budget_at(5, 1.0, c.ebn0_db);
    const double quad = lora::ser_numeric_integration(budget);
    CHECK(std::abs(quad - c.ser) < 1e-7 * c.ser);
  }
}

TEST_CASE("numeric integration matches a dense trapezoid oracle at SF7") {
  const auto budget = budget_at(7, 1.0, 20.0);
  const double quad = lora::ser_numeric_integration(budget);

  // Independent discretization: substitute r = q^2 so the integrand is a
  // smooth amplitude-domain density, then apply a 1e7-point trapezoid.
  const double en0 = budget.energy() * budget.channel().n0();
  const double m1 = static_cast<double>(budget.params().m_size()) - 1.0;
  const double s = budget.s();
  const double sigma0_sq = budget.sigma0_sq();
  const double q_max = s + 12.0 * std::sqrt(sigma0_sq);
  const std::size_t n = 10'000'000;
  const double h = q_max / static_cast<double>(n);
  long double acc = 0.0L;
  for (std::size_t i = 0; i <= n; ++i) {
    const double q = h * static_cast<double>(i);
    const double diff = q - s;
    const double pdf = std::exp(-diff * diff / (2.0 * sigma0_sq)) *
                       lora::bessel_i0_scaled(s * q / sigma0_sq) / (2.0 * sigma0_sq);
    const double wrong = -std::expm1(m1 * std::log1p(-std::exp(-q * q / en0)));
    const double weight = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += weight * pdf * wrong * 2.0 * q;
  }
  const double trapezoid = static_cast<double>(acc) * h;
  CHECK(std::abs(quad - trapezoid) < 1e-8);
}

TEST_CASE("integration tends to the guessing rate as SNR vanishes") {
  const auto budget =
      lora::LinkBudget::from_es_n0(5, lora::ChannelParams::from_k_factor(1.0), 1e-12);
  const double quad = lora::ser_numeric_integration(budget);
  CHECK(std::abs(quad - 31.0 / 32.0) < 1e-9);

  const auto zero = lora::LinkBudget::from_es_n0(5, lora::ChannelParams::from_k_factor(1.0), 0.0);
  const auto res = lora::ser_numeric_integration_full(zero);
  CHECK(res.converged);
  CHECK(res.ser == 31.0 / 32.0);
}

TEST_CASE("integration is strictly decreasing in SNR") {
  double prev = 1.0;
  for (int db = 0; db <= 40; db += 5) {
    const double cur = lora::ser_numeric_integration(budget_at(7, 1.0, db));
    CHECK(cur < prev);
    CHECK(cur > 0.0);
    prev = cur;
  }
}

TEST_CASE("integration handles the largest spreading factor") {
  const auto res = lora::ser_numeric_integration_full(budget_at(12, 1.0, 10.0));
  CHECK(res.converged);
  CHECK(res.ser > 0.0);
  CHECK(res.ser < 4095.0 / 4096.0);
}

TEST_CASE("bit error mapping") {
  const lora::LoRaParams params(5, 1.0);
  CHECK(lora::ber_from_ser(params, 1.0) == 16.0 / 31.0);
  CHECK(lora::ber_from_ser(params, 0.0) == 0.0);
  CHECK(lora::ber_from_ser(params, 0.31) == doctest::Approx(0.31 * 16.0 / 31.0).epsilon(1e-15));
  CHECK_THROWS_AS(lora::ber_from_ser(params, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(lora::ber_from_ser(params, 1.1), std::invalid_argument);
}
