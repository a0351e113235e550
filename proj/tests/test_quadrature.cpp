#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lora/quadrature.hpp"

TEST_CASE("polynomial integrates exactly") {
  const std::vector<double> breaks{0.0, 1.0};
  const auto res = lora::integrate_adaptive([](double x) { return x * x; }, breaks, 1e-12);
  CHECK(res.converged);
  CHECK(res.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("exponential decay over a long interval") {
  const std::vector<double> breaks{0.0, 40.0};
  const auto res = lora::integrate_adaptive([](double x) { return std::exp(-x); }, breaks, 1e-13);
  CHECK(res.converged);
  CHECK(res.value == doctest::Approx(-std::expm1(-40.0)).epsilon(1e-13));
}

TEST_CASE("narrow peak is resolved when flagged by a breakpoint") {
  const double center = 4.1377;
  const double width_sq = 0.01;
  const auto f = [&](double x) {
    const double d = x - center;
    return std::exp(-d * d / width_sq) / std::sqrt(width_sq * std::numbers::pi);
  };
  const std::vector<double> breaks{0.0, center, 10.0};
  const auto res = lora::integrate_adaptive(f, breaks, 1e-11);
  CHECK(res.converged);
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("breakpoints split the domain into independent intervals") {
  const std::vector<double> breaks{0.0, 0.5, 0.5, 2.0, 7.0};
  const auto res =
      lora::integrate_adaptive([](double x) { return std::cos(x); }, breaks, 1e-12);
  CHECK(res.converged);
  CHECK(res.value == doctest::Approx(std::sin(7.0)).epsilon(1e-12));
}

TEST_CASE("steep boundary layer exhausts a tiny budget without converging") {
  const auto f = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3) + 1e-12); };
  const std::vector<double> breaks{0.0, 1.0};
  const auto res = lora::integrate_adaptive(f, breaks, 1e-12, 3);
  CHECK_FALSE(res.converged);
  CHECK(res.intervals <= 3);
}

TEST_CASE("generous budget resolves the same boundary layer") {
  // The integrand peaks at 1e6 and varies over twelve decades around 0.3.
  const auto f = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3) + 1e-12); };
  const std::vector<double> breaks{0.0, 0.3, 1.0};
  const auto res = lora::integrate_adaptive(f, breaks, 1e-8, 2000);
  CHECK(res.converged);
  // 2 (sqrt(0.3 + 1e-12) + sqrt(0.7 + 1e-12)) - 4 sqrt(1e-12).
  CHECK(res.value == doctest::Approx(2.7687611680815043).epsilon(1e-7));
}

TEST_CASE("empty and degenerate breakpoint lists integrate to zero") {
  const std::vector<double> empty;
  const auto res0 = lora::integrate_adaptive([](double) { return 1.0; }, empty, 1e-12);
  CHECK(res0.value == 0.0);
  CHECK(res0.converged);

  const std::vector<double> point{2.0, 2.0};
  const auto res1 = lora::integrate_adaptive([](double) { return 1.0; }, point, 1e-12);
  CHECK(res1.value == 0.0);
  CHECK(res1.converged);
}
