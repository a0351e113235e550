#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

namespace lora {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  bool converged = false;
  int intervals = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

// Gauss-Kronrod 7-15 on [a, b] with the usual scaled error estimate: the
// raw |K15 - G7| difference is damped against the integral of |f - mean|
// so smooth segments are not over-refined.
template <class F>
Segment gk15(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fv[15];
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(center - half * kKronrodNodes[j]);
    fv[14 - j] = f(center + half * kKronrodNodes[j]);
  }
  fv[7] = f(center);

  double resk = kKronrodWeights[7] * fv[7];
  double resg = kGaussWeights[3] * fv[7];
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    resk += kKronrodWeights[j] * (fv[j] + fv[14 - j]);
    resabs += kKronrodWeights[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
  }
  for (int j = 0; j < 3; ++j) {
    resg += kGaussWeights[j] * (fv[2 * j + 1] + fv[13 - 2 * j]);
  }
  const double mean = resk * 0.5;
  double resasc = kKronrodWeights[7] * std::abs(fv[7] - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kKronrodWeights[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  }
  resasc *= half;
  resabs *= half;

  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double round_floor = 50.0 * 2.220446049250313e-16 * resabs;
  err = std::max(err, round_floor);
  return {a, b, resk * half, err};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration over the union of the intervals
/// between consecutive breakpoints. The worst segment (largest error
/// estimate) is bisected until the summed estimate drops below abs_tol or
/// the segment budget runs out; converged reports which happened.
template <class F>
QuadratureResult integrate_adaptive(F&& f, std::span<const double> breakpoints, double abs_tol,
                                    int max_intervals = 2000) {
  std::priority_queue<detail::Segment> queue;
  std::vector<detail::Segment> finished;  // intervals at floating-point resolution
  double error = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) continue;
    auto seg = detail::gk15(f, breakpoints[i], breakpoints[i + 1]);
    error += seg.error;
    queue.push(seg);
    ++count;
  }
  while (error > abs_tol && count < max_intervals && !queue.empty()) {
    const auto worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval is at floating-point resolution; its estimate is final.
      finished.push_back(worst);
      continue;
    }
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++count;
  }
  // Sum the surviving segments directly. A value carried incrementally
  // across the split deltas loses digits once any intermediate estimate
  // dwarfs the final result, and can even cancel to zero on integrands
  // with steep local spikes.
  double value = 0.0;
  double error_out = 0.0;
  for (const auto& seg : finished) {
    value += seg.value;
    error_out += seg.error;
  }
  while (!queue.empty()) {
    value += queue.top().value;
    error_out += queue.top().error;
    queue.pop();
  }
  return {value, error_out, error_out <= abs_tol, count};
}

}  // namespace lora
