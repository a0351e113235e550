#pragma once

namespace lora {

/// ln C(n, k) for 0 <= k <= n; throws std::domain_error otherwise.
double log_binomial(int n, int k);

/// exp(-x) I0(x) for x >= 0. Power series below x = 15, asymptotic
/// expansion above; both branches stay in [0, 1] with no overflow.
double bessel_i0_scaled(double x);

/// First-order Marcum function Q1(a, b) = P(R > b) for Rice(a, 1) envelope
/// R. Evaluated as a Poisson mixture of Poisson tails,
///   Q1(a, b) = sum_k exp(-x) x^k / k! * P(Poisson(y) <= k),
/// with x = a^2/2, y = b^2/2, summed from below the mode of the weight
/// distribution until the accumulated weight leaves a tail under 1e-15.
double marcum_q1(double a, double b);

/// Law of the squared Rice envelope |s + CN(0, 2 sigma0_2)| ^ 2, i.e. a
/// scaled noncentral chi-square with two degrees of freedom. This is the
/// decision-metric distribution of the matched bin.
class NoncentralChi2 {
 public:
  /// s >= 0, sigma0_2 > 0.
  NoncentralChi2(double s, double sigma0_2);

  double s() const { return s_; }
  double sigma0_2() const { return sigma0_2_; }

  /// f(r) = exp(-(sqrt(r)-s)^2 / (2 sigma0_2)) I0e(s sqrt(r) / sigma0_2)
  ///        / (2 sigma0_2); the scaled Bessel form cannot overflow.
  double pdf(double r) const;

  /// F(r) = 1 - Q1(s / sigma0, sqrt(r) / sigma0).
  double cdf(double r) const;

 private:
  double s_;
  double sigma0_2_;
};

}  // namespace lora
