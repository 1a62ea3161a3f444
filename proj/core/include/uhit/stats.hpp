#pragma once

// Statistical decision kit for the verification suite: mean/z machinery,
// one- and two-sample Kolmogorov-Smirnov tests with the asymptotic
// Kolmogorov tail, chi-square binned comparisons, and the log-log slope fit
// used by the step-size bias ladders.

#include <cstdint>
#include <functional>
#include <vector>

namespace uhit::stats {

struct MeanSummary {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

// Sample mean and standard error (sample std / sqrt(n)). Requires n >= 2.
MeanSummary summarize(const std::vector<double>& sample);

// (mean - expected) / std_error; exact agreement with zero spread gives 0.
double z_test(double mean, double std_error, double expected);
double z_test(const MeanSummary& estimate, double expected);

// Difference z for two independent estimates.
double z_test_two_sample(const MeanSummary& a, const MeanSummary& b);

// Upper tail of the Kolmogorov distribution,
//   Q(t) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 t^2),
// evaluated through the theta-function dual for small t. Q(0+) = 1.
double kolmogorov_q(double t);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// One-sample KS against a cdf. The p-value uses the asymptotic law with the
// finite-n argument correction D (sqrt(n) + 0.12 + 0.11/sqrt(n)).
// Requires n >= 100 (asymptotics precondition).
KsResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& cdf);

// Two-sample KS; the correction uses the effective size n1 n2 / (n1 + n2).
// Requires both sizes >= 100.
KsResult ks_test(std::vector<double> first, std::vector<double> second);

// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double gamma_q(double a, double x);

// Upper-tail p of a chi-square statistic with dof degrees of freedom.
double chi_square_p(double statistic, double dof);

struct BinnedFit {
  double statistic = 0.0;
  int bins_used = 0;
  double p_value = 1.0;
};

// Chi-square comparison of a sample against the bin probabilities implied by
// a cdf: `interior` equal-width bins on [lo, hi] plus two open tail bins.
// Adjacent bins pool left to right until each cell carries expected count >= 5.
// Degrees of freedom: bins_used - 1.
// Requires interior >= 20, lo < hi, sample size >= 100.
BinnedFit chi_square_binned(const std::vector<double>& sample,
                            const std::function<double(double)>& cdf,
                            int interior, double lo, double hi);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  bool conclusive = false;
};

// Weighted least squares of log(error) on log(step). `noise` carries the
// standard error of each error estimate; weights are the implied log-scale
// variances. The fit is conclusive when at least half the points clear twice
// their noise and the slope clears twice its own standard error. Requires at
// least 3 points with matching array lengths and positive steps.
SlopeFit log_log_slope(const std::vector<double>& step,
                       const std::vector<double>& error,
                       const std::vector<double>& noise);

}  // namespace uhit::stats
