#include "uhit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uhit::stats {

namespace {

constexpr double kPi = 3.14159265358979323846;

double corrected_argument(double d, double effective_n) {
  double rn = std::sqrt(effective_n);
  return d * (rn + 0.12 + 0.11 / rn);
}

}  // namespace

MeanSummary summarize(const std::vector<double>& sample) {
  if (sample.size() < 2) {
    throw std::invalid_argument("summarize: need at least two values");
  }
  double n = static_cast<double>(sample.size());
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : sample) {
    double d = v - mean;
    ss += d * d;
  }
  double var = ss / (n - 1.0);
  return {mean, std::sqrt(var / n), sample.size()};
}

double z_test(double mean, double std_error, double expected) {
  double diff = mean - expected;
  if (std_error == 0.0) {
    if (diff == 0.0) return 0.0;
    return diff > 0.0 ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
  }
  return diff / std_error;
}

double z_test(const MeanSummary& estimate, double expected) {
  return z_test(estimate.mean, estimate.std_error, expected);
}

double z_test_two_sample(const MeanSummary& a, const MeanSummary& b) {
  double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  return z_test(a.mean, se, b.mean);
}

double kolmogorov_q(double t) {
  if (!(t > 0.0)) return 1.0;
  if (t < 1.0) {
    // Theta-function dual: Q(t) = 1 - sqrt(2 pi)/t sum exp(-(2k-1)^2 pi^2 / (8 t^2)).
    double s = 0.0;
    double base = kPi * kPi / (8.0 * t * t);
    for (int k = 1; k <= 20; ++k) {
      double odd = 2.0 * k - 1.0;
      double term = std::exp(-odd * odd * base);
      s += term;
      if (term < 1e-18 * (s + 1e-300)) break;
    }
    double q = 1.0 - std::sqrt(2.0 * kPi) / t * s;
    return std::clamp(q, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& cdf) {
  if (sample.size() < 100) {
    throw std::invalid_argument("ks_test: sample below asymptotic size 100");
  }
  std::sort(sample.begin(), sample.end());
  double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return {d, kolmogorov_q(corrected_argument(d, n))};
}

KsResult ks_test(std::vector<double> first, std::vector<double> second) {
  if (first.size() < 100 || second.size() < 100) {
    throw std::invalid_argument("ks_test: sample below asymptotic size 100");
  }
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  double n1 = static_cast<double>(first.size());
  double n2 = static_cast<double>(second.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < first.size() && j < second.size()) {
    if (first[i] <= second[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::fabs(static_cast<double>(i) / n1 -
                              static_cast<double>(j) / n2));
  }
  double ne = n1 * n2 / (n1 + n2);
  return {d, kolmogorov_q(corrected_argument(d, ne))};
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // Lower series, then complement.
    double term = 1.0 / a;
    double sum = term;
    double ak = a;
    for (int k = 0; k < 500; ++k) {
      ak += 1.0;
      term *= x / ak;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return 1.0 - sum * std::exp(log_prefix);
  }
  // Continued fraction for the upper function (modified Lentz).
  double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double f = d;
  for (int k = 1; k <= 500; ++k) {
    double an = -static_cast<double>(k) * (static_cast<double>(k) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return f * std::exp(log_prefix);
}

double chi_square_p(double statistic, double dof) {
  if (!(dof > 0.0)) {
    throw std::invalid_argument("chi_square_p: need positive dof");
  }
  if (statistic <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * statistic);
}

BinnedFit chi_square_binned(const std::vector<double>& sample,
                            const std::function<double(double)>& cdf,
                            int interior, double lo, double hi) {
  if (interior < 20) {
    throw std::invalid_argument("chi_square_binned: need at least 20 bins");
  }
  if (!(lo < hi)) {
    throw std::invalid_argument("chi_square_binned: need lo < hi");
  }
  if (sample.size() < 100) {
    throw std::invalid_argument("chi_square_binned: sample below size 100");
  }
  int total_bins = interior + 2;
  std::vector<double> expected(total_bins, 0.0);
  std::vector<double> observed(total_bins, 0.0);
  double n = static_cast<double>(sample.size());
  double width = (hi - lo) / interior;

  double prev = cdf(lo);
  expected[0] = prev;
  for (int b = 1; b <= interior; ++b) {
    double next = cdf(lo + width * b);
    expected[b] = std::max(next - prev, 0.0);
    prev = next;
  }
  expected[total_bins - 1] = std::max(1.0 - prev, 0.0);
  for (double& e : expected) e *= n;

  for (double v : sample) {
    int b;
    if (v < lo) {
      b = 0;
    } else if (v >= hi) {
      b = total_bins - 1;
    } else {
      b = 1 + static_cast<int>((v - lo) / width);
      b = std::min(b, interior);
    }
    observed[b] += 1.0;
  }

  // Pool adjacent bins left to right until each cell has expected count >= 5;
  // a trailing remainder merges into the last pooled cell.
  std::vector<double> eo, oo;
  double ae = 0.0, ao = 0.0;
  for (int b = 0; b < total_bins; ++b) {
    ae += expected[b];
    ao += observed[b];
    if (ae >= 5.0) {
      eo.push_back(ae);
      oo.push_back(ao);
      ae = ao = 0.0;
    }
  }
  if ((ae > 0.0 || ao > 0.0) && !eo.empty()) {
    eo.back() += ae;
    oo.back() += ao;
  }

  double stat = 0.0;
  int used = 0;
  for (std::size_t b = 0; b < eo.size(); ++b) {
    if (eo[b] <= 0.0) continue;
    double d = oo[b] - eo[b];
    stat += d * d / eo[b];
    ++used;
  }
  if (used < 2) {
    throw std::invalid_argument("chi_square_binned: degenerate binning");
  }
  return {stat, used, chi_square_p(stat, static_cast<double>(used - 1))};
}

SlopeFit log_log_slope(const std::vector<double>& step,
                       const std::vector<double>& error,
                       const std::vector<double>& noise) {
  std::size_t m = step.size();
  if (m < 3 || error.size() != m || noise.size() != m) {
    throw std::invalid_argument("log_log_slope: need >= 3 aligned points");
  }
  int clear = 0;
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(step[i] > 0.0)) {
      throw std::invalid_argument("log_log_slope: steps must be positive");
    }
    double err = std::fabs(error[i]);
    double sig = std::max(noise[i], 0.0);
    if (err > 2.0 * sig) ++clear;
    // Log-scale noise; floor the relative error at 10% so a lucky
    // near-exact point cannot dominate the fit.
    double rel = err > 0.0 ? std::max(sig / err, 0.1) : 10.0;
    double w = 1.0 / (rel * rel);
    double x = std::log(step[i]);
    double y = std::log(std::max(err, 1e-300));
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
  }
  double denom = sw * sxx - sx * sx;
  SlopeFit fit;
  if (denom <= 0.0) return fit;
  fit.slope = (sw * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / sw;
  fit.slope_se = std::sqrt(sw / denom);
  fit.conclusive = 2 * clear >= static_cast<int>(m) &&
                   std::fabs(fit.slope) > 2.0 * fit.slope_se;
  return fit;
}

}  // namespace uhit::stats
