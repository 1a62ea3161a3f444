#include "uhit/two_barrier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "uhit/closedform.hpp"

namespace uhit::tb {

namespace {

constexpr double kSeriesThreshold = 1e-2;  // on delta * (a + b)
constexpr double kFactoredThreshold = 30.0;

void require_positive(double v, const char* what, const char* where) {
  if (!(std::isfinite(v) && v > 0.0)) {
    std::ostringstream msg;
    msg << where << ": " << what << " must be positive and finite, got " << v;
    throw std::domain_error(msg.str());
  }
}

[[noreturn]] void throw_not_converged(const char* where,
                                      const quad::IntegrationResult& r) {
  std::ostringstream msg;
  msg << where << ": quadrature did not converge: error estimate " << r.error
      << " after " << r.subdivisions << " subdivisions";
  throw quad::QuadratureError(msg.str());
}

// Integrates f over [0, inf) split at `cut`, with the tail mapped at the
// given decay scale. Returns value and accumulated error; throws on
// non-convergence of either piece.
template <typename F>
quad::IntegrationResult integrate_split(F&& f, double cut, double decay,
                                        const quad::QuadratureSpec& spec,
                                        const char* where) {
  auto head = quad::integrate(f, quad::Finite{0.0, cut}, spec);
  if (!head.converged) throw_not_converged(where, head);
  quad::QuadratureSpec tail_spec = spec;
  tail_spec.tail_transform = quad::QuadratureSpec::TailTransform::exp_map;
  tail_spec.tail_scale = 1.0 / decay;
  auto tail = quad::integrate(f, quad::SemiInfinite{cut}, tail_spec);
  if (!tail.converged) throw_not_converged(where, tail);
  return {head.value + tail.value, head.error + tail.error, true,
          head.subdivisions + tail.subdivisions};
}

}  // namespace

double phi_delta(double a, double b, double p, double delta) {
  require_positive(a, "a", "phi_delta");
  require_positive(b, "b", "phi_delta");
  require_positive(delta, "delta", "phi_delta");
  if (!(std::isfinite(p) && p > -1.0)) {
    throw std::domain_error("phi_delta: power must exceed -1");
  }
  return a * b + b * b * ((p - 1.0) - (p - 2.0) * std::cosh(delta * (a + b)));
}

double e_delta(double delta, double a, double b) {
  require_positive(a, "a", "e_delta");
  require_positive(b, "b", "e_delta");
  if (!(std::isfinite(delta) && delta >= 0.0)) {
    throw std::domain_error("e_delta: delta must be nonnegative and finite");
  }
  const double s = delta * (a + b);

  // Every subexpression below is symmetric under (a, b) exchange except the
  // leading differences, which an exchange reverses; IEEE arithmetic then
  // negates the result exactly, so e_delta(d, a, b) == -e_delta(d, b, a)
  // holds bit for bit in all three branches.
  if (s < kSeriesThreshold) {
    const double d2 = delta * delta;
    const double sym =
        a * b * (1.0 / 3.0 -
                 d2 * (13.0 * (a * a + b * b) + 35.0 * (a * b)) / 180.0);
    return sym * (a - b);
  }
  if (s < kFactoredThreshold) {
    const double sa = std::sinh(delta * a);
    const double sb = std::sinh(delta * b);
    const double t1 = (b * sa - a * sb) / (2.0 * delta * delta * std::sinh(s));
    const double t2 =
        (a * a * sb - b * b * sa) / (2.0 * delta * (1.0 + std::cosh(s)));
    return t1 + t2;
  }
  const double ea = std::exp(-delta * a);
  const double eb = std::exp(-delta * b);
  const double ga = -std::expm1(-2.0 * delta * a);
  const double gb = -std::expm1(-2.0 * delta * b);
  const double gc = -std::expm1(-2.0 * s);
  const double t1 = (b * eb * ga - a * ea * gb) / (2.0 * delta * delta * gc);
  const double den2 = 1.0 + std::exp(-s);
  const double t2 = (a * a * ea * gb - b * b * eb * ga) /
                    (2.0 * delta * den2 * den2);
  return t1 + t2;
}

PsiEval psi_detail(const TwoBarrier& tb, const quad::QuadratureSpec& spec) {
  require_positive(tb.a, "a", "psi");
  require_positive(tb.b, "b", "psi");
  require_positive(tb.theta, "theta", "psi");
  const double a = tb.a;
  const double b = tb.b;
  const double c = a + b;
  const double p = 2.0 * tb.theta - 1.0;
  const double m = std::min(a, b);
  const double pref =
      std::sqrt(2.0 / std::numbers::pi) / cf::gauss_abs_moment(p);
  const double tol_floor = 0.1 * spec.abs_tol;

  // Tail cut: beyond the factored-exponential threshold, |E_delta| decays
  // like exp(-m delta) with an explicit polynomial envelope, so the
  // remaining mass admits an incomplete-gamma bound that doubling the cut
  // drives below a tenth of the absolute tolerance.
  double cut = std::max({kFactoredThreshold / c, 2.0 * (p + 1.0) / m, 1.0});
  auto tail1_bound = [&](double A) {
    const double envelope =
        1.01 * (c / (2.0 * A * A) + (a * a + b * b) / (2.0 * A));
    return 2.0 * envelope * std::pow(m * A, p) * std::exp(-m * A) /
           std::pow(m, p + 1.0);
  };
  while (tail1_bound(cut) >= tol_floor && cut < 1e6) cut *= 2.0;

  auto rep1 = [&](double d) { return std::pow(d, p) * e_delta(d, a, b); };
  auto r1 = integrate_split(rep1, cut, m, spec, "psi");
  PsiEval out;
  out.value = pref * r1.value;
  out.error = pref * (r1.error + tail1_bound(cut));
  if (tb.theta == 1.0) return out;

  // Second representation: one integration by parts in delta trades the
  // resolvent for sinh-weighted quadratic factors. Near zero the leading
  // linear terms cancel analytically; the series branch removes that
  // cancellation, and the factored branch keeps hyperbolics bounded.
  const double t4 = 4.0 * (tb.theta - 1.0);
  auto quad_factor = [&](double x, double y, double chs) {
    // x y + y^2 (p - 1 - (p - 2) ch), with ch passed in precomputed
    return x * y + y * y * ((p - 1.0) - (p - 2.0) * chs);
  };
  const double k5 = std::pow(a * a + a * b + b * b, 2) / 120.0 -
                    c * c * (p - 2.0) * a * b / 12.0 +
                    std::pow(c, 4) * (p - 2.0) / 24.0;
  auto rep2 = [&](double d) {
    const double s = d * c;
    if (s < kSeriesThreshold) {
      const double core = (3.0 * p - 5.0) / 6.0 +
                          d * d * (k5 / (c * c) -
                                   c * c * (3.0 * p - 5.0) / 18.0);
      return std::pow(d, p) * a * b * (a - b) * core / t4;
    }
    if (s < kFactoredThreshold) {
      const double chs = std::cosh(s);
      const double shs = std::sinh(s);
      const double num = std::sinh(d * a) * quad_factor(a, b, chs) -
                         std::sinh(d * b) * quad_factor(b, a, chs);
      return std::pow(d, p - 1.0) * num / (t4 * shs * shs);
    }
    const double e2c = std::exp(-2.0 * s);
    auto g = [&](double x, double y) {
      return -std::expm1(-2.0 * d * x) *
             (2.0 * (x * y + y * y * (p - 1.0)) * std::exp(-d * (x + 2.0 * y)) -
              y * y * (p - 2.0) * std::exp(-d * y) * (1.0 + e2c));
    };
    const double den = -std::expm1(-2.0 * s);
    return std::pow(d, p - 1.0) * (g(a, b) - g(b, a)) / (t4 * den * den);
  };

  const double kg = 2.0 * (a * b + b * b * std::abs(p - 1.0)) +
                    2.01 * b * b * std::abs(p - 2.0) +
                    2.0 * (a * b + a * a * std::abs(p - 1.0)) +
                    2.01 * a * a * std::abs(p - 2.0);
  double cut2 = cut;
  auto tail2_bound = [&](double A) {
    return 2.0 * 1.01 * kg / std::abs(t4) * std::pow(m * A, p - 1.0) *
           std::exp(-m * A) / std::pow(m, p);
  };
  while (tail2_bound(cut2) >= tol_floor && cut2 < 1e6) cut2 *= 2.0;

  auto r2 = integrate_split(rep2, cut2, m, spec, "psi");
  out.has_alt = true;
  out.alt_value = pref * r2.value;
  const double err2 = pref * (r2.error + tail2_bound(cut2));
  const double tol = 100.0 * (out.error + err2) +
                     1e-8 * (1.0 + std::abs(out.value));
  if (!(std::abs(out.value - out.alt_value) <= tol)) {
    std::ostringstream msg;
    msg << "psi: integral representations disagree: " << out.value << " vs "
        << out.alt_value << ", gap " << std::abs(out.value - out.alt_value)
        << " exceeds " << tol;
    throw ConsistencyError(msg.str());
  }
  return out;
}

double psi(const TwoBarrier& tb, const quad::QuadratureSpec& spec) {
  return psi_detail(tb, spec).value;
}

double psi_three_half(double a, double b) {
  require_positive(a, "a", "psi_three_half");
  require_positive(b, "b", "psi_three_half");
  const double lam = b / a;
  const double c = 1.0 + lam;
  const double decay = std::min(1.0 + 2.0 * lam, 2.0 + lam);

  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 2048;

  double cut = std::max(kFactoredThreshold / c, 4.0 / decay);
  auto tail_bound = [&](double A) {
    return 2.1 * (lam + 1.0) * (1.0 + decay * A) * std::exp(-decay * A) /
           (decay * decay);
  };
  while (tail_bound(cut) >= 0.1 * spec.abs_tol && cut < 1e6) cut *= 2.0;

  auto integrand = [&](double d) {
    const double s = d * c;
    if (s < kSeriesThreshold) {
      return d * d * lam * (1.0 - lam * lam) / (6.0 * c * c) +
             d * d * d * d * (lam * (1.0 - std::pow(lam, 4)) / (120.0 * c * c) -
                              lam * (1.0 - lam * lam) / 18.0);
    }
    if (s < kFactoredThreshold) {
      const double shs = std::sinh(s);
      return d * (lam * std::sinh(d) - std::sinh(d * lam)) / (shs * shs);
    }
    const double den = -std::expm1(-2.0 * s);
    const double num =
        lam * std::exp(-d * (1.0 + 2.0 * lam)) * -std::expm1(-2.0 * d) -
        std::exp(-d * (2.0 + lam)) * -std::expm1(-2.0 * d * lam);
    return 2.0 * d * num / (den * den);
  };

  auto r = integrate_split(integrand, cut, decay, spec, "psi_three_half");
  return (1.0 + lam) / std::sqrt(2.0 * std::numbers::pi) * r.value;
}

}  // namespace uhit::tb
