#include "uhit/closedform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uhit/quadrature.hpp"

namespace uhit::cf {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2OverPi = std::sqrt(2.0 / kPi);

quad::QuadratureSpec tight_spec() {
  quad::QuadratureSpec spec;
  spec.abs_tol = 1e-13;
  spec.rel_tol = 1e-13;
  spec.max_subdivisions = 1024;
  return spec;
}

// exp(z^2) erfc(z) for z >= 0, without overflow. The direct product is exact
// to full precision up to z = 26 (both factors stay normal); beyond that the
// asymptotic series in 1/(2z^2) is already below 1e-13 relative error.
double erfcx(double z) {
  if (z < 26.0) return std::exp(z * z) * std::erfc(z);
  const double u = 1.0 / (2.0 * z * z);
  const double series = 1.0 + u * (-1.0 + u * (3.0 + u * (-15.0 + u * 105.0)));
  return series / (z * std::sqrt(kPi));
}

// exp((1 - a^2)/(2t)) erfcx(a / sqrt(2t)) for a >= 1: the stable pairing of
// the exp(1/(2t)) prefactor with a complementary error function.
double paired_tail(double a, double t) {
  const double z = a / std::sqrt(2.0 * t);
  return std::exp((1.0 - a * a) / (2.0 * t)) * erfcx(z);
}

double phi_weighted(double order, int log_power) {
  auto f = [order, log_power](double y) {
    double w = 1.0;
    for (int i = 0; i < log_power; ++i) w *= std::log(y);
    return std::pow(y, order + 1.0) * w / (1.0 + y);
  };
  // Split at 1: isolates the (integrable) singularity at 0 and the sign
  // change of log y.
  const quad::QuadratureSpec spec = tight_spec();
  return quad::integrate_value(f, quad::Finite{0.0, 1.0}, spec) +
         quad::integrate_value(f, quad::Finite{1.0, 2.0}, spec);
}

}  // namespace

double gauss_abs_moment(double order) {
  if (order < 0.0) throw std::domain_error("gauss_abs_moment: order < 0");
  return std::exp(std::lgamma(1.0 + order) - 0.5 * order * std::numbers::ln2 -
                  std::lgamma(1.0 + 0.5 * order));
}

double phi(double order) {
  if (order <= -2.0) throw std::domain_error("phi: order <= -2");
  return phi_weighted(order, 0);
}

double phi_prime(double order) {
  if (order <= -2.0) throw std::domain_error("phi_prime: order <= -2");
  return phi_weighted(order, 1);
}

double phi_second(double order) {
  if (order <= -2.0) throw std::domain_error("phi_second: order <= -2");
  return phi_weighted(order, 2);
}

double moment_i_plus(double order) {
  return gauss_abs_moment(order) * phi(order) * std::exp2(-(order + 1.0));
}

double moment_i_minus(double order) {
  return gauss_abs_moment(order) * log3 * std::exp2(-(order + 1.0));
}

double moment_i(double order) {
  return moment_i_plus(order) - moment_i_minus(order);
}

double alpha_density(double y) {
  if (y <= 0.0) return kSqrt2OverPi * log3 * std::exp(-2.0 * y * y);
  // Factor out the smallest exponent (at w = 2) so the integrand is O(1) and
  // the prefactor carries all the decay in y.
  auto f = [y](double w) {
    return std::exp(-2.0 * y * y * (1.0 / (w * w) - 0.25)) / (1.0 + w);
  };
  const double integral =
      quad::integrate_value(f, quad::Finite{0.0, 2.0}, tight_spec());
  return kSqrt2OverPi * std::exp(-0.5 * y * y) * integral;
}

double alpha_cdf(double y) {
  if (y <= 0.0) return log3 * 0.5 * std::erfc(-std::numbers::sqrt2 * y);
  auto f = [y](double w) {
    return w * std::erf(std::numbers::sqrt2 * y / w) / (1.0 + w);
  };
  const double integral =
      quad::integrate_value(f, quad::Finite{0.0, 2.0}, tight_spec());
  return 0.5 * log3 + 0.5 * integral;
}

double alpha_density_conditional(double y, double t) {
  if (t <= 0.0) throw std::domain_error("alpha_density_conditional: t <= 0");
  const double rt = std::sqrt(t);
  if (y >= 0.0) {
    const double u = y * rt;
    if (u > 1.0) return 0.0;
    return rt * -std::expm1(-2.0 * (1.0 - u) * (2.0 - u) / t);
  }
  const double v = -y * rt;
  return rt * std::exp(-2.0 * v * (v + 1.0) / t) *
         -std::expm1(-4.0 * (1.0 + v) / t);
}

double alpha_conditional_cdf(double y, double t) {
  if (t <= 0.0) throw std::domain_error("alpha_conditional_cdf: t <= 0");
  const double rt = std::sqrt(t);
  const double k = std::sqrt(2.0 * kPi * t) / 4.0;
  if (y >= 0.0) {
    const double u = y * rt;
    if (u >= 1.0) return 1.0;
    return k * (paired_tail(1.0, t) - paired_tail(3.0 - 2.0 * u, t)) + u;
  }
  const double v = -y * rt;
  return k * (paired_tail(1.0 + 2.0 * v, t) - paired_tail(3.0 + 2.0 * v, t));
}

double hitting_time_density(double t) {
  if (t <= 0.0) return 0.0;
  return std::exp(-0.5 / t) / (t * std::sqrt(2.0 * kPi * t));
}

double local_time_laplace(const LevelSpec& level, double mu) {
  if (mu <= 0.0) throw std::domain_error("local_time_laplace: mu <= 0");
  if (level.side == LevelSpec::Side::above_zero) {
    const double b = level.offset;
    if (b <= 0.0 || b >= 1.0) {
      throw std::domain_error("local_time_laplace: level must be in (0,1)");
    }
    return std::exp(-mu) / mu * -std::expm1(-2.0 * mu * (1.0 - b));
  }
  const double x = level.offset;
  if (x < 0.0) {
    throw std::domain_error("local_time_laplace: depth must be >= 0");
  }
  return std::exp(-mu * (1.0 + 2.0 * x)) / mu * -std::expm1(-2.0 * mu);
}

double i_mu_monomial(MomentSide side, double order, double mu) {
  if (order < 0.0) throw std::domain_error("i_mu_monomial: order < 0");
  if (mu <= 0.0) throw std::domain_error("i_mu_monomial: mu <= 0");
  const double pref = std::exp(-mu) / mu;
  if (pref == 0.0) return 0.0;
  if (side == MomentSide::plus) {
    auto f = [order, mu](double b) {
      return std::pow(b, order) * -std::expm1(-2.0 * mu * (1.0 - b));
    };
    return pref *
           quad::integrate_value(f, quad::Finite{0.0, 1.0}, tight_spec());
  }
  // Substituting s = 2 mu x gives a unit decay scale for every mu.
  auto f = [order](double s) { return std::pow(s, order) * std::exp(-s); };
  const double jac = std::pow(2.0 * mu, -(order + 1.0));
  return pref * -std::expm1(-2.0 * mu) * jac *
         quad::integrate_value(f, quad::SemiInfinite{0.0}, tight_spec());
}

double max_conditional_crossing(double s, double b) {
  if (s <= 0.0) throw std::domain_error("max_conditional_crossing: s <= 0");
  const double gap = 1.0 - b;
  if (gap <= 0.0) return 0.0;
  return -std::expm1(-2.0 * gap / s);
}

double inverse_gaussian_integral(double y, double mu) {
  if (mu <= 0.0) throw std::domain_error("inverse_gaussian_integral: mu <= 0");
  return std::exp(-mu * std::abs(y)) / mu;
}

double lab_integral(double a, double b, double order) {
  if (a <= 0.0 || b <= 0.0) {
    throw std::domain_error("lab_integral: bounds must be positive");
  }
  if (order < 0.0) throw std::domain_error("lab_integral: order < 0");
  return std::log(b / a);
}

double dilog(double x) {
  if (std::abs(x) > 1.0) throw std::domain_error("dilog: |x| > 1");
  if (x == 1.0) return kPi * kPi / 6.0;
  if (x > 0.5) {
    // Euler reflection into the series region.
    return kPi * kPi / 6.0 - std::log(x) * std::log1p(-x) - dilog(1.0 - x);
  }
  if (x < -0.5) {
    // Landen transform; x/(x-1) lies in (0, 1/2] for x in [-1, -1/2).
    const double l = std::log1p(-x);
    return -dilog(x / (x - 1.0)) - 0.5 * l * l;
  }
  double sum = 0.0;
  double power = x;
  for (int n = 1; n <= 72; ++n) {
    sum += power / (static_cast<double>(n) * n);
    power *= x;
    if (std::abs(power) < 1e-18) break;
  }
  return sum;
}

double delta_fn(double c) {
  if (c < 1.0) throw std::domain_error("delta_fn: argument < 1");
  const double lc = std::log(c);
  return c * lc - c - lc * std::log1p(c) + kPi * kPi / 6.0 + 0.5 * lc * lc +
         dilog(-1.0 / c);
}

double bessel_exp_moment(double a) {
  if (a <= 0.0) throw std::domain_error("bessel_exp_moment: a <= 0");
  const double one_plus = 1.0 + a;
  return std::numbers::sqrt2 / (std::tgamma(1.5) * one_plus * one_plus);
}

double ray_knight_mean(double b, double mu) {
  if (b < 0.0) throw std::domain_error("ray_knight_mean: b < 0");
  if (mu <= 0.0) throw std::domain_error("ray_knight_mean: mu <= 0");
  return -std::expm1(-2.0 * mu * b) / mu;
}

double meander_conditional_kernel(double y, double z) {
  if (y <= 0.0) throw std::domain_error("meander_conditional_kernel: y <= 0");
  if (z < 0.0) throw std::domain_error("meander_conditional_kernel: z < 0");
  return alpha_density_conditional(y - z, 1.0 / (y * y));
}

}  // namespace uhit::cf
