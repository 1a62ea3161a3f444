#pragma once

// Closed-form quantities for the rescaled position of a Brownian path at a
// uniform time before it first reaches level 1: alpha = B(U*T1)/sqrt(T1).
// Everything here is deterministic; the Monte Carlo side lives in paths/verify.

namespace uhit::cf {

// log(3), which shows up throughout the alpha formulas.
inline constexpr double log3 = 1.0986122886681098;

// E|N|^m for a standard Gaussian N: Gamma(1+m) / (2^(m/2) Gamma(1+m/2)).
// Evaluated through lgamma so large orders (m ~ 100) do not overflow.
// Requires m >= 0.
double gauss_abs_moment(double order);

// phi(m) = int_0^2 y^(m+1)/(1+y) dy and its first two derivatives in m
// (log-weighted integrands). Requires m > -2; the integrand is singular but
// integrable at 0 for m in (-2,-1].
double phi(double order);
double phi_prime(double order);
double phi_second(double order);

// Signed-moment split of alpha: E[(alpha^+)^m] - E[(alpha^-)^m] decomposes as
// moment_i(m) = moment_i_plus(m) - moment_i_minus(m) with
//   moment_i_plus(m)  = c_m phi(m) / 2^(m+1),
//   moment_i_minus(m) = c_m log(3) / 2^(m+1).
// moment_i(1) vanishes (alpha is centered). Requires m >= 0.
double moment_i_plus(double order);
double moment_i_minus(double order);
double moment_i(double order);

// Density of alpha.
//   y >= 0: sqrt(2/pi) int_0^2 exp(-2y^2/w^2)/(1+w) dw
//   y <= 0: sqrt(2/pi) log(3) exp(-2y^2)
// The two branches agree at 0. Support of the positive part is all of
// [0, infinity); mass of the negative part is log(3)/2.
double alpha_density(double y);

// Distribution function of alpha: integral of alpha_density. The y <= 0 part
// is log(3) * Phi(2y) in closed form; the rest is a single quadrature.
double alpha_cdf(double y);

// Conditional density of alpha given T1 = t. Supported on (-inf, 1/sqrt(t)].
//   0 <= y sqrt(t) <= 1: sqrt(t) (1 - exp(-2(1-u)(2-u)/t)),   u = y sqrt(t)
//   y <= 0:              sqrt(t) exp(-2v(v+1)/t)(1 - exp(-4(1+v)/t)),
//                        v = -y sqrt(t)
// Differences of exponentials go through expm1 on the ratio, so the huge
// exp(1/(2t)) prefactor of the textbook form never materializes and the
// function stays finite for arbitrarily small t. Returns 0 above the support.
// Requires t > 0.
double alpha_density_conditional(double y, double t);

// Distribution function of alpha given T1 = t, in closed form via scaled
// complementary error functions. Exact 1 at and above the support endpoint.
double alpha_conditional_cdf(double y, double t);

// Density of the hitting time T1 of level 1: exp(-1/(2t))/sqrt(2 pi t^3) for
// t > 0, else 0.
double hitting_time_density(double t);

// Local-time level for the Laplace-transform formulas: either a level
// b in (0,1) strictly between start and barrier, or a level -x at or below
// the start (x >= 0).
struct LevelSpec {
  enum class Side { above_zero, below_zero };
  Side side;
  double offset;  // b when above_zero, x when below_zero

  static LevelSpec above(double b) { return {Side::above_zero, b}; }
  static LevelSpec below(double x) { return {Side::below_zero, x}; }
};

// E[ L(level, T1) exp(-mu^2 T1 / 2) ], the joint local-time / hitting-time
// Laplace transform:
//   level b in (0,1):  (exp(-mu) - exp(-mu(3-2b))) / mu
//   level -x, x >= 0:  (exp(-mu(1+2x)) - exp(-mu(3+2x))) / mu
// Requires mu > 0. As mu -> 0+ the first form tends to 2(1-b), the mean
// local time at b before T1.
double local_time_laplace(const LevelSpec& level, double mu);

enum class MomentSide { plus, minus };

// The intermediate mu-measure applied to a monomial: with psi(x) = (x^+-)^m,
//   plus:  (1/mu) int_0^1 b^m (exp(-mu) - exp(-mu(3-2b))) db
//   minus: (1/mu) int_0^infinity x^m (exp(-mu(1+2x)) - exp(-mu(3+2x))) dx
// Integrating mu^(1+m) times this over mu in (0,infinity) and dividing by
// 2^(m/2) Gamma(1+m/2) reproduces moment_i_plus / moment_i_minus, which the
// tests exercise as a cross-check. Requires m >= 0, mu > 0.
double i_mu_monomial(MomentSide side, double order, double mu);

// P[ sup over [0,s] stays below 1 | B_s = b ] = 1 - exp(-2 (1-b)^+ / s).
// Returns 0 when b >= 1. Requires s > 0.
double max_conditional_crossing(double s, double b);

// int_0^infinity (2 pi s)^(-1/2) exp(-y^2/(2s) - mu^2 s/2) ds
// = exp(-mu |y|) / mu, the first moment of an inverse Gaussian. Returned in
// closed form; the tests confirm it against quadrature of the integral.
// Requires mu > 0.
double inverse_gaussian_integral(double y, double mu);

// int_0^infinity y^m ( (a+y)^-(m+1) - (b+y)^-(m+1) ) dy = log(b/a),
// independent of m. Returned in closed form; tests verify the integral.
// Requires a, b > 0 and m >= 0.
double lab_integral(double a, double b, double order);

// Dilogarithm Li2(x) = sum x^n / n^2 for |x| <= 1. Direct series on
// [-1/2, 1/2]; the Landen transform maps [-1, -1/2) into series range and
// the Euler reflection handles (1/2, 1]. Absolute accuracy well below 1e-12
// across [-1, 0].
double dilog(double x);

// delta_fn(C) = C log C - C - log C log(C+1) + pi^2/6 + (log C)^2/2
//             + Li2(-1/C), for C >= 1.
// delta_fn(1) = pi^2/12 - 1 and delta_fn(2) equals phi_prime(0), which the
// tests check as a cross-module identity.
double delta_fn(double c);

// E[ R1 exp(-a R1^2 / 2) ] for R1 the norm of a standard 3-D Gaussian:
// sqrt(2) / (Gamma(3/2) (1+a)^2). Requires a > 0.
double bessel_exp_moment(double a);

// Mean local-time profile at distance b below the barrier for the drifted
// hitting problem: (1 - exp(-2 mu b)) / mu. Requires b >= 0, mu > 0.
double ray_knight_mean(double b, double mu);

// Density in z of the meander value at a uniform time, given the meander
// ends at y: the conditional alpha density evaluated at (y - z, 1/y^2).
// Vanishes at z = 0 and decays like a Gaussian for z > y. Requires y > 0,
// z >= 0.
double meander_conditional_kernel(double y, double z);

}  // namespace uhit::cf
