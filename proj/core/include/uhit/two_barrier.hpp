#pragma once

// Exit-time functionals for a Brownian path leaving the interval (-b, a):
// the delta-resolvent E_delta of the time-discounted area, and the scaled
// area expectations psi obtained by integrating it against powers of delta.

#include <stdexcept>

#include "uhit/quadrature.hpp"

namespace uhit::tb {

// Barrier pair and time exponent. The law of the scaled area functional
// depends on (a, b) only through lambda = b/a.
struct TwoBarrier {
  double a;      // upper barrier, > 0
  double b;      // lower barrier depth, > 0
  double theta;  // time exponent, > 0

  double lambda() const { return b / a; }
};

// Thrown when the two independent representations of psi disagree beyond
// their combined quadrature tolerance.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ab + b^2 (p - 1 - (p - 2) cosh(delta (a + b))). At p = 2 the cosh term
// drops out; as delta -> 0 the value tends to ab + b^2 for every p.
// Requires a, b, delta > 0 and p > -1.
double phi_delta(double a, double b, double p, double delta);

// The delta-resolvent of the discounted area:
//   E_delta = (b sh(da) - a sh(db)) / (2 d^2 sh(dc))
//           + (a^2 sh(db) - b^2 sh(da)) / (2 d (1 + ch(dc))),   c = a + b,
// written with the second term's (ch-1)/sh^2 collapsed to 1/(1+ch).
// Three evaluation branches keep it stable on all of [0, infinity):
// a Taylor series below delta*c = 1e-2 (cancellation there is quartic),
// direct hyperbolics up to delta*c = 30, and factored exponentials beyond
// (sinh overflows near 710/c). Antisymmetric in (a, b) exactly, bit for bit.
// Requires a, b > 0 and delta >= 0.
double e_delta(double delta, double a, double b);

// One psi evaluation together with the internal cross-check state.
struct PsiEval {
  double value = 0.0;      // first representation
  double error = 0.0;      // quadrature error bound on value
  bool has_alt = false;    // second representation evaluated (theta != 1)
  double alt_value = 0.0;  // second representation, when evaluated
};

// psi(a, b, theta) = sqrt(2)/(sqrt(pi) m_p) int_0^inf delta^p E_delta ddelta
// with p = 2 theta - 1 and m_p the absolute Gaussian moment of order p:
// the expectation of the exit-time-normalized area T^(-theta) int_0^T B.
// The tail is split at a computed delta* whose remaining mass is provably
// below a tenth of the absolute tolerance. For theta != 1 an independent
// second representation (the phi_delta form) is evaluated as well and a
// disagreement beyond the combined tolerance throws ConsistencyError.
// psi returns the first representation; psi_detail exposes both.
PsiEval psi_detail(const TwoBarrier& tb,
                   const quad::QuadratureSpec& spec = {});
double psi(const TwoBarrier& tb, const quad::QuadratureSpec& spec = {});

// The theta = 3/2 case in its scale-free form: with lambda = b/a,
//   (1+lambda)/sqrt(2 pi) int_0^inf delta (lambda sh(delta) -
//       sh(delta lambda)) / sh(delta (1+lambda))^2 ddelta.
// Vanishes identically at lambda = 1; depends on (a, b) only through
// lambda. Requires a, b > 0.
double psi_three_half(double a, double b);

}  // namespace uhit::tb
