#pragma once

#include <functional>
#include <stdexcept>
#include <variant>

namespace uhit::quad {

/// Tolerances and improper-domain handling for the adaptive integrator.
///
/// On success the returned error estimate satisfies
/// error <= max(abs_tol, rel_tol * |value|).
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 512;

  /// How a semi-infinite domain [lo, inf) is mapped onto (0, 1).
  /// exp_map substitutes x = lo - s*log(1 - t) and suits integrands with
  /// (at least) exponential decay; algebraic_map substitutes x = lo + s*t/(1-t)
  /// and suits integrands with polynomial decay of order > 1.
  enum class TailTransform { exp_map, algebraic_map };
  TailTransform tail_transform = TailTransform::exp_map;

  /// Length scale s of the maps above. Under exp_map the reachable part of
  /// the domain ends near lo + 745*s (and resolution fades past lo + 37*s),
  /// so s should be of the order of the integrand's decay length: for
  /// exp(-k*x) tails use s ~ 1/k. Must be positive.
  double tail_scale = 1.0;
};

struct Finite {
  double lo;
  double hi;
};

/// The interval [lo, +infinity).
struct SemiInfinite {
  double lo;
};

using Domain = std::variant<Finite, SemiInfinite>;

/// Outcome of one integration. When the subdivision budget runs out before
/// the tolerance is met, converged is false and value/error carry the best
/// estimate reached, so callers can still inspect how far the run got.
struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  int subdivisions = 0;
};

/// Globally adaptive quadrature on a Gauss(7)/Kronrod(15) pair.
///
/// The worst interval (largest error estimate) is bisected until the summed
/// error estimate meets the tolerance or max_subdivisions is reached.
/// Endpoints are never evaluated, so integrable endpoint singularities
/// (inverse square roots, logarithms) are handled by subdivision alone.
/// Deterministic: identical inputs give identical results.
///
/// The integrand must be re-entrant; integrate itself is pure and
/// safe to call concurrently from any number of threads.
IntegrationResult integrate(const std::function<double(double)>& f,
                            const Domain& domain,
                            const QuadratureSpec& spec = {});

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// As integrate(), but throws QuadratureError instead of returning a
/// non-converged result.
double integrate_value(const std::function<double(double)>& f,
                       const Domain& domain,
                       const QuadratureSpec& spec = {});

}  // namespace uhit::quad
