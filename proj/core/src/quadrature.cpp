#include "uhit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace uhit::quad {

namespace {

// Kronrod-15 abscissae on [0,1] (positive half); even indices interleave the
// Gauss-7 points, which sit at the odd indices. Weights from the QUADPACK
// dqk15 tables.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0000000000000000};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct PanelWorse {
  bool operator()(const Panel& a, const Panel& b) const {
    return a.error < b.error;
  }
};

Panel evaluate_panel(const std::function<double(double)>& f, double lo,
                     double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double abs_half = std::abs(half);

  const double fc = f(center);
  double result_gauss = kWg[3] * fc;
  double result_kronrod = kWgk[7] * fc;
  double result_abs = std::abs(result_kronrod);

  double fv1[7];
  double fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double sum = fv1[j] + fv2[j];
    result_kronrod += kWgk[j] * sum;
    result_abs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) {
      result_gauss += kWg[j / 2] * sum;
    }
  }

  const double mean = 0.5 * result_kronrod;
  double result_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    result_asc +=
        kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  }

  Panel panel;
  panel.lo = lo;
  panel.hi = hi;
  panel.value = result_kronrod * half;
  result_abs *= abs_half;
  result_asc *= abs_half;

  double err = std::abs((result_kronrod - result_gauss) * half);
  if (result_asc != 0.0 && err != 0.0) {
    err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double tiny = std::numeric_limits<double>::min();
  if (result_abs > tiny / (50.0 * eps)) {
    err = std::max(eps * 50.0 * result_abs, err);
  }
  panel.error = err;
  return panel;
}

double tolerance_for(const QuadratureSpec& spec, double value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

IntegrationResult integrate_finite(const std::function<double(double)>& f,
                                   double lo, double hi,
                                   const QuadratureSpec& spec) {
  IntegrationResult out;
  if (lo == hi) {
    out.converged = true;
    return out;
  }

  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
  heap.push(evaluate_panel(f, lo, hi));
  double total_value = heap.top().value;
  double total_error = heap.top().error;
  int subdivisions = 0;
  // Panels too narrow to bisect in double precision; their error estimate is
  // kept but they no longer compete for refinement.
  std::vector<Panel> frozen;

  // Negated form so a non-finite running error keeps refining instead of
  // silently exiting.
  while (!(total_error <= tolerance_for(spec, total_value)) &&
         subdivisions < spec.max_subdivisions && !heap.empty()) {
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      frozen.push_back(worst);
      continue;
    }
    const Panel left = evaluate_panel(f, worst.lo, mid);
    const Panel right = evaluate_panel(f, mid, worst.hi);
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }

  // Recompute the totals with a compensated sum over the final partition,
  // in spatial order, so the result does not depend on heap internals.
  std::vector<Panel> panels;
  panels.reserve(heap.size() + frozen.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  panels.insert(panels.end(), frozen.begin(), frozen.end());
  std::sort(panels.begin(), panels.end(),
            [](const Panel& a, const Panel& b) { return a.lo < b.lo; });
  double sum = 0.0;
  double comp = 0.0;
  double err = 0.0;
  for (const Panel& p : panels) {
    const double y = p.value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    err += p.error;
  }

  out.value = sum;
  out.error = err;
  out.subdivisions = subdivisions;
  out.converged = err <= tolerance_for(spec, sum);
  return out;
}

}  // namespace

IntegrationResult integrate(const std::function<double(double)>& f,
                            const Domain& domain, const QuadratureSpec& spec) {
  if (const auto* fin = std::get_if<Finite>(&domain)) {
    if (fin->hi < fin->lo) {
      const IntegrationResult swapped =
          integrate_finite(f, fin->hi, fin->lo, spec);
      IntegrationResult out = swapped;
      out.value = -swapped.value;
      return out;
    }
    return integrate_finite(f, fin->lo, fin->hi, spec);
  }

  const auto& semi = std::get<SemiInfinite>(domain);
  const double lo = semi.lo;
  const double scale = spec.tail_scale;
  if (!(scale > 0.0)) {
    throw QuadratureError("tail_scale must be positive");
  }
  if (spec.tail_transform == QuadratureSpec::TailTransform::exp_map) {
    // x = lo - s log(1 - t), dx = s dt / (1 - t).  log1p keeps x > lo for
    // every t > 0, so an integrand singular at lo is never hit exactly.
    // The open rule never places a node at t = 1, but a panel edge can round
    // onto it; treat that measure-zero point as 0 instead of inf * 0.
    auto g = [&f, lo, scale](double t) {
      if (t >= 1.0) return 0.0;
      const double onemt = 1.0 - t;
      return scale * f(lo - scale * std::log1p(-t)) / onemt;
    };
    return integrate_finite(g, 0.0, 1.0, spec);
  }
  // x = lo + s t / (1 - t), dx = s dt / (1 - t)^2
  auto g = [&f, lo, scale](double t) {
    if (t >= 1.0) return 0.0;
    const double onemt = 1.0 - t;
    return scale * f(lo + scale * t / onemt) / (onemt * onemt);
  };
  return integrate_finite(g, 0.0, 1.0, spec);
}

double integrate_value(const std::function<double(double)>& f,
                       const Domain& domain, const QuadratureSpec& spec) {
  const IntegrationResult r = integrate(f, domain, spec);
  if (!r.converged) {
    throw QuadratureError("quadrature did not converge: error estimate " +
                          std::to_string(r.error) + " after " +
                          std::to_string(r.subdivisions) + " subdivisions");
  }
  return r.value;
}

}  // namespace uhit::quad
