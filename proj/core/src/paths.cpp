#include "uhit/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace uhit::paths {
namespace {

double pow_order(double x, double m) {
  if (m == 1.0) return x;
  if (m == 2.0) return x * x;
  if (m == 3.0) return x * x * x;
  if (m == 0.5) return std::sqrt(x);
  return std::pow(x, m);
}

// One-sided powers. Exact-zero grid values count to the positive side for
// the order-0 indicator, so the two order-0 trapezoids of any step sum to
// exactly the step length.
double side_plus(double x, double m) {
  if (m == 0.0) return x >= 0.0 ? 1.0 : 0.0;
  return x > 0.0 ? pow_order(x, m) : 0.0;
}

double side_minus(double x, double m) {
  if (m == 0.0) return x < 0.0 ? 1.0 : 0.0;
  return x < 0.0 ? pow_order(-x, m) : 0.0;
}

void check_common(const PathConfig& cfg) {
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step))
    throw std::invalid_argument("paths: step must be positive and finite");
  if (cfg.local_time_bandwidth < 0.0)
    throw std::invalid_argument("paths: bandwidth must be nonnegative");
  for (double m : cfg.moment_orders)
    if (!(m >= 0.0))
      throw std::invalid_argument("paths: moment orders must be >= 0");
}

double bandwidth_of(const PathConfig& cfg) {
  return cfg.local_time_bandwidth > 0.0 ? cfg.local_time_bandwidth
                                        : std::pow(cfg.step, 0.4);
}

double max_time_of(const PathConfig& cfg) {
  if (cfg.max_time > 0.0) return cfg.max_time;
  return cfg.coarsen_far_field ? 1e8 : 1e7 * cfg.step;
}

// Streaming accumulator shared by every scheme: trapezoidal one-sided
// power integrals, occupation windows, reservoir, and extreme records via
// exact per-step bridge draws guarded by a deterministic reach bound
// (-2 h log U <= 75 h for U >= 2^-53, so a candidate that cannot beat the
// running record even at the bound consumes no randomness).
struct Accumulator {
  const PathConfig& cfg;
  rng::Philox& gen;
  double eps;

  std::vector<double> plus, minus;
  std::vector<double> occ;
  int idx0 = -1;
  double t = 0.0;
  double sup_v = 0.0, inf_v = 0.0;
  double res_value = 0.0;
  std::uint64_t steps = 0;

  Accumulator(const PathConfig& c, rng::Philox& g)
      : cfg(c), gen(g), eps(bandwidth_of(c)) {
    plus.assign(cfg.moment_orders.size(), 0.0);
    minus.assign(cfg.moment_orders.size(), 0.0);
    occ.assign(cfg.local_time_levels.size(), 0.0);
    for (std::size_t i = 0; i < cfg.moment_orders.size(); ++i)
      if (cfg.moment_orders[i] == 0.0) idx0 = static_cast<int>(i);
  }

  void powers(double x0, double x1, double he) {
    const auto& ms = cfg.moment_orders;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      double m = ms[i];
      plus[i] += 0.5 * he * (side_plus(x0, m) + side_plus(x1, m));
      minus[i] += 0.5 * he * (side_minus(x0, m) + side_minus(x1, m));
    }
    const auto& lv = cfg.local_time_levels;
    for (std::size_t j = 0; j < lv.size(); ++j) {
      double in0 = std::fabs(x0 - lv[j]) <= eps ? 1.0 : 0.0;
      double in1 = std::fabs(x1 - lv[j]) <= eps ? 1.0 : 0.0;
      occ[j] += 0.5 * he * (in0 + in1);
    }
  }

  void extreme_max_only(double x0, double x1, double he) {
    double dx = x1 - x0, s = x0 + x1;
    if (0.5 * (s + std::sqrt(dx * dx + 75.0 * he)) > sup_v) {
      double u = gen.uniform_pos();
      double mx = 0.5 * (s + std::sqrt(dx * dx - 2.0 * he * std::log(u)));
      if (mx > sup_v) sup_v = mx;
    }
  }

  void extreme_min_only(double x0, double x1, double he) {
    double dx = x1 - x0, s = x0 + x1;
    if (0.5 * (s - std::sqrt(dx * dx + 75.0 * he)) < inf_v) {
      double u = gen.uniform_pos();
      double mn = 0.5 * (s - std::sqrt(dx * dx - 2.0 * he * std::log(u)));
      if (mn < inf_v) inf_v = mn;
    }
  }

  void extremes(double x0, double x1, double he) {
    extreme_max_only(x0, x1, he);
    extreme_min_only(x0, x1, he);
  }

  // Weighted reservoir over elapsed time; on acceptance the sample is the
  // bridge value at a uniformly jittered time inside the step. `folded`
  // treats (x0, x1) as absolute values of a reflected path: the bridge
  // endpoint sign is chosen by the reflection mixture weight, the value is
  // folded, and an independent excursion sign is attached.
  void reservoir(double x0, double x1, double he, bool folded) {
    double tn = t + he;
    if (gen.uniform() * tn >= he) return;
    double uu = gen.uniform_pos();
    double sd = std::sqrt(he * uu * (1.0 - uu));
    if (!folded) {
      double mu = x0 + (x1 - x0) * uu;
      res_value = mu + sd * gen.normal();
    } else {
      double q = 1.0 / (1.0 + std::exp(-2.0 * x0 * x1 / he));
      double end = gen.uniform() < q ? x1 : -x1;
      double mu = x0 + (end - x0) * uu;
      double v = std::fabs(mu + sd * gen.normal());
      res_value = gen.uniform() < 0.5 ? v : -v;
    }
  }

  void finish(PathFunctionals& out) const {
    out.hit_time = idx0 >= 0 ? plus[idx0] + minus[idx0] : t;
    out.plus_integrals = plus;
    out.minus_integrals = minus;
    out.sup = sup_v;
    out.inf = inf_v;
    out.sup_abs = std::max(sup_v, -inf_v);
    out.uniform_sample = res_value;
    out.local_times.assign(occ.size(), 0.0);
    for (std::size_t j = 0; j < occ.size(); ++j)
      out.local_times[j] = occ[j] / (2.0 * eps);
    out.steps = steps;
  }
};

// Crossing probability of an upper level within one step, conditional on
// the endpoints; the positive-part clamps make it 1 once the endpoint is
// at or beyond the level.
double cross_prob_up(double x0, double x1, double he, double level) {
  double g0 = level - x0, g1 = level - x1;
  if (g1 <= 0.0) return 1.0;
  if (g0 <= 0.0) return 1.0;
  double ex = -2.0 * g0 * g1 / he;
  return ex <= -40.0 ? 0.0 : std::exp(ex);
}

double cross_prob_down(double x0, double x1, double he, double level) {
  double g0 = x0 - level, g1 = x1 - level;
  if (g1 <= 0.0) return 1.0;
  if (g0 <= 0.0) return 1.0;
  double ex = -2.0 * g0 * g1 / he;
  return ex <= -40.0 ? 0.0 : std::exp(ex);
}

enum class LinearMode { kSingle, kDouble, kReflected, kHorizon };

struct LinearParams {
  LinearMode mode;
  double upper = 0.0;
  double lower = 0.0;
  double horizon = 0.0;
  double stop_level = 0.0;
};

PathFunctionals run_linear(const PathConfig& cfg, rng::Philox& gen,
                           const LinearParams& p) {
  Accumulator acc(cfg, gen);
  const double h = cfg.step;
  const double max_time = max_time_of(cfg);
  const double eps = acc.eps;

  // Orders 1, 2, 3 have conditionally unbiased trapezoids at any step
  // size, so the origin constrains the step only when an indicator-type
  // or fractional order (or an occupation window) needs resolution there.
  bool zero_critical = p.mode == LinearMode::kReflected;
  for (double m : cfg.moment_orders)
    if (m != 1.0 && m != 2.0 && m != 3.0) zero_critical = true;

  PathFunctionals out;
  double x = 0.0;
  double occ0 = 0.0;      // reflected: occupation of the stopping window
  double int_lhat = 0.0;  // reflected: running integral of the estimate
  bool exited_top = false;

  auto step_of = [&](double xx) {
    if (!cfg.coarsen_far_field) return h;
    double d = std::numeric_limits<double>::infinity();
    switch (p.mode) {
      case LinearMode::kSingle:
        d = std::fabs(p.upper - xx);
        break;
      case LinearMode::kDouble:
        d = std::min(std::fabs(p.upper - xx), std::fabs(xx - p.lower));
        break;
      case LinearMode::kReflected:
      case LinearMode::kHorizon:
        break;
    }
    if (zero_critical) d = std::min(d, std::fabs(xx));
    for (double lv : cfg.local_time_levels)
      d = std::min(d, std::max(0.0, std::fabs(xx - lv) - 2.0 * eps));
    double cap = (d / 6.0) * (d / 6.0);
    if (cap > 1e5) cap = 1e5;
    if (!(cap > h)) return h;
    int k = std::ilogb(cap / h);
    return std::ldexp(h, k);
  };

  while (true) {
    if (p.mode != LinearMode::kHorizon && acc.t >= max_time) {
      out.aborted = true;
      out.terminal_value = x;
      break;
    }
    double he = step_of(x);
    if (p.mode == LinearMode::kHorizon) {
      double rem = p.horizon - acc.t;
      if (rem <= he) he = rem;
      if (!(he > 0.0)) {
        out.terminal_value = x;
        break;
      }
    }
    ++acc.steps;
    double z = gen.normal();
    double x1 = x + std::sqrt(he) * z;
    if (p.mode == LinearMode::kReflected) x1 = std::fabs(x1);

    if (p.mode == LinearMode::kSingle || p.mode == LinearMode::kDouble) {
      double pu = cross_prob_up(x, x1, he, p.upper);
      bool cu = pu >= 1.0;
      if (!cu && cfg.bridge_correction && pu > 1e-18)
        cu = gen.uniform() < pu;
      bool cl = false;
      double pl = 0.0;
      if (p.mode == LinearMode::kDouble) {
        pl = cross_prob_down(x, x1, he, p.lower);
        cl = pl >= 1.0;
        if (!cl && cfg.bridge_correction && pl > 1e-18)
          cl = gen.uniform() < pl;
      }
      if (cu && cl) {
        if (pu >= pl) cl = false;
        else cu = false;
      }
      if (cu || cl) {
        double level = cu ? p.upper : p.lower;
        exited_top = cu;
        if (cfg.bridge_correction) {
          // Hit placed at the step midpoint; the final partial step runs
          // from the last grid value to the barrier, and the touched
          // barrier is itself the extreme record on that side.
          double half = 0.5 * he;
          acc.powers(x, level, half);
          if (cu)
            acc.extreme_min_only(x, level, half);
          else
            acc.extreme_max_only(x, level, half);
          acc.reservoir(x, level, half, false);
          acc.t += half;
        } else {
          acc.powers(x, x1, he);
          acc.extremes(x, x1, he);
          acc.reservoir(x, x1, he, false);
          acc.t += he;
          level = x1;
        }
        out.terminal_value = level;
        if (cu)
          acc.sup_v = std::max(acc.sup_v, out.terminal_value);
        else
          acc.inf_v = std::min(acc.inf_v, out.terminal_value);
        break;
      }
    }

    if (p.mode == LinearMode::kReflected) {
      double in0 = x <= eps ? 1.0 : 0.0;
      double in1 = x1 <= eps ? 1.0 : 0.0;
      double delta = 0.5 * he * (in0 + in1);
      double target = 2.0 * eps * p.stop_level;
      double lhat_before = occ0 / (2.0 * eps);
      if (occ0 + delta >= target && delta > 0.0) {
        double f = (target - occ0) / delta;
        double hp = f * he;
        double xh = x + f * (x1 - x);
        acc.powers(x, xh, hp);
        acc.reservoir(x, xh, hp, true);
        acc.sup_v = std::max(acc.sup_v, std::max(x, xh));
        int_lhat += 0.5 * hp * (lhat_before + p.stop_level);
        occ0 = target;
        acc.t += hp;
        out.terminal_value = xh;
        break;
      }
      occ0 += delta;
      int_lhat += 0.5 * he * (lhat_before + occ0 / (2.0 * eps));
      acc.powers(x, x1, he);
      // Reflected values are nonnegative: the record is the folded
      // supremum, tracked by the same-sign bridge-max draw (the opposite
      // sign branch only matters next to zero where the record is never
      // contested), and the infimum stays at zero.
      acc.extreme_max_only(x, x1, he);
      acc.reservoir(x, x1, he, true);
      acc.t += he;
      x = x1;
      continue;
    }

    acc.powers(x, x1, he);
    acc.extremes(x, x1, he);
    acc.reservoir(x, x1, he, false);
    acc.t += he;
    x = x1;

    if (p.mode == LinearMode::kHorizon && acc.t >= p.horizon) {
      out.terminal_value = x;
      break;
    }
  }

  acc.finish(out);
  if (p.mode == LinearMode::kDouble)
    out.aux["exit_top"] = exited_top ? 1.0 : 0.0;
  if (p.mode == LinearMode::kReflected) out.aux["int_l"] = int_lhat;
  return out;
}

// Norm of a 3-D Brownian motion on [0,1]; extremes use the radial values
// through the same bridge-draw machinery (exact for the flat bridge,
// O(step) near the origin where the record is never contested).
PathFunctionals run_bessel3(const PathConfig& cfg, rng::Philox& gen) {
  Accumulator acc(cfg, gen);
  long n = std::lround(1.0 / cfg.step);
  if (n < 2) n = 2;
  const double h = 1.0 / static_cast<double>(n);
  double y1 = 0.0, y2 = 0.0, y3 = 0.0, r = 0.0;
  const double sh = std::sqrt(h);
  for (long i = 0; i < n; ++i) {
    ++acc.steps;
    y1 += sh * gen.normal();
    y2 += sh * gen.normal();
    y3 += sh * gen.normal();
    double r1 = std::sqrt(y1 * y1 + y2 * y2 + y3 * y3);
    acc.powers(r, r1, h);
    acc.extremes(r, r1, h);
    acc.reservoir(r, r1, h, false);
    acc.t += h;
    r = r1;
  }
  acc.t = 1.0;
  PathFunctionals out;
  out.terminal_value = r;
  acc.finish(out);
  return out;
}

std::vector<double>& scratch_buffer() {
  static thread_local std::vector<double> buf;
  return buf;
}

// Free Brownian path on [0,1] with n steps, stored at the grid.
void fill_free_path(std::vector<double>& w, long n, double h,
                    rng::Philox& gen) {
  w.resize(static_cast<std::size_t>(n) + 1);
  w[0] = 0.0;
  const double sh = std::sqrt(h);
  for (long i = 1; i <= n; ++i)
    w[static_cast<std::size_t>(i)] =
        w[static_cast<std::size_t>(i) - 1] + sh * gen.normal();
}

// Value of the path at a uniformly random time, drawn exactly from the
// bridge between the enclosing grid values. The single uniform provides
// both the cell index and the in-cell jitter.
double grid_uniform_value(const std::vector<double>& w, long n, double h,
                          rng::Philox& gen) {
  double u = gen.uniform();
  double s = u * static_cast<double>(n);
  long j = std::min(static_cast<long>(s), n - 1);
  double uu = s - static_cast<double>(j);
  double x0 = w[static_cast<std::size_t>(j)];
  double x1 = w[static_cast<std::size_t>(j) + 1];
  double mu = x0 + (x1 - x0) * uu;
  double sd = std::sqrt(h * uu * (1.0 - uu));
  return mu + sd * gen.normal();
}

struct BridgeGrid {
  long n = 0;
  double h = 0.0;
  std::size_t argmin = 0;
};

// Brownian bridge values on the grid: w_i - t_i w_n, with t_n exactly 1
// so the terminal value is exactly zero.
BridgeGrid fill_bridge(std::vector<double>& b, const PathConfig& cfg,
                       rng::Philox& gen) {
  long n = std::lround(1.0 / cfg.step);
  if (n < 4) n = 4;
  if (n % 2 != 0) ++n;
  const double h = 1.0 / static_cast<double>(n);
  fill_free_path(b, n, h, gen);
  double wn = b[static_cast<std::size_t>(n)];
  std::size_t amin = 0;
  for (long i = 0; i <= n; ++i) {
    double ti = static_cast<double>(i) / static_cast<double>(n);
    auto k = static_cast<std::size_t>(i);
    b[k] -= ti * wn;
    if (b[k] < b[amin]) amin = k;
  }
  return {n, h, amin};
}

PathFunctionals run_bridge(const PathConfig& cfg, rng::Philox& gen) {
  auto& b = scratch_buffer();
  BridgeGrid g = fill_bridge(b, cfg, gen);
  Accumulator acc(cfg, gen);

  int lvl0 = -1;
  for (std::size_t j = 0; j < cfg.local_time_levels.size(); ++j)
    if (cfg.local_time_levels[j] == 0.0) {
      lvl0 = static_cast<int>(j);
      break;
    }
  double int_lhat = 0.0;
  double occ_before = 0.0;

  for (long i = 0; i < g.n; ++i) {
    ++acc.steps;
    double x0 = b[static_cast<std::size_t>(i)];
    double x1 = b[static_cast<std::size_t>(i) + 1];
    acc.powers(x0, x1, g.h);
    acc.extremes(x0, x1, g.h);
    acc.t += g.h;
    if (lvl0 >= 0) {
      double occ_after = acc.occ[static_cast<std::size_t>(lvl0)];
      int_lhat += 0.5 * g.h * (occ_before + occ_after) / (2.0 * acc.eps);
      occ_before = occ_after;
    }
  }
  acc.t = 1.0;

  PathFunctionals out;
  out.terminal_value = b[static_cast<std::size_t>(g.n)];
  acc.finish(out);
  out.uniform_sample = grid_uniform_value(b, g.n, g.h, gen);
  out.aux["argmin_time"] =
      static_cast<double>(g.argmin) / static_cast<double>(g.n);
  if (lvl0 >= 0) out.aux["int_l"] = int_lhat;
  return out;
}

// Meander read off a free path: g is the last grid sign change refined by
// one bridge bisection, the tail is rescaled by 1/sqrt(1-g).
PathFunctionals run_meander(const PathConfig& cfg, rng::Philox& gen) {
  auto& w = scratch_buffer();
  long n = std::lround(1.0 / cfg.step);
  if (n < 4) n = 4;
  const double h = 1.0 / static_cast<double>(n);
  fill_free_path(w, n, h, gen);

  Accumulator acc(cfg, gen);
  for (long i = 0; i < n; ++i) {
    ++acc.steps;
    acc.powers(w[static_cast<std::size_t>(i)],
               w[static_cast<std::size_t>(i) + 1], h);
    acc.extremes(w[static_cast<std::size_t>(i)],
                 w[static_cast<std::size_t>(i) + 1], h);
    acc.t += h;
  }
  acc.t = 1.0;

  auto sign_pos = [](double v) { return v >= 0.0; };
  long jz = -1;
  for (long i = n - 1; i >= 0; --i) {
    if (sign_pos(w[static_cast<std::size_t>(i)]) !=
        sign_pos(w[static_cast<std::size_t>(i) + 1])) {
      jz = i;
      break;
    }
  }
  double g = 0.0;
  if (jz >= 0) {
    double x0 = w[static_cast<std::size_t>(jz)];
    double x1 = w[static_cast<std::size_t>(jz) + 1];
    double mid = 0.5 * (x0 + x1) + std::sqrt(0.25 * h) * gen.normal();
    double tj = static_cast<double>(jz) * h;
    g = sign_pos(mid) != sign_pos(x1) ? tj + 0.75 * h : tj + 0.25 * h;
  }

  double rem = 1.0 - g;
  double scale = 1.0 / std::sqrt(rem);
  long jcell = jz >= 0 ? jz : 0;
  double int_abs = 0.5 * (static_cast<double>(jcell + 1) * h - g) *
                   std::fabs(w[static_cast<std::size_t>(jcell) + 1]);
  for (long i = jcell + 1; i < n; ++i)
    int_abs += 0.5 * h *
               (std::fabs(w[static_cast<std::size_t>(i)]) +
                std::fabs(w[static_cast<std::size_t>(i) + 1]));

  double m1 = std::fabs(w[static_cast<std::size_t>(n)]) * scale;

  double ts = g + gen.uniform() * rem;
  long k = std::min(static_cast<long>(ts / h), n - 1);
  double frac = ts / h - static_cast<double>(k);
  double x0 = w[static_cast<std::size_t>(k)];
  double x1 = w[static_cast<std::size_t>(k) + 1];
  double mu = x0 + (x1 - x0) * frac;
  double sd = std::sqrt(h * frac * (1.0 - frac));
  double m_u = std::fabs(mu + sd * gen.normal()) * scale;

  PathFunctionals out;
  out.terminal_value = m1;
  acc.finish(out);
  out.uniform_sample = m_u;
  out.aux["g"] = g;
  out.aux["m1"] = m1;
  out.aux["m_u"] = m_u;
  out.aux["int_m"] = int_abs * scale / rem;
  return out;
}

// Normalized excursion via the cyclic shift of a bridge at its argmin.
// The grid argmin undershoots the true minimum depth by order sqrt(step),
// so the reference level is refined to the exact bridge minimum drawn in
// the two cells flanking the argmin, which leaves an order-step residual.
// The inverse-value integral excludes the first and last grid cells; a
// coarsened (every other point) variant supports endpoint extrapolation.
PathFunctionals run_excursion(const PathConfig& cfg, rng::Philox& gen) {
  auto& b = scratch_buffer();
  BridgeGrid g = fill_bridge(b, cfg, gen);
  const long n = g.n;
  const double h = g.h;
  const double vmin = b[g.argmin];

  auto cell_min = [&](std::size_t i0, std::size_t i1) {
    double x0 = b[i0], x1 = b[i1];
    double dx = x1 - x0;
    double u = gen.uniform_pos();
    return 0.5 * (x0 + x1 - std::sqrt(dx * dx - 2.0 * h * std::log(u)));
  };
  std::size_t left = g.argmin == 0 ? static_cast<std::size_t>(n) - 1
                                   : g.argmin - 1;
  double mstar = std::min(cell_min(left, left + 1),
                          cell_min(g.argmin, g.argmin + 1));

  static thread_local std::vector<double> e;
  e.resize(static_cast<std::size_t>(n) + 1);
  e[0] = 0.0;
  for (long j = 1; j < n; ++j) {
    std::size_t src = (g.argmin + static_cast<std::size_t>(j)) %
                      static_cast<std::size_t>(n);
    e[static_cast<std::size_t>(j)] = b[src] - mstar;
  }
  e[static_cast<std::size_t>(n)] = 0.0;

  Accumulator acc(cfg, gen);
  double int_e = 0.0, int_inv = 0.0;
  for (long j = 0; j < n; ++j) {
    ++acc.steps;
    double x0 = e[static_cast<std::size_t>(j)];
    double x1 = e[static_cast<std::size_t>(j) + 1];
    acc.powers(x0, x1, h);
    // Excursion values are nonnegative; the infimum is pinned at zero by
    // the endpoints, so only the supremum record is contested.
    acc.extreme_max_only(x0, x1, h);
    acc.t += h;
    int_e += 0.5 * h * (x0 + x1);
    if (j >= 1 && j <= n - 2) int_inv += 0.5 * h * (1.0 / x0 + 1.0 / x1);
  }
  acc.t = 1.0;
  double int_inv_coarse = 0.0;
  for (long k = 1; k + 1 < n / 2; ++k) {
    double x0 = e[static_cast<std::size_t>(2 * k)];
    double x1 = e[static_cast<std::size_t>(2 * k + 2)];
    int_inv_coarse += h * (1.0 / x0 + 1.0 / x1);
  }

  PathFunctionals out;
  out.terminal_value = e[static_cast<std::size_t>(n)];
  acc.finish(out);
  out.uniform_sample = grid_uniform_value(e, n, h, gen);
  out.aux["int_e"] = int_e;
  out.aux["int_inv_e"] = int_inv;
  out.aux["int_inv_e_coarse"] = int_inv_coarse;
  return out;
}

// Euler scheme with fully truncated diffusion coefficient for
// dX = 2 sqrt(X+) dW - 2 mu X db + 2 db, X_0 = 0, on b in [0,1].
// Values at the requested levels land in local_times.
PathFunctionals run_ray_knight(const PathConfig& cfg, rng::Philox& gen,
                               double mu) {
  if (!(mu > 0.0))
    throw std::invalid_argument("paths: drift coefficient must be positive");
  long n = std::lround(1.0 / cfg.step);
  if (n < 2) n = 2;
  const double h = 1.0 / static_cast<double>(n);
  const double sh = std::sqrt(h);

  std::vector<long> marks(cfg.local_time_levels.size());
  for (std::size_t j = 0; j < marks.size(); ++j)
    marks[j] = std::lround(cfg.local_time_levels[j] / h);

  PathFunctionals out;
  out.plus_integrals.assign(cfg.moment_orders.size(), 0.0);
  out.minus_integrals.assign(cfg.moment_orders.size(), 0.0);
  out.local_times.assign(marks.size(), 0.0);

  double x = 0.0;
  double sup_v = 0.0;
  for (long k = 0; k <= n; ++k) {
    for (std::size_t j = 0; j < marks.size(); ++j)
      if (marks[j] == k) out.local_times[j] = x;
    if (k == n) break;
    x += 2.0 * std::sqrt(std::max(x, 0.0)) * sh * gen.normal() -
         2.0 * mu * x * h + 2.0 * h;
    sup_v = std::max(sup_v, x);
    ++out.steps;
  }
  out.hit_time = 1.0;
  out.terminal_value = x;
  out.sup = sup_v;
  out.sup_abs = sup_v;
  return out;
}

}  // namespace

PathFunctionals sample_path(const PathConfig& config, rng::Philox& gen) {
  check_common(config);
  return std::visit(
      [&](const auto& s) -> PathFunctionals {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, SingleBarrier>) {
          if (!(s.a > 0.0))
            throw std::invalid_argument("paths: barrier must be positive");
          LinearParams p{LinearMode::kSingle, s.a, 0.0, 0.0, 0.0};
          return run_linear(config, gen, p);
        } else if constexpr (std::is_same_v<S, TwoBarrierExit>) {
          if (!(s.a > 0.0) || !(s.b > 0.0))
            throw std::invalid_argument("paths: barriers must be positive");
          LinearParams p{LinearMode::kDouble, s.a, -s.b, 0.0, 0.0};
          return run_linear(config, gen, p);
        } else if constexpr (std::is_same_v<S, FixedHorizon>) {
          if (!(s.horizon > 0.0))
            throw std::invalid_argument("paths: horizon must be positive");
          LinearParams p{LinearMode::kHorizon, 0.0, 0.0, s.horizon, 0.0};
          return run_linear(config, gen, p);
        } else if constexpr (std::is_same_v<S, InverseLocalTime>) {
          if (!(s.level > 0.0))
            throw std::invalid_argument("paths: level must be positive");
          LinearParams p{LinearMode::kReflected, 0.0, 0.0, 0.0, s.level};
          return run_linear(config, gen, p);
        } else if constexpr (std::is_same_v<S, Bessel3FixedHorizon>) {
          return run_bessel3(config, gen);
        } else if constexpr (std::is_same_v<S, BridgeFixedHorizon>) {
          return run_bridge(config, gen);
        } else if constexpr (std::is_same_v<S, Meander>) {
          return run_meander(config, gen);
        } else if constexpr (std::is_same_v<S, Excursion>) {
          return run_excursion(config, gen);
        } else {
          return run_ray_knight(config, gen, s.mu);
        }
      },
      config.scheme);
}

PathFunctionals sample_path(const PathConfig& config) {
  rng::Philox gen(config.seed, config.stream_id);
  return sample_path(config, gen);
}

PathFunctionals sample_path_two_pass_uniform(const PathConfig& config,
                                             rng::Philox& gen) {
  check_common(config);
  const auto* fh = std::get_if<FixedHorizon>(&config.scheme);
  if (fh == nullptr)
    throw std::invalid_argument(
        "paths: two-pass uniform sampling is defined for the fixed-horizon "
        "scheme only");
  long n = std::lround(fh->horizon / config.step);
  if (n < 2) n = 2;
  const double h = fh->horizon / static_cast<double>(n);

  static thread_local std::vector<double> w;
  fill_free_path(w, n, h, gen);

  Accumulator acc(config, gen);
  for (long i = 0; i < n; ++i) {
    ++acc.steps;
    acc.powers(w[static_cast<std::size_t>(i)],
               w[static_cast<std::size_t>(i) + 1], h);
    acc.extremes(w[static_cast<std::size_t>(i)],
                 w[static_cast<std::size_t>(i) + 1], h);
    acc.t += h;
  }
  acc.t = fh->horizon;

  PathFunctionals out;
  out.terminal_value = w[static_cast<std::size_t>(n)];
  acc.finish(out);
  out.uniform_sample = grid_uniform_value(w, n, h, gen);
  return out;
}

ReversedView reversed_rescaled(const PathConfig& config,
                               const PathFunctionals& f) {
  const auto* sb = std::get_if<SingleBarrier>(&config.scheme);
  if (sb == nullptr)
    throw std::invalid_argument(
        "paths: the reversed rescaled view is defined for the single-barrier "
        "scheme only");
  int i1 = -1;
  for (std::size_t i = 0; i < config.moment_orders.size(); ++i)
    if (config.moment_orders[i] == 1.0) i1 = static_cast<int>(i);
  if (i1 < 0)
    throw std::invalid_argument(
        "paths: the reversed view needs moment order 1");
  double tt = f.hit_time;
  if (!(tt > 0.0))
    throw std::invalid_argument("paths: reversed view needs a hit time");
  double rt = 1.0 / std::sqrt(tt);
  double signed_area = f.plus_integrals[static_cast<std::size_t>(i1)] -
                       f.minus_integrals[static_cast<std::size_t>(i1)];
  ReversedView v;
  v.terminal = sb->a * rt;
  v.integral = sb->a * rt - signed_area / (tt * std::sqrt(tt));
  v.sup = (sb->a - f.inf) * rt;
  return v;
}

}  // namespace uhit::paths
