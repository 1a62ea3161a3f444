#pragma once

// Seedable simulation of Brownian paths and derived processes up to
// hitting or terminal times, with streaming functional accumulators:
// signed power integrals, occupation windows, suprema, and a weighted
// reservoir sample of the path value at a uniform time.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "uhit/rng.hpp"

namespace uhit::paths {

// Scheme selectors. Parameters are the process-defining constants.
struct SingleBarrier {
  double a = 1.0;  // absorbing upper level, > 0
};
struct TwoBarrierExit {
  double a = 1.0;  // upper level, > 0
  double b = 1.0;  // lower level depth (absorbs at -b), > 0
};
struct FixedHorizon {
  double horizon = 1.0;  // terminal time, > 0
};
struct InverseLocalTime {
  double level = 1.0;  // stop when the local time at 0 exceeds this, > 0
};
struct Bessel3FixedHorizon {};   // norm of 3-D Brownian motion on [0,1]
struct BridgeFixedHorizon {};    // Brownian bridge on [0,1]
struct Meander {};               // Brownian meander on [0,1]
struct Excursion {};             // normalized Brownian excursion on [0,1]
struct RayKnightSde {
  double mu = 1.0;  // drift coefficient of the squared-radial SDE, > 0
};

using Scheme =
    std::variant<SingleBarrier, TwoBarrierExit, FixedHorizon, InverseLocalTime,
                 Bessel3FixedHorizon, BridgeFixedHorizon, Meander, Excursion,
                 RayKnightSde>;

struct PathConfig {
  Scheme scheme = SingleBarrier{};
  double step = 1e-4;  // base time step h, > 0
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  // When on, every step fires an absorbing-barrier hit with the exact
  // conditional bridge-crossing probability exp(-2 (a-x0)+ (a-x1)+ / h);
  // the hit time is placed at the step midpoint. When off, hits are
  // detected only when a grid value lands beyond the barrier.
  bool bridge_correction = true;

  // Far-field step coarsening: far from every functional-critical level
  // the step grows to h*2^k capped by (d/6)^2, d the distance to the
  // nearest critical level, so a 6-sigma move cannot cross back in one
  // step. Within-step quantities (reservoir sample, supremum, crossing)
  // are drawn exactly from the bridge, and the trapezoid accumulators for
  // integer orders are conditionally unbiased at any step size, so
  // coarsening trades no bias for a large cut in step count.
  bool coarsen_far_field = true;

  // Absolute runaway cap. 0 means automatic: 1e8 with coarsening on
  // (keeps the aborted fraction near 8e-5 for unit-barrier hitting),
  // 1e7 * step with coarsening off.
  double max_time = 0.0;

  // Orders m of the one-sided power integrals int (B+)^m ds and
  // int (B-)^m ds to accumulate.
  std::vector<double> moment_orders = {1.0};

  // Levels x at which to estimate local time by the occupation window
  // (1/2e) int 1{|B_s - x| <= e} ds.
  std::vector<double> local_time_levels;

  // Window half-width e; 0 means the default step^0.4.
  double local_time_bandwidth = 0.0;
};

struct PathFunctionals {
  double hit_time = 0.0;  // scheme-defined terminal time T

  // Aligned with PathConfig::moment_orders: int_0^T (B_s+)^m ds and
  // int_0^T (B_s-)^m ds. When order 0 is requested, hit_time is defined
  // as the sum of the two order-0 accumulators, making the occupation
  // identity exact by construction (exact-zero grid values count to the
  // positive side for the order-0 indicator only).
  std::vector<double> plus_integrals;
  std::vector<double> minus_integrals;

  double sup = 0.0;      // sup of the path value
  double inf = 0.0;      // inf of the path value
  double sup_abs = 0.0;  // sup of |path value|

  // Path value at a time uniform on [0,T]: one-pass weighted reservoir,
  // value drawn exactly from the in-step bridge at a jittered time.
  double uniform_sample = 0.0;

  // Aligned with PathConfig::local_time_levels.
  std::vector<double> local_times;

  double terminal_value = 0.0;
  bool aborted = false;        // hit the runaway cap; excluded upstream
  std::uint64_t steps = 0;

  // Scheme-specific extras (meander m1/m_u/g, excursion integrals,
  // running local-time integral, exit side, SDE profile values).
  std::map<std::string, double> aux;
};

// Simulate one path. All randomness comes from `gen`; a fixed
// (seed, stream_id, config) triple reproduces the output bit for bit.
PathFunctionals sample_path(const PathConfig& config, rng::Philox& gen);

// Convenience overload seeding a fresh generator from the config.
PathFunctionals sample_path(const PathConfig& config);

// Validation oracle for the reservoir: fixed-horizon scheme only, stores
// the whole path and picks the uniform time directly (two passes), so its
// uniform_sample law can be compared against the streaming reservoir.
PathFunctionals sample_path_two_pass_uniform(const PathConfig& config,
                                             rng::Philox& gen);

// The time-reversed rescaled view of a single-barrier path at level a:
// u -> (a - B_{T(1-u)}) / sqrt(T) on [0,1], which maps the path onto a
// radial-process excursion picture. Requires moment order 1 accumulated.
struct ReversedView {
  double integral = 0.0;  // int_0^1 of the reversed rescaled path
  double terminal = 0.0;  // its value at u = 1, exactly a/sqrt(T)
  double sup = 0.0;       // its supremum, (a - inf B)/sqrt(T)
};
ReversedView reversed_rescaled(const PathConfig& config,
                               const PathFunctionals& f);

}  // namespace uhit::paths
