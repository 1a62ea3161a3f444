#pragma once

// Scenario registry: each entry pairs one distributional identity of the
// uniform-time rescaled path laws with a Monte Carlo experiment and a
// closed-form or quadrature oracle, then reports the numbers together with a
// pass / fail / inconclusive decision.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace uhit::verify {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  // Fraction of requested paths dropped (aborted runs or non-finite
  // functionals). Scenario defaults keep this within [0, 1e-3]; a larger
  // value forces the verdict to "inconclusive".
  double excluded_fraction = 0.0;
};

struct VerificationResult {
  std::string scenario_id;  // registry id, with a ":case" suffix on grid rows
  std::string claim_ref;    // anchor slug; resolves through claim_registry()
  double expected = 0.0;    // oracle value (0 for distribution rows)
  Estimate estimate;        // distribution rows carry the statistic as mean
  double z_or_p = 0.0;      // z for mean rows, p for distribution rows
  std::string verdict;      // "pass" | "fail" | "inconclusive"
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  std::uint64_t n_paths = 0;   // 0 -> per-scenario default; else >= 1000
  double step = 0.0;           // 0 -> per-scenario default
  int workers = 1;             // path-level fan-out; reduction is independent
                               // of the worker count
  bool halve_windows = false;  // sensitivity mode: conditioning windows halve
};

// Registered scenario ids, in run order.
const std::vector<std::string>& scenario_ids();

// Scenario id -> claim anchor slug. Every emitted claim_ref resolves here.
const std::map<std::string, std::string>& claim_registry();

// Run one scenario. Throws std::invalid_argument for an unknown id or a
// nonzero n_paths below 1000. Mean rows pass at |z| <= 3, distribution rows
// at p >= 0.001. Deterministic: identical (id, config) gives identical rows.
std::vector<VerificationResult> run_scenario(const std::string& id,
                                             const ScenarioConfig& config = {});

// Every registered scenario, concatenated in registry order.
std::vector<VerificationResult> run_all(const ScenarioConfig& config = {});

// CSV rows under the fixed header
//   scenario_id,claim_ref,expected,estimate,std_error,statistic,verdict
// with doubles printed to 17 significant digits.
void write_csv(std::ostream& out, const std::vector<VerificationResult>& rows);

// Fixed-width table of the same rows, one line per result.
std::string format_table(const std::vector<VerificationResult>& rows);

struct RichardsonResult {
  std::vector<double> steps;
  std::vector<double> errors;  // |estimate - oracle| at each step
  std::vector<double> noise;   // standard error of each estimate
  double slope = 0.0;          // fitted log-log order
  double slope_se = 0.0;
  bool conclusive = false;     // false when errors sit at the noise floor
};

// Step-size bias ladder for the scenarios exposing a scalar error metric:
//   "S1"     signed-area mean vs 0 (unbiased integrator: expect inconclusive)
//   "S5"     level-0 window local time vs its mean 2 (window-kink bias)
//   "T1"     mean 1/sqrt(hit time) vs sqrt(2/pi), crossing correction on
//   "T1:raw" the same with the correction off (grid-detection overshoot)
// Requires >= 3 steps in geometric progression. Sample sizes grow like
// 1/sqrt(step) from n_paths at the largest step (default 30000).
RichardsonResult richardson_bias(const std::string& scenario_id,
                                 const std::vector<double>& steps,
                                 const ScenarioConfig& config = {});

}  // namespace uhit::verify
