// Copyright 2026 The DPFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPFL_ACCOUNTANT_HPP_
#define DPFL_ACCOUNTANT_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace dpfl {
namespace accountant {

// One subsampled-Gaussian step: every record enters the batch independently
// with probability q, and the summed result is perturbed with Gaussian noise
// of scale sigma relative to the sensitivity bound.
struct SgmParams {
  double q = 0.0;      // sampling rate, 0 <= q <= 1
  double sigma = 1.0;  // noise multiplier, > 0

  void validate() const;  // throws std::invalid_argument
};

// Renyi budget at one order: the mechanism's Renyi divergence of order alpha
// is at most epsilon (nats).
struct RdpPoint {
  double alpha = 2.0;    // > 1
  double epsilon = 0.0;  // >= 0
};

// Classical (epsilon, delta) budget.
struct DpPoint {
  double epsilon = 0.0;  // >= 0
  double delta = 1e-5;   // in (0, 1)
};

// Derived quantities of the two-Gaussian mixture underlying one SGM step:
// mu0 = N(0, sigma^2), mu1 = N(1, sigma^2), mu = (1-q) mu0 + q mu1. z1 is
// the point where the fractional-order series splits the real line.
struct SgmAnalysisContext {
  double z1 = 0.0;
  double mu0_mean = 0.0;
  double mu1_mean = 1.0;
  double mixture_weight = 0.0;  // q

  // Requires 0 < q < 1; z1 = 1/2 + sigma^2 ln(1/q - 1) is undefined at the
  // endpoints.
  static SgmAnalysisContext for_params(const SgmParams& params);
};

// Ordered set of Renyi orders to evaluate; strictly increasing, all > 1.
struct AlphaGrid {
  std::vector<double> orders;

  explicit AlphaGrid(std::vector<double> orders_in);

  // {1.25, 1.5, 1.75, 2, 2.25, 2.5, 3, 3.5, 4, 4.5} then integers 5..64,
  // then {128, 256}. Dense where the RDP-to-DP trade-off usually optimizes.
  static AlphaGrid default_grid();
};

// ln A_alpha for integer alpha >= 2, where A_alpha is the moment
// E_{z~mu0}[(mu(z)/mu0(z))^alpha]. Closed-form binomial sum, evaluated in
// log domain. Result is >= 0.
double log_a_alpha_integer(const SgmParams& params, std::int64_t alpha);

// ln A_alpha for any real alpha > 1 via the infinite split-integral series
// (signed terms, erfc tails). Terms are summed as log-magnitude plus sign;
// the series stops once the relative contribution of a term stays below tol
// for two consecutive terms. Throws std::runtime_error if the hard term cap
// is reached first. q = 0 and q = 1 are redirected to the exact limits
// (identity mechanism and plain Gaussian mechanism).
double log_a_alpha_fractional(const SgmParams& params, double alpha,
                              double tol = 1e-12);

// RDP cost of a single SGM step at order alpha:
// epsilon = ln A_alpha / (alpha - 1). Dispatches to the integer closed form
// when alpha is an integer >= 2, to the series otherwise.
RdpPoint sgm_rdp_step(const SgmParams& params, double alpha);

// Additive composition over `steps` identical steps at the same order.
RdpPoint compose_steps(const RdpPoint& step, std::int64_t steps);

// (alpha, eps)-RDP implies (eps + ln(1/delta)/(alpha-1), delta)-DP.
DpPoint rdp_to_dp(const RdpPoint& point, double delta);

// One evaluated row of the order grid for a full run of total_steps.
struct AlphaRow {
  double alpha = 0.0;
  double rdp_epsilon = 0.0;  // composed RDP budget at this order
  double dp_epsilon = 0.0;   // after conversion at the requested delta
  bool ok = false;
  std::string error;  // set when !ok
};

std::vector<AlphaRow> budget_table(const SgmParams& params,
                                   std::int64_t total_steps, double delta,
                                   const AlphaGrid& grid);

struct BestBudget {
  DpPoint point;
  double alpha = 0.0;  // the minimizing order (smallest on ties)
};

// Composes total_steps SGM steps at every order in the grid, converts each to
// (epsilon, delta)-DP, and returns the smallest epsilon. Throws
// std::runtime_error if no order in the grid could be evaluated.
BestBudget best_dp_budget(const SgmParams& params, std::int64_t total_steps,
                          double delta, const AlphaGrid& grid);

namespace detail {

// ln(e^a + e^b), safe for -inf inputs.
double log_add(double a, double b);

// ln(e^a - e^b); requires a >= b.
double log_sub(double a, double b);

// ln erfc(x) without underflow: direct for x < 8, scaled-complement
// continued fraction for the far positive tail.
double log_erfc(double x);

}  // namespace detail

}  // namespace accountant
}  // namespace dpfl

#endif  // DPFL_ACCOUNTANT_HPP_
