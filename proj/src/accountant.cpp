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

#include "dpfl/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dpfl {
namespace accountant {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Series truncation: relative tolerance must hold for two consecutive terms
// (the alternating tail can plateau for one term); hard cap on term count.
constexpr int kMaxSeriesTerms = 10000;

// ln A may come out a hair below 0 from rounding; anything beyond this is a
// genuine bug, not noise.
constexpr double kLogAUnderdraft = -1e-12;

double clamp_log_a(double log_a) {
  if (log_a < kLogAUnderdraft) {
    std::ostringstream msg;
    msg << "ln A_alpha = " << log_a << " is negative beyond rounding noise";
    throw std::logic_error(msg.str());
  }
  return std::max(0.0, log_a);
}

// ln C(n, k) for integer arguments.
double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Scaled complementary error function erfcx(x) = e^{x^2} erfc(x) for large
// positive x, by the standard continued fraction
//   sqrt(pi) erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz algorithm. Converges in a handful of
// iterations for x >= 8.
double erfcx_large(double x) {
  constexpr double kTiny = 1e-300;
  double f = kTiny;
  double c = f;
  double d = 0.0;
  for (int n = 1; n <= 200; ++n) {
    const double a = (n == 1) ? 1.0 : (n - 1) / 2.0;
    d = x + a * d;
    if (d == 0.0) d = kTiny;
    c = x + a / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double ratio = c * d;
    f *= ratio;
    if (std::abs(ratio - 1.0) < 1e-17) break;
  }
  return f / std::sqrt(M_PI);
}

// Signed accumulator over log-magnitudes. The raw series terms overflow
// double precision long before the sum does, so everything stays in logs.
struct SignedLogSum {
  double log_mag = kNegInf;
  int sign = 1;

  void add(int term_sign, double term_log_mag) {
    if (term_log_mag == kNegInf) return;
    if (log_mag == kNegInf) {
      log_mag = term_log_mag;
      sign = term_sign;
      return;
    }
    if (term_sign == sign) {
      log_mag = detail::log_add(log_mag, term_log_mag);
    } else if (term_log_mag < log_mag) {
      log_mag = detail::log_sub(log_mag, term_log_mag);
    } else if (term_log_mag > log_mag) {
      log_mag = detail::log_sub(term_log_mag, log_mag);
      sign = term_sign;
    } else {
      log_mag = kNegInf;
      sign = 1;
    }
  }
};

bool is_integer_order(double alpha) {
  return alpha == std::floor(alpha) && alpha >= 2.0 &&
         alpha <= 9.007199254740992e15;  // 2^53: beyond that "integer" is moot
}

}  // namespace

namespace detail {

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sub(double a, double b) {
  if (b == kNegInf) return a;
  if (a < b) throw std::logic_error("log_sub: negative difference");
  if (a == b) return kNegInf;
  return a + std::log1p(-std::exp(b - a));
}

double log_erfc(double x) {
  if (x < 8.0) {
    return std::log(std::erfc(x));
  }
  return std::log(erfcx_large(x)) - x * x;
}

}  // namespace detail

void SgmParams::validate() const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("sampling rate q must lie in [0, 1]");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("noise scale sigma must be positive");
  }
}

SgmAnalysisContext SgmAnalysisContext::for_params(const SgmParams& params) {
  params.validate();
  if (!(params.q > 0.0 && params.q < 1.0)) {
    throw std::invalid_argument(
        "analysis context requires 0 < q < 1: z1 is undefined at the endpoints");
  }
  SgmAnalysisContext ctx;
  ctx.mixture_weight = params.q;
  ctx.z1 = 0.5 + params.sigma * params.sigma * std::log(1.0 / params.q - 1.0);
  return ctx;
}

AlphaGrid::AlphaGrid(std::vector<double> orders_in) : orders(std::move(orders_in)) {
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (!(orders[i] > 1.0)) {
      throw std::invalid_argument("alpha grid entries must be > 1");
    }
    if (i > 0 && !(orders[i] > orders[i - 1])) {
      throw std::invalid_argument("alpha grid must be strictly increasing");
    }
  }
}

AlphaGrid AlphaGrid::default_grid() {
  std::vector<double> orders = {1.25, 1.5, 1.75, 2.0, 2.25,
                                2.5,  3.0, 3.5,  4.0, 4.5};
  for (int a = 5; a <= 64; ++a) orders.push_back(static_cast<double>(a));
  orders.push_back(128.0);
  orders.push_back(256.0);
  return AlphaGrid(std::move(orders));
}

double log_a_alpha_integer(const SgmParams& params, std::int64_t alpha) {
  params.validate();
  if (alpha < 2) {
    throw std::invalid_argument("integer-order path requires alpha >= 2");
  }
  const double q = params.q;
  const double sigma = params.sigma;
  if (q == 0.0) return 0.0;  // A_alpha = 1: only the k=0 term survives
  if (q == 1.0) {            // only the k=alpha term survives
    const double a = static_cast<double>(alpha);
    return (a * a - a) / (2.0 * sigma * sigma);
  }

  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  double log_sum = kNegInf;
  for (std::int64_t k = 0; k <= alpha; ++k) {
    const double kd = static_cast<double>(k);
    const double term = log_choose(alpha, k) +
                        static_cast<double>(alpha - k) * log_1mq + kd * log_q +
                        (kd * kd - kd) / (2.0 * sigma * sigma);
    log_sum = detail::log_add(log_sum, term);
  }
  return clamp_log_a(log_sum);
}

double log_a_alpha_fractional(const SgmParams& params, double alpha, double tol) {
  params.validate();
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("fractional-order path requires alpha > 1");
  }
  if (!(tol > 0.0 && tol < 1.0)) {
    throw std::invalid_argument("truncation tolerance must lie in (0, 1)");
  }
  const double q = params.q;
  const double sigma = params.sigma;
  // z1 is undefined at the endpoints; the limits are exact there.
  if (q == 0.0) return 0.0;
  if (q == 1.0) return alpha * (alpha - 1.0) / (2.0 * sigma * sigma);

  const SgmAnalysisContext ctx = SgmAnalysisContext::for_params(params);
  const double z1 = ctx.z1;
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const double two_sigma_sq = 2.0 * sigma * sigma;
  const double sqrt2_sigma = std::sqrt(2.0) * sigma;
  const double log_half = -std::numbers::ln2_v<double>;

  // The moment integral splits at z1 into two series over the generalized
  // binomial expansion; the second one is indexed by j = alpha - k. Signs
  // come from C(alpha, k), which alternates once k exceeds alpha.
  SignedLogSum part0;
  SignedLogSum part1;
  double log_coef = 0.0;  // ln |C(alpha, k)|, built by recurrence
  int coef_sign = 1;
  int below_tol_streak = 0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    if (k > 0) {
      const double factor = alpha - static_cast<double>(k) + 1.0;
      if (factor == 0.0) break;  // integer alpha: C(alpha, k) vanishes from here on
      log_coef += std::log(std::abs(factor)) - std::log(static_cast<double>(k));
      if (factor < 0.0) coef_sign = -coef_sign;
    }
    const double kd = static_cast<double>(k);
    const double j = alpha - kd;

    const double log_s0 = log_coef + kd * log_q + j * log_1mq +
                          (kd * kd - kd) / two_sigma_sq + log_half +
                          detail::log_erfc((kd - z1) / sqrt2_sigma);
    const double log_s1 = log_coef + j * log_q + kd * log_1mq +
                          (j * j - j) / two_sigma_sq + log_half +
                          detail::log_erfc((z1 - j) / sqrt2_sigma);
    part0.add(coef_sign, log_s0);
    part1.add(coef_sign, log_s1);

    SignedLogSum total = part0;
    total.add(part1.sign, part1.log_mag);
    const double log_term = std::max(log_s0, log_s1);
    if (total.log_mag != kNegInf &&
        log_term - total.log_mag < std::log(tol)) {
      if (++below_tol_streak >= 2) break;
    } else {
      below_tol_streak = 0;
    }
    if (k == kMaxSeriesTerms - 1) {
      std::ostringstream msg;
      msg << "A_alpha series did not converge within " << kMaxSeriesTerms
          << " terms (q=" << q << ", sigma=" << sigma << ", alpha=" << alpha
          << ")";
      throw std::runtime_error(msg.str());
    }
  }

  SignedLogSum total = part0;
  total.add(part1.sign, part1.log_mag);
  if (total.sign < 0) {
    throw std::logic_error("A_alpha series summed to a negative value");
  }
  return clamp_log_a(total.log_mag);
}

RdpPoint sgm_rdp_step(const SgmParams& params, double alpha) {
  params.validate();
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("Renyi order must be > 1");
  }
  double log_a;
  if (params.q == 0.0) {
    log_a = 0.0;
  } else if (params.q == 1.0) {
    log_a = alpha * (alpha - 1.0) / (2.0 * params.sigma * params.sigma);
  } else if (is_integer_order(alpha)) {
    log_a = log_a_alpha_integer(params, static_cast<std::int64_t>(alpha));
  } else {
    log_a = log_a_alpha_fractional(params, alpha);
  }
  return RdpPoint{alpha, std::max(0.0, log_a / (alpha - 1.0))};
}

RdpPoint compose_steps(const RdpPoint& step, std::int64_t steps) {
  if (steps < 1) {
    throw std::invalid_argument("composition requires at least one step");
  }
  return RdpPoint{step.alpha, step.epsilon * static_cast<double>(steps)};
}

DpPoint rdp_to_dp(const RdpPoint& point, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  return DpPoint{point.epsilon + std::log(1.0 / delta) / (point.alpha - 1.0),
                 delta};
}

std::vector<AlphaRow> budget_table(const SgmParams& params,
                                   std::int64_t total_steps, double delta,
                                   const AlphaGrid& grid) {
  params.validate();
  if (total_steps < 1) {
    throw std::invalid_argument("total_steps must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (grid.orders.empty()) {
    throw std::invalid_argument("alpha grid is empty");
  }
  std::vector<AlphaRow> rows;
  rows.reserve(grid.orders.size());
  for (double alpha : grid.orders) {
    AlphaRow row;
    row.alpha = alpha;
    try {
      const RdpPoint composed =
          compose_steps(sgm_rdp_step(params, alpha), total_steps);
      const DpPoint dp = rdp_to_dp(composed, delta);
      row.rdp_epsilon = composed.epsilon;
      row.dp_epsilon = dp.epsilon;
      row.ok = true;
    } catch (const std::runtime_error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

BestBudget best_dp_budget(const SgmParams& params, std::int64_t total_steps,
                          double delta, const AlphaGrid& grid) {
  const std::vector<AlphaRow> rows =
      budget_table(params, total_steps, delta, grid);
  const AlphaRow* best = nullptr;
  for (const AlphaRow& row : rows) {
    // Strict comparison keeps the smallest alpha among minimizers: rows are
    // visited in increasing order.
    if (row.ok && (best == nullptr || row.dp_epsilon < best->dp_epsilon)) {
      best = &row;
    }
  }
  if (best == nullptr) {
    throw std::runtime_error(
        "no Renyi order in the grid could be evaluated for these parameters");
  }
  return BestBudget{DpPoint{best->dp_epsilon, delta}, best->alpha};
}

}  // namespace accountant
}  // namespace dpfl
