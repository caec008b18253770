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

#ifndef DPFL_TESTS_SUPPORT_QUADRATURE_ORACLE_HPP_
#define DPFL_TESTS_SUPPORT_QUADRATURE_ORACLE_HPP_

#include "dpfl/accountant.hpp"

namespace dpfl {
namespace oracle {

// Verification oracle for the SGM moments, deliberately independent of the
// production accountant: both expectations are evaluated by composite-Simpson
// quadrature of the defining integrals in log domain,
//   A_alpha = E_{z~mu0}[(mu(z)/mu0(z))^alpha],
//   B_alpha = E_{z~mu}[(mu0(z)/mu(z))^alpha],
// with mu0 = N(0, sigma^2), mu1 = N(1, sigma^2), mu = (1-q) mu0 + q mu1.
// Fixed, documented constants: integration bounds
// [-(40 sigma + alpha), alpha + 40 sigma + 1] and kNodes nodes. The error
// fields are |full - half resolution| estimates on the log values.
struct OracleResult {
  double log_a = 0.0;
  double log_b = 0.0;
  double log_a_error = 0.0;
  double log_b_error = 0.0;
};

inline constexpr int kNodes = 800001;  // odd, so Simpson's rule applies

// Requires 0 < q < 1 (the mixture is degenerate at the endpoints) and
// alpha > 1.
OracleResult oracle_a_alpha(const accountant::SgmParams& params, double alpha);

}  // namespace oracle
}  // namespace dpfl

#endif  // DPFL_TESTS_SUPPORT_QUADRATURE_ORACLE_HPP_
