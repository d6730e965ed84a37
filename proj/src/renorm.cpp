// Copyright 2026 The Coalesce Authors
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

#include "coalesce/renorm.hpp"

#include <algorithm>
#include <boost/multiprecision/gmp.hpp>
#include <cmath>

#include "coalesce/error.hpp"

namespace coalesce {

using Rational = boost::multiprecision::mpq_rational;

bool IsRenormalisable(double alpha, double beta, std::int64_t k) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) return false;
  const Rational a(alpha), b(beta), kk(k);
  if (!(a > 0 && a <= Rational(1, 4) && b > 1 && k >= 1)) return false;
  const bool b1 = b + a * b < 2 - 3 * a;
  const bool b2 = a * (kk - 3) > 2 * b * (1 - a);
  return b1 && b2;
}

double ComputeC(double mu_red, double mu_blue, double var_red, double var_blue,
                double beta) {
  if (!std::isfinite(var_red) || !std::isfinite(var_blue)) {
    throw Error(ErrorCode::kInfiniteMoment, "variance is infinite");
  }
  if (!(mu_red > 0 && mu_blue > 0) || !(beta > 1)) {
    throw Error(ErrorCode::kInvalidArgument, "need positive means and beta > 1");
  }
  const double mu = mu_red + mu_blue;
  const double r = (beta + 1) / (beta - 1);
  return (var_red + var_blue) * r * r / (mu * mu);
}

std::optional<double> Renorm2Root(std::int64_t k, double c, std::int64_t n) {
  if (k < 2 || n < 1 || !(c >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "need k >= 2, n >= 1, c >= 0");
  }
  const double m = static_cast<double>(2 * k - 3);
  const double disc = 1.0 - 4.0 * m * static_cast<double>(k) * c / static_cast<double>(n);
  if (disc < 0) return std::nullopt;
  return (1.0 + std::sqrt(disc)) / (2.0 * m);
}

EtaModel ChebyshevEta(double c, std::int64_t k, std::int64_t n) {
  const double kd = static_cast<double>(k), nd = static_cast<double>(n);
  return {[=](int t) { return c / (std::pow(kd, t) * nd); }, 1.0 / kd,
          "chebyshev: eta_t = c/(k^t n), c = " + std::to_string(c)};
}

EtaModel ZeroEta() { return {[](int) { return 0.0; }, 0.0, "zero"}; }

QRecursion RunQRecursion(double q0, const EtaModel& model, std::int64_t k, int T) {
  if (!(q0 >= 0 && q0 <= 1)) throw Error(ErrorCode::kInvalidArgument, "q0 must lie in [0, 1]");
  const double m = static_cast<double>(2 * k - 3);
  const double kd = static_cast<double>(k);
  QRecursion r;
  double q = q0;
  for (int t = 0;; ++t) {
    r.q.push_back(q);
    r.partial_sum += q;
    const double keta = kd * model.eta(t);
    const double zeta = m * q;
    if (q < 1e-30 && zeta < 1 && keta <= (1 - zeta) * q) {
      if (model.ratio && *model.ratio < 1) {
        // Later terms: sum_{s>t} q_s <= (zeta q_t + sum_{s>=t} k eta_s) / (1 - zeta).
        r.converged = true;
        r.tail_bound = (zeta * q + keta / (1 - *model.ratio)) / (1 - zeta);
      } else if (!model.ratio) {
        r.converged = true;
      }
      if (r.converged) break;
    }
    if (q > 1 || t >= T) break;
    q = m * q * q + keta;
  }
  return r;
}

Certificate Certify(const RenormParams& params, const DistSpec& red,
                    const DistSpec& blue, double q_input,
                    std::optional<double> confidence_log10, int max_steps) {
  if (!IsRenormalisable(params.alpha, params.beta, params.k)) {
    throw Error(ErrorCode::kPreconditionFailed,
                "(alpha, beta, k) is not renormalisable");
  }
  if (params.n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be positive");
  const Moments mr = ComputeMoments(red);
  const Moments mb = ComputeMoments(blue);
  Certificate cert;
  cert.params = params;
  cert.red = red.ToString();
  cert.blue = blue.ToString();
  cert.c = ComputeC(mr.mean, mb.mean, mr.variance, mb.variance, params.beta);
  cert.Q = Renorm2Root(params.k, cert.c, params.n);
  cert.q_input = q_input;
  cert.confidence_log10 = confidence_log10;
  const EtaModel eta = ChebyshevEta(cert.c, params.k, params.n);
  cert.eta_model = eta.description;
  cert.recursion = RunQRecursion(std::clamp(q_input, 0.0, 1.0), eta, params.k, max_steps);
  if (!cert.Q) {
    cert.reason = "n not large enough: the threshold quadratic has no real root";
  } else if (q_input > *cert.Q) {
    cert.reason = "q_input exceeds Q";
  } else if (!cert.recursion.converged) {
    cert.reason = "q recursion did not converge within the step budget";
  } else {
    cert.certified = true;
    cert.reason = "q_input <= Q; verdict conditional on the asserted q_input";
  }
  return cert;
}

}  // namespace coalesce
