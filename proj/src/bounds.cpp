#include "ellbandit/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "ellbandit/errors.hpp"

namespace ellbandit {

double logbar(double x) { return 1.0 + std::log(std::max(x, 1.0)); }

namespace {

double neg_part(double x) { return std::min(x, 0.0); }

void check_args(std::size_t d, double sigma, double horizon, double norm) {
  require(d >= 1, "bound: d must be >= 1");
  require(sigma >= 0.0, "bound: sigma must be >= 0");
  require(horizon >= 0.0, "bound: T must be >= 0");
  require(norm > 0.0, "bound: ||theta||_A must be positive");
}

}  // namespace

double centered_regret_rhs(std::size_t d, double sigma, double horizon, double norm) {
  check_args(d, sigma, horizon, norm);
  const double dd = static_cast<double>(d);
  if (sigma == 0.0) return 2.0 * dd * norm;
  const double s2d2 = sigma * sigma * dd * dd;
  const double root_t = std::sqrt(horizon);
  return 6.0 * dd * sigma * root_t + 984.0 * s2d2 / norm * logbar(horizon * norm * norm / s2d2) +
         290.0 * dd * norm +
         2.0 * horizon * norm * std::exp(neg_part(2.0 * dd / 3.0 - (2.0 / 9.0) * root_t * norm / sigma));
}

double translated_regret_rhs(std::size_t d, double sigma, double horizon, double norm) {
  check_args(d, sigma, horizon, norm);
  const double dd = static_cast<double>(d);
  if (sigma == 0.0) return 392.0 * dd * norm;
  const double s2d2 = sigma * sigma * dd * dd;
  const double root_t = std::sqrt(horizon);
  return 7.0 * dd * sigma * root_t + 2622.0 * s2d2 / norm * logbar(horizon * norm * norm / (4.0 * s2d2)) +
         2.0 * horizon * norm * std::exp(neg_part(2.0 * dd / 3.0 - (1.0 / 9.0) * root_t * norm / sigma)) +
         392.0 * dd * norm;
}

double warmup_failure_rhs(std::size_t d, double sigma, double horizon, double norm) {
  check_args(d, sigma, horizon, norm);
  require(horizon > 0.0, "warmup_failure_rhs: T must be positive");
  const double dd = static_cast<double>(d);
  const double s2d2 = sigma * sigma * dd * dd;
  const double first = s2d2 == 0.0 ? 0.0
                                   : 164.0 * s2d2 / (horizon * norm * norm) * logbar(horizon * norm * norm / s2d2);
  return first + 48.0 * dd / horizon;
}

double warmup_length_rhs(std::size_t d, double sigma, double horizon, double norm) {
  check_args(d, sigma, horizon, norm);
  const double dd = static_cast<double>(d);
  const double s2d2 = sigma * sigma * dd * dd;
  const double first = s2d2 == 0.0 ? 0.0 : 164.0 * s2d2 / (norm * norm) * logbar(horizon * norm * norm / s2d2);
  return first + 48.0 * dd;
}

double minimax_lower_bound(std::size_t d, double sigma, double horizon, double b) {
  return std::min(sigma * static_cast<double>(d) * std::sqrt(horizon) / 16.0, b * horizon / 4.0);
}

}  // namespace ellbandit
