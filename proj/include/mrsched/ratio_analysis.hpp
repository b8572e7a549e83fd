#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mrsched {

enum class RatioVariant { General, NoPrecedence, NoPrecedenceNoRelease };

const char *to_string(RatioVariant v);
RatioVariant ratio_variant_from_string(const std::string &text);

// 1 / (gamma^(beta-1) alpha^beta)
double energy_augmentation_factor(double alpha, double gamma, double beta);

// (gamma^2+3gamma+1)/(1-alpha), (gamma+1)/(1-alpha) or gamma/(1-alpha),
// times (1+delta).
double ratio_bound(double alpha, double gamma, double delta, RatioVariant v);

struct RatioOptimum {
  double alpha = 0.0;
  double gamma = 0.0;
  double ratio = 0.0;
  // Refinement ended more than 1e-3 above the best grid probe.
  bool suspicious = false;
};

// Minimizes ratio_bound(alpha, gamma(alpha), 0, v) over alpha in (0,1) with
// gamma(alpha) = (A alpha^beta)^(-1/(beta-1)), i.e. energy factor exactly A.
RatioOptimum optimal_ratio(double beta, RatioVariant v, double augmentation = 1.0);

struct TradeoffPoint {
  double augmentation = 0.0; // extra energy as a fraction, 0.5 = 50%
  RatioOptimum optimum;
};

std::vector<TradeoffPoint> tradeoff_curve(double beta,
                                          const std::vector<double> &levels);

// Both sides of (1 / sum a_i/s_i)^(beta-1) <= sum a_i s_i^(beta-1) / (sum a_i)^beta.
std::pair<double, double> jensen_sides(const std::vector<double> &a,
                                       const std::vector<double> &s, double beta);

} // namespace mrsched
