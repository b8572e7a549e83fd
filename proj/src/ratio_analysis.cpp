#include "mrsched/ratio_analysis.hpp"

#include <cmath>
#include <functional>

#include "mrsched/model.hpp"

namespace mrsched {

const char *to_string(RatioVariant v) {
  switch (v) {
  case RatioVariant::General:
    return "general";
  case RatioVariant::NoPrecedence:
    return "no_prec";
  case RatioVariant::NoPrecedenceNoRelease:
    return "no_prec_no_release";
  }
  return "unknown";
}

RatioVariant ratio_variant_from_string(const std::string &text) {
  if (text == "general")
    return RatioVariant::General;
  if (text == "no_prec")
    return RatioVariant::NoPrecedence;
  if (text == "no_prec_no_release")
    return RatioVariant::NoPrecedenceNoRelease;
  throw ParameterError("unknown ratio variant '" + text + "'");
}

double energy_augmentation_factor(double alpha, double gamma, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(gamma > 0.0) || !(beta > 1.0))
    throw ParameterError("need alpha in (0,1), gamma > 0, beta > 1");
  return 1.0 / (std::pow(gamma, beta - 1.0) * std::pow(alpha, beta));
}

double ratio_bound(double alpha, double gamma, double delta, RatioVariant v) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(gamma > 0.0) || !(delta >= 0.0))
    throw ParameterError("need alpha in (0,1), gamma > 0, delta >= 0");
  double num = 0.0;
  switch (v) {
  case RatioVariant::General:
    num = gamma * gamma + 3.0 * gamma + 1.0;
    break;
  case RatioVariant::NoPrecedence:
    num = gamma + 1.0;
    break;
  case RatioVariant::NoPrecedenceNoRelease:
    num = gamma;
    break;
  }
  return num / (1.0 - alpha) * (1.0 + delta);
}

namespace {

double stretch_for(double alpha, double beta, double augmentation) {
  return std::pow(augmentation * std::pow(alpha, beta), -1.0 / (beta - 1.0));
}

} // namespace

RatioOptimum optimal_ratio(double beta, RatioVariant v, double augmentation) {
  // the ratio expressions rely on the per-task energy bound, which needs beta >= 2
  if (!(beta >= 2.0) || !(augmentation > 0.0))
    throw ParameterError("need beta >= 2 and a positive augmentation");
  auto f = [&](double a) {
    return ratio_bound(a, stretch_for(a, beta, augmentation), 0.0, v);
  };

  constexpr int probes = 64;
  int best = 0;
  double best_val = INFINITY;
  for (int k = 0; k < probes; ++k) {
    double a = (k + 0.5) / probes;
    double val = f(a);
    if (val < best_val) {
      best_val = val;
      best = k;
    }
  }
  double lo = std::max(best - 0.5, 0.0) / probes;
  double hi = std::min(best + 1.5, static_cast<double>(probes)) / probes;
  lo = std::max(lo, 1e-12);
  hi = std::min(hi, 1.0 - 1e-12);

  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  RatioOptimum out;
  out.alpha = 0.5 * (lo + hi);
  out.gamma = stretch_for(out.alpha, beta, augmentation);
  out.ratio = f(out.alpha);
  out.suspicious = out.ratio > best_val + 1e-3;
  return out;
}

std::vector<TradeoffPoint> tradeoff_curve(double beta,
                                          const std::vector<double> &levels) {
  std::vector<TradeoffPoint> out;
  for (double a : levels) {
    if (!(a >= 0.0))
      throw ParameterError("augmentation levels must be >= 0");
    out.push_back({a, optimal_ratio(beta, RatioVariant::General, 1.0 + a)});
  }
  return out;
}

std::pair<double, double> jensen_sides(const std::vector<double> &a,
                                       const std::vector<double> &s, double beta) {
  if (a.size() != s.size() || a.empty())
    throw ParameterError("jensen_sides needs equal nonempty vectors");
  double inv = 0.0, num = 0.0, total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inv += a[i] / s[i];
    num += a[i] * std::pow(s[i], beta - 1.0);
    total += a[i];
  }
  return {std::pow(1.0 / inv, beta - 1.0), num / std::pow(total, beta)};
}

} // namespace mrsched
