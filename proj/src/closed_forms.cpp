#include "qbath/closed_forms.hpp"

#include <cmath>

#include "qbath/errors.hpp"

namespace qbath {

namespace {

constexpr double kHaarSeriesCut = 1e-4;  // beta*omega switchover

void require_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be finite and >= 0");
  }
}

/// log((e^x + e^-x)/2), stable for all x >= 0.
double log_cosh(double x) {
  return x + std::log1p(std::exp(-2.0 * x)) - M_LN2;
}

/// tanh(x) - x + x^3/3; tail of the odd expansion starting at 2x^5/15.
double tanh_tail(double x) {
  if (std::abs(x) > 0.1) return std::tanh(x) - x + x * x * x / 3.0;
  const double z = x * x;
  // tangent-number coefficients of x^5..x^15
  const double c0 = 2.0 / 15.0, c1 = -17.0 / 315.0, c2 = 62.0 / 2835.0,
               c3 = -1382.0 / 155925.0, c4 = 21844.0 / 6081075.0,
               c5 = -929569.0 / 638512875.0;
  return x * z * z *
         (x * (c0 + z * (c1 + z * (c2 + z * (c3 + z * (c4 + z * c5))))));
}

/// coth(x) - 1/x - x/3 + x^3/45; tail starting at 2x^5/945.
double coth_tail(double x) {
  if (std::abs(x) > 0.1) {
    return 1.0 / std::tanh(x) - 1.0 / x - x / 3.0 + x * x * x / 45.0;
  }
  const double z = x * x;
  const double c0 = 2.0 / 945.0, c1 = -1.0 / 4725.0, c2 = 2.0 / 93555.0,
               c3 = -1382.0 / 638512875.0, c4 = 4.0 / 18243225.0;
  return x * z * z * (x * (c0 + z * (c1 + z * (c2 + z * (c3 + z * c4)))));
}

}  // namespace

TwoLevelPoint dirac2(const TwoLevel& tl, double beta, double k_b) {
  require_beta(beta);
  const double w = tl.omega();
  const double x = beta * w;
  TwoLevelPoint p;
  p.log_z = -beta * tl.midpoint() + log_cosh(x);
  p.z = 0.5 * (std::exp(-beta * tl.e1) + std::exp(-beta * tl.e2));
  p.energy = tl.midpoint() - w * std::tanh(x);
  const double sech = 1.0 / std::cosh(x);
  p.heat_capacity = k_b * (x * sech) * (x * sech);
  p.entropy = k_b * (log_cosh(x) - x * std::tanh(x));
  if (beta == 0.0) {
    p.z = 1.0;
    p.log_z = 0.0;
    p.entropy = 0.0;
    p.heat_capacity = 0.0;
  }
  return p;
}

TwoLevelInverse dirac2_of_energy(const TwoLevel& tl, double energy,
                                 double k_b) {
  const double mid = tl.midpoint();
  if (!(energy > tl.e1) || !(energy <= mid)) {
    throw DomainError("dirac2_of_energy: energy must lie in (E1, (E1+E2)/2]");
  }
  const double gap = tl.e2 - tl.e1;
  TwoLevelInverse inv;
  inv.beta = std::log((tl.e2 - energy) / (energy - tl.e1)) / gap;
  const double p = (energy - tl.e1) / gap;
  const double q = 1.0 - p;
  const double plogp = p > 0.0 ? p * std::log(p) : 0.0;
  const double qlogq = q > 0.0 ? q * std::log(q) : 0.0;
  inv.entropy = k_b * (-M_LN2 - plogp - qlogq);
  inv.log_z = inv.entropy / k_b - inv.beta * energy;
  return inv;
}

TwoLevelPoint haar2(const TwoLevel& tl, double beta, double k_b) {
  require_beta(beta);
  const double w = tl.omega();
  const double x = beta * w;
  TwoLevelPoint p;
  if (beta == 0.0 || w == 0.0) {
    p.log_z = (w == 0.0 && beta != 0.0) ? -beta * tl.e1 : 0.0;
    p.z = std::exp(p.log_z);
    p.energy = tl.midpoint();
    p.entropy = 0.0;
    p.heat_capacity = 0.0;
    return p;
  }
  // Z = (e^{-bE1} - e^{-bE2}) / (b(E2-E1)) = e^{-bE1} * (-expm1(-2x))/(2x)
  p.log_z = -beta * tl.e1 + std::log(-std::expm1(-2.0 * x) / (2.0 * x));
  p.z = std::exp(p.log_z);
  if (x < kHaarSeriesCut) {
    p.energy = tl.midpoint() - beta * w * w / 3.0 +
               beta * beta * beta * w * w * w * w / 45.0;
    p.heat_capacity = k_b * (x * x / 3.0 - x * x * x * x / 15.0);
  } else {
    p.energy = 1.0 / beta + tl.midpoint() - w / std::tanh(x);
    const double s = std::sinh(x);
    const double t = std::isinf(s) ? 0.0 : x / s;
    p.heat_capacity = k_b * (1.0 - t * t);
  }
  p.entropy = k_b * (beta * p.energy + p.log_z);
  return p;
}

SeriesResult two_level_series(const TwoLevel& tl, double beta,
                              TwoLevelModel model) {
  const double w = tl.omega();
  const double w2 = w * w;
  const double b3 = beta * beta * beta;
  SeriesResult r;
  r.in_regime = std::abs(beta * w) <= 1.0;
  if (model == TwoLevelModel::dirac) {
    r.value = tl.midpoint() - beta * w2 + b3 * w2 * w2 / 3.0;
  } else {
    r.value = tl.midpoint() - beta * w2 / 3.0 + b3 * w2 * w2 / 45.0;
  }
  return r;
}

double two_level_series_remainder(const TwoLevel& tl, double beta,
                                  TwoLevelModel model) {
  const double w = tl.omega();
  const double x = beta * w;
  return model == TwoLevelModel::dirac ? -w * tanh_tail(x) : -w * coth_tail(x);
}

}  // namespace qbath
