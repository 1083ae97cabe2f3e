#pragma once

namespace qbath {

/// Two-level molecule. omega = (e2-e1)/2 separates the level splitting from
/// the infinite-temperature mean (e1+e2)/2.
struct TwoLevel {
  double e1;
  double e2;  // >= e1

  double omega() const { return 0.5 * (e2 - e1); }
  double midpoint() const { return 0.5 * (e1 + e2); }
};

/// Z, E, S, C at one beta. z overflows for large beta*|e|; log_z does not.
struct TwoLevelPoint {
  double z;
  double log_z;
  double energy;
  double entropy;        // units of k_b
  double heat_capacity;  // units of k_b
};

/// beta, log Z, S as functions of the energy.
struct TwoLevelInverse {
  double beta;
  double log_z;
  double entropy;
};

enum class TwoLevelModel { dirac, haar };

struct SeriesResult {
  double value;
  bool in_regime;  // false when |beta*omega| > 1
};

/// Eigenstate-concentrated measure: Z = (e^{-bE1}+e^{-bE2})/2,
/// E = mid - omega*tanh(b*omega), C = k_b (b*omega)^2 sech^2(b*omega).
TwoLevelPoint dirac2(const TwoLevel& tl, double beta, double k_b = 1.0);

/// Inverse of dirac2 in the energy variable, valid for E in (e1, mid]:
/// beta = ln((e2-E)/(E-e1))/(e2-e1), S = binary-entropy form.
TwoLevelInverse dirac2_of_energy(const TwoLevel& tl, double energy,
                                 double k_b = 1.0);

/// Uniform (Haar) measure: Z = (e^{-bE1}-e^{-bE2})/(b(e2-e1)),
/// E = 1/b + mid - omega*coth(b*omega), C = k_b(1 - (b*omega)^2csch^2).
/// Below beta*omega = 1e-4 the removable singularity is evaluated by its
/// expansion.
TwoLevelPoint haar2(const TwoLevel& tl, double beta, double k_b = 1.0);

/// High-temperature expansion of E(beta) through beta^3:
///   dirac: mid - b w^2 + b^3 w^4 / 3
///   haar:  mid - b w^2/3 + b^3 w^4 / 45
SeriesResult two_level_series(const TwoLevel& tl, double beta,
                              TwoLevelModel model);

/// E(beta) - two_level_series(beta), evaluated without cancellation: the
/// direct difference is below double resolution once beta^5 terms shrink
/// under the rounding floor of E itself, so small arguments use the exact
/// tail expansions of tanh/coth. Agrees with the direct difference where
/// both are representable.
double two_level_series_remainder(const TwoLevel& tl, double beta,
                                  TwoLevelModel model);

}  // namespace qbath
