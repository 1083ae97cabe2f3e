#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qbath/energy_law.hpp"

namespace qbath {

/// One point of the equation of state. entropy == k_b*(beta*energy + log_z)
/// exactly as stored; temperature is 1/(k_b*beta), +inf at beta = 0.
struct ThermoPoint {
  double beta;
  double log_z;
  double energy;
  double entropy;
  double heat_capacity;
  double temperature;
};

struct EosEntry {
  double input;  // the grid value (beta or energy)
  std::optional<ThermoPoint> point;
  std::string error;  // nonempty when the entry failed
};

struct EquationOfState {
  std::string law;
  double k_b = 1.0;
  std::vector<EosEntry> entries;
};

enum class GridKind { beta, energy };

/// log E[e^{-beta H}], evaluated as -beta*ground + log E[e^{-beta(H-ground)}]
/// so the shifted integrand lives in (0, 1]. beta < 0 is out of scope.
double log_partition(const EnergyLaw& law, double beta);

/// E[H e^{-beta H}] / E[e^{-beta H}].
double specific_energy(const EnergyLaw& law, double beta);

/// Variance of H under the tilted law; equals -dE/dbeta.
double energy_variance(const EnergyLaw& law, double beta);

/// k_b * beta^2 * energy_variance.
double heat_capacity(const EnergyLaw& law, double beta, double k_b = 1.0);

/// k_b * (beta * specific_energy + log_partition); <= 0, zero at beta = 0.
double entropy_from_beta(const EnergyLaw& law, double beta, double k_b = 1.0);

/// Unique beta >= 0 with specific_energy(law, beta) == energy, for
/// energy in (ground, mean]. Bracketing plus safeguarded Newton, iterated
/// to machine precision (well inside the 1e-12 * width contract).
double invert_beta(const EnergyLaw& law, double energy);

/// k_b * (beta(E)*E + log Z(beta(E))) via invert_beta.
double entropy_of_energy(const EnergyLaw& law, double energy, double k_b = 1.0);

/// Exponential reweighting of the law by e^{-beta H}/Z(beta); the mean of
/// the result is specific_energy(law, beta).
EnergyLaw esscher_tilt(const EnergyLaw& law, double beta);

/// inf_{beta>=0} [beta*E + log Z(beta)], in nats. Zero for E >= mean,
/// -inf reported for E <= ground.
double chernoff_rate(const EnergyLaw& law, double energy);

/// Evaluates the equation of state on a grid of beta or energy values.
/// Entries outside the valid domain produce per-entry error records and the
/// scan continues.
EquationOfState eos_scan(const EnergyLaw& law, std::span<const double> grid,
                         GridKind kind, double k_b = 1.0);

}  // namespace qbath
