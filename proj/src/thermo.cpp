#include "qbath/thermo.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qbath/errors.hpp"
#include "qbath/quadrature.hpp"

namespace qbath {

namespace {

constexpr double kQuadRel = 1e-11;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be finite and >= 0 (the model is restricted "
                      "to nonnegative inverse temperature)");
  }
}

/// E[e^{-beta(H-ground)}]; lies in (0, 1] for normalized laws.
double shifted_partition(const EnergyLaw& law, double beta) {
  const double g = law.ground();
  if (law.is_discrete()) {
    double s = 0.0;
    for (const auto& a : law.atoms()) {
      s += a.weight * std::exp(-beta * (a.energy - g));
    }
    return s;
  }
  return integrate_segments(
      [&law, beta, g](double x) {
        return law.density(x) * std::exp(-beta * (x - g));
      },
      law.knots(), kQuadRel);
}

double shifted_first_moment(const EnergyLaw& law, double beta) {
  const double g = law.ground();
  if (law.is_discrete()) {
    double s = 0.0;
    for (const auto& a : law.atoms()) {
      s += a.weight * (a.energy - g) * std::exp(-beta * (a.energy - g));
    }
    return s;
  }
  return integrate_segments(
      [&law, beta, g](double x) {
        return law.density(x) * (x - g) * std::exp(-beta * (x - g));
      },
      law.knots(), kQuadRel);
}

}  // namespace

double log_partition(const EnergyLaw& law, double beta) {
  require_beta(beta);
  if (beta == 0.0) return 0.0;  // Z(0) = 1 by normalization
  return -beta * law.ground() + std::log(shifted_partition(law, beta));
}

double specific_energy(const EnergyLaw& law, double beta) {
  require_beta(beta);
  if (beta == 0.0) return law.mean();
  return law.ground() +
         shifted_first_moment(law, beta) / shifted_partition(law, beta);
}

double energy_variance(const EnergyLaw& law, double beta) {
  require_beta(beta);
  if (beta == 0.0) return law.variance();
  const double e = specific_energy(law, beta);
  const double g = law.ground();
  double num;
  if (law.is_discrete()) {
    num = 0.0;
    for (const auto& a : law.atoms()) {
      num += a.weight * (a.energy - e) * (a.energy - e) *
             std::exp(-beta * (a.energy - g));
    }
  } else {
    num = integrate_segments(
        [&law, beta, g, e](double x) {
          return law.density(x) * (x - e) * (x - e) * std::exp(-beta * (x - g));
        },
        law.knots(), kQuadRel);
  }
  return std::max(0.0, num / shifted_partition(law, beta));
}

double heat_capacity(const EnergyLaw& law, double beta, double k_b) {
  return k_b * beta * beta * energy_variance(law, beta);
}

double entropy_from_beta(const EnergyLaw& law, double beta, double k_b) {
  require_beta(beta);
  if (beta == 0.0) return 0.0;
  return k_b * (beta * specific_energy(law, beta) + log_partition(law, beta));
}

double invert_beta(const EnergyLaw& law, double energy) {
  const double mean = law.mean();
  const double ground = law.ground();
  const double width = law.ceiling() - ground;

  if (width == 0.0 || law.variance() == 0.0) {
    // degenerate law: E(beta) is constant
    if (energy == mean) return 0.0;
    throw DomainError("invert_beta: law is degenerate; only E = mean is "
                      "reachable");
  }
  if (energy > mean) {
    throw DomainError("invert_beta: energy above the law mean requires "
                      "beta < 0 (out of scope)");
  }
  if (energy == mean) return 0.0;
  if (!(energy > ground)) {
    throw DomainError("invert_beta: energy at or below the ground level is "
                      "unreachable (zero-temperature limit)");
  }

  const double beta_cap = 1e6 / width;
  double lo = 0.0;             // E(lo) >= energy
  double hi = 1.0 / width;
  while (specific_energy(law, hi) > energy) {
    lo = hi;
    hi *= 2.0;
    if (hi > beta_cap) {
      throw DomainError("invert_beta: energy below the reachable infimum "
                        "(law incomplete near the ground level)");
    }
  }

  // safeguarded Newton on f(beta) = E(beta) - energy, f' = -variance
  double beta = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = specific_energy(law, beta) - energy;
    if (f == 0.0) return beta;
    if (f > 0.0) lo = beta; else hi = beta;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(beta))) {
      break;
    }
    const double var = energy_variance(law, beta);
    double next = var > 0.0 ? beta + f / var : beta;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    beta = next;
  }
  return beta;
}

double entropy_of_energy(const EnergyLaw& law, double energy, double k_b) {
  const double beta = invert_beta(law, energy);
  return k_b * (beta * energy + log_partition(law, beta));
}

EnergyLaw esscher_tilt(const EnergyLaw& law, double beta) {
  require_beta(beta);
  return EnergyLaw::tilted(law, beta);
}

double chernoff_rate(const EnergyLaw& law, double energy) {
  if (energy >= law.mean()) return 0.0;  // infimum attained at beta = 0
  if (!(energy > law.ground())) return -kInf;
  const double beta = invert_beta(law, energy);
  return beta * energy + log_partition(law, beta);
}

EquationOfState eos_scan(const EnergyLaw& law, std::span<const double> grid,
                         GridKind kind, double k_b) {
  if (grid.empty()) throw DomainError("eos_scan: empty grid");
  if (!(k_b > 0.0)) throw DomainError("eos_scan: k_B must be positive");
  EquationOfState eos;
  eos.law = law.descriptor();
  eos.k_b = k_b;
  eos.entries.reserve(grid.size());
  for (const double v : grid) {
    EosEntry entry;
    entry.input = v;
    try {
      const double beta = (kind == GridKind::beta) ? v : invert_beta(law, v);
      require_beta(beta);
      const double log_z = log_partition(law, beta);
      const double e = specific_energy(law, beta);
      const double var = energy_variance(law, beta);
      ThermoPoint p;
      p.beta = beta;
      p.log_z = log_z;
      p.energy = e;
      p.entropy = beta == 0.0 ? 0.0 : k_b * (beta * e + log_z);
      p.heat_capacity = k_b * beta * beta * var;
      p.temperature = beta > 0.0 ? 1.0 / (k_b * beta) : kInf;
      entry.point = p;
    } catch (const DomainError& err) {
      std::ostringstream os;
      os << "grid value " << v << ": " << err.what();
      entry.error = os.str();
    }
    eos.entries.push_back(std::move(entry));
  }
  return eos;
}

}  // namespace qbath
