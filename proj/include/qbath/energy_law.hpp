#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qbath/rng.hpp"
#include "qbath/spectrum.hpp"

namespace qbath {

/// Probability law of the molecular energy H(x) induced by an a priori
/// measure on the state space. Either a finite list of atoms or a density
/// on a compact support. Immutable after construction and cheap to copy.
class EnergyLaw {
 public:
  struct Atom {
    double energy;
    double weight;
  };

  struct ContinuousSpec {
    std::vector<double> knots;  // sorted; front/back delimit the support
    std::function<double(double)> density;
    std::function<double(Xoshiro256pp&)> sampler;  // optional
    std::optional<std::pair<double, double>> moments;  // analytic mean/var
    std::string descriptor = "continuous";
  };

  /// Atoms are sorted, equal energies merged, weights validated to be
  /// strictly positive and to sum to 1 within 1e-10.
  static EnergyLaw discrete(std::vector<Atom> atoms,
                            std::string descriptor = "discrete");

  /// Density validated nonnegative and normalized to 1 within 1e-10.
  static EnergyLaw continuous(ContinuousSpec spec);

  bool is_discrete() const;
  const std::vector<Atom>& atoms() const;    // discrete laws only
  const std::vector<double>& knots() const;  // continuous laws only
  double density(double e) const;            // continuous laws only

  double ground() const;   // essential infimum of H
  double ceiling() const;  // essential supremum of H
  double mean() const;
  double variance() const;
  const std::string& descriptor() const;

  /// P[H <= e]; 0 below ground, 1 at and above ceiling.
  double cdf(double e) const;

  /// One draw of H. Continuous laws without a sampler use rejection from a
  /// piecewise-constant envelope (density must be bounded).
  double sample(Xoshiro256pp& rng) const;

  /// Law reweighted by e^{-beta H}/Z(beta) (Esscher transform); the public
  /// entry point is thermo's esscher_tilt.
  static EnergyLaw tilted(const EnergyLaw& base, double beta);

 private:
  struct Impl;
  explicit EnergyLaw(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Measure concentrated on the energy eigenstates: one atom per level with
/// weight multiplicity/r.
EnergyLaw dirac_law(const Spectrum& spectrum);

/// Law of H under the unitary-invariant volume measure on pure states:
/// the weight vector on the levels is flat-Dirichlet, so the energy density
/// is the normalized B-spline with the eigenvalues as knots (multiplicities
/// giving repeated knots). r = 1 degenerates to a point mass.
EnergyLaw haar_law(const Spectrum& spectrum);

/// iid draws of H(x) for Haar-random pure states: r unit-rate exponential
/// weights (one per Hilbert-space dimension, equal in law to the squared
/// magnitudes of standard complex Gaussians), normalized and contracted
/// with the energies. count = 0 yields an empty list.
std::vector<double> sample_haar_energy(const Spectrum& spectrum,
                                       RngStream stream, std::int64_t count);

/// Mean and variance recomputed from the stored representation: closed-form
/// sums for atoms, quadrature for densities. For laws carrying analytic
/// moments this is an independent cross-check of those values.
std::pair<double, double> law_moments(const EnergyLaw& law);

struct CompletenessWitness {
  double epsilon;
  double prob_below;  // P[H < epsilon]
};

struct CompletenessReport {
  bool complete = false;
  std::vector<CompletenessWitness> witnesses;
};

/// Probes P[H < eps] for the user epsilons plus a geometric default ladder
/// eps_k = E- + (E+ - E-) * 10^-k, k = 1..9. Every probe must be > E- of
/// the spectrum. A finite probe list is a witness report, not a proof of
/// the universally quantified condition.
CompletenessReport completeness_check(const Spectrum& spectrum,
                                      const EnergyLaw& law,
                                      std::span<const double> epsilons);

}  // namespace qbath
