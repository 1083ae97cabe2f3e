#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbath/energy_law.hpp"
#include "qbath/rng.hpp"

namespace qbath {

/// A bath of n iid molecules, each with the given single-molecule energy law.
struct BathSpec {
  EnergyLaw law;
  std::int64_t n = 1;
};

enum class TailMethod { exact_dp, irwin_hall, mc_naive, mc_tilted };

const char* tail_method_name(TailMethod m);

struct TailEvent {
  double upper;                 // {avg <= upper}
  std::optional<double> lower;  // {lower <= avg <= upper} when banded
};

/// (1/n) log P over the event, with statistical error for MC methods.
struct TailEstimate {
  double value = 0.0;      // -inf with zero_hits set when nothing qualified
  double std_error = 0.0;  // 0 for exact methods
  TailMethod method = TailMethod::exact_dp;
  TailEvent event{0.0, std::nullopt};
  std::int64_t n = 1;
  std::int64_t samples = 0;  // 0 for exact methods
  bool zero_hits = false;
};

struct McRun {
  std::int64_t samples = 0;
  RngStream stream;
  int threads = 1;
};

/// Exact (1/n) log P[avg <= energy] by log-domain convolution over the
/// atom lattice; two-atom laws reduce to a log-domain binomial CDF.
TailEstimate exact_discrete_tail(const BathSpec& spec, double energy);

/// Exact tail for the two-level Haar (uniform) law via the Irwin-Hall CDF.
/// n <= 30: the alternating sum loses precision beyond that.
TailEstimate irwin_hall_tail(const BathSpec& spec, double energy);

/// Naive hit counting; zero hits are flagged rather than mapped to a number.
TailEstimate mc_tail(const BathSpec& spec, double energy, const McRun& run);

/// Importance sampling at the dominating point: molecules are drawn from the
/// law tilted to beta* = invert_beta(law, energy), where the sample average
/// concentrates at the target energy, and the unbiased weight
/// Z(beta*)^n e^{beta* sum} is averaged over qualifying samples.
TailEstimate tilted_tail(const BathSpec& spec, double energy,
                         const McRun& run);

enum class MethodChoice { auto_select, exact, mc, tilted };

/// Picks the estimator `auto` would run: exact lattice convolution where the
/// preconditions hold, Irwin-Hall for the two-level uniform law at small n,
/// tilted MC for rare lower tails, naive MC otherwise.
TailMethod resolve_method(const BathSpec& spec, double energy,
                          MethodChoice choice);

/// (1/n) log P[energy-delta <= avg <= energy] as a difference of two
/// lower-tail evaluations in log domain (exact methods use log-diff-exp;
/// MC methods evaluate both tails on common samples).
TailEstimate shell_entropy(const BathSpec& spec, double energy, double delta,
                           MethodChoice choice,
                           const std::optional<McRun>& run = std::nullopt);

struct ConvergenceRow {
  std::int64_t n;
  TailEstimate estimate;
  double bound;  // n-independent Chernoff bound (nats)
  double gap;    // bound - estimate.value, >= 0
};

/// S^(n)(E) across an ascending n list with the Chernoff bound per row.
std::vector<ConvergenceRow> convergence_study(
    const EnergyLaw& law, double energy, std::span<const std::int64_t> n_list,
    MethodChoice choice, const std::optional<McRun>& run = std::nullopt);

struct ChebyshevReport {
  double bound;      // min(1, variance/(n delta^2))
  double empirical;  // MC estimate of P[|avg - mean| >= delta]
  double std_error;
  std::int64_t n;
  std::int64_t samples;
};

ChebyshevReport chebyshev_bound(const EnergyLaw& law, std::int64_t n,
                                double delta, const McRun& run);

namespace detail {
/// General lattice convolution without the two-atom binomial reduction;
/// kept callable so tests can compare the two independent implementations.
TailEstimate exact_tail_general_dp(const BathSpec& spec, double energy);
}  // namespace detail

}  // namespace qbath
