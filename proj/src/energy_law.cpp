#include "qbath/energy_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qbath/errors.hpp"
#include "qbath/kernels.hpp"
#include "qbath/quadrature.hpp"

namespace qbath {

namespace {

constexpr double kNormTol = 1e-10;
constexpr int kMaxHaarDim = 1024;

/// Single normalized B-spline basis over the full knot vector, evaluated by
/// the Cox-de Boor recurrence (stable for any knot configuration, repeated
/// knots included). Degree = knots.size() - 2.
double bspline_basis(const std::vector<double>& t, double x) {
  const std::size_t r = t.size();
  if (x < t.front() || x > t.back()) return 0.0;
  std::vector<double> n(r - 1, 0.0);
  // degree-0 spans are half-open except the last nonempty one
  std::size_t last_span = 0;
  for (std::size_t i = 0; i + 1 < r; ++i) {
    if (t[i + 1] > t[i]) last_span = i;
  }
  for (std::size_t i = 0; i + 1 < r; ++i) {
    const bool inside = (x >= t[i] && x < t[i + 1]) ||
                        (i == last_span && x >= t[i] && x <= t[i + 1]);
    n[i] = inside ? 1.0 : 0.0;
  }
  const std::size_t degree = r - 2;
  for (std::size_t j = 1; j <= degree; ++j) {
    for (std::size_t i = 0; i + j + 1 < r; ++i) {
      double left = 0.0;
      const double dl = t[i + j] - t[i];
      if (dl > 0.0) left = (x - t[i]) / dl * n[i];
      double right = 0.0;
      const double dr = t[i + j + 1] - t[i + 1];
      if (dr > 0.0) right = (t[i + j + 1] - x) / dr * n[i + 1];
      n[i] = left + right;
    }
  }
  return n[0];
}

}  // namespace

struct EnergyLaw::Impl {
  bool discrete = true;

  // discrete representation
  std::vector<Atom> atoms;
  std::vector<double> weight_prefix;  // prefix sums of weights

  // continuous representation
  std::vector<double> knots;
  std::function<double(double)> density;
  std::function<double(Xoshiro256pp&)> sampler;
  std::vector<double> knot_cdf;   // CDF at each knot
  double envelope_height = 0.0;   // sup density estimate for rejection

  double ground = 0.0;
  double ceiling = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  std::string descriptor;
};

EnergyLaw::EnergyLaw(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

EnergyLaw EnergyLaw::discrete(std::vector<Atom> atoms,
                              std::string descriptor) {
  if (atoms.empty()) throw DomainError("law: at least one atom required");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.energy < b.energy; });
  // merge equal energies; the law of H is unchanged
  std::vector<Atom> merged;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.energy)) throw DomainError("law: non-finite energy");
    if (!(a.weight > 0.0)) {
      throw DomainError("law: atom weights must be strictly positive");
    }
    if (!merged.empty() && merged.back().energy == a.energy) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  double total = 0.0;
  for (const Atom& a : merged) total += a.weight;
  if (std::abs(total - 1.0) > kNormTol) {
    throw DomainError("law: atom weights must sum to 1 (got " +
                      std::to_string(total) + ")");
  }

  auto impl = std::make_shared<Impl>();
  impl->discrete = true;
  impl->atoms = std::move(merged);
  impl->weight_prefix.reserve(impl->atoms.size());
  double acc = 0.0;
  double mean = 0.0;
  for (const Atom& a : impl->atoms) {
    acc += a.weight;
    impl->weight_prefix.push_back(acc);
    mean += a.weight * a.energy;
  }
  double var = 0.0;
  for (const Atom& a : impl->atoms) {
    var += a.weight * (a.energy - mean) * (a.energy - mean);
  }
  impl->ground = impl->atoms.front().energy;
  impl->ceiling = impl->atoms.back().energy;
  impl->mean = mean;
  impl->variance = var;
  impl->descriptor = std::move(descriptor);
  return EnergyLaw(std::move(impl));
}

EnergyLaw EnergyLaw::continuous(ContinuousSpec spec) {
  if (spec.knots.size() < 2) {
    throw DomainError("law: continuous support needs at least two knots");
  }
  if (!std::is_sorted(spec.knots.begin(), spec.knots.end())) {
    throw DomainError("law: knots must be sorted");
  }
  if (!(spec.knots.back() > spec.knots.front())) {
    throw DomainError("law: continuous support must have positive width");
  }
  if (!spec.density) throw DomainError("law: density required");

  auto impl = std::make_shared<Impl>();
  impl->discrete = false;
  impl->knots = std::move(spec.knots);
  impl->density = std::move(spec.density);
  impl->sampler = std::move(spec.sampler);

  // normalization + knot CDF + nonnegativity probing in one sweep
  bool negative = false;
  double peak = 0.0;
  const auto& f = impl->density;
  auto probed = [&](double x) {
    const double v = f(x);
    if (v < -1e-12) negative = true;
    peak = std::max(peak, v);
    return v;
  };
  impl->knot_cdf.resize(impl->knots.size());
  double acc = 0.0;
  impl->knot_cdf[0] = 0.0;
  for (std::size_t i = 0; i + 1 < impl->knots.size(); ++i) {
    acc += integrate(probed, impl->knots[i], impl->knots[i + 1], 1e-12);
    impl->knot_cdf[i + 1] = acc;
  }
  if (negative) throw DomainError("law: density is negative on the support");
  if (std::abs(acc - 1.0) > kNormTol) {
    throw DomainError("law: density must integrate to 1 (got " +
                      std::to_string(acc) + ")");
  }
  impl->envelope_height = peak * 1.0625 + 1e-300;

  impl->ground = impl->knots.front();
  impl->ceiling = impl->knots.back();
  if (spec.moments.has_value()) {
    impl->mean = spec.moments->first;
    impl->variance = spec.moments->second;
  } else {
    const double m =
        integrate_segments([&](double x) { return x * f(x); }, impl->knots,
                           1e-12);
    const double v = integrate_segments(
        [&](double x) { return (x - m) * (x - m) * f(x); }, impl->knots,
        1e-12);
    impl->mean = m;
    impl->variance = std::max(0.0, v);
  }
  impl->descriptor = std::move(spec.descriptor);
  return EnergyLaw(std::move(impl));
}

bool EnergyLaw::is_discrete() const { return impl_->discrete; }

const std::vector<EnergyLaw::Atom>& EnergyLaw::atoms() const {
  if (!impl_->discrete) throw DomainError("law: not a discrete law");
  return impl_->atoms;
}

const std::vector<double>& EnergyLaw::knots() const {
  if (impl_->discrete) throw DomainError("law: not a continuous law");
  return impl_->knots;
}

double EnergyLaw::density(double e) const {
  if (impl_->discrete) throw DomainError("law: not a continuous law");
  return impl_->density(e);
}

double EnergyLaw::ground() const { return impl_->ground; }
double EnergyLaw::ceiling() const { return impl_->ceiling; }
double EnergyLaw::mean() const { return impl_->mean; }
double EnergyLaw::variance() const { return impl_->variance; }
const std::string& EnergyLaw::descriptor() const { return impl_->descriptor; }

double EnergyLaw::cdf(double e) const {
  if (e < impl_->ground) return 0.0;
  if (e >= impl_->ceiling) return 1.0;
  if (impl_->discrete) {
    // P[H <= e]: atoms at energy exactly e are included
    const auto& a = impl_->atoms;
    std::size_t lo = 0, hi = a.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (a[mid].energy <= e) lo = mid + 1; else hi = mid;
    }
    return lo == 0 ? 0.0 : impl_->weight_prefix[lo - 1];
  }
  const auto& k = impl_->knots;
  const auto it = std::upper_bound(k.begin(), k.end(), e);
  const std::size_t seg = static_cast<std::size_t>(it - k.begin()) - 1;
  double p = impl_->knot_cdf[seg];
  if (e > k[seg]) p += integrate(impl_->density, k[seg], e, 1e-12);
  return std::min(1.0, std::max(0.0, p));
}

double EnergyLaw::sample(Xoshiro256pp& rng) const {
  if (impl_->discrete) {
    const double u = rng.u01();
    const auto& pre = impl_->weight_prefix;
    std::size_t lo = 0, hi = pre.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (u < pre[mid]) hi = mid; else lo = mid + 1;
    }
    return impl_->atoms[lo].energy;
  }
  if (impl_->sampler) return impl_->sampler(rng);
  // rejection from a flat envelope over the support
  const double a = impl_->ground, b = impl_->ceiling;
  for (;;) {
    const double x = a + (b - a) * rng.u01();
    const double u = rng.u01() * impl_->envelope_height;
    if (u <= impl_->density(x)) return x;
  }
}

EnergyLaw EnergyLaw::tilted(const EnergyLaw& base, double beta) {
  if (beta == 0.0) return base;
  const double g = base.ground();
  if (base.is_discrete()) {
    std::vector<Atom> atoms;
    atoms.reserve(base.atoms().size());
    double norm = 0.0;
    for (const Atom& a : base.atoms()) {
      const double w = a.weight * std::exp(-beta * (a.energy - g));
      norm += w;
      atoms.push_back({a.energy, w});
    }
    for (Atom& a : atoms) a.weight /= norm;
    std::ostringstream os;
    os << base.descriptor() << "|tilt(" << beta << ")";
    return discrete(std::move(atoms), os.str());
  }
  const double zs = integrate_segments(
      [base, beta, g](double x) {
        return base.density(x) * std::exp(-beta * (x - g));
      },
      base.knots(), 1e-12);
  ContinuousSpec spec;
  spec.knots = base.knots();
  spec.density = [base, beta, g, zs](double x) {
    return base.density(x) * std::exp(-beta * (x - g)) / zs;
  };
  spec.sampler = [base, beta, g](Xoshiro256pp& rng) {
    for (;;) {
      const double x = base.sample(rng);
      if (rng.u01() <= std::exp(-beta * (x - g))) return x;
    }
  };
  std::ostringstream os;
  os << base.descriptor() << "|tilt(" << beta << ")";
  spec.descriptor = os.str();
  return continuous(std::move(spec));
}

EnergyLaw dirac_law(const Spectrum& spectrum) {
  const double r = spectrum.dimension();
  std::vector<EnergyLaw::Atom> atoms;
  atoms.reserve(spectrum.levels().size());
  for (const Level& lv : spectrum.levels()) {
    atoms.push_back({lv.energy, lv.multiplicity / r});
  }
  return EnergyLaw::discrete(std::move(atoms),
                             "dirac(" + spectrum.to_text() + ")");
}

EnergyLaw haar_law(const Spectrum& spectrum) {
  const int r = spectrum.dimension();
  const std::string name = "haar(" + spectrum.to_text() + ")";
  if (r == 1 || spectrum.width() == 0.0) {
    return EnergyLaw::discrete({{spectrum.ground(), 1.0}}, name);
  }
  if (r > kMaxHaarDim) {
    throw ResourceError("haar_law: dimension above analytic-density bound");
  }
  auto knots = std::make_shared<std::vector<double>>();
  knots->reserve(r);
  for (const Level& lv : spectrum.levels()) {
    for (int m = 0; m < lv.multiplicity; ++m) knots->push_back(lv.energy);
  }
  const double scale = (r - 1) / (knots->back() - knots->front());

  EnergyLaw::ContinuousSpec spec;
  // knot list for integration segments: distinct energies only
  for (const Level& lv : spectrum.levels()) spec.knots.push_back(lv.energy);
  spec.density = [knots, scale](double x) {
    return scale * bspline_basis(*knots, x);
  };
  spec.sampler = [knots](Xoshiro256pp& rng) {
    for (;;) {
      double sw = 0.0, se = 0.0;
      for (const double e : *knots) {
        const double w = -std::log1p(-rng.u01());
        sw += w;
        se += w * e;
      }
      if (sw > 0.0) return se / sw;
    }
  };
  const double mean = spectrum.trace() / r;
  const double second = spectrum.trace_sq() / r;
  spec.moments = {{mean, (second - mean * mean) / (r + 1)}};
  spec.descriptor = name;
  return EnergyLaw::continuous(std::move(spec));
}

std::vector<double> sample_haar_energy(const Spectrum& spectrum,
                                       RngStream stream, std::int64_t count) {
  if (count < 0) throw DomainError("sample_haar_energy: negative count");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 0) return out;

  const int r = spectrum.dimension();
  std::vector<double> energies;
  energies.reserve(r);
  for (const Level& lv : spectrum.levels()) {
    for (int m = 0; m < lv.multiplicity; ++m) energies.push_back(lv.energy);
  }

  const auto& k = kernels::active();
  constexpr std::size_t kChunk = 1024;
  std::vector<double> buf(kChunk * static_cast<std::size_t>(r));
  std::vector<double> logs(buf.size());
  std::size_t done = 0;
  while (done < out.size()) {
    const std::size_t m = std::min(kChunk, out.size() - done);
    for (std::size_t i = 0; i < m; ++i) {
      Xoshiro256pp rng = make_rng(stream.seed,
                                  {stream.stream_id, rng_use::kHaarSample,
                                   static_cast<std::uint64_t>(done + i)});
      for (int j = 0; j < r; ++j) {
        buf[i * r + j] = 1.0 - rng.u01();  // in (0, 1]
      }
    }
    k.log_pos(buf.data(), logs.data(), m * static_cast<std::size_t>(r));
    for (std::size_t i = 0; i < m; ++i) {
      double sw = 0.0, se = 0.0;
      for (int j = 0; j < r; ++j) {
        const double w = -logs[i * r + j];
        sw += w;
        se += w * energies[static_cast<std::size_t>(j)];
      }
      // sw == 0 requires every u == 0; fall back to equal weights
      out[done + i] = sw > 0.0 ? se / sw : spectrum.trace() / r;
    }
    done += m;
  }
  return out;
}

std::pair<double, double> law_moments(const EnergyLaw& law) {
  if (law.is_discrete()) {
    double mean = 0.0;
    for (const auto& a : law.atoms()) mean += a.weight * a.energy;
    double var = 0.0;
    for (const auto& a : law.atoms()) {
      var += a.weight * (a.energy - mean) * (a.energy - mean);
    }
    return {mean, var};
  }
  const double m = integrate_segments(
      [&](double x) { return x * law.density(x); }, law.knots(), 1e-12);
  const double v = integrate_segments(
      [&](double x) { return (x - m) * (x - m) * law.density(x); },
      law.knots(), 1e-12);
  return {m, std::max(0.0, v)};
}

namespace {

double prob_strictly_below(const EnergyLaw& law, double eps) {
  if (law.is_discrete()) {
    double p = 0.0;
    for (const auto& a : law.atoms()) {
      if (a.energy < eps) p += a.weight;
    }
    return p;
  }
  return law.cdf(eps);  // atomless
}

}  // namespace

CompletenessReport completeness_check(const Spectrum& spectrum,
                                      const EnergyLaw& law,
                                      std::span<const double> epsilons) {
  const double ground = spectrum.ground();
  for (const double eps : epsilons) {
    if (!(eps > ground)) {
      throw DomainError("completeness_check: probe epsilon must exceed the "
                        "ground energy");
    }
  }
  std::vector<double> probes(epsilons.begin(), epsilons.end());
  const double scale = spectrum.width() > 0.0 ? spectrum.width() : 1.0;
  double step = 0.1;
  for (int kk = 1; kk <= 9; ++kk, step *= 0.1) {
    probes.push_back(ground + scale * step);
  }
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

  CompletenessReport report;
  report.complete = true;
  report.witnesses.reserve(probes.size());
  for (const double eps : probes) {
    const double p = prob_strictly_below(law, eps);
    report.witnesses.push_back({eps, p});
    if (!(p > 0.0)) report.complete = false;
  }
  return report;
}

}  // namespace qbath
