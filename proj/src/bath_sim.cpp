#include "qbath/bath_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "qbath/errors.hpp"
#include "qbath/kernels.hpp"
#include "qbath/thermo.hpp"

namespace qbath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kWorkBound = 100000000;   // lattice cells * molecules
constexpr std::int64_t kBinomialBound = 10000000;  // O(n) reduction
constexpr int kMaxIrwinHall = 30;
constexpr std::size_t kChunk = 4096;

void require_n(const BathSpec& spec) {
  if (spec.n < 1) throw DomainError("bath: molecule count must be >= 1");
}

// ---------------------------------------------------------------------------
// lattice machinery

struct Lattice {
  double base = 0.0;     // lowest atom energy
  double spacing = 0.0;  // g > 0 (two or more atoms)
  std::vector<std::int64_t> offsets;  // per atom, offsets[0] == 0
  std::vector<double> log_w;
  std::int64_t kmax = 0;
};

double real_gcd(double a, double b, double tol) {
  while (b > tol) {
    double r = std::fmod(a, b);
    if (r < tol || b - r < tol) r = 0.0;
    const double next = r;
    a = b;
    b = next;
  }
  return a;
}

std::optional<Lattice> detect_lattice(const EnergyLaw& law) {
  const auto& atoms = law.atoms();
  Lattice lat;
  lat.base = atoms.front().energy;
  for (const auto& a : atoms) lat.log_w.push_back(std::log(a.weight));
  if (atoms.size() == 1) {
    lat.offsets = {0};
    return lat;
  }
  std::vector<double> diffs;
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    diffs.push_back(atoms[i].energy - lat.base);
  }
  double g = diffs[0];
  const double tol = 1e-12 * diffs.back();
  for (const double d : diffs) g = real_gcd(std::max(g, d), std::min(g, d), tol);
  if (!(g > 0.0)) return std::nullopt;
  // accepted only if every atom sits within 1e-9 of a lattice point
  lat.spacing = g;
  lat.offsets = {0};
  for (const double d : diffs) {
    const double q = d / g;
    const double k = std::round(q);
    if (std::abs(q - k) > 1e-9 || k > 9.0e15) return std::nullopt;
    lat.offsets.push_back(static_cast<std::int64_t>(k));
  }
  lat.kmax = lat.offsets.back();
  return lat;
}

/// Largest lattice index K with base + K*g/n <= energy, boundary included
/// (closed inequality, 1e-9 lattice-unit slack).
std::int64_t cutoff_index(const Lattice& lat, std::int64_t n, double energy) {
  const double v = (energy - lat.base) * static_cast<double>(n) / lat.spacing;
  return static_cast<std::int64_t>(
      std::floor(v + 1e-9 * std::max(1.0, std::abs(v))));
}

/// log P[K_sum <= kcut] for the n-fold lattice sum, two-atom binomial form.
double binomial_prefix_logp(const Lattice& lat, std::int64_t n,
                            std::int64_t kcut) {
  if (kcut < 0) return -kInf;
  const std::int64_t mmax = std::min(n, kcut / lat.offsets[1]);
  const double lw0 = lat.log_w[0], lw1 = lat.log_w[1];
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  std::vector<double> terms(static_cast<std::size_t>(mmax) + 1);
  for (std::int64_t m = 0; m <= mmax; ++m) {
    const double dm = static_cast<double>(m);
    terms[static_cast<std::size_t>(m)] =
        lgn - std::lgamma(dm + 1.0) -
        std::lgamma(static_cast<double>(n - m) + 1.0) + dm * lw1 +
        static_cast<double>(n - m) * lw0;
  }
  const auto& k = kernels::active();
  const double m = k.max(terms.data(), terms.size());
  std::vector<double> ex(terms.size());
  k.exp_shift(terms.data(), -m, ex.data(), ex.size());
  return m + std::log(k.sum(ex.data(), ex.size()));
}

/// log P[K_sum <= kcut] by log-domain convolution (any atom count).
double dp_prefix_logp(const Lattice& lat, std::int64_t n, std::int64_t kcut) {
  if (kcut < 0) return -kInf;
  const auto& k = kernels::active();
  const std::size_t final_size = static_cast<std::size_t>(n * lat.kmax + 1);
  std::vector<double> cur(final_size, -kInf), next(final_size, -kInf);
  for (std::size_t a = 0; a < lat.offsets.size(); ++a) {
    cur[static_cast<std::size_t>(lat.offsets[a])] = lat.log_w[a];
  }
  std::size_t cur_size = static_cast<std::size_t>(lat.kmax) + 1;
  for (std::int64_t m = 2; m <= n; ++m) {
    const std::size_t next_size =
        static_cast<std::size_t>(m * lat.kmax) + 1;
    std::fill(next.begin(), next.begin() + next_size, -kInf);
    for (std::size_t a = 0; a < lat.offsets.size(); ++a) {
      k.logaddexp_acc(next.data() + lat.offsets[a], cur.data(), lat.log_w[a],
                      cur_size);
    }
    cur.swap(next);
    cur_size = next_size;
  }
  const std::size_t take =
      std::min(cur_size, static_cast<std::size_t>(kcut) + 1);
  const double m = k.max(cur.data(), take);
  if (m == -kInf) return -kInf;
  std::vector<double> ex(take);
  k.exp_shift(cur.data(), -m, ex.data(), take);
  return m + std::log(k.sum(ex.data(), take));
}

struct ExactPaths {
  Lattice lat;
  bool use_binomial;
};

ExactPaths exact_setup(const BathSpec& spec) {
  if (!spec.law.is_discrete()) {
    throw DomainError("exact_discrete_tail: law must be discrete");
  }
  auto lat = detect_lattice(spec.law);
  if (!lat.has_value()) {
    throw IncommensurateError(
        "exact_discrete_tail: atom energies are not commensurate on a "
        "lattice; use Monte Carlo");
  }
  const bool two = lat->offsets.size() == 2;
  if (two) {
    if (spec.n > kBinomialBound) {
      throw ResourceError("exact_discrete_tail: n above binomial work bound");
    }
  } else if (lat->kmax > 0) {
    const double cells = static_cast<double>(spec.n) *
                             static_cast<double>(lat->kmax) +
                         1.0;
    if (static_cast<double>(spec.n) * cells >
        static_cast<double>(kWorkBound)) {
      throw ResourceError("exact_discrete_tail: lattice work bound exceeded "
                          "(n * lattice cells > 1e8); use tilted MC");
    }
  }
  return {std::move(*lat), two};
}

double exact_prefix(const ExactPaths& p, std::int64_t n, std::int64_t kcut);

/// log P[avg <= energy] with the trivial regions short-circuited.
double exact_upper_logp(const ExactPaths& p, const BathSpec& spec,
                        double energy) {
  if (energy >= spec.law.ceiling()) return 0.0;
  if (energy < spec.law.ground()) return -kInf;
  return exact_prefix(p, spec.n, cutoff_index(p.lat, spec.n, energy));
}

/// log P[avg < x] (strict); lattice points at exactly x are excluded.
double exact_below_logp(const ExactPaths& p, const BathSpec& spec, double x) {
  if (x > spec.law.ceiling()) return 0.0;
  if (x <= spec.law.ground()) return -kInf;
  const double v = (x - p.lat.base) * static_cast<double>(spec.n) /
                   p.lat.spacing;
  const std::int64_t klo = static_cast<std::int64_t>(
      std::ceil(v - 1e-9 * std::max(1.0, std::abs(v))));
  return exact_prefix(p, spec.n, klo - 1);
}

double exact_prefix(const ExactPaths& p, std::int64_t n, std::int64_t kcut) {
  if (p.lat.offsets.size() == 1) return kcut >= 0 ? 0.0 : -kInf;
  return p.use_binomial ? binomial_prefix_logp(p.lat, n, kcut)
                        : dp_prefix_logp(p.lat, n, kcut);
}

TailEstimate make_exact(const BathSpec& spec, double energy, double log_p,
                        TailMethod method) {
  TailEstimate est;
  est.method = method;
  est.event = {energy, std::nullopt};
  est.n = spec.n;
  est.samples = 0;
  est.std_error = 0.0;
  if (log_p == -kInf) {
    est.value = -kInf;
    est.zero_hits = true;
  } else {
    est.value = std::min(0.0, log_p / static_cast<double>(spec.n));
  }
  return est;
}

// ---------------------------------------------------------------------------
// Irwin-Hall

bool is_two_level_uniform(const EnergyLaw& law) {
  if (law.is_discrete() || law.knots().size() != 2) return false;
  const double a = law.ground(), b = law.ceiling();
  const double h = 1.0 / (b - a);
  for (const double frac : {0.25, 0.5, 0.75}) {
    if (std::abs(law.density(a + frac * (b - a)) - h) > 1e-9 * h) return false;
  }
  return true;
}

/// log of the Irwin-Hall CDF at s = sum of n uniforms on [0,1].
double irwin_hall_log_cdf(std::int64_t n, double s) {
  if (s <= 0.0) return -kInf;
  if (s >= static_cast<double>(n)) return 0.0;
  long double acc = 0.0L;
  long double binom = 1.0L;  // C(n, j)
  const long double sl = static_cast<long double>(s);
  for (std::int64_t j = 0; j <= static_cast<std::int64_t>(s); ++j) {
    const long double term = binom * powl(sl - j, static_cast<long double>(n));
    acc += (j % 2 == 0) ? term : -term;
    binom = binom * (n - j) / (j + 1);
  }
  if (!(acc > 0.0L)) return -kInf;
  return static_cast<double>(logl(acc) -
                             lgammal(static_cast<long double>(n) + 1.0L));
}

double irwin_hall_prefix(const BathSpec& spec, double energy) {
  const double a = spec.law.ground(), b = spec.law.ceiling();
  const double s = static_cast<double>(spec.n) * (energy - a) / (b - a);
  return irwin_hall_log_cdf(spec.n, s);
}

void require_irwin_hall(const BathSpec& spec) {
  if (!is_two_level_uniform(spec.law)) {
    throw DomainError("irwin_hall_tail: law is not the two-level uniform "
                      "(Haar) law");
  }
  if (spec.n > kMaxIrwinHall) {
    throw ResourceError("irwin_hall_tail: n above the alternating-sum bound "
                        "(30); use tilted MC");
  }
}

// ---------------------------------------------------------------------------
// chunked Monte Carlo; per-sample generators keep every partition of the
// work bit-identical

struct DrawTables {
  std::vector<double> cum;  // thresholds, size atoms-1
  std::vector<double> inc;  // energy increments
  double base = 0.0;
  bool discrete = false;
};

DrawTables make_tables(const EnergyLaw& law) {
  DrawTables t;
  t.discrete = law.is_discrete();
  if (!t.discrete) return t;
  const auto& atoms = law.atoms();
  t.base = atoms.front().energy;
  double acc = 0.0;
  for (std::size_t a = 0; a + 1 < atoms.size(); ++a) {
    acc += atoms[a].weight;
    t.cum.push_back(acc);
    t.inc.push_back(atoms[a + 1].energy - atoms[a].energy);
  }
  return t;
}

void chunk_sums(const EnergyLaw& law, const DrawTables& t, std::int64_t n,
                std::uint64_t seed, std::uint64_t stream, std::uint64_t tag,
                std::uint64_t first, std::size_t count, double* out) {
  if (t.discrete) {
    kernels::active().mc_discrete_sums(seed, stream, tag, first, count, n,
                                       t.cum.data(), t.inc.data(), t.base,
                                       static_cast<int>(t.cum.size()), out);
    return;
  }
  for (std::size_t i = 0; i < count; ++i) {
    Xoshiro256pp rng = make_rng(seed, {stream, tag, first + i});
    double sum = 0.0;
    for (std::int64_t j = 0; j < n; ++j) sum += law.sample(rng);
    out[i] = sum;
  }
}

/// Runs `work` over fixed-size sample chunks with `threads` workers and
/// returns per-chunk results indexed by chunk; merging in index order makes
/// the outcome independent of the worker count.
template <typename Stat, typename Work>
std::vector<Stat> run_chunks(std::int64_t samples, int threads,
                             const Work& work) {
  const std::size_t n_chunks =
      static_cast<std::size_t>((samples + static_cast<std::int64_t>(kChunk) - 1) /
                               static_cast<std::int64_t>(kChunk));
  std::vector<Stat> stats(n_chunks);
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto runner = [&]() {
    std::vector<double> buffer(kChunk);
    for (;;) {
      const std::size_t c = cursor.fetch_add(1);
      if (c >= n_chunks) break;
      const std::uint64_t first = static_cast<std::uint64_t>(c) * kChunk;
      const std::size_t count = static_cast<std::size_t>(
          std::min<std::int64_t>(static_cast<std::int64_t>(kChunk),
                                 samples - static_cast<std::int64_t>(first)));
      try {
        stats[c] = work(first, count, buffer.data());
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        cursor.store(n_chunks);
        break;
      }
    }
  };
  const int nw = std::max(1, threads);
  if (nw == 1) {
    runner();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) pool.emplace_back(runner);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return stats;
}

void require_run(const McRun& run) {
  if (run.samples < 1) throw DomainError("mc: samples must be >= 1");
}

struct CountStat {
  std::size_t upper = 0;      // sums <= upper threshold
  std::size_t below_lo = 0;   // sums strictly below lower threshold
};

TailEstimate counting_tail(const BathSpec& spec, double upper,
                           std::optional<double> lower, const McRun& run) {
  const DrawTables tables = make_tables(spec.law);
  const double thr_up = upper * static_cast<double>(spec.n);
  // sums < t  <=>  sums <= nextafter(t, -inf)
  const double thr_lo_strict =
      lower.has_value()
          ? std::nextafter(*lower * static_cast<double>(spec.n), -kInf)
          : -kInf;
  const auto& k = kernels::active();
  const auto stats = run_chunks<CountStat>(
      run.samples, run.threads,
      [&](std::uint64_t first, std::size_t count, double* buf) {
        chunk_sums(spec.law, tables, spec.n, run.stream.seed,
                   run.stream.stream_id, rng_use::kMcTail, first, count, buf);
        CountStat s;
        s.upper = k.count_le(buf, count, thr_up);
        s.below_lo =
            lower.has_value() ? k.count_le(buf, count, thr_lo_strict) : 0;
        return s;
      });
  std::size_t hits = 0;
  for (const auto& s : stats) hits += s.upper - s.below_lo;

  TailEstimate est;
  est.method = TailMethod::mc_naive;
  est.event = {upper, lower};
  est.n = spec.n;
  est.samples = run.samples;
  if (hits == 0) {
    est.value = -kInf;
    est.std_error = kInf;
    est.zero_hits = true;
    return est;
  }
  const double S = static_cast<double>(run.samples);
  const double p = static_cast<double>(hits) / S;
  est.value = std::log(p) / static_cast<double>(spec.n);
  est.std_error =
      std::sqrt(p * (1.0 - p) / S) / (p * static_cast<double>(spec.n));
  return est;
}

struct TiltStat {
  double peak = -kInf;  // max log-weight in the chunk
  double wsum = 0.0;    // sum exp(l - peak)
  double wsq = 0.0;     // sum exp(2(l - peak))
  std::size_t hits = 0;
};

TailEstimate weighted_tail(const BathSpec& spec, double upper,
                           std::optional<double> lower, const McRun& run) {
  const double ground = spec.law.ground();
  const double mean = spec.law.mean();
  if (!(upper > ground) || !(upper < mean)) {
    throw DomainError("tilted_tail: energy must lie strictly between the "
                      "ground level and the law mean");
  }
  const double beta = invert_beta(spec.law, upper);
  const double log_z = log_partition(spec.law, beta);
  const EnergyLaw tilted = esscher_tilt(spec.law, beta);
  const DrawTables tables = make_tables(tilted);

  const double nd = static_cast<double>(spec.n);
  const double thr_up = upper * nd;
  const double thr_lo = lower.has_value() ? *lower * nd : -kInf;
  const double base_logw = nd * log_z;
  const auto& k = kernels::active();

  const auto stats = run_chunks<TiltStat>(
      run.samples, run.threads,
      [&](std::uint64_t first, std::size_t count, double* buf) {
        chunk_sums(tilted, tables, spec.n, run.stream.seed,
                   run.stream.stream_id, rng_use::kTiltedTail, first, count,
                   buf);
        // log importance weight per qualifying sample
        for (std::size_t i = 0; i < count; ++i) {
          const bool hit = buf[i] <= thr_up && buf[i] >= thr_lo;
          buf[i] = hit ? base_logw + beta * buf[i] : -kInf;
        }
        TiltStat s;
        s.peak = k.max(buf, count);
        if (s.peak == -kInf) return s;
        std::vector<double> ex(count);
        k.exp_shift(buf, -s.peak, ex.data(), count);
        s.wsum = k.sum(ex.data(), count);
        s.wsq = k.dot(ex.data(), ex.data(), count);
        for (std::size_t i = 0; i < count; ++i) s.hits += (ex[i] > 0.0);
        return s;
      });

  double peak = -kInf;
  std::size_t hits = 0;
  for (const auto& s : stats) {
    peak = std::max(peak, s.peak);
    hits += s.hits;
  }
  TailEstimate est;
  est.method = TailMethod::mc_tilted;
  est.event = {upper, lower};
  est.n = spec.n;
  est.samples = run.samples;
  if (hits == 0) {
    est.value = -kInf;
    est.std_error = kInf;
    est.zero_hits = true;
    return est;
  }
  double wsum = 0.0, wsq = 0.0;
  for (const auto& s : stats) {
    if (s.peak == -kInf) continue;
    const double shift = std::exp(s.peak - peak);
    wsum += s.wsum * shift;
    wsq += s.wsq * shift * shift;
  }
  const double S = static_cast<double>(run.samples);
  est.value = (peak + std::log(wsum / S)) / nd;
  const double rel_sq =
      std::max(0.0, wsq * S / (wsum * wsum) - 1.0) / std::max(1.0, S - 1.0);
  est.std_error = std::sqrt(rel_sq) / nd;
  return est;
}

/// log(e^a - e^b) for b <= a.
double log_diff_exp(double a, double b) {
  if (b == -kInf) return a;
  if (!(b < a)) return -kInf;
  return a + std::log1p(-std::exp(b - a));
}

}  // namespace

const char* tail_method_name(TailMethod m) {
  switch (m) {
    case TailMethod::exact_dp: return "exact-dp";
    case TailMethod::irwin_hall: return "irwin-hall";
    case TailMethod::mc_naive: return "mc-naive";
    case TailMethod::mc_tilted: return "mc-tilted";
  }
  return "?";
}

TailEstimate exact_discrete_tail(const BathSpec& spec, double energy) {
  require_n(spec);
  const ExactPaths p = exact_setup(spec);
  return make_exact(spec, energy, exact_upper_logp(p, spec, energy),
                    TailMethod::exact_dp);
}

TailEstimate detail::exact_tail_general_dp(const BathSpec& spec,
                                           double energy) {
  require_n(spec);
  ExactPaths p = exact_setup(spec);
  p.use_binomial = false;
  return make_exact(spec, energy, exact_upper_logp(p, spec, energy),
                    TailMethod::exact_dp);
}

TailEstimate irwin_hall_tail(const BathSpec& spec, double energy) {
  require_n(spec);
  require_irwin_hall(spec);
  TailEstimate est = make_exact(spec, energy, irwin_hall_prefix(spec, energy),
                                TailMethod::irwin_hall);
  return est;
}

TailEstimate mc_tail(const BathSpec& spec, double energy, const McRun& run) {
  require_n(spec);
  require_run(run);
  if (energy >= spec.law.ceiling()) {
    TailEstimate est;
    est.method = TailMethod::mc_naive;
    est.event = {energy, std::nullopt};
    est.n = spec.n;
    est.samples = run.samples;
    est.value = 0.0;  // every sample qualifies
    return est;
  }
  return counting_tail(spec, energy, std::nullopt, run);
}

TailEstimate tilted_tail(const BathSpec& spec, double energy,
                         const McRun& run) {
  require_n(spec);
  require_run(run);
  return weighted_tail(spec, energy, std::nullopt, run);
}

TailMethod resolve_method(const BathSpec& spec, double energy,
                          MethodChoice choice) {
  switch (choice) {
    case MethodChoice::exact:
      return spec.law.is_discrete() ? TailMethod::exact_dp
                                    : TailMethod::irwin_hall;
    case MethodChoice::mc:
      return TailMethod::mc_naive;
    case MethodChoice::tilted:
      return TailMethod::mc_tilted;
    case MethodChoice::auto_select:
      break;
  }
  if (spec.law.is_discrete()) {
    const auto lat = detect_lattice(spec.law);
    if (lat.has_value()) {
      const bool two = lat->offsets.size() == 2;
      const std::int64_t cells = spec.n * lat->kmax + 1;
      const bool fits =
          two ? spec.n <= kBinomialBound
              : (lat->kmax == 0 || spec.n <= kWorkBound / cells);
      if (fits) return TailMethod::exact_dp;
    }
  } else if (is_two_level_uniform(spec.law) && spec.n <= kMaxIrwinHall) {
    return TailMethod::irwin_hall;
  }
  if (energy > spec.law.ground() && energy < spec.law.mean()) {
    return TailMethod::mc_tilted;
  }
  return TailMethod::mc_naive;
}

TailEstimate shell_entropy(const BathSpec& spec, double energy, double delta,
                           MethodChoice choice,
                           const std::optional<McRun>& run) {
  require_n(spec);
  if (!(delta > 0.0)) throw DomainError("shell_entropy: delta must be > 0");
  const double lower = energy - delta;
  const TailMethod method = resolve_method(spec, energy, choice);

  if (method == TailMethod::exact_dp || method == TailMethod::irwin_hall) {
    double log_up, log_below;
    if (method == TailMethod::exact_dp) {
      const ExactPaths p = exact_setup(spec);
      log_up = exact_upper_logp(p, spec, energy);
      // lattice points at exactly (energy - delta) belong to the band
      log_below = exact_below_logp(p, spec, lower);
    } else {
      require_irwin_hall(spec);
      log_up = irwin_hall_prefix(spec, energy);
      log_below = irwin_hall_prefix(spec, lower);  // atomless: < == <=
    }
    TailEstimate est = make_exact(spec, energy,
                                  log_diff_exp(log_up, log_below), method);
    est.event.lower = lower;
    return est;
  }

  if (!run.has_value()) {
    throw DomainError("shell_entropy: Monte Carlo methods need samples and "
                      "a seed");
  }
  require_run(*run);
  if (method == TailMethod::mc_tilted) {
    return weighted_tail(spec, energy, lower, *run);
  }
  return counting_tail(spec, energy, lower, *run);
}

std::vector<ConvergenceRow> convergence_study(
    const EnergyLaw& law, double energy, std::span<const std::int64_t> n_list,
    MethodChoice choice, const std::optional<McRun>& run) {
  if (n_list.empty()) throw DomainError("convergence_study: empty n list");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] <= n_list[i - 1]) {
      throw DomainError("convergence_study: n list must be ascending");
    }
  }
  const double bound = chernoff_rate(law, energy);
  std::vector<ConvergenceRow> rows;
  rows.reserve(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const BathSpec spec{law, n_list[i]};
    const TailMethod method = resolve_method(spec, energy, choice);
    TailEstimate est;
    switch (method) {
      case TailMethod::exact_dp:
        est = exact_discrete_tail(spec, energy);
        break;
      case TailMethod::irwin_hall:
        est = irwin_hall_tail(spec, energy);
        break;
      case TailMethod::mc_naive:
      case TailMethod::mc_tilted: {
        if (!run.has_value()) {
          throw DomainError("convergence_study: Monte Carlo methods need "
                            "samples and a seed");
        }
        McRun row_run = *run;
        // one substream per row
        row_run.stream.stream_id =
            derive_seed(run->stream.stream_id, {rng_use::kConvergeRowBase + i});
        est = method == TailMethod::mc_tilted
                  ? tilted_tail(spec, energy, row_run)
                  : mc_tail(spec, energy, row_run);
        break;
      }
    }
    rows.push_back({n_list[i], est, bound, bound - est.value});
  }
  return rows;
}

ChebyshevReport chebyshev_bound(const EnergyLaw& law, std::int64_t n,
                                double delta, const McRun& run) {
  if (n < 1) throw DomainError("chebyshev_bound: n must be >= 1");
  if (!(delta > 0.0)) throw DomainError("chebyshev_bound: delta must be > 0");
  require_run(run);

  ChebyshevReport rep;
  rep.n = n;
  rep.samples = run.samples;
  rep.bound = std::min(
      1.0, law.variance() / (static_cast<double>(n) * delta * delta));

  const DrawTables tables = make_tables(law);
  const double nd = static_cast<double>(n);
  const double t_lo = nd * (law.mean() - delta);
  // sums >= t  <=>  not (sums <= nextafter(t, -inf))
  const double t_hi_strict = std::nextafter(nd * (law.mean() + delta), -kInf);
  const auto& k = kernels::active();
  const auto stats = run_chunks<CountStat>(
      run.samples, run.threads,
      [&](std::uint64_t first, std::size_t count, double* buf) {
        chunk_sums(law, tables, n, run.stream.seed, run.stream.stream_id,
                   rng_use::kChebyshev, first, count, buf);
        CountStat s;
        s.upper = k.count_le(buf, count, t_lo);
        s.below_lo = count - k.count_le(buf, count, t_hi_strict);
        return s;
      });
  std::size_t outside = 0;
  for (const auto& s : stats) outside += s.upper + s.below_lo;
  const double S = static_cast<double>(run.samples);
  rep.empirical = static_cast<double>(outside) / S;
  rep.std_error = std::sqrt(rep.empirical * (1.0 - rep.empirical) / S);
  return rep;
}

}  // namespace qbath
