#include "qbath/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "qbath/bath_sim.hpp"
#include "qbath/closed_forms.hpp"
#include "qbath/energy_law.hpp"
#include "qbath/errors.hpp"
#include "qbath/spectrum.hpp"
#include "qbath/thermo.hpp"

namespace qbath::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Grid syntax: `start:stop:count[:log]` (inclusive endpoints) or a comma
/// separated list of values.
std::vector<double> parse_grid(const std::string& text) {
  auto parse_real = [](const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
      throw ParseError("grid: bad value '" + tok + "'");
    }
    return v;
  };
  if (text.empty()) throw ParseError("grid: empty specification");
  std::vector<std::string> parts;
  {
    std::size_t pos = 0;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    while (pos <= text.size()) {
      const std::size_t next = std::min(text.find(sep, pos), text.size());
      parts.push_back(text.substr(pos, next - pos));
      if (next == text.size()) break;
      pos = next + 1;
    }
    if (sep == ',') {
      std::vector<double> vals;
      vals.reserve(parts.size());
      for (const auto& p : parts) vals.push_back(parse_real(p));
      return vals;
    }
  }
  const bool log_spaced = parts.size() == 4 && parts[3] == "log";
  if (parts.size() != 3 && !log_spaced) {
    throw ParseError("grid: expected start:stop:count[:log]");
  }
  const double start = parse_real(parts[0]);
  const double stop = parse_real(parts[1]);
  const long count = std::strtol(parts[2].c_str(), nullptr, 10);
  if (count < 1 || count > 100000000) {
    throw ParseError("grid: count must be in [1, 1e8]");
  }
  if (log_spaced && !(start > 0.0 && stop > 0.0)) {
    throw ParseError("grid: log spacing needs positive endpoints");
  }
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    vals.push_back(start);
    return vals;
  }
  for (long i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    vals.push_back(log_spaced
                       ? std::exp(std::log(start) +
                                  t * (std::log(stop) - std::log(start)))
                       : start + t * (stop - start));
  }
  vals.back() = stop;  // inclusive endpoint, exactly
  return vals;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find(',', pos), text.size());
    const std::string tok = text.substr(pos, next - pos);
    char* end = nullptr;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') {
      throw ParseError("list: bad integer '" + tok + "'");
    }
    vals.push_back(v);
    if (next == text.size()) break;
    pos = next + 1;
  }
  return vals;
}

// ---------------------------------------------------------------------------
// configuration shared by the computing subcommands

struct Config {
  std::string law_kind = "dirac";
  std::string levels;
  std::string law_file;
  double k_b = 1.0;
  std::string format;  // per-subcommand default when empty
  std::string output;
  std::int64_t samples = 100000;
  std::int64_t stream = 0;
  int threads = 1;
  std::optional<std::int64_t> seed_flag;

  std::optional<Spectrum> spectrum;
  std::optional<EnergyLaw> law;
};

void add_law_options(CLI::App* cmd, Config& cfg, bool with_law = true) {
  if (with_law) {
    cmd->add_option("--law", cfg.law_kind, "measure: dirac, haar or custom")
        ->check(CLI::IsMember({"dirac", "haar", "custom"}));
  }
  cmd->add_option("--levels", cfg.levels,
                  "spectrum, e.g. 0,1 or 0:1,1:2 (energy[:multiplicity])");
  if (with_law) {
    cmd->add_option("--law-file", cfg.law_file,
                    "JSON file of {energy, weight} atoms for --law custom");
  }
}

void add_output_options(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--kb", cfg.k_b, "Boltzmann constant (output units)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output,-o", cfg.output, "output path (default stdout)");
}

void add_mc_options(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--samples", cfg.samples, "Monte Carlo sample count");
  cmd->add_option("--seed", cfg.seed_flag,
                  "RNG seed (QBATH_SEED is the fallback)");
  cmd->add_option("--stream", cfg.stream, "RNG substream id");
  cmd->add_option("--threads", cfg.threads, "MC worker count")
      ->check(CLI::PositiveNumber);
}

EnergyLaw load_custom_law(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open law file '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError("law file '" + path + "': " + e.what());
  }
  const ordered_json& arr = j.is_object() && j.contains("atoms") ? j["atoms"] : j;
  if (!arr.is_array() || arr.empty()) {
    throw ParseError("law file: expected a nonempty array of "
                     "{energy, weight} atoms");
  }
  std::vector<EnergyLaw::Atom> atoms;
  atoms.reserve(arr.size());
  for (const auto& item : arr) {
    if (!item.contains("energy") || !item.contains("weight")) {
      throw ParseError("law file: every atom needs energy and weight");
    }
    atoms.push_back({item["energy"].get<double>(),
                     item["weight"].get<double>()});
  }
  return EnergyLaw::discrete(std::move(atoms), "custom(" + path + ")");
}

void build_law(Config& cfg, bool spectrum_required) {
  if (!cfg.levels.empty()) cfg.spectrum = Spectrum::parse(cfg.levels);
  if (cfg.law_kind == "custom") {
    if (cfg.law_file.empty()) {
      throw ParseError("--law custom requires --law-file");
    }
    cfg.law = load_custom_law(cfg.law_file);
  } else {
    if (!cfg.spectrum.has_value()) {
      throw ParseError("--levels is required for --law " + cfg.law_kind);
    }
    cfg.law = cfg.law_kind == "dirac" ? dirac_law(*cfg.spectrum)
                                      : haar_law(*cfg.spectrum);
  }
  if (spectrum_required && !cfg.spectrum.has_value()) {
    throw ParseError("--levels is required for this subcommand");
  }
}

std::uint64_t resolve_seed(const Config& cfg) {
  if (cfg.seed_flag.has_value()) {
    return static_cast<std::uint64_t>(*cfg.seed_flag);
  }
  if (const char* env = std::getenv("QBATH_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    throw ParseError("QBATH_SEED is not an integer");
  }
  throw ParseError("a seed is required for Monte Carlo commands "
                   "(--seed or QBATH_SEED)");
}

void emit(const Config& cfg, const std::string& payload) {
  if (cfg.output.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw ResourceError("cannot open output '" + cfg.output + "'");
  out << payload;
  if (!out) throw ResourceError("write failed for '" + cfg.output + "'");
}

ordered_json meta_block(const Config& cfg, const std::string& method,
                        bool with_seed) {
  ordered_json meta;
  meta["law"] = cfg.law.has_value() ? cfg.law->descriptor() : nullptr;
  if (cfg.spectrum.has_value()) {
    meta["spectrum"] = cfg.spectrum->to_text();
  } else {
    meta["spectrum"] = nullptr;
  }
  if (with_seed) {
    meta["seed"] = static_cast<std::int64_t>(resolve_seed(cfg));
  } else {
    meta["seed"] = nullptr;
  }
  meta["method"] = method;
  meta["version"] = kVersion;
  return meta;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

double scale_or_null(double v) { return v; }  // placeholder for clarity

ordered_json tail_json(const Config& cfg, const TailEstimate& est) {
  ordered_json data;
  data["value"] = scale_or_null(est.value * cfg.k_b);
  data["std_error"] = est.std_error * cfg.k_b;
  data["n"] = est.n;
  data["samples"] = est.samples;
  data["zero_hits"] = est.zero_hits;
  ordered_json event;
  event["upper"] = est.event.upper;
  if (est.event.lower.has_value()) {
    event["lower"] = *est.event.lower;
  } else {
    event["lower"] = nullptr;
  }
  data["event"] = event;
  return data;
}

// ---------------------------------------------------------------------------
// subcommand bodies

int cmd_eos(Config& cfg, const std::string& beta_grid,
            const std::string& energy_grid) {
  build_law(cfg, false);
  if (beta_grid.empty() == energy_grid.empty()) {
    throw ParseError("eos: exactly one of --beta / --energy-grid required");
  }
  const GridKind kind =
      beta_grid.empty() ? GridKind::energy : GridKind::beta;
  const std::vector<double> grid =
      parse_grid(beta_grid.empty() ? energy_grid : beta_grid);
  const EquationOfState eos = eos_scan(*cfg.law, grid, kind, cfg.k_b);

  for (const auto& entry : eos.entries) {
    if (!entry.error.empty()) {
      std::cerr << "eos: " << entry.error << "\n";
    }
  }
  if (cfg.format.empty() || cfg.format == "csv") {
    std::ostringstream os;
    os << "beta,logZ,energy,entropy,heat_capacity,temperature\n";
    for (const auto& entry : eos.entries) {
      if (!entry.point.has_value()) continue;
      const ThermoPoint& p = *entry.point;
      os << format_double(p.beta) << ',' << format_double(p.log_z) << ','
         << format_double(p.energy) << ',' << format_double(p.entropy) << ','
         << format_double(p.heat_capacity) << ','
         << format_double(p.temperature) << '\n';
    }
    emit(cfg, os.str());
  } else {
    ordered_json out;
    out["meta"] = meta_block(cfg, "eos", false);
    ordered_json points = ordered_json::array();
    ordered_json errors = ordered_json::array();
    for (const auto& entry : eos.entries) {
      if (entry.point.has_value()) {
        const ThermoPoint& p = *entry.point;
        points.push_back({{"beta", p.beta},
                          {"logZ", p.log_z},
                          {"energy", p.energy},
                          {"entropy", p.entropy},
                          {"heat_capacity", p.heat_capacity},
                          {"temperature", p.temperature}});
      } else {
        errors.push_back({{"input", entry.input}, {"message", entry.error}});
      }
    }
    out["data"] = {{"k_b", cfg.k_b}, {"points", points}, {"errors", errors}};
    emit(cfg, dump_json(out));
  }
  return 0;
}

int cmd_invert(Config& cfg, double energy) {
  build_law(cfg, false);
  const double beta = invert_beta(*cfg.law, energy);
  const double entropy = cfg.k_b * (beta * energy + log_partition(*cfg.law, beta));
  ordered_json out;
  out["meta"] = meta_block(cfg, "invert", false);
  out["data"] = {{"beta", beta}, {"entropy", entropy}};
  emit(cfg, dump_json(out));
  return 0;
}

int cmd_sample(Config& cfg, std::int64_t count) {
  if (!cfg.levels.empty()) cfg.spectrum = Spectrum::parse(cfg.levels);
  if (!cfg.spectrum.has_value()) throw ParseError("sample: --levels required");
  if (count < 1) throw ParseError("sample: --count must be >= 1");
  const RngStream rs{resolve_seed(cfg),
                     static_cast<std::uint64_t>(cfg.stream)};
  const std::vector<double> draws =
      sample_haar_energy(*cfg.spectrum, rs, count);
  cfg.law = haar_law(*cfg.spectrum);
  if (cfg.format.empty() || cfg.format == "csv") {
    std::ostringstream os;
    os << "energy\n";
    for (const double d : draws) os << format_double(d) << '\n';
    emit(cfg, os.str());
  } else {
    ordered_json out;
    out["meta"] = meta_block(cfg, "sample", true);
    out["data"] = {{"energies", draws}};
    emit(cfg, dump_json(out));
  }
  return 0;
}

int cmd_tail(Config& cfg, std::int64_t n, double energy,
             const std::string& method, std::optional<double> delta) {
  build_law(cfg, false);
  const BathSpec spec{*cfg.law, n};
  const MethodChoice choice =
      method == "auto" ? MethodChoice::auto_select
      : method == "exact" ? MethodChoice::exact
      : method == "mc" ? MethodChoice::mc
                       : MethodChoice::tilted;
  const TailMethod resolved = resolve_method(spec, energy, choice);
  const bool is_mc = resolved == TailMethod::mc_naive ||
                     resolved == TailMethod::mc_tilted;
  std::optional<McRun> run;
  if (is_mc) {
    run = McRun{cfg.samples,
                {resolve_seed(cfg), static_cast<std::uint64_t>(cfg.stream)},
                cfg.threads};
  }
  TailEstimate est;
  if (delta.has_value()) {
    est = shell_entropy(spec, energy, *delta, choice, run);
  } else {
    switch (resolved) {
      case TailMethod::exact_dp:
        est = exact_discrete_tail(spec, energy);
        break;
      case TailMethod::irwin_hall:
        est = irwin_hall_tail(spec, energy);
        break;
      case TailMethod::mc_naive:
        est = mc_tail(spec, energy, *run);
        break;
      case TailMethod::mc_tilted:
        est = tilted_tail(spec, energy, *run);
        break;
    }
  }
  ordered_json out;
  out["meta"] = meta_block(cfg, tail_method_name(est.method), is_mc);
  out["data"] = tail_json(cfg, est);
  emit(cfg, dump_json(out));
  return 0;
}

int cmd_converge(Config& cfg, double energy, const std::string& n_list_text,
                 const std::string& method) {
  build_law(cfg, false);
  const std::vector<std::int64_t> n_list = parse_int_list(n_list_text);
  const MethodChoice choice =
      method == "auto" ? MethodChoice::auto_select
      : method == "exact" ? MethodChoice::exact
      : method == "mc" ? MethodChoice::mc
                       : MethodChoice::tilted;
  // the study needs a seed only if some row resolves to Monte Carlo
  bool any_mc = false;
  for (const std::int64_t n : n_list) {
    const TailMethod m = resolve_method({*cfg.law, n}, energy, choice);
    any_mc = any_mc || m == TailMethod::mc_naive || m == TailMethod::mc_tilted;
  }
  std::optional<McRun> run;
  if (any_mc) {
    run = McRun{cfg.samples,
                {resolve_seed(cfg), static_cast<std::uint64_t>(cfg.stream)},
                cfg.threads};
  }
  const auto rows = convergence_study(*cfg.law, energy, n_list, choice, run);
  if (cfg.format.empty() || cfg.format == "csv") {
    std::ostringstream os;
    os << "n,entropy,bound,gap,std_error,method\n";
    for (const auto& row : rows) {
      os << row.n << ',' << format_double(row.estimate.value * cfg.k_b) << ','
         << format_double(row.bound * cfg.k_b) << ','
         << format_double(row.gap * cfg.k_b) << ','
         << format_double(row.estimate.std_error * cfg.k_b) << ','
         << tail_method_name(row.estimate.method) << '\n';
    }
    emit(cfg, os.str());
  } else {
    ordered_json out;
    out["meta"] = meta_block(cfg, "converge", any_mc);
    ordered_json jrows = ordered_json::array();
    for (const auto& row : rows) {
      jrows.push_back({{"n", row.n},
                       {"entropy", row.estimate.value * cfg.k_b},
                       {"bound", row.bound * cfg.k_b},
                       {"gap", row.gap * cfg.k_b},
                       {"std_error", row.estimate.std_error * cfg.k_b},
                       {"method", tail_method_name(row.estimate.method)}});
    }
    out["data"] = {{"rows", jrows}};
    emit(cfg, dump_json(out));
  }
  return 0;
}

int cmd_check(Config& cfg, const std::string& eps_text) {
  build_law(cfg, true);
  std::vector<double> eps;
  if (!eps_text.empty()) eps = parse_grid(eps_text);
  const CompletenessReport report =
      completeness_check(*cfg.spectrum, *cfg.law, eps);
  ordered_json out;
  out["meta"] = meta_block(cfg, "check", false);
  ordered_json witnesses = ordered_json::array();
  for (const auto& w : report.witnesses) {
    witnesses.push_back({{"epsilon", w.epsilon},
                         {"prob_below", w.prob_below}});
  }
  out["data"] = {{"complete", report.complete}, {"witnesses", witnesses}};
  emit(cfg, dump_json(out));
  return 0;
}

// ---------------------------------------------------------------------------
// plot: EOS CSV -> static SVG line chart

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("plot: cannot open '" + path + "'");
  Table t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t next = std::min(line.find(',', pos), line.size());
      cells.push_back(line.substr(pos, next - pos));
      if (next == line.size()) break;
      pos = next + 1;
    }
    if (first) {
      t.header = cells;
      first = false;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ParseError("plot: empty input");
  return t;
}

std::size_t column_index(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (t.header[i] == name) return i;
  }
  throw ParseError("plot: no column named '" + name + "'");
}

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_plot(const Config& cfg, const std::string& input,
             const std::string& x_name, const std::string& columns) {
  const Table t = read_csv(input);
  const std::size_t xi = column_index(t, x_name);
  std::vector<std::size_t> yi;
  for (const auto& name : [&] {
         std::vector<std::string> names;
         std::size_t pos = 0;
         while (pos <= columns.size()) {
           const std::size_t next =
               std::min(columns.find(',', pos), columns.size());
           names.push_back(columns.substr(pos, next - pos));
           if (next == columns.size()) break;
           pos = next + 1;
         }
         return names;
       }()) {
    yi.push_back(column_index(t, name));
  }

  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (const auto& row : t.rows) {
    if (!std::isfinite(row[xi])) continue;
    xmin = std::min(xmin, row[xi]);
    xmax = std::max(xmax, row[xi]);
    for (const std::size_t c : yi) {
      if (!std::isfinite(row[c])) continue;
      ymin = std::min(ymin, row[c]);
      ymax = std::max(ymax, row[c]);
    }
  }
  if (!std::isfinite(xmin) || !std::isfinite(ymin)) {
    throw DomainError("plot: no finite data points");
  }
  if (xmax == xmin) { xmax += 0.5; xmin -= 0.5; }
  if (ymax == ymin) { ymax += 0.5; ymin -= 0.5; }

  const double left = 70, right = 780, top = 20, bottom = 550;
  auto sx = [&](double x) {
    return left + (x - xmin) / (xmax - xmin) * (right - left);
  };
  auto sy = [&](double y) {
    return bottom - (y - ymin) / (ymax - ymin) * (bottom - top);
  };
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
        "width=\"800\" height=\"600\">\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" "
        "fill=\"white\"/>\n";
  os << "  <line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(bottom)
     << "\" x2=\"" << svg_num(right) << "\" y2=\"" << svg_num(bottom)
     << "\" stroke=\"black\"/>\n";
  os << "  <line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(top)
     << "\" x2=\"" << svg_num(left) << "\" y2=\"" << svg_num(bottom)
     << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = xmin + (xmax - xmin) * k / 4.0;
    const double fy = ymin + (ymax - ymin) * k / 4.0;
    os << "  <text x=\"" << svg_num(sx(fx)) << "\" y=\"" << svg_num(bottom + 18)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(fx)
       << "</text>\n";
    os << "  <text x=\"" << svg_num(left - 6) << "\" y=\""
       << svg_num(sy(fy) + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
       << tick_label(fy) << "</text>\n";
  }
  os << "  <text x=\"" << svg_num(0.5 * (left + right)) << "\" y=\"585\" "
        "font-size=\"12\" text-anchor=\"middle\">" << x_name << "</text>\n";
  for (std::size_t s = 0; s < yi.size(); ++s) {
    os << "  <polyline fill=\"none\" stroke=\"" << kPalette[s % 6]
       << "\" stroke-width=\"1.5\" points=\"";
    bool started = false;
    for (const auto& row : t.rows) {
      if (!std::isfinite(row[xi]) || !std::isfinite(row[yi[s]])) continue;
      if (started) os << ' ';
      os << svg_num(sx(row[xi])) << ',' << svg_num(sy(row[yi[s]]));
      started = true;
    }
    os << "\"/>\n";
    os << "  <text x=\"" << svg_num(right - 6) << "\" y=\""
       << svg_num(top + 14 + 14 * static_cast<double>(s))
       << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << kPalette[s % 6]
       << "\">" << t.header[yi[s]] << "</text>\n";
  }
  os << "</svg>\n";
  emit(cfg, os.str());
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"equation of state and finite-n entropy estimators for a "
               "bath of weakly interacting finite-dimensional molecules"};
  app.require_subcommand(1);

  Config cfg;
  std::string beta_grid, energy_grid;
  double energy = 0.0;
  std::optional<double> delta;
  std::int64_t count = 0, n = 1;
  std::string method = "auto";
  std::string n_list_text, eps_text;
  std::string plot_input, plot_x = "beta", plot_columns = "energy";

  CLI::App* eos = app.add_subcommand("eos", "equation-of-state scan");
  add_law_options(eos, cfg);
  add_output_options(eos, cfg);
  eos->add_option("--beta", beta_grid, "beta grid (start:stop:count[:log])");
  eos->add_option("--energy-grid", energy_grid, "energy grid")
      ->excludes("--beta");

  CLI::App* invert = app.add_subcommand("invert", "energy -> beta, entropy");
  add_law_options(invert, cfg);
  add_output_options(invert, cfg);
  invert->add_option("--energy", energy, "target specific energy")->required();

  CLI::App* sample = app.add_subcommand("sample", "Haar energy draws");
  add_law_options(sample, cfg, false);
  add_output_options(sample, cfg);
  sample->add_option("--count", count, "number of draws")->required();
  add_mc_options(sample, cfg);

  CLI::App* tail = app.add_subcommand("tail", "finite-n entropy estimate");
  add_law_options(tail, cfg);
  add_output_options(tail, cfg);
  tail->add_option("--n", n, "molecule count")->required();
  tail->add_option("--energy", energy, "tail upper edge")->required();
  tail->add_option("--method", method, "auto, exact, mc or tilted")
      ->check(CLI::IsMember({"auto", "exact", "mc", "tilted"}));
  add_mc_options(tail, cfg);

  CLI::App* shell = app.add_subcommand("shell", "banded entropy estimate");
  add_law_options(shell, cfg);
  add_output_options(shell, cfg);
  shell->add_option("--n", n, "molecule count")->required();
  shell->add_option("--energy", energy, "band upper edge")->required();
  double delta_value = 0.0;
  shell->add_option("--delta", delta_value, "band width")->required();
  shell->add_option("--method", method, "auto, exact, mc or tilted")
      ->check(CLI::IsMember({"auto", "exact", "mc", "tilted"}));
  add_mc_options(shell, cfg);

  CLI::App* converge = app.add_subcommand("converge", "n sweep with bound");
  add_law_options(converge, cfg);
  add_output_options(converge, cfg);
  converge->add_option("--energy", energy, "tail upper edge")->required();
  converge->add_option("--n-list", n_list_text, "ascending n list")->required();
  converge->add_option("--method", method, "auto, exact, mc or tilted")
      ->check(CLI::IsMember({"auto", "exact", "mc", "tilted"}));
  add_mc_options(converge, cfg);

  CLI::App* check = app.add_subcommand("check", "completeness report");
  add_law_options(check, cfg);
  add_output_options(check, cfg);
  check->add_option("--epsilon", eps_text, "extra probe epsilons");

  CLI::App* plot = app.add_subcommand("plot", "EOS CSV -> SVG line chart");
  plot->add_option("--input", plot_input, "input CSV")->required();
  plot->add_option("--x", plot_x, "x column (default beta)");
  plot->add_option("--columns", plot_columns,
                   "comma list of y columns (default energy)");
  add_output_options(plot, cfg);

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(eos)) return cmd_eos(cfg, beta_grid, energy_grid);
    if (app.got_subcommand(invert)) return cmd_invert(cfg, energy);
    if (app.got_subcommand(sample)) return cmd_sample(cfg, count);
    if (app.got_subcommand(tail)) {
      return cmd_tail(cfg, n, energy, method, std::nullopt);
    }
    if (app.got_subcommand(shell)) {
      return cmd_tail(cfg, n, energy, method, delta_value);
    }
    if (app.got_subcommand(converge)) {
      return cmd_converge(cfg, energy, n_list_text, method);
    }
    if (app.got_subcommand(check)) return cmd_check(cfg, eps_text);
    if (app.got_subcommand(plot)) {
      return cmd_plot(cfg, plot_input, plot_x, plot_columns);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("qbath");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace qbath::cli
