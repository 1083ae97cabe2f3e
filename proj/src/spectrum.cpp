#include "qbath/spectrum.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "qbath/errors.hpp"

namespace qbath {

Spectrum::Spectrum(std::vector<Level> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw DomainError("spectrum: at least one level required");
  double prev = -std::numeric_limits<double>::infinity();
  long long dim = 0;
  for (const Level& lv : levels_) {
    if (!std::isfinite(lv.energy)) {
      throw DomainError("spectrum: energies must be finite");
    }
    if (!(lv.energy > prev)) {
      throw DomainError("spectrum: energies must be strictly increasing");
    }
    if (lv.multiplicity < 1) {
      throw DomainError("spectrum: multiplicities must be >= 1");
    }
    prev = lv.energy;
    dim += lv.multiplicity;
  }
  if (dim > (1 << 20)) throw ResourceError("spectrum: dimension too large");
  dimension_ = static_cast<int>(dim);
}

namespace {

double parse_real(std::string_view tok) {
  std::string buf(tok);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end == buf.c_str() || *end != '\0') {
    throw ParseError("spectrum: bad energy value '" + buf + "'");
  }
  return v;
}

int parse_mult(std::string_view tok) {
  int v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw ParseError("spectrum: bad multiplicity '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

Spectrum Spectrum::parse(std::string_view text) {
  std::vector<Level> levels;
  std::size_t pos = 0;
  if (text.empty()) throw ParseError("spectrum: empty specification");
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view entry = text.substr(pos, comma - pos);
    if (entry.empty()) throw ParseError("spectrum: empty entry");
    const std::size_t colon = entry.find(':');
    Level lv;
    if (colon == std::string_view::npos) {
      lv.energy = parse_real(entry);
    } else {
      lv.energy = parse_real(entry.substr(0, colon));
      lv.multiplicity = parse_mult(entry.substr(colon + 1));
    }
    levels.push_back(lv);
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  return Spectrum(std::move(levels));
}

double Spectrum::trace() const {
  double t = 0.0;
  for (const Level& lv : levels_) t += lv.multiplicity * lv.energy;
  return t;
}

double Spectrum::trace_sq() const {
  double t = 0.0;
  for (const Level& lv : levels_) t += lv.multiplicity * lv.energy * lv.energy;
  return t;
}

std::string Spectrum::to_text() const {
  std::ostringstream os;
  char buf[40];
  bool sep = false;
  for (const Level& lv : levels_) {
    if (sep) os << ',';
    sep = true;
    std::snprintf(buf, sizeof buf, "%.17g", lv.energy);
    os << buf;
    if (lv.multiplicity != 1) os << ':' << lv.multiplicity;
  }
  return os.str();
}

}  // namespace qbath
