#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qbath {

struct Level {
  double energy = 0.0;
  int multiplicity = 1;
};

/// Sorted energy levels with multiplicities of one molecule's Hamiltonian.
/// Invariants: energies strictly increasing, every multiplicity >= 1,
/// dimension r = sum of multiplicities >= 1.
class Spectrum {
 public:
  explicit Spectrum(std::vector<Level> levels);

  /// Text syntax shared with the CLI: comma-separated `energy` or
  /// `energy:multiplicity` entries, e.g. "0,1" == "0:1,1:1".
  static Spectrum parse(std::string_view text);

  const std::vector<Level>& levels() const { return levels_; }
  int dimension() const { return dimension_; }

  double ground() const { return levels_.front().energy; }  // E-
  double top() const { return levels_.back().energy; }      // E+
  double width() const { return top() - ground(); }

  /// Sum of m_i * E_i (trace of the Hamiltonian).
  double trace() const;
  /// Sum of m_i * E_i^2.
  double trace_sq() const;

  /// Canonical text form, e.g. "0,1:2".
  std::string to_text() const;

 private:
  std::vector<Level> levels_;
  int dimension_ = 0;
};

}  // namespace qbath
