#pragma once

#include <functional>
#include <vector>

namespace qbath {

/// Adaptive Gauss-Kronrod 15(7) integration on [a, b]. Recursion bisects
/// until the local Kronrod-Gauss discrepancy meets
/// max(abs_tol_local, rel_tol * |local|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-300);

/// Integrates segment by segment between consecutive knots; the integrand is
/// assumed smooth within each segment.
double integrate_segments(const std::function<double(double)>& f,
                          const std::vector<double>& knots,
                          double rel_tol = 1e-10, double abs_tol = 1e-300);

}  // namespace qbath
