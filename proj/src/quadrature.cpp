#include "qbath/quadrature.hpp"

#include <cmath>

namespace qbath {
namespace {

// Kronrod 15 / Gauss 7 nodes and weights on [-1, 1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Gk15 {
  double kronrod;
  double err;
};

Gk15 gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    res_k += kWgk[j] * fsum;
    if (j % 2 == 1) res_g += kWg[j / 2] * fsum;
  }
  return {res_k * h, std::abs((res_k - res_g) * h)};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double rel_tol, double abs_tol, int depth) {
  const Gk15 r = gk15(f, a, b);
  if (depth >= 52 ||
      r.err <= std::max(abs_tol, rel_tol * std::abs(r.kronrod))) {
    return r.kronrod;
  }
  const double c = 0.5 * (a + b);
  const double half_abs = 0.5 * abs_tol;
  return adapt(f, a, c, rel_tol, half_abs, depth + 1) +
         adapt(f, c, b, rel_tol, half_abs, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  return adapt(f, a, b, rel_tol, abs_tol, 0);
}

double integrate_segments(const std::function<double(double)>& f,
                          const std::vector<double>& knots, double rel_tol,
                          double abs_tol) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i + 1] > knots[i]) {
      total += integrate(f, knots[i], knots[i + 1], rel_tol, abs_tol);
    }
  }
  return total;
}

}  // namespace qbath
