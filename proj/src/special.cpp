#include <cmath>
#include <limits>

#include "graphdim/error.hpp"
#include "graphdim/numerics.hpp"

namespace graphdim {
namespace {

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x, double one_minus_x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("incomplete_beta: a and b must be positive");
  if (!(x >= 0.0) || !(x <= 1.0)) throw InvalidInput("incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (one_minus_x == 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(one_minus_x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, one_minus_x) / b;
}

double incomplete_beta(double a, double b, double x) { return incomplete_beta(a, b, x, 1.0 - x); }

double f_survival(double f, double d1, double d2) {
  if (std::isnan(f) || f < 0.0) throw InvalidInput("f_survival: statistic must be >= 0");
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw InvalidInput("f_survival: degrees of freedom must be positive");
  if (f == 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  // P(F > f) = I_x(d2/2, d1/2), x = d2 / (d2 + d1 f).
  const double denom = d2 + d1 * f;
  const double x = d2 / denom;
  const double one_minus_x = d1 * f / denom;
  return incomplete_beta(0.5 * d2, 0.5 * d1, x, one_minus_x);
}

}  // namespace graphdim
