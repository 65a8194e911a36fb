#ifndef FRACAVITY_AIRY_HPP
#define FRACAVITY_AIRY_HPP

// Airy function Ai, its derivative, and their negative real zeros.
//
// Evaluation strategy: Maclaurin series in extended precision for |x| <= 8,
// Poincare asymptotic expansions beyond. The switchover at 8 was frozen
// after an accuracy sweep; both branches stay below 1e-12 absolute error
// there, comfortably inside the 1e-10 budget documented for |x| <= 1e3.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace fracavity {

namespace airy_detail {

inline constexpr double kSeriesAsymptoticSwitch = 8.0;

// Ai(0) = 3^(-2/3)/Gamma(2/3), Ai'(0) = -3^(-1/3)/Gamma(1/3)
inline constexpr long double kAi0 = 0.35502805388781723926L;
inline constexpr long double kAip0 = -0.25881940379280679841L;

struct Pair {
  double ai;
  double aip;
};

// Maclaurin series: Ai = Ai(0) f + Ai'(0) g with f'' = x f, g'' = x g,
// f(0) = 1, g'(0) = 1. Accumulated in long double; alternating-term
// cancellation on the negative axis stays below ~1e4 for |x| <= 8.
inline Pair series(double x) {
  const long double z = static_cast<long double>(x);
  const long double z3 = z * z * z;
  long double f = 1.0L, g = z;        // sums
  long double fp = 0.0L, gp = 1.0L;   // derivative sums
  long double tf = 1.0L, tg = z;      // current terms
  for (int k = 1; k < 200; ++k) {
    tf *= z3 / static_cast<long double>((3 * k) * (3 * k - 1));
    tg *= z3 / static_cast<long double>((3 * k + 1) * (3 * k));
    f += tf;
    g += tg;
    // d/dz of tf ~ z^{3k} is 3k tf / z; likewise tg ~ z^{3k+1}
    if (z != 0.0L) {
      fp += tf * static_cast<long double>(3 * k) / z;
      gp += tg * static_cast<long double>(3 * k + 1) / z;
    }
    if (std::abs(static_cast<double>(tf)) < 1e-22 && std::abs(static_cast<double>(tg)) < 1e-22)
      break;
  }
  return {static_cast<double>(kAi0 * f + kAip0 * g),
          static_cast<double>(kAi0 * fp + kAip0 * gp)};
}

// DLMF 9.7 coefficients u_k and v_k = u_k (6k+1)/(1-6k).
inline const double* u_table() {
  static double u[48];
  static bool init = [] {
    u[0] = 1.0;
    for (int k = 1; k < 48; ++k) {
      u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
             (216.0 * k * (2.0 * k - 1.0));
    }
    return true;
  }();
  (void)init;
  return u;
}

inline Pair asymptotic_positive(double x) {
  const double* u = u_table();
  const double zeta = (2.0 / 3.0) * x * std::sqrt(x);
  double su = 0.0, sv = 0.0, pow_z = 1.0;
  double prev = 1e300;
  for (int k = 0; k < 46; ++k) {
    const double mag = u[k] * pow_z;
    if (mag > prev) break;  // past the optimal truncation point
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    const double vk = (k == 0) ? 1.0 : u[k] * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
    su += sgn * u[k] * pow_z;
    sv += sgn * vk * pow_z;
    prev = mag;
    pow_z /= zeta;
    if (mag < 1e-20) break;
  }
  const double root4 = std::sqrt(std::sqrt(x));
  const double pref = std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi));
  return {pref / root4 * su, -pref * root4 * sv};
}

inline Pair asymptotic_negative(double x_abs) {
  const double* u = u_table();
  const double zeta = (2.0 / 3.0) * x_abs * std::sqrt(x_abs);
  const double c = std::cos(zeta - 0.25 * std::numbers::pi);
  const double s = std::sin(zeta - 0.25 * std::numbers::pi);
  double su_e = 0.0, su_o = 0.0, sv_e = 0.0, sv_o = 0.0;
  double prev = 1e300;
  for (int k = 0; 2 * k + 1 < 46; ++k) {
    const double mag = u[2 * k] / std::pow(zeta, 2 * k);
    if (mag > prev) break;
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    const auto v = [&u](int m) {
      return (m == 0) ? 1.0 : u[m] * (6.0 * m + 1.0) / (1.0 - 6.0 * m);
    };
    su_e += sgn * u[2 * k] / std::pow(zeta, 2 * k);
    su_o += sgn * u[2 * k + 1] / std::pow(zeta, 2 * k + 1);
    sv_e += sgn * v(2 * k) / std::pow(zeta, 2 * k);
    sv_o += sgn * v(2 * k + 1) / std::pow(zeta, 2 * k + 1);
    prev = mag;
    if (mag < 1e-20) break;
  }
  const double root4 = std::sqrt(std::sqrt(x_abs));
  const double rpi = 1.0 / std::sqrt(std::numbers::pi);
  return {rpi / root4 * (c * su_e + s * su_o), rpi * root4 * (s * sv_e - c * sv_o)};
}

inline Pair eval(double x) {
  if (std::abs(x) <= kSeriesAsymptoticSwitch) return series(x);
  if (x > 0.0) {
    if (x > 108.0) {
      // exp(-zeta) underflows near x ~ 108^(1.5); the value is 0 in double
      const double zeta = (2.0 / 3.0) * x * std::sqrt(x);
      if (zeta > 745.0) return {0.0, 0.0};
    }
    return asymptotic_positive(x);
  }
  return asymptotic_negative(-x);
}

}  // namespace airy_detail

inline double airy_ai(double x) { return airy_detail::eval(x).ai; }
inline double airy_ai_prime(double x) { return airy_detail::eval(x).aip; }

enum class AiryZeroKind { ai, ai_prime };

// n-th negative zero (n >= 1) of Ai or Ai', to ~1e-13 absolute. Asymptotic
// initial guess (DLMF 9.9.6 / 9.9.8), Newton polish with bisection fallback.
inline double airy_zero(std::size_t n, AiryZeroKind kind) {
  if (n < 1) throw std::invalid_argument("airy_zero: index must be >= 1");

  double guess;
  if (kind == AiryZeroKind::ai) {
    static constexpr double first[2] = {-2.33810741045976704, -4.08794944413097062};
    if (n <= 2) {
      guess = first[n - 1];
    } else {
      const double t = 3.0 * std::numbers::pi * (4.0 * static_cast<double>(n) - 1.0) / 8.0;
      const double t2 = 1.0 / (t * t);
      guess = -std::cbrt(t * t) *
              (1.0 + t2 * (5.0 / 48.0 + t2 * (-5.0 / 36.0 + t2 * (77125.0 / 82944.0))));
    }
  } else {
    static constexpr double first[2] = {-1.01879297164747145, -3.24819758217983656};
    if (n <= 2) {
      guess = first[n - 1];
    } else {
      const double t = 3.0 * std::numbers::pi * (4.0 * static_cast<double>(n) - 3.0) / 8.0;
      const double t2 = 1.0 / (t * t);
      guess = -std::cbrt(t * t) *
              (1.0 + t2 * (-7.0 / 48.0 + t2 * (35.0 / 288.0 + t2 * (-181223.0 / 207360.0))));
    }
  }

  const auto f = [kind](double x) {
    return (kind == AiryZeroKind::ai) ? airy_ai(x) : airy_ai_prime(x);
  };
  const auto df = [kind](double x) {
    // Ai''(x) = x Ai(x) from the defining ODE
    return (kind == AiryZeroKind::ai) ? airy_ai_prime(x) : x * airy_ai(x);
  };

  // bracket around the guess (zero spacing is > 0.4 everywhere)
  double lo = guess - 0.2, hi = guess + 0.2;
  while (f(lo) * f(hi) > 0.0) {
    lo -= 0.1;
    hi += 0.1;
    if (hi - lo > 4.0) throw std::runtime_error("airy_zero: bracketing failed");
  }

  double x = guess;
  for (int it = 0; it < 60; ++it) {
    const double fx = f(x);
    const double dfx = df(x);
    double step = (dfx != 0.0) ? fx / dfx : 0.0;
    double x_new = x - step;
    if (!(x_new > lo && x_new < hi) || dfx == 0.0) x_new = 0.5 * (lo + hi);  // bisect
    if (f(lo) * f(x_new) <= 0.0)
      hi = x_new;
    else
      lo = x_new;
    if (std::abs(x_new - x) <= 1e-15 * std::abs(x_new)) return x_new;
    x = x_new;
  }
  return x;
}

}  // namespace fracavity

#endif  // FRACAVITY_AIRY_HPP
