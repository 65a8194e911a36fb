#ifndef FRACAVITY_TRIDIAG_HPP
#define FRACAVITY_TRIDIAG_HPP

// Selected eigenpairs of a real symmetric tridiagonal matrix: Sturm-count
// bisection for the k lowest eigenvalues, inverse iteration with partial
// pivoting for the eigenvectors. Deterministic by construction.

#include <cmath>
#include <cstdint>
#include <vector>

#include "fracavity/errors.hpp"

namespace fracavity {

namespace tridiag_detail {

// Number of eigenvalues of tridiag(e, d, e) strictly below x.
inline int count_below(const std::vector<double>& d, const std::vector<double>& e, double x) {
  const std::size_t n = d.size();
  const double tiny = 1e-300;
  int cnt = 0;
  double t = d[0] - x;
  if (t < 0.0) ++cnt;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(t) < tiny) t = (t < 0.0) ? -tiny : tiny;
    t = d[i] - x - e[i - 1] * e[i - 1] / t;
    if (t < 0.0) ++cnt;
  }
  return cnt;
}

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Solve (T - lambda I) v = b by Gaussian elimination with partial pivoting
// on the tridiagonal band (two superdiagonals appear), in place.
struct ShiftedSolver {
  std::vector<double> dl, dd, du, du2;
  std::vector<int> piv;

  ShiftedSolver(const std::vector<double>& d, const std::vector<double>& e, double lam) {
    const std::size_t n = d.size();
    dl.assign(n, 0.0);
    dd.assign(n, 0.0);
    du.assign(n, 0.0);
    du2.assign(n, 0.0);
    piv.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) dd[i] = d[i] - lam;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      dl[i] = e[i];
      du[i] = e[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(dd[i]) >= std::abs(dl[i])) {
        piv[i] = 0;
        if (dd[i] == 0.0) dd[i] = 1e-300;
        const double m = dl[i] / dd[i];
        dl[i] = m;
        dd[i + 1] -= m * du[i];
      } else {
        piv[i] = 1;
        const double m = dd[i] / dl[i];
        std::swap(dd[i], dl[i]);
        const double tmp = du[i];
        du[i] = dd[i + 1];
        du2[i] = (i + 2 < n) ? du[i + 1] : 0.0;
        dd[i + 1] = tmp - m * du[i];
        if (i + 2 < n) du[i + 1] = -m * du2[i];
        dl[i] = m;
      }
    }
    if (dd[n - 1] == 0.0) dd[n - 1] = 1e-300;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = dd.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (piv[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= dd[n - 1];
    if (n >= 2) {
      const std::size_t i = n - 2;
      b[i] = (b[i] - du[i] * b[i + 1]) / dd[i];
    }
    for (std::size_t k = n; k >= 3; --k) {
      const std::size_t i = k - 3;
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
    }
  }
};

}  // namespace tridiag_detail

struct TridiagEigenResult {
  std::vector<double> values;               // ascending
  std::vector<std::vector<double>> vectors; // unit Euclidean norm
};

// k lowest eigenpairs of the symmetric tridiagonal matrix with diagonal d
// and off-diagonal e (|e| = n-1).
inline TridiagEigenResult tridiag_lowest_eigenpairs(const std::vector<double>& d,
                                                    const std::vector<double>& e,
                                                    std::size_t k) {
  using namespace tridiag_detail;
  const std::size_t n = d.size();
  if (n < 2 || e.size() != n - 1) throw ConfigError("tridiag: bad dimensions");
  if (k < 1 || k > n) throw ConfigError("tridiag: bad eigenpair count");

  // Gershgorin bounds
  double lo = d[0], hi = d[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});

  TridiagEigenResult res;
  res.values.resize(k);
  for (std::size_t idx = 0; idx < k; ++idx) {
    double a = lo, b = hi;
    for (int it = 0; it < 120 && (b - a) > 1e-15 * scale; ++it) {
      const double mid = 0.5 * (a + b);
      if (count_below(d, e, mid) >= static_cast<int>(idx) + 1)
        b = mid;
      else
        a = mid;
    }
    res.values[idx] = 0.5 * (a + b);
  }

  // inverse iteration
  res.vectors.assign(k, std::vector<double>(n));
  uint64_t rng = 0x243F6A8885A308D3ull;
  for (std::size_t idx = 0; idx < k; ++idx) {
    const double lam = res.values[idx];
    ShiftedSolver solver(d, e, lam);
    std::vector<double>& v = res.vectors[idx];
    for (std::size_t i = 0; i < n; ++i)
      v[i] = static_cast<double>(splitmix64(rng) >> 11) * 0x1.0p-53 - 0.5;
    for (int sweep = 0; sweep < 6; ++sweep) {
      solver.solve(v);
      // re-orthogonalize inside near-degenerate clusters
      for (std::size_t j = 0; j < idx; ++j) {
        if (std::abs(res.values[j] - lam) < 1e-8 * scale) {
          double dot = 0.0;
          for (std::size_t i = 0; i < n; ++i) dot += res.vectors[j][i] * v[i];
          for (std::size_t i = 0; i < n; ++i) v[i] -= dot * res.vectors[j][i];
        }
      }
      double nrm = 0.0;
      for (double x : v) nrm += x * x;
      nrm = std::sqrt(nrm);
      for (double& x : v) x /= nrm;
      // residual ||T v - lam v||
      double resid = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double tv = d[i] * v[i];
        if (i > 0) tv += e[i - 1] * v[i - 1];
        if (i + 1 < n) tv += e[i] * v[i + 1];
        const double r = tv - lam * v[i];
        resid += r * r;
      }
      if (std::sqrt(resid) < 1e-12 * scale) break;
    }
    // deterministic sign: largest-magnitude component positive
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0.0)
      for (double& x : v) x = -x;
  }
  return res;
}

}  // namespace fracavity

#endif  // FRACAVITY_TRIDIAG_HPP
