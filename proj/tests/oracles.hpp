#pragma once

// Brute-force reference computations. These deliberately avoid the library's
// code paths (no FFTW, no shared helpers) so they can check them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// O(N^2) DFT with the twiddle index reduced mod N before the angle is formed.
inline std::vector<cplx> naive_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc = 0;
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t idx = (k * t) % n;
      long double ang = -2.0L * 3.141592653589793238462643383279502884L * idx / n;
      acc += std::complex<long double>(std::cos(ang), std::sin(ang)) * static_cast<long double>(x[t]);
    }
    out[k] = cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
  }
  return out;
}

// Single-segment triple product X(j) X(k) conj(X(j+k)) from a naive DFT.
inline cplx naive_triple(const std::vector<cplx>& X, std::size_t j, std::size_t k) {
  return X[j] * X[k] * std::conj(X[(j + k) % X.size()]);
}

// Bin of the largest |X| in 1..N/2, naive DFT restricted to those bins.
inline std::size_t peak_bin(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::size_t best = 1;
  double best_mag = -1.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      double ang = -2.0 * M_PI * static_cast<double>((k * t) % n) / static_cast<double>(n);
      re += x[t] * std::cos(ang);
      im += x[t] * std::sin(ang);
    }
    double m = re * re + im * im;
    if (m > best_mag) {
      best_mag = m;
      best = k;
    }
  }
  return best;
}

struct RawMoments {
  double mean, var, skew, kurt;
};

// Moments from raw power sums, expanded binomially (a different route from
// the two-pass central sums used by the library).
inline RawMoments moments(const std::vector<double>& v) {
  long double n = v.size();
  long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  for (double x : v) {
    long double lx = x;
    s1 += lx;
    s2 += lx * lx;
    s3 += lx * lx * lx;
    s4 += lx * lx * lx * lx;
  }
  long double mu = s1 / n, e2 = s2 / n, e3 = s3 / n, e4 = s4 / n;
  long double m2 = e2 - mu * mu;
  long double m3 = e3 - 3 * mu * e2 + 2 * mu * mu * mu;
  long double m4 = e4 - 4 * mu * e3 + 6 * mu * mu * e2 - 3 * mu * mu * mu * mu;
  RawMoments r{static_cast<double>(mu), static_cast<double>(m2), 0.0, 0.0};
  if (m2 >= 1e-12L) {
    r.skew = static_cast<double>(m3 / std::pow(m2, 1.5L));
    r.kurt = static_cast<double>(m4 / (m2 * m2) - 3);
  }
  return r;
}

// DBSCAN restated as graph components: core points via all-pairs counts,
// clusters are connected components of the core-core eps graph numbered by
// their smallest core index, and a border point takes the smallest cluster id
// among its core neighbors.
inline std::vector<int> dbscan(const std::vector<std::vector<double>>& pts, double eps, std::size_t min_pts) {
  const std::size_t n = pts.size();
  auto dist = [&](std::size_t a, std::size_t b) {
    double s = 0;
    for (std::size_t d = 0; d < pts[a].size(); ++d) s += (pts[a][d] - pts[b][d]) * (pts[a][d] - pts[b][d]);
    return std::sqrt(s);
  };
  std::vector<std::vector<bool>> near(n, std::vector<bool>(n));
  std::vector<bool> core(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t c = 0;
    for (std::size_t b = 0; b < n; ++b) {
      near[a][b] = dist(a, b) <= eps;
      c += near[a][b];
    }
    core[a] = c >= min_pts;
  }
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (core[a] && core[b] && near[a][b]) parent[std::max(find(a), find(b))] = std::min(find(a), find(b));
    }
  }
  std::vector<int> component_id(n, -1);
  std::vector<int> labels(n, -1);
  int next = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (!core[a]) continue;
    std::size_t root = find(a);
    if (component_id[root] < 0) component_id[root] = next++;
    labels[a] = component_id[root];
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (core[a]) continue;
    int best = -1;
    for (std::size_t b = 0; b < n; ++b) {
      if (core[b] && near[a][b] && (best < 0 || labels[b] < best)) best = labels[b];
    }
    labels[a] = best;
  }
  return labels;
}

// k-th nearest other point for every point via full sorting, then sorted.
inline std::vector<double> k_distances(const std::vector<std::vector<double>>& pts, std::size_t k) {
  std::vector<double> out;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    std::vector<double> d;
    for (std::size_t b = 0; b < pts.size(); ++b) {
      if (a == b) continue;
      double s = 0;
      for (std::size_t i = 0; i < pts[a].size(); ++i) s += (pts[a][i] - pts[b][i]) * (pts[a][i] - pts[b][i]);
      d.push_back(std::sqrt(s));
    }
    std::sort(d.begin(), d.end());
    out.push_back(d[k - 1]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
