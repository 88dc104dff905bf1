#pragma once

// Reference theta sums for tests: plain box summation around n = 0 in long
// double with Kahan compensation, no recentring and no adaptive radius.

#include <complex>
#include <vector>

namespace oracle {

using lcplx = std::complex<long double>;

inline std::complex<double> brute_theta(const std::vector<std::complex<double>>& z,
                                        const std::vector<std::vector<std::complex<double>>>& tau,
                                        const std::vector<double>& a, const std::vector<double>& b,
                                        int radius) {
  const size_t g = z.size();
  const long double pi = 3.141592653589793238462643383279502884L;
  const lcplx I(0.0L, 1.0L);
  lcplx sum(0.0L, 0.0L), comp(0.0L, 0.0L);
  std::vector<int> n(g, -radius);
  while (true) {
    std::vector<long double> v(g);
    for (size_t i = 0; i < g; ++i) v[i] = n[i] + static_cast<long double>(a[i]);
    lcplx quad(0.0L, 0.0L), lin(0.0L, 0.0L);
    for (size_t i = 0; i < g; ++i) {
      for (size_t j = 0; j < g; ++j) quad += v[i] * lcplx(tau[i][j]) * v[j];
      lin += v[i] * (lcplx(z[i]) + static_cast<long double>(b[i]));
    }
    const lcplx term = std::exp(I * pi * quad + 2.0L * I * pi * lin);
    const lcplx y = term - comp;
    const lcplx t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    size_t idx = 0;
    while (idx < g && n[idx] == radius) n[idx++] = -radius;
    if (idx == g) break;
    ++n[idx];
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

}  // namespace oracle
