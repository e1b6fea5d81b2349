#pragma once

#include <stdexcept>
#include <vector>

namespace pathgauge {

/// Composite Simpson over f_0..f_N on a uniform grid of step h (N even).
template <class T>
T simpson(const std::vector<T>& f, double h) {
  const std::size_t n = f.size() - 1;
  if (n == 0 || n % 2 != 0) throw std::invalid_argument("simpson needs an even number of intervals");
  T odd = f[1];
  for (std::size_t k = 3; k < n; k += 2) odd += f[k];
  T even = f[2] - f[2];
  for (std::size_t k = 2; k < n; k += 2) even += f[k];
  return (h / 3.0) * (f[0] + f[n] + 4.0 * odd + 2.0 * even);
}

/**
 * Running integrals I_k = int_0^{t_k} f. Even k: composite Simpson.
 * k = 1: quadratic through f_0, f_1, f_2. Odd k >= 3: Simpson to k-3 plus
 * the 3/8 rule on the last three intervals. Exact for cubics at every k
 * except k = 1 (exact for quadratics).
 */
template <class T>
std::vector<T> cumulative_simpson(const std::vector<T>& f, double h) {
  const std::size_t n = f.size() - 1;
  if (n < 2) throw std::invalid_argument("cumulative_simpson needs at least two intervals");
  std::vector<T> I(n + 1, f[0] - f[0]);
  for (std::size_t k = 2; k <= n; k += 2) I[k] = I[k - 2] + (h / 3.0) * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  I[1] = (h / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  for (std::size_t k = 3; k <= n; k += 2)
    I[k] = I[k - 3] + (3.0 * h / 8.0) * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k]);
  return I;
}

}  // namespace pathgauge
