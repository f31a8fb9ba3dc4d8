#pragma once

#include <array>
#include <cmath>

namespace rlbench {

// Classic fixed-step RK4 on dz/dt = f(z) with the control held constant by
// the caller (zero-order hold across the frame-skip window).
template <std::size_t N, typename Deriv>
std::array<double, N> rk4_step(const std::array<double, N>& z, double dt,
                               const Deriv& f) {
  const std::array<double, N> k1 = f(z);
  std::array<double, N> tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = z[i] + 0.5 * dt * k1[i];
  const std::array<double, N> k2 = f(tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = z[i] + 0.5 * dt * k2[i];
  const std::array<double, N> k3 = f(tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = z[i] + dt * k3[i];
  const std::array<double, N> k4 = f(tmp);
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = z[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// wrap angle to [-pi, pi)
inline double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

}  // namespace rlbench
