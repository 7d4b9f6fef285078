#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "choreo/symmetric_loop.hpp"

namespace choreo::testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Seed curve plus a random tail whose amplitude decays like 1/k², which
// keeps draws away from collisions for small `tail`.
inline SymmetricLoop random_loop(std::mt19937_64& rng, int modes, double scale = 1.0, double tail = 0.05,
                                 bool nc1 = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymmetricLoop loop(modes, nc1);
  auto c = loop.flat();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = loop.flat_wavenumber(i);
    c[i] = tail * u(rng) / (k * k);
  }
  c[0] += 1.0;                               // a_2
  c[static_cast<std::size_t>(modes)] += 1.0;  // b_1 (dropped under nc1)
  if (nc1 && modes >= 3) c[static_cast<std::size_t>(modes) + 2] += 1.0;  // b_5
  for (auto& v : c) v *= scale;
  loop.assign_flat(c);
  return loop;
}

// Unrestricted coefficients, for inequalities that hold on the whole class.
inline SymmetricLoop wild_loop(std::mt19937_64& rng, int modes, bool nc1 = false) {
  std::normal_distribution<double> n(0.0, 1.0);
  SymmetricLoop loop(modes, nc1);
  std::vector<double> c(loop.dimension());
  for (auto& v : c) v = n(rng);
  loop.assign_flat(c);
  return loop;
}

}  // namespace choreo::testing
