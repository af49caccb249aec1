#ifndef TAXORL_RNG_HPP
#define TAXORL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace taxorl {

// All randomness in the project goes through these helpers so that a given
// seed produces the same stream on every platform (the distribution classes
// in <random> are implementation-defined).
using Rng = std::mt19937_64;

inline double uniform01(Rng& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline int uniform_int(Rng& g, int n) {
  // n small everywhere in this project; modulo bias is negligible and
  // reproducibility matters more here.
  return static_cast<int>(g() % static_cast<std::uint64_t>(n));
}

inline double uniform_range(Rng& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

inline double normal01(Rng& g) {
  // Box-Muller, one value per call (the second is discarded for simplicity).
  double u1 = uniform01(g);
  double u2 = uniform01(g);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

template <typename T>
void shuffle_vec(std::vector<T>& v, Rng& g) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
    int j = uniform_int(g, i + 1);
    std::swap(v[i], v[j]);
  }
}

}  // namespace taxorl

#endif
