#include "collatt/rng.hpp"

#include <cmath>
#include <numbers>

namespace collatt {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t uniform_index(std::mt19937_64& rng, uint64_t n) {
  if (n == 0) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % n;
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  // u1 in (0,1] so the log is finite.
  const double u1 = 1.0 - uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

int sample_discrete(double u, std::span<const double> probs) {
  double cum = 0.0;
  int last_positive = 0;
  for (int k = 0; k < static_cast<int>(probs.size()); ++k) {
    if (probs[k] > 0.0) last_positive = k;
    cum += probs[k];
    if (u < cum) return k;
  }
  return last_positive;
}

}  // namespace collatt
