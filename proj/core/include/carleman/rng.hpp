#ifndef CARLEMAN_RNG_HPP
#define CARLEMAN_RNG_HPP

#include <cmath>
#include <cstdint>

#include "carleman/linalg.hpp"

namespace carleman {

// Counter-based generator: draw i of stream s under seed k is a pure function
// of (k, s, i), so sampled point sets are identical across runs, machines and
// worker counts.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(seed ^ (0x9e3779b97f4a7c15ull * (stream + 1)))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // uniform in [0, 1)
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in (0, 1], safe under log()
  double next_double_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double normal() {
    // Box-Muller; branch-free and reproducible.
    const double u1 = next_double_pos();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  Vec unit_vector(int d) {
    Vec v(d);
    double n2 = 0.0;
    do {
      for (int i = 0; i < d; ++i) v[i] = normal();
      n2 = v.squaredNorm();
    } while (n2 < 1e-30);
    return v / std::sqrt(n2);
  }

  // uniform w.r.t. Lebesgue measure on the annulus r_in <= |x| <= r_out
  Vec annulus_point(int d, double r_in, double r_out) {
    const double u = next_double();
    const double rd = std::pow(r_in, d) + u * (std::pow(r_out, d) - std::pow(r_in, d));
    const double r = std::pow(rd, 1.0 / d);
    return r * unit_vector(d);
  }

  Vec ball_point(int d, double radius) { return annulus_point(d, 0.0, radius); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30; z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27; z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

} // namespace carleman

#endif
