#ifndef GRIDATTACK_RNG_HPP_
#define GRIDATTACK_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gridattack::ppo {

// Deterministic RNG: mt19937_64 (fully specified by the standard) plus
// explicit uniform/normal transforms, so identical seeds give identical
// streams on any platform. std distributions are not used because their
// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : base_seed_(seed), gen_(seed) {}

  // Derive an independent stream (e.g. per rollout worker).
  Rng spawn(std::uint64_t stream) const { return Rng(seed_mix(base_seed_, stream)); }

  static std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over the pair
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // [0, 1)
    return std::ldexp(static_cast<double>(gen_() >> 11), -53);
  }

  double normal() {  // Box-Muller, one value per two uniforms
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    const double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t integer() { return gen_(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(gen_() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t base_seed_ = 0;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gridattack::ppo

#endif  // GRIDATTACK_RNG_HPP_
