#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cdasim::agents {

using Rng = std::mt19937_64;

// Independent stream per (root seed, agent index, role tag). Streams do not
// depend on thread scheduling or on how many other agents exist.
inline Rng make_stream(std::uint64_t root, std::uint64_t index, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(tag)};
  return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Unit-rate exponentials; normalizing any subset gives a flat Dirichlet over it.
inline std::vector<double> exponential_draws(Rng& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> out(n);
  for (double& x : out) x = e(rng);
  return out;
}

inline std::vector<double> flat_dirichlet(Rng& rng, std::size_t n) {
  std::vector<double> w = exponential_draws(rng, n);
  double sum = 0.0;
  for (double x : w) sum += x;
  for (double& x : w) x /= sum;
  return w;
}

}  // namespace cdasim::agents
