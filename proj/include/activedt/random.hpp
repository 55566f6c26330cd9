#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace activedt {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; good avalanche for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a master seed and a path of integer keys, e.g.
/// (master, cell, trial). Different paths give uncorrelated streams.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t k : path) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

/// Uniform size-min(a, population) subset of positions {0..population-1},
/// ascending. Floyd's algorithm: O(a log a) regardless of population size.
std::vector<std::size_t> sample_positions(std::size_t population, std::size_t a, Rng& rng);

/// Uniform size-min(a, |indices|) subset of `indices`, returned in the order
/// the elements appear in `indices`.
std::vector<std::size_t> sample_without_replacement(std::span<const std::size_t> indices,
                                                    std::size_t a, Rng& rng);

}  // namespace activedt
