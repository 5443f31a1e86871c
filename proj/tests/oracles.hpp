#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "dci/perm.hpp"

namespace oracle {

// Every permutation of degree n, in lexicographic order.
inline std::vector<dci::Permutation> all_permutations(std::size_t n) {
  std::vector<dci::Point> im(n);
  std::iota(im.begin(), im.end(), dci::Point{0});
  std::vector<dci::Permutation> out;
  do out.emplace_back(im);
  while (std::next_permutation(im.begin(), im.end()));
  return out;
}

inline dci::Permutation random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<dci::Point> im(n);
  std::iota(im.begin(), im.end(), dci::Point{0});
  std::shuffle(im.begin(), im.end(), rng);
  return dci::Permutation(std::move(im));
}

// Closure of the generators under multiplication, computed independently of
// the library's enumeration helper.
inline std::set<dci::Permutation> closure(std::size_t n, const std::vector<dci::Permutation>& gens) {
  std::set<dci::Permutation> seen{dci::Permutation::identity(n)};
  std::vector<dci::Permutation> frontier{dci::Permutation::identity(n)};
  while (!frontier.empty()) {
    std::vector<dci::Permutation> next;
    for (const auto& f : frontier)
      for (const auto& g : gens) {
        auto h = f * g;
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    frontier = std::move(next);
  }
  return seen;
}

}  // namespace oracle
