#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dci/dihedral.hpp"
#include "dci/partition.hpp"
#include "dci/perm.hpp"

namespace dci {

struct ChainSearchOptions {
  std::size_t node_budget = 200'000;  // per prime ordering, per backtrack
  std::size_t random_trials = 100'000;
  std::uint64_t seed = 0;
};

// Result of the nested chain search for a pair of regular dihedral groups R
// and Rp on the same points.
//
// `r` and `rp` are R and Rp^beta with their cyclic generators reordered by
// `prime_order` (r.rho[i] = R.rho[prime_order[i]]).  partitions[0] is the
// singleton partition, partitions[i] for 1 <= i <= s is the orbit partition
// of <r.rho[0..i)> and of <rp.rho[0..i)>, and partitions[s+1] is the whole
// set.  Every level is invariant under <r, rp>, and inside each block of
// level i, rp.rho[i-1] permutes the blocks of level i-1 as a fixed power
// of r.rho[i-1] does.
struct NestedChain {
  std::vector<std::size_t> prime_order;
  std::vector<Partition> partitions;
  Permutation beta;  // in <R, Rp>
  RegularRep r;
  RegularRep rp;

  // "direct", "transporter" or "random": how the chain conjugator was found.
  std::string strategy;
  std::size_t nodes = 0;           // backtrack nodes over all stages
  std::size_t random_draws = 0;
  std::size_t alignment_steps = 0; // levels that needed a realigning conjugation

  nlohmann::json diagnostics() const;
};

// Thrown when every strategy is exhausted.  what() carries the diagnostics.
struct ChainSearchExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

NestedChain find_nested_chain(const RegularRep& r, const RegularRep& rp, const ChainSearchOptions& opts = {});

// Orbit partitions of <gens[0..i)> for i = 1..gens.size().
std::vector<Partition> cumulative_orbits(std::size_t degree, const std::vector<Permutation>& gens);

// For a block B of `upper`, the exponent k in 1..p-1 with
// block_lower(y*sigma) == block_lower(y*rho^k) for every y in B, if any.
std::optional<std::uint64_t> alignment_exponent(const Permutation& rho, const Permutation& sigma, std::uint64_t p,
                                                const Partition& lower, const std::vector<Point>& block);

// Every chain property listed on NestedChain, as human-readable failures.
std::vector<std::string> check_nested_chain(const NestedChain& c);

}  // namespace dci
