#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "json.hpp"

#include "dci/group.hpp"
#include "dci/partition.hpp"
#include "dci/perm.hpp"

namespace dci {

// A regular dihedral or cyclic group with standard generators.
//
// The cyclic part is generated by commuting semiregular elements rho[i] of
// pairwise coprime orders orders[i] (distinct odd primes for the squarefree
// dihedral groups; a single order such as 9 for Z_9).  Dihedral groups add an
// involution tau inverting every rho[i].
//
// For the standard representations built here, point r is the group word
// tau^e rho_1^a_1 ... rho_s^a_s of rank r in lexicographic (e, a_1, ..., a_s)
// order, so point 0 is the identity word.
struct RegularRep {
  enum class Kind { dihedral, cyclic };

  Kind kind = Kind::dihedral;
  std::vector<std::uint64_t> orders;
  std::vector<Permutation> rho;
  std::optional<Permutation> tau;

  std::size_t degree() const { return rho.empty() ? 0 : rho.front().degree(); }
  // Product of the orders: the order of the cyclic part.
  std::uint64_t cyclic_order() const;
  std::uint64_t order() const { return cyclic_order() * (tau ? 2 : 1); }

  // rho[0], ..., rho[s-1], then tau when present.
  std::vector<Permutation> generators() const;
  GeneratedGroup group() const;
  GeneratedGroup cyclic_part() const;

  // The element tau^e rho_1^a_1 ... rho_s^a_s.
  Permutation word(int e, const std::vector<std::uint64_t>& a) const;
  // Every element, indexed by word rank.  For the standard representation
  // elements()[r] maps point 0 to point r.
  std::vector<Permutation> elements() const;

  // Conjugate copy rho[i]^pi, tau^pi.
  RegularRep conjugate(const Permutation& pi) const;
  // Same group with rho and orders permuted: new rho[i] = old rho[order[i]].
  RegularRep reordered(const std::vector<std::size_t>& order) const;

  // Checks orders, commutation, inversion by tau and regularity.  Throws
  // std::logic_error with a description on the first failure.
  void validate() const;

  // {"primes": [...], "rho": ["1 2 0 ...", ...], "tau": "..."}; cyclic
  // representations have "tau": null.
  nlohmann::json to_json() const;
  static RegularRep from_json(const nlohmann::json& j);

  bool operator==(const RegularRep&) const = default;
};

using DihedralSpec = RegularRep;

constexpr std::size_t kDefaultDegreeCap = 512;

// Right-regular representation of D_{2k}, k = product of the primes.
// Throws std::invalid_argument for repeated, even or non-prime entries, or
// when 2k exceeds the cap.
RegularRep regular_dihedral(const std::vector<std::uint64_t>& primes, std::size_t degree_cap = kDefaultDegreeCap);

// Right-regular representation of Z_n with generator orders given by the
// pairwise coprime factors (e.g. {9} or {3, 5}).
RegularRep regular_cyclic(const std::vector<std::uint64_t>& factors, std::size_t degree_cap = kDefaultDegreeCap);

// An abstract automorphism: rho_i -> rho_i^a[i], and for dihedral groups
// tau -> tau * prod rho_i^b[i].
struct GroupAutomorphism {
  std::vector<std::uint64_t> a;
  std::vector<std::uint64_t> b;

  // Images of the standard generators of `target`, in generators() order.
  std::vector<Permutation> images_in(const RegularRep& target) const;
  bool operator==(const GroupAutomorphism&) const = default;
};

// All automorphisms: k*phi(k) for dihedral groups, phi(k) for cyclic ones.
// Ordered lexicographically by (a, b).
std::vector<GroupAutomorphism> dihedral_automorphisms(const RegularRep& spec);

// Fisher-Yates shuffle of 0..n-1.
Permutation random_permutation(std::size_t n, std::mt19937_64& rng);

// spec^pi for a uniformly random pi drawn from `seed`.
RegularRep random_regular_conjugate(const RegularRep& spec, std::uint64_t seed);

// Nested partitions of a standard representation: level i (0 <= i <= s) is
// the orbit partition of <rho_1, ..., rho_i>, level s+1 is the whole set.
std::vector<Partition> standard_chain(const RegularRep& spec);

// Families of conjugating permutations used to generate test instances.
// uniform:          uniform on Sym(n).
// chain_preserving: uniform on the automorphisms of the standard block tree.
// b1_regular:       an element of R times a permutation fixing every block
//                   of level 1, so <R, R^pi> is block-regular on level 1.
// half:             identity on the half containing 0, uniform on the other.
// commuting:        centralises rho_1.
enum class PiFamily { uniform, chain_preserving, b1_regular, half, commuting };

const char* to_string(PiFamily f);
std::optional<PiFamily> parse_pi_family(std::string_view s);

Permutation random_pi(const RegularRep& spec, PiFamily family, std::mt19937_64& rng);

}  // namespace dci
