#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dci/dihedral.hpp"
#include "dci/perm.hpp"

namespace dci {

// digraph: every subset S of the group, Cayley digraphs, DCI property.
// graph:   inverse-closed subsets only, CI property.
// colour:  every colouring of the group elements with colours 0..K (0 means
//          "not in S"), colour-preserving isomorphisms, CI^(2) property.
enum class ScanMode { digraph, graph, colour };

const char* to_string(ScanMode m);
std::optional<ScanMode> parse_scan_mode(std::string_view s);

// "z<n>" (cyclic of order n) or "d<n>" (dihedral of order n, n/2 a product
// of distinct odd primes).  Throws std::invalid_argument otherwise.
RegularRep parse_group_name(std::string_view name);

struct ScanOptions {
  ScanMode mode = ScanMode::digraph;
  std::uint32_t colours = 2;          // K for colour mode
  std::size_t exhaustive_limit = 16;  // largest order scanned exhaustively
  std::size_t samples = 0;            // connection sets drawn when sampling
  std::optional<std::uint64_t> seed;  // required when sampling
  std::size_t iso_budget = 1'000'000; // isomorphism tests before giving up
};

struct ScanVerdict {
  enum class Kind { confirmed, counterexample, no_counterexample, inconclusive };
  Kind kind = Kind::inconclusive;
  std::string property;          // "DCI", "CI" or "CI2"
  std::uint64_t space = 0;          // size of the connection set space (0 if huge)
  std::size_t connection_sets = 0;  // enumerated or sampled before stopping
  std::size_t classes = 0;          // automorphism orbits examined
  std::size_t iso_tests = 0;
  bool exhaustive = false;
  // Counterexample: colour vectors indexed by element point (0 = absent),
  // and an isomorphism Cay(S) -> Cay(T).
  std::vector<std::uint32_t> s, t;
  std::optional<Permutation> iso;

  std::string verdict() const;
  nlohmann::json to_json() const;
};

// Automorphisms of a regular group as permutations of its points (element g
// is identified with point 0*g).
std::vector<Permutation> automorphism_permutations(const RegularRep& g);

// Elements of a regular group indexed by the image of point 0.
std::vector<Permutation> elements_by_point(const RegularRep& g);

ScanVerdict dci_scan(const RegularRep& g, const ScanOptions& opts);

}  // namespace dci
