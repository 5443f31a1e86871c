#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dci/perm.hpp"

namespace dci {

using BigInt = boost::multiprecision::cpp_int;

class Partition;

// Base and strong generating set with explicit transversals.
//
// Level k stabilises base[0..k) pointwise; its transversal maps base[k] to
// every point of the level's basic orbit.  Built by deterministic
// Schreier-Sims: the base starts with the caller's prefix and is then extended
// by the smallest point moved by each new residue.
class StabilizerChain {
 public:
  struct Level {
    Point base = 0;
    std::vector<Permutation> generators;
    std::vector<Point> orbit;
    std::vector<std::int32_t> position;  // point -> index into orbit, or -1
    std::vector<Permutation> transversal;
    std::vector<Permutation> inverse_transversal;

    bool in_orbit(Point y) const { return position[y] >= 0; }
    const Permutation& rep(Point y) const { return transversal[position[y]]; }
    const Permutation& inverse_rep(Point y) const { return inverse_transversal[position[y]]; }
  };

  struct SiftResult {
    Permutation residue;
    std::size_t level;  // first level where sifting stopped; == depth() when sifted through
  };

  static StabilizerChain build(std::size_t degree, std::span<const Permutation> generators,
                               std::span<const Point> base_prefix = {});

  std::size_t degree() const { return degree_; }
  std::size_t depth() const { return levels_.size(); }
  const std::vector<Level>& levels() const { return levels_; }
  const Level& level(std::size_t k) const { return levels_[k]; }
  std::vector<Point> base() const;

  BigInt order() const;
  SiftResult sift(const Permutation& g, std::size_t from_level = 0) const;
  bool contains(const Permutation& g) const;

  // Uniformly distributed element (product of random transversal entries).
  Permutation random_element(std::mt19937_64& rng) const;

  // Generators of the pointwise stabiliser of base[0..k).
  std::vector<Permutation> stabilizer_generators(std::size_t k) const;

 private:
  std::size_t degree_ = 0;
  std::vector<Level> levels_;
};

// A permutation group given by generators; the stabilizer chain is built on
// first use and cached.  Copies share the cached chain.
class GeneratedGroup {
 public:
  // Throws std::invalid_argument for degree 0 or mismatched generator degrees.
  GeneratedGroup(std::size_t degree, std::vector<Permutation> generators);

  static GeneratedGroup trivial(std::size_t degree);
  static GeneratedGroup symmetric(std::size_t degree);

  std::size_t degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }

  const StabilizerChain& chain() const;
  BigInt order() const { return chain().order(); }
  bool contains(const Permutation& f) const;

  // Text form: "degree n" followed by one permutation per line.
  std::string to_text() const;
  static GeneratedGroup parse(std::string_view text);

 private:
  struct Cache {
    std::once_flag once;
    std::unique_ptr<StabilizerChain> chain;
  };

  std::size_t degree_;
  std::vector<Permutation> generators_;
  std::shared_ptr<Cache> cache_;
};

enum class Semiregularity { regular, semiregular, neither };

std::vector<Point> orbit(const GeneratedGroup& g, Point y);
Partition all_orbits(const GeneratedGroup& g);
StabilizerChain build_chain(const GeneratedGroup& g);
StabilizerChain build_chain(const GeneratedGroup& g, std::span<const Point> base_prefix);
BigInt group_order(const GeneratedGroup& g);
bool contains(const GeneratedGroup& g, const Permutation& f);
GeneratedGroup point_stabilizer(const GeneratedGroup& g, Point y);
Semiregularity semiregularity(const GeneratedGroup& g);
bool is_transitive(const GeneratedGroup& g);

struct BacktrackResult {
  std::optional<Permutation> element;
  bool budget_exhausted = false;
  std::size_t nodes = 0;
};

// Depth-first search through the pointwise stabiliser of base[0..from) for
// an element whose images of base[from..to) are all accepted.  Candidates at
// each level are tried in ascending order of image.  `accept(level, image,
// earlier_images)` sees the images already chosen for levels from..level-1;
// `complete`, when given, vets each full assignment.  The returned element
// acts trivially beyond what the chosen transversal entries force.
using BacktrackAccept = std::function<bool(std::size_t, Point, const std::vector<Point>&)>;
using BacktrackComplete = std::function<bool(const Permutation&)>;
// `prune`, when given, sees the partial element after the image at `level`
// is chosen; it agrees with every completion on the base points so far and
// on any point the remaining stabiliser fixes.
using BacktrackPrune = std::function<bool(std::size_t, const Permutation&)>;
BacktrackResult backtrack_search(const StabilizerChain& sc, std::size_t from, std::size_t to,
                                 const BacktrackAccept& accept, const BacktrackComplete& complete = {},
                                 std::size_t node_budget = 1'000'000, const BacktrackPrune& prune = {});

// t[y] maps x to y for every y in the orbit of x (nullopt elsewhere); each
// t[y] is a word in the generators found by breadth-first search.
std::vector<std::optional<Permutation>> orbit_transversal(std::size_t degree, const std::vector<Permutation>& gens,
                                                         Point x);

// t[y] is the unique element of the regular group <gens> with x*t[y] = y.
// Throws std::invalid_argument if the group is not transitive.
std::vector<Permutation> regular_transversal(std::size_t degree, const std::vector<Permutation>& gens, Point x);

// Breadth-first closure of the generators; returns every element.  Intended
// for small test oracles only; throws std::length_error past `limit`.
std::vector<Permutation> enumerate_elements(const GeneratedGroup& g, std::size_t limit = 1'000'000);

}  // namespace dci
