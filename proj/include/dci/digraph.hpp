#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "dci/group.hpp"
#include "dci/perm.hpp"

namespace dci {

// Dense edge-coloured digraph: color(u, v) is the class of the ordered pair
// (u, v).  Diagonal colours never appear off the diagonal.
class ColoredDigraph {
 public:
  // `colors` is row-major n*n.  Throws std::invalid_argument if a colour is
  // used both on and off the diagonal.
  ColoredDigraph(std::size_t n, std::vector<std::uint32_t> colors);

  std::size_t n() const { return n_; }
  std::uint32_t color(Point u, Point v) const { return colors_[static_cast<std::size_t>(u) * n_ + v]; }
  std::uint32_t color_count() const { return color_count_; }
  const std::vector<std::uint32_t>& table() const { return colors_; }

  // {"n": n, "colors": [[...], ...]}
  nlohmann::json to_json() const;
  static ColoredDigraph from_json(const nlohmann::json& j);

  bool operator==(const ColoredDigraph&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> colors_;
  std::uint32_t color_count_ = 0;
};

// Elements of the connection set are indices into the group element list;
// colours, when given, label each element (default: every element colour 1).
struct ConnectionSet {
  std::vector<std::size_t> elements;
  std::vector<std::uint32_t> colors;
};

// Cay(G, S) on the points of a regular permutation group: vertex g is the
// point 0·g, and s ∈ S contributes the arc g -> sg in s's colour.  Colour 0
// means "no arc"; loops (from the identity) get colours shifted past every
// arc colour.
ColoredDigraph cayley_digraph(std::span<const Permutation> group_elements, const ConnectionSet& s);

// True iff f preserves every colour entry.
bool is_automorphism(const ColoredDigraph& d, const Permutation& f);

struct AutomorphismSearchResult {
  std::vector<Permutation> generators;
  std::vector<Point> base;  // individualised vertices of the first path
  BigInt order;
};

// Individualisation-refinement search for the colour-preserving automorphism
// group.  The generators form a strong generating set relative to `base`.
AutomorphismSearchResult automorphism_search(const ColoredDigraph& d);
GeneratedGroup automorphism_group(const ColoredDigraph& d);

// A colour-preserving bijection f with d2.color(f[u], f[v]) == d1.color(u, v),
// or nullopt when none exists.
std::optional<Permutation> are_isomorphic(const ColoredDigraph& d1, const ColoredDigraph& d2);

// Isomorphism invariant: hash of the refinement trace of the root partition.
std::uint64_t refinement_invariant(const ColoredDigraph& d);
// Trace after individualising v and refining.  For vertex-transitive
// digraphs (Cayley digraphs in particular) it does not depend on v and is a
// sharper isomorphism invariant.
std::uint64_t refinement_invariant(const ColoredDigraph& d, Point v);

}  // namespace dci
