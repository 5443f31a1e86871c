#include "dci/blocks.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace dci {

namespace {

struct UnionFind {
  std::vector<Point> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), Point{0}); }
  Point find(Point a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(Point a, Point b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

void require_degree(const GeneratedGroup& g, const Partition& p) {
  if (g.degree() != p.degree()) throw std::invalid_argument("partition degree mismatch");
}

// The G-images of one block; throws std::logic_error if they overlap.
Partition system_from_block(const GeneratedGroup& g, std::vector<Point> block) {
  std::sort(block.begin(), block.end());
  std::set<std::vector<Point>> seen{block};
  std::vector<std::vector<Point>> blocks{block};
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (const auto& s : g.generators()) {
      std::vector<Point> img;
      img.reserve(blocks[i].size());
      for (Point y : blocks[i]) img.push_back(s[y]);
      std::sort(img.begin(), img.end());
      if (seen.insert(img).second) blocks.push_back(std::move(img));
    }
  }
  try {
    return Partition::from_blocks(g.degree(), std::move(blocks));
  } catch (const std::invalid_argument&) {
    throw std::logic_error("images of the constructed block do not form a partition");
  }
}

Permutation restrict_prefix(const Permutation& f, std::size_t n) {
  std::vector<Point> im(f.images().begin(), f.images().begin() + static_cast<std::ptrdiff_t>(n));
  return Permutation(std::move(im));
}

}  // namespace

bool is_invariant(const GeneratedGroup& g, const Partition& p) {
  require_degree(g, p);
  for (const auto& s : g.generators()) {
    for (const auto& b : p.blocks()) {
      const std::size_t target = p.block_of(s[b.front()]);
      if (p.block(target).size() != b.size()) return false;
      for (Point y : b)
        if (p.block_of(s[y]) != target) return false;
    }
  }
  return true;
}

Partition orbit_partition(const GeneratedGroup& h) { return all_orbits(h); }

Partition minimal_block(const GeneratedGroup& g, std::span<const Point> seed) {
  if (seed.size() < 2) throw std::invalid_argument("seed needs at least two points");
  for (Point y : seed)
    if (y >= g.degree()) throw std::out_of_range("seed point out of range");
  if (!is_transitive(g)) throw std::invalid_argument("minimal_block requires a transitive group");
  UnionFind uf(g.degree());
  std::vector<std::pair<Point, Point>> queue;
  for (std::size_t i = 1; i < seed.size(); ++i)
    if (uf.unite(seed[0], seed[i])) queue.emplace_back(seed[0], seed[i]);
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const auto [a, b] = queue[q];
    for (const auto& s : g.generators()) {
      const Point u = s[a], v = s[b];
      if (uf.unite(u, v)) queue.emplace_back(u, v);
    }
  }
  std::vector<std::size_t> labels(g.degree());
  for (Point y = 0; y < g.degree(); ++y) labels[y] = uf.find(y);
  return Partition::from_labels(labels);
}

std::vector<Partition> minimal_block_systems(const GeneratedGroup& g) {
  std::vector<Partition> found;
  for (Point y = 1; y < g.degree(); ++y) {
    const Point seed[] = {0, y};
    Partition p = minimal_block(g, seed);
    if (p.is_whole()) continue;
    if (std::find(found.begin(), found.end(), p) == found.end()) found.push_back(std::move(p));
  }
  std::vector<Partition> minimal;
  for (const auto& p : found) {
    bool is_min = true;
    for (const auto& q : found)
      if (!(q == p) && refines(q, p)) is_min = false;
    if (is_min) minimal.push_back(p);
  }
  std::sort(minimal.begin(), minimal.end(), [](const Partition& a, const Partition& b) {
    return a.block_containing(0) < b.block_containing(0);
  });
  return minimal;
}

Partition partition_meet(const Partition& c, const Partition& d) {
  if (c.degree() != d.degree()) throw std::invalid_argument("partition degree mismatch");
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  std::vector<std::size_t> labels(c.degree());
  for (Point y = 0; y < c.degree(); ++y) {
    auto key = std::make_pair(c.block_of(y), d.block_of(y));
    auto it = ids.try_emplace(key, ids.size()).first;
    labels[y] = it->second;
  }
  return Partition::from_labels(labels);
}

bool refines(const Partition& b, const Partition& c) {
  if (b.degree() != c.degree()) throw std::invalid_argument("partition degree mismatch");
  for (const auto& blk : b.blocks()) {
    const std::size_t target = c.block_of(blk.front());
    for (Point y : blk)
      if (c.block_of(y) != target) return false;
  }
  return true;
}

Partition partition_join(const GeneratedGroup& g, const Partition& c, const Partition& d,
                         const Partition& halves) {
  require_degree(g, c);
  require_degree(g, d);
  const auto a = c.uniform_block_size();
  const auto b = d.uniform_block_size();
  if (!a || !b) throw std::invalid_argument("partition_join needs uniform block sizes");
  if (!is_invariant(g, c) || !is_invariant(g, d))
    throw std::invalid_argument("partition_join inputs are not invariant");

  const bool even = (*a % 2 == 0) || (*b % 2 == 0);
  Partition cc = c, dd = d;
  if (even) {
    require_degree(g, halves);
    if (halves.block_count() != 2 || !is_invariant(g, halves))
      throw std::invalid_argument("partition_join needs an invariant partition into two blocks");
    if (*a % 2 == 0) cc = partition_meet(c, halves);
    if (*b % 2 == 0) dd = partition_meet(d, halves);
  }

  // Union of the dd-blocks meeting the cc-block of point 0.
  std::vector<bool> in(g.degree(), false);
  for (Point y : cc.block_containing(0))
    for (Point z : dd.block_containing(y)) in[z] = true;
  std::vector<Point> block;
  for (Point y = 0; y < g.degree(); ++y)
    if (in[y]) block.push_back(y);
  Partition joined = system_from_block(g, block);

  if (even) {
    // Double up with the joined block meeting the even block of 0 in the other half.
    const Partition& even_part = (*a % 2 == 0) ? c : d;
    Point partner = static_cast<Point>(g.degree());
    for (Point y : even_part.block_containing(0))
      if (!halves.same_block(0, y)) {
        partner = y;
        break;
      }
    if (partner == g.degree()) throw std::logic_error("even block does not meet both halves");
    std::vector<Point> doubled = joined.block_containing(0);
    const auto& other = joined.block_containing(partner);
    doubled.insert(doubled.end(), other.begin(), other.end());
    joined = system_from_block(g, doubled);
  }

  const std::size_t expected = std::lcm(*a, *b);
  if (joined.uniform_block_size() != expected)
    throw std::logic_error("joined partition does not have lcm-sized blocks");
  return joined;
}

Permutation block_permutation(const Permutation& f, const Partition& p) {
  std::vector<Point> im(p.block_count());
  for (std::size_t b = 0; b < p.block_count(); ++b)
    im[b] = static_cast<Point>(p.block_of(f[p.block(b).front()]));
  return Permutation(std::move(im));
}

GeneratedGroup with_block_action(const GeneratedGroup& g, const Partition& p) {
  require_degree(g, p);
  const std::size_t n = g.degree();
  std::vector<Permutation> gens;
  for (const auto& s : g.generators()) {
    std::vector<Point> im(n + p.block_count());
    for (Point y = 0; y < n; ++y) im[y] = s[y];
    const auto bp = block_permutation(s, p);
    for (std::size_t b = 0; b < p.block_count(); ++b) im[n + b] = static_cast<Point>(n + bp[b]);
    gens.emplace_back(std::move(im));
  }
  return GeneratedGroup(n + p.block_count(), std::move(gens));
}

InducedAction induced_action(const GeneratedGroup& g, const Partition& p) {
  if (!is_invariant(g, p)) throw std::invalid_argument("partition is not invariant");
  std::vector<Permutation> qgens;
  for (const auto& s : g.generators()) qgens.push_back(block_permutation(s, p));
  GeneratedGroup quotient(p.block_count(), std::move(qgens));

  const std::size_t n = g.degree();
  const auto ext = with_block_action(g, p);
  std::vector<Point> prefix(p.block_count());
  std::iota(prefix.begin(), prefix.end(), static_cast<Point>(n));
  const auto sc = build_chain(ext, prefix);
  std::vector<Permutation> kgens;
  for (const auto& h : sc.stabilizer_generators(prefix.size())) kgens.push_back(restrict_prefix(h, n));
  return {std::move(quotient), GeneratedGroup(n, std::move(kgens))};
}

bool is_block_regular(const GeneratedGroup& g, const Partition& p) {
  if (!is_invariant(g, p)) throw std::invalid_argument("partition is not invariant");
  std::vector<Permutation> qgens;
  for (const auto& s : g.generators()) qgens.push_back(block_permutation(s, p));
  GeneratedGroup quotient(p.block_count(), std::move(qgens));
  return semiregularity(quotient) != Semiregularity::neither;
}

}  // namespace dci
