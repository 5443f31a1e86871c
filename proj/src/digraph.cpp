#include "dci/digraph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace dci {

ColoredDigraph::ColoredDigraph(std::size_t n, std::vector<std::uint32_t> colors)
    : n_(n), colors_(std::move(colors)) {
  if (colors_.size() != n * n) throw std::invalid_argument("colour table must have n*n entries");
  std::vector<char> diag, off;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      const auto c = colors_[u * n + v];
      auto& mark = (u == v) ? diag : off;
      if (mark.size() <= c) mark.resize(c + 1, 0);
      mark[c] = 1;
      color_count_ = std::max(color_count_, c + 1);
    }
  for (std::size_t c = 0; c < std::min(diag.size(), off.size()); ++c)
    if (diag[c] && off[c]) throw std::invalid_argument("colour used both on and off the diagonal");
}

nlohmann::json ColoredDigraph::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t u = 0; u < n_; ++u)
    rows.push_back(std::vector<std::uint32_t>(colors_.begin() + static_cast<std::ptrdiff_t>(u * n_),
                                              colors_.begin() + static_cast<std::ptrdiff_t>((u + 1) * n_)));
  return {{"n", n_}, {"colors", rows}};
}

ColoredDigraph ColoredDigraph::from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<std::size_t>();
  const auto rows = j.at("colors").get<std::vector<std::vector<std::uint32_t>>>();
  if (rows.size() != n) throw std::invalid_argument("colour table has wrong row count");
  std::vector<std::uint32_t> flat;
  flat.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw std::invalid_argument("colour table has wrong row length");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return ColoredDigraph(n, std::move(flat));
}

ColoredDigraph cayley_digraph(std::span<const Permutation> group_elements, const ConnectionSet& s) {
  const std::size_t n = group_elements.size();
  if (n == 0) throw std::invalid_argument("empty group");
  std::vector<char> hit(n, 0);
  for (const auto& g : group_elements) {
    if (g.degree() != n) throw std::invalid_argument("group elements must act regularly on n points");
    if (hit[g[0]]++) throw std::invalid_argument("group elements must act regularly on n points");
  }
  if (!s.colors.empty() && s.colors.size() != s.elements.size())
    throw std::invalid_argument("one colour per connection-set element");
  std::uint32_t top = 1;
  for (auto c : s.colors) {
    if (c == 0) throw std::invalid_argument("connection-set colours must be positive");
    top = std::max(top, c);
  }
  const std::uint32_t loop_base = top + 1;

  std::vector<std::uint32_t> colors(n * n, 0);
  for (Point v = 0; v < n; ++v) colors[v * n + v] = loop_base;
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    const std::size_t idx = s.elements[i];
    if (idx >= n) throw std::out_of_range("connection-set element out of range");
    const std::uint32_t c = s.colors.empty() ? 1 : s.colors[i];
    const Point sp = group_elements[idx][0];
    for (const auto& g : group_elements) {
      const Point u = g[0], v = g[sp];
      if (u == v)
        colors[u * n + u] = loop_base + c;
      else
        colors[u * n + v] = c;
    }
  }
  return ColoredDigraph(n, std::move(colors));
}

bool is_automorphism(const ColoredDigraph& d, const Permutation& f) {
  const std::size_t n = d.n();
  if (f.degree() != n) return false;
  for (Point u = 0; u < n; ++u)
    for (Point v = 0; v < n; ++v)
      if (d.color(f[u], f[v]) != d.color(u, v)) return false;
  return true;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fold(std::uint64_t trace, std::uint64_t v) { return mix(trace ^ mix(v)); }

// Ordered partition of the vertices: cells are contiguous ranges of `lab`.
struct Cells {
  std::vector<Point> lab;
  std::vector<std::uint32_t> start_of;  // vertex -> start of its cell
  std::vector<std::uint32_t> size_at;   // cell start -> cell size
  std::uint32_t count = 0;
  std::uint64_t trace = 0;

  bool discrete() const { return count == lab.size(); }

  // First smallest non-singleton cell, as its start position.
  std::uint32_t target() const {
    std::uint32_t best = 0, best_size = 0;
    for (std::uint32_t p = 0; p < lab.size(); p += size_at[p]) {
      const auto sz = size_at[p];
      if (sz > 1 && (best_size == 0 || sz < best_size)) {
        best = p;
        best_size = sz;
      }
    }
    return best;
  }

  std::vector<Point> cell_members(std::uint32_t start) const {
    std::vector<Point> m(lab.begin() + start, lab.begin() + start + size_at[start]);
    std::sort(m.begin(), m.end());
    return m;
  }
};

class Refiner {
 public:
  explicit Refiner(const ColoredDigraph& d) : d_(d), n_(d.n()), h_(n_), queued_(n_) {}

  Cells root() {
    Cells c;
    c.lab.resize(n_);
    std::iota(c.lab.begin(), c.lab.end(), Point{0});
    std::stable_sort(c.lab.begin(), c.lab.end(),
                     [&](Point a, Point b) { return d_.color(a, a) < d_.color(b, b); });
    c.start_of.assign(n_, 0);
    c.size_at.assign(n_, 0);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t p = 0; p < n_;) {
      std::uint32_t q = p;
      while (q < n_ && d_.color(c.lab[q], c.lab[q]) == d_.color(c.lab[p], c.lab[p])) ++q;
      c.size_at[p] = q - p;
      for (std::uint32_t r = p; r < q; ++r) c.start_of[c.lab[r]] = p;
      c.trace = fold(c.trace, (static_cast<std::uint64_t>(d_.color(c.lab[p], c.lab[p])) << 32) | (q - p));
      ++c.count;
      queue.push_back(p);
      p = q;
    }
    refine(c, queue);
    return c;
  }

  Cells individualize(const Cells& parent, Point v) {
    Cells c = parent;
    const std::uint32_t s = c.start_of[v], m = c.size_at[s];
    auto it = std::find(c.lab.begin() + s, c.lab.begin() + s + m, v);
    std::iter_swap(c.lab.begin() + s, it);
    c.size_at[s] = 1;
    c.size_at[s + 1] = m - 1;
    for (std::uint32_t p = s + 1; p < s + m; ++p) c.start_of[c.lab[p]] = s + 1;
    ++c.count;
    c.trace = fold(c.trace, (static_cast<std::uint64_t>(s) << 32) | m);
    std::deque<std::uint32_t> queue{s};
    refine(c, queue);
    return c;
  }

 private:
  void refine(Cells& c, std::deque<std::uint32_t>& queue) {
    std::fill(queued_.begin(), queued_.end(), 0);
    for (auto q : queue) queued_[q] = 1;
    std::vector<std::pair<std::uint64_t, Point>> tmp;
    while (!queue.empty() && !c.discrete()) {
      const std::uint32_t w0 = queue.front();
      queue.pop_front();
      queued_[w0] = 0;
      std::fill(h_.begin(), h_.end(), 0);
      for (std::uint32_t p = w0; p < w0 + c.size_at[w0]; ++p) {
        const Point w = c.lab[p];
        for (Point v = 0; v < n_; ++v)
          h_[v] += mix((static_cast<std::uint64_t>(d_.color(v, w)) << 32) | d_.color(w, v));
      }
      for (std::uint32_t p = 0; p < n_;) {
        const std::uint32_t sz = c.size_at[p], next = p + sz;
        if (sz > 1) split(c, p, sz, tmp, queue);
        p = next;
      }
    }
  }

  void split(Cells& c, std::uint32_t p, std::uint32_t sz, std::vector<std::pair<std::uint64_t, Point>>& tmp,
             std::deque<std::uint32_t>& queue) {
    tmp.clear();
    bool uniform = true;
    for (std::uint32_t q = p; q < p + sz; ++q) {
      tmp.emplace_back(h_[c.lab[q]], c.lab[q]);
      if (tmp.back().first != tmp.front().first) uniform = false;
    }
    if (uniform) return;
    std::sort(tmp.begin(), tmp.end());
    std::vector<std::uint32_t> starts;
    for (std::uint32_t i = 0; i < sz; ++i) {
      c.lab[p + i] = tmp[i].second;
      if (i == 0 || tmp[i].first != tmp[i - 1].first) starts.push_back(p + i);
    }
    starts.push_back(p + sz);
    c.trace = fold(c.trace, p);
    std::uint32_t largest = 0;
    for (std::size_t f = 0; f + 1 < starts.size(); ++f) {
      const std::uint32_t a = starts[f], len = starts[f + 1] - a;
      c.size_at[a] = len;
      for (std::uint32_t q = a; q < a + len; ++q) c.start_of[c.lab[q]] = a;
      c.trace = fold(c.trace, (tmp[a - p].first) ^ len);
      if (len > starts[largest + 1] - starts[largest]) largest = static_cast<std::uint32_t>(f);
    }
    c.count += static_cast<std::uint32_t>(starts.size() - 2);
    const bool was_queued = queued_[p];
    for (std::size_t f = 0; f + 1 < starts.size(); ++f) {
      const std::uint32_t a = starts[f];
      if (was_queued ? a == p : f == largest) continue;
      queued_[a] = 1;
      queue.push_back(a);
    }
  }

  const ColoredDigraph& d_;
  std::size_t n_;
  std::vector<std::uint64_t> h_;
  std::vector<char> queued_;
};

struct FirstPath {
  std::vector<Cells> nodes;  // nodes[k] has k individualised vertices
  std::vector<Point> chosen;
  const Cells& leaf() const { return nodes.back(); }
};

FirstPath first_path(Refiner& r) {
  FirstPath fp;
  fp.nodes.push_back(r.root());
  while (!fp.nodes.back().discrete()) {
    const auto t = fp.nodes.back().target();
    const Point v = fp.nodes.back().cell_members(t).front();
    fp.chosen.push_back(v);
    fp.nodes.push_back(r.individualize(fp.nodes.back(), v));
  }
  return fp;
}

bool same_shape(const Cells& a, const Cells& b) { return a.trace == b.trace && a.count == b.count; }

// Depth-first search below `node` (at depth `depth`) for a leaf compatible
// with the reference path; `accept` tests the leaf map.
template <class Accept>
std::optional<Permutation> descend(Refiner& r, const Cells& node, std::size_t depth, const FirstPath& ref,
                                   Accept& accept) {
  if (node.discrete()) {
    const auto& lab1 = ref.leaf().lab;
    std::vector<Point> im(lab1.size());
    for (std::size_t i = 0; i < lab1.size(); ++i) im[lab1[i]] = node.lab[i];
    Permutation f(std::move(im));
    if (accept(f)) return f;
    return std::nullopt;
  }
  const auto t = node.target();
  if (t != ref.nodes[depth].target()) return std::nullopt;
  for (Point u : node.cell_members(t)) {
    Cells child = r.individualize(node, u);
    if (!same_shape(child, ref.nodes[depth + 1])) continue;
    if (auto f = descend(r, child, depth + 1, ref, accept)) return f;
  }
  return std::nullopt;
}

struct Orbits {
  std::vector<Point> parent;
  explicit Orbits(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), Point{0}); }
  Point find(Point a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void add(const Permutation& g) {
    for (Point y = 0; y < parent.size(); ++y) {
      Point a = find(y), b = find(g[y]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
};

}  // namespace

AutomorphismSearchResult automorphism_search(const ColoredDigraph& d) {
  const std::size_t n = d.n();
  AutomorphismSearchResult res;
  res.order = 1;
  if (n == 0) return res;
  Refiner r(d);
  const FirstPath fp = first_path(r);
  res.base = fp.chosen;
  auto accept = [&](const Permutation& f) { return is_automorphism(d, f); };

  Orbits orb(n);
  for (std::size_t l = fp.chosen.size(); l-- > 0;) {
    const Cells& node = fp.nodes[l];
    const Point v = fp.chosen[l];
    std::vector<Point> failed;
    for (Point w : node.cell_members(node.target())) {
      if (w == v || orb.find(w) == orb.find(v)) continue;
      if (std::any_of(failed.begin(), failed.end(), [&](Point x) { return orb.find(x) == orb.find(w); }))
        continue;
      Cells child = r.individualize(node, w);
      std::optional<Permutation> f;
      if (same_shape(child, fp.nodes[l + 1])) f = descend(r, child, l + 1, fp, accept);
      if (f) {
        res.generators.push_back(*f);
        orb.add(*f);
      } else {
        failed.push_back(w);
      }
    }
    std::size_t orbit_size = 0;
    for (Point w : node.cell_members(node.target()))
      if (orb.find(w) == orb.find(v)) ++orbit_size;
    res.order *= orbit_size;
  }
  return res;
}

GeneratedGroup automorphism_group(const ColoredDigraph& d) {
  auto res = automorphism_search(d);
  return GeneratedGroup(d.n(), std::move(res.generators));
}

namespace {

// descend() for isomorphism testing: at each node only one vertex per orbit
// of the pointwise stabiliser (in aut2) of the vertices individualised so far
// is tried, since aut2 permutes the subtrees of such vertices.
template <class Accept>
std::optional<Permutation> descend_pruned(Refiner& r, const Cells& node, std::size_t depth, const FirstPath& ref,
                                          const GeneratedGroup& aut2, std::vector<Point>& prefix, Accept& accept) {
  if (node.discrete() || aut2.generators().empty()) return descend(r, node, depth, ref, accept);
  const auto t = node.target();
  if (t != ref.nodes[depth].target()) return std::nullopt;
  const auto sc = build_chain(aut2, prefix);
  Orbits orb(node.lab.size());
  for (const auto& g : sc.stabilizer_generators(prefix.size())) orb.add(g);
  std::vector<Point> tried;
  for (Point u : node.cell_members(t)) {
    if (std::any_of(tried.begin(), tried.end(), [&](Point w) { return orb.find(w) == orb.find(u); })) continue;
    tried.push_back(u);
    Cells child = r.individualize(node, u);
    if (!same_shape(child, ref.nodes[depth + 1])) continue;
    prefix.push_back(u);
    auto f = descend_pruned(r, child, depth + 1, ref, aut2, prefix, accept);
    prefix.pop_back();
    if (f) return f;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Permutation> are_isomorphic(const ColoredDigraph& d1, const ColoredDigraph& d2) {
  if (d1.n() != d2.n()) return std::nullopt;
  if (d1.n() == 0) return Permutation{};
  Refiner r1(d1), r2(d2);
  const FirstPath fp = first_path(r1);
  Cells root2 = r2.root();
  if (!same_shape(root2, fp.nodes[0])) return std::nullopt;
  auto accept = [&](const Permutation& f) {
    for (Point u = 0; u < d1.n(); ++u)
      for (Point v = 0; v < d1.n(); ++v)
        if (d2.color(f[u], f[v]) != d1.color(u, v)) return false;
    return true;
  };
  const auto aut2 = automorphism_group(d2);
  std::vector<Point> prefix;
  return descend_pruned(r2, root2, 0, fp, aut2, prefix, accept);
}

std::uint64_t refinement_invariant(const ColoredDigraph& d) {
  if (d.n() == 0) return 0;
  Refiner r(d);
  return r.root().trace;
}

std::uint64_t refinement_invariant(const ColoredDigraph& d, Point v) {
  if (v >= d.n()) throw std::out_of_range("vertex out of range");
  Refiner r(d);
  return r.individualize(r.root(), v).trace;
}

}  // namespace dci
