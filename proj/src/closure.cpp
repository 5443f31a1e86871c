#include "dci/closure.hpp"

#include <numeric>
#include <stdexcept>

namespace dci {

ColoredDigraph orbitals(const GeneratedGroup& g) {
  const std::size_t n = g.degree();
  std::vector<std::uint32_t> parent(n * n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& s : g.generators())
    for (Point u = 0; u < n; ++u)
      for (Point v = 0; v < n; ++v) {
        auto a = find(static_cast<std::uint32_t>(u * n + v));
        auto b = find(static_cast<std::uint32_t>(s[u] * n + s[v]));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  // Roots are minimal pairs, so numbering roots in index order numbers the
  // orbitals by their first pair.
  std::vector<std::uint32_t> id(n * n, 0), colors(n * n);
  std::uint32_t next = 0;
  for (std::uint32_t i = 0; i < n * n; ++i) {
    const auto r = find(i);
    if (r == i) id[i] = next++;
    colors[i] = id[r];
  }
  return ColoredDigraph(n, std::move(colors));
}

GeneratedGroup two_closure(const GeneratedGroup& g) { return automorphism_group(orbitals(g)); }

bool preserves_orbitals(const ColoredDigraph& orbital_colors, const Permutation& f) {
  if (f.degree() != orbital_colors.n()) throw std::invalid_argument("degree mismatch");
  return is_automorphism(orbital_colors, f);
}

bool preserves_orbitals(const GeneratedGroup& g, const Permutation& f) {
  return preserves_orbitals(orbitals(g), f);
}

}  // namespace dci
