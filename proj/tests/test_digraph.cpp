#include <gtest/gtest.h>

#include <random>

#include "dci/closure.hpp"
#include "dci/digraph.hpp"
#include "oracles.hpp"

using namespace dci;

namespace {

Permutation shift(std::size_t n, std::size_t k = 1) {
  std::vector<Point> im(n);
  for (Point i = 0; i < n; ++i) im[i] = static_cast<Point>((i + k) % n);
  return Permutation(im);
}

std::vector<Permutation> cyclic_elements(std::size_t n) {
  std::vector<Permutation> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(shift(n, k));
  return out;
}

std::size_t brute_automorphism_count(const ColoredDigraph& d) {
  std::size_t c = 0;
  for (const auto& f : oracle::all_permutations(d.n()))
    if (is_automorphism(d, f)) ++c;
  return c;
}

ColoredDigraph random_digraph(std::size_t n, std::uint32_t colors, std::mt19937_64& rng) {
  std::vector<std::uint32_t> t(n * n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) t[u * n + v] = (u == v) ? colors + static_cast<std::uint32_t>(rng() % 2)
                                                               : static_cast<std::uint32_t>(rng() % colors);
  return ColoredDigraph(n, t);
}

}  // namespace

TEST(Digraph, RejectsSharedDiagonalColour) {
  EXPECT_THROW(ColoredDigraph(2, {0, 0, 1, 1}), std::invalid_argument);
  EXPECT_NO_THROW(ColoredDigraph(2, {2, 0, 1, 2}));
  EXPECT_THROW(ColoredDigraph(2, {0, 1, 1}), std::invalid_argument);
}

TEST(Digraph, JsonRoundTrip) {
  ColoredDigraph d(3, {3, 1, 0, 0, 3, 1, 1, 0, 3});
  EXPECT_EQ(ColoredDigraph::from_json(d.to_json()), d);
  EXPECT_EQ(d.to_json().dump(), R"({"colors":[[3,1,0],[0,3,1],[1,0,3]],"n":3})");
}

TEST(Digraph, CayleyConstruction) {
  const auto z3 = cyclic_elements(3);
  const auto d = cayley_digraph(z3, {{1}, {}});
  for (Point u = 0; u < 3; ++u) EXPECT_EQ(d.color(u, (u + 1) % 3), 1u);
  EXPECT_EQ(d.color(1, 0), 0u);
  const auto empty = cayley_digraph(z3, {});
  for (Point u = 0; u < 3; ++u)
    for (Point v = 0; v < 3; ++v)
      if (u != v) EXPECT_EQ(empty.color(u, v), 0u);
  const auto z6 = cyclic_elements(6);
  const auto cyc = cayley_digraph(z6, {{1, 5}, {}});
  for (Point u = 0; u < 6; ++u) {
    EXPECT_EQ(cyc.color(u, (u + 1) % 6), 1u);
    EXPECT_EQ(cyc.color((u + 1) % 6, u), 1u);
  }
  EXPECT_THROW(cayley_digraph(z6, {{7}, {}}), std::out_of_range);
}

TEST(Digraph, SmallAutomorphismGroups) {
  const auto z3 = cyclic_elements(3);
  EXPECT_EQ(automorphism_group(cayley_digraph(z3, {{1}, {}})).order(), 3);
  std::vector<std::uint32_t> k4(16, 1);
  for (int i = 0; i < 4; ++i) k4[i * 5] = 0;
  EXPECT_EQ(automorphism_group(ColoredDigraph(4, k4)).order(), 24);
  const auto c6 = cayley_digraph(cyclic_elements(6), {{1}, {}});
  EXPECT_EQ(automorphism_group(c6).order(), brute_automorphism_count(c6));
  EXPECT_EQ(automorphism_group(c6).order(), 6);
}

TEST(Digraph, AutomorphismsAgainstBruteForce) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + rng() % 5;
    const auto d = random_digraph(n, 1 + static_cast<std::uint32_t>(rng() % 2), rng);
    const auto res = automorphism_search(d);
    for (const auto& f : res.generators) EXPECT_TRUE(is_automorphism(d, f));
    const auto g = GeneratedGroup(n, res.generators);
    EXPECT_EQ(g.order(), res.order);
    EXPECT_EQ(res.order, brute_automorphism_count(d)) << "trial " << trial;
  }
}

TEST(Digraph, VertexTransitiveAgainstBruteForce) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {6, 7, 8}) {
    const auto els = cyclic_elements(n);
    for (int trial = 0; trial < 10; ++trial) {
      ConnectionSet s;
      for (std::size_t k = 1; k < n; ++k)
        if (rng() % 2) s.elements.push_back(k);
      const auto d = cayley_digraph(els, s);
      const auto g = automorphism_group(d);
      EXPECT_EQ(g.order(), brute_automorphism_count(d));
      for (const auto& r : els) EXPECT_TRUE(g.contains(r));
    }
  }
}

TEST(Digraph, Isomorphism) {
  const auto z3 = cyclic_elements(3);
  const auto fwd = cayley_digraph(z3, {{1}, {}});
  const auto rev = cayley_digraph(z3, {{2}, {}});
  auto id = are_isomorphic(fwd, fwd);
  ASSERT_TRUE(id);
  auto f = are_isomorphic(fwd, rev);
  ASSERT_TRUE(f);
  for (Point u = 0; u < 3; ++u)
    for (Point v = 0; v < 3; ++v) EXPECT_EQ(rev.color((*f)[u], (*f)[v]), fwd.color(u, v));

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + rng() % 4;
    const auto d1 = random_digraph(n, 2, rng);
    const auto pi = oracle::random_permutation(n, rng);
    std::vector<std::uint32_t> t(n * n);
    for (Point u = 0; u < n; ++u)
      for (Point v = 0; v < n; ++v) t[pi[u] * n + pi[v]] = d1.color(u, v);
    const ColoredDigraph d2(n, t);
    auto w = are_isomorphic(d1, d2);
    ASSERT_TRUE(w);
    auto back = are_isomorphic(d2, d1);
    ASSERT_TRUE(back);
    for (Point u = 0; u < n; ++u)
      for (Point v = 0; v < n; ++v) {
        EXPECT_EQ(d2.color((*w)[u], (*w)[v]), d1.color(u, v));
        EXPECT_EQ(d1.color(w->inverse()[u], w->inverse()[v]), d2.color(u, v));
      }
    // Non-isomorphic: brute force decides.
    const auto d3 = random_digraph(n, 2, rng);
    bool any = false;
    for (const auto& g : oracle::all_permutations(n)) {
      bool ok = true;
      for (Point u = 0; u < n && ok; ++u)
        for (Point v = 0; v < n && ok; ++v) ok = d3.color(g[u], g[v]) == d1.color(u, v);
      if (ok) {
        any = true;
        break;
      }
    }
    EXPECT_EQ(are_isomorphic(d1, d3).has_value(), any);
  }
}

TEST(Closure, Orbitals) {
  EXPECT_EQ(orbitals(GeneratedGroup::symmetric(3)).color_count(), 2u);
  EXPECT_EQ(orbitals(GeneratedGroup::trivial(3)).color_count(), 9u);
  EXPECT_EQ(orbitals(GeneratedGroup(4, {shift(4)})).color_count(), 4u);
}

TEST(Closure, SmallClosures) {
  EXPECT_EQ(two_closure(GeneratedGroup(4, {shift(4)})).order(), 4);
  EXPECT_EQ(two_closure(GeneratedGroup::symmetric(6)).order(), 720);
  EXPECT_EQ(two_closure(GeneratedGroup::trivial(4)).order(), 1);
  const GeneratedGroup v(4, {Permutation::from_cycles(4, {{0, 1}, {2, 3}})});
  std::size_t brute = 0;
  for (const auto& f : oracle::all_permutations(4))
    if (preserves_orbitals(v, f)) ++brute;
  EXPECT_EQ(two_closure(v).order(), brute);
}

TEST(Closure, MatchesBruteForceFilter) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng() % 6;
    std::vector<Permutation> gens;
    for (int i = 0, k = 1 + static_cast<int>(rng() % 2); i < k; ++i)
      gens.push_back(oracle::random_permutation(n, rng).pow(static_cast<long long>(1 + rng() % 4)));
    const GeneratedGroup g(n, gens);
    const auto col = orbitals(g);
    const auto c = two_closure(g);
    std::size_t brute = 0;
    for (const auto& f : oracle::all_permutations(n)) {
      const bool keep = preserves_orbitals(col, f);
      brute += keep;
      ASSERT_EQ(c.contains(f), keep);
    }
    EXPECT_EQ(c.order(), brute);
  }
}

TEST(Closure, NonPreservingTransposition) {
  const GeneratedGroup z6(6, {shift(6)});
  EXPECT_TRUE(preserves_orbitals(z6, shift(6)));
  EXPECT_FALSE(preserves_orbitals(z6, Permutation::from_cycles(6, {{0, 1}})));
  EXPECT_THROW(preserves_orbitals(z6, Permutation::identity(5)), std::invalid_argument);
}
