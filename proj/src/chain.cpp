#include "dci/chain.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "dci/blocks.hpp"
#include "dci/group.hpp"

namespace dci {

namespace {

std::vector<std::vector<std::size_t>> all_orderings(std::size_t s) {
  std::vector<std::size_t> ord(s);
  std::iota(ord.begin(), ord.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do out.push_back(ord);
  while (std::next_permutation(ord.begin(), ord.end()));
  return out;
}

std::vector<Permutation> pick(const std::vector<Permutation>& gens, const std::vector<std::size_t>& ord) {
  std::vector<Permutation> out;
  for (auto i : ord) out.push_back(gens[i]);
  return out;
}

// Orbit partitions of the cyclic parts of R and Rp for one prime ordering.
struct Targets {
  std::vector<std::size_t> ord;
  std::vector<Partition> p;  // from R
  std::vector<Partition> q;  // from Rp
};

bool maps_onto(const Targets& t, const Permutation& beta) {
  for (std::size_t i = 0; i < t.p.size(); ++i)
    if (!(t.q[i].image(beta) == t.p[i])) return false;
  return true;
}

GeneratedGroup joined(const RegularRep& a, const RegularRep& b) {
  auto gens = a.generators();
  for (auto& g : b.generators()) gens.push_back(g);
  return GeneratedGroup(a.degree(), std::move(gens));
}

std::vector<Permutation> powers(const Permutation& f, std::uint64_t p) {
  std::vector<Permutation> out{Permutation::identity(f.degree())};
  for (std::uint64_t k = 1; k < p; ++k) out.push_back(out.back() * f);
  return out;
}

// Conjugates c.rp inside the kernel of <c.r, c.rp> on level i so that the
// block alignment holds at level i.  Returns false if the search fails.
bool align_level(NestedChain& c, std::size_t i, const ChainSearchOptions& opts) {
  const Partition& upper = c.partitions[i];
  const Partition& lower = c.partitions[i - 1];
  const std::uint64_t p = c.r.orders[i - 1];
  const std::size_t n = c.r.degree();

  auto aligned = [&](const Permutation& sigma) {
    for (const auto& b : upper.blocks())
      if (!alignment_exponent(c.r.rho[i - 1], sigma, p, lower, b)) return false;
    return true;
  };
  if (aligned(c.rp.rho[i - 1])) return true;

  auto kernel = induced_action(joined(c.r, c.rp), upper).kernel;
  auto ext = with_block_action(kernel, lower);
  const auto sigma_bar = block_permutation(c.rp.rho[i - 1], lower);
  const auto rho_pows = powers(block_permutation(c.r.rho[i - 1], lower), p);

  // Per upper block, its lower blocks in sigma-cycle order.
  std::vector<Point> prefix;
  for (const auto& b : upper.blocks()) {
    Point lb = static_cast<Point>(lower.block_of(b.front()));
    for (std::uint64_t j = 0; j < p; ++j, lb = sigma_bar[lb]) prefix.push_back(static_cast<Point>(n + lb));
  }
  auto sc = build_chain(ext, prefix);

  auto accept = [&](std::size_t level, Point img, const std::vector<Point>& imgs) {
    const std::size_t j = level % p;
    if (j == 0) return true;
    const Point c0 = imgs[level - j] - static_cast<Point>(n);
    const Point cj = img - static_cast<Point>(n);
    if (j == 1) return cj != c0;
    const Point c1 = imgs[level - j + 1] - static_cast<Point>(n);
    for (std::uint64_t k = 1; k < p; ++k)
      if (rho_pows[k][c0] == c1) return rho_pows[(k * j) % p][c0] == cj;
    return false;
  };
  std::vector<Point> first_n(n);
  std::iota(first_n.begin(), first_n.end(), 0);
  auto complete = [&](const Permutation& kappa) {
    return aligned(c.rp.rho[i - 1].conjugate(kappa.restrict_to(first_n)));
  };
  auto res = backtrack_search(sc, 0, prefix.size(), accept, complete, opts.node_budget);
  c.nodes += res.nodes;
  if (!res.element) return false;
  auto kappa = res.element->restrict_to(first_n);
  c.rp = c.rp.conjugate(kappa);
  c.beta = c.beta * kappa;
  ++c.alignment_steps;
  return true;
}

}  // namespace

std::vector<Partition> cumulative_orbits(std::size_t degree, const std::vector<Permutation>& gens) {
  std::vector<Partition> out;
  for (std::size_t i = 1; i <= gens.size(); ++i)
    out.push_back(orbit_partition(
        GeneratedGroup(degree, std::vector<Permutation>(gens.begin(), gens.begin() + static_cast<long>(i)))));
  return out;
}

std::optional<std::uint64_t> alignment_exponent(const Permutation& rho, const Permutation& sigma, std::uint64_t p,
                                                const Partition& lower, const std::vector<Point>& block) {
  if (block.empty()) return std::nullopt;
  const auto rho_pows = powers(rho, p);
  const Point y0 = block.front();
  std::optional<std::uint64_t> k;
  for (std::uint64_t e = 1; e < p && !k; ++e)
    if (lower.same_block(sigma[y0], rho_pows[e][y0])) k = e;
  if (!k) return std::nullopt;
  for (Point y : block)
    if (!lower.same_block(sigma[y], rho_pows[*k][y])) return std::nullopt;
  return k;
}

nlohmann::json NestedChain::diagnostics() const {
  nlohmann::json primes = nlohmann::json::array();
  for (auto q : r.orders) primes.push_back(q);
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& p : partitions) sizes.push_back(p.block(0).size());
  return {{"strategy", strategy},   {"primes", primes},
          {"block_sizes", sizes},   {"nodes", nodes},
          {"random_draws", random_draws}, {"alignment_steps", alignment_steps},
          {"beta", beta.to_string()}};
}

NestedChain find_nested_chain(const RegularRep& r, const RegularRep& rp, const ChainSearchOptions& opts) {
  if (r.degree() != rp.degree() || r.orders != rp.orders || !r.tau || !rp.tau)
    throw std::invalid_argument("find_nested_chain needs two dihedral representations with the same primes");
  const std::size_t n = r.degree();
  const std::size_t s = r.orders.size();

  std::vector<Targets> targets;
  for (auto& ord : all_orderings(s))
    targets.push_back({ord, cumulative_orbits(n, pick(r.rho, ord)), cumulative_orbits(n, pick(rp.rho, ord))});

  NestedChain c;
  const Targets* hit = nullptr;
  for (const auto& t : targets)
    if (t.p == t.q) {
      hit = &t;
      c.beta = Permutation::identity(n);
      c.strategy = "direct";
      break;
    }

  std::optional<GeneratedGroup> g;
  if (!hit) {
    g.emplace(joined(r, rp));
    const auto& sc = g->chain();
    const auto base = sc.base();
    // fresh[l]: points first fixed by the pointwise stabiliser of base[0..l].
    std::vector<std::vector<Point>> fresh(sc.depth());
    std::vector<bool> known(n, false);
    for (std::size_t l = 0; l < sc.depth(); ++l)
      for (Point w = 0; w < n; ++w) {
        bool fixed = true;
        if (l + 1 < sc.depth())
          for (const auto& gen : sc.level(l + 1).generators) fixed = fixed && gen.fixes(w);
        if (fixed && !known[w]) {
          known[w] = true;
          fresh[l].push_back(w);
        }
      }
    for (const auto& t : targets) {
      std::vector<Point> seen;
      auto prune = [&](std::size_t level, const Permutation& f) {
        seen.clear();
        for (std::size_t l = 0; l <= level; ++l)
          for (Point w : fresh[l]) seen.push_back(w);
        for (Point w : fresh[level])
          for (Point v : seen)
            for (std::size_t i = 0; i < s; ++i)
              if (t.q[i].same_block(w, v) != t.p[i].same_block(f[w], f[v])) return false;
        return true;
      };
      auto accept = [&](std::size_t level, Point img, const std::vector<Point>& imgs) {
        const Point b = base[level];
        for (std::size_t l = 0; l < level; ++l)
          for (std::size_t i = 0; i < s; ++i)
            if (t.q[i].same_block(b, base[l]) != t.p[i].same_block(img, imgs[l])) return false;
        return true;
      };
      auto res = backtrack_search(sc, 0, sc.depth(), accept, [&](const Permutation& f) { return maps_onto(t, f); },
                                  opts.node_budget, prune);
      c.nodes += res.nodes;
      if (res.element) {
        hit = &t;
        c.beta = *res.element;
        c.strategy = "transporter";
        break;
      }
    }
  }

  if (!hit) {
    std::mt19937_64 rng(opts.seed);
    const auto& sc = g->chain();
    for (std::size_t trial = 0; trial < opts.random_trials && !hit; ++trial) {
      auto beta = sc.random_element(rng);
      ++c.random_draws;
      for (const auto& t : targets)
        if (maps_onto(t, beta)) {
          hit = &t;
          c.beta = beta;
          c.strategy = "random";
          break;
        }
    }
  }
  if (!hit) {
    std::ostringstream msg;
    msg << "nested chain search exhausted: nodes " << c.nodes << ", random draws " << c.random_draws;
    throw ChainSearchExhausted(msg.str());
  }

  c.prime_order = hit->ord;
  c.r = r.reordered(hit->ord);
  c.rp = rp.conjugate(c.beta).reordered(hit->ord);
  c.partitions.push_back(Partition::singletons(n));
  for (const auto& p : hit->p) c.partitions.push_back(p);
  c.partitions.push_back(Partition::whole(n));

  for (std::size_t i = s; i >= 1; --i)
    if (!align_level(c, i, opts)) {
      std::ostringstream msg;
      msg << "block alignment search exhausted at level " << i << ": " << c.diagnostics().dump();
      throw ChainSearchExhausted(msg.str());
    }
  return c;
}

std::vector<std::string> check_nested_chain(const NestedChain& c) {
  std::vector<std::string> fails;
  const std::size_t n = c.r.degree();
  const std::size_t s = c.r.orders.size();
  auto fail = [&](std::string m) { fails.push_back(std::move(m)); };
  if (c.partitions.size() != s + 2) {
    fail("chain has " + std::to_string(c.partitions.size()) + " levels, expected " + std::to_string(s + 2));
    return fails;
  }
  if (!(c.partitions.front() == Partition::singletons(n))) fail("level 0 is not the singleton partition");
  if (!c.partitions.back().is_whole()) fail("top level is not the whole set");

  const auto po = cumulative_orbits(n, c.r.rho);
  const auto qo = cumulative_orbits(n, c.rp.rho);
  auto g = joined(c.r, c.rp);
  std::size_t size = 1;
  for (std::size_t i = 1; i <= s + 1; ++i) {
    const auto& p = c.partitions[i];
    const std::string lvl = "level " + std::to_string(i) + ": ";
    if (!is_invariant(g, p)) fail(lvl + "not invariant");
    if (!refines(c.partitions[i - 1], p) || c.partitions[i - 1] == p) fail(lvl + "not a proper coarsening");
    if (i > s) continue;
    size *= c.r.orders[i - 1];
    if (p.uniform_block_size() != size || p.block_count() != n / size) fail(lvl + "wrong block sizes");
    if (!(po[i - 1] == p)) fail(lvl + "differs from the orbits of the first rho generators");
    if (!(qo[i - 1] == p)) fail(lvl + "differs from the orbits of the first sigma generators");
    for (const auto& b : p.blocks())
      if (!alignment_exponent(c.r.rho[i - 1], c.rp.rho[i - 1], c.r.orders[i - 1], c.partitions[i - 1], b)) {
        fail(lvl + "sigma is not a fixed power of rho on the block of " + std::to_string(b.front()));
        break;
      }
  }
  if (c.partitions[s].block_count() != 2) fail("level s does not have two blocks");
  return fails;
}

}  // namespace dci
