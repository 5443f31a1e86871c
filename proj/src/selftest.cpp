#include "dci/selftest.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dci/blocks.hpp"
#include "dci/closure.hpp"
#include "dci/group.hpp"
#include "dci/pipeline.hpp"

namespace dci {

namespace {

constexpr std::size_t kKeptFailures = 20;

// Per-instance bookkeeping for one suite.
struct Ctx {
  SuiteReport& report;
  std::size_t instance;
  std::mt19937_64 rng;
  bool checked = false;

  void check(bool ok, const std::string& what) {
    ++report.checks;
    checked = true;
    if (ok) return;
    ++report.failure_count;
    if (report.failures.size() < kKeptFailures)
      report.failures.push_back("instance " + std::to_string(instance) + ": " + what);
  }
  void count(const std::string& c) { ++report.tally[c]; }
};

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::seed_seq seq{seed, a, b};
  return std::mt19937_64(seq);
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

std::string pt(Point y) { return std::to_string(y); }

bool commute(const Permutation& a, const Permutation& b) { return a * b == b * a; }

bool fixes_blocks(const Permutation& f, const Partition& p) {
  for (Point y = 0; y < f.degree(); ++y)
    if (!p.same_block(y, f[y])) return false;
  return true;
}

bool maps_set(const std::vector<Permutation>& gens, const std::vector<Point>& d) {
  for (const auto& g : gens)
    for (Point y : d)
      if (!std::binary_search(d.begin(), d.end(), g[y])) return false;
  return true;
}

// The k in 1..p-1 with sigma = rho^k at every point of the block, if any.
std::optional<std::uint64_t> pointwise_power(const Permutation& sigma, const Permutation& rho, std::uint64_t p,
                                             const std::vector<Point>& block) {
  auto r = rho;
  for (std::uint64_t k = 1; k < p; ++k, r = r * rho) {
    bool all = true;
    for (Point y : block)
      if (sigma[y] != r[y]) {
        all = false;
        break;
      }
    if (all) return k;
  }
  return std::nullopt;
}

// Cyclic part of a representation with exponent vectors.
struct CyclicElement {
  std::vector<std::uint64_t> a;
  Permutation f;
};

std::vector<CyclicElement> cyclic_elements(const RegularRep& r) {
  std::vector<CyclicElement> out;
  std::vector<std::uint64_t> a(r.orders.size(), 0);
  while (true) {
    out.push_back({a, r.word(0, a)});
    std::size_t i = a.size();
    while (i > 0 && ++a[i - 1] == r.orders[i - 1]) a[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

bool same_subgroup(const GeneratedGroup& a, const GeneratedGroup& b) {
  for (const auto& g : a.generators())
    if (!b.contains(g)) return false;
  for (const auto& g : b.generators())
    if (!a.contains(g)) return false;
  return true;
}

// Orbit partition of an arbitrary generator list.
Partition orbits_of(std::size_t n, const std::vector<Permutation>& gens) {
  return orbit_partition(GeneratedGroup(n, gens));
}

// Invariant partitions with prime blocks that are orbits of one rho_j.
std::vector<std::pair<Partition, std::size_t>> prime_orbit_partitions(const ConjugationInstance& inst) {
  std::vector<std::pair<Partition, std::size_t>> out;
  const auto& g = inst.group();
  for (std::size_t j = 1; j <= inst.s(); ++j) {
    auto c = orbits_of(g.degree(), {inst.rho(j)});
    if (is_invariant(g, c)) out.emplace_back(std::move(c), j);
  }
  return out;
}

void suite_x_blocks(const ConjugationInstance& inst, Ctx& ctx) {
  const auto& g = inst.group();
  const std::size_t n = g.degree();
  std::vector<Partition> stab_orbits;
  for (Point y = 0; y < n; ++y) stab_orbits.push_back(orbit_partition(point_stabilizer(g, y)));

  for (const auto& [b, j] : prime_orbit_partitions(inst)) {
    const std::string tag = "B = orbits of rho_" + std::to_string(j) + ": ";
    Partition x;
    try {
      x = equiv_b_partition(g, b, inst.rho(j));
    } catch (const std::logic_error& e) {
      ctx.check(false, tag + e.what());
      continue;
    }
    // Oracle: the relation from stabilisers rebuilt per point.
    std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
    for (Point y = 0; y < n; ++y)
      for (Point z = 0; z < n; ++z) {
        const auto& bz = b.block_containing(z);
        rel[y][z] = std::any_of(bz.begin(), bz.end(), [&](Point w) { return !stab_orbits[y].same_block(w, bz[0]); });
      }
    bool symmetric = true, reflexive = true;
    std::vector<std::size_t> label(n);
    std::iota(label.begin(), label.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
      return label[a] == a ? a : label[a] = find(label[a]);
    };
    for (Point y = 0; y < n; ++y) {
      reflexive = reflexive && rel[y][y];
      for (Point z = 0; z < n; ++z) {
        symmetric = symmetric && rel[y][z] == rel[z][y];
        if (rel[y][z]) label[find(y)] = find(z);
      }
    }
    for (Point y = 0; y < n; ++y) label[y] = find(y);
    ctx.check(reflexive, tag + "relation not reflexive");
    ctx.check(symmetric, tag + "relation not symmetric");
    ctx.check(Partition::from_labels(label) == x, tag + "classes differ from the per-point oracle");
    ctx.check(is_invariant(g, x), tag + "classes not invariant");
    ctx.check(refines(b, x), tag + "classes do not coarsen B");
  }
}

void sigmas_on_x(const ConjugationInstance& inst, Ctx& ctx) {
  const auto& g = inst.group();
  const std::size_t n = g.degree();
  const auto& b = inst.level(1);
  const auto x = equiv_b_partition(g, b, inst.rho(1));
  ctx.check(refines(b, x), "X does not coarsen B");

  for (std::size_t j = 1; j <= inst.s(); ++j) {
    auto c = orbits_of(n, {inst.rho(j)});
    if (is_invariant(g, c)) ctx.check(refines(c, x), "X does not coarsen the orbits of rho_" + std::to_string(j));
  }

  if (commute(inst.sigma(1), inst.rho(1))) ctx.count("sigma_1 commutes with rho_1");
  if (commute(inst.sigma(1), inst.rho(1)))
    for (const auto& blk : x.blocks())
      ctx.check(pointwise_power(inst.sigma(1), inst.rho(1), inst.prime(1), blk).has_value(),
                "sigma_1 is no fixed power of rho_1 on the X-block of " + pt(blk[0]));

  for (std::size_t j = 2; j <= inst.s(); ++j) {
    auto c = orbits_of(n, {inst.rho(1), inst.rho(j)});
    if (!is_invariant(g, c) || !refines(c, x) || !commute(inst.sigma(j), inst.rho(1))) continue;
    ctx.count("C between B and X, sigma_j commutes with rho_1");
    for (const auto& blk : c.blocks())
      ctx.check(pointwise_power(inst.sigma(j), inst.rho(j), inst.prime(j), blk).has_value(),
                "sigma_" + std::to_string(j) + " is no fixed power of rho_" + std::to_string(j) +
                    " on the block of " + pt(blk[0]));
  }
}

void suite_sigmas_on_x(const ConjugationInstance& inst, Ctx& ctx) {
  sigmas_on_x(inst, ctx);
  // After sigma_1 = rho_1 every sigma_j commutes with rho_1.
  if (is_block_regular(inst.group(), inst.level(1))) sigmas_on_x(conjugated(inst, reg_on_b1_conjugator(inst)), ctx);
}

void suite_pth_power(const ConjugationInstance& inst, Ctx& ctx) {
  const std::size_t n = inst.r().degree();
  const auto cyc = cyclic_elements(inst.r());
  for (std::size_t i = 1; i <= inst.s(); ++i) {
    const auto& sigma = inst.sigma(i);
    for (Point y = 0; y < n; ++y) {
      auto it = std::find_if(cyc.begin(), cyc.end(), [&](const CyclicElement& c) { return c.f[y] == sigma[y]; });
      if (it == cyc.end() || it->a[i - 1] == 0) continue;
      bool along = true;
      for (Point z = sigma[y]; along && z != y; z = sigma[z]) along = it->f[z] == sigma[z];
      if (!along) continue;
      ctx.count("relation holds along the orbit");
      bool alpha_trivial = true;
      for (std::size_t m = 0; m < inst.s(); ++m)
        if (m != i - 1 && it->a[m] != 0) alpha_trivial = false;
      ctx.check(alpha_trivial, "nontrivial alpha for sigma_" + std::to_string(i) + " at " + pt(y));
      const auto step = inst.rho(i).pow(static_cast<long long>(it->a[i - 1]));
      Point a = y, b = y;
      bool powers = true;
      for (std::uint64_t j = 0; j < inst.prime(i); ++j, a = sigma[a], b = step[b]) powers = powers && a == b;
      ctx.check(powers, "sigma_" + std::to_string(i) + " powers differ from rho powers at " + pt(y));
    }
  }
}

void suite_gx_blocks(const ConjugationInstance& inst, Ctx& ctx) {
  const auto& g = inst.group();
  const std::size_t n = g.degree();

  std::vector<GeneratedGroup> stab;
  for (Point y = 0; y < n; ++y) stab.push_back(point_stabilizer(g, y));
  const auto k0 = stabilizer_class_partition(g, Partition::singletons(n));
  ctx.check(is_invariant(g, k0), "point-stabiliser classes not invariant");
  for (Point y = 0; y < n; ++y)
    for (Point z = y + 1; z < n; ++z)
      ctx.check(k0.same_block(y, z) == same_subgroup(stab[y], stab[z]),
                "point-stabiliser class of " + pt(y) + ", " + pt(z) + " disagrees with subgroup equality");

  const auto& b1 = inst.level(1);
  const auto k1 = stabilizer_class_partition(g, b1);
  ctx.check(is_invariant(g, k1), "block-stabiliser classes not invariant");
  const auto quotient = induced_action(g, b1).quotient;
  std::vector<GeneratedGroup> qstab;
  for (Point c = 0; c < b1.block_count(); ++c) qstab.push_back(point_stabilizer(quotient, c));
  for (Point y = 0; y < n; ++y)
    for (Point z = y + 1; z < n; ++z)
      ctx.check(k1.same_block(y, z) == same_subgroup(qstab[b1.block_of(y)], qstab[b1.block_of(z)]),
                "block-stabiliser class of " + pt(y) + ", " + pt(z) + " disagrees with subgroup equality");

  const auto cyc = cyclic_elements(inst.r());
  for (const auto& c : cyc) {
    const Point y = c.f[inst.x];
    if (y == inst.x || !k0.same_block(inst.x, y)) continue;
    ctx.count("x shares its stabiliser with a cyclic image");
    ctx.check(is_invariant(g, orbits_of(n, {c.f})), "orbits of the cyclic element taking x to " + pt(y) +
                                                          " are not invariant");
  }
}

void suite_commuting(const ConjugationInstance& inst, Ctx& ctx) {
  std::optional<ConjugationInstance> cur;
  std::size_t i = 0;
  bool direct = true;
  for (std::size_t m = 1; m <= inst.s() && !i; ++m)
    if (inst.sigma(m) == inst.rho(m)) {
      cur = inst;
      i = m;
    }
  if (!i && is_block_regular(inst.group(), inst.level(1))) {
    cur = conjugated(inst, reg_on_b1_conjugator(inst));
    direct = false;
    if (cur->sigma(1) == cur->rho(1)) i = 1;
  }
  if (!i) return;
  ctx.count(direct ? "sigma_i = rho_i already" : "after the level 1 conjugator");

  const auto& g = cur->group();
  const auto& rho = cur->rho(i);
  const auto& f1 = cur->f1();
  std::vector<Permutation> elems = g.generators();
  for (int k = 0; k < 30; ++k) elems.push_back(g.chain().random_element(ctx.rng));
  for (const auto& e : elems) {
    const bool keeps = std::binary_search(f1.begin(), f1.end(), e[f1.front()]);
    ctx.check(keeps == commute(e, rho), "fixing F1 and commuting with rho_" + std::to_string(i) + " disagree");
    ctx.check(!keeps == (rho.conjugate(e) == rho.inverse()),
              "swapping the halves and inverting rho_" + std::to_string(i) + " disagree");
  }
}

void suite_commuting_refined(const ConjugationInstance& inst, Ctx& ctx) {
  const auto& g = inst.group();
  std::vector<Partition> cands;
  for (std::size_t l = 1; l <= inst.s(); ++l) cands.push_back(inst.level(l));
  cands.push_back(equiv_b_partition(g, inst.level(1), inst.rho(1)));
  for (const auto& b : cands) {
    if (b.is_whole() || !is_invariant(g, b)) continue;
    for (std::size_t i = 1; i <= inst.s(); ++i) {
      if (!fixes_blocks(inst.sigma(i), b) || !fixes_blocks(inst.rho(i), b)) continue;
      bool powered = true;
      for (const auto& blk : b.blocks())
        if (!pointwise_power(inst.sigma(i), inst.rho(i), inst.prime(i), blk)) {
          powered = false;
          break;
        }
      if (!powered) continue;
      for (std::size_t j = 1; j <= inst.s(); ++j) {
        if (!fixes_blocks(inst.sigma(j), b) || !fixes_blocks(inst.rho(j), b)) continue;
        ctx.count(i == j ? "hypotheses hold, i = j" : "hypotheses hold, i != j");
        ctx.check(commute(inst.sigma(j), inst.rho(i)),
                  "sigma_" + std::to_string(j) + " does not commute with rho_" + std::to_string(i));
      }
    }
  }
}

// Trichotomy for a group fixing the prime-size set d.
void check_affine(const GeneratedGroup& h, const std::vector<Point>& d, Ctx& ctx, const std::string& tag) {
  const std::size_t p = d.size();
  std::vector<Point> local(h.degree(), 0);
  for (std::size_t k = 0; k < p; ++k) local[d[k]] = static_cast<Point>(k);
  std::vector<Permutation> restricted;
  for (const auto& gen : h.generators()) {
    std::vector<Point> img(p);
    for (std::size_t k = 0; k < p; ++k) img[k] = local[gen[d[k]]];
    restricted.emplace_back(std::move(img));
  }
  const auto orb = orbits_of(p, restricted);
  if (orb.is_trivial()) {
    ctx.count("fixed pointwise");
    return ctx.check(true, tag);
  }
  if (orb.is_whole()) {
    ctx.count("transitive");
    bool found = false;
    for (int t = 0; t < 500 && !found; ++t) {
      const auto e = t < static_cast<int>(h.generators().size()) ? h.generators()[t] : h.chain().random_element(ctx.rng);
      const auto o = e.order();
      if (o % p) continue;
      const auto f = e.pow(static_cast<long long>(o / p));
      found = f[d[0]] != d[0];  // order p and moving a point of d: a p-cycle there
    }
    return ctx.check(found, tag + ": transitive but no order-p element found moving the set");
  }
  ctx.count("intransitive, not pointwise");
  std::size_t fixed = 0;
  for (const auto& blk : orb.blocks()) fixed += blk.size() == 1;
  ctx.check(fixed == 1, tag + ": intransitive with " + std::to_string(fixed) + " fixed points");
}

void suite_gy_affine(const ConjugationInstance& inst, Ctx& ctx) {
  const auto& g = inst.group();
  const std::size_t n = g.degree();
  std::vector<std::vector<Point>> sets;
  for (const auto& [c, j] : prime_orbit_partitions(inst))
    for (const auto& blk : c.blocks()) sets.push_back(blk);
  std::vector<Point> ys{inst.x};
  for (int k = 0; k < 4; ++k) ys.push_back(static_cast<Point>(pick(ctx.rng, n)));
  for (Point y : ys) {
    const auto h = point_stabilizer(g, y);
    for (const auto& d : sets)
      if (maps_set(h.generators(), d)) check_affine(h, d, ctx, "stabiliser of " + pt(y) + " on the set of " + pt(d[0]));
  }
  const auto kernel = induced_action(g, inst.level(1)).kernel;
  for (const auto& d : inst.level(1).blocks()) check_affine(kernel, d, ctx, "level 1 kernel on the block of " + pt(d[0]));
}

void suite_cyclic_enough(const ConjugationInstance& inst, Ctx& ctx) {
  for (const RegularRep* rep : {&inst.r(), &inst.rp()}) {
    const std::size_t n = rep->degree();
    const auto cyc = cyclic_elements(*rep);
    const Point x = inst.x;
    std::vector<Point> other;
    std::vector<bool> in_first(n, false);
    for (const auto& c : cyc) in_first[c.f[x]] = true;
    for (Point y = 0; y < n; ++y)
      if (!in_first[y]) other.push_back(y);
    const auto full = rep->group();
    for (int t = 0; t < 3; ++t) {
      const Point y = other[pick(ctx.rng, other.size())];
      // Reflection through x and y: x c -> y c^-1 and y c -> x c^-1.
      std::vector<Point> img(n);
      for (const auto& c : cyc) {
        const auto ci = c.f.inverse();
        img[c.f[x]] = ci[y];
        img[c.f[y]] = ci[x];
      }
      const Permutation tau(img);
      bool inverts = true;
      for (const auto& rho : rep->rho) inverts = inverts && rho.conjugate(tau) == rho.inverse();
      auto gens = rep->rho;
      gens.push_back(tau);
      const GeneratedGroup other_group(n, gens);
      const bool regular = (tau * tau).is_identity() && inverts && is_transitive(other_group) &&
                           other_group.order() == BigInt(n);
      ctx.check(regular, "constructed reflection does not give a regular dihedral group");
      if (regular) ctx.check(same_subgroup(other_group, full), "two regular dihedral groups share C but differ");
    }
  }
}

// Pairwise membership sweep: every (u, v) has h in g with (u, v)h = (u, v)beta.
bool all_pairs_witnessed(const GeneratedGroup& g, const Permutation& beta, Ctx& ctx) {
  const std::size_t n = g.degree();
  for (Point u = 0; u < n; ++u) {
    const Point base[] = {u};
    auto sc = build_chain(g, base);
    if (!sc.level(0).in_orbit(beta[u])) return false;
    const auto t = sc.level(0).rep(beta[u]);
    const auto ti = t.inverse();
    const auto gens_u = sc.stabilizer_generators(1);
    std::vector<std::optional<Permutation>> tr;
    for (Point v = 0; v < n; ++v) {
      const Point target = ti[beta[v]];
      // Transversal of a G_u-orbit, reused while v stays in it.
      if (tr.empty() || !tr[v]) tr = orbit_transversal(n, gens_u, v);
      if (!tr[v] || !tr[target]) return false;
      const auto h = tr[v]->inverse() * *tr[target] * t;
      ctx.check(h[u] == beta[u] && h[v] == beta[v] && g.contains(h), "assembled pair witness is wrong");
    }
  }
  return true;
}

void suite_in_2_closure(const ConjugationInstance& inst, Ctx& ctx) {
  const auto& g = inst.group();
  const std::size_t n = g.degree();
  const auto& halves = inst.halves;

  std::vector<std::pair<std::string, Permutation>> betas;
  betas.emplace_back("identity", Permutation::identity(n));
  betas.emplace_back("pipeline", pipeline_conjugate(inst).beta);
  betas.emplace_back("random element", g.chain().random_element(ctx.rng));
  if (is_block_regular(g, inst.level(1))) betas.emplace_back("level 1 conjugator", reg_on_b1_conjugator(inst));
  {
    // Uniform on the permutations fixing both halves.
    std::vector<Point> img(n);
    for (const auto& half : halves.blocks()) {
      auto shuffled = half;
      std::shuffle(shuffled.begin(), shuffled.end(), ctx.rng);
      for (std::size_t k = 0; k < half.size(); ++k) img[half[k]] = shuffled[k];
    }
    betas.emplace_back("random half-preserving", Permutation(img));
  }

  const Partition* ds[] = {&inst.level(1), &halves};
  for (const auto& [name, beta] : betas) {
    const bool orbital = preserves_orbitals(g, beta);
    ctx.count(orbital ? "beta in the 2-closure" : "beta outside the 2-closure");
    ctx.check(all_pairs_witnessed(g, beta, ctx) == orbital, name + ": pair sweep and orbital test disagree");
    for (int t = 0; t < 10; ++t) {
      const Point u = static_cast<Point>(pick(ctx.rng, n)), v = static_cast<Point>(pick(ctx.rng, n));
      const auto h = pair_witness(g, beta, u, v);
      if (orbital) ctx.check(h.has_value(), name + ": no pair witness for (" + pt(u) + ", " + pt(v) + ")");
      if (h) ctx.check(g.contains(*h) && (*h)[u] == beta[u] && (*h)[v] == beta[v], name + ": bad pair witness");
      for (const Partition* d : ds) {
        const auto w = in_2_closure_witness(inst, beta, *d, u, v);
        using S = ClosureWitness::Status;
        ctx.count(w.status == S::found ? "certificate built" : "certificate conditions fail");
        ctx.check(w.status != S::not_found, name + ": certificate missing although its conditions hold: " + w.reason);
        if (w.status == S::found)
          ctx.check(w.h && g.contains(*w.h) && (*w.h)[u] == beta[u] && (*w.h)[v] == beta[v],
                    name + ": bad certificate for (" + pt(u) + ", " + pt(v) + ")");
      }
    }
  }
}

void suite_conj_works_2(const ConjugationInstance& inst, Ctx& ctx) {
  const std::size_t n = inst.r().degree();
  for (int t = 0; t < 5; ++t) {
    const std::size_t i = 1 + pick(ctx.rng, inst.s());
    const std::uint64_t p = inst.prime(i);
    const Point y = static_cast<Point>(pick(ctx.rng, n));
    const std::uint64_t k = 1 + pick(ctx.rng, p - 1);
    const auto& sigma = inst.sigma(i);
    const auto rk = inst.rho(i).pow(static_cast<long long>(k));
    std::vector<Point> img(n, static_cast<Point>(n));
    std::vector<bool> used(n, false);
    Point a = y, b = y;
    for (std::uint64_t j = 0; j < p; ++j, a = sigma[a], b = rk[b]) {
      img[a] = b;
      used[b] = true;
    }
    std::vector<Point> rest;
    for (Point z = 0; z < n; ++z)
      if (!used[z]) rest.push_back(z);
    std::shuffle(rest.begin(), rest.end(), ctx.rng);
    for (Point z = 0, r = 0; z < n; ++z)
      if (img[z] == n) img[z] = rest[r++];
    const Permutation beta(img);
    const auto conj = sigma.conjugate(beta);
    Point z = y;
    for (std::uint64_t j = 0; j < p; ++j, z = rk[z])
      ctx.check(conj[z] == rk[z], "conjugated sigma_" + std::to_string(i) + " differs from rho^k at " + pt(z));
  }
}

void suite_notation(const ConjugationInstance& inst, Ctx& ctx) {
  for (const auto& f : check_notation(inst)) ctx.check(false, f);
  ctx.check(true, "notation");
}

using Suite = void (*)(const ConjugationInstance&, Ctx&);

const std::vector<std::pair<std::string, Suite>>& registry() {
  static const std::vector<std::pair<std::string, Suite>> r{
      {"notation", suite_notation},
      {"x-blocks", suite_x_blocks},
      {"sigmas-on-x", suite_sigmas_on_x},
      {"pth-power", suite_pth_power},
      {"gx-blocks", suite_gx_blocks},
      {"commuting", suite_commuting},
      {"commuting-refined", suite_commuting_refined},
      {"gy-affine", suite_gy_affine},
      {"cyclic-enough", suite_cyclic_enough},
      {"in-2-closure", suite_in_2_closure},
      {"conj-works-2", suite_conj_works_2},
  };
  return r;
}

}  // namespace

nlohmann::json SuiteReport::to_json() const {
  return {{"suite", name},     {"instances", instances}, {"checks", checks}, {"vacuous", vacuous},
          {"failures", failure_count}, {"failure_samples", failures}, {"tally", tally}, {"ok", ok()}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [n, f] : registry()) out.push_back(n);
    return out;
  }();
  return names;
}

Permutation sample_pi(const RegularRep& r, std::optional<PiFamily> family, std::uint64_t seed, std::size_t k) {
  static constexpr PiFamily families[] = {PiFamily::uniform, PiFamily::chain_preserving, PiFamily::b1_regular,
                                          PiFamily::half, PiFamily::commuting};
  auto rng = stream(seed, k);
  return random_pi(r, family ? *family : families[k % 5], rng);
}

std::vector<ConjugationInstance> selftest_instances(const SelftestOptions& opts) {
  const auto r = regular_dihedral(opts.primes);
  std::vector<ConjugationInstance> out;
  for (std::size_t k = 0; k < opts.instances; ++k) {
    ChainSearchOptions chain_opts;
    chain_opts.seed = opts.seed + k;
    out.push_back(make_instance(r, r.conjugate(sample_pi(r, opts.family, opts.seed, k)), chain_opts));
  }
  return out;
}

SuiteReport run_suite(const std::string& name, const std::vector<ConjugationInstance>& instances,
                      const SelftestOptions& opts) {
  const auto& reg = registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.first == name; });
  if (it == reg.end()) throw std::invalid_argument("unknown suite: " + name);
  const auto suite_index = static_cast<std::uint64_t>(it - reg.begin());
  SuiteReport report;
  report.name = name;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    Ctx ctx{report, k, stream(opts.seed, k, suite_index + 1)};
    try {
      it->second(instances[k], ctx);
    } catch (const std::exception& e) {
      ctx.check(false, std::string("exception: ") + e.what());
    }
    ++report.instances;
    if (!ctx.checked) ++report.vacuous;
  }
  return report;
}

nlohmann::json run_selftest(const SelftestOptions& opts, const std::vector<std::string>& names) {
  const auto& chosen = names.empty() ? suite_names() : names;
  for (const auto& n : chosen)
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
      throw std::invalid_argument("unknown suite: " + n);
  const auto instances = selftest_instances(opts);
  nlohmann::json suites = nlohmann::json::array();
  bool ok = true;
  for (const auto& n : chosen) {
    auto rep = run_suite(n, instances, opts);
    ok = ok && rep.ok();
    suites.push_back(rep.to_json());
  }
  nlohmann::json primes = opts.primes;
  return {{"options",
           {{"primes", primes},
            {"instances", opts.instances},
            {"seed", opts.seed},
            {"family", opts.family ? to_string(*opts.family) : "mixed"}}},
          {"suites", suites},
          {"ok", ok}};
}

}  // namespace dci
