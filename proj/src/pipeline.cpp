#include "dci/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dci/blocks.hpp"
#include "dci/closure.hpp"

namespace dci {

namespace {

constexpr Point kUnset = std::numeric_limits<Point>::max();

bool is_prime(std::size_t p) {
  if (p < 2) return false;
  for (std::size_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Orbit labels of <gens> by union-find.
std::vector<std::size_t> orbit_labels(std::size_t n, const std::vector<Permutation>& gens) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& g : gens)
    for (std::size_t y = 0; y < n; ++y) {
      auto a = find(y), b = find(g[static_cast<Point>(y)]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  for (std::size_t y = 0; y < n; ++y) parent[y] = find(y);
  return parent;
}

Permutation from_images(std::vector<Point> images, const char* what) {
  for (Point p : images)
    if (p == kUnset) throw std::logic_error(std::string(what) + ": map is not defined everywhere");
  try {
    return Permutation(std::move(images));
  } catch (const std::invalid_argument&) {
    throw std::logic_error(std::string(what) + ": map is not a bijection");
  }
}

bool fixes_blocks(const Permutation& f, const Partition& p) {
  for (std::size_t y = 0; y < p.degree(); ++y)
    if (!p.same_block(static_cast<Point>(y), f[static_cast<Point>(y)])) return false;
  return true;
}

// Preferred representative: lowest point of `pts` in F1, else lowest.
Point representative(const std::vector<Point>& pts, const ConjugationInstance& inst) {
  Point best = kUnset;
  for (Point p : pts)
    if (inst.halves.same_block(p, inst.x)) best = std::min(best, p);
  if (best == kUnset) best = *std::min_element(pts.begin(), pts.end());
  return best;
}

}  // namespace

std::vector<std::vector<Permutation>> all_point_stabilizers(const GeneratedGroup& g) {
  const std::size_t n = g.degree();
  const Point x = 0;
  auto sc = build_chain(g, std::span<const Point>(&x, 1));
  if (sc.level(0).orbit.size() != n) throw std::invalid_argument("group is not transitive");
  const auto gx = sc.stabilizer_generators(1);
  std::vector<std::vector<Permutation>> out(n);
  for (std::size_t y = 0; y < n; ++y) {
    const auto& t = sc.level(0).rep(static_cast<Point>(y));
    for (const auto& h : gx) out[y].push_back(h.conjugate(t));
  }
  return out;
}

Partition equiv_b_partition(const GeneratedGroup& g, const Partition& b, const Permutation& rho) {
  const std::size_t n = g.degree();
  if (b.degree() != n || rho.degree() != n) throw std::invalid_argument("degree mismatch");
  if (!(orbit_partition(GeneratedGroup(n, {rho})) == b)) throw std::invalid_argument("blocks are not the orbits of rho");
  const auto size = b.uniform_block_size();
  if (!size || !is_prime(*size)) throw std::invalid_argument("blocks do not have prime size");
  if (!is_invariant(g, b)) throw std::invalid_argument("partition is not invariant");

  const auto stabs = all_point_stabilizers(g);
  const std::size_t m = b.block_count();
  // escapes[y][k]: block k is not inside a single orbit of G_y.
  std::vector<std::vector<char>> escapes(n, std::vector<char>(m, 0));
  for (std::size_t y = 0; y < n; ++y) {
    const auto lab = orbit_labels(n, stabs[y]);
    for (std::size_t k = 0; k < m; ++k) {
      const auto& blk = b.block(k);
      for (Point z : blk)
        if (lab[z] != lab[blk.front()]) {
          escapes[y][k] = 1;
          break;
        }
    }
  }
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t z = 0; z < n; ++z) {
      const bool yz = escapes[y][b.block_of(static_cast<Point>(z))];
      if (yz != static_cast<bool>(escapes[z][b.block_of(static_cast<Point>(y))]))
        throw std::logic_error("block escape relation is not symmetric at (" + std::to_string(y) + ", " +
                               std::to_string(z) + ")");
      if (yz) {
        auto a = find(y), c = find(z);
        if (a != c) parent[std::max(a, c)] = std::min(a, c);
      }
    }
  std::vector<std::size_t> labels(n);
  for (std::size_t y = 0; y < n; ++y) labels[y] = find(y);
  auto x = Partition::from_labels(labels);
  if (!is_invariant(g, x)) throw std::logic_error("escape classes are not invariant");
  return x;
}

Partition stabilizer_class_partition(const GeneratedGroup& g, const Partition& p) {
  if (p.degree() != g.degree()) throw std::invalid_argument("degree mismatch");
  if (!is_invariant(g, p)) throw std::invalid_argument("partition is not invariant");
  if (!is_transitive(g)) throw std::invalid_argument("group is not transitive");
  const auto quotient = induced_action(g, p).quotient;
  const std::size_t m = quotient.degree();
  // In a transitive group two point stabilisers are conjugate, so one
  // contains the other exactly when they are equal: the class of block b is
  // the fixed point set of the stabiliser of b.
  std::vector<std::size_t> cls(m, m);
  for (std::size_t b = 0; b < m; ++b) {
    if (cls[b] != m) continue;
    const auto stab = point_stabilizer(quotient, static_cast<Point>(b));
    for (std::size_t c = 0; c < m; ++c) {
      bool fixed = true;
      for (const auto& h : stab.generators())
        if (h[static_cast<Point>(c)] != c) {
          fixed = false;
          break;
        }
      if (fixed) cls[c] = b;
    }
  }
  std::vector<std::size_t> labels(p.degree());
  for (std::size_t y = 0; y < p.degree(); ++y) labels[y] = cls[p.block_of(static_cast<Point>(y))];
  auto k = Partition::from_labels(labels);
  if (!is_invariant(g, k)) throw std::logic_error("stabiliser classes are not invariant");
  return k;
}

std::optional<Permutation> pair_witness(const GeneratedGroup& g, const Permutation& beta, Point u, Point v) {
  std::vector<Point> prefix{u};
  if (v != u) prefix.push_back(v);
  auto sc = build_chain(g, prefix);
  const Point bu = beta[u], bv = beta[v];
  auto res = backtrack_search(
      sc, 0, prefix.size(), [&](std::size_t level, Point img, const std::vector<Point>&) {
        return img == (level == 0 ? bu : bv);
      });
  return res.element;
}

ClosureWitness in_2_closure_witness(const ConjugationInstance& inst, const Permutation& beta, const Partition& d,
                                    Point u, Point v) {
  using S = ClosureWitness::Status;
  const auto& g = inst.group();
  const std::size_t n = g.degree();
  ClosureWitness out;
  auto fail = [&](S st, std::string why) {
    out.status = st;
    out.reason = std::move(why);
    return out;
  };
  if (beta.degree() != n || d.degree() != n) throw std::invalid_argument("degree mismatch");
  for (Point y : inst.f1())
    if (!inst.halves.same_block(beta[y], inst.x)) return fail(S::hypotheses_fail, "beta does not fix the halves");
  if (!is_invariant(g, d)) return fail(S::hypotheses_fail, "partition is not invariant");

  // D_v inside one orbit of G_u.
  std::vector<Point> prefix{u};
  if (v != u) prefix.push_back(v);
  auto su = build_chain(g, prefix);
  if (v != u) {
    for (Point w : d.block_containing(v))
      if (!su.level(1).in_orbit(w)) return fail(S::hypotheses_fail, "D_v is not inside an orbit of G_u");
  } else if (d.block_containing(v).size() > 1) {
    return fail(S::hypotheses_fail, "D_v is not inside an orbit of G_u");
  }

  // g in G matching beta on (D_u, D_v).
  auto image_block = [&](Point y) -> std::optional<std::size_t> {
    const auto& blk = d.block_containing(y);
    const std::size_t target = d.block_of(beta[y]);
    for (Point z : blk)
      if (d.block_of(beta[z]) != target) return std::nullopt;
    return target;
  };
  const auto du = image_block(u), dv = image_block(v);
  if (!du || !dv) return fail(S::hypotheses_fail, "beta does not map the blocks of u and v onto blocks");
  const auto ext = with_block_action(g, d);
  const std::vector<Point> bprefix{static_cast<Point>(n + d.block_of(u)), static_cast<Point>(n + d.block_of(v))};
  auto sb = build_chain(ext, bprefix);
  std::vector<Point> first_n(n);
  std::iota(first_n.begin(), first_n.end(), 0);
  // The cyclic part of R is semiregular with the halves as its orbits.
  const auto t1 = orbit_transversal(n, inst.r().rho, inst.x);
  const auto t2 = orbit_transversal(n, inst.r().rho, inst.tau1()[inst.x]);
  auto cyclic_element = [&](Point from, Point to) -> std::optional<Permutation> {
    const auto& t = t1[from] ? t1 : t2;
    if (!t[from] || !t[to]) return std::nullopt;
    return t[from]->inverse() * *t[to];
  };

  // Among the g matching beta on the blocks, take the first for which the
  // element of the cyclic part sending ug to u*beta fixes every d-block.
  std::optional<Permutation> alpha;
  auto res = backtrack_search(
      sb, 0, 2,
      [&](std::size_t level, Point img, const std::vector<Point>&) {
        return img == n + (level == 0 ? *du : *dv);
      },
      [&](const Permutation& ge) {
        alpha = cyclic_element(ge[u], beta[u]);
        return alpha && fixes_blocks(*alpha, d);
      });
  if (!res.element) {
    // Distinguish "no g matches beta on the blocks" (a hypothesis) from
    // "some g matches but the cyclic correction fails".
    auto any = backtrack_search(sb, 0, 2, [&](std::size_t level, Point img, const std::vector<Point>&) {
      return img == n + (level == 0 ? *du : *dv);
    });
    if (!any.element) return fail(S::hypotheses_fail, "no element of G matches beta on the blocks");
    return fail(S::not_found, "no cyclic correction for any matching element");
  }
  const auto gg = res.element->restrict_to(first_n);
  const Point w = gg.inverse()[alpha->inverse()[beta[v]]];
  if (!d.same_block(w, v) || (v != u && !su.level(1).in_orbit(w)))
    return fail(S::not_found, "block image mismatch");
  const Permutation g1 = v == u ? Permutation::identity(n) : su.level(1).rep(w);
  Permutation h = g1 * gg * *alpha;
  if (h[u] != beta[u] || h[v] != beta[v]) return fail(S::not_found, "assembled element does not match beta");
  out.status = S::found;
  out.h = std::move(h);
  return out;
}

ConjugationInstance conjugated(const ConjugationInstance& inst, const Permutation& beta) {
  ConjugationInstance out;
  out.chain = inst.chain;
  out.chain.rp = inst.rp().conjugate(beta);
  out.x = inst.x;
  out.halves = inst.halves;
  repower_sigmas(out);
  return out;
}

namespace {

RegularRep restricted_cyclic(const RegularRep& rep, const std::vector<Point>& half) {
  RegularRep out;
  out.kind = RegularRep::Kind::cyclic;
  out.orders = rep.orders;
  for (const auto& g : rep.rho) out.rho.push_back(g.restrict_to(half));
  return out;
}

void require_closure_element(const GeneratedGroup& g, const Permutation& beta, const char* what) {
  if (!preserves_orbitals(g, beta)) throw std::logic_error(std::string(what) + ": result leaves the 2-closure");
}

}  // namespace

Permutation use_cyclic_conjugator(const ConjugationInstance& inst) {
  const auto& g = inst.group();
  const std::size_t n = g.degree();
  const auto& f1 = inst.f1();
  const auto& f2 = inst.f2();
  if (conjugates_into(Permutation::identity(n), inst.rp(), inst.r())) return Permutation::identity(n);
  {
    const Point x = inst.x;
    auto sc = build_chain(g, std::span<const Point>(&x, 1));
    const auto gx = GeneratedGroup(n, sc.stabilizer_generators(1));
    auto orb = orbit(gx, f2.front());
    std::sort(orb.begin(), orb.end());
    if (orb != f2) throw std::invalid_argument("F2 is not an orbit of the stabiliser of x");
  }

  std::vector<Point> images(n, kUnset);
  for (const auto* half : {&f1, &f2}) {
    const auto cr = restricted_cyclic(inst.r(), *half);
    const auto crp = restricted_cyclic(inst.rp(), *half);
    auto gens = cr.rho;
    gens.insert(gens.end(), crp.rho.begin(), crp.rho.end());
    const auto a = two_closure(GeneratedGroup(half->size(), gens));
    auto delta = find_conjugator(a, cr, crp);
    if (!delta) throw std::logic_error("use-cyclic: no cyclic conjugator on a half");
    for (std::size_t k = 0; k < half->size(); ++k) images[(*half)[k]] = (*half)[(*delta)[static_cast<Point>(k)]];
  }
  auto beta = from_images(std::move(images), "use-cyclic");

  const auto cyc = inst.r().cyclic_part();
  auto in_cyclic = [&](const Permutation& b) {
    for (const auto& s : inst.rp().rho)
      if (!cyc.contains(s.conjugate(b))) return false;
    return true;
  };
  if (!in_cyclic(beta)) {
    // Identity on F1, tau_2 tau_1 on F2 (tau_2 of the conjugated group).
    const auto t21 = inst.tau2().conjugate(beta) * inst.tau1();
    std::vector<Point> fix(n);
    std::iota(fix.begin(), fix.end(), 0);
    for (Point y : f2) fix[y] = t21[y];
    beta = beta * from_images(std::move(fix), "use-cyclic correction");
  }
  if (!in_cyclic(beta)) throw std::logic_error("use-cyclic: cyclic parts still differ after correction");
  if (!conjugates_into(beta, inst.rp(), inst.r())) throw std::logic_error("use-cyclic: reflection not conjugated into R");
  require_closure_element(g, beta, "use-cyclic");
  return beta;
}

Permutation reg_on_b1_conjugator(const ConjugationInstance& inst) {
  const auto& g = inst.group();
  const std::size_t n = g.degree();
  const auto& b1 = inst.level(1);
  if (!is_block_regular(g, b1)) throw std::invalid_argument("group is not block-regular on level 1");
  const auto xp = equiv_b_partition(g, b1, inst.rho(1));
  const auto alpha = regular_transversal(n, inst.r().generators(), inst.x);
  const auto gamma = regular_transversal(n, inst.rp().generators(), inst.x);

  std::vector<Point> images(n, kUnset);
  for (const auto& blk : xp.blocks()) {
    const Point y = blk == xp.block_containing(inst.x) ? inst.x : representative(blk, inst);
    const auto f = gamma[y].inverse() * alpha[y];
    for (Point z : blk) images[z] = f[z];
  }
  auto beta = from_images(std::move(images), "level 1 conjugator");
  if (!(inst.sigma(1).conjugate(beta) == inst.rho(1)))
    throw std::logic_error("level 1 conjugator does not send sigma_1 to rho_1");
  if (!fixes_blocks(beta, b1)) throw std::logic_error("level 1 conjugator moves a level 1 block");
  require_closure_element(g, beta, "level 1 conjugator");
  return beta;
}

Permutation reg_on_b1_finish(const ConjugationInstance& inst, std::size_t i) {
  const auto& g = inst.group();
  const std::size_t n = g.degree();
  if (i < 2 || i > inst.s()) throw std::invalid_argument("level out of range");
  const auto& b1 = inst.level(1);
  if (!is_block_regular(g, b1)) throw std::invalid_argument("group is not block-regular on level 1");
  for (std::size_t m = 1; m < i; ++m)
    if (!(inst.sigma(m) == inst.rho(m))) throw std::invalid_argument("an earlier sigma differs from its rho");
  const auto& sigma = inst.sigma(i);
  const auto& rho = inst.rho(i);
  if (sigma == rho) return Permutation::identity(n);

  const auto xp = equiv_b_partition(g, b1, inst.rho(1));
  const std::uint64_t p = inst.prime(i);
  const auto sigma_pows = [&] {
    std::vector<Permutation> v{Permutation::identity(n)};
    for (std::uint64_t j = 1; j < p; ++j) v.push_back(v.back() * sigma);
    return v;
  }();
  const auto rho_pows = [&] {
    std::vector<Permutation> v{Permutation::identity(n)};
    for (std::uint64_t j = 1; j < p; ++j) v.push_back(v.back() * rho);
    return v;
  }();

  std::vector<Point> images(n, kUnset);
  std::vector<char> done(xp.block_count(), 0);
  // Cycles of sigma on the classes, visited with x's cycle first.
  std::vector<std::size_t> order(xp.block_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_partition(order.begin(), order.end(), [&](std::size_t k) { return k == xp.block_of(inst.x); });
  for (std::size_t k : order) {
    if (done[k]) continue;
    std::vector<Point> cycle_pts;
    for (std::uint64_t j = 0; j < p; ++j) {
      const auto& blk = xp.block(xp.block_of(sigma_pows[j][xp.block(k).front()]));
      cycle_pts.insert(cycle_pts.end(), blk.begin(), blk.end());
    }
    const Point z = k == xp.block_of(inst.x) ? inst.x : representative(cycle_pts, inst);
    for (std::uint64_t j = 0; j < p; ++j) {
      const std::size_t id = xp.block_of(sigma_pows[j][z]);
      if (done[id]) throw std::logic_error("sigma_" + std::to_string(i) + " fixes an escape class");
      done[id] = 1;
      const auto f = sigma_pows[(p - j) % p] * rho_pows[j];
      for (Point y : xp.block(id)) images[y] = f[y];
    }
  }
  auto beta = from_images(std::move(images), "level conjugator");
  if (!(sigma.conjugate(beta) == rho))
    throw std::logic_error("level conjugator does not send sigma_" + std::to_string(i) + " to rho");
  for (std::size_t m = 1; m < i; ++m)
    if (!(inst.sigma(m).conjugate(beta) == inst.sigma(m)))
      throw std::logic_error("level conjugator disturbs sigma_" + std::to_string(m));
  require_closure_element(g, beta, "level conjugator");
  return beta;
}

nlohmann::json PipelineResult::to_json() const {
  return {{"path", path}, {"beta", beta.to_string()}, {"checks", checks}, {"notes", notes}, {"ok", ok}};
}

PipelineResult pipeline_conjugate(const ConjugationInstance& inst, const PipelineOptions& opts) {
  const auto& g = inst.group();
  const std::size_t n = g.degree();
  PipelineResult out;
  out.beta = Permutation::identity(n);
  std::optional<Permutation> beta;

  const bool b1_regular = is_block_regular(g, inst.level(1));
  bool f2_orbit = false;
  {
    const Point x = inst.x;
    auto sc = build_chain(g, std::span<const Point>(&x, 1));
    auto orb = orbit(GeneratedGroup(n, sc.stabilizer_generators(1)), inst.f2().front());
    std::sort(orb.begin(), orb.end());
    f2_orbit = orb == inst.f2();
  }
  out.checks["block_regular_level1"] = b1_regular;
  out.checks["f2_orbit_of_stabilizer"] = f2_orbit;

  if (b1_regular) {
    try {
      auto cur = inst;
      Permutation acc = reg_on_b1_conjugator(cur);
      cur = conjugated(inst, acc);
      for (std::size_t i = 2; i <= inst.s(); ++i) {
        auto bi = reg_on_b1_finish(cur, i);
        acc = acc * bi;
        cur = conjugated(inst, acc);
      }
      beta = acc;
      out.path = "B1";
    } catch (const std::exception& e) {
      out.notes.push_back(std::string("level 1 path failed: ") + e.what());
    }
  }
  if (!beta && f2_orbit) {
    try {
      beta = use_cyclic_conjugator(inst);
      out.path = "use-cyclic";
    } catch (const std::exception& e) {
      out.notes.push_back(std::string("use-cyclic path failed: ") + e.what());
    }
  }
  if (!beta) {
    auto res = babai_ci_check(inst.r(), inst.rp(), opts.generic);
    out.checks["group_order"] = res.group_order.str();
    out.checks["closure_order"] = res.closure_order.str();
    if (res.delta) {
      beta = res.delta;
      out.path = "generic";
    }
  }
  if (!beta) {
    out.path = "none";
    out.notes.push_back("every path failed");
    return out;
  }
  out.beta = *beta;
  const bool conj = conjugates_into(out.beta, inst.rp(), inst.r());
  const bool closure = preserves_orbitals(g, out.beta);
  out.checks["conjugates_into_r"] = conj;
  out.checks["preserves_orbitals"] = closure;
  bool pairs = true;
  if (opts.pairwise_audit) {
    for (Point u = 0; u < n && pairs; ++u)
      for (Point v = 0; v < n && pairs; ++v) pairs = pair_witness(g, out.beta, u, v).has_value();
    out.checks["pairwise_witnesses"] = pairs;
  }
  out.ok = conj && closure && pairs;
  return out;
}

nlohmann::json PipelineRun::to_json() const {
  auto j = result.to_json();
  j["beta"] = beta.to_string();
  j["checks"]["original_preserves_orbitals"] = audit_original;
  j["chain"] = instance.chain.diagnostics();
  j["ok"] = result.ok && audit_original;
  return j;
}

PipelineRun run_pipeline(const RegularRep& r, const RegularRep& rp, const PipelineOptions& opts,
                         const ChainSearchOptions& chain_opts) {
  PipelineRun run{make_instance(r, rp, chain_opts), {}, {}, false};
  run.result = pipeline_conjugate(run.instance, opts);
  run.beta = run.instance.chain.beta * run.result.beta;
  auto gens = r.generators();
  for (auto& g : rp.generators()) gens.push_back(g);
  const GeneratedGroup original(r.degree(), std::move(gens));
  run.audit_original = preserves_orbitals(original, run.beta) && conjugates_into(run.beta, rp, r);
  return run;
}

}  // namespace dci
