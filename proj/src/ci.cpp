#include "dci/ci.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>
#include <thread>

#include "dci/closure.hpp"

namespace dci {

Permutation build_candidate(const RegularRep& rp, const std::vector<Permutation>& images, Point x, Point y) {
  const auto gens = rp.generators();
  if (gens.size() != images.size()) throw std::invalid_argument("one image per generator");
  const std::size_t n = rp.degree();
  constexpr Point unset = std::numeric_limits<Point>::max();
  std::vector<Point> d(n, unset);
  d[x] = y;
  std::vector<Point> queue{x};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const Point p = queue[q];
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const Point next = gens[j][p], img = images[j][d[p]];
      if (d[next] == unset) {
        d[next] = img;
        queue.push_back(next);
      } else if (d[next] != img) {
        throw std::logic_error("generator images do not define a homomorphism");
      }
    }
  }
  if (queue.size() != n) throw std::logic_error("source group is not transitive");
  return Permutation(std::move(d));
}

bool conjugates_into(const Permutation& delta, const RegularRep& rp, const RegularRep& r) {
  const auto target = r.group();
  for (const auto& g : rp.generators())
    if (!target.contains(g.conjugate(delta))) return false;
  return true;
}

std::optional<Permutation> find_conjugator(const GeneratedGroup& a, const RegularRep& r, const RegularRep& rp,
                                           const ConjugatorOptions& opts) {
  if (r.kind != rp.kind || r.orders != rp.orders || r.degree() != rp.degree())
    throw std::invalid_argument("regular groups are not of the same kind");
  if (a.degree() != r.degree()) throw std::invalid_argument("degree mismatch");
  const auto autos = dihedral_automorphisms(r);
  std::vector<std::vector<Permutation>> images;
  images.reserve(autos.size());
  for (const auto& phi : autos) images.push_back(phi.images_in(r));

  const std::size_t ys = opts.sweep_all_basepoints ? r.degree() : 1;
  const std::size_t total = ys * images.size();
  const auto& chain = a.chain();  // build once before any threads start

  auto candidate = [&](std::size_t idx) {
    return build_candidate(rp, images[idx % images.size()], 0, static_cast<Point>(idx / images.size()));
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(opts.jobs, total));
  if (jobs == 1) {
    for (std::size_t idx = 0; idx < total; ++idx) {
      auto d = candidate(idx);
      if (chain.contains(d)) return d;
    }
    return std::nullopt;
  }
  // Strided workers; the smallest successful index wins.
  std::atomic<std::size_t> best{total};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t idx = w; idx < best.load(); idx += jobs) {
        if (chain.contains(candidate(idx))) {
          std::size_t cur = best.load();
          while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
          }
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (best.load() == total) return std::nullopt;
  return candidate(best.load());
}

BabaiResult babai_ci_check(const RegularRep& r, const RegularRep& rp, const ConjugatorOptions& opts) {
  auto gens = r.generators();
  for (const auto& g : rp.generators()) gens.push_back(g);
  const GeneratedGroup g(r.degree(), std::move(gens));
  const auto colors = orbitals(g);
  const auto closure = automorphism_group(colors);
  BabaiResult res;
  res.group_order = g.order();
  res.closure_order = closure.order();
  res.delta = find_conjugator(closure, r, rp, opts);
  if (res.delta && !preserves_orbitals(colors, *res.delta))
    throw std::logic_error("conjugator from the 2-closure does not preserve the orbitals");
  return res;
}

}  // namespace dci
