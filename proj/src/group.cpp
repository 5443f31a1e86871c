#include "dci/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "dci/partition.hpp"

namespace dci {

namespace {

StabilizerChain::Level make_level(std::size_t degree, Point base) {
  StabilizerChain::Level lv;
  lv.base = base;
  lv.position.assign(degree, -1);
  lv.position[base] = 0;
  lv.orbit.push_back(base);
  lv.transversal.push_back(Permutation::identity(degree));
  lv.inverse_transversal.push_back(Permutation::identity(degree));
  return lv;
}

void add_orbit_point(StabilizerChain::Level& lv, Point y, Permutation rep) {
  lv.position[y] = static_cast<std::int32_t>(lv.orbit.size());
  lv.orbit.push_back(y);
  lv.inverse_transversal.push_back(rep.inverse());
  lv.transversal.push_back(std::move(rep));
}

// Extends the basic orbit after generators [first_new, end) were appended.
void close_orbit(StabilizerChain::Level& lv, std::size_t first_new) {
  const std::size_t old_size = lv.orbit.size();
  for (std::size_t pos = 0; pos < old_size; ++pos) {
    for (std::size_t gi = first_new; gi < lv.generators.size(); ++gi) {
      const Point img = lv.generators[gi][lv.orbit[pos]];
      if (!lv.in_orbit(img)) add_orbit_point(lv, img, lv.transversal[pos] * lv.generators[gi]);
    }
  }
  for (std::size_t pos = old_size; pos < lv.orbit.size(); ++pos) {
    for (const auto& s : lv.generators) {
      const Point img = s[lv.orbit[pos]];
      if (!lv.in_orbit(img)) add_orbit_point(lv, img, lv.transversal[pos] * s);
    }
  }
}

Point first_moved(const Permutation& g) {
  for (Point y = 0; y < g.degree(); ++y)
    if (g[y] != y) return y;
  throw std::logic_error("identity has no moved point");
}

}  // namespace

StabilizerChain StabilizerChain::build(std::size_t degree, std::span<const Permutation> generators,
                                       std::span<const Point> base_prefix) {
  StabilizerChain sc;
  sc.degree_ = degree;
  auto& levels = sc.levels_;

  std::vector<bool> in_base(degree, false);
  for (Point b : base_prefix) {
    if (b >= degree) throw std::out_of_range("base point out of range");
    if (in_base[b]) throw std::invalid_argument("repeated base point");
    in_base[b] = true;
    levels.push_back(make_level(degree, b));
  }

  std::vector<Permutation> gens;
  for (const auto& g : generators) {
    if (g.degree() != degree) throw std::invalid_argument("generator degree mismatch");
    if (g.is_identity()) continue;
    bool fixes_base = true;
    for (const auto& lv : levels) fixes_base = fixes_base && g.fixes(lv.base);
    if (fixes_base) {
      const Point b = first_moved(g);
      in_base[b] = true;
      levels.push_back(make_level(degree, b));
    }
    gens.push_back(g);
  }
  for (std::size_t k = 0; k < levels.size(); ++k) {
    for (const auto& g : gens) {
      bool fixes = true;
      for (std::size_t j = 0; j < k && fixes; ++j) fixes = g.fixes(levels[j].base);
      if (fixes) levels[k].generators.push_back(g);
    }
    close_orbit(levels[k], 0);
  }

  // done[k][pos] = number of generators of level k already paired with orbit[pos].
  std::vector<std::vector<std::size_t>> done(levels.size());

  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(levels.size()) - 1;
  while (i >= 0) {
    bool added = false;
    const auto k = static_cast<std::size_t>(i);
    for (std::size_t pos = 0; pos < levels[k].orbit.size() && !added; ++pos) {
      done[k].resize(levels[k].orbit.size(), 0);
      while (done[k][pos] < levels[k].generators.size()) {
        const std::size_t gi = done[k][pos]++;
        const auto& lv = levels[k];
        const Permutation& s = lv.generators[gi];
        const Point b = lv.orbit[pos];
        Permutation schreier = lv.transversal[pos] * s * lv.inverse_rep(s[b]);
        if (schreier.is_identity()) continue;
        auto [h, j] = sc.sift(schreier, k + 1);
        if (h.is_identity()) continue;
        if (j == levels.size()) {
          const Point nb = first_moved(h);
          levels.push_back(make_level(degree, nb));
          done.emplace_back();
        }
        for (std::size_t l = k + 1; l <= j; ++l) {
          levels[l].generators.push_back(h);
          close_orbit(levels[l], levels[l].generators.size() - 1);
        }
        i = static_cast<std::ptrdiff_t>(j);
        added = true;
        break;
      }
    }
    if (!added) --i;
  }
  return sc;
}

std::vector<Point> StabilizerChain::base() const {
  std::vector<Point> b;
  for (const auto& lv : levels_) b.push_back(lv.base);
  return b;
}

BigInt StabilizerChain::order() const {
  BigInt o = 1;
  for (const auto& lv : levels_) o *= lv.orbit.size();
  return o;
}

StabilizerChain::SiftResult StabilizerChain::sift(const Permutation& g, std::size_t from_level) const {
  Permutation h = g;
  for (std::size_t k = from_level; k < levels_.size(); ++k) {
    const auto& lv = levels_[k];
    const Point b = h[lv.base];
    if (!lv.in_orbit(b)) return {std::move(h), k};
    if (b != lv.base) h = h * lv.inverse_rep(b);
  }
  return {std::move(h), levels_.size()};
}

bool StabilizerChain::contains(const Permutation& g) const {
  if (g.degree() != degree_) throw std::invalid_argument("permutation degree mismatch");
  auto r = sift(g);
  return r.level == levels_.size() && r.residue.is_identity();
}

Permutation StabilizerChain::random_element(std::mt19937_64& rng) const {
  Permutation g = Permutation::identity(degree_);
  for (std::size_t k = levels_.size(); k-- > 0;) {
    const auto& lv = levels_[k];
    const std::size_t pick = static_cast<std::size_t>(rng() % lv.orbit.size());
    g = g * lv.transversal[pick];
  }
  return g;
}

std::vector<Permutation> StabilizerChain::stabilizer_generators(std::size_t k) const {
  if (k >= levels_.size()) return {};
  return levels_[k].generators;
}

GeneratedGroup::GeneratedGroup(std::size_t degree, std::vector<Permutation> generators)
    : degree_(degree), generators_(std::move(generators)), cache_(std::make_shared<Cache>()) {
  if (degree == 0) throw std::invalid_argument("group degree must be positive");
  for (const auto& g : generators_)
    if (g.degree() != degree) throw std::invalid_argument("generator degree mismatch");
}

GeneratedGroup GeneratedGroup::trivial(std::size_t degree) { return GeneratedGroup(degree, {}); }

GeneratedGroup GeneratedGroup::symmetric(std::size_t degree) {
  std::vector<Permutation> gens;
  if (degree >= 2) {
    gens.push_back(Permutation::from_cycles(degree, {{0, 1}}));
    std::vector<Point> cyc(degree);
    std::iota(cyc.begin(), cyc.end(), Point{0});
    if (degree >= 3) gens.push_back(Permutation::from_cycles(degree, std::vector<std::vector<Point>>{cyc}));
  }
  return GeneratedGroup(degree, std::move(gens));
}

const StabilizerChain& GeneratedGroup::chain() const {
  std::call_once(cache_->once, [this] {
    cache_->chain = std::make_unique<StabilizerChain>(StabilizerChain::build(degree_, generators_));
  });
  return *cache_->chain;
}

bool GeneratedGroup::contains(const Permutation& f) const {
  if (f.degree() != degree_) throw std::invalid_argument("permutation degree mismatch");
  return chain().contains(f);
}

std::string GeneratedGroup::to_text() const {
  std::ostringstream os;
  os << "degree " << degree_ << '\n';
  for (const auto& g : generators_) os << g.to_string() << '\n';
  return os.str();
}

GeneratedGroup GeneratedGroup::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t degree = 0;
  bool header = false;
  std::vector<Permutation> gens;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!header) {
      std::istringstream hs(line);
      std::string word;
      if (!(hs >> word >> degree) || word != "degree")
        throw std::invalid_argument("group text must start with 'degree n'");
      header = true;
      continue;
    }
    auto p = Permutation::parse(line);
    if (p.degree() != degree) throw std::invalid_argument("generator degree mismatch in group text");
    gens.push_back(std::move(p));
  }
  if (!header) throw std::invalid_argument("empty group text");
  return GeneratedGroup(degree, std::move(gens));
}

std::vector<Point> orbit(const GeneratedGroup& g, Point y) {
  if (y >= g.degree()) throw std::out_of_range("point out of range");
  std::vector<bool> seen(g.degree(), false);
  std::vector<Point> out{y};
  seen[y] = true;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& s : g.generators()) {
      const Point z = s[out[i]];
      if (!seen[z]) {
        seen[z] = true;
        out.push_back(z);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Partition all_orbits(const GeneratedGroup& g) {
  const std::size_t n = g.degree();
  std::vector<std::size_t> label(n, n);
  std::size_t next = 0;
  for (Point y = 0; y < n; ++y) {
    if (label[y] != n) continue;
    for (Point z : orbit(g, y)) label[z] = next;
    ++next;
  }
  return Partition::from_labels(label);
}

StabilizerChain build_chain(const GeneratedGroup& g) { return g.chain(); }

StabilizerChain build_chain(const GeneratedGroup& g, std::span<const Point> base_prefix) {
  return StabilizerChain::build(g.degree(), g.generators(), base_prefix);
}

BigInt group_order(const GeneratedGroup& g) { return g.order(); }

bool contains(const GeneratedGroup& g, const Permutation& f) { return g.contains(f); }

GeneratedGroup point_stabilizer(const GeneratedGroup& g, Point y) {
  if (y >= g.degree()) throw std::out_of_range("point out of range");
  const Point prefix[] = {y};
  auto sc = build_chain(g, prefix);
  return GeneratedGroup(g.degree(), sc.stabilizer_generators(1));
}

bool is_transitive(const GeneratedGroup& g) { return orbit(g, 0).size() == g.degree(); }

Semiregularity semiregularity(const GeneratedGroup& g) {
  const BigInt order = g.order();
  const auto orbits = all_orbits(g);
  for (const auto& b : orbits.blocks())
    if (order != b.size()) return Semiregularity::neither;
  return orbits.block_count() == 1 ? Semiregularity::regular : Semiregularity::semiregular;
}

std::vector<Permutation> enumerate_elements(const GeneratedGroup& g, std::size_t limit) {
  std::unordered_set<Permutation, PermutationHash> seen;
  std::vector<Permutation> out{Permutation::identity(g.degree())};
  seen.insert(out.front());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& s : g.generators()) {
      Permutation h = out[i] * s;
      if (seen.insert(h).second) {
        out.push_back(std::move(h));
        if (out.size() > limit) throw std::length_error("group too large to enumerate");
      }
    }
  }
  return out;
}

namespace {

struct Backtracker {
  const StabilizerChain& sc;
  std::size_t to;
  const BacktrackAccept& accept;
  const BacktrackComplete& complete;
  const BacktrackPrune& prune;
  std::size_t budget;
  BacktrackResult res;
  std::vector<Point> images;

  bool run(std::size_t level, const Permutation& prefix) {
    if (++res.nodes > budget) {
      res.budget_exhausted = true;
      return false;
    }
    if (level == to) {
      if (complete && !complete(prefix)) return false;
      res.element = prefix;
      return true;
    }
    const auto& lv = sc.level(level);
    std::vector<std::pair<Point, Point>> cand;  // (image, orbit point)
    for (Point o : lv.orbit) cand.emplace_back(prefix[o], o);
    std::sort(cand.begin(), cand.end());
    for (const auto& [img, o] : cand) {
      if (!accept(level, img, images)) continue;
      auto next = lv.rep(o) * prefix;
      if (prune && !prune(level, next)) continue;
      images.push_back(img);
      if (run(level + 1, next)) return true;
      images.pop_back();
      if (res.budget_exhausted) return false;
    }
    return false;
  }
};

}  // namespace

BacktrackResult backtrack_search(const StabilizerChain& sc, std::size_t from, std::size_t to,
                                 const BacktrackAccept& accept, const BacktrackComplete& complete,
                                 std::size_t node_budget, const BacktrackPrune& prune) {
  if (from > to || to > sc.depth()) throw std::out_of_range("backtrack level range");
  Backtracker bt{sc, to, accept, complete, prune, node_budget, {}, {}};
  bt.run(from, Permutation::identity(sc.degree()));
  return bt.res;
}

std::vector<std::optional<Permutation>> orbit_transversal(std::size_t degree, const std::vector<Permutation>& gens,
                                                         Point x) {
  std::vector<std::optional<Permutation>> t(degree);
  t[x] = Permutation::identity(degree);
  std::vector<Point> queue{x};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const Point p = queue[q];
    for (const auto& g : gens)
      if (!t[g[p]]) {
        t[g[p]] = *t[p] * g;
        queue.push_back(g[p]);
      }
  }
  return t;
}

std::vector<Permutation> regular_transversal(std::size_t degree, const std::vector<Permutation>& gens, Point x) {
  std::vector<Permutation> out;
  out.reserve(degree);
  for (auto& e : orbit_transversal(degree, gens, x)) {
    if (!e) throw std::invalid_argument("group is not transitive");
    out.push_back(std::move(*e));
  }
  return out;
}

}  // namespace dci
