#include "dci/scan.hpp"

#include <charconv>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "dci/ci.hpp"
#include "dci/digraph.hpp"
#include "dci/group.hpp"

namespace dci {

const char* to_string(ScanMode m) {
  switch (m) {
    case ScanMode::digraph: return "digraph";
    case ScanMode::graph: return "graph";
    case ScanMode::colour: return "colour";
  }
  return "?";
}

std::optional<ScanMode> parse_scan_mode(std::string_view s) {
  if (s == "digraph") return ScanMode::digraph;
  if (s == "graph") return ScanMode::graph;
  if (s == "colour" || s == "color") return ScanMode::colour;
  return std::nullopt;
}

RegularRep parse_group_name(std::string_view name) {
  std::uint64_t n = 0;
  if (name.size() < 2 || (name[0] != 'z' && name[0] != 'd'))
    throw std::invalid_argument("group name must be zN or dN");
  auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), n);
  if (ec != std::errc() || ptr != name.data() + name.size() || n < 2)
    throw std::invalid_argument("bad group order in '" + std::string(name) + "'");
  if (name[0] == 'z') return regular_cyclic({n});
  if (n % 2 != 0) throw std::invalid_argument("dihedral group order must be even");
  std::vector<std::uint64_t> primes;
  std::uint64_t k = n / 2;
  for (std::uint64_t p = 2; p * p <= k; ++p)
    while (k % p == 0) {
      primes.push_back(p);
      k /= p;
    }
  if (k > 1) primes.push_back(k);
  return regular_dihedral(primes);
}

std::vector<Permutation> elements_by_point(const RegularRep& g) {
  return regular_transversal(g.degree(), g.generators(), 0);
}

std::vector<Permutation> automorphism_permutations(const RegularRep& g) {
  std::vector<Permutation> out;
  for (const auto& phi : dihedral_automorphisms(g)) out.push_back(build_candidate(g, phi.images_in(g), 0, 0));
  return out;
}

std::string ScanVerdict::verdict() const {
  switch (kind) {
    case Kind::confirmed: return property + "-confirmed";
    case Kind::counterexample: return "counterexample";
    case Kind::no_counterexample: return "no-counterexample-in-samples";
    case Kind::inconclusive: return "inconclusive";
  }
  return "?";
}

nlohmann::json ScanVerdict::to_json() const {
  nlohmann::json witness = nullptr;
  if (kind == Kind::counterexample) {
    auto members = [](const std::vector<std::uint32_t>& v) {
      std::vector<std::size_t> m;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) m.push_back(i);
      return m;
    };
    witness = {{"S", members(s)}, {"T", members(t)}, {"iso", iso->to_string()}};
    if (property == "CI2") {
      witness["S_colours"] = s;
      witness["T_colours"] = t;
    }
  }
  return {{"verdict", verdict()},   {"property", property},   {"witness", witness},
          {"samples", exhaustive ? 0 : connection_sets},      {"connection_sets", connection_sets},
          {"space", space},
          {"classes", classes},     {"iso_tests", iso_tests}, {"exhaustive", exhaustive}};
}

namespace {

struct Scanner {
  const RegularRep& g;
  const ScanOptions& opts;
  std::vector<Permutation> elems;
  std::vector<Permutation> autos;
  ScanVerdict out;

  struct Class {
    std::vector<std::uint32_t> rep;
    ColoredDigraph d;
  };
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<Class> classes;
  std::map<std::uint64_t, std::vector<std::size_t>> buckets;
  bool budget_hit = false;

  std::vector<std::uint32_t> canonical(const std::vector<std::uint32_t>& v) const {
    std::vector<std::uint32_t> best = v, img(v.size());
    for (const auto& a : autos) {
      for (std::size_t p = 0; p < v.size(); ++p) img[a[static_cast<Point>(p)]] = v[p];
      if (img < best) best = img;
    }
    return best;
  }

  ColoredDigraph digraph(const std::vector<std::uint32_t>& v) const {
    ConnectionSet cs;
    for (std::size_t p = 0; p < v.size(); ++p)
      if (v[p]) {
        cs.elements.push_back(p);
        cs.colors.push_back(v[p]);
      }
    return cayley_digraph(elems, cs);
  }

  // Returns true once the scan should stop.
  bool visit(const std::vector<std::uint32_t>& v) {
    ++out.connection_sets;
    auto c = canonical(v);
    if (!seen.insert(c).second) return false;
    auto d = digraph(c);
    auto& bucket = buckets[refinement_invariant(d, 0)];
    for (std::size_t idx : bucket) {
      if (out.iso_tests >= opts.iso_budget) {
        budget_hit = true;
        return true;
      }
      ++out.iso_tests;
      if (auto f = are_isomorphic(classes[idx].d, d)) {
        out.kind = ScanVerdict::Kind::counterexample;
        out.s = classes[idx].rep;
        out.t = c;
        out.iso = *f;
        return true;
      }
    }
    bucket.push_back(classes.size());
    classes.push_back({std::move(c), std::move(d)});
    return false;
  }
};

}  // namespace

ScanVerdict dci_scan(const RegularRep& g, const ScanOptions& opts) {
  Scanner sc{g, opts, elements_by_point(g), automorphism_permutations(g), {}, {}, {}, {}, false};
  const std::size_t n = g.degree();
  sc.out.property = opts.mode == ScanMode::digraph ? "DCI" : opts.mode == ScanMode::graph ? "CI" : "CI2";
  const std::uint32_t k = opts.mode == ScanMode::colour ? opts.colours : 1;
  if (k == 0) throw std::invalid_argument("need at least one colour");

  // Free coordinates: single points, or inverse pairs in graph mode.
  std::vector<std::vector<Point>> cells;
  std::vector<char> used(n, 0);
  for (Point p = 0; p < n; ++p) {
    if (used[p]) continue;
    const Point q = sc.elems[p].inverse()[0];
    std::vector<Point> cell{p};
    if (opts.mode == ScanMode::graph && q != p) cell.push_back(q);
    for (Point y : cell) used[y] = 1;
    cells.push_back(std::move(cell));
  }
  double total = 1;
  for (std::size_t i = 0; i < cells.size(); ++i) total *= k + 1;
  sc.out.exhaustive = n <= opts.exhaustive_limit && total <= double(1u << 22);
  if (total < 1e18) sc.out.space = static_cast<std::uint64_t>(total);

  std::vector<std::uint32_t> digits(cells.size(), 0), v(n, 0);
  auto fill = [&] {
    for (std::size_t i = 0; i < cells.size(); ++i)
      for (Point y : cells[i]) v[y] = digits[i];
  };
  bool stop = false;
  if (sc.out.exhaustive) {
    for (bool more = true; more && !stop;) {
      fill();
      stop = sc.visit(v);
      more = false;
      for (std::size_t i = 0; i < digits.size(); ++i) {
        if (++digits[i] <= k) {
          more = true;
          break;
        }
        digits[i] = 0;
      }
    }
  } else {
    if (!opts.seed || opts.samples == 0)
      throw std::invalid_argument("sampling needs a seed and a positive sample count");
    std::mt19937_64 rng(*opts.seed);
    for (std::size_t t = 0; t < opts.samples && !stop; ++t) {
      for (auto& d : digits) d = static_cast<std::uint32_t>(rng() % (k + 1));
      fill();
      stop = sc.visit(v);
    }
  }
  sc.out.classes = sc.classes.size();
  if (sc.out.kind != ScanVerdict::Kind::counterexample)
    sc.out.kind = sc.budget_hit        ? ScanVerdict::Kind::inconclusive
                  : sc.out.exhaustive ? ScanVerdict::Kind::confirmed
                                      : ScanVerdict::Kind::no_counterexample;
  return sc.out;
}

}  // namespace dci
