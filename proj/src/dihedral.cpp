#include "dci/dihedral.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "dci/blocks.hpp"

namespace dci {

namespace {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t product(const std::vector<std::uint64_t>& v) {
  std::uint64_t k = 1;
  for (auto m : v) k *= m;
  return k;
}

// Mixed-radix coordinates with the last factor varying fastest.
std::vector<std::uint64_t> decode(std::uint64_t r, const std::vector<std::uint64_t>& radix) {
  std::vector<std::uint64_t> a(radix.size());
  for (std::size_t i = radix.size(); i-- > 0;) {
    a[i] = r % radix[i];
    r /= radix[i];
  }
  return a;
}

std::uint64_t encode(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& radix) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < radix.size(); ++i) r = r * radix[i] + a[i];
  return r;
}

// Standard representation on words tau^e rho^a.
RegularRep standard(RegularRep::Kind kind, const std::vector<std::uint64_t>& orders) {
  const std::uint64_t k = product(orders);
  const std::uint64_t n = kind == RegularRep::Kind::dihedral ? 2 * k : k;
  RegularRep rep;
  rep.kind = kind;
  rep.orders = orders;
  for (std::size_t j = 0; j < orders.size(); ++j) {
    std::vector<Point> im(n);
    for (std::uint64_t r = 0; r < n; ++r) {
      auto a = decode(r % k, orders);
      a[j] = (a[j] + 1) % orders[j];
      im[r] = static_cast<Point>((r / k) * k + encode(a, orders));
    }
    rep.rho.emplace_back(std::move(im));
  }
  if (kind == RegularRep::Kind::dihedral) {
    std::vector<Point> im(n);
    for (std::uint64_t r = 0; r < n; ++r) {
      auto a = decode(r % k, orders);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = (orders[i] - a[i]) % orders[i];
      im[r] = static_cast<Point>((1 - r / k) * k + encode(a, orders));
    }
    rep.tau = Permutation(std::move(im));
  }
  return rep;
}

std::uint64_t gcd_u(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t uniform_below(std::uint64_t bound, std::mt19937_64& rng) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do r = rng();
  while (r >= limit);
  return r % bound;
}

template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(i, rng)]);
}

}  // namespace

std::uint64_t RegularRep::cyclic_order() const { return product(orders); }

std::vector<Permutation> RegularRep::generators() const {
  auto g = rho;
  if (tau) g.push_back(*tau);
  return g;
}

GeneratedGroup RegularRep::group() const { return GeneratedGroup(degree(), generators()); }

GeneratedGroup RegularRep::cyclic_part() const { return GeneratedGroup(degree(), rho); }

Permutation RegularRep::word(int e, const std::vector<std::uint64_t>& a) const {
  Permutation w = Permutation::identity(degree());
  if (e % 2) {
    if (!tau) throw std::invalid_argument("cyclic representation has no reflection");
    w = *tau;
  }
  for (std::size_t i = 0; i < rho.size(); ++i) w = w * rho[i].pow(static_cast<long long>(a.at(i)));
  return w;
}

std::vector<Permutation> RegularRep::elements() const {
  const std::uint64_t k = cyclic_order();
  std::vector<Permutation> out;
  out.reserve(order());
  // Powers of each rho are cached; products are built left to right.
  std::vector<std::vector<Permutation>> powers(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    powers[i].push_back(Permutation::identity(degree()));
    for (std::uint64_t t = 1; t < orders[i]; ++t) powers[i].push_back(powers[i].back() * rho[i]);
  }
  for (std::uint64_t r = 0; r < order(); ++r) {
    const auto a = decode(r % k, orders);
    Permutation w = (r / k) ? *tau : Permutation::identity(degree());
    for (std::size_t i = 0; i < rho.size(); ++i) w = w * powers[i][a[i]];
    out.push_back(std::move(w));
  }
  return out;
}

RegularRep RegularRep::conjugate(const Permutation& pi) const {
  RegularRep r = *this;
  for (auto& g : r.rho) g = g.conjugate(pi);
  if (r.tau) r.tau = r.tau->conjugate(pi);
  return r;
}

RegularRep RegularRep::reordered(const std::vector<std::size_t>& order) const {
  if (order.size() != rho.size()) throw std::invalid_argument("reordering has wrong length");
  std::vector<std::size_t> check = order;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i)
    if (check[i] != i) throw std::invalid_argument("reordering is not a permutation");
  RegularRep r = *this;
  for (std::size_t i = 0; i < order.size(); ++i) {
    r.rho[i] = rho[order[i]];
    r.orders[i] = orders[order[i]];
  }
  return r;
}

void RegularRep::validate() const {
  if (rho.empty() || rho.size() != orders.size()) throw std::logic_error("generator/order count mismatch");
  const std::size_t n = degree();
  if (n != order()) throw std::logic_error("degree differs from group order");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i].degree() != n) throw std::logic_error("generator degree mismatch");
    for (const auto& c : rho[i].cycles())
      if (c.size() != orders[i]) throw std::logic_error("rho_" + std::to_string(i + 1) + " is not semiregular");
    for (std::size_t j = 0; j < i; ++j)
      if (rho[i] * rho[j] != rho[j] * rho[i]) throw std::logic_error("rho generators do not commute");
    for (std::size_t j = 0; j < i; ++j)
      if (std::gcd(orders[i], orders[j]) != 1) throw std::logic_error("orders are not coprime");
  }
  if (kind == Kind::dihedral) {
    if (!tau) throw std::logic_error("dihedral representation lacks tau");
    if (tau->degree() != n || tau->order() != 2) throw std::logic_error("tau is not an involution");
    for (const auto& r : rho)
      if (r.conjugate(*tau) != r.inverse()) throw std::logic_error("tau does not invert rho");
  } else if (tau) {
    throw std::logic_error("cyclic representation carries tau");
  }
  const auto g = group();
  if (g.order() != n || !is_transitive(g)) throw std::logic_error("group is not regular");
}

nlohmann::json RegularRep::to_json() const {
  std::vector<std::string> r;
  for (const auto& g : rho) r.push_back(g.to_string());
  nlohmann::json j{{"primes", orders}, {"rho", r}};
  j["tau"] = tau ? nlohmann::json(tau->to_string()) : nlohmann::json(nullptr);
  return j;
}

RegularRep RegularRep::from_json(const nlohmann::json& j) {
  RegularRep rep;
  rep.orders = j.at("primes").get<std::vector<std::uint64_t>>();
  for (const auto& s : j.at("rho")) rep.rho.push_back(Permutation::parse(s.get<std::string>()));
  if (j.contains("tau") && !j.at("tau").is_null()) {
    rep.tau = Permutation::parse(j.at("tau").get<std::string>());
    rep.kind = Kind::dihedral;
  } else {
    rep.kind = Kind::cyclic;
  }
  rep.validate();
  return rep;
}

RegularRep regular_dihedral(const std::vector<std::uint64_t>& primes, std::size_t degree_cap) {
  if (primes.empty()) throw std::invalid_argument("need at least one prime");
  std::set<std::uint64_t> seen;
  for (auto p : primes) {
    if (p == 2 || !is_prime(p)) throw std::invalid_argument("primes must be odd primes");
    if (!seen.insert(p).second) throw std::invalid_argument("primes must be distinct");
  }
  std::uint64_t k = 1;
  for (auto p : primes) {
    if (2 * k * p > degree_cap) throw std::invalid_argument("degree exceeds the cap");
    k *= p;
  }
  return standard(RegularRep::Kind::dihedral, primes);
}

RegularRep regular_cyclic(const std::vector<std::uint64_t>& factors, std::size_t degree_cap) {
  if (factors.empty()) throw std::invalid_argument("need at least one factor");
  std::uint64_t k = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i] < 2) throw std::invalid_argument("factors must be at least 2");
    for (std::size_t j = 0; j < i; ++j)
      if (gcd_u(factors[i], factors[j]) != 1) throw std::invalid_argument("factors must be coprime");
    if (k * factors[i] > degree_cap) throw std::invalid_argument("degree exceeds the cap");
    k *= factors[i];
  }
  return standard(RegularRep::Kind::cyclic, factors);
}

std::vector<Permutation> GroupAutomorphism::images_in(const RegularRep& target) const {
  std::vector<Permutation> out;
  for (std::size_t i = 0; i < target.rho.size(); ++i) out.push_back(target.rho[i].pow(static_cast<long long>(a.at(i))));
  if (target.tau) {
    Permutation t = *target.tau;
    for (std::size_t i = 0; i < target.rho.size(); ++i) t = t * target.rho[i].pow(static_cast<long long>(b.at(i)));
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<GroupAutomorphism> dihedral_automorphisms(const RegularRep& spec) {
  const std::size_t s = spec.orders.size();
  std::vector<std::vector<std::uint64_t>> units(s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::uint64_t a = 1; a < spec.orders[i]; ++a)
      if (gcd_u(a, spec.orders[i]) == 1) units[i].push_back(a);

  // Odometer over a-choices, then (dihedral only) b-choices.
  std::vector<std::size_t> radix;
  for (std::size_t i = 0; i < s; ++i) radix.push_back(units[i].size());
  if (spec.tau)
    for (std::size_t i = 0; i < s; ++i) radix.push_back(spec.orders[i]);
  std::vector<GroupAutomorphism> out;
  std::vector<std::size_t> idx(radix.size(), 0);
  while (true) {
    GroupAutomorphism phi;
    for (std::size_t i = 0; i < s; ++i) phi.a.push_back(units[i][idx[i]]);
    if (spec.tau)
      for (std::size_t i = 0; i < s; ++i) phi.b.push_back(idx[s + i]);
    out.push_back(std::move(phi));
    std::size_t pos = radix.size();
    while (pos > 0) {
      --pos;
      if (++idx[pos] < radix[pos]) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
    if (radix.empty()) return out;
  }
}

Permutation random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<Point> im(n);
  std::iota(im.begin(), im.end(), Point{0});
  shuffle(im, rng);
  return Permutation(std::move(im));
}

RegularRep random_regular_conjugate(const RegularRep& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return spec.conjugate(random_permutation(spec.degree(), rng));
}

std::vector<Partition> standard_chain(const RegularRep& spec) {
  std::vector<Partition> chain{Partition::singletons(spec.degree())};
  for (std::size_t i = 1; i <= spec.rho.size(); ++i) {
    std::vector<Permutation> gens(spec.rho.begin(), spec.rho.begin() + static_cast<std::ptrdiff_t>(i));
    chain.push_back(orbit_partition(GeneratedGroup(spec.degree(), std::move(gens))));
  }
  if (!chain.back().is_whole()) chain.push_back(Partition::whole(spec.degree()));
  return chain;
}

const char* to_string(PiFamily f) {
  switch (f) {
    case PiFamily::uniform: return "uniform";
    case PiFamily::chain_preserving: return "chain";
    case PiFamily::b1_regular: return "b1-regular";
    case PiFamily::half: return "half";
    case PiFamily::commuting: return "commuting";
  }
  return "?";
}

std::optional<PiFamily> parse_pi_family(std::string_view s) {
  for (auto f : {PiFamily::uniform, PiFamily::chain_preserving, PiFamily::b1_regular, PiFamily::half,
                 PiFamily::commuting})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

namespace {

// Random automorphism of the rooted tree whose level-L nodes are the blocks
// of chain[L].
Permutation random_tree_automorphism(const std::vector<Partition>& chain, std::mt19937_64& rng) {
  const std::size_t n = chain.front().degree();
  const std::size_t top = chain.size() - 1;
  // children[L][b]: blocks of chain[L-1] inside block b of chain[L], by minimum.
  std::vector<std::vector<std::vector<std::size_t>>> children(chain.size());
  for (std::size_t L = 1; L <= top; ++L) {
    children[L].resize(chain[L].block_count());
    for (std::size_t c = 0; c < chain[L - 1].block_count(); ++c)
      children[L][chain[L].block_of(chain[L - 1].block(c).front())].push_back(c);
  }
  std::vector<Point> im(n);
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> stack;
  for (std::size_t b = 0; b < chain[top].block_count(); ++b) stack.emplace_back(top, b, b);
  // Permute top-level blocks too when there is more than one.
  if (chain[top].block_count() > 1) {
    std::vector<std::size_t> perm(chain[top].block_count());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    shuffle(perm, rng);
    for (std::size_t b = 0; b < perm.size(); ++b) std::get<2>(stack[b]) = perm[b];
  }
  while (!stack.empty()) {
    auto [L, from, to] = stack.back();
    stack.pop_back();
    if (L == 0) {
      im[chain[0].block(from).front()] = chain[0].block(to).front();
      continue;
    }
    auto targets = children[L][to];
    shuffle(targets, rng);
    const auto& sources = children[L][from];
    for (std::size_t i = 0; i < sources.size(); ++i) stack.emplace_back(L - 1, sources[i], targets[i]);
  }
  return Permutation(std::move(im));
}

}  // namespace

Permutation random_pi(const RegularRep& spec, PiFamily family, std::mt19937_64& rng) {
  const std::size_t n = spec.degree();
  switch (family) {
    case PiFamily::uniform:
      return random_permutation(n, rng);
    case PiFamily::chain_preserving:
      return random_tree_automorphism(standard_chain(spec), rng);
    case PiFamily::b1_regular: {
      const auto b1 = orbit_partition(GeneratedGroup(n, {spec.rho.front()}));
      std::vector<Point> im(n);
      for (const auto& blk : b1.blocks()) {
        auto target = blk;
        shuffle(target, rng);
        for (std::size_t i = 0; i < blk.size(); ++i) im[blk[i]] = target[i];
      }
      const auto els = spec.elements();
      return Permutation(std::move(im)) * els[uniform_below(els.size(), rng)];
    }
    case PiFamily::half: {
      const auto halves = orbit_partition(spec.cyclic_part());
      std::vector<Point> im(n);
      std::iota(im.begin(), im.end(), Point{0});
      for (const auto& blk : halves.blocks()) {
        if (halves.same_block(blk.front(), 0)) continue;
        auto target = blk;
        shuffle(target, rng);
        for (std::size_t i = 0; i < blk.size(); ++i) im[blk[i]] = target[i];
      }
      return Permutation(std::move(im));
    }
    case PiFamily::commuting: {
      const auto& r = spec.rho.front();
      const auto cycles = r.cycles();
      std::vector<std::size_t> perm(cycles.size());
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      shuffle(perm, rng);
      std::vector<Point> im(n);
      const std::size_t p = cycles.front().size();
      for (std::size_t j = 0; j < cycles.size(); ++j) {
        const std::size_t off = uniform_below(p, rng);
        for (std::size_t t = 0; t < p; ++t) im[cycles[j][t]] = cycles[perm[j]][(t + off) % p];
      }
      return Permutation(std::move(im));
    }
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace dci
