#include "dci/instance.hpp"

#include <stdexcept>

#include "dci/blocks.hpp"

namespace dci {

const GeneratedGroup& ConjugationInstance::group() const {
  if (!group_) {
    auto gens = r().generators();
    for (auto& g : rp().generators()) gens.push_back(g);
    group_ = std::make_shared<const GeneratedGroup>(r().degree(), std::move(gens));
  }
  return *group_;
}

nlohmann::json ConjugationInstance::to_json() const {
  return {{"x", x}, {"r", r().to_json()}, {"rp", rp().to_json()}, {"chain", chain.diagnostics()}};
}

void repower_sigmas(ConjugationInstance& inst) {
  for (std::size_t i = 1; i <= inst.s(); ++i) {
    const auto& lower = inst.level(i - 1);
    const Point target = inst.rho(i)[inst.x];
    Permutation sig = inst.sigma(i);
    Permutation pw = sig;
    bool found = false;
    for (std::uint64_t k = 1; k < inst.prime(i); ++k, pw = pw * sig)
      if (lower.same_block(pw[inst.x], target)) {
        inst.chain.rp.rho[i - 1] = pw;
        found = true;
        break;
      }
    if (!found) throw std::logic_error("no power of sigma_" + std::to_string(i) + " aligns x");
  }
}

ConjugationInstance make_instance(const RegularRep& r, const RegularRep& rp, const ChainSearchOptions& opts) {
  ConjugationInstance inst;
  inst.chain = find_nested_chain(r, rp, opts);
  inst.x = 0;
  inst.halves = inst.chain.partitions[inst.s()];
  repower_sigmas(inst);
  return inst;
}

std::vector<std::string> check_notation(const ConjugationInstance& inst) {
  std::vector<std::string> fails;
  const std::size_t n = inst.r().degree();
  const std::size_t s = inst.s();
  for (const auto* rep : {&inst.r(), &inst.rp()}) {
    try {
      rep->validate();
      if (!rep->tau) fails.push_back("representation is not dihedral");
    } catch (const std::exception& e) {
      fails.push_back(std::string(rep == &inst.r() ? "R: " : "Rp: ") + e.what());
    }
  }
  if (inst.r().orders != inst.rp().orders) fails.push_back("R and Rp have different primes");
  if (n != inst.rp().degree()) fails.push_back("R and Rp act on different sets");
  if (inst.x >= n) {
    fails.push_back("x out of range");
    return fails;
  }
  if (!fails.empty()) return fails;

  for (auto& f : check_nested_chain(inst.chain)) fails.push_back(std::move(f));
  if (inst.chain.partitions.size() != s + 2) return fails;
  for (std::size_t i = 1; i <= s; ++i)
    if (!inst.level(i - 1).same_block(inst.sigma(i)[inst.x], inst.rho(i)[inst.x]))
      fails.push_back("level " + std::to_string(i) + ": x*sigma and x*rho lie in different blocks below");
  if (!(inst.halves == inst.level(s))) fails.push_back("halves differ from the top proper level");
  if (inst.halves.block_count() != 2) fails.push_back("halves do not have two blocks");
  return fails;
}

Reordering reorder_chain(const ConjugationInstance& inst, const Partition& c) {
  const std::size_t s = inst.s();
  const auto& g = inst.group();
  if (c.degree() != inst.r().degree()) throw std::invalid_argument("partition has the wrong degree");
  if (!is_invariant(g, c)) throw std::invalid_argument("partition is not invariant");
  if (!refines(c, inst.halves)) throw std::invalid_argument("partition does not refine the halves");

  Reordering out;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < s; ++i) {
    const auto& rho = inst.r().rho[i];
    bool fixes_blocks = true;
    for (const auto& b : c.blocks())
      if (!c.same_block(b.front(), rho[b.front()])) {
        fixes_blocks = false;
        break;
      }
    (fixes_blocks ? out.phi : rest).push_back(i);
  }
  out.t = out.phi.size();
  out.phi.insert(out.phi.end(), rest.begin(), rest.end());

  std::vector<Partition> parts{Partition::singletons(c.degree())};
  for (std::size_t j = 1; j <= s; ++j) {
    const auto& old_level = inst.level(out.phi[j - 1] + 1);
    parts.push_back(j <= out.t ? partition_meet(old_level, c) : partition_join(g, c, old_level, inst.halves));
  }
  parts.push_back(Partition::whole(c.degree()));

  ConjugationInstance& ni = out.instance;
  ni.chain = inst.chain;
  ni.chain.r = inst.r().reordered(out.phi);
  ni.chain.rp = inst.rp().reordered(out.phi);
  for (std::size_t j = 0; j < s; ++j) ni.chain.prime_order[j] = inst.chain.prime_order[out.phi[j]];
  ni.chain.partitions = std::move(parts);
  ni.x = inst.x;
  ni.halves = inst.halves;
  repower_sigmas(ni);
  auto fails = check_notation(ni);
  if (!(ni.level(out.t) == c)) fails.push_back("reordered chain does not pass through the given partition");
  if (!fails.empty()) throw std::logic_error("reordered chain is inconsistent: " + fails.front());
  return out;
}

}  // namespace dci
