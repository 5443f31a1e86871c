#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "dci/chain.hpp"
#include "dci/dihedral.hpp"
#include "dci/group.hpp"
#include "dci/partition.hpp"

namespace dci {

// A pair of regular dihedral groups R = <rho_i, tau_1> and
// Rp = <sigma_i, tau_2> with a nested chain invariant under G = <R, Rp>.
//
// chain.r and chain.rp hold the generators in chain order; sigma_i has been
// replaced by the power that sends x into the same level i-1 block as
// x*rho_i.  halves is the top proper level, with x in the block F1.
struct ConjugationInstance {
  NestedChain chain;
  Point x = 0;
  Partition halves;

  const RegularRep& r() const { return chain.r; }
  const RegularRep& rp() const { return chain.rp; }
  std::size_t s() const { return chain.r.orders.size(); }
  std::uint64_t prime(std::size_t i) const { return chain.r.orders[i - 1]; }  // 1-based
  const Permutation& rho(std::size_t i) const { return chain.r.rho[i - 1]; }
  const Permutation& sigma(std::size_t i) const { return chain.rp.rho[i - 1]; }
  const Permutation& tau1() const { return *chain.r.tau; }
  const Permutation& tau2() const { return *chain.rp.tau; }
  const Partition& level(std::size_t i) const { return chain.partitions[i]; }
  // Block of `halves` holding x (F1) or not (F2).
  const std::vector<Point>& f1() const { return halves.block_containing(x); }
  const std::vector<Point>& f2() const { return halves.block(1 - halves.block_of(x)); }

  // <R, Rp>, built on first use.
  const GeneratedGroup& group() const;

  nlohmann::json to_json() const;

 private:
  mutable std::shared_ptr<const GeneratedGroup> group_;
};

// Runs the chain search on (R, Rp), replaces Rp by its conjugate and
// re-powers each sigma_i.  Throws ChainSearchExhausted on failure.
ConjugationInstance make_instance(const RegularRep& r, const RegularRep& rp, const ChainSearchOptions& opts = {});

// Replaces each sigma_i by the power aligning x.  Throws std::logic_error if
// no power does.
void repower_sigmas(ConjugationInstance& inst);

// Every standing property of an instance as a list of failures (empty when
// all hold).
std::vector<std::string> check_notation(const ConjugationInstance& inst);

struct Reordering {
  ConjugationInstance instance;
  std::vector<std::size_t> phi;  // new position j (0-based) -> old position
  std::size_t t = 0;             // instance.level(t) == C
};

// A new chain through the invariant partition C (which must refine the
// halves): primes whose rho fixes every block of C come first.  Throws
// std::invalid_argument if C is not invariant or does not refine the halves,
// and std::logic_error if the rebuilt chain fails check_notation.
Reordering reorder_chain(const ConjugationInstance& inst, const Partition& c);

}  // namespace dci
