#pragma once

#include <cstddef>
#include <optional>

#include "dci/dihedral.hpp"
#include "dci/group.hpp"

namespace dci {

struct ConjugatorOptions {
  // Try every basepoint image instead of only point 0.  When R lies in A the
  // single basepoint already decides existence, so this is for auditing.
  bool sweep_all_basepoints = false;
  std::size_t jobs = 1;
};

// The unique delta with delta[x] = y and delta^-1 * g_j * delta = images[j]
// for every generator g_j of rp, where images[j] are elements of r.
// Throws std::logic_error if the generator images are inconsistent.
Permutation build_candidate(const RegularRep& rp, const std::vector<Permutation>& images, Point x, Point y);

// delta in A with rp^delta = r, or nullopt when none exists.  Candidates are
// enumerated by basepoint image (ascending), then by automorphism of r in
// dihedral_automorphisms order, composed with the generator correspondence
// rp.rho[i] -> r.rho[i], rp.tau -> r.tau.  The first hit is returned.
std::optional<Permutation> find_conjugator(const GeneratedGroup& a, const RegularRep& r, const RegularRep& rp,
                                           const ConjugatorOptions& opts = {});

// True iff delta^-1 g delta lies in r for every generator g of rp.
bool conjugates_into(const Permutation& delta, const RegularRep& rp, const RegularRep& r);

struct BabaiResult {
  std::optional<Permutation> delta;
  BigInt group_order;    // |<R, Rp>|
  BigInt closure_order;  // |<R, Rp>^(2)|
};

// Conjugator search inside the 2-closure of <R, Rp>.  A returned delta is
// re-checked against the orbitals of <R, Rp>; a failure there throws
// std::logic_error.
BabaiResult babai_ci_check(const RegularRep& r, const RegularRep& rp, const ConjugatorOptions& opts = {});

}  // namespace dci
