#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dci/ci.hpp"
#include "dci/group.hpp"
#include "dci/instance.hpp"
#include "dci/partition.hpp"
#include "dci/perm.hpp"

namespace dci {

// Generators of G_y for every point y of the transitive group g, obtained by
// conjugating one point stabiliser along transversal elements.
std::vector<std::vector<Permutation>> all_point_stabilizers(const GeneratedGroup& g);

// Classes of the relation "B_z is not inside one orbit of G_y", closed
// transitively.  b must be invariant with prime-size blocks equal to the
// orbits of rho.  The relation is checked to be symmetric and the result to
// be invariant; violations throw std::logic_error, bad inputs
// std::invalid_argument.
Partition equiv_b_partition(const GeneratedGroup& g, const Partition& b, const Permutation& rho);

// Points grouped by equality of the setwise stabilisers of their p-blocks.
// Throws std::invalid_argument if p is not invariant under the transitive
// group g.
Partition stabilizer_class_partition(const GeneratedGroup& g, const Partition& p);

// An element h of g with (u, v)h = (u, v)beta, if any.
std::optional<Permutation> pair_witness(const GeneratedGroup& g, const Permutation& beta, Point u, Point v);

struct ClosureWitness {
  enum class Status { found, hypotheses_fail, not_found };
  Status status = Status::not_found;
  std::optional<Permutation> h;
  std::string reason;
};

// Pairwise certificate for beta: when beta fixes both halves, some g in G
// matches beta on the d-blocks of u and v, and d_v lies in one orbit of G_u,
// builds h in G with (u, v)h = (u, v)beta from g, an element of the cyclic
// part of R and an element of G_u.  hypotheses_fail reports which condition
// is missing; not_found means the conditions hold but no h was assembled.
ClosureWitness in_2_closure_witness(const ConjugationInstance& inst, const Permutation& beta, const Partition& d,
                                    Point u, Point v);

// Same instance with rp replaced by rp^beta and the sigmas re-powered.
ConjugationInstance conjugated(const ConjugationInstance& inst, const Permutation& beta);

// Conjugators built from half-wise cyclic conjugators.  Requires F2 to be a
// single orbit of G_x; returns beta with rp^beta = r (as groups) in the
// 2-closure of G; Rp = R passes through as the identity.  Precondition
// failures throw std::invalid_argument,
// failed postconditions std::logic_error.
Permutation use_cyclic_conjugator(const ConjugationInstance& inst);

// For G block-regular on level 1: beta in the 2-closure of G with
// sigma_1^beta = rho_1 that fixes every level 1 block.
Permutation reg_on_b1_conjugator(const ConjugationInstance& inst);

// For G block-regular on level 1 and sigma_m = rho_m for m < i: beta_i in
// the 2-closure of G with sigma_i^beta_i = rho_i that fixes sigma_m, m < i.
Permutation reg_on_b1_finish(const ConjugationInstance& inst, std::size_t i);

struct PipelineOptions {
  ConjugatorOptions generic;
  // Audit every returned conjugator with the pairwise witness sweep as well
  // (quadratic in the degree).
  bool pairwise_audit = false;
};

struct PipelineResult {
  std::string path;  // "B1", "use-cyclic" or "generic"
  Permutation beta;  // inst.rp()^beta = inst.r()
  nlohmann::json checks;
  std::vector<std::string> notes;
  bool ok = false;

  nlohmann::json to_json() const;
};

// Picks the explicit construction when its hypothesis holds (block-regular
// on level 1, then F2 an orbit of G_x) and the generic 2-closure search
// otherwise or when an explicit construction fails its own checks.  The
// returned beta is audited against the orbitals of inst.group().
PipelineResult pipeline_conjugate(const ConjugationInstance& inst, const PipelineOptions& opts = {});

struct PipelineRun {
  ConjugationInstance instance;
  PipelineResult result;
  Permutation beta;  // from the original rp: rp^beta = r
  bool audit_original = false;
  nlohmann::json to_json() const;
};

// make_instance followed by pipeline_conjugate; the composed conjugator is
// re-audited against the orbitals of the original <r, rp>.
PipelineRun run_pipeline(const RegularRep& r, const RegularRep& rp, const PipelineOptions& opts = {},
                         const ChainSearchOptions& chain_opts = {});

}  // namespace dci
