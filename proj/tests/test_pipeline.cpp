#include <gtest/gtest.h>

#include "dci/blocks.hpp"
#include "dci/ci.hpp"
#include "dci/closure.hpp"
#include "dci/pipeline.hpp"
#include "dci/selftest.hpp"

using namespace dci;

namespace {

bool fixes_blocks(const Permutation& f, const Partition& p) {
  for (Point y = 0; y < f.degree(); ++y)
    if (!p.same_block(y, f[y])) return false;
  return true;
}

bool f2_is_stabiliser_orbit(const ConjugationInstance& inst) {
  return orbit(point_stabilizer(inst.group(), inst.x), inst.f2().front()).size() == inst.f2().size();
}

std::vector<ConjugationInstance> seeded(PiFamily fam, std::size_t count, std::uint64_t seed = 21) {
  auto r = regular_dihedral({3, 5});
  std::vector<ConjugationInstance> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(make_instance(r, r.conjugate(sample_pi(r, fam, seed, k))));
  return out;
}

}  // namespace

TEST(Partitions, IdentityInstance) {
  auto r = regular_dihedral({3, 5});
  auto inst = make_instance(r, r);
  EXPECT_TRUE(equiv_b_partition(inst.group(), inst.level(1), inst.rho(1)).is_whole());
  EXPECT_TRUE(stabilizer_class_partition(inst.group(), inst.level(1)).is_whole());
}

TEST(Partitions, SymmetricGroupStabilisersDiffer) {
  auto s3 = GeneratedGroup::symmetric(3);
  EXPECT_TRUE(stabilizer_class_partition(s3, Partition::singletons(3)).is_trivial());
}

TEST(Partitions, RejectsBadInputs) {
  auto r = regular_dihedral({3, 5});
  auto inst = make_instance(r, r);
  EXPECT_THROW(equiv_b_partition(inst.group(), inst.level(2), inst.rho(1)), std::invalid_argument);
  auto bad = Partition::from_labels(std::vector<std::size_t>{0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7,
                                                             7, 8, 8, 9, 9, 10, 10, 11, 11, 12, 12, 13, 13, 14, 14});
  EXPECT_THROW(stabilizer_class_partition(inst.group(), bad), std::invalid_argument);
}

TEST(Partitions, XCoarsensBAndKRefinesY) {
  for (const auto& inst : seeded(PiFamily::chain_preserving, 15)) {
    const auto& g = inst.group();
    auto x = equiv_b_partition(g, inst.level(1), inst.rho(1));
    EXPECT_TRUE(refines(inst.level(1), x));
    EXPECT_TRUE(is_invariant(g, x));
    auto k = stabilizer_class_partition(g, inst.level(1));
    EXPECT_TRUE(is_invariant(g, k));
    auto c = orbit_partition(GeneratedGroup(30, {inst.rho(2)}));
    if (is_invariant(g, c)) EXPECT_TRUE(refines(k, equiv_b_partition(g, c, inst.rho(2))));
  }
}

TEST(Conjugators, IdentityPassThrough) {
  auto r = regular_dihedral({3, 5});
  auto inst = make_instance(r, r);
  EXPECT_TRUE(reg_on_b1_conjugator(inst).is_identity());
  EXPECT_TRUE(use_cyclic_conjugator(inst).is_identity());
  EXPECT_TRUE(reg_on_b1_finish(inst, 2).is_identity());
  auto res = pipeline_conjugate(inst);
  EXPECT_TRUE(res.ok);
  EXPECT_TRUE(res.beta.is_identity());
  auto w = in_2_closure_witness(inst, Permutation::identity(30), Partition::singletons(30), 0, 7);
  ASSERT_EQ(w.status, ClosureWitness::Status::found);
  EXPECT_TRUE(w.h->is_identity());
}

TEST(Conjugators, BlockRegularPath) {
  std::size_t used = 0;
  for (const auto& inst : seeded(PiFamily::b1_regular, 20)) {
    const auto& g = inst.group();
    if (!is_block_regular(g, inst.level(1))) continue;
    ++used;
    auto beta = reg_on_b1_conjugator(inst);
    EXPECT_EQ(inst.sigma(1).conjugate(beta), inst.rho(1));
    EXPECT_TRUE(fixes_blocks(beta, inst.level(1)));
    EXPECT_TRUE(preserves_orbitals(g, beta));
    auto next = conjugated(inst, beta);
    auto beta2 = reg_on_b1_finish(next, 2);
    EXPECT_EQ(next.sigma(2).conjugate(beta2), next.rho(2));
    EXPECT_EQ(next.sigma(1).conjugate(beta2), next.rho(1));
    EXPECT_TRUE(preserves_orbitals(next.group(), beta2));
    // Certificates for pairs in different X-classes.
    auto x = equiv_b_partition(g, inst.level(1), inst.rho(1));
    for (Point v = 1; v < 30; ++v) {
      if (x.same_block(0, v)) continue;
      auto w = in_2_closure_witness(inst, beta, inst.level(1), 0, v);
      if (w.status != ClosureWitness::Status::found) continue;
      EXPECT_TRUE(g.contains(*w.h));
      EXPECT_EQ((*w.h)[0], beta[0]);
      EXPECT_EQ((*w.h)[v], beta[v]);
    }
  }
  EXPECT_GT(used, 10u);
}

TEST(Conjugators, UseCyclicPathAgreesWithGenericSearch) {
  std::size_t used = 0;
  for (auto fam : {PiFamily::uniform, PiFamily::half, PiFamily::commuting})
    for (const auto& inst : seeded(fam, 10)) {
      if (!f2_is_stabiliser_orbit(inst)) continue;
      ++used;
      auto beta = use_cyclic_conjugator(inst);
      EXPECT_TRUE(preserves_orbitals(inst.group(), beta));
      EXPECT_TRUE(conjugates_into(beta, inst.rp(), inst.r()));
      auto generic = babai_ci_check(inst.r(), inst.rp());
      ASSERT_TRUE(generic.delta);
      EXPECT_TRUE(conjugates_into(*generic.delta, inst.rp(), inst.r()));
    }
  EXPECT_GT(used, 0u);
}

TEST(Conjugators, PreconditionsChecked) {
  for (const auto& inst : seeded(PiFamily::uniform, 5)) {
    if (!is_block_regular(inst.group(), inst.level(1)))
      EXPECT_THROW(reg_on_b1_conjugator(inst), std::invalid_argument);
    if (!f2_is_stabiliser_orbit(inst)) EXPECT_THROW(use_cyclic_conjugator(inst), std::invalid_argument);
  }
}

TEST(Conjugators, WitnessHypothesesReported) {
  auto inst = seeded(PiFamily::uniform, 1).front();
  // tau_1 swaps the halves.
  auto w = in_2_closure_witness(inst, inst.tau1(), inst.level(1), 0, 1);
  EXPECT_EQ(w.status, ClosureWitness::Status::hypotheses_fail);
  EXPECT_FALSE(w.reason.empty());
}

TEST(Pipeline, SeededDegree30) {
  auto r = regular_dihedral({3, 5});
  for (std::size_t k = 0; k < 30; ++k) {
    auto rp = r.conjugate(sample_pi(r, std::nullopt, 13, k));
    auto run = run_pipeline(r, rp);
    EXPECT_TRUE(run.result.ok) << "sample " << k;
    EXPECT_TRUE(run.audit_original) << "sample " << k;
    EXPECT_TRUE(conjugates_into(run.beta, rp, r)) << "sample " << k;
    GeneratedGroup g(30, [&] {
      auto gens = r.generators();
      for (const auto& f : rp.generators()) gens.push_back(f);
      return gens;
    }());
    EXPECT_TRUE(preserves_orbitals(g, run.beta));
  }
}

TEST(Ci, BabaiOnSeededPairs) {
  auto r = regular_dihedral({3, 5});
  for (std::size_t k = 0; k < 10; ++k) {
    auto rp = r.conjugate(sample_pi(r, std::nullopt, 17, k));
    auto res = babai_ci_check(r, rp);
    ASSERT_TRUE(res.delta);
    EXPECT_TRUE(conjugates_into(*res.delta, rp, r));
    EXPECT_GE(res.closure_order, res.group_order);
  }
}

TEST(Ci, ConjugatesIntoRejectsStrangers) {
  auto r = regular_dihedral({3, 5});
  auto rp = r.conjugate(sample_pi(r, PiFamily::uniform, 17, 0));
  EXPECT_TRUE(conjugates_into(Permutation::identity(30), r, r));
  EXPECT_FALSE(conjugates_into(Permutation::identity(30), rp, r));
}
