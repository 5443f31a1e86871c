#include <gtest/gtest.h>

#include "dci/blocks.hpp"
#include "dci/chain.hpp"
#include "dci/selftest.hpp"

using namespace dci;

namespace {

GeneratedGroup joined(const RegularRep& a, const RegularRep& b) {
  auto gens = a.generators();
  for (const auto& g : b.generators()) gens.push_back(g);
  return GeneratedGroup(a.degree(), gens);
}

}  // namespace

TEST(Chain, IdentityIsDirect) {
  auto r = regular_dihedral({3, 5, 7});
  auto c = find_nested_chain(r, r);
  EXPECT_EQ(c.strategy, "direct");
  EXPECT_TRUE(c.beta.is_identity());
  EXPECT_EQ(c.partitions, standard_chain(r));
  EXPECT_TRUE(check_nested_chain(c).empty());
}

TEST(Chain, CumulativeOrbits) {
  auto r = regular_dihedral({3, 5});
  auto o = cumulative_orbits(30, r.rho);
  ASSERT_EQ(o.size(), 2u);
  EXPECT_EQ(o[0].uniform_block_size(), 3u);
  EXPECT_EQ(o[1].uniform_block_size(), 15u);
}

TEST(Chain, AlignmentExponent) {
  auto r = regular_dihedral({3, 5});
  auto lower = Partition::singletons(30);
  const auto block = cumulative_orbits(30, r.rho)[0].block(0);
  EXPECT_EQ(alignment_exponent(r.rho[0], r.rho[0], 3, lower, block), 1u);
  EXPECT_EQ(alignment_exponent(r.rho[0], r.rho[0].pow(2), 3, lower, block), 2u);
  EXPECT_FALSE(alignment_exponent(r.rho[0], r.rho[1], 3, lower, block));
}

TEST(Chain, SeededDegree30) {
  auto r = regular_dihedral({3, 5});
  for (std::size_t k = 0; k < 40; ++k) {
    auto rp = r.conjugate(sample_pi(r, std::nullopt, 3, k));
    auto c = find_nested_chain(r, rp);
    EXPECT_TRUE(check_nested_chain(c).empty()) << "sample " << k;
    EXPECT_TRUE(joined(r, rp).contains(c.beta)) << "sample " << k;
    EXPECT_EQ(c.rp, rp.conjugate(c.beta).reordered(c.prime_order));
    EXPECT_EQ(c.r, r.reordered(c.prime_order));
    auto g = joined(c.r, c.rp);
    for (const auto& p : c.partitions) EXPECT_TRUE(is_invariant(g, p));
  }
}

TEST(Chain, CheckerRejectsBrokenChains) {
  auto r = regular_dihedral({3, 5});
  auto c = find_nested_chain(r, r.conjugate(sample_pi(r, PiFamily::b1_regular, 3, 0)));
  auto broken = c;
  std::swap(broken.partitions[1], broken.partitions[2]);
  EXPECT_FALSE(check_nested_chain(broken).empty());
  broken = c;
  broken.partitions.pop_back();
  EXPECT_FALSE(check_nested_chain(broken).empty());
}

TEST(Chain, RejectsMismatchedInputs) {
  EXPECT_THROW(find_nested_chain(regular_dihedral({3, 5}), regular_dihedral({3, 7})), std::invalid_argument);
  EXPECT_THROW(find_nested_chain(regular_cyclic({15}), regular_cyclic({15})), std::invalid_argument);
}

TEST(Chain, Degree210) {
  auto r = regular_dihedral({3, 5, 7});
  for (auto fam : {PiFamily::b1_regular, PiFamily::half}) {
    auto rp = r.conjugate(sample_pi(r, fam, 4, 0));
    auto c = find_nested_chain(r, rp);
    EXPECT_TRUE(check_nested_chain(c).empty()) << to_string(fam);
  }
}
