#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dci/blocks.hpp"
#include "dci/instance.hpp"
#include "dci/selftest.hpp"

using namespace dci;

namespace {

Partition orbits(std::size_t n, std::vector<Permutation> gens) { return orbit_partition(GeneratedGroup(n, gens)); }

}  // namespace

TEST(Instance, IdentityNotation) {
  auto r = regular_dihedral({3, 5});
  auto inst = make_instance(r, r);
  EXPECT_TRUE(check_notation(inst).empty());
  EXPECT_EQ(inst.s(), 2u);
  EXPECT_EQ(inst.f1().size(), 15u);
  EXPECT_EQ(inst.f2().size(), 15u);
  EXPECT_EQ(inst.group().order(), 30);
  for (std::size_t i = 1; i <= 2; ++i) EXPECT_EQ(inst.sigma(i), inst.rho(i));
}

TEST(Instance, SeededNotation) {
  auto r = regular_dihedral({3, 5});
  for (std::size_t k = 0; k < 25; ++k) {
    auto inst = make_instance(r, r.conjugate(sample_pi(r, std::nullopt, 8, k)));
    EXPECT_TRUE(check_notation(inst).empty()) << "sample " << k;
    // x*sigma_i and x*rho_i share their level i-1 block.
    for (std::size_t i = 1; i <= inst.s(); ++i)
      EXPECT_TRUE(inst.level(i - 1).same_block(inst.sigma(i)[inst.x], inst.rho(i)[inst.x]));
  }
}

TEST(Instance, NotationCatchesMisalignedSigma) {
  auto r = regular_dihedral({3, 5});
  auto inst = make_instance(r, r);
  inst.chain.rp.rho[1] = inst.chain.rp.rho[1].pow(2);
  EXPECT_FALSE(check_notation(inst).empty());
  repower_sigmas(inst);
  EXPECT_TRUE(check_notation(inst).empty());
}

TEST(Instance, ReorderIdentity) {
  auto r = regular_dihedral({3, 5, 7});
  auto inst = make_instance(r, r);
  auto re = reorder_chain(inst, inst.level(1));
  EXPECT_EQ(re.phi, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(re.t, 1u);
  EXPECT_TRUE(check_notation(re.instance).empty());
}

TEST(Instance, ReorderSinglePrime) {
  auto r = regular_dihedral({3, 5, 7});
  auto inst = make_instance(r, r);
  auto c = orbits(210, {inst.rho(2)});
  auto re = reorder_chain(inst, c);
  EXPECT_EQ(re.phi, (std::vector<std::size_t>{1, 0, 2}));
  EXPECT_EQ(re.t, 1u);
  EXPECT_EQ(re.instance.level(1), c);
  EXPECT_EQ(re.instance.prime(1), 5u);
}

TEST(Instance, ReorderTwoPrimes) {
  auto r = regular_dihedral({3, 5, 7});
  auto inst = make_instance(r, r);
  auto c = orbits(210, {inst.rho(2), inst.rho(3)});
  auto re = reorder_chain(inst, c);
  EXPECT_EQ(re.phi, (std::vector<std::size_t>{1, 2, 0}));
  EXPECT_EQ(re.t, 2u);
  EXPECT_EQ(re.instance.level(1).uniform_block_size(), 5u);
  EXPECT_EQ(re.instance.level(2).uniform_block_size(), 35u);
  EXPECT_EQ(re.instance.level(3).uniform_block_size(), 105u);
  EXPECT_EQ(re.instance.level(2), c);
}

namespace {

// Random element of the centraliser of the semiregular rho: permutes its
// orbits and shifts inside each.
Permutation centralising(const Permutation& rho, std::mt19937_64& rng) {
  const auto cycles = rho.cycles();
  std::vector<std::size_t> target(cycles.size());
  std::iota(target.begin(), target.end(), 0);
  std::shuffle(target.begin(), target.end(), rng);
  std::vector<Point> img(rho.degree());
  for (std::size_t a = 0; a < cycles.size(); ++a) {
    const auto& from = cycles[a];
    const auto& to = cycles[target[a]];
    const std::size_t shift = rng() % to.size();
    for (std::size_t k = 0; k < from.size(); ++k) img[from[k]] = to[(k + shift) % to.size()];
  }
  return Permutation(img);
}

}  // namespace

TEST(Instance, ReorderSeeded) {
  auto r = regular_dihedral({3, 5});
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    auto inst = make_instance(r, r.conjugate(centralising(r.rho[1], rng)));
    const std::size_t j = inst.prime(1) == 5 ? 1 : 2;
    auto c = orbits(30, {inst.rho(j)});
    ASSERT_TRUE(is_invariant(inst.group(), c));
    auto re = reorder_chain(inst, c);
    EXPECT_TRUE(check_notation(re.instance).empty());
    EXPECT_EQ(re.t, 1u);
    EXPECT_EQ(re.instance.level(1), c);
    EXPECT_EQ(re.instance.prime(1), 5u);
  }
}

TEST(Instance, ReorderRejectsBadPartitions) {
  auto r = regular_dihedral({3, 5});
  auto inst = make_instance(r, r);
  EXPECT_THROW(reorder_chain(inst, Partition::whole(30)), std::invalid_argument);
  auto bad = Partition::from_labels(std::vector<std::size_t>{0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7,
                                                             7, 8, 8, 9, 9, 10, 10, 11, 11, 12, 12, 13, 13, 14, 14});
  EXPECT_THROW(reorder_chain(inst, bad), std::invalid_argument);
}
