#include <gtest/gtest.h>

#include <map>
#include <random>

#include "dci/dihedral.hpp"
#include "oracles.hpp"

using namespace dci;

namespace {

// Bijections of the abstract group that respect multiplication, counted by
// brute force over every map of the element list.
std::size_t brute_automorphism_count(const std::vector<Permutation>& elems) {
  std::map<Permutation, std::size_t> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = i;
  std::size_t count = 0;
  for (const auto& phi : oracle::all_permutations(elems.size())) {
    bool hom = true;
    for (std::size_t a = 0; a < elems.size() && hom; ++a)
      for (std::size_t b = 0; b < elems.size() && hom; ++b)
        hom = phi[index.at(elems[a] * elems[b])] == index.at(elems[phi[a]] * elems[phi[b]]);
    count += hom;
  }
  return count;
}

}  // namespace

TEST(Dihedral, StandardRepresentation) {
  auto r = regular_dihedral({3, 5});
  EXPECT_NO_THROW(r.validate());
  EXPECT_EQ(r.degree(), 30u);
  EXPECT_EQ(r.order(), 30u);
  EXPECT_EQ(r.group().order(), 30);
  auto elems = r.elements();
  ASSERT_EQ(elems.size(), 30u);
  for (Point p = 0; p < 30; ++p) EXPECT_EQ(elems[p][0], p);
  EXPECT_EQ(oracle::closure(30, r.generators()).size(), 30u);
}

TEST(Dihedral, RejectsBadPrimes) {
  EXPECT_THROW(regular_dihedral({3, 3}), std::invalid_argument);
  EXPECT_THROW(regular_dihedral({2, 3}), std::invalid_argument);
  EXPECT_THROW(regular_dihedral({9}), std::invalid_argument);
  EXPECT_THROW(regular_dihedral({3, 5, 7, 11}, 512), std::invalid_argument);
}

TEST(Dihedral, JsonRoundTrip) {
  auto r = random_regular_conjugate(regular_dihedral({3, 5}), 11);
  EXPECT_EQ(RegularRep::from_json(r.to_json()), r);
  auto c = regular_cyclic({9});
  EXPECT_TRUE(c.to_json().at("tau").is_null());
  EXPECT_EQ(RegularRep::from_json(c.to_json()), c);
}

TEST(Dihedral, AutomorphismCountsAgainstBruteForce) {
  for (auto r : {regular_dihedral({3}), regular_cyclic({7}), regular_cyclic({8})}) {
    auto elems = r.elements();
    EXPECT_EQ(dihedral_automorphisms(r).size(), brute_automorphism_count(elems));
  }
  EXPECT_EQ(dihedral_automorphisms(regular_dihedral({3, 5})).size(), 15u * 8u);
}

TEST(Dihedral, AutomorphismImagesSatisfyRelations) {
  auto r = regular_dihedral({3, 5});
  for (const auto& a : dihedral_automorphisms(r)) {
    auto imgs = a.images_in(r);
    ASSERT_EQ(imgs.size(), 3u);
    EXPECT_EQ(imgs[0].order(), 3u);
    EXPECT_EQ(imgs[1].order(), 5u);
    EXPECT_EQ(imgs[2].order(), 2u);
    EXPECT_EQ(imgs[0] * imgs[1], imgs[1] * imgs[0]);
    for (int i = 0; i < 2; ++i) EXPECT_EQ(imgs[i].conjugate(imgs[2]), imgs[i].inverse());
    EXPECT_EQ(GeneratedGroup(30, imgs).order(), 30);
  }
}

TEST(Dihedral, ConjugatesStayRegular) {
  auto r = regular_dihedral({3, 5});
  std::mt19937_64 rng(5);
  for (auto fam : {PiFamily::uniform, PiFamily::chain_preserving, PiFamily::b1_regular, PiFamily::half,
                   PiFamily::commuting}) {
    auto rp = r.conjugate(random_pi(r, fam, rng));
    EXPECT_NO_THROW(rp.validate()) << to_string(fam);
  }
}

TEST(Dihedral, FamilyProperties) {
  auto r = regular_dihedral({3, 5});
  auto chain = standard_chain(r);
  ASSERT_EQ(chain.size(), 4u);
  EXPECT_EQ(chain[1].uniform_block_size(), 3u);
  EXPECT_EQ(chain[2].uniform_block_size(), 15u);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    auto pi = random_pi(r, PiFamily::commuting, rng);
    EXPECT_EQ(r.rho[0] * pi, pi * r.rho[0]);
    auto half = random_pi(r, PiFamily::half, rng);
    for (Point y : chain[2].block_containing(0)) EXPECT_EQ(half[y], y);
    auto cp = random_pi(r, PiFamily::chain_preserving, rng);
    for (std::size_t l = 1; l <= 2; ++l) EXPECT_EQ(chain[l].image(cp), chain[l]);
  }
}

TEST(Dihedral, FamilyNames) {
  for (auto fam : {PiFamily::uniform, PiFamily::chain_preserving, PiFamily::b1_regular, PiFamily::half,
                   PiFamily::commuting})
    EXPECT_EQ(parse_pi_family(to_string(fam)), fam);
  EXPECT_FALSE(parse_pi_family("bogus"));
}
