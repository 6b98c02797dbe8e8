#include <gtest/gtest.h>

#include <random>

#include "dsrg60/group.hpp"
#include "oracles.hpp"

using namespace dsrg60;

namespace {

oracle::Perm as_vector(const Permutation& p) { return {p.images().begin(), p.images().end()}; }

}  // namespace

TEST(Permutation, ComposeAppliesLeftFirst) {
    auto a = Permutation::from_cycles(3, {{0, 1}});
    auto b = Permutation::from_cycles(3, {{1, 2}});
    auto c = compose(a, b);
    EXPECT_EQ(c(0), 2);
    EXPECT_EQ(c(2), 1);
    EXPECT_EQ(c(1), 0);
    EXPECT_EQ(c.order(), 3u);
}

TEST(Permutation, RejectsNonBijection) {
    std::vector<int> bad{0, 0, 1};
    EXPECT_THROW(Permutation::from_images(bad), std::invalid_argument);
    EXPECT_THROW(Permutation::from_cycles(3, {{0, 1}, {1, 2}}), std::invalid_argument);
}

TEST(Permutation, InverseAndCommutatorAgreeWithOracle) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> x(9), y(9);
        std::iota(x.begin(), x.end(), 0);
        std::iota(y.begin(), y.end(), 0);
        std::shuffle(x.begin(), x.end(), rng);
        std::shuffle(y.begin(), y.end(), rng);
        auto p = Permutation::from_images(x), q = Permutation::from_images(y);
        EXPECT_EQ(as_vector(compose(p, q)), oracle::mul(x, y));
        EXPECT_EQ(as_vector(invert(p)), oracle::inverse(x));
        EXPECT_TRUE(compose(p, invert(p)).is_identity());
        auto expected = oracle::mul(oracle::mul(oracle::inverse(x), oracle::inverse(y)), oracle::mul(x, y));
        EXPECT_EQ(as_vector(commutator(p, q)), expected);
    }
}

TEST(Group, S5xC2MatchesBruteForce) {
    auto g = make_s5xc2();
    auto ref = oracle::s5xc2();
    ASSERT_EQ(g.size(), 240u);
    ASSERT_EQ(ref.size(), 240u);
    for (const auto& e : g.elements()) EXPECT_TRUE(ref.count(as_vector(e)));
    EXPECT_EQ(oracle::center(ref).size(), 2u);
    EXPECT_EQ(oracle::derived(ref).size(), 60u);

    auto fp = fingerprint(g);
    EXPECT_EQ(fp.order, 240u);
    EXPECT_EQ(fp.center_order, 2u);
    EXPECT_EQ(fp.derived_order, 60u);
    EXPECT_TRUE(fp.derived_is_perfect);
    EXPECT_EQ(identify_group(fp), GroupLabel::S5xC2);
    EXPECT_EQ(to_string(identify_group(fp)), "S5×2");
}

TEST(Group, StabilizerChainOrderMatchesClosure) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4 + trial % 5;
        std::vector<Permutation> gens;
        std::vector<oracle::Perm> raw;
        for (int j = 0; j < 1 + trial % 3; ++j) {
            std::vector<int> x(n);
            std::iota(x.begin(), x.end(), 0);
            std::shuffle(x.begin(), x.end(), rng);
            gens.push_back(Permutation::from_images(x));
            raw.push_back(x);
        }
        auto expected = oracle::closure(raw, n);
        EXPECT_EQ(group_order(n, gens), GroupOrder(expected.size()));
        StabilizerChain chain(n, gens);
        for (const auto& e : expected) EXPECT_TRUE(chain.contains(Permutation::from_images(e)));
    }
}

TEST(Group, SymmetricGroupOrders) {
    EXPECT_EQ(symmetric_group(5, 5).size(), 120u);
    EXPECT_EQ(alternating_group_5().size(), 60u);
    EXPECT_EQ(identify_group(fingerprint(symmetric_group(5, 5))), GroupLabel::S5);
    EXPECT_EQ(identify_group(fingerprint(alternating_group_5())), GroupLabel::A5);
}

TEST(Group, FingerprintIsConjugationInvariant) {
    auto g = make_s5xc2();
    std::vector<int> x{3, 6, 0, 5, 1, 2, 4};
    auto c = Permutation::from_images(x);
    std::vector<Permutation> gens;
    for (const auto& s : g.generators()) gens.push_back(conjugate(s, c));
    auto h = PermGroup::enumerate(7, gens);
    EXPECT_EQ(fingerprint(h), fingerprint(g));
}

TEST(Group, A5xC2IsNotMisidentified) {
    auto a5 = alternating_group_5();
    std::vector<Permutation> gens;
    for (const auto& s : a5.generators()) {
        std::vector<int> x(s.images().begin(), s.images().end());
        x.push_back(5);
        x.push_back(6);
        gens.push_back(Permutation::from_images(x));
    }
    gens.push_back(Permutation::from_cycles(7, {{5, 6}}));
    auto g = PermGroup::enumerate(7, gens);
    ASSERT_EQ(g.size(), 120u);
    EXPECT_EQ(identify_group(fingerprint(g)), GroupLabel::Other);
}

TEST(Group, KleinClassesOfS5xC2) {
    auto g = make_s5xc2();
    auto classes = klein_subgroup_classes(g);
    ASSERT_EQ(classes.size(), 7u);
    std::size_t total = 0;
    for (const auto& c : classes) {
        EXPECT_EQ(c.representative.size(), 4u);
        for (const auto& e : c.representative.elements()) EXPECT_LE(e.order(), 2u);
        EXPECT_EQ(240u % c.class_size, 0u);
        total += c.class_size;
    }
    // Brute force: every unordered pair of commuting distinct involutions
    // generates one Klein group, and each group arises from 3 pairs.
    auto ref = oracle::s5xc2();
    std::vector<oracle::Perm> inv;
    for (const auto& x : ref)
        if (oracle::mul(x, x) == *ref.begin() && x != *ref.begin()) inv.push_back(x);
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < inv.size(); ++i)
        for (std::size_t j = i + 1; j < inv.size(); ++j) pairs += oracle::mul(inv[i], inv[j]) == oracle::mul(inv[j], inv[i]);
    EXPECT_EQ(total, pairs / 3);
}

TEST(Group, KleinClassesOfSmallGroups) {
    EXPECT_EQ(klein_subgroup_classes(symmetric_group(5, 5)).size(), 2u);
    auto c2 = PermGroup::enumerate(2, {Permutation::from_cycles(2, {{0, 1}})});
    EXPECT_TRUE(klein_subgroup_classes(c2).empty());
}

TEST(Group, DerivedGeneratorsMatchEnumeration) {
    auto g = make_s5xc2();
    auto gens = derived_subgroup_generators(7, g.generators());
    EXPECT_EQ(group_order(7, gens), GroupOrder(60));
    EXPECT_EQ(derived_subgroup(g).size(), 60u);
}

TEST(Group, OrbitsOfS5xC2) {
    auto g = make_s5xc2();
    auto five = Permutation::from_cycles(7, {{0, 1, 2, 3, 4}});
    std::vector<Permutation> one{five};
    EXPECT_EQ(orbit(one, 0, 7), (std::vector<int>{0, 1, 2, 3, 4}));
    std::vector<Permutation> none;
    EXPECT_EQ(orbit(none, 3, 7), (std::vector<int>{3}));
    EXPECT_EQ(orbits(g.generators(), 7), (std::vector<std::vector<int>>{{0, 1, 2, 3, 4}, {5, 6}}));
}

TEST(Group, SmallFingerprints) {
    auto s5 = fingerprint(symmetric_group(5, 5));
    EXPECT_EQ(s5.order, 120u);
    EXPECT_EQ(s5.center_order, 1u);
    EXPECT_EQ(s5.derived_order, 60u);
    EXPECT_TRUE(s5.derived_is_perfect);

    auto trivial = PermGroup::enumerate(3, {});
    auto fp = fingerprint(trivial);
    EXPECT_EQ(fp.order, 1u);
    EXPECT_EQ(fp.center_order, 1u);
    EXPECT_EQ(fp.derived_order, 1u);
    EXPECT_EQ(group_order(3, std::vector<Permutation>{}), GroupOrder(1));
    EXPECT_EQ(identify_group(fp), GroupLabel::Other);
}
