#include "rlpc/semilinear.hpp"

#include <gtest/gtest.h>

#include <set>

#include "rlpc/analysis.hpp"

namespace rlpc {
namespace {

using MapMB = SemilinearMap<MidOverBase>;
using MapTM = SemilinearMap<TopOverMid>;

class Semilinear : public ::testing::Test {
   protected:
    TowerField F{2, 3};  // F_8/F_2 for MidOverBase, F_64/F_8 for TopOverMid
};

TEST_F(Semilinear, IdentityAndInverse) {
    auto id = MapMB::identity(F);
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        FqmElem x = F.mid_rand(rng);
        EXPECT_EQ(id.apply(x), x);
    }
    EXPECT_EQ(id.inverse(), id);
    for (int trial = 0; trial < 20; ++trial) {
        auto phi = sample_automorphism<MidOverBase>(F, rng);
        auto inv = phi.inverse();
        for (int i = 0; i < 100; ++i) {
            FqmElem x = F.mid_rand(rng);
            EXPECT_EQ(inv.apply(phi.apply(x)), x);
        }
        EXPECT_EQ(inv.inverse(), phi);
    }
}

TEST_F(Semilinear, ApplyIsKLinear) {
    Rng rng(5);
    auto phi = sample_automorphism<TopOverMid>(F, rng);
    for (int i = 0; i < 200; ++i) {
        FqnElem x = F.top_rand(rng), y = F.top_rand(rng);
        FqmElem lam = F.mid_rand(rng);
        FqnElem lhs = phi.apply(F.top_add(F.scale_mid(lam, x), y));
        FqnElem rhs = F.top_add(F.scale_mid(lam, phi.apply(x)), phi.apply(y));
        EXPECT_EQ(lhs, rhs);
    }
}

TEST_F(Semilinear, IsometryInBothMetrics) {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        auto phi = sample_automorphism<TopOverMid>(F, rng);
        std::vector<FqnElem> v(F.n());
        for (auto& c : v) c = F.top_rand(rng);
        auto pv = phi.apply(std::span<const FqnElem>(v));
        EXPECT_EQ(hamming_weight(F, std::span<const FqnElem>(pv)),
                  hamming_weight(F, std::span<const FqnElem>(v)));
        EXPECT_EQ(rank_weight(F, std::span<const FqnElem>(pv), Subfield::base),
                  rank_weight(F, std::span<const FqnElem>(v), Subfield::base));
        EXPECT_EQ(rank_weight(F, std::span<const FqnElem>(pv), Subfield::mid),
                  rank_weight(F, std::span<const FqnElem>(v), Subfield::mid));
    }
}

TEST_F(Semilinear, FrobeniusAndStretchingAreFullyLinear) {
    // x -> x^2 on F_8 over F_2
    auto frob = MapMB::fully_linear_map(F, F.mid_one(), 1);
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        FqmElem x = F.mid_rand(rng);
        EXPECT_EQ(frob.apply(x), F.mid_sqr(x));
    }
    EXPECT_TRUE(is_fully_linear(frob));

    for (uint64_t b = 1; b < 8; ++b) {
        auto stretch = MapMB::fully_linear_map(F, FqmElem{b}, 0);
        EXPECT_TRUE(is_fully_linear(stretch));
        for (int i = 0; i < 20; ++i) {
            FqmElem x = F.mid_rand(rng);
            EXPECT_EQ(stretch.apply(x), F.mid_mul(FqmElem{b}, x));
        }
    }
    EXPECT_THROW(MapMB::fully_linear_map(F, F.mid_zero(), 0), DomainError);
}

// Exhaustive censuses: |Aut| = prod (|L| - |K|^i), fully linear = d(|L| - 1).
TEST(SemilinearCensus, CountsAcrossSmallExtensions) {
    struct Case {
        uint32_t q;
        unsigned m;
        bool top;  // census of the degree-2 extension instead of the mid one
        uint64_t expect_total, expect_fully;
    };
    // F_4/F_2: 6 of 6; F_8/F_2: 21 of 168; F_16/F_2: 60 of 20160;
    // F_16/F_4: 30 of 180; F_64/F_8: 126 of 3528
    std::vector<Case> cases = {
        {2, 2, false, 6, 6},    {2, 3, false, 168, 21}, {2, 4, false, 20160, 60},
        {4, 2, false, 180, 30}, {2, 3, true, 3528, 126},
    };
    for (auto& c : cases) {
        TowerField F(c.q, c.m);
        Census census;
        unsigned d;
        uint64_t ql, qk;
        if (c.top) {
            census = fully_linear_census<TopOverMid>(F);
            d = 2;
            ql = uint64_t(1) << F.top_bits();
            qk = uint64_t(1) << F.mid_bits();
        } else {
            census = fully_linear_census<MidOverBase>(F);
            d = F.m();
            ql = uint64_t(1) << F.mid_bits();
            qk = F.q();
        }
        EXPECT_EQ(census.total, c.expect_total) << "q=" << c.q << " m=" << c.m << " top=" << c.top;
        EXPECT_EQ(census.fully_linear, c.expect_fully);
        EXPECT_EQ(BigInt(census.total), automorphism_count(BigInt(qk), BigInt(ql), d));
        EXPECT_EQ(BigInt(census.fully_linear), fully_linear_count(BigInt(ql), d));
    }
}

// All (beta, j) pairs give distinct fully linear maps and exhaust them.
TEST_F(Semilinear, FullyLinearMapEnumeration) {
    std::set<std::vector<uint64_t>> seen;
    for (uint64_t b = 1; b < 8; ++b)
        for (size_t j = 0; j < 3; ++j) {
            auto phi = MapMB::fully_linear_map(F, FqmElem{b}, j);
            EXPECT_TRUE(is_fully_linear(phi));
            std::vector<uint64_t> key;
            for (size_t r = 0; r < 3; ++r)
                for (size_t c = 0; c < 3; ++c) key.push_back(phi.matrix()(r, c));
            seen.insert(key);
        }
    EXPECT_EQ(seen.size(), 21u);  // m(q^m - 1) = 3 * 7

    auto id = MapMB::fully_linear_map(F, F.mid_one(), 0);
    EXPECT_EQ(id, MapMB::identity(F));
}

TEST_F(Semilinear, LinearOnCodeWithSubfieldSystematicPart) {
    // systematic generator with all entries in K: every automorphism is
    // linear on the code and fixes it setwise
    TopOps tops{&F};
    Mat<FqnElem> gen(2, 4);
    gen(0, 0) = F.top_one();
    gen(1, 1) = F.top_one();
    gen(0, 2) = F.from_mid(FqmElem{3});
    gen(0, 3) = F.from_mid(FqmElem{5});
    gen(1, 2) = F.from_mid(FqmElem{1});
    gen(1, 3) = F.from_mid(FqmElem{7});
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        auto phi = sample_automorphism<TopOverMid>(F, rng);
        EXPECT_TRUE(is_linear_on_code(phi, gen));
        EXPECT_EQ(rref(tops, phi.apply(gen)), rref(tops, gen));  // phi(C) = C
    }
}

TEST_F(Semilinear, FullyLinearMapsAreLinearOnRandomCodes) {
    Rng rng(17);
    TopOps tops{&F};
    for (int trial = 0; trial < 25; ++trial) {
        FqnElem beta;
        do {
            beta = F.top_rand(rng);
        } while (F.top_is_zero(beta));
        auto phi = MapTM::fully_linear_map(F, beta, rng.below(2));
        Mat<FqnElem> gen(2, 5);
        do {
            for (size_t i = 0; i < 2; ++i)
                for (size_t j = 0; j < 5; ++j) gen(i, j) = F.top_rand(rng);
        } while (rank_of(tops, gen) != 2);
        EXPECT_TRUE(is_linear_on_code(phi, gen));
    }
}

// Over F_8/F_2, for every one of the 168 automorphisms the rank-1 criterion
// agrees with directly testing L-linearity of phi(<a>) across a family of
// 1-dimensional codes spanned by basis vectors.
TEST_F(Semilinear, RankOneCriterionMatchesDirectLinearityTest) {
    std::vector<Mat<FqmElem>> family;
    Mat<FqmElem> a(1, 3);
    for (unsigned j = 0; j < 3; ++j) a(0, j) = MidOverBase::basis(F, j);
    family.push_back(a);
    // two more basis vectors obtained from invertible coordinate mixes
    Mat<uint32_t> b1(3, 3), b2(3, 3);
    for (unsigned i = 0; i < 3; ++i) {
        b1(i, i) = 1;
        b2(i, i) = 1;
    }
    b1(0, 1) = 1;
    b2(0, 2) = 1;
    b2(1, 2) = 1;
    for (auto& b : {b1, b2}) {
        Mat<FqmElem> v(1, 3);
        for (unsigned j = 0; j < 3; ++j) {
            FqmElem acc = F.mid_zero();
            for (unsigned i = 0; i < 3; ++i)
                if (b(i, j)) acc = F.mid_add(acc, a(0, i));
            v(0, j) = acc;
        }
        family.push_back(v);
    }

    unsigned total = 0, fully = 0;
    for_each_automorphism<MidOverBase>(F, [&](const MapMB& phi) {
        ++total;
        bool rank1 = is_fully_linear(phi);
        bool direct = true;
        for (auto& code : family)
            if (!is_linear_on_code(phi, code)) {
                direct = false;
                break;
            }
        ASSERT_EQ(rank1, direct);
        if (rank1) ++fully;
    });
    EXPECT_EQ(total, 168u);
    EXPECT_EQ(fully, 21u);
}

// With a polynomial element in the systematic part, linear on the code
// already implies fully linear. Exhaustive over all 168 automorphisms.
TEST_F(Semilinear, PolynomialElementCodeSeparatesFullyLinear) {
    Mat<FqmElem> gen(1, 2);
    gen(0, 0) = F.mid_one();
    gen(0, 1) = F.mid_gen();  // a polynomial element of F_8 over F_2
    for_each_automorphism<MidOverBase>(F, [&](const MapMB& phi) {
        ASSERT_EQ(is_linear_on_code(phi, gen), is_fully_linear(phi));
    });
}

TEST_F(Semilinear, SecretPhiSampling) {
    Rng rng(19);
    for (int trial = 0; trial < 200; ++trial) {
        auto phi = sample_secret_phi(F, rng);
        EXPECT_FALSE(is_fully_linear(phi));
        EXPECT_EQ(rank_of(MidOps{&F}, phi.matrix()), 2u);
    }
}

// A uniform automorphism of F_64 over F_8 is fully linear with probability
// 2(q^n-1) / ((q^n-1)(q^n-q^m)) = 1/28; Monte Carlo within 3 sigma.
TEST_F(Semilinear, FullyLinearDensityMonteCarlo) {
    Rng rng(23);
    const int samples = 100000;
    int fully = 0;
    for (int i = 0; i < samples; ++i)
        if (is_fully_linear(sample_automorphism<TopOverMid>(F, rng))) ++fully;
    double p = 1.0 / 28.0;
    double sigma = std::sqrt(p * (1 - p) / samples);
    EXPECT_NEAR(double(fully) / samples, p, 3 * sigma);
}

TEST_F(Semilinear, RejectsSingularMatrices) {
    Mat<FqmElem> m(2, 2);
    m(0, 0) = F.mid_one();
    m(1, 0) = F.mid_one();
    EXPECT_THROW(MapTM(F, m), SingularMatrixError);
}

}  // namespace
}  // namespace rlpc
