#include "rlpc/gabidulin.hpp"

#include <gtest/gtest.h>

#include <optional>

namespace rlpc {
namespace {

std::vector<FqnElem> random_message(const TowerField& F, size_t k, Rng& rng) {
    std::vector<FqnElem> x(k);
    for (auto& c : x) c = F.top_rand(rng);
    return x;
}

std::vector<FqnElem> lift(const TowerField& F, const std::vector<FqmElem>& v) {
    std::vector<FqnElem> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = F.from_mid(v[i]);
    return out;
}

// Exhaustive decoder for t = 1 over a small field: tries the zero error and
// every 1-dimensional error support <s>, solving x G + lambda s = y as an
// F_2-linear system. Returns all decodings within rank radius 1.
class SupportSearchOracle {
   public:
    explicit SupportSearchOracle(const GabidulinCode& code) : code_(&code), F_(&code.tower()) {}

    struct Hit {
        std::vector<FqnElem> x, e;
    };

    std::vector<Hit> decode_radius_one(const std::vector<FqnElem>& y) const {
        const TowerField& F = *F_;
        size_t n = code_->n();
        std::vector<Hit> hits;
        if (auto x = try_exact(y)) hits.push_back({*x, std::vector<FqnElem>(n, F.top_zero())});

        uint64_t top_count = uint64_t(1) << F.top_bits();
        for (uint64_t s = 1; s < top_count; ++s) {
            FqnElem sup{{s & ((uint64_t(1) << F.mid_bits()) - 1)}, {s >> F.mid_bits()}};
            auto hit = solve_with_support(y, sup);
            if (hit && rank_weight(F, std::span<const FqnElem>(hit->e), Subfield::base) == 1)
                hits.push_back(*hit);
        }
        std::vector<Hit> unique;
        for (auto& h : hits) {
            bool dup = false;
            for (auto& u : unique)
                if (u.x == h.x && u.e == h.e) dup = true;
            if (!dup) unique.push_back(h);
        }
        return unique;
    }

   private:
    std::optional<std::vector<FqnElem>> try_exact(const std::vector<FqnElem>& y) const {
        try {
            return solve_left(TopOps{F_}, code_->generator(), y);
        } catch (const NoSolutionError&) {
            return std::nullopt;
        }
    }

    // Fixed support element s: find x, lambda with x G + lambda s = y by
    // expanding every coordinate over F_2.
    std::optional<Hit> solve_with_support(const std::vector<FqnElem>& y, FqnElem s) const {
        const TowerField& F = *F_;
        size_t n = code_->n(), k = code_->k();
        unsigned nb = F.top_bits();
        size_t unknowns = k * nb + n;
        Mat<uint32_t> sys(n * nb, unknowns + 1);
        BaseOps bops{&F};
        for (size_t j = 0; j < n; ++j) {
            for (size_t i = 0; i < k; ++i) {
                for (unsigned b = 0; b < nb; ++b) {
                    std::vector<uint32_t> cb(F.n(), 0);
                    cb[b] = 1;
                    FqnElem contrib = F.top_mul(F.top_from_base_coords(cb), code_->generator()(i, j));
                    auto coords = F.top_coords_base(contrib);
                    for (unsigned r = 0; r < nb; ++r) sys(j * nb + r, i * nb + b) = coords[r];
                }
            }
            auto scoords = F.top_coords_base(s);
            for (unsigned r = 0; r < nb; ++r) sys(j * nb + r, k * nb + j) = scoords[r];
            auto ycoords = F.top_coords_base(y[j]);
            for (unsigned r = 0; r < nb; ++r) sys(j * nb + r, unknowns) = ycoords[r];
        }
        size_t rank = row_reduce(bops, sys, true);
        for (size_t i = 0; i < rank; ++i) {
            size_t col = 0;
            while (col <= unknowns && bops.is_zero(sys(i, col))) ++col;
            if (col == unknowns) return std::nullopt;
        }
        std::vector<uint32_t> sol(unknowns, 0);
        for (size_t i = 0; i < rank; ++i) {
            size_t col = 0;
            while (col < unknowns && bops.is_zero(sys(i, col))) ++col;
            sol[col] = sys(i, unknowns);
        }
        Hit h;
        h.x.resize(k);
        for (size_t i = 0; i < k; ++i) {
            std::vector<uint32_t> c(nb);
            for (unsigned b = 0; b < nb; ++b) c[b] = sol[i * nb + b];
            h.x[i] = F.top_from_base_coords(c);
        }
        h.e.resize(n);
        for (size_t j = 0; j < n; ++j) h.e[j] = sol[k * nb + j] ? s : F.top_zero();
        return h;
    }

    const GabidulinCode* code_;
    const TowerField* F_;
};

class Gabidulin : public ::testing::Test {
   protected:
    TowerField F{2, 3};  // [6, k] codes over F_64
};

TEST_F(Gabidulin, ConstructionAndStructure) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        FqnElem g = sample_normal_element(F, rng);
        GabidulinCode code(F, g, 4);
        TopOps tops{&F};
        EXPECT_EQ(rank_of(tops, code.generator()), 4u);
        // rows are simultaneously rotations and Frobenius powers
        for (size_t i = 0; i + 1 < 4; ++i)
            for (size_t j = 0; j < 6; ++j)
                EXPECT_EQ(code.generator()(i + 1, j), F.frobenius(code.generator()(i, j), 1));
        auto g1 = frobenius_power_code(F, code.generator(), 1);
        EXPECT_EQ(intersect_dim(F, code.generator(), g1), 3u);
    }
    // non-normal generators are rejected
    EXPECT_THROW(GabidulinCode(F, F.top_one(), 4), ParameterError);
    EXPECT_THROW(GabidulinCode(F, F.top_zero(), 4), ParameterError);
}

TEST_F(Gabidulin, EncodeBasics) {
    Rng rng(5);
    FqnElem g = sample_normal_element(F, rng);
    GabidulinCode code(F, g, 4);
    std::vector<FqnElem> zero(4, F.top_zero());
    auto c0 = code.encode(zero);
    EXPECT_EQ(hamming_weight(F, std::span<const FqnElem>(c0)), 0u);

    std::vector<FqnElem> e1(4, F.top_zero());
    e1[0] = F.top_one();
    auto c1 = code.encode(e1);
    for (size_t j = 0; j < 6; ++j) EXPECT_EQ(c1[j], code.generator()(0, j));
}

// Nonzero codewords meet the minimum rank distance n - k + 1 (sampled).
TEST_F(Gabidulin, MinimumDistanceSampled) {
    Rng rng(7);
    FqnElem g = sample_normal_element(F, rng);
    GabidulinCode code(F, g, 4);
    for (int trial = 0; trial < 100000; ++trial) {
        auto x = random_message(F, 4, rng);
        if (hamming_weight(F, std::span<const FqnElem>(x)) == 0) continue;
        auto c = code.encode(x);
        ASSERT_GE(rank_weight(F, std::span<const FqnElem>(c), Subfield::base), 3u);
    }
}

// No nonzero codeword has rank weight <= 2: exhaustive over all 2-dimensional
// support spaces. Together with unique-decoding arithmetic this pins the
// minimum distance at n - k + 1 = 3 for the [6,4] code.
TEST_F(Gabidulin, MinimumDistanceExhaustive) {
    Rng rng(11);
    FqnElem g = sample_normal_element(F, rng);
    GabidulinCode code(F, g, 4);
    size_t n = 6, k = 4;
    unsigned nb = F.top_bits();
    BaseOps bops{&F};
    for (uint64_t s1 = 1; s1 < 64; ++s1) {
        for (uint64_t s2 = s1 + 1; s2 < 64; ++s2) {
            // solve x G = mu1 s1 + mu2 s2 with mu coordinates free per column
            size_t unknowns = k * nb + 2 * n;
            Mat<uint32_t> sys(n * nb, unknowns);
            for (size_t j = 0; j < n; ++j) {
                for (size_t i = 0; i < k; ++i) {
                    for (unsigned b = 0; b < nb; ++b) {
                        std::vector<uint32_t> cb(F.n(), 0);
                        cb[b] = 1;
                        FqnElem contrib =
                            F.top_mul(F.top_from_base_coords(cb), code.generator()(i, j));
                        auto coords = F.top_coords_base(contrib);
                        for (unsigned r = 0; r < nb; ++r) sys(j * nb + r, i * nb + b) = coords[r];
                    }
                }
                auto c1 = F.top_coords_base(FqnElem{{s1 & 7}, {s1 >> 3}});
                auto c2 = F.top_coords_base(FqnElem{{s2 & 7}, {s2 >> 3}});
                for (unsigned r = 0; r < nb; ++r) {
                    sys(j * nb + r, k * nb + 2 * j) = c1[r];
                    sys(j * nb + r, k * nb + 2 * j + 1) = c2[r];
                }
            }
            auto ker = kernel_basis(bops, sys);
            for (size_t r = 0; r < ker.rows(); ++r) {
                bool x_zero = true;
                for (size_t c = 0; c < k * nb; ++c)
                    if (ker(r, c)) x_zero = false;
                ASSERT_TRUE(x_zero) << "codeword of rank weight <= 2 exists";
            }
        }
    }
}

TEST_F(Gabidulin, DecodeRoundTripToy) {
    Rng rng(13);
    FqnElem g = sample_normal_element(F, rng);
    GabidulinCode code(F, g, 4);
    EXPECT_EQ(code.t(), 1u);
    for (int trial = 0; trial < 500; ++trial) {
        auto x = random_message(F, 4, rng);
        auto e = lift(F, sample_rank_error(F, 1, rng));
        auto y = code.encode(x);
        for (size_t j = 0; j < 6; ++j) y[j] = F.top_add(y[j], e[j]);
        auto dec = code.decode(y);
        ASSERT_EQ(dec.message, x);
        ASSERT_EQ(dec.error, e);
    }
    // zero error round trip
    auto x = random_message(F, 4, rng);
    auto dec = code.decode(code.encode(x));
    EXPECT_EQ(dec.message, x);
    EXPECT_EQ(hamming_weight(F, std::span<const FqnElem>(dec.error)), 0u);
}

// Interpolation decoder against the exhaustive support-search oracle, both on
// decodable words (exact agreement) and undecodable words (clean failure).
TEST_F(Gabidulin, DecoderMatchesExhaustiveSearch) {
    Rng rng(17);
    FqnElem g = sample_normal_element(F, rng);
    GabidulinCode code(F, g, 4);
    SupportSearchOracle oracle(code);

    int decodable = 0, undecodable = 0;
    while (decodable < 500 || undecodable < 500) {
        std::vector<FqnElem> y(6);
        // mix words near the code with uniform words to hit both branches
        if (decodable < 500) {
            auto x = random_message(F, 4, rng);
            y = code.encode(x);
            for (int extra = rng.below(3); extra > 0; --extra) {
                size_t j = rng.below(6);
                y[j] = F.top_add(y[j], F.top_rand(rng));
            }
        } else {
            for (auto& c : y) c = F.top_rand(rng);
        }
        auto hits = oracle.decode_radius_one(y);
        if (!hits.empty()) {
            if (decodable >= 500) continue;
            ++decodable;
            ASSERT_EQ(hits.size(), 1u);  // unique decoding within radius t
            auto dec = code.decode(y);
            ASSERT_EQ(dec.message, hits[0].x);
            ASSERT_EQ(dec.error, hits[0].e);
        } else {
            if (undecodable >= 500) continue;
            ++undecodable;
            ASSERT_THROW(code.decode(y), DecodingFailure);
        }
    }
}

// Words at rank distance t+1 from a codeword either fail cleanly or decode to
// some codeword within radius t; never a silent wrong answer.
TEST_F(Gabidulin, BeyondRadiusNeverSilentlyCorrupts) {
    Rng rng(19);
    FqnElem g = sample_normal_element(F, rng);
    GabidulinCode code(F, g, 4);
    int failures = 0, redecodes = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto x = random_message(F, 4, rng);
        auto y = code.encode(x);
        auto e = lift(F, sample_rank_error(F, 2, rng));
        for (size_t j = 0; j < 6; ++j) y[j] = F.top_add(y[j], e[j]);
        try {
            auto dec = code.decode(y);
            ++redecodes;
            auto c = code.encode(dec.message);
            std::vector<FqnElem> diff(6);
            for (size_t j = 0; j < 6; ++j) diff[j] = F.top_add(c[j], y[j]);
            ASSERT_LE(rank_weight(F, std::span<const FqnElem>(diff), Subfield::base), 1u);
        } catch (const DecodingFailure&) {
            ++failures;
        }
    }
    EXPECT_EQ(failures + redecodes, 500);
    EXPECT_GT(failures, 0);
}

TEST_F(Gabidulin, SchemeSizedRoundTrip) {
    TowerField big(2, 32);  // [64, 50] code, t = 7
    Rng rng(23);
    FqnElem g = sample_normal_element(big, rng);
    GabidulinCode code(big, g, 50);
    EXPECT_EQ(code.t(), 7u);
    for (int trial = 0; trial < 25; ++trial) {
        auto x = random_message(big, 50, rng);
        auto e = lift(big, sample_rank_error(big, 7, rng));
        auto y = code.encode(x);
        for (size_t j = 0; j < 64; ++j) y[j] = big.top_add(y[j], e[j]);
        auto dec = code.decode(y);
        ASSERT_EQ(dec.message, x);
        ASSERT_EQ(dec.error, e);
    }
}

TEST_F(Gabidulin, SampleRankErrorContract) {
    Rng rng(29);
    auto e0 = sample_rank_error(F, 0, rng);
    EXPECT_EQ(rank_weight(F, std::span<const FqmElem>(e0)), 0u);
    for (int trial = 0; trial < 1000; ++trial) {
        size_t t = 1 + rng.below(3);
        auto e = sample_rank_error(F, t, rng);
        ASSERT_EQ(e.size(), F.n());
        ASSERT_EQ(rank_weight(F, std::span<const FqmElem>(e)), t);
    }
    EXPECT_THROW(sample_rank_error(F, F.m() + 1, rng), ParameterError);
}

// wt_q(gbar + gbar^[m]) = m for every normal element.
TEST(GabidulinLemma, ConjugateSumRank) {
    for (unsigned m : {3u, 32u}) {
        TowerField F(2, m);
        Rng rng(31 + m);
        for (int trial = 0; trial < 100; ++trial) {
            FqnElem g = sample_normal_element(F, rng);
            auto gbar = conjugate_vector(F, g);
            std::vector<FqnElem> sum(F.n());
            for (size_t j = 0; j < F.n(); ++j)
                sum[j] = F.top_add(gbar[j], F.frobenius(gbar[j], m));
            ASSERT_EQ(rank_weight(F, std::span<const FqnElem>(sum), Subfield::base), m);
        }
    }
}

TEST(GabidulinSampling, NormalElementsAgreeWithDefinition) {
    TowerField F(2, 3);
    TopOps tops{&F};
    // gcd-based acceptance agrees with the rank definition on every element
    for (uint64_t lo = 0; lo < 8; ++lo)
        for (uint64_t hi = 0; hi < 8; ++hi) {
            FqnElem g{{lo}, {hi}};
            bool by_def = F.is_normal_element(g);
            bool by_gcd = !F.top_is_zero(g) && circulant_invertible(tops, conjugate_vector(F, g));
            ASSERT_EQ(by_def, by_gcd);
        }
}

TEST(GabidulinLinPoly, CompositionAndDivision) {
    TowerField F(2, 3);
    Rng rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        LinPoly v, q;
        v.c.resize(1 + rng.below(3));
        q.c.resize(1 + rng.below(4));
        for (auto& c : v.c) c = F.top_rand(rng);
        for (auto& c : q.c) c = F.top_rand(rng);
        if (lp_is_zero(F, v)) continue;
        auto n = lp_compose(F, v, q);
        for (int i = 0; i < 10; ++i) {
            FqnElem z = F.top_rand(rng);
            ASSERT_EQ(lp_eval(F, n, z), lp_eval(F, v, lp_eval(F, q, z)));
        }
        // left division recovers the composition factor exactly
        auto [q2, r2] = lp_left_divide(F, n, v);
        ASSERT_TRUE(lp_is_zero(F, r2));
        for (int i = 0; i < 10; ++i) {
            FqnElem z = F.top_rand(rng);
            ASSERT_EQ(lp_eval(F, q2, z), lp_eval(F, q, z));
        }
    }
}

}  // namespace
}  // namespace rlpc
