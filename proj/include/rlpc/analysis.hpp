#ifndef RLPC_ANALYSIS_HPP
#define RLPC_ANALYSIS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rlpc/pkc.hpp"

namespace rlpc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// ---- Frobenius distinguisher dimensions ----

// Dimensions of C + C^[1] + ... + C^[i] for i = 0..i_max.
inline std::vector<size_t> frobenius_profile(const TowerField& F, const Mat<FqnElem>& gen, size_t i_max) {
    TopOps ops{&F};
    std::vector<size_t> dims;
    Mat<FqnElem> acc = gen;
    dims.push_back(rank_of(ops, acc));
    Mat<FqnElem> power = gen;
    for (size_t i = 1; i <= i_max; ++i) {
        power = frobenius_power_code(F, power, 1);
        acc = mat_stack(acc, power);
        dims.push_back(rank_of(ops, acc));
    }
    return dims;
}

// ---- plaintext-recovery system ----

// Nullity over F_{q^m} of (x1, x2) [P_k(g'); I_n] = 0, expanded to 2n scalar
// equations in k + n unknowns. Equals k - m for every valid public key.
inline size_t plaintext_system_nullity(const TowerField& F, const PublicKey& pk, unsigned k) {
    unsigned n = F.n();
    Mat<FqmElem> b(size_t(k) + n, 2 * size_t(n));
    std::vector<FqnElem> row = pk.gprime;
    for (unsigned j = 0; j < k; ++j) {
        for (unsigned c = 0; c < n; ++c) {
            b(j, 2 * c) = row[c].lo;
            b(j, 2 * c + 1) = row[c].hi;
        }
        if (j + 1 < k) row = rotate_right(row, 1);
    }
    for (unsigned i = 0; i < n; ++i) b(size_t(k) + i, 2 * i) = F.mid_one();
    return size_t(k) + n - rank_of(MidOps{&F}, std::move(b));
}

// ---- counting: the Euler function for F_q[x] ----

struct FactorShape {
    // (degree, multiplicity) per distinct irreducible factor
    std::vector<std::pair<unsigned, unsigned>> factors;
    unsigned total_degree() const {
        unsigned d = 0;
        for (auto& [deg, mult] : factors) d += deg * mult;
        return d;
    }
};

// Factorization shape of x^n - 1 over F_Q in characteristic 2:
// x^n - 1 = (x^odd(n) - 1)^(2^v) and the degrees of the irreducible factors
// of x^odd(n) - 1 are the Q-cyclotomic coset sizes modulo odd(n).
inline FactorShape factor_xn_minus_one(const BigInt& Q, unsigned n) {
    if (n == 0) throw ParameterError("n must be positive");
    unsigned v2 = 0, odd = n;
    while (odd % 2 == 0) {
        odd /= 2;
        ++v2;
    }
    unsigned mult = 1u << v2;
    uint64_t qmod = (uint64_t)(Q % odd);
    FactorShape shape;
    std::vector<bool> seen(odd, false);
    for (unsigned i = 0; i < odd; ++i) {
        if (seen[i]) continue;
        unsigned size = 0;
        uint64_t j = i;
        do {
            seen[j] = true;
            ++size;
            j = (j * (qmod % odd)) % odd;
        } while (j != i);
        shape.factors.push_back({size, mult});
    }
    return shape;
}

// Phi_Q(f): the number of polynomials of degree < deg(f) coprime to f,
// Q^deg(f) * prod over distinct factors (1 - Q^(-d_i)).
inline BigInt count_coprime(const BigInt& Q, const FactorShape& shape) {
    if (Q < 2) throw ParameterError("field size must be at least 2");
    unsigned total = 0, distinct_sum = 0;
    for (auto& [deg, mult] : shape.factors) {
        if (deg == 0 || mult == 0) throw ParameterError("malformed factorization shape");
        total += deg * mult;
        distinct_sum += deg;
    }
    BigInt result = boost::multiprecision::pow(Q, total - distinct_sum);
    for (auto& [deg, mult] : shape.factors) result *= boost::multiprecision::pow(Q, deg) - 1;
    return result;
}

inline BigInt count_normal_elements(uint32_t q, unsigned n) {
    return count_coprime(BigInt(q), factor_xn_minus_one(BigInt(q), n));
}

// ---- equivalence classes of the masking vector ----

// Q = P_n(m1)^(-1) P_n(m2) is always circulant; the pair is equivalent when
// that circulant lies in P_n(F_{q^m}) and is invertible there.
inline bool mvec_equivalent(const TowerField& F, std::span<const FqnElem> m1, std::span<const FqnElem> m2) {
    TopOps tops{&F};
    std::vector<FqnElem> v1(m1.begin(), m1.end()), v2(m2.begin(), m2.end());
    auto inv1 = cyc_inverse(tops, v1);
    if (!inv1 || !circulant_invertible(tops, v2)) throw ParameterError("inputs must be circulant invertible");
    auto qpoly = cyc_mul(tops, *inv1, v2);
    std::vector<FqmElem> qmid(qpoly.size());
    for (size_t i = 0; i < qpoly.size(); ++i) {
        if (!F.in_mid(qpoly[i])) return false;
        qmid[i] = qpoly[i].lo;
    }
    return circulant_invertible(MidOps{&F}, qmid);
}

// |S1|/|S2| - q^m - 1 with S1, S2 the invertible circulant vectors over
// F_{q^n} and F_{q^m}; the number of masking-vector equivalence classes.
inline BigRat count_equiv_classes(uint32_t q, unsigned m) {
    unsigned n = 2 * m;
    BigInt qn = boost::multiprecision::pow(BigInt(q), n);
    BigInt qm = boost::multiprecision::pow(BigInt(q), m);
    BigInt s1 = count_coprime(qn, factor_xn_minus_one(qn, n));
    BigInt s2 = count_coprime(qm, factor_xn_minus_one(qm, n));
    return BigRat(s1, s2) - qm - 1;
}

// Exhaustive orbit count over all weight-2 invertible masking vectors; only
// feasible for very small towers. Canonical form = orbit minimum under right
// multiplication by every invertible circulant over the middle field.
inline uint64_t enumerate_equiv_classes_exhaustive(const TowerField& F) {
    unsigned n = F.n();
    if (size_t(F.top_bits()) * n > 24) throw ParameterError("exhaustive class enumeration too large");
    TopOps tops{&F};
    MidOps mops{&F};

    std::vector<std::vector<FqnElem>> units;  // invertible circulants over F_{q^m}, lifted
    uint64_t mid_count = uint64_t(1) << (uint64_t(F.mid_bits()) * n);
    for (uint64_t code = 0; code < mid_count; ++code) {
        std::vector<FqmElem> s(n);
        uint64_t c = code;
        for (unsigned i = 0; i < n; ++i) {
            s[i] = FqmElem{c & ((uint64_t(1) << F.mid_bits()) - 1)};
            c >>= F.mid_bits();
        }
        if (!circulant_invertible(mops, s)) continue;
        std::vector<FqnElem> lifted(n);
        for (unsigned i = 0; i < n; ++i) lifted[i] = F.from_mid(s[i]);
        units.push_back(std::move(lifted));
    }

    auto encode = [&](const std::vector<FqnElem>& v) {
        uint64_t code = 0;
        unsigned shift = 0;
        for (auto& x : v) {
            code |= x.lo.v << shift;
            shift += F.mid_bits();
            code |= x.hi.v << shift;
            shift += F.mid_bits();
        }
        return code;
    };

    std::set<uint64_t> canon;
    uint64_t top_count = uint64_t(1) << (uint64_t(F.top_bits()) * n);
    for (uint64_t code = 0; code < top_count; ++code) {
        std::vector<FqnElem> v(n);
        uint64_t c = code;
        for (unsigned i = 0; i < n; ++i) {
            v[i].lo = FqmElem{c & ((uint64_t(1) << F.mid_bits()) - 1)};
            c >>= F.mid_bits();
            v[i].hi = FqmElem{c & ((uint64_t(1) << F.mid_bits()) - 1)};
            c >>= F.mid_bits();
        }
        if (rank_weight(F, std::span<const FqnElem>(v), Subfield::mid) != 2) continue;
        if (!circulant_invertible(tops, v)) continue;
        uint64_t best = UINT64_MAX;
        for (auto& u : units) {
            uint64_t enc = encode(cyc_mul(tops, v, u));
            if (enc < best) best = enc;
        }
        canon.insert(best);
    }
    return canon.size();
}

// ---- censuses of automorphisms ----

struct Census {
    uint64_t total = 0;
    uint64_t fully_linear = 0;
};

template <class ExtT>
Census fully_linear_census(const TowerField& F) {
    Census c;
    for_each_automorphism<ExtT>(F, [&](const SemilinearMap<ExtT>& phi) {
        ++c.total;
        if (is_fully_linear(phi)) ++c.fully_linear;
    });
    return c;
}

// Predicted automorphism count prod_{i<d} (|L| - |K|^i).
inline BigInt automorphism_count(const BigInt& order_k, const BigInt& order_l, unsigned d) {
    BigInt total = 1, ki = 1;
    for (unsigned i = 0; i < d; ++i) {
        total *= order_l - ki;
        ki *= order_k;
    }
    return total;
}

// Predicted fully linear count d * (|L| - 1).
inline BigInt fully_linear_count(const BigInt& order_l, unsigned d) { return d * (order_l - 1); }

// Number of admissible secret transformations (q^n-1)(q^n-q^m) - 2(q^n-1).
inline BigInt secret_phi_count(uint32_t q, unsigned m) {
    BigInt qn = boost::multiprecision::pow(BigInt(q), 2 * m);
    BigInt qm = boost::multiprecision::pow(BigInt(q), m);
    return (qn - 1) * (qn - qm) - 2 * (qn - 1);
}

// ---- systematic-form statistic ----

// Number of entries of the non-identity block of the reduced row echelon form
// that lie outside F_{q^m}. Measured, not asserted: the masking argument needs
// at least one such entry.
inline size_t systematic_entries_outside_mid(const TowerField& F, const Mat<FqnElem>& gen) {
    Mat<FqnElem> r = rref(TopOps{&F}, gen);
    size_t cnt = 0;
    for (size_t i = 0; i < r.rows(); ++i)
        for (size_t j = 0; j < r.cols(); ++j)
            if (!F.in_mid(r(i, j))) ++cnt;
    return cnt;
}

// ---- experiment reports (line-oriented text plus CSV rows) ----

struct ExperimentRow {
    std::string experiment;
    std::string params;
    uint64_t trial;
    std::string observed;
    std::string predicted;
};

struct ExperimentReport {
    std::vector<std::string> lines;
    std::vector<ExperimentRow> rows;
    bool ok = true;
};

}  // namespace rlpc

#endif
