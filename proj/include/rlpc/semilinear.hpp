#ifndef RLPC_SEMILINEAR_HPP
#define RLPC_SEMILINEAR_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "rlpc/rankmat.hpp"

namespace rlpc {

// Extension descriptors. The classification theory is the same for any
// extension L/K inside the tower; the scheme instantiates it for
// F_{q^n}/F_{q^m} while the structural analysis mostly runs on F_{q^m}/F_q.

struct MidOverBase {
    using KOps = BaseOps;
    using LOps = MidOps;
    using K = uint32_t;
    using L = FqmElem;
    static KOps kops(const TowerField& F) { return {&F}; }
    static LOps lops(const TowerField& F) { return {&F}; }
    static size_t degree(const TowerField& F) { return F.m(); }
    static uint64_t order_k(const TowerField& F) { return F.q(); }
    static uint64_t order_l(const TowerField& F) { return uint64_t(1) << F.mid_bits(); }
    static L basis(const TowerField& F, size_t i) { return F.mid_from_coeff((unsigned)i, 1); }
    static std::vector<K> coords(const TowerField& F, L x) { return F.mid_coords(x); }
    static L from_coords(const TowerField& F, const std::vector<K>& c) { return F.mid_from_coords(c); }
    // x^(|K|^j)
    static L frobenius_k(const TowerField& F, L x, size_t j) { return F.mid_frobenius(x, j); }
};

struct TopOverMid {
    using KOps = MidOps;
    using LOps = TopOps;
    using K = FqmElem;
    using L = FqnElem;
    static KOps kops(const TowerField& F) { return {&F}; }
    static LOps lops(const TowerField& F) { return {&F}; }
    static size_t degree(const TowerField&) { return 2; }
    static uint64_t order_k(const TowerField& F) { return uint64_t(1) << F.mid_bits(); }
    static uint64_t order_l(const TowerField& F) { return uint64_t(1) << F.top_bits(); }
    static L basis(const TowerField& F, size_t i) { return F.top_basis((unsigned)i); }
    static std::vector<K> coords(const TowerField& F, L x) { return {x.lo, x.hi}; }
    static L from_coords(const TowerField& F, const std::vector<K>& c) { return F.top_from_mid_coords(c[0], c[1]); }
    static L frobenius_k(const TowerField& F, L x, size_t j) { return F.frobenius(x, j * F.m()); }
};

// A K-linear automorphism of the extension field L, represented by an
// invertible d x d matrix over K with respect to the fixed basis: row i holds
// the coordinates of the image of basis element i.
template <class ExtT>
class SemilinearMap {
   public:
    using K = typename ExtT::K;
    using L = typename ExtT::L;

    SemilinearMap(const TowerField& F, Mat<K> matrix) : F_(&F), mat_(std::move(matrix)) {
        size_t d = ExtT::degree(F);
        if (mat_.rows() != d || mat_.cols() != d) throw ParameterError("semilinear map: wrong matrix shape");
        if (rank_of(ExtT::kops(F), mat_) != d) throw SingularMatrixError("semilinear map matrix not invertible");
    }

    static SemilinearMap identity(const TowerField& F) {
        return SemilinearMap(F, mat_identity(ExtT::kops(F), ExtT::degree(F)));
    }

    // The maps that preserve L-linearity of every code: mu -> beta * mu^(|K|^j).
    static SemilinearMap fully_linear_map(const TowerField& F, L beta, size_t j) {
        auto lops = ExtT::lops(F);
        size_t d = ExtT::degree(F);
        if (lops.is_zero(beta)) throw DomainError("stretching factor must be nonzero");
        if (j >= d) throw ParameterError("Frobenius index out of range");
        Mat<K> m((size_t)d, (size_t)d);
        for (size_t i = 0; i < d; ++i) {
            L img = lops.mul(beta, ExtT::frobenius_k(F, ExtT::basis(F, i), j));
            auto c = ExtT::coords(F, img);
            for (size_t t = 0; t < d; ++t) m(i, t) = c[t];
        }
        return SemilinearMap(F, std::move(m));
    }

    const TowerField& tower() const { return *F_; }
    const Mat<K>& matrix() const { return mat_; }

    L apply(L x) const {
        auto kops = ExtT::kops(*F_);
        auto c = ExtT::coords(*F_, x);
        return ExtT::from_coords(*F_, vec_mat(kops, c, mat_));
    }

    std::vector<L> apply(std::span<const L> v) const {
        std::vector<L> out(v.size());
        for (size_t i = 0; i < v.size(); ++i) out[i] = apply(v[i]);
        return out;
    }

    Mat<L> apply(const Mat<L>& a) const {
        Mat<L> out(a.rows(), a.cols());
        for (size_t i = 0; i < a.rows(); ++i)
            for (size_t j = 0; j < a.cols(); ++j) out(i, j) = apply(a(i, j));
        return out;
    }

    SemilinearMap inverse() const { return SemilinearMap(*F_, mat_inverse(ExtT::kops(*F_), mat_)); }

    bool operator==(const SemilinearMap& o) const { return mat_ == o.mat_; }

   private:
    const TowerField* F_;
    Mat<K> mat_;
};

// Rank-1 criterion: phi preserves L-linearity of every code over L exactly
// when the matrix with rows phi(basis_i * a) for the basis vector
// a = (basis_0, ..., basis_{d-1}) has rank 1 over L.
template <class ExtT>
bool is_fully_linear(const SemilinearMap<ExtT>& phi) {
    const TowerField& F = phi.tower();
    auto lops = ExtT::lops(F);
    size_t d = ExtT::degree(F);
    Mat<typename ExtT::L> a(d, d);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            a(i, j) = phi.apply(lops.mul(ExtT::basis(F, i), ExtT::basis(F, j)));
    return rank_of(lops, std::move(a)) == 1;
}

// Decides whether phi(C) is an L-linear code, for C spanned over L by the
// rows of gen. phi(C) is the K-span of {phi(basis_i * g_j)}; it is L-linear
// exactly when that span is closed under multiplication by a K-basis of L.
template <class ExtT>
bool is_linear_on_code(const SemilinearMap<ExtT>& phi, const Mat<typename ExtT::L>& gen) {
    const TowerField& F = phi.tower();
    auto kops = ExtT::kops(F);
    auto lops = ExtT::lops(F);
    size_t d = ExtT::degree(F);
    size_t k = gen.rows(), n = gen.cols();

    auto expand = [&](const std::vector<typename ExtT::L>& v) {
        std::vector<typename ExtT::K> out;
        out.reserve(d * n);
        for (auto& x : v) {
            auto c = ExtT::coords(F, x);
            out.insert(out.end(), c.begin(), c.end());
        }
        return out;
    };

    std::vector<std::vector<typename ExtT::L>> span_vecs;
    span_vecs.reserve(d * k);
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < d; ++i) {
            std::vector<typename ExtT::L> w(n);
            for (size_t c = 0; c < n; ++c) w[c] = phi.apply(lops.mul(ExtT::basis(F, i), gen(j, c)));
            span_vecs.push_back(std::move(w));
        }

    Mat<typename ExtT::K> span(d * k, d * n);
    for (size_t r = 0; r < span_vecs.size(); ++r) span.set_row(r, expand(span_vecs[r]));
    Mat<typename ExtT::K> basis_rref = rref(kops, span);
    if (basis_rref.rows() != d * k) return false;  // gen was not full row rank

    auto in_span = [&](std::vector<typename ExtT::K> row) {
        for (size_t i = 0, col = 0; i < basis_rref.rows(); ++i) {
            while (col < basis_rref.cols() && kops.is_zero(basis_rref(i, col))) ++col;
            if (!kops.is_zero(row[col])) {
                auto c = row[col];
                for (size_t j = col; j < row.size(); ++j) row[j] = kops.add(row[j], kops.mul(c, basis_rref(i, j)));
            }
        }
        for (auto& x : row)
            if (!kops.is_zero(x)) return false;
        return true;
    };

    for (size_t u = 0; u < d; ++u) {
        auto mu = ExtT::basis(F, u);
        for (auto& w : span_vecs) {
            std::vector<typename ExtT::L> mw(n);
            for (size_t c = 0; c < n; ++c) mw[c] = lops.mul(mu, w[c]);
            if (!in_span(expand(mw))) return false;
        }
    }
    return true;
}

// Uniformly random invertible matrix by rejection.
template <class ExtT>
SemilinearMap<ExtT> sample_automorphism(const TowerField& F, Rng& rng) {
    auto kops = ExtT::kops(F);
    size_t d = ExtT::degree(F);
    while (true) {
        Mat<typename ExtT::K> m(d, d);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) m(i, j) = kops.rand(rng);
        if (rank_of(kops, m) == d) return SemilinearMap<ExtT>(F, std::move(m));
    }
}

// The scheme's secret transformation: a uniformly random F_{q^m}-linear
// automorphism of F_{q^n} that is not fully linear. Rejection terminates fast;
// fully linear maps have density 2/(q^n - q^m) among automorphisms.
inline SemilinearMap<TopOverMid> sample_secret_phi(const TowerField& F, Rng& rng) {
    while (true) {
        auto phi = sample_automorphism<TopOverMid>(F, rng);
        if (!is_fully_linear(phi)) return phi;
    }
}

template <class ExtT>
typename ExtT::K k_elem_from_index(const TowerField& F, uint64_t idx);

template <>
inline uint32_t k_elem_from_index<MidOverBase>(const TowerField&, uint64_t idx) {
    return (uint32_t)idx;
}

template <>
inline FqmElem k_elem_from_index<TopOverMid>(const TowerField&, uint64_t idx) {
    return FqmElem{idx};
}

// Visits every K-linear automorphism (all invertible d x d matrices over K).
// Only meant for census-sized fields.
template <class ExtT, class Fn>
void for_each_automorphism(const TowerField& F, Fn&& fn) {
    auto kops = ExtT::kops(F);
    size_t d = ExtT::degree(F);
    uint64_t qk = ExtT::order_k(F);
    double total_log2 = (double)(d * d) * std::log2((double)qk);
    if (total_log2 > 24) throw ParameterError("automorphism census too large to enumerate");
    uint64_t total = 1;
    for (size_t i = 0; i < d * d; ++i) total *= qk;

    for (uint64_t code = 0; code < total; ++code) {
        Mat<typename ExtT::K> m(d, d);
        uint64_t c = code;
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) {
                m(i, j) = k_elem_from_index<ExtT>(F, c % qk);
                c /= qk;
            }
        if (rank_of(kops, m) != d) continue;
        fn(SemilinearMap<ExtT>(F, std::move(m)));
    }
}

}  // namespace rlpc

#endif
