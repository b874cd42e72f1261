#ifndef RLPC_RANKMAT_HPP
#define RLPC_RANKMAT_HPP

#include <optional>
#include <span>
#include <vector>

#include "rlpc/linalg.hpp"

namespace rlpc {

// ---- rank weight: dimension over the declared subfield of the span of a
// vector's components ----

inline size_t rank_weight(const TowerField& F, std::span<const FqnElem> v, Subfield base) {
    if (base == Subfield::mid) {
        Mat<FqmElem> a(v.size(), 2);
        for (size_t i = 0; i < v.size(); ++i) {
            a(i, 0) = v[i].lo;
            a(i, 1) = v[i].hi;
        }
        return rank_of(MidOps{&F}, std::move(a));
    }
    if (F.e() == 1) {
        BitMatrix b(v.size(), F.n());
        for (size_t i = 0; i < v.size(); ++i) {
            for (unsigned j = 0; j < F.m(); ++j) {
                if ((v[i].lo.v >> j) & 1) b.set(i, j, true);
                if ((v[i].hi.v >> j) & 1) b.set(i, F.m() + j, true);
            }
        }
        return b.rank();
    }
    Mat<uint32_t> a(v.size(), F.n());
    for (size_t i = 0; i < v.size(); ++i) {
        auto coords = F.top_coords_base(v[i]);
        for (unsigned j = 0; j < F.n(); ++j) a(i, j) = coords[j];
    }
    return rank_of(BaseOps{&F}, std::move(a));
}

inline size_t rank_weight(const TowerField& F, std::span<const FqmElem> v) {
    if (F.e() == 1) {
        BitMatrix b(v.size(), F.m());
        for (size_t i = 0; i < v.size(); ++i)
            for (unsigned j = 0; j < F.m(); ++j)
                if ((v[i].v >> j) & 1) b.set(i, j, true);
        return b.rank();
    }
    Mat<uint32_t> a(v.size(), F.m());
    for (size_t i = 0; i < v.size(); ++i)
        for (unsigned j = 0; j < F.m(); ++j) a(i, j) = F.mid_coeff(v[i], j);
    return rank_of(BaseOps{&F}, std::move(a));
}

inline size_t hamming_weight(const TowerField& F, std::span<const FqnElem> v) {
    size_t w = 0;
    for (auto& x : v)
        if (!F.top_is_zero(x)) ++w;
    return w;
}

inline size_t hamming_weight(const TowerField& F, std::span<const FqmElem> v) {
    size_t w = 0;
    for (auto& x : v)
        if (!F.mid_is_zero(x)) ++w;
    return w;
}

// ---- Moore matrices: row i+1 is the componentwise q-power of row i ----

inline Mat<FqnElem> moore_matrix(const TowerField& F, std::span<const FqnElem> a, size_t k) {
    if (k < 1) throw ParameterError("moore_matrix: k must be positive");
    Mat<FqnElem> g(k, a.size());
    for (size_t j = 0; j < a.size(); ++j) g(0, j) = a[j];
    for (size_t i = 1; i < k; ++i)
        for (size_t j = 0; j < a.size(); ++j) g(i, j) = F.frobenius(g(i - 1, j), 1);
    return g;
}

// ---- circulant / partial circulant matrices ----
// Row 1 is the vector itself; every following row is the right rotation of the
// previous one. Row i (0-based) therefore matches x^i * v(x) mod x^n - 1.

template <class E>
std::vector<E> rotate_right(const std::vector<E>& v, size_t s) {
    size_t n = v.size();
    std::vector<E> out(n);
    for (size_t j = 0; j < n; ++j) out[(j + s) % n] = v[j];
    return out;
}

template <class E>
Mat<E> circulant(const std::vector<E>& v, size_t k) {
    if (k < 1 || k > v.size()) throw ParameterError("circulant: k out of range");
    Mat<E> a(k, v.size());
    std::vector<E> row = v;
    for (size_t i = 0; i < k; ++i) {
        a.set_row(i, row);
        if (i + 1 < k) row = rotate_right(row, 1);
    }
    return a;
}

// ---- the cyclic polynomial ring F[x]/(x^n - 1) ----
// Circulant matrices over F form a commutative ring isomorphic to it:
// P_n(a) P_n(b) = P_n(a * b) under cyclic convolution.

template <FieldOps F, class E = typename F::Elem>
std::vector<E> cyc_mul(const F& f, const std::vector<E>& a, const std::vector<E>& b) {
    size_t n = b.size();
    std::vector<E> out(n, f.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (f.is_zero(a[i])) continue;
        for (size_t j = 0; j < n; ++j) {
            size_t k = i + j;
            if (k >= n) k -= n;
            out[k] = f.add(out[k], f.mul(a[i], b[j]));
        }
    }
    return out;
}

template <FieldOps F, class E = typename F::Elem>
int poly_degree(const F& f, const std::vector<E>& a) {
    for (size_t i = a.size(); i-- > 0;)
        if (!f.is_zero(a[i])) return (int)i;
    return -1;
}

namespace detail {

template <FieldOps F, class E = typename F::Elem>
void poly_reduce_by(const F& f, std::vector<E>& a, const std::vector<E>& b, int db, std::vector<E>* quot) {
    E lead_inv = f.inv(b[db]);
    int da;
    while ((da = poly_degree(f, a)) >= db) {
        E c = f.mul(a[da], lead_inv);
        if (quot) (*quot)[da - db] = f.add((*quot)[da - db], c);
        for (int i = 0; i <= db; ++i) a[da - db + i] = f.add(a[da - db + i], f.mul(c, b[i]));
    }
}

}  // namespace detail

template <FieldOps F, class E = typename F::Elem>
std::vector<E> poly_rem(const F& f, std::vector<E> a, const std::vector<E>& b) {
    int db = poly_degree(f, b);
    if (db < 0) throw DomainError("division by zero polynomial");
    detail::poly_reduce_by(f, a, b, db, static_cast<std::vector<E>*>(nullptr));
    return a;
}

// Monic gcd.
template <FieldOps F, class E = typename F::Elem>
std::vector<E> poly_gcd(const F& f, std::vector<E> a, std::vector<E> b) {
    while (poly_degree(f, b) >= 0) {
        a = poly_rem(f, std::move(a), b);
        std::swap(a, b);
    }
    int da = poly_degree(f, a);
    if (da >= 0) {
        E d = f.inv(a[da]);
        for (auto& c : a) c = f.mul(c, d);
        a.resize(da + 1);
    }
    return a;
}

template <FieldOps F, class E = typename F::Elem>
std::vector<E> xn_minus_one(const F& f, size_t n) {
    std::vector<E> p(n + 1, f.zero());
    p[0] = f.one();  // characteristic 2: x^n - 1 = x^n + 1
    p[n] = f.one();
    return p;
}

// Inverse of a(x) modulo x^n - 1, if coprime. Extended Euclid tracking the
// cofactor of a only.
template <FieldOps F, class E = typename F::Elem>
std::optional<std::vector<E>> cyc_inverse(const F& f, const std::vector<E>& a) {
    size_t n = a.size();
    std::vector<E> r0 = xn_minus_one(f, n), r1(a);
    std::vector<E> t0(n + 1, f.zero()), t1(n + 1, f.zero());
    t1[0] = f.one();
    while (true) {
        int d1 = poly_degree(f, r1);
        if (d1 < 0) break;
        std::vector<E> q(r0.size(), f.zero());
        detail::poly_reduce_by(f, r0, r1, d1, &q);
        // t0 -= q * t1
        for (size_t i = 0; i < q.size(); ++i) {
            if (f.is_zero(q[i])) continue;
            for (size_t j = 0; j + i < t0.size() && j < t1.size(); ++j)
                t0[i + j] = f.add(t0[i + j], f.mul(q[i], t1[j]));
        }
        std::swap(r0, r1);
        std::swap(t0, t1);
    }
    int d0 = poly_degree(f, r0);
    if (d0 != 0) return std::nullopt;
    E d = f.inv(r0[0]);
    std::vector<E> inv(n, f.zero());
    for (size_t i = 0; i < t0.size(); ++i) {
        if (f.is_zero(t0[i])) continue;
        inv[i % n] = f.add(inv[i % n], f.mul(d, t0[i]));
    }
    return inv;
}

// gcd(v(x), x^n - 1) = 1, the invertibility criterion for circulants.
template <FieldOps F, class E = typename F::Elem>
bool circulant_invertible(const F& f, const std::vector<E>& v) {
    if (poly_degree(f, v) < 0) return false;
    auto g = poly_gcd(f, v, xn_minus_one(f, v.size()));
    return poly_degree(f, g) == 0;
}

// Rank of the k x n partial circulant P_k(v): min(k, n - deg gcd(v, x^n - 1)).
template <FieldOps F, class E = typename F::Elem>
size_t partial_circulant_rank(const F& f, const std::vector<E>& v, size_t k) {
    if (poly_degree(f, v) < 0) return 0;
    auto g = poly_gcd(f, v, xn_minus_one(f, v.size()));
    size_t d = (size_t)poly_degree(f, g);
    return std::min(k, v.size() - d);
}

// ---- Frobenius powers of codes and row-space dimensions ----

inline Mat<FqnElem> frobenius_power_code(const TowerField& F, const Mat<FqnElem>& gen, uint64_t i) {
    Mat<FqnElem> out(gen.rows(), gen.cols());
    for (size_t r = 0; r < gen.rows(); ++r)
        for (size_t c = 0; c < gen.cols(); ++c) out(r, c) = F.frobenius(gen(r, c), i);
    return out;
}

inline size_t sum_dim(const TowerField& F, const Mat<FqnElem>& a, const Mat<FqnElem>& b) {
    return rank_of(TopOps{&F}, mat_stack(a, b));
}

// dim(A intersect B) = dim A + dim B - dim(A + B)
inline size_t intersect_dim(const TowerField& F, const Mat<FqnElem>& a, const Mat<FqnElem>& b) {
    TopOps ops{&F};
    return rank_of(ops, a) + rank_of(ops, b) - sum_dim(F, a, b);
}

}  // namespace rlpc

#endif
