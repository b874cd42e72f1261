#ifndef RLPC_GABIDULIN_HPP
#define RLPC_GABIDULIN_HPP

#include <span>
#include <utility>
#include <vector>

#include "rlpc/rankmat.hpp"

namespace rlpc {

// ---- linearized (q-) polynomials over F_{q^n} ----
// p(z) = sum_i c[i] z^(q^i); evaluation is F_q-linear in z and composition is
// the (non-commutative) ring product.

struct LinPoly {
    std::vector<FqnElem> c;  // c[i] multiplies z^(q^i)
};

inline int lp_degree(const TowerField& F, const LinPoly& p) {
    for (size_t i = p.c.size(); i-- > 0;)
        if (!F.top_is_zero(p.c[i])) return (int)i;
    return -1;
}

inline bool lp_is_zero(const TowerField& F, const LinPoly& p) { return lp_degree(F, p) < 0; }

inline FqnElem lp_eval(const TowerField& F, const LinPoly& p, FqnElem x) {
    FqnElem acc = F.top_zero();
    FqnElem conj = x;
    for (size_t i = 0; i < p.c.size(); ++i) {
        if (!F.top_is_zero(p.c[i])) acc = F.top_add(acc, F.top_mul(p.c[i], conj));
        conj = F.frobenius(conj, 1);
    }
    return acc;
}

// a(b(z)): coefficient of z^(q^(i+j)) picks up a_i * b_j^(q^i).
inline LinPoly lp_compose(const TowerField& F, const LinPoly& a, const LinPoly& b) {
    int da = lp_degree(F, a), db = lp_degree(F, b);
    if (da < 0 || db < 0) return {};
    LinPoly out;
    out.c.assign((size_t)(da + db) + 1, F.top_zero());
    for (int i = 0; i <= da; ++i) {
        if (F.top_is_zero(a.c[i])) continue;
        for (int j = 0; j <= db; ++j) {
            FqnElem t = F.top_mul(a.c[i], F.frobenius(b.c[j], i));
            out.c[i + j] = F.top_add(out.c[i + j], t);
        }
    }
    return out;
}

// Left division: N = V o Q + R with q-degree(R) < q-degree(V).
inline std::pair<LinPoly, LinPoly> lp_left_divide(const TowerField& F, const LinPoly& n, const LinPoly& v) {
    int dv = lp_degree(F, v);
    if (dv < 0) throw DomainError("left division by zero polynomial");
    LinPoly r = n;
    int dr = lp_degree(F, r);
    LinPoly q;
    if (dr >= dv) q.c.assign((size_t)(dr - dv) + 1, F.top_zero());
    FqnElem lead_inv = F.top_inv(v.c[dv]);
    while ((dr = lp_degree(F, r)) >= dv) {
        int j = dr - dv;
        // leading term of V o (c z^(q^j)) is v_dv * c^(q^dv) z^(q^(dv+j))
        FqnElem c = F.frobenius(F.top_mul(r.c[dr], lead_inv), F.n() - dv);
        q.c[j] = F.top_add(q.c[j], c);
        FqnElem cc = c;
        for (int i = 0; i <= dv; ++i) {
            r.c[i + j] = F.top_add(r.c[i + j], F.top_mul(v.c[i], cc));
            cc = F.frobenius(cc, 1);
        }
    }
    return {q, r};
}

// ---- samplers ----

// (g^(q^(n-1)), ..., g^q, g): the conjugate vector whose partial circulant is
// simultaneously Moore.
inline std::vector<FqnElem> conjugate_vector(const TowerField& F, FqnElem g) {
    unsigned n = F.n();
    std::vector<FqnElem> out(n);
    FqnElem x = g;
    for (unsigned i = 0; i < n; ++i) {
        out[n - 1 - i] = x;
        x = F.frobenius(x, 1);
    }
    return out;
}

// Uniform normal element; accepts when the circulant of the conjugate vector
// is invertible, which happens for a Phi_q(x^n-1)/q^n fraction of draws.
inline FqnElem sample_normal_element(const TowerField& F, Rng& rng) {
    TopOps ops{&F};
    for (;;) {
        FqnElem g = F.top_rand(rng);
        if (F.top_is_zero(g)) continue;
        if (circulant_invertible(ops, conjugate_vector(F, g))) return g;
    }
}

// Error vector in F_{q^m}^n of exact rank weight t over F_q, built as a
// product of a rank-t support basis with a full-rank t x n matrix over F_q.
inline std::vector<FqmElem> sample_rank_error(const TowerField& F, size_t t, Rng& rng) {
    unsigned n = F.n(), m = F.m();
    if (t > n || t > m) throw ParameterError("error rank exceeds min(n, m)");
    std::vector<FqmElem> e(n, F.mid_zero());
    if (t == 0) return e;

    std::vector<FqmElem> support(t);
    for (;;) {
        for (auto& b : support) b = F.mid_rand(rng);
        if (rank_weight(F, std::span<const FqmElem>(support)) == t) break;
    }
    Mat<uint32_t> pattern((size_t)t, n);
    BaseOps bops{&F};
    for (;;) {
        for (size_t i = 0; i < t; ++i)
            for (unsigned j = 0; j < n; ++j) pattern(i, j) = bops.rand(rng);
        if (rank_of(bops, pattern) == t) break;
    }
    for (unsigned j = 0; j < n; ++j) {
        FqmElem acc = F.mid_zero();
        for (size_t i = 0; i < t; ++i)
            acc = F.mid_add(acc, F.mid_mul(support[i], F.mid_from_base(pattern(i, j))));
        e[j] = acc;
    }
    return e;
}

// ---- partial cyclic Gabidulin codes ----
// Generator P_k(gbar) for a normal element g; the rows are simultaneously
// right rotations and Frobenius powers, minimum rank distance n - k + 1,
// unique decoding up to t = (n - k) / 2 rank errors.
class GabidulinCode {
   public:
    GabidulinCode(const TowerField& F, FqnElem g, size_t k)
        : F_(&F), g_(g), k_(k), n_(F.n()), t_((F.n() - k) / 2) {
        if (k_ < 1 || k_ >= n_) throw ParameterError("code dimension out of range");
        if (!F.is_normal_element(g)) throw ParameterError("generator is not a normal element");
        gbar_ = conjugate_vector(F, g);
        gen_ = circulant(gbar_, k_);
    }

    const TowerField& tower() const { return *F_; }
    FqnElem g() const { return g_; }
    size_t n() const { return n_; }
    size_t k() const { return k_; }
    size_t t() const { return t_; }
    const std::vector<FqnElem>& gbar() const { return gbar_; }
    const Mat<FqnElem>& generator() const { return gen_; }

    std::vector<FqnElem> encode(std::span<const FqnElem> x) const {
        if (x.size() != k_) throw ParameterError("message length must equal k");
        TopOps ops{F_};
        std::vector<FqnElem> xv(x.begin(), x.end());
        return cyc_mul(ops, xv, gbar_);
    }

    struct Decoded {
        std::vector<FqnElem> message;
        std::vector<FqnElem> error;
    };

    // Interpolation decoding: find a nonzero pair (V, N) of linearized
    // polynomials with q-deg V <= t, q-deg N <= k+t-1 and V(y_j) = N(gbar_j)
    // on all n points, then recover the message as the exact left quotient
    // N = V o f. Any word within rank distance t of the code decodes to the
    // unique closest codeword; everything else raises DecodingFailure.
    Decoded decode(std::span<const FqnElem> y) const {
        if (y.size() != n_) throw ParameterError("received word length must equal n");
        const TowerField& F = *F_;
        TopOps ops{F_};
        size_t vcols = t_ + 1, ncols = k_ + t_;
        Mat<FqnElem> sys(n_, vcols + ncols);
        for (size_t j = 0; j < n_; ++j) {
            FqnElem yc = y[j];
            for (size_t i = 0; i < vcols; ++i) {
                sys(j, i) = yc;
                yc = F.frobenius(yc, 1);
            }
            FqnElem gc = gbar_[j];
            for (size_t l = 0; l < ncols; ++l) {
                sys(j, vcols + l) = gc;
                gc = F.frobenius(gc, 1);
            }
        }
        Mat<FqnElem> ker = kernel_basis(ops, std::move(sys));
        if (ker.rows() == 0) throw DecodingFailure();

        LinPoly V, N;
        V.c.assign(vcols, F.top_zero());
        N.c.assign(ncols, F.top_zero());
        for (size_t i = 0; i < vcols; ++i) V.c[i] = ker(0, i);
        for (size_t l = 0; l < ncols; ++l) N.c[l] = ker(0, vcols + l);
        if (lp_is_zero(F, V)) throw DecodingFailure();  // forces N = 0; cannot encode a word

        auto [quot, rem] = lp_left_divide(F, N, V);
        if (!lp_is_zero(F, rem) || lp_degree(F, quot) >= (int)k_) throw DecodingFailure();

        std::vector<FqnElem> x(k_, F.top_zero());
        for (size_t i = 0; i < quot.c.size() && i < k_; ++i) x[i] = quot.c[i];
        std::vector<FqnElem> c = encode(x);
        std::vector<FqnElem> e(n_);
        for (size_t j = 0; j < n_; ++j) e[j] = F.top_add(y[j], c[j]);
        if (rank_weight(F, std::span<const FqnElem>(e), Subfield::base) > t_) throw DecodingFailure();
        return {std::move(x), std::move(e)};
    }

   private:
    const TowerField* F_;
    FqnElem g_;
    size_t k_, n_, t_;
    std::vector<FqnElem> gbar_;
    Mat<FqnElem> gen_;
};

}  // namespace rlpc

#endif
