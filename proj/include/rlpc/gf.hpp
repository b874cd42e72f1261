#ifndef RLPC_GF_HPP
#define RLPC_GF_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rlpc/bits.hpp"
#include "rlpc/errors.hpp"
#include "rlpc/rng.hpp"

namespace rlpc {

// Base field F_q, q = 2^e, e <= 16. Elements are packed polynomials over F_2
// (bit i = coefficient of y^i) reduced modulo an irreducible polynomial.
class BaseField {
   public:
    explicit BaseField(unsigned e) : BaseField(e, e == 1 ? 2 : bitpoly::least_irreducible(e)) {}

    BaseField(unsigned e, uint64_t modulus) : e_(e), q_(1u << e), mod_(modulus) {
        if (e == 0 || e > 16) throw ParameterError("base field degree out of range");
        if (bitpoly::degree(modulus) != (int)e || !bitpoly::is_irreducible(modulus))
            throw ParameterError("base field modulus not irreducible of the stated degree");
        if (e_ > 1) {
            log_.assign(q_, 0);
            exp_.assign(2 * q_, 0);
            // smallest generator by exhaustive order test
            for (uint32_t g = 2; g < q_; ++g) {
                uint32_t x = 1;
                uint32_t ord = 0;
                do {
                    x = mul_slow(x, g);
                    ++ord;
                } while (x != 1);
                if (ord == q_ - 1) {
                    gen_ = g;
                    break;
                }
            }
            uint32_t x = 1;
            for (uint32_t i = 0; i < q_ - 1; ++i) {
                exp_[i] = uint16_t(x);
                exp_[i + q_ - 1] = uint16_t(x);
                log_[x] = uint16_t(i);
                x = mul_slow(x, gen_);
            }
        }
    }

    unsigned e() const { return e_; }
    uint32_t q() const { return q_; }
    uint64_t modulus() const { return mod_; }

    uint32_t add(uint32_t a, uint32_t b) const { return a ^ b; }

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (e_ == 1) return a & b;
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }

    uint32_t inv(uint32_t a) const {
        if (a == 0) throw DomainError("inverse of zero");
        if (e_ == 1) return 1;
        return exp_[q_ - 1 - log_[a]];
    }

    uint32_t pow(uint32_t a, uint64_t k) const {
        uint32_t r = 1, b = a;
        while (k) {
            if (k & 1) r = mul(r, b);
            b = mul(b, b);
            k >>= 1;
        }
        return r;
    }

    uint32_t rand(Rng& rng) const { return uint32_t(rng.bits(e_)); }

   private:
    uint32_t mul_slow(uint32_t a, uint32_t b) const {
        return (uint32_t)bitpoly::mulmod(a, b, mod_);
    }

    unsigned e_;
    uint32_t q_;
    uint64_t mod_;
    uint32_t gen_ = 1;
    std::vector<uint16_t> log_, exp_;
};

// Element of the middle field F_{q^m}: m coefficients over F_q packed into one
// word, coefficient i at bits [i*e, (i+1)*e). Immutable value; equality is
// canonical coordinate equality.
struct FqmElem {
    uint64_t v = 0;
    bool operator==(const FqmElem&) const = default;
};

// Element of the top field F_{q^n} = F_{q^m}[X]/(X^2 + t1 X + t0) in the basis
// (1, X): value = lo + hi*X.
struct FqnElem {
    FqmElem lo, hi;
    bool operator==(const FqnElem&) const = default;
};

enum class Subfield { base, mid };

// The tower F_q c F_{q^m} c F_{q^n} with n = 2m. Moduli default to the
// lexicographically least irreducible polynomials so that parameter names pin
// the field bit-exactly. Immutable after construction; all operations are
// pure and safe to share across threads.
class TowerField {
   public:
    TowerField(uint32_t q, unsigned m) : TowerField(make_base(q), m) {}

    TowerField(BaseField base, unsigned m) : base_(std::move(base)), m_(m), n_(2 * m) {
        if (m_ < 2) throw ParameterError("extension degree m must be at least 2");
        if (m_ * base_.e() > 63) throw ParameterError("m*log2(q) must stay below 64");
        pick_mid_modulus();
        init_after_mid();
        pick_top_modulus();
    }

    TowerField(BaseField base, unsigned m, std::vector<uint32_t> mid_modulus, FqmElem top_t0, FqmElem top_t1)
        : base_(std::move(base)), m_(m), n_(2 * m), mid_mod_(std::move(mid_modulus)) {
        if (m_ < 2) throw ParameterError("extension degree m must be at least 2");
        if (m_ * base_.e() > 63) throw ParameterError("m*log2(q) must stay below 64");
        if (mid_mod_.size() != m_ + 1 || mid_mod_[m_] != 1) throw FormatError("mid modulus must be monic of degree m");
        if (!mid_irreducible()) throw FormatError("mid modulus is reducible");
        init_after_mid();
        t0_ = top_t0;
        t1_ = top_t1;
        if ((t0_.v | t1_.v) & ~mid_mask_) throw FormatError("top modulus coefficients out of range");
        if (mid_is_zero(t1_) || abs_trace(mid_mul(t0_, mid_inv(mid_mul(t1_, t1_)))).v != 1)
            throw FormatError("top modulus is reducible");
    }

    const BaseField& base() const { return base_; }
    uint32_t q() const { return base_.q(); }
    unsigned e() const { return base_.e(); }
    unsigned m() const { return m_; }
    unsigned n() const { return n_; }
    unsigned mid_bits() const { return m_ * base_.e(); }
    unsigned top_bits() const { return n_ * base_.e(); }
    const std::vector<uint32_t>& mid_modulus() const { return mid_mod_; }
    FqmElem top_t0() const { return t0_; }
    FqmElem top_t1() const { return t1_; }

    // ---- middle field ----

    FqmElem mid_zero() const { return {}; }
    FqmElem mid_one() const { return {1}; }
    bool mid_is_zero(FqmElem a) const { return a.v == 0; }
    FqmElem mid_add(FqmElem a, FqmElem b) const { return {a.v ^ b.v}; }

    FqmElem mid_mul(FqmElem a, FqmElem b) const {
        if (base_.e() == 1) {
            uint64_t lo, hi;
            clmul64(a.v, b.v, lo, hi);
            return {reduce_mid_bits(lo, hi)};
        }
        return mid_mul_generic(a, b);
    }

    FqmElem mid_sqr(FqmElem a) const { return mid_mul(a, a); }

    FqmElem mid_inv(FqmElem a) const {
        if (a.v == 0) throw DomainError("inverse of zero");
        // Fermat: a^(q^m - 2)
        return mid_pow(a, (uint64_t(1) << (m_ * base_.e())) - 2);
    }

    FqmElem mid_pow(FqmElem a, uint64_t k) const {
        FqmElem r = mid_one(), b = a;
        while (k) {
            if (k & 1) r = mid_mul(r, b);
            b = mid_sqr(b);
            k >>= 1;
        }
        return r;
    }

    // a^(q^i); the q-power Frobenius of the middle field.
    FqmElem mid_frobenius(FqmElem a, uint64_t i) const {
        i %= m_;
        FqmElem r = a;
        for (uint64_t s = 0; s < i * base_.e(); ++s) r = mid_sqr(r);
        return r;
    }

    FqmElem mid_rand(Rng& rng) const { return {rng.bits(m_ * base_.e())}; }

    uint32_t mid_coeff(FqmElem a, unsigned i) const { return uint32_t(a.v >> (i * base_.e())) & (q() - 1); }

    FqmElem mid_from_coeff(unsigned i, uint32_t c) const { return {uint64_t(c) << (i * base_.e())}; }

    FqmElem mid_from_base(uint32_t c) const { return {uint64_t(c)}; }

    std::vector<uint32_t> mid_coords(FqmElem a) const {
        std::vector<uint32_t> out(m_);
        for (unsigned i = 0; i < m_; ++i) out[i] = mid_coeff(a, i);
        return out;
    }

    FqmElem mid_from_coords(const std::vector<uint32_t>& c) const {
        FqmElem r{};
        for (unsigned i = 0; i < m_ && i < c.size(); ++i) r.v |= uint64_t(c[i] & (q() - 1)) << (i * base_.e());
        return r;
    }

    // The class of y in F_q[y]/(mid modulus); a polynomial element generating
    // the polynomial basis (1, alpha, ..., alpha^(m-1)).
    FqmElem mid_gen() const { return mid_from_coeff(1, 1); }

    // ---- top field ----

    FqnElem top_zero() const { return {}; }
    FqnElem top_one() const { return {{1}, {}}; }
    bool top_is_zero(FqnElem a) const { return a.lo.v == 0 && a.hi.v == 0; }
    FqnElem top_add(FqnElem a, FqnElem b) const { return {{a.lo.v ^ b.lo.v}, {a.hi.v ^ b.hi.v}}; }

    FqnElem top_mul(FqnElem x, FqnElem y) const {
        // (a+bX)(c+dX) with X^2 = t1 X + t0; Karatsuba for the cross term.
        FqmElem ac = mid_mul(x.lo, y.lo);
        FqmElem bd = mid_mul(x.hi, y.hi);
        FqmElem s = mid_mul(mid_add(x.lo, x.hi), mid_add(y.lo, y.hi));
        FqmElem cross = mid_add(s, mid_add(ac, bd));
        return {mid_add(ac, mid_mul(t0_, bd)), mid_add(cross, mid_mul(t1_, bd))};
    }

    FqnElem top_sqr(FqnElem x) const {
        FqmElem a2 = mid_sqr(x.lo);
        FqmElem b2 = mid_sqr(x.hi);
        return {mid_add(a2, mid_mul(t0_, b2)), mid_mul(t1_, b2)};
    }

    // Image under the q^m-power map: fixes F_{q^m}, sends X to t1 + X.
    FqnElem top_conj(FqnElem x) const { return {mid_add(x.lo, mid_mul(t1_, x.hi)), x.hi}; }

    FqnElem top_inv(FqnElem x) const {
        if (top_is_zero(x)) throw DomainError("inverse of zero");
        FqnElem xb = top_conj(x);
        FqnElem nrm = top_mul(x, xb);  // norm lands in F_{q^m}
        FqmElem ninv = mid_inv(nrm.lo);
        return {mid_mul(xb.lo, ninv), mid_mul(xb.hi, ninv)};
    }

    FqnElem top_pow(FqnElem a, uint64_t k) const {
        FqnElem r = top_one(), b = a;
        while (k) {
            if (k & 1) r = top_mul(r, b);
            b = top_sqr(b);
            k >>= 1;
        }
        return r;
    }

    // x^(q^i), the i-th Frobenius power over F_q. frobenius(x, n) = x.
    FqnElem frobenius(FqnElem x, uint64_t i) const {
        i %= n_;
        FqnElem r = x;
        for (uint64_t s = 0; s < i * base_.e(); ++s) r = top_sqr(r);
        return r;
    }

    FqnElem top_rand(Rng& rng) const { return {mid_rand(rng), mid_rand(rng)}; }

    FqnElem from_mid(FqmElem a) const { return {a, {}}; }
    bool in_mid(FqnElem x) const { return x.hi.v == 0; }

    FqnElem scale_mid(FqmElem s, FqnElem x) const { return {mid_mul(s, x.lo), mid_mul(s, x.hi)}; }

    // X itself; (1, X) is the fixed basis of F_{q^n} over F_{q^m}.
    FqnElem top_gen() const { return {{}, {1}}; }
    FqnElem top_basis(unsigned i) const { return i == 0 ? top_one() : top_gen(); }

    // ---- coordinate expansion (round-trip identities hold by construction) ----

    std::pair<FqmElem, FqmElem> top_coords_mid(FqnElem x) const { return {x.lo, x.hi}; }
    FqnElem top_from_mid_coords(FqmElem lo, FqmElem hi) const { return {lo, hi}; }

    std::vector<uint32_t> top_coords_base(FqnElem x) const {
        std::vector<uint32_t> out(n_);
        for (unsigned i = 0; i < m_; ++i) {
            out[i] = mid_coeff(x.lo, i);
            out[m_ + i] = mid_coeff(x.hi, i);
        }
        return out;
    }

    FqnElem top_from_base_coords(const std::vector<uint32_t>& c) const {
        FqnElem r{};
        for (unsigned i = 0; i < m_; ++i) {
            if (i < c.size()) r.lo.v |= uint64_t(c[i] & (q() - 1)) << (i * base_.e());
            if (m_ + i < c.size()) r.hi.v |= uint64_t(c[m_ + i] & (q() - 1)) << (i * base_.e());
        }
        return r;
    }

    // ---- element predicates ----

    // True iff the n Frobenius conjugates of g are linearly independent over
    // F_q, i.e. (g, g^q, ..., g^(q^(n-1))) is a basis of F_{q^n}.
    bool is_normal_element(FqnElem g) const {
        std::vector<std::vector<uint32_t>> rows(n_);
        FqnElem x = g;
        for (unsigned i = 0; i < n_; ++i) {
            rows[i] = top_coords_base(x);
            x = frobenius(x, 1);
        }
        return base_rank(rows) == n_;
    }

    // True iff (1, a, ..., a^(m-1)) is a basis of F_{q^m} over F_q.
    bool is_polynomial_element(FqmElem a) const {
        std::vector<std::vector<uint32_t>> rows(m_);
        FqmElem x = mid_one();
        for (unsigned i = 0; i < m_; ++i) {
            rows[i] = mid_coords(x);
            x = mid_mul(x, a);
        }
        return base_rank(rows) == m_;
    }

    bool is_polynomial_element(FqnElem a, Subfield over) const {
        if (over == Subfield::mid) return a.hi.v != 0;  // (1, a) independent over F_{q^m}
        std::vector<std::vector<uint32_t>> rows(n_);
        FqnElem x = top_one();
        for (unsigned i = 0; i < n_; ++i) {
            rows[i] = top_coords_base(x);
            x = top_mul(x, a);
        }
        return base_rank(rows) == n_;
    }

    // Absolute trace down to F_2 of a middle-field element. X^2 + X + c is
    // irreducible over F_{q^m} exactly when the trace of c is 1.
    FqmElem abs_trace(FqmElem c) const {
        FqmElem acc = c, x = c;
        for (unsigned i = 1; i < m_ * base_.e(); ++i) {
            x = mid_sqr(x);
            acc = mid_add(acc, x);
        }
        return acc;
    }

    // ---- serialization ----
    // (q, m, mid modulus coefficient bits, top modulus coefficients), as a
    // length-prefixed byte string, little-endian bit order within bytes.

    std::vector<uint8_t> serialize() const {
        BitWriter w;
        w.write(q(), 32);
        w.write(m_, 32);
        for (unsigned i = 0; i <= m_; ++i) w.write(mid_mod_[i], base_.e());
        w.write(t0_.v, mid_bits());
        w.write(t1_.v, mid_bits());
        std::vector<uint8_t> payload = w.take();
        std::vector<uint8_t> out;
        uint32_t len = (uint32_t)payload.size();
        for (int i = 0; i < 4; ++i) out.push_back(uint8_t(len >> (8 * i)));
        out.insert(out.end(), payload.begin(), payload.end());
        return out;
    }

    static TowerField deserialize(BitReader& r) {
        uint32_t len = (uint32_t)r.read(32);
        if (r.bits_left() < uint64_t(len) * 8) throw FormatError("truncated field description");
        uint64_t qv = r.read(32);
        uint64_t mv = r.read(32);
        if (qv < 2 || (qv & (qv - 1)) != 0 || qv > 65536) throw FormatError("q must be a power of two");
        unsigned e = (unsigned)__builtin_ctzll(qv);
        if (mv < 2 || mv * e > 63) throw FormatError("extension degree out of range");
        BaseField base(e);
        std::vector<uint32_t> mid((size_t)mv + 1);
        for (size_t i = 0; i <= mv; ++i) mid[i] = (uint32_t)r.read(e);
        FqmElem t0{r.read(unsigned(mv * e))};
        FqmElem t1{r.read(unsigned(mv * e))};
        return TowerField(std::move(base), (unsigned)mv, std::move(mid), t0, t1);
    }

    static TowerField deserialize(const std::vector<uint8_t>& bytes) {
        BitReader r(bytes);
        return deserialize(r);
    }

    std::string to_hex(FqmElem a) const {
        static const char* digits = "0123456789abcdef";
        std::string s;
        unsigned nib = (mid_bits() + 3) / 4;
        for (unsigned i = nib; i-- > 0;) s.push_back(digits[(a.v >> (4 * i)) & 0xF]);
        return s;
    }
    std::string to_hex(FqnElem x) const { return to_hex(x.hi) + ":" + to_hex(x.lo); }

   private:
    static BaseField make_base(uint32_t q) {
        if (q < 2 || (q & (q - 1)) != 0) throw ParameterError("q must be a power of two");
        return BaseField((unsigned)__builtin_ctz(q));
    }

    void init_after_mid() {
        mid_mask_ = (uint64_t(1) << (m_ * base_.e())) - 1;
        if (base_.e() == 1) {
            mid_mod_bits_ = 0;
            for (unsigned i = 0; i <= m_; ++i)
                if (mid_mod_[i]) mid_mod_bits_ |= uint64_t(1) << i;
        }
    }

    uint64_t reduce_mid_bits(uint64_t lo, uint64_t hi) const {
        unsigned __int128 p = ((unsigned __int128)hi << 64) | lo;
        for (int d = 2 * (int)m_ - 2; d >= (int)m_; --d)
            if ((p >> d) & 1) p ^= (unsigned __int128)mid_mod_bits_ << (d - (int)m_);
        return (uint64_t)p;
    }

    FqmElem mid_mul_generic(FqmElem a, FqmElem b) const {
        std::array<uint32_t, 128> prod{};
        for (unsigned i = 0; i < m_; ++i) {
            uint32_t ai = mid_coeff(a, i);
            if (!ai) continue;
            for (unsigned j = 0; j < m_; ++j) prod[i + j] ^= base_.mul(ai, mid_coeff(b, j));
        }
        for (int d = 2 * (int)m_ - 2; d >= (int)m_; --d) {
            uint32_t c = prod[d];
            if (!c) continue;
            prod[d] = 0;
            for (unsigned i = 0; i < m_; ++i) prod[d - m_ + i] ^= base_.mul(c, mid_mod_[i]);
        }
        FqmElem r{};
        for (unsigned i = 0; i < m_; ++i) r.v |= uint64_t(prod[i]) << (i * base_.e());
        return r;
    }

    // rank over F_q of a list of coordinate rows (small sizes only)
    size_t base_rank(std::vector<std::vector<uint32_t>>& rows) const {
        size_t nr = rows.size(), nc = nr ? rows[0].size() : 0, rank = 0;
        for (size_t col = 0; col < nc && rank < nr; ++col) {
            size_t piv = nr;
            for (size_t i = rank; i < nr; ++i)
                if (rows[i][col]) {
                    piv = i;
                    break;
                }
            if (piv == nr) continue;
            std::swap(rows[piv], rows[rank]);
            uint32_t d = base_.inv(rows[rank][col]);
            for (size_t j = col; j < nc; ++j) rows[rank][j] = base_.mul(rows[rank][j], d);
            for (size_t i = rank + 1; i < nr; ++i) {
                uint32_t c = rows[i][col];
                if (!c) continue;
                for (size_t j = col; j < nc; ++j) rows[i][j] ^= base_.mul(c, rows[rank][j]);
            }
            ++rank;
        }
        return rank;
    }

    void pick_mid_modulus() {
        mid_mod_.assign(m_ + 1, 0);
        mid_mod_[m_] = 1;
        if (base_.e() == 1) {
            uint64_t f = bitpoly::least_irreducible(m_);
            for (unsigned i = 0; i < m_; ++i) mid_mod_[i] = (f >> i) & 1;
            return;
        }
        // ascending coefficient encoding (c_0 + c_1 q + ...), monic
        while (true) {
            if (mid_irreducible()) return;
            unsigned i = 0;
            while (i < m_) {
                mid_mod_[i] = (mid_mod_[i] + 1) & (q() - 1);
                if (mid_mod_[i] != 0) break;
                ++i;
            }
            if (i == m_) throw DomainError("no irreducible mid modulus found");
        }
    }

    // Rabin test for the (m+1)-coefficient monic mid modulus over F_q.
    bool mid_irreducible() const {
        if (mid_mod_[0] == 0) return false;
        std::vector<uint32_t> x = {0, 1};
        std::vector<uint32_t> xq = poly_powq(x, m_);
        if (xq != poly_mod(x)) return false;
        for (unsigned p = 2; p <= m_; ++p) {
            if (m_ % p != 0) continue;
            bool prime = true;
            for (unsigned d = 2; d * d <= p; ++d)
                if (p % d == 0) prime = false;
            if (!prime) continue;
            std::vector<uint32_t> xp = poly_powq(x, m_ / p);
            // gcd(x^(q^(m/p)) - x, f) must be 1
            std::vector<uint32_t> diff = xp;
            if (diff.size() < 2) diff.resize(2, 0);
            diff[1] ^= 1;
            if (poly_gcd_deg(diff) != 0) return false;
        }
        return true;
    }

    std::vector<uint32_t> poly_mod(std::vector<uint32_t> a) const {
        while (a.size() > m_) {
            uint32_t c = a.back();
            a.pop_back();
            if (c)
                for (unsigned i = 0; i < m_; ++i) a[a.size() - m_ + i] ^= base_.mul(c, mid_mod_[i]);
        }
        a.resize(m_, 0);
        return a;
    }

    std::vector<uint32_t> poly_mulmod(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) const {
        std::vector<uint32_t> p(a.size() + b.size() - 1, 0);
        for (size_t i = 0; i < a.size(); ++i) {
            if (!a[i]) continue;
            for (size_t j = 0; j < b.size(); ++j) p[i + j] ^= base_.mul(a[i], b[j]);
        }
        return poly_mod(std::move(p));
    }

    std::vector<uint32_t> poly_powq(std::vector<uint32_t> a, unsigned times) const {
        a = poly_mod(std::move(a));
        for (unsigned t = 0; t < times * base_.e(); ++t) a = poly_mulmod(a, a);
        return a;
    }

    // degree of gcd(a, mid modulus)
    int poly_gcd_deg(std::vector<uint32_t> a) const {
        std::vector<uint32_t> f(mid_mod_.begin(), mid_mod_.end());
        auto deg = [](const std::vector<uint32_t>& p) {
            for (size_t i = p.size(); i-- > 0;)
                if (p[i]) return (int)i;
            return -1;
        };
        while (true) {
            int da = deg(a), df = deg(f);
            if (da < 0) return df;
            if (df < 0) return da;
            if (df < da) {
                std::swap(a, f);
                std::swap(da, df);
            }
            uint32_t c = base_.mul(f[df], base_.inv(a[da]));
            for (int i = 0; i <= da; ++i)
                if (a[i]) f[df - da + i] ^= base_.mul(c, a[i]);
        }
    }

    void pick_top_modulus() {
        // X^2 + X + t0 is irreducible over F_{q^m} iff the absolute trace of
        // t0 is 1. The trace is F_2-linear in the packed bits, so the least
        // trace-1 encoding is the lowest single bit with trace 1.
        t1_ = mid_one();
        for (unsigned b = 0; b < m_ * base_.e(); ++b) {
            FqmElem cand{uint64_t(1) << b};
            if (abs_trace(cand).v == 1) {
                t0_ = cand;
                return;
            }
        }
        throw DomainError("no irreducible top modulus found");
    }

    BaseField base_;
    unsigned m_, n_;
    std::vector<uint32_t> mid_mod_;
    uint64_t mid_mod_bits_ = 0;
    uint64_t mid_mask_ = 0;
    FqmElem t0_, t1_;
};

}  // namespace rlpc

#endif
