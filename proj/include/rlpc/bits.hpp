#ifndef RLPC_BITS_HPP
#define RLPC_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rlpc/errors.hpp"

#if defined(__PCLMUL__)
#include <wmmintrin.h>
#endif

namespace rlpc {

// Carry-less 64x64 -> 128 multiply. PCLMUL when available, 4-bit comb otherwise.
inline void clmul64(uint64_t a, uint64_t b, uint64_t& lo, uint64_t& hi) {
#if defined(__PCLMUL__)
    __m128i x = _mm_clmulepi64_si128(_mm_set_epi64x(0, (long long)a), _mm_set_epi64x(0, (long long)b), 0x00);
    lo = (uint64_t)_mm_cvtsi128_si64(x);
    hi = (uint64_t)_mm_cvtsi128_si64(_mm_srli_si128(x, 8));
#else
    uint64_t tl[16], th[16];
    tl[0] = 0;
    th[0] = 0;
    tl[1] = b;
    th[1] = 0;
    for (unsigned i = 2; i < 16; i += 2) {
        tl[i] = tl[i / 2] << 1;
        th[i] = (th[i / 2] << 1) | (tl[i / 2] >> 63);
        tl[i + 1] = tl[i] ^ b;
        th[i + 1] = th[i];
    }
    lo = 0;
    hi = 0;
    for (int s = 60; s >= 0; s -= 4) {
        hi = (hi << 4) | (lo >> 60);
        lo <<= 4;
        unsigned nib = (a >> s) & 0xF;
        lo ^= tl[nib];
        hi ^= th[nib];
    }
#endif
}

// --- Polynomials over F_2, packed one coefficient per bit (bit i = x^i). ---
// Degrees stay below 64 for operands; intermediate products use 128 bits.
namespace bitpoly {

inline int degree(uint64_t p) {
    if (p == 0) return -1;
    return 63 - __builtin_clzll(p);
}

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t mod) {
    uint64_t lo, hi;
    clmul64(a, b, lo, hi);
    int dm = degree(mod);
    unsigned __int128 p = ((unsigned __int128)hi << 64) | lo;
    for (int d = 2 * dm - 2; d >= dm; --d)
        if ((p >> d) & 1) p ^= (unsigned __int128)mod << (d - dm);
    return (uint64_t)p;
}

inline uint64_t gcd(uint64_t a, uint64_t b) {
    while (b) {
        int db = degree(b);
        while (degree(a) >= db && a) {
            a ^= b << (degree(a) - db);
        }
        uint64_t t = a;
        a = b;
        b = t;
    }
    return a;
}

// x^(2^k) mod f by repeated squaring.
inline uint64_t x_pow_pow2_mod(unsigned k, uint64_t f) {
    uint64_t r = 2;  // x
    for (unsigned i = 0; i < k; ++i) r = mulmod(r, r, f);
    return r;
}

// Rabin irreducibility test for monic f of degree d over F_2.
inline bool is_irreducible(uint64_t f) {
    int d = degree(f);
    if (d <= 0) return false;
    if (d == 1) return true;
    if ((f & 1) == 0) return false;  // divisible by x
    if (x_pow_pow2_mod((unsigned)d, f) != 2) return false;
    for (int p = 2; p <= d; ++p) {
        if (d % p != 0) continue;
        bool prime = true;
        for (int q = 2; q * q <= p; ++q)
            if (p % q == 0) prime = false;
        if (!prime) continue;
        uint64_t xp = x_pow_pow2_mod((unsigned)(d / p), f);
        if (gcd(xp ^ 2, f) != 1) return false;
    }
    return true;
}

// Least irreducible polynomial of degree d by ascending coefficient encoding.
inline uint64_t least_irreducible(unsigned d) {
    if (d == 0 || d > 63) throw ParameterError("degree out of range");
    uint64_t top = 1ull << d;
    for (uint64_t tail = 1; tail < top; tail += 2)
        if (is_irreducible(top | tail)) return top | tail;
    throw DomainError("no irreducible polynomial found");
}

}  // namespace bitpoly

// --- Bit-stream packing, little-endian bit order within bytes. ---

class BitWriter {
   public:
    void write(uint64_t value, unsigned nbits) {
        for (unsigned i = 0; i < nbits; ++i) {
            if (pos_ % 8 == 0) bytes_.push_back(0);
            if ((value >> i) & 1) bytes_.back() |= uint8_t(1u << (pos_ % 8));
            ++pos_;
        }
    }
    const std::vector<uint8_t>& bytes() const { return bytes_; }
    std::vector<uint8_t> take() { return std::move(bytes_); }
    size_t bit_count() const { return pos_; }

   private:
    std::vector<uint8_t> bytes_;
    size_t pos_ = 0;
};

class BitReader {
   public:
    BitReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
    explicit BitReader(const std::vector<uint8_t>& v) : BitReader(v.data(), v.size()) {}

    uint64_t read(unsigned nbits) {
        uint64_t v = 0;
        for (unsigned i = 0; i < nbits; ++i) {
            if (pos_ / 8 >= size_) throw FormatError("truncated data");
            if ((data_[pos_ / 8] >> (pos_ % 8)) & 1) v |= 1ull << i;
            ++pos_;
        }
        return v;
    }
    size_t bits_left() const { return size_ * 8 - pos_; }
    // Remaining pad bits up to a byte boundary must be zero.
    bool padding_clear() const {
        for (size_t p = pos_; p < size_ * 8; ++p)
            if ((data_[p / 8] >> (p % 8)) & 1) return false;
        return true;
    }

   private:
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

// --- Dense matrix over F_2 with word-packed rows. ---

class BitMatrix {
   public:
    BitMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64), w_(rows * words_, 0) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    void set(size_t i, size_t j, bool v) {
        uint64_t& w = w_[i * words_ + j / 64];
        uint64_t bit = 1ull << (j % 64);
        if (v) w |= bit;
        else w &= ~bit;
    }
    bool get(size_t i, size_t j) const { return (w_[i * words_ + j / 64] >> (j % 64)) & 1; }

    size_t rank() const {
        std::vector<uint64_t> a(w_);
        size_t r = 0;
        for (size_t col = 0; col < cols_ && r < rows_; ++col) {
            size_t wi = col / 64;
            uint64_t bit = 1ull << (col % 64);
            size_t piv = rows_;
            for (size_t i = r; i < rows_; ++i)
                if (a[i * words_ + wi] & bit) {
                    piv = i;
                    break;
                }
            if (piv == rows_) continue;
            if (piv != r)
                for (size_t w = 0; w < words_; ++w) std::swap(a[piv * words_ + w], a[r * words_ + w]);
            for (size_t i = r + 1; i < rows_; ++i)
                if (a[i * words_ + wi] & bit)
                    for (size_t w = wi; w < words_; ++w) a[i * words_ + w] ^= a[r * words_ + w];
            ++r;
        }
        return r;
    }

   private:
    size_t rows_, cols_, words_;
    std::vector<uint64_t> w_;
};

}  // namespace rlpc

#endif
