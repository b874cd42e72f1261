#ifndef RLPC_RNG_HPP
#define RLPC_RNG_HPP

#include <cstdint>
#include <random>
#include <string>

#include "rlpc/errors.hpp"

namespace rlpc {

// Deterministic random source. All sampling in the library draws from an
// injected Rng owned by the caller; there is no global generator. The raw
// mt19937_64 output sequence is fixed by the standard, so a seed yields the
// same keys on every platform.
class Rng {
   public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    static Rng from_hex(const std::string& hex) { return Rng(seed_from_hex(hex)); }

    // Folds a hex string of any length into a 64-bit seed.
    static uint64_t seed_from_hex(const std::string& hex) {
        if (hex.empty()) throw ParameterError("empty seed");
        uint64_t acc = 0;
        unsigned shift = 0;
        for (char c : hex) {
            uint64_t nib;
            if (c >= '0' && c <= '9') nib = uint64_t(c - '0');
            else if (c >= 'a' && c <= 'f') nib = uint64_t(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') nib = uint64_t(c - 'A' + 10);
            else throw ParameterError("seed must be hexadecimal");
            acc ^= nib << shift;
            shift = (shift + 4) & 63;
            acc = (acc << 1) | (acc >> 63);
        }
        return acc;
    }

    uint64_t u64() { return gen_(); }

    // Low `nbits` of a fresh draw, nbits <= 64.
    uint64_t bits(unsigned nbits) {
        if (nbits == 0) return 0;
        return gen_() >> (64 - nbits);
    }

    // Uniform in [0, bound) by rejection.
    uint64_t below(uint64_t bound) {
        if (bound == 0) throw ParameterError("below(0)");
        if ((bound & (bound - 1)) == 0) return gen_() & (bound - 1);
        uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % bound;
    }

   private:
    std::mt19937_64 gen_;
};

}  // namespace rlpc

#endif
