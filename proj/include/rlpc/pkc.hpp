#ifndef RLPC_PKC_HPP
#define RLPC_PKC_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rlpc/gabidulin.hpp"
#include "rlpc/semilinear.hpp"

namespace rlpc {

// Scheme parameters. The named sets fix (q, m, n, k) and imply
// t = (n - k) / 2; toy sets carry their tower description in serialized form.
struct SchemeParams {
    uint32_t q = 2;
    unsigned m = 0, n = 0, k = 0, t = 0;
    uint8_t tag = 0;  // 0x01 = P128, 0x02 = P192, 0x03 = P256, 0x00 = inline
    std::string name;

    static SchemeParams p128() { return make(2, 32, 50, 0x01, "P128"); }
    static SchemeParams p192() { return make(2, 40, 64, 0x02, "P192"); }
    static SchemeParams p256() { return make(2, 46, 70, 0x03, "P256"); }

    static SchemeParams toy(uint32_t q, unsigned m, unsigned k) { return make(q, m, k, 0x00, ""); }

    static SchemeParams from_tag(uint8_t tag) {
        switch (tag) {
            case 0x01: return p128();
            case 0x02: return p192();
            case 0x03: return p256();
        }
        throw FormatError("unknown parameter-set tag");
    }

    // "P128" | "P192" | "P256" | "toy:q,m,k"
    static SchemeParams by_name(const std::string& name);

    static SchemeParams make(uint32_t q, unsigned m, unsigned k, uint8_t tag, std::string name) {
        SchemeParams p;
        p.q = q;
        p.m = m;
        p.n = 2 * m;
        p.k = k;
        p.t = (p.n - k) / 2;
        p.tag = tag;
        p.name = std::move(name);
        if (p.name.empty()) {
            p.name = "toy:" + std::to_string(q) + "," + std::to_string(m) + "," + std::to_string(k);
        }
        if (!(p.m < p.k && p.k < p.n)) throw ParameterError("require m < k < 2m");
        if (p.t < 1) throw ParameterError("require t >= 1");
        return p;
    }
};

inline SchemeParams SchemeParams::by_name(const std::string& name) {
    if (name == "P128") return p128();
    if (name == "P192") return p192();
    if (name == "P256") return p256();
    if (name.rfind("toy:", 0) == 0) {
        unsigned long vals[3];
        size_t pos = 4;
        for (int i = 0; i < 3; ++i) {
            size_t next;
            vals[i] = std::stoul(name.substr(pos), &next);
            pos += next;
            if (i < 2) {
                if (pos >= name.size() || name[pos] != ',') throw ParameterError("toy parameters are toy:q,m,k");
                ++pos;
            }
        }
        if (pos != name.size()) throw ParameterError("toy parameters are toy:q,m,k");
        return toy((uint32_t)vals[0], (unsigned)vals[1], (unsigned)vals[2]);
    }
    throw ParameterError("unknown parameter set: " + name);
}

struct PublicKey {
    std::vector<FqnElem> gprime;  // P_k(gprime) generates the public code
    uint32_t t = 0;
};

struct SecretKey {
    FqnElem g{};                                // normal element
    std::vector<FqnElem> mvec;                  // wt_{q^m} = 2, circulant invertible
    Mat<FqmElem> phi_matrix;                    // secret F_{q^m}-linear map, 2x2
    // caches rebuilt on load, never serialized
    std::vector<FqnElem> phim;                  // phi applied to mvec
    std::vector<FqnElem> minv;                  // mvec^(-1) mod x^n - 1
    std::shared_ptr<const SemilinearMap<TopOverMid>> phi, phi_inv;
    std::shared_ptr<const GabidulinCode> code;
};

struct Ciphertext {
    std::vector<FqnElem> y;
};

class Scheme {
   public:
    explicit Scheme(SchemeParams params) : p_(std::move(params)), F_(p_.q, p_.m) {}

    Scheme(SchemeParams params, TowerField tower) : p_(std::move(params)), F_(std::move(tower)) {
        if (F_.q() != p_.q || F_.m() != p_.m) throw ParameterError("tower does not match parameters");
    }

    const SchemeParams& params() const { return p_; }
    const TowerField& tower() const { return F_; }

    struct KeyPair {
        PublicKey pk;
        SecretKey sk;
    };

    // Samples, in order, the normal element g, the masking vector mvec and the
    // secret transformation phi, then publishes the first row of
    // phi(G M) phi(M)^(-1). Degenerate draws (singular phi(M) or a public
    // generator short of rank k) restart the loop on the same stream, so a
    // seed determines the key pair.
    KeyPair keygen(Rng& rng) const {
        TopOps tops{&F_};
        MidOps mops{&F_};
        unsigned n = p_.n, k = p_.k;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            FqnElem g = sample_normal_element(F_, rng);

            std::vector<FqnElem> mvec(n);
            for (;;) {
                Mat<FqmElem> ms(2, n);
                for (unsigned j = 0; j < n; ++j) {
                    ms(0, j) = F_.mid_rand(rng);
                    ms(1, j) = F_.mid_rand(rng);
                }
                if (rank_of(mops, ms) != 2) continue;  // wt_{q^m}(mvec) must be exactly 2
                for (unsigned j = 0; j < n; ++j) mvec[j] = F_.top_from_mid_coords(ms(0, j), ms(1, j));
                if (circulant_invertible(tops, mvec)) break;
            }

            auto phi = sample_secret_phi(F_, rng);

            auto gbar = conjugate_vector(F_, g);
            auto gm = cyc_mul(tops, gbar, mvec);
            auto phim = phi.apply(std::span<const FqnElem>(mvec));
            auto phim_inv = cyc_inverse(tops, phim);
            if (!phim_inv) continue;
            auto phigm = phi.apply(std::span<const FqnElem>(gm));
            auto gprime = cyc_mul(tops, phigm, *phim_inv);
            if (partial_circulant_rank(tops, gprime, k) != k) continue;

            auto minv = cyc_inverse(tops, mvec);
            if (!minv) continue;  // cannot happen; mvec was checked

            KeyPair kp;
            kp.pk.gprime = std::move(gprime);
            kp.pk.t = p_.t;
            kp.sk.g = g;
            kp.sk.mvec = std::move(mvec);
            kp.sk.phi_matrix = phi.matrix();
            kp.sk.phim = std::move(phim);
            kp.sk.minv = std::move(*minv);
            kp.sk.phi = std::make_shared<SemilinearMap<TopOverMid>>(phi);
            kp.sk.phi_inv = std::make_shared<SemilinearMap<TopOverMid>>(phi.inverse());
            kp.sk.code = std::make_shared<GabidulinCode>(F_, g, k);
            return kp;
        }
        throw std::logic_error("keygen kept drawing degenerate keys; implementation bug");
    }

    Ciphertext encrypt(const PublicKey& pk, std::span<const FqmElem> x, Rng& rng) const {
        return encrypt_with_error(pk, x, sample_rank_error(F_, p_.t, rng));
    }

    // Test hook: encryption with a caller-supplied error vector.
    Ciphertext encrypt_with_error(const PublicKey& pk, std::span<const FqmElem> x,
                                  std::span<const FqmElem> e) const {
        if (x.size() != p_.k) throw ParameterError("plaintext must have k components");
        if (e.size() != p_.n) throw ParameterError("error must have n components");
        TopOps tops{&F_};
        std::vector<FqnElem> xt(p_.k);
        for (unsigned i = 0; i < p_.k; ++i) xt[i] = F_.from_mid(x[i]);
        std::vector<FqnElem> y = cyc_mul(tops, xt, pk.gprime);
        for (unsigned j = 0; j < p_.n; ++j) y[j] = F_.top_add(y[j], F_.from_mid(e[j]));
        return {std::move(y)};
    }

    struct Decrypted {
        std::vector<FqmElem> x;
        std::vector<FqmElem> e;
    };

    // y phi(M) = phi(x G M + e M) since x and e have entries in F_{q^m} and
    // phi is F_{q^m}-linear; unmasking with phi^(-1) and M^(-1) hands the
    // decoder a plain Gabidulin channel word x G + e.
    Decrypted decrypt_full(const SecretKey& sk, const Ciphertext& ct) const {
        if (ct.y.size() != p_.n) throw InvalidCiphertext("wrong ciphertext length");
        TopOps tops{&F_};
        auto y1 = cyc_mul(tops, ct.y, sk.phim);
        auto y2 = sk.phi_inv->apply(std::span<const FqnElem>(y1));
        auto yprime = cyc_mul(tops, y2, sk.minv);
        GabidulinCode::Decoded dec;
        try {
            dec = sk.code->decode(yprime);
        } catch (const DecodingFailure&) {
            throw InvalidCiphertext();
        }
        Decrypted out;
        out.x.resize(p_.k);
        out.e.resize(p_.n);
        for (unsigned i = 0; i < p_.k; ++i) {
            if (!F_.in_mid(dec.message[i])) throw InvalidCiphertext("recovered plaintext leaves the subfield");
            out.x[i] = dec.message[i].lo;
        }
        for (unsigned j = 0; j < p_.n; ++j) {
            if (!F_.in_mid(dec.error[j])) throw InvalidCiphertext("recovered error leaves the subfield");
            out.e[j] = dec.error[j].lo;
        }
        return out;
    }

    std::vector<FqmElem> decrypt(const SecretKey& sk, const Ciphertext& ct) const {
        return decrypt_full(sk, ct).x;
    }

    // ---- serialization (payloads; sizes are exact) ----

    size_t public_key_bytes() const { return (size_t(p_.n) * F_.top_bits() + 7) / 8; }
    size_t ciphertext_bytes() const { return public_key_bytes(); }
    size_t secret_key_bytes() const {
        return ((size_t(p_.n) + 1) * F_.top_bits() + 4 * F_.mid_bits() + 7) / 8;
    }
    size_t plaintext_bytes() const { return (size_t(p_.k) * F_.mid_bits() + 7) / 8; }

    std::vector<uint8_t> serialize(const PublicKey& pk) const {
        BitWriter w;
        for (auto& x : pk.gprime) write_top(w, x);
        return w.take();
    }

    PublicKey parse_public(std::span<const uint8_t> bytes) const {
        if (bytes.size() != public_key_bytes()) throw FormatError("public key has wrong size");
        BitReader r(bytes.data(), bytes.size());
        PublicKey pk;
        pk.gprime.resize(p_.n);
        for (auto& x : pk.gprime) x = read_top(r);
        if (!r.padding_clear()) throw FormatError("public key has nonzero padding");
        pk.t = p_.t;
        return pk;
    }

    std::vector<uint8_t> serialize(const SecretKey& sk) const {
        BitWriter w;
        write_top(w, sk.g);
        for (auto& x : sk.mvec) write_top(w, x);
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j) w.write(sk.phi_matrix(i, j).v, F_.mid_bits());
        return w.take();
    }

    SecretKey parse_secret(std::span<const uint8_t> bytes) const {
        if (bytes.size() != secret_key_bytes()) throw FormatError("secret key has wrong size");
        BitReader r(bytes.data(), bytes.size());
        SecretKey sk;
        sk.g = read_top(r);
        sk.mvec.resize(p_.n);
        for (auto& x : sk.mvec) x = read_top(r);
        sk.phi_matrix = Mat<FqmElem>(2, 2);
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j) sk.phi_matrix(i, j) = FqmElem{r.read(F_.mid_bits())};
        if (!r.padding_clear()) throw FormatError("secret key has nonzero padding");
        rebuild_caches(sk);
        return sk;
    }

    std::vector<uint8_t> serialize(const Ciphertext& ct) const {
        BitWriter w;
        for (auto& x : ct.y) write_top(w, x);
        return w.take();
    }

    Ciphertext parse_ciphertext(std::span<const uint8_t> bytes) const {
        if (bytes.size() != ciphertext_bytes()) throw FormatError("ciphertext has wrong size");
        BitReader r(bytes.data(), bytes.size());
        Ciphertext ct;
        ct.y.resize(p_.n);
        for (auto& x : ct.y) x = read_top(r);
        if (!r.padding_clear()) throw FormatError("ciphertext has nonzero padding");
        return ct;
    }

    // Plaintexts are raw bit-packed vectors in F_{q^m}^k; trailing pad bits
    // of the final byte must be zero.
    std::vector<uint8_t> pack_plaintext(std::span<const FqmElem> x) const {
        if (x.size() != p_.k) throw ParameterError("plaintext must have k components");
        BitWriter w;
        for (auto& c : x) w.write(c.v, F_.mid_bits());
        return w.take();
    }

    std::vector<FqmElem> unpack_plaintext(std::span<const uint8_t> bytes) const {
        if (bytes.size() != plaintext_bytes())
            throw FormatError("plaintext must be k*m*log2(q) bits");
        BitReader r(bytes.data(), bytes.size());
        std::vector<FqmElem> x(p_.k);
        for (auto& c : x) c = FqmElem{r.read(F_.mid_bits())};
        if (!r.padding_clear()) throw FormatError("plaintext must be k*m*log2(q) bits");
        return x;
    }

    void rebuild_caches(SecretKey& sk) const {
        TopOps tops{&F_};
        auto phi = SemilinearMap<TopOverMid>(F_, sk.phi_matrix);
        sk.phim = phi.apply(std::span<const FqnElem>(sk.mvec));
        auto minv = cyc_inverse(tops, sk.mvec);
        if (!minv) throw FormatError("secret key mvec is not invertible");
        sk.minv = std::move(*minv);
        sk.phi = std::make_shared<SemilinearMap<TopOverMid>>(phi);
        sk.phi_inv = std::make_shared<SemilinearMap<TopOverMid>>(phi.inverse());
        sk.code = std::make_shared<GabidulinCode>(F_, sk.g, p_.k);
    }

   private:
    void write_top(BitWriter& w, FqnElem x) const {
        w.write(x.lo.v, F_.mid_bits());
        w.write(x.hi.v, F_.mid_bits());
    }
    FqnElem read_top(BitReader& r) const {
        FqmElem lo{r.read(F_.mid_bits())};
        FqmElem hi{r.read(F_.mid_bits())};
        return {lo, hi};
    }

    SchemeParams p_;
    TowerField F_;
};

// ---- key and ciphertext files ----
// "RLK1" | tag | [tag 0: tower blob, u16 k] | payload
// "RLC1" | tag | [tag 0: tower blob, u16 k] | payload

namespace detail {

inline void append_header(std::vector<uint8_t>& out, const char* magic, const Scheme& s) {
    out.insert(out.end(), magic, magic + 4);
    out.push_back(s.params().tag);
    if (s.params().tag == 0) {
        auto tower = s.tower().serialize();
        out.insert(out.end(), tower.begin(), tower.end());
        out.push_back(uint8_t(s.params().k & 0xFF));
        out.push_back(uint8_t(s.params().k >> 8));
    }
}

inline Scheme parse_header(std::span<const uint8_t> bytes, const char* magic, size_t& offset) {
    if (bytes.size() < 5) throw FormatError("file too short");
    for (int i = 0; i < 4; ++i)
        if (bytes[i] != (uint8_t)magic[i]) throw FormatError("bad magic bytes");
    uint8_t tag = bytes[4];
    offset = 5;
    if (tag != 0) return Scheme(SchemeParams::from_tag(tag));
    if (bytes.size() < 9) throw FormatError("file too short");
    uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= uint32_t(bytes[5 + i]) << (8 * i);
    if (bytes.size() < 9 + size_t(len) + 2) throw FormatError("file too short");
    std::vector<uint8_t> blob(bytes.begin() + 5, bytes.begin() + 9 + len);
    TowerField tower = TowerField::deserialize(blob);
    unsigned k = unsigned(bytes[9 + len]) | (unsigned(bytes[9 + len + 1]) << 8);
    offset = 9 + size_t(len) + 2;
    SchemeParams p = SchemeParams::toy(tower.q(), tower.m(), k);
    return Scheme(std::move(p), std::move(tower));
}

}  // namespace detail

inline std::vector<uint8_t> public_key_file(const Scheme& s, const PublicKey& pk) {
    std::vector<uint8_t> out;
    detail::append_header(out, "RLK1", s);
    auto payload = s.serialize(pk);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

inline std::vector<uint8_t> secret_key_file(const Scheme& s, const SecretKey& sk) {
    std::vector<uint8_t> out;
    detail::append_header(out, "RLK1", s);
    auto payload = s.serialize(sk);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

inline std::vector<uint8_t> ciphertext_file(const Scheme& s, const Ciphertext& ct) {
    std::vector<uint8_t> out;
    detail::append_header(out, "RLC1", s);
    auto payload = s.serialize(ct);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

struct LoadedPublic {
    Scheme scheme;
    PublicKey pk;
};

struct LoadedSecret {
    Scheme scheme;
    SecretKey sk;
};

struct LoadedCiphertext {
    Scheme scheme;
    Ciphertext ct;
};

inline LoadedPublic load_public_key(std::span<const uint8_t> bytes) {
    size_t off = 0;
    Scheme s = detail::parse_header(bytes, "RLK1", off);
    PublicKey pk = s.parse_public(bytes.subspan(off));
    return {std::move(s), std::move(pk)};
}

inline LoadedSecret load_secret_key(std::span<const uint8_t> bytes) {
    size_t off = 0;
    Scheme s = detail::parse_header(bytes, "RLK1", off);
    SecretKey sk = s.parse_secret(bytes.subspan(off));
    return {std::move(s), std::move(sk)};
}

inline LoadedCiphertext load_ciphertext(std::span<const uint8_t> bytes) {
    size_t off = 0;
    Scheme s = detail::parse_header(bytes, "RLC1", off);
    Ciphertext ct = s.parse_ciphertext(bytes.subspan(off));
    return {std::move(s), std::move(ct)};
}

}  // namespace rlpc

#endif
