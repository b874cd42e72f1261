#ifndef RLPC_ESTIMATOR_HPP
#define RLPC_ESTIMATOR_HPP

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "rlpc/analysis.hpp"

namespace rlpc {

// Exact log2 of a positive big integer (53-bit mantissa accuracy).
inline double log2_big(const BigInt& x) {
    if (x <= 0) throw ParameterError("log2 of non-positive value");
    size_t b = boost::multiprecision::msb(x);
    if (b <= 52) return std::log2(x.convert_to<double>());
    BigInt top = x >> (b - 52);
    return double(b - 52) + std::log2(top.convert_to<double>());
}

inline double log2_rat(const BigRat& x) {
    return log2_big(boost::multiprecision::numerator(x)) - log2_big(boost::multiprecision::denominator(x));
}

inline BigInt binom(int64_t n, int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    BigInt r = 1;
    for (int64_t i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

inline int64_t ceil_div(int64_t a, int64_t b) {
    int64_t q = a / b, r = a % b;
    return q + ((r != 0 && ((r < 0) == (b < 0))) ? 1 : 0);
}

// An RSD instance: syndrome decoding of an [n, k] code over F_{q^m} with an
// error of rank weight t over F_q.
struct RsdInstance {
    uint32_t q;
    int64_t m, n, k, t;

    RsdInstance(uint32_t q_, int64_t m_, int64_t n_, int64_t k_, int64_t t_)
        : q(q_), m(m_), n(n_), k(k_), t(t_) {
        if (k <= 0 || k >= n) throw ParameterError("require 0 < k < n");
        if (t < 1) throw ParameterError("require t >= 1");
        if (m < 1 || q < 2 || (q & (q - 1)) != 0) throw ParameterError("bad RSD field parameters");
    }

    std::string label() const {
        std::ostringstream os;
        os << "(" << q << "," << m << "," << n << "," << k << "," << t << ")";
        return os.str();
    }
};

struct AttackEntry {
    std::string family;    // "combinatorial" | "algebraic"
    std::string name;
    std::string instance;  // RSD parameter label
    bool applicable = false;
    double log2_cost = 0.0;
    std::string detail;
};

namespace detail {

inline double qexp_cost(const BigInt& poly, int64_t exponent, uint32_t q) {
    double lq = std::log2((double)q);
    if (exponent >= 0) {
        if (exponent > 2000000) throw ParameterError("exponent too large");
        return log2_big(poly * boost::multiprecision::pow(BigInt(q), (unsigned)exponent));
    }
    return log2_big(poly) + double(exponent) * lq;
}

inline BigInt cube(int64_t x) { return BigInt(x) * x * x; }

}  // namespace detail

// The three combinatorial RSD attack families: basis enumeration (OJ),
// support trapping (GRS) and its specialization refinement (AGHT). Reported
// values include the cubic polynomial factors with constant 1.
inline std::vector<AttackEntry> combinatorial_costs(const RsdInstance& in) {
    using detail::cube;
    const auto [q, m, n, k, t] = std::tie(in.q, in.m, in.n, in.k, in.t);
    std::vector<AttackEntry> out;

    double oj1 = detail::qexp_cost(cube(m) * cube(t), (t - 1) * (k + 1), q);
    double oj2 = detail::qexp_cost(cube(k + t) * cube(t), (t - 1) * (m - t), q);
    out.push_back({"combinatorial", "OJ enumeration", in.label(), true, std::min(oj1, oj2),
                   oj1 <= oj2 ? "basis variant" : "coordinate variant"});

    int64_t e_grs = std::min(t * ceil_div(m * k, n), (t - 1) * ceil_div(m * (k + 1), n));
    out.push_back({"combinatorial", "GRS support", in.label(), true,
                   detail::qexp_cost(cube(n - k) * cube(m), e_grs, q), ""});

    int64_t e_aght = t * ceil_div(m * (k + 1), n) - m;
    out.push_back({"combinatorial", "AGHT support", in.label(), true,
                   detail::qexp_cost(cube(n - k) * cube(m), e_aght, q), ""});
    return out;
}

// The algebraic families: the GRS quadratic modeling, the GC kernel attack,
// and the MaxMinors / support-minors systems in their overdetermined and
// underdetermined (hybrid) regimes, with omega = 2.8.
inline std::vector<AttackEntry> algebraic_costs(const RsdInstance& in) {
    using detail::cube;
    const auto [q, m, n, k, t] = std::tie(in.q, in.m, in.n, in.k, in.t);
    constexpr double omega = 2.8;
    std::vector<AttackEntry> out;

    {
        int64_t c = ceil_div((t + 1) * (k + 1) - (n + 1), t);
        AttackEntry e{"algebraic", "GRS modeling", in.label(), c <= k, 0.0, ""};
        if (e.applicable) {
            e.log2_cost = detail::qexp_cost(cube(k) * cube(t), t * c, q);
            e.detail = "shift " + std::to_string(c);
        } else {
            e.detail = "condition fails";
        }
        out.push_back(e);
    }

    out.push_back({"algebraic", "GC kernel", in.label(), true,
                   detail::qexp_cost(cube(k) * cube(m), t * ceil_div(k * m, n), q), ""});

    BigInt lhs = BigInt(m) * binom(n - k - 1, t);
    BigInt rhs = binom(n, t) - 1;
    bool overdet = lhs >= rhs;

    {
        AttackEntry e{"algebraic", "MaxMinors overdetermined", in.label(), overdet, 0.0, ""};
        if (overdet) {
            int64_t p = 0;
            for (int64_t cand = std::min<int64_t>(n, n - k - 1 - t); cand >= 0; --cand) {
                if (BigInt(m) * binom(n - cand - k - 1, t) >= binom(n - cand, t) - 1) {
                    p = cand;
                    break;
                }
            }
            BigInt c1 = BigInt(m) * binom(n - p - k - 1, t);
            BigInt c2 = binom(n - p, t);
            e.log2_cost = log2_big(c1) + (omega - 1.0) * log2_big(c2);
            e.detail = "p=" + std::to_string(p);
        } else {
            e.detail = "underdetermined";
        }
        out.push_back(e);
    }

    {
        AttackEntry e{"algebraic", "SupportMinors overdetermined", in.label(), overdet, 0.0, ""};
        if (overdet) {
            BigInt num = boost::multiprecision::pow(BigInt((m + n) * t), (unsigned)t);
            BigInt den = 1;
            for (int64_t i = 2; i <= t; ++i) den *= i;
            e.log2_cost = omega * (log2_big(num) - log2_big(den));
        } else {
            e.detail = "underdetermined";
        }
        out.push_back(e);
    }

    {
        AttackEntry e{"algebraic", "MaxMinors hybrid", in.label(), !overdet, 0.0, ""};
        if (!overdet) {
            if (lhs == 0) {
                e.applicable = false;
                e.detail = "degenerate system";
            } else {
                int64_t a = 0;
                while (BigInt(m) * binom(n - k - 1, t) < binom(n - a, t) - 1) ++a;
                BigInt c2 = binom(n - a, t);
                e.log2_cost = double(a * t) * std::log2((double)q) + log2_big(lhs) +
                              (c2 > 0 ? (omega - 1.0) * log2_big(c2) : 0.0);
                e.detail = "a=" + std::to_string(a);
            }
        } else {
            e.detail = "overdetermined";
        }
        out.push_back(e);
    }

    {
        AttackEntry e{"algebraic", "SupportMinors underdetermined", in.label(), !overdet, 0.0, ""};
        if (!overdet) {
            BigInt num = boost::multiprecision::pow(BigInt((m + n) * t), (unsigned)(t + 1));
            BigInt den = 1;
            for (int64_t i = 2; i <= t + 1; ++i) den *= i;
            e.log2_cost = omega * (log2_big(num) - log2_big(den));
        } else {
            e.detail = "overdetermined";
        }
        out.push_back(e);
    }
    return out;
}

struct StructuralCounts {
    double n_g = 0, n_mbar = 0, n_phi = 0, n_x = 0;  // log2
};

struct AttackReport {
    SchemeParams params;
    std::vector<AttackEntry> entries;
    double min_log2 = 0.0;
    StructuralCounts counts;
    std::vector<std::string> warnings;
};

inline size_t keysize_bytes(const SchemeParams& p) {
    unsigned e = (unsigned)std::log2((double)p.q);
    return (size_t(p.n) * p.n * e + 7) / 8;
}

// Evaluates every attack row on both RSD conversions of the scheme: the
// [n, k] view over F_{q^n} and the expanded [n, 2k-n] view over F_{q^m}.
// Structural key-space counts are listed alongside, not folded into the
// minimum attack cost.
inline AttackReport scheme_security(const SchemeParams& p) {
    AttackReport r;
    r.params = p;
    RsdInstance top(p.q, p.n, p.n, p.k, p.t);
    RsdInstance mid(p.q, p.m, p.n, 2 * int64_t(p.k) - p.n, p.t);
    for (const auto& in : {top, mid}) {
        auto c = combinatorial_costs(in);
        auto a = algebraic_costs(in);
        r.entries.insert(r.entries.end(), c.begin(), c.end());
        r.entries.insert(r.entries.end(), a.begin(), a.end());
    }
    bool any = false;
    for (auto& e : r.entries) {
        if (!e.applicable) continue;
        if (!any || e.log2_cost < r.min_log2) r.min_log2 = e.log2_cost;
        any = true;
    }

    unsigned e = (unsigned)std::log2((double)p.q);
    r.counts.n_g = log2_big(count_normal_elements(p.q, p.n));
    r.counts.n_mbar = log2_rat(count_equiv_classes(p.q, p.m));
    r.counts.n_phi = log2_big(secret_phi_count(p.q, p.m));
    r.counts.n_x = double(p.m) * double(p.k - p.m) * double(e);

    int level = p.tag == 0x01 ? 128 : p.tag == 0x02 ? 192 : p.tag == 0x03 ? 256 : 0;
    if (level) {
        if (r.counts.n_g < level)
            r.warnings.push_back("N(g) is below the target level; generator enumeration is cheaper than generic attacks");
        if (r.counts.n_phi < level)
            r.warnings.push_back("N(phi) is below the target level; transformation enumeration is cheaper than generic attacks");
        if (any && r.min_log2 < level)
            r.warnings.push_back("minimum attack cost falls below the target level");
    }
    return r;
}

// Round half to even at two decimals, as printed in reports.
inline double round2(double x) { return std::nearbyint(x * 100.0) / 100.0; }

inline std::string format_report_text(const AttackReport& r) {
    std::ostringstream os;
    os << "parameter set " << r.params.name << "  (q=" << r.params.q << ", m=" << r.params.m
       << ", n=" << r.params.n << ", k=" << r.params.k << ", t=" << r.params.t << ")\n";
    os << "public key: " << keysize_bytes(r.params) << " bytes\n\n";
    os << std::left << std::setw(30) << "attack" << std::setw(18) << "instance" << std::setw(14)
       << "log2 cost" << "note\n";
    for (auto& e : r.entries) {
        os << std::left << std::setw(30) << (e.family.substr(0, 4) + ": " + e.name) << std::setw(18)
           << e.instance;
        if (e.applicable)
            os << std::setw(14) << std::fixed << std::setprecision(2) << round2(e.log2_cost);
        else
            os << std::setw(14) << "n/a";
        os << e.detail << "\n";
    }
    os << "\nminimum attack cost: " << std::fixed << std::setprecision(2) << round2(r.min_log2)
       << " bits\n";
    os << "key-space counts (log2): N(g)=" << std::setprecision(2) << round2(r.counts.n_g)
       << "  N(mbar)=" << round2(r.counts.n_mbar) << "  N(phi)=" << round2(r.counts.n_phi)
       << "  N(x)=" << round2(r.counts.n_x) << "\n";
    for (auto& w : r.warnings) os << "warning: " << w << "\n";
    return os.str();
}

inline std::string format_report_csv(const AttackReport& r) {
    std::ostringstream os;
    os << "attack,instance,applicable,log2_cost,detail\n";
    for (auto& e : r.entries) {
        os << e.name << "," << e.instance << "," << (e.applicable ? "yes" : "no") << ",";
        if (e.applicable) os << std::fixed << std::setprecision(2) << round2(e.log2_cost);
        os << "," << e.detail << "\n";
    }
    return os.str();
}

}  // namespace rlpc

#endif
