#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "weilmot/errors.hpp"

namespace weilmot {

using Int = mpz_class;
using Rat = mpq_class;

/// Canonicalized rational from a numerator/denominator pair.
inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw Error(errc::division_by_zero, "rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long num, long den = 1) { return make_rat(Int(num), Int(den)); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
    Rat r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()), e);
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()), e);
    return r;
}

/// Largest k with d^k | n (n != 0, d > 1).
inline unsigned valuation(Int n, const Int& d) {
    unsigned k = 0;
    n = abs(n);
    if (n == 0) throw Error(errc::division_by_zero, "valuation of zero");
    while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
        n /= d;
        ++k;
    }
    return k;
}

/// Parses "n" or "n/d" into an exact rational.
inline Rat parse_rat(const std::string& s) {
    auto bad = [&] { return ParseError("malformed rational '" + s + "'"); };
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            Int n(s);
            return Rat(n);
        }
        Int n(s.substr(0, slash));
        Int d(s.substr(slash + 1));
        if (d == 0) throw bad();
        return make_rat(n, d);
    } catch (const std::invalid_argument&) {
        throw bad();
    }
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

/// Deterministic Miller-Rabin, valid for all n < 3,215,031,751 (covers the
/// 31-bit modulus range) with witness set {2, 3, 5, 7}.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    auto mulmod = [&](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
    };
    auto powmod = [&](std::uint64_t a, std::uint64_t e) -> std::uint64_t {
        std::uint64_t r = 1;
        a %= n;
        while (e) {
            if (e & 1) r = mulmod(r, a);
            a = mulmod(a, a);
            e >>= 1;
        }
        return r;
    };
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull}) {
        std::uint64_t x = powmod(a, d);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mulmod(x, x);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// A prime power q = p^f with p < 2^31. The base of everything.
struct PrimePower {
    std::uint64_t q = 0;
    std::uint32_t p = 0;
    std::uint32_t f = 0;

    static PrimePower from(std::uint64_t q) {
        if (q < 2) throw Error(errc::not_prime, "q must be >= 2");
        // smallest prime factor by trial division; q <= 2^63 keeps this cheap
        std::uint64_t p = 0;
        if (q % 2 == 0) {
            p = 2;
        } else {
            for (std::uint64_t d = 3; d * d <= q; d += 2) {
                if (q % d == 0) {
                    p = d;
                    break;
                }
            }
            if (p == 0) p = q;  // q itself prime
        }
        if (p >= (1ull << 31)) throw Error(errc::not_prime, "prime base exceeds 2^31");
        if (!is_prime_u64(p)) throw Error(errc::not_prime, std::to_string(p) + " is not prime");
        std::uint64_t m = q;
        std::uint32_t f = 0;
        while (m % p == 0) {
            m /= p;
            ++f;
        }
        if (m != 1) throw Error(errc::not_prime, std::to_string(q) + " is not a prime power");
        return PrimePower{q, static_cast<std::uint32_t>(p), f};
    }

    Int as_int() const { return Int(static_cast<unsigned long>(q)); }

    bool operator==(const PrimePower& o) const { return q == o.q; }
    bool operator!=(const PrimePower& o) const { return q != o.q; }
};

}  // namespace weilmot
