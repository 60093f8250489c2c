#pragma once

#include <cstdlib>
#include <optional>
#include <utility>
#include <vector>

#include "weilmot/errors.hpp"
#include "weilmot/ratpoly.hpp"
#include "weilmot/roots.hpp"

namespace weilmot {

/// Process-wide default for the factorization degree cap. WEILMOT_DEGREE_CAP
/// overrides the documented default of 8.
inline unsigned default_degree_cap() {
    static const unsigned cap = [] {
        if (const char* v = std::getenv("WEILMOT_DEGREE_CAP")) {
            long n = std::strtol(v, nullptr, 10);
            if (n >= 1 && n <= 64) return static_cast<unsigned>(n);
        }
        return 8u;
    }();
    return cap;
}

struct Factor {
    RatPoly poly;  // monic irreducible
    unsigned multiplicity;
};

namespace detail {

inline std::vector<Int> positive_divisors(Int n) {
    n = abs(n);
    std::vector<Int> divs;
    if (n == 0) return divs;
    Int d(1);
    for (; d * d <= n; ++d) {
        if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            divs.push_back(d);
            Int q = n / d;
            if (q != d) divs.push_back(q);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

inline bool next_combination(std::vector<int>& idx, int n) {
    const int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

inline double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace detail

/// Exact irreducible factorization over Q, for degrees up to the cap.
///
/// Candidate integer-coefficient divisors of the primitive part are generated
/// from subsets of the numerically located roots (every true factor is the
/// product of such a subset), screened against the Mahler coefficient bound,
/// and accepted only after exact division over Q verifies them; multiplicities
/// are recovered by exact repeated division. Factors come back monic, sorted
/// in the canonical (degree, coefficients) order.
inline std::vector<Factor> factor_rational(const RatPoly& f,
                                           unsigned degree_cap = default_degree_cap()) {
    if (f.is_zero()) throw Error(errc::division_by_zero, "cannot factor the zero polynomial");
    if (f.degree() > static_cast<int>(degree_cap))
        throw Error(errc::degree_cap_exceeded,
                    "degree " + std::to_string(f.degree()) + " exceeds cap " +
                        std::to_string(degree_cap));

    std::vector<Factor> out;
    RatPoly work = f.monic();

    // x^k factor
    unsigned tz = 0;
    while (!work.is_zero() && work[0] == 0) {
        work = work.exact_div(RatPoly::identity_x());
        ++tz;
    }
    if (tz > 0) out.push_back(Factor{RatPoly::identity_x(), tz});
    if (work.degree() < 1) {
        return out;
    }

    // squarefree radical carries one copy of every irreducible factor
    RatPoly radical = work;
    RatPoly g = poly_gcd(work, work.derivative());
    if (g.degree() > 0) radical = work.exact_div(g).monic();

    std::vector<RatPoly> irreducibles;
    if (radical.degree() == 1) {
        irreducibles.push_back(radical);
    } else if (radical.degree() >= 2) {
        auto [content, ps] = content_primitive(radical);
        (void)content;
        RatPoly P = from_int_poly(ps);  // primitive integer form, positive lead

        auto roots = find_roots(radical);
        std::vector<int> pool(roots.size());
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);

        std::vector<Int> lead_divs = detail::positive_divisors(ps.c.back());

        int k = 1;
        while (2 * k <= P.degree()) {
            const int n = static_cast<int>(pool.size());
            if (k > n) break;
            std::vector<int> comb(k);
            for (int i = 0; i < k; ++i) comb[i] = i;
            bool found = false;
            do {
                // monic polynomial over the chosen root subset
                std::vector<std::complex<double>> mc(k + 1, 0.0);
                mc[0] = 1.0;
                double mahler = 1.0;
                for (int i = 0; i < k; ++i) {
                    std::complex<double> r = roots[pool[comb[i]]].approx;
                    mahler *= std::max(1.0, std::abs(r));
                    for (int j = i + 1; j > 0; --j) mc[j] = mc[j - 1] - r * mc[j];
                    mc[0] *= -r;
                }
                // coefficients of a rational factor are real
                bool real_ok = true;
                for (int j = 0; j <= k && real_ok; ++j)
                    if (std::abs(mc[j].imag()) > 1e-4) real_ok = false;
                if (!real_ok) continue;

                for (const Int& lead : lead_divs) {
                    double ld = mpz_get_d(lead.get_mpz_t());
                    std::vector<Rat> cand(k + 1);
                    bool plausible = true;
                    for (int j = 0; j <= k && plausible; ++j) {
                        double v = ld * mc[j].real();  // mc is constant-first
                        double rounded = std::nearbyint(v);
                        if (std::abs(v - rounded) > 0.25) plausible = false;
                        if (std::abs(rounded) > 9e15) plausible = false;
                        // Mahler/Landau screen: |coeff| <= C(k, j)*lead*M, with slack
                        if (std::abs(rounded) > detail::binom(k, j) * ld * mahler * 1.01 + 2.0)
                            plausible = false;
                        if (plausible) cand[j] = Rat(rounded);
                    }
                    if (!plausible) continue;
                    RatPoly candidate(std::move(cand));
                    if (candidate.degree() != k) continue;
                    if (candidate.divides(P)) {
                        RatPoly mono = candidate.monic();
                        irreducibles.push_back(mono);
                        P = P.exact_div(candidate);
                        std::vector<int> keep;
                        for (int i = 0, ci = 0; i < n; ++i) {
                            if (ci < k && comb[ci] == i) {
                                ++ci;
                                continue;
                            }
                            keep.push_back(pool[i]);
                        }
                        pool = std::move(keep);
                        found = true;
                        break;
                    }
                }
            } while (!found && detail::next_combination(comb, n));
            if (!found) ++k;
        }
        if (P.degree() >= 1) irreducibles.push_back(P.monic());
    }

    // multiplicities from the original polynomial
    for (const RatPoly& u : irreducibles) {
        unsigned m = 0;
        RatPoly rem = work;
        while (true) {
            auto [q, r] = rem.divrem(u);
            if (!r.is_zero()) break;
            rem = q;
            ++m;
        }
        out.push_back(Factor{u, m});
    }
    std::sort(out.begin(), out.end(),
              [](const Factor& a, const Factor& b) { return a.poly < b.poly; });
    return out;
}

/// Galois orbit of an algebraic number: a monic irreducible polynomial over Q
/// with nonzero roots. Irreducibility is certified at construction.
class NumberOrbit {
public:
    explicit NumberOrbit(RatPoly f, unsigned degree_cap = default_degree_cap())
        : f_(f.monic()) {
        validate(degree_cap);
    }

    /// For factors already certified irreducible by factor_rational.
    static NumberOrbit trusted(RatPoly monic_irreducible) {
        NumberOrbit o;
        o.f_ = std::move(monic_irreducible);
        return o;
    }

    const RatPoly& poly() const { return f_; }
    unsigned degree() const { return static_cast<unsigned>(f_.degree()); }
    bool operator==(const NumberOrbit& o) const { return f_ == o.f_; }
    bool operator<(const NumberOrbit& o) const { return f_ < o.f_; }

private:
    NumberOrbit() = default;
    void validate(unsigned degree_cap) {
        if (f_.degree() < 1) throw ParseError("orbit polynomial must have degree >= 1");
        if (f_[0] == 0) throw ParseError("orbit polynomial must not vanish at 0");
        auto fs = factor_rational(f_, degree_cap);
        if (fs.size() != 1 || fs[0].multiplicity != 1)
            throw ParseError("orbit polynomial is reducible: " + f_.str());
    }
    RatPoly f_;
};

/// True when the orbit consists of algebraic integers.
inline bool is_algebraic_integer(const NumberOrbit& o) { return o.poly().is_integral(); }

/// One Lefschetz twist down: divides every root by q. Result is monic but not
/// necessarily integral.
inline RatPoly twist_down(const RatPoly& f, const Int& q) {
    return f.scale_roots(make_rat(Int(1), q));
}

inline RatPoly twist_up(const RatPoly& f, const Int& q) { return f.scale_roots(Rat(q)); }

/// Largest k such that twisting down k times stays integral, i.e. every root
/// is divisible by q^k as an algebraic integer.
inline unsigned q_divisibility_order(const NumberOrbit& o, const Int& q) {
    if (!is_algebraic_integer(o))
        throw Error(errc::not_integral, "q-divisibility needs an integral orbit: " + o.poly().str());
    unsigned k = 0;
    RatPoly t = twist_down(o.poly(), q);
    while (t.is_integral()) {
        ++k;
        t = twist_down(t, q);
    }
    return k;
}

/// Composed product: the orbits of all pairwise root products w*v, obtained
/// from Res_y(f(y), y^deg(g) * g(x/y)) and then factored.
inline std::vector<std::pair<NumberOrbit, unsigned>> composed_product(
    const RatPoly& f, const RatPoly& g, unsigned degree_cap = default_degree_cap()) {
    if (!f.is_monic() || !g.is_monic())
        throw ParseError("composed product needs monic inputs");
    if (f.degree() < 1 || g.degree() < 1 || f[0] == 0 || g[0] == 0)
        throw ParseError("composed product needs nonzero roots");
    const int df = f.degree(), dg = g.degree();
    if (df * dg > static_cast<int>(degree_cap))
        throw Error(errc::factorization_cap_exceeded,
                    "composed product degree " + std::to_string(df * dg) + " exceeds cap " +
                        std::to_string(degree_cap));
    // y-coefficients of y^dg * g(x/y): the y^(dg-j) coefficient is g_j x^j
    std::vector<RatPoly> gy(dg + 1);
    for (int i = 0; i <= dg; ++i) gy[i] = RatPoly::monomial(dg - i, g[dg - i]);
    RatPoly h = sylvester_resultant(f, gy).monic();

    std::vector<std::pair<NumberOrbit, unsigned>> out;
    for (auto& fac : factor_rational(h, degree_cap))
        out.emplace_back(NumberOrbit::trusted(fac.poly), fac.multiplicity);
    return out;
}

/// Weil-weight classification: the weight j with |w|^2 = q^j for every
/// complex root, or nullopt for mixed weights. Numeric and advisory; the
/// roots themselves are certified to residual < 1e-12.
inline std::optional<long> weight_check(const RatPoly& f, const PrimePower& q,
                                        const Rat& tol = make_rat(1, 1000000)) {
    if (!f.is_monic() || f.degree() < 1)
        throw ParseError("weight check needs a monic polynomial of degree >= 1");
    RatPoly radical = f;
    RatPoly g = poly_gcd(f, f.derivative());
    if (g.degree() > 0) radical = f.exact_div(g).monic();
    auto roots = find_roots(radical);
    std::optional<long> weight;
    Rat qr(q.as_int());
    for (const auto& r : roots) {
        Rat a2 = r.abs2();
        if (a2 == 0) return std::nullopt;
        double lw = std::log(mpq_get_d(a2.get_mpq_t())) / std::log(static_cast<double>(q.q));
        long j = std::lround(lw);
        Rat qj = j >= 0 ? Rat(pow_int(q.as_int(), j)) : make_rat(Int(1), pow_int(q.as_int(), -j));
        if (abs(a2 - qj) >= tol * qj) return std::nullopt;
        if (weight && *weight != j) return std::nullopt;
        weight = j;
    }
    return weight;
}

inline std::optional<long> weight_check(const NumberOrbit& o, const PrimePower& q,
                                        const Rat& tol = make_rat(1, 1000000)) {
    return weight_check(o.poly(), q, tol);
}

}  // namespace weilmot
