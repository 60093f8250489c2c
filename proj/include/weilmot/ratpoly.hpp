#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "weilmot/errors.hpp"
#include "weilmot/rational.hpp"

namespace weilmot {

/// Dense univariate polynomial over Q, constant term first.
/// The zero polynomial has an empty coefficient vector and degree -1.
class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    RatPoly(std::initializer_list<long> coeffs) {
        c_.reserve(coeffs.size());
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static RatPoly zero() { return RatPoly(); }
    static RatPoly constant(const Rat& a) { return RatPoly(std::vector<Rat>{a}); }
    static RatPoly identity_x() { return RatPoly{0, 1}; }
    /// x - a
    static RatPoly x_minus(const Rat& a) { return RatPoly(std::vector<Rat>{-a, Rat(1)}); }
    static RatPoly monomial(std::size_t k, const Rat& a = Rat(1)) {
        std::vector<Rat> c(k + 1, Rat(0));
        c[k] = a;
        return RatPoly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rat>& coeffs() const { return c_; }
    const Rat& operator[](std::size_t i) const { return c_[i]; }
    Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }
    const Rat& lead() const { return c_.back(); }

    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    bool is_integral() const {
        return std::all_of(c_.begin(), c_.end(), [](const Rat& a) { return is_integer(a); });
    }

    bool operator==(const RatPoly& o) const { return c_ == o.c_; }
    bool operator!=(const RatPoly& o) const { return c_ != o.c_; }

    RatPoly operator-() const {
        std::vector<Rat> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
        return RatPoly(std::move(r));
    }

    friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
        std::vector<Rat> r(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return RatPoly(std::move(r));
    }
    friend RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + (-b); }

    friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
        if (a.is_zero() || b.is_zero()) return RatPoly();
        std::vector<Rat> r(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return RatPoly(std::move(r));
    }

    friend RatPoly operator*(const Rat& s, const RatPoly& a) {
        if (s == 0) return RatPoly();
        std::vector<Rat> r(a.c_.size());
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = s * a.c_[i];
        return RatPoly(std::move(r));
    }

    /// Euclidean division: *this = q*d + r with deg r < deg d.
    std::pair<RatPoly, RatPoly> divrem(const RatPoly& d) const {
        if (d.is_zero()) throw Error(errc::division_by_zero, "polynomial division by zero");
        RatPoly r = *this;
        std::vector<Rat> q;
        int dd = d.degree();
        if (r.degree() >= dd) q.assign(r.degree() - dd + 1, Rat(0));
        while (!r.is_zero() && r.degree() >= dd) {
            Rat f = r.lead() / d.lead();
            int shift = r.degree() - dd;
            q[shift] = f;
            // r -= f * x^shift * d, dropping the cancelled lead directly
            std::vector<Rat> rc = r.c_;
            rc.pop_back();
            for (int i = 0; i < dd; ++i) rc[shift + i] -= f * d.c_[i];
            r = RatPoly(std::move(rc));
        }
        return {RatPoly(std::move(q)), r};
    }

    /// Division known to be exact; throws if a remainder appears.
    RatPoly exact_div(const RatPoly& d) const {
        auto [q, r] = divrem(d);
        if (!r.is_zero()) throw Error(errc::division_by_zero, "inexact polynomial division");
        return q;
    }

    bool divides(const RatPoly& f) const { return f.divrem(*this).second.is_zero(); }

    RatPoly monic() const {
        if (is_zero()) return *this;
        return (Rat(1) / lead()) * (*this);
    }

    RatPoly derivative() const {
        if (c_.size() <= 1) return RatPoly();
        std::vector<Rat> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = Rat(static_cast<long>(i)) * c_[i];
        return RatPoly(std::move(r));
    }

    Rat eval(const Rat& x) const {
        Rat acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    /// t^deg * f(1/t): coefficient vector reversed.
    RatPoly reversed() const {
        std::vector<Rat> r(c_.rbegin(), c_.rend());
        return RatPoly(std::move(r));
    }

    /// Polynomial whose roots are c times the roots: c^deg * f(x/c).
    RatPoly scale_roots(const Rat& c) const {
        if (c == 0) throw Error(errc::division_by_zero, "root scaling by zero");
        std::vector<Rat> r(c_.size());
        // coefficient of x^i picks up c^(deg-i)
        Rat f(1);
        for (std::size_t i = c_.size(); i-- > 0;) {
            r[i] = c_[i] * f;
            f *= c;
        }
        return RatPoly(std::move(r));
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = c_.size(); i-- > 0;) {
            const Rat& a = c_[i];
            if (a == 0) continue;
            Rat mag = abs(a);
            if (first) {
                if (a < 0) os << "-";
                first = false;
            } else {
                os << (a < 0 ? " - " : " + ");
            }
            bool unit = (mag == 1);
            if (i == 0 || !unit) os << mag.get_str();
            if (i > 0) {
                if (!unit) os << "*";
                os << var;
                if (i > 1) os << "^" << i;
            }
        }
        return os.str();
    }

    /// Total ordering: by degree, then coefficients from the constant term up.
    /// Used for canonical orbit ordering and deterministic serialization.
    static int compare(const RatPoly& a, const RatPoly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            int c = cmp(a.c_[i], b.c_[i]);
            if (c != 0) return c;
        }
        return 0;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rat> c_;
};

inline bool operator<(const RatPoly& a, const RatPoly& b) { return RatPoly::compare(a, b) < 0; }

/// gcd normalized monic (or zero).
inline RatPoly poly_gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        RatPoly r = a.divrem(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Content/primitive-part split: f = content * primitive, where primitive has
/// coprime integer coefficients and positive lead.
struct IntPoly {
    std::vector<Int> c;  // constant first, trimmed
    int degree() const { return static_cast<int>(c.size()) - 1; }
};

inline std::pair<Rat, IntPoly> content_primitive(const RatPoly& f) {
    if (f.is_zero()) return {Rat(0), IntPoly{}};
    Int den_lcm(1);
    for (const Rat& a : f.coeffs()) {
        Int d = a.get_den();
        den_lcm = lcm(den_lcm, d);
    }
    std::vector<Int> ic(f.coeffs().size());
    Int g(0);
    for (std::size_t i = 0; i < ic.size(); ++i) {
        Rat scaled = f[i] * Rat(den_lcm);
        ic[i] = scaled.get_num();  // denominator is 1 by construction
        g = gcd(g, ic[i]);
    }
    if (ic.back() < 0) g = -g;
    for (auto& v : ic) v /= g;
    return {make_rat(g, den_lcm), IntPoly{std::move(ic)}};
}

inline RatPoly from_int_poly(const IntPoly& f) {
    std::vector<Rat> c(f.c.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = Rat(f.c[i]);
    return RatPoly(std::move(c));
}

/// Power sums p_1..p_n of the roots of a monic polynomial, by Newton's
/// identities on the coefficients. Exact; p_k for k > deg uses the linear
/// recurrence with the elementary symmetric functions.
inline std::vector<Rat> power_sums(const RatPoly& f, unsigned n_max) {
    if (!f.is_monic() || f.degree() < 1)
        throw Error(errc::not_integral, "power sums need a monic polynomial of degree >= 1");
    const unsigned d = static_cast<unsigned>(f.degree());
    // e_i = (-1)^i * coeff of x^(d-i)
    std::vector<Rat> e(d + 1);
    e[0] = 1;
    for (unsigned i = 1; i <= d; ++i) e[i] = (i % 2 ? -f[d - i] : f[d - i]);
    std::vector<Rat> p(n_max + 1);
    p[0] = Rat(static_cast<long>(d));
    for (unsigned k = 1; k <= n_max; ++k) {
        Rat acc(0);
        unsigned m = std::min(k - 1, d);
        for (unsigned i = 1; i <= m; ++i) {
            Rat term = e[i] * p[k - i];
            acc += (i % 2 ? term : -term);
        }
        if (k <= d) {
            Rat ke = Rat(static_cast<long>(k)) * e[k];
            acc += (k % 2 ? ke : -ke);
        }
        p[k] = acc;
    }
    return std::vector<Rat>(p.begin() + 1, p.end());
}

/// Inverse of power_sums: the monic degree-d polynomial with the given first
/// d power sums.
inline RatPoly newton_recover(const std::vector<Rat>& p) {
    const unsigned d = static_cast<unsigned>(p.size());
    if (d == 0) throw Error(errc::insufficient_data, "need at least one power sum");
    std::vector<Rat> e(d + 1);
    e[0] = 1;
    for (unsigned k = 1; k <= d; ++k) {
        Rat acc(0);
        for (unsigned i = 1; i <= k; ++i) {
            Rat term = e[k - i] * p[i - 1];
            acc += (i % 2 ? term : -term);
        }
        e[k] = acc / Rat(static_cast<long>(k));
    }
    std::vector<Rat> c(d + 1);
    c[d] = 1;
    for (unsigned i = 1; i <= d; ++i) c[d - i] = (i % 2 ? -e[i] : e[i]);
    return RatPoly(std::move(c));
}

/// Resultant with respect to y of f(y) and G(x,y), where G's y-coefficients
/// are given as polynomials in x. Fraction-free Bareiss elimination on the
/// Sylvester matrix over Q[x].
inline RatPoly sylvester_resultant(const RatPoly& f, const std::vector<RatPoly>& g_ycoeffs) {
    const int df = f.degree();
    const int dg = static_cast<int>(g_ycoeffs.size()) - 1;
    if (df < 1 || dg < 1) throw Error(errc::insufficient_data, "resultant needs positive degrees");
    const int n = df + dg;
    std::vector<std::vector<RatPoly>> m(n, std::vector<RatPoly>(n, RatPoly()));
    // dg rows of f's coefficients (constants), highest first
    for (int r = 0; r < dg; ++r)
        for (int i = 0; i <= df; ++i) m[r][r + i] = RatPoly::constant(f[df - i]);
    // df rows of G's y-coefficients (polynomials in x), highest y-power first
    for (int r = 0; r < df; ++r)
        for (int i = 0; i <= dg; ++i) m[dg + r][r + i] = g_ycoeffs[dg - i];

    // Bareiss: division by the previous pivot is exact over the domain Q[x].
    RatPoly prev = RatPoly::constant(Rat(1));
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k].is_zero()) {
            int swap_row = -1;
            for (int r = k + 1; r < n; ++r)
                if (!m[r][k].is_zero()) {
                    swap_row = r;
                    break;
                }
            if (swap_row < 0) return RatPoly();  // singular: resultant is 0
            std::swap(m[k], m[swap_row]);
            for (auto& cell : m[k]) cell = -cell;  // row swap flips the sign
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                RatPoly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = num.exact_div(prev);
            }
            m[i][k] = RatPoly();
        }
        prev = m[k][k];
    }
    return m[n - 1][n - 1];
}

}  // namespace weilmot
