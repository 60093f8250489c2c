#pragma once

#include <optional>
#include <vector>

#include "weilmot/algebraic.hpp"
#include "weilmot/errors.hpp"
#include "weilmot/motive.hpp"
#include "weilmot/ratpoly.hpp"
#include "weilmot/variety.hpp"

namespace weilmot {

/// Rational zeta function num(t)/den(t), both with constant term 1 and
/// coprime. Counts produce integer coefficients; general virtual motives may
/// carry rational ones.
struct RationalZeta {
    RatPoly num = RatPoly::constant(Rat(1));
    RatPoly den = RatPoly::constant(Rat(1));

    static RationalZeta make(RatPoly num, RatPoly den) {
        if (num.is_zero() || den.is_zero())
            throw Error(errc::no_rational_fit, "zeta must be a nonzero rational function");
        RatPoly g = poly_gcd(num, den);
        if (g.degree() > 0) {
            num = num.exact_div(g);
            den = den.exact_div(g);
        }
        if (num[0] == 0 || den[0] == 0)
            throw Error(errc::no_rational_fit, "zeta must have nonzero constant terms");
        num = (Rat(1) / num[0]) * num;
        den = (Rat(1) / den[0]) * den;
        return RationalZeta{std::move(num), std::move(den)};
    }

    bool operator==(const RationalZeta& o) const { return num == o.num && den == o.den; }

    /// Power series coefficients of num/den up to the given order.
    std::vector<Rat> expand(unsigned order) const {
        std::vector<Rat> s(order + 1, Rat(0));
        for (unsigned k = 0; k <= order; ++k) {
            Rat acc = num.coeff(k);
            for (unsigned j = 1; j <= k; ++j) acc -= den.coeff(j) * s[k - j];
            s[k] = acc;  // den[0] == 1
        }
        return s;
    }
};

/// Z(M, t) = prod over orbits of det(1 - F t)^(-mult): reversed orbit
/// polynomials, negative multiplicities in the numerator.
inline RationalZeta zeta_of_motive(const VirtualMotive& m) {
    RatPoly num = RatPoly::constant(Rat(1));
    RatPoly den = RatPoly::constant(Rat(1));
    for (const auto& [orbit, mult] : m.terms()) {
        RatPoly rev = orbit.poly().reversed();  // constant term 1 since the orbit is monic
        for (long i = 0; i < (mult > 0 ? mult : -mult); ++i) {
            if (mult > 0)
                den = den * rev;
            else
                num = num * rev;
        }
    }
    return RationalZeta::make(std::move(num), std::move(den));
}

/// Exact coefficients of exp(sum N_n t^n / n) up to the sequence length.
inline std::vector<Rat> series_from_counts(const CountSequence& counts) {
    const unsigned order = counts.length();
    std::vector<Rat> z(order + 1, Rat(0));
    z[0] = 1;
    for (unsigned k = 1; k <= order; ++k) {
        Rat acc(0);
        for (unsigned j = 1; j <= k; ++j) acc += Rat(counts.at(j)) * z[k - j];
        z[k] = acc / Rat(static_cast<long>(k));
    }
    return z;
}

namespace detail {

/// Particular solution of the augmented system (free variables zeroed), or
/// nullopt when inconsistent. Rows are denominator-cleared to integers and
/// eliminated fraction-free (Bareiss); back-substitution is exact rational.
inline std::optional<std::vector<Rat>> solve_exact(const std::vector<std::vector<Rat>>& aug,
                                                   unsigned ncols) {
    const unsigned rows = static_cast<unsigned>(aug.size());
    std::vector<std::vector<Int>> m(rows);
    for (unsigned r = 0; r < rows; ++r) {
        Int den_lcm(1);
        for (const Rat& v : aug[r]) den_lcm = lcm(den_lcm, Int(v.get_den()));
        m[r].reserve(aug[r].size());
        for (const Rat& v : aug[r]) {
            Rat scaled = v * Rat(den_lcm);
            m[r].push_back(scaled.get_num());
        }
    }

    std::vector<int> pivot_col(rows, -1);
    Int prev(1);
    unsigned rank = 0;
    for (unsigned col = 0; col < ncols && rank < rows; ++col) {
        unsigned sel = rank;
        while (sel < rows && m[sel][col] == 0) ++sel;
        if (sel == rows) continue;  // free column
        std::swap(m[rank], m[sel]);
        for (unsigned r = rank + 1; r < rows; ++r) {
            for (unsigned c = col + 1; c <= ncols; ++c) {
                Int num = m[r][c] * m[rank][col] - m[r][col] * m[rank][c];
                // exact by the Bareiss invariant; guard it anyway
                if (!mpz_divisible_p(num.get_mpz_t(), prev.get_mpz_t()))
                    throw Error(errc::no_rational_fit, "fraction-free elimination invariant broken");
                m[r][c] = num / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        pivot_col[rank] = static_cast<int>(col);
        ++rank;
    }
    for (unsigned r = rank; r < rows; ++r)
        if (m[r][ncols] != 0) return std::nullopt;  // 0 = nonzero

    std::vector<Rat> x(ncols, Rat(0));
    for (unsigned r = rank; r-- > 0;) {
        int col = pivot_col[r];
        Rat acc = Rat(m[r][ncols]);
        for (unsigned c = col + 1; c < ncols; ++c) acc -= Rat(m[r][c]) * x[c];
        x[col] = acc / Rat(m[r][col]);
    }
    return x;
}

}  // namespace detail

/// Reconstructs the unique rational function with numerator and denominator
/// degrees <= max_deg matching the series: exact Hankel/Toeplitz solve for
/// ascending candidate degrees, each candidate verified against every
/// remaining series term, degrees minimized by gcd reduction.
///
/// series holds coefficients from order 0; series[0] must be 1.
inline RationalZeta fit_rational(const std::vector<Rat>& series, unsigned max_deg) {
    if (series.size() < 2 * static_cast<std::size_t>(max_deg) + 2)
        throw Error(errc::insufficient_data,
                    "need " + std::to_string(2 * max_deg + 2) + " series coefficients, have " +
                        std::to_string(series.size()));
    if (series.empty() || series[0] != 1)
        throw Error(errc::no_rational_fit, "zeta series must start at 1");
    const unsigned order_max = static_cast<unsigned>(series.size()) - 1;

    for (unsigned D = 0; D <= max_deg; ++D) {
        // unknowns Q_1..Q_D with Q_0 = 1; every available coefficient beyond
        // t^D contributes an equation sum_i Q_i z_(k-i) = 0
        std::vector<std::vector<Rat>> aug;
        for (unsigned k = D + 1; k <= order_max; ++k) {
            std::vector<Rat> row(D + 1, Rat(0));
            for (unsigned i = 1; i <= D; ++i) row[i - 1] = k >= i ? series[k - i] : Rat(0);
            row[D] = -series[k];
            aug.push_back(std::move(row));
        }
        auto sol = detail::solve_exact(aug, D);
        if (!sol) continue;
        std::vector<Rat> qc(D + 1, Rat(0));
        qc[0] = 1;
        for (unsigned i = 1; i <= D; ++i) qc[i] = (*sol)[i - 1];
        RatPoly den{std::vector<Rat>(qc)};
        // numerator = den * series, truncated; the solve guarantees the tail
        // vanishes through order_max
        std::vector<Rat> pc(D + 1, Rat(0));
        for (unsigned k = 0; k <= D; ++k) {
            Rat acc(0);
            for (unsigned i = 0; i <= std::min(k, D); ++i) acc += qc[i] * series[k - i];
            pc[k] = acc;
        }
        RatPoly num{std::vector<Rat>(pc)};
        if (num.is_zero()) continue;
        return RationalZeta::make(std::move(num), std::move(den));
    }
    throw Error(errc::no_rational_fit,
                "no rational function of degree <= " + std::to_string(max_deg) +
                    " matches the series");
}

/// Automatic degree selection: smallest degree whose fit verifies against the
/// whole series with at least three surplus coefficients beyond the solve
/// window (the stabilization rule).
inline RationalZeta fit_rational_auto(const std::vector<Rat>& series) {
    if (series.size() < 5) throw Error(errc::insufficient_data, "need at least 5 coefficients");
    unsigned order_max = static_cast<unsigned>(series.size()) - 1;
    // largest degree leaving a 3-term surplus beyond the solve window
    unsigned d_cap = (order_max - 4) / 2;
    try {
        return fit_rational(series, d_cap);
    } catch (const Error& e) {
        if (e.code() == errc::no_rational_fit)
            throw Error(errc::insufficient_data, "no fit stabilized within the provided terms");
        throw;
    }
}

/// Virtual motive read off a rational zeta: denominator factors become
/// orbits with positive multiplicity (reversed and normalized monic),
/// numerator factors negative.
inline VirtualMotive spectrum_from_zeta(const RationalZeta& z, PrimePower q,
                                        unsigned degree_cap = default_degree_cap()) {
    VirtualMotive m(q);
    auto absorb = [&](const RatPoly& side, int sign) {
        if (side.degree() < 1) return;
        for (const auto& fac : factor_rational(side, degree_cap)) {
            RatPoly orbit = fac.poly.reversed().monic();
            m.add_term(NumberOrbit::trusted(orbit), sign * static_cast<long>(fac.multiplicity));
        }
    };
    absorb(z.den, +1);
    absorb(z.num, -1);
    if (!(zeta_of_motive(m) == z))
        throw Error(errc::no_rational_fit, "zeta does not reassemble from its spectrum");
    return m;
}

}  // namespace weilmot
