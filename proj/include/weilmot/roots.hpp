#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "weilmot/errors.hpp"
#include "weilmot/ratpoly.hpp"

namespace weilmot {

/// Complex number with exact rational parts; just enough arithmetic for
/// Horner evaluation and Newton steps.
struct QComplex {
    Rat re{0}, im{0};

    QComplex operator+(const QComplex& o) const { return {re + o.re, im + o.im}; }
    QComplex operator-(const QComplex& o) const { return {re - o.re, im - o.im}; }
    QComplex operator*(const QComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    QComplex operator/(const QComplex& o) const {
        Rat n2 = o.re * o.re + o.im * o.im;
        if (n2 == 0) throw Error(errc::division_by_zero, "complex division by zero");
        return {(re * o.re + im * o.im) / n2, (im * o.re - re * o.im) / n2};
    }
    Rat abs2() const { return re * re + im * im; }
};

inline QComplex eval_complex(const RatPoly& f, const QComplex& z) {
    QComplex acc;
    for (std::size_t i = f.coeffs().size(); i-- > 0;) acc = acc * z + QComplex{f[i], Rat(0)};
    return acc;
}

/// A numerically located root together with a nearby exact rational point at
/// which the residual |f| is certified below the requested bound.
struct CertifiedRoot {
    std::complex<double> approx;
    QComplex point;
    Rat residual2;  // |f(point)|^2, exact

    Rat abs2() const { return point.abs2(); }
};

namespace detail {

inline std::complex<double> eval_fast(const std::vector<std::complex<double>>& c,
                                      std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
}

inline QComplex to_exact(std::complex<double> z) {
    // double -> rational is exact (binary fractions)
    Rat re(z.real()), im(z.imag());
    return QComplex{re, im};
}

}  // namespace detail

/// Finds all complex roots of f by simultaneous (Durand-Kerner) iteration,
/// then certifies each root by exact evaluation at a rational point, with
/// exact-arithmetic Newton fallback when double precision is not enough.
///
/// f must be squarefree. Throws RootFindingDiverged when a root cannot be
/// certified to |f(w)| < residual_bound.
inline std::vector<CertifiedRoot> find_roots(const RatPoly& f, double residual_bound = 1e-12) {
    if (f.degree() < 1) return {};
    RatPoly m = f.monic();
    const int d = m.degree();

    std::vector<CertifiedRoot> out;
    if (d == 1) {
        QComplex z{-m[0], Rat(0)};
        out.push_back(CertifiedRoot{{mpq_get_d(z.re.get_mpq_t()), 0.0}, z, Rat(0)});
        return out;
    }

    std::vector<std::complex<double>> c(d + 1);
    for (int i = 0; i <= d; ++i) c[i] = mpq_get_d(m[i].get_mpq_t());

    // Fujiwara-style radius for the starting circle
    double radius = 0.0;
    for (int i = 0; i < d; ++i) {
        double v = std::pow(std::abs(c[i]), 1.0 / (d - i));
        radius = std::max(radius, v);
    }
    radius = std::max(2.0 * radius, 0.5);

    std::vector<std::complex<double>> z(d);
    for (int k = 0; k < d; ++k) {
        double theta = 2.0 * M_PI * k / d + 0.7;
        z[k] = radius * std::complex<double>(std::cos(theta), std::sin(theta));
    }

    for (int iter = 0; iter < 1000; ++iter) {
        double worst = 0.0;
        for (int k = 0; k < d; ++k) {
            std::complex<double> denom = 1.0;
            for (int j = 0; j < d; ++j)
                if (j != k) denom *= (z[k] - z[j]);
            if (denom == std::complex<double>(0.0, 0.0)) {
                z[k] += std::complex<double>(1e-8, 1e-8);
                worst = 1.0;
                continue;
            }
            std::complex<double> delta = detail::eval_fast(c, z[k]) / denom;
            z[k] -= delta;
            worst = std::max(worst, std::abs(delta) / std::max(1.0, std::abs(z[k])));
        }
        if (worst < 1e-15) break;
    }

    // Newton polish in doubles
    RatPoly df = m.derivative();
    std::vector<std::complex<double>> dc(d);
    for (int i = 0; i < d; ++i) dc[i] = mpq_get_d(df[i].get_mpq_t());
    for (int k = 0; k < d; ++k) {
        for (int t = 0; t < 4; ++t) {
            std::complex<double> fd = detail::eval_fast(dc, z[k]);
            if (fd == std::complex<double>(0.0, 0.0)) break;
            z[k] -= detail::eval_fast(c, z[k]) / fd;
        }
    }

    const Rat bound2 = Rat(residual_bound) * Rat(residual_bound);
    out.reserve(d);
    for (int k = 0; k < d; ++k) {
        QComplex w = detail::to_exact(z[k]);
        Rat r2 = eval_complex(m, w).abs2();
        // Exact Newton steps recover what double rounding lost; quadratic
        // convergence makes two steps plenty at this scale.
        int steps = 0;
        while (r2 > bound2 && steps < 3) {
            QComplex fw = eval_complex(m, w);
            QComplex fdw = eval_complex(df, w);
            if (fdw.abs2() == 0) break;
            w = w - fw / fdw;
            r2 = eval_complex(m, w).abs2();
            ++steps;
        }
        if (r2 > bound2)
            throw Error(errc::root_finding_diverged,
                        "root residual above bound for " + m.str());
        out.push_back(CertifiedRoot{
            {mpq_get_d(w.re.get_mpq_t()), mpq_get_d(w.im.get_mpq_t())}, w, r2});
    }
    return out;
}

}  // namespace weilmot
