#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "weilmot/algebraic.hpp"
#include "weilmot/errors.hpp"
#include "weilmot/rational.hpp"
#include "weilmot/ratpoly.hpp"

namespace weilmot {

/// A virtual motive over F_q: a finite integer combination of Frobenius
/// eigenvalue orbits. Simple classes are identified with their (pairwise
/// distinct) irreducible orbit polynomials; orbits are kept in the canonical
/// (degree, coefficients) order, so serialization is deterministic.
class VirtualMotive {
public:
    using TermMap = std::map<NumberOrbit, long>;

    explicit VirtualMotive(PrimePower q) : q_(q) {}

    static VirtualMotive zero(PrimePower q) { return VirtualMotive(q); }
    /// The unit motive 1 = [x-1].
    static VirtualMotive unit(PrimePower q) {
        VirtualMotive m(q);
        m.add_term(NumberOrbit::trusted(RatPoly::x_minus(Rat(1))), 1);
        return m;
    }
    /// The Lefschetz motive L = [x-q].
    static VirtualMotive lefschetz(PrimePower q, unsigned power = 1) {
        VirtualMotive m(q);
        m.add_term(NumberOrbit::trusted(RatPoly::x_minus(Rat(pow_int(q.as_int(), power)))), 1);
        return m;
    }
    /// h(P^N) = 1 + L + ... + L^N.
    static VirtualMotive projective_space(PrimePower q, unsigned N) {
        VirtualMotive m(q);
        for (unsigned i = 0; i <= N; ++i)
            m.add_term(NumberOrbit::trusted(RatPoly::x_minus(Rat(pow_int(q.as_int(), i)))), 1);
        return m;
    }

    const PrimePower& q() const { return q_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const NumberOrbit& orbit, long mult) {
        if (mult == 0) return;
        auto [it, inserted] = terms_.emplace(orbit, mult);
        if (!inserted) {
            it->second += mult;
            if (it->second == 0) terms_.erase(it);
        }
    }

    bool operator==(const VirtualMotive& o) const { return q_ == o.q_ && terms_ == o.terms_; }
    bool operator!=(const VirtualMotive& o) const { return !(*this == o); }

    VirtualMotive operator-() const {
        VirtualMotive r(q_);
        for (const auto& [o, m] : terms_) r.terms_.emplace(o, -m);
        return r;
    }

    friend VirtualMotive operator+(const VirtualMotive& a, const VirtualMotive& b) {
        a.check_base(b);
        VirtualMotive r = a;
        for (const auto& [o, m] : b.terms_) r.add_term(o, m);
        return r;
    }
    friend VirtualMotive operator-(const VirtualMotive& a, const VirtualMotive& b) {
        return a + (-b);
    }

    /// Ring multiplication: orbits multiply by composed products, with
    /// multiplicities multiplied through. Needs factorization, so the degree
    /// cap applies to every pairwise product of orbit degrees.
    VirtualMotive tensor(const VirtualMotive& b, unsigned degree_cap = default_degree_cap()) const {
        check_base(b);
        VirtualMotive r(q_);
        for (const auto& [fo, fm] : terms_)
            for (const auto& [go, gm] : b.terms_)
                for (const auto& [orbit, mult] : composed_product(fo.poly(), go.poly(), degree_cap))
                    r.add_term(orbit, fm * gm * static_cast<long>(mult));
        return r;
    }
    friend VirtualMotive operator*(const VirtualMotive& a, const VirtualMotive& b) {
        return a.tensor(b);
    }

    /// #_n: the point count of the motive over F_{q^n},
    /// sum of m_i * Tr(w_i^n) over the orbit terms.
    Rat sharp(unsigned n) const {
        if (n < 1) throw Error(errc::base_mismatch, "sharp index must be >= 1");
        Rat acc(0);
        for (const auto& [o, m] : terms_) acc += Rat(m) * power_sums(o.poly(), n).back();
        return acc;
    }

    /// sharp(1..n_max) computed with one power-sum pass per orbit.
    std::vector<Rat> sharp_upto(unsigned n_max) const {
        std::vector<Rat> acc(n_max, Rat(0));
        for (const auto& [o, m] : terms_) {
            auto p = power_sums(o.poly(), n_max);
            for (unsigned i = 0; i < n_max; ++i) acc[i] += Rat(m) * p[i];
        }
        return acc;
    }

private:
    void check_base(const VirtualMotive& o) const {
        if (q_ != o.q_) throw Error(errc::base_mismatch, "motives over different q");
    }

    PrimePower q_;
    TermMap terms_;
};

/// Unique splitting M = birational_part + L^kappa (x) lefschetz_cofactor,
/// where no orbit of the birational part is divisible by q^kappa.
struct SplitResult {
    VirtualMotive birational_part;
    VirtualMotive lefschetz_cofactor;
    unsigned kappa;
};

namespace detail {

/// Split that routes non-integral orbits into the birational part instead of
/// rejecting them; the strict entry point validates integrality first.
inline SplitResult split_terms(const VirtualMotive& m, unsigned kappa) {
    VirtualMotive bir(m.q()), cof(m.q());
    Int q = m.q().as_int();
    for (const auto& [orbit, mult] : m.terms()) {
        unsigned order = is_algebraic_integer(orbit) ? q_divisibility_order(orbit, q) : 0;
        if (order >= kappa) {
            RatPoly twisted = orbit.poly();
            for (unsigned i = 0; i < kappa; ++i) twisted = twist_down(twisted, q);
            cof.add_term(NumberOrbit::trusted(twisted), mult);
        } else {
            bir.add_term(orbit, mult);
        }
    }
    return SplitResult{std::move(bir), std::move(cof), kappa};
}

}  // namespace detail

/// Splits an effective-integral motive along L^kappa. Orbits divisible by
/// q^kappa move, twisted down kappa times, into the cofactor; the rest form
/// the birational part. Reassembly M = bir + L^kappa (x) cof is exact.
inline SplitResult lefschetz_split(const VirtualMotive& m, unsigned kappa = 1) {
    if (kappa < 1) throw Error(errc::base_mismatch, "kappa must be >= 1");
    for (const auto& [orbit, mult] : m.terms())
        if (!is_algebraic_integer(orbit))
            throw Error(errc::not_integral,
                        "orbit " + orbit.poly().str() + " is not an algebraic-integer orbit");
    return detail::split_terms(m, kappa);
}

/// bar{#}_n: the residue of #_n in Z/q^(kappa n), computed on the birational
/// part. Throws NonIntegralSharp when that count is not an integer, i.e. when
/// M falls outside the effective-integral cone.
inline Int sharp_bar(const VirtualMotive& m, unsigned n, unsigned kappa = 1) {
    if (n < 1 || kappa < 1) throw Error(errc::base_mismatch, "indices must be >= 1");
    Rat v = detail::split_terms(m, kappa).birational_part.sharp(n);
    if (!is_integer(v))
        throw Error(errc::non_integral_sharp,
                    "#_" + std::to_string(n) + " of the birational part is " + v.get_str());
    Int modulus = pow_int(m.q().as_int(), static_cast<unsigned long>(kappa) * n);
    Int r = v.get_num() % modulus;
    if (r < 0) r += modulus;
    return r;
}

/// The integer series a_n with a_n = #_n(birational part), so that
/// a_n = bar{#}_n(M) mod q^n. Not necessarily positive.
inline std::vector<Int> a_n_series(const VirtualMotive& m, unsigned n_max) {
    if (n_max < 1) throw Error(errc::base_mismatch, "n_max must be >= 1");
    VirtualMotive bir = detail::split_terms(m, 1).birational_part;
    auto sharps = bir.sharp_upto(n_max);
    std::vector<Int> out;
    out.reserve(n_max);
    for (unsigned n = 1; n <= n_max; ++n) {
        const Rat& v = sharps[n - 1];
        if (!is_integer(v))
            throw Error(errc::non_integral_sharp,
                        "a_" + std::to_string(n) + " is not an integer: " + v.get_str());
        out.push_back(v.get_num());
    }
    return out;
}

struct EffectivityReport {
    unsigned window;
    std::optional<unsigned> witness_n;  // first n <= window with #_n not integral
    Rat witness_value;
    std::vector<std::pair<NumberOrbit, bool>> orbit_integrality;
    bool all_orbits_integral;

    bool integral_within_window() const { return !witness_n.has_value(); }
    /// The detector and orbit-level integrality agree on this instance.
    bool verdicts_agree() const { return integral_within_window() == all_orbits_integral; }
};

/// Tests the hypothesis side of the effectivity criterion: searches for a
/// non-integer #_n within the window, and reports per-orbit integrality so
/// the two verdicts can be compared on each instance. Absence of a witness
/// inside the window certifies nothing beyond the window.
inline EffectivityReport effectivity_probe(const VirtualMotive& m, unsigned window = 50) {
    if (window < 1) throw Error(errc::base_mismatch, "window must be >= 1");
    EffectivityReport rep{window, std::nullopt, Rat(0), {}, true};
    for (const auto& [orbit, mult] : m.terms()) {
        bool integral = is_algebraic_integer(orbit);
        rep.orbit_integrality.emplace_back(orbit, integral);
        rep.all_orbits_integral = rep.all_orbits_integral && integral;
    }
    auto sharps = m.sharp_upto(window);
    for (unsigned n = 1; n <= window; ++n) {
        if (!is_integer(sharps[n - 1])) {
            rep.witness_n = n;
            rep.witness_value = sharps[n - 1];
            break;
        }
    }
    return rep;
}

}  // namespace weilmot
