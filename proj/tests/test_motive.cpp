#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"
#include "weilmot/motive.hpp"
#include "weilmot/variety.hpp"
#include "weilmot/zeta.hpp"

using namespace weilmot;

namespace {

const auto Q2 = PrimePower::from(2);
const auto Q3 = PrimePower::from(3);

VirtualMotive elliptic_motive() {
    // [x-1] + [x-2] - [x^2+2], the spectrum of y^2 z + y z^2 = x^3 over F_2
    VirtualMotive m(Q2);
    m.add_term(NumberOrbit(RatPoly{-1, 1}), 1);
    m.add_term(NumberOrbit(RatPoly{-2, 1}), 1);
    m.add_term(NumberOrbit(RatPoly{2, 0, 1}), -1);
    return m;
}

VirtualMotive half_orbit() {
    VirtualMotive m(Q2);
    m.add_term(NumberOrbit(RatPoly(std::vector<Rat>{make_rat(-1, 2), Rat(1)})), 1);
    return m;
}

}  // namespace

TEST_CASE("additive structure") {
    auto m = elliptic_motive();
    CHECK(m + VirtualMotive::zero(Q2) == m);
    CHECK(m - m == VirtualMotive::zero(Q2));

    VirtualMotive two(Q2);
    two.add_term(NumberOrbit(RatPoly{-1, 1}), 1);
    two.add_term(NumberOrbit(RatPoly{-1, 1}), 1);
    REQUIRE(two.terms().size() == 1);
    CHECK(two.terms().begin()->second == 2);

    VirtualMotive a(Q2), b(Q2);
    a.add_term(NumberOrbit(RatPoly{-1, 1}), 1);
    a.add_term(NumberOrbit(RatPoly{-2, 1}), 1);
    b.add_term(NumberOrbit(RatPoly{-2, 1}), 1);
    CHECK((a - b).terms().size() == 1);
    CHECK((a - b).terms().begin()->first.poly() == RatPoly{-1, 1});

    CHECK_THROWS_AS(VirtualMotive::unit(Q2) + VirtualMotive::unit(Q3), Error);
}

TEST_CASE("tensor structure") {
    auto m = elliptic_motive();
    CHECK(m.tensor(VirtualMotive::unit(Q2), 16) == m);

    auto L = VirtualMotive::lefschetz(Q2);
    auto LL = L.tensor(L, 16);
    REQUIRE(LL.terms().size() == 1);
    CHECK(LL.terms().begin()->first.poly() == RatPoly{-4, 1});

    SECTION("h(P^1) (x) h(P^1) = [x-1] + 2[x-2] + [x-4]") {
        auto h = VirtualMotive::projective_space(Q2, 1);
        auto sq = h.tensor(h, 16);
        VirtualMotive expect(Q2);
        expect.add_term(NumberOrbit(RatPoly{-1, 1}), 1);
        expect.add_term(NumberOrbit(RatPoly{-2, 1}), 2);
        expect.add_term(NumberOrbit(RatPoly{-4, 1}), 1);
        CHECK(sq == expect);
        // count cross-check: 9 points of P^1 x P^1 over F_2
        CHECK(sq.sharp(1) == 9);
    }
}

TEST_CASE("sharp_n") {
    SECTION("Lefschetz powers count affine spaces") {
        for (unsigned n = 1; n <= 5; ++n)
            CHECK(VirtualMotive::lefschetz(Q2).sharp(n) == Rat(pow_int(Int(2), n)));
        CHECK(VirtualMotive::lefschetz(Q2).sharp(3) == 8);
    }
    SECTION("h(P^2) counts the plane") {
        auto h = VirtualMotive::projective_space(Q3, 2);
        for (unsigned n = 1; n <= 3; ++n) {
            Int qn = pow_int(Int(3), n);
            CHECK(h.sharp(n) == Rat(1 + qn + qn * qn));
        }
    }
    SECTION("the elliptic spectrum reproduces enumeration") {
        auto m = elliptic_motive();
        auto E = VarietySpec::make("E", 2, 1, {"x1^2*x2 + x1*x2^2 - x0^3"});
        auto counts = count_sequence(E, Q2, 4);
        auto sharps = m.sharp_upto(4);
        for (unsigned n = 1; n <= 4; ++n) {
            REQUIRE(is_integer(sharps[n - 1]));
            CHECK(Int(sharps[n - 1].get_num()) == counts.at(n));
        }
    }
}

TEST_CASE("lefschetz splitting") {
    SECTION("h(P^2) at kappa = 1: 1 + L(1 + L)") {
        auto s = lefschetz_split(VirtualMotive::projective_space(Q2, 2), 1);
        CHECK(s.birational_part == VirtualMotive::unit(Q2));
        CHECK(s.lefschetz_cofactor == VirtualMotive::projective_space(Q2, 1));
    }
    SECTION("h(P^2) at kappa = 2: 1 + L + L^2 * 1") {
        auto s = lefschetz_split(VirtualMotive::projective_space(Q2, 2), 2);
        CHECK(s.birational_part == VirtualMotive::projective_space(Q2, 1));
        CHECK(s.lefschetz_cofactor == VirtualMotive::unit(Q2));
    }
    SECTION("elliptic spectrum: x^2+2 has divisibility order 0") {
        auto s = lefschetz_split(elliptic_motive(), 1);
        VirtualMotive bir(Q2);
        bir.add_term(NumberOrbit(RatPoly{-1, 1}), 1);
        bir.add_term(NumberOrbit(RatPoly{2, 0, 1}), -1);
        CHECK(s.birational_part == bir);
        CHECK(s.lefschetz_cofactor == VirtualMotive::unit(Q2));
    }
    SECTION("non-integral orbits are rejected") {
        CHECK_THROWS_AS(lefschetz_split(half_orbit(), 1), Error);
    }

    SECTION("reassembly, idempotence, additivity on random integral motives") {
        wmtest::Rng rng(0x511f);
        for (int i = 0; i < 40; ++i) {
            auto m = wmtest::random_integral_motive(rng, Q2, 3);
            for (unsigned kappa : {1u, 2u}) {
                auto s = lefschetz_split(m, kappa);
                auto Lk = VirtualMotive::lefschetz(Q2, kappa);
                CHECK(s.birational_part + Lk.tensor(s.lefschetz_cofactor, 16) == m);
                auto again = lefschetz_split(s.birational_part, kappa);
                CHECK(again.lefschetz_cofactor == VirtualMotive::zero(Q2));
                CHECK(again.birational_part == s.birational_part);
            }
            auto m2 = wmtest::random_integral_motive(rng, Q2, 3);
            auto lhs = lefschetz_split(m + m2, 1).birational_part;
            auto rhs = lefschetz_split(m, 1).birational_part +
                       lefschetz_split(m2, 1).birational_part;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("sharp_bar") {
    auto h = VirtualMotive::projective_space(Q2, 2);
    CHECK(sharp_bar(h, 1) == 1);  // mod 2
    CHECK(sharp_bar(h, 2) == 1);  // mod 4
    CHECK(sharp_bar(h, 3) == 1);  // mod 8
    CHECK(sharp_bar(elliptic_motive(), 1) == 1);  // count 3 = 1 mod 2

    SECTION("non-integral sharp is an error") {
        CHECK_THROWS_AS(sharp_bar(half_orbit(), 1), Error);
        try {
            sharp_bar(half_orbit(), 1);
        } catch (const Error& e) {
            CHECK(e.code() == errc::non_integral_sharp);
        }
    }
}

TEST_CASE("a_n series") {
    SECTION("h(P^2) is birationally trivial") {
        auto a = a_n_series(VirtualMotive::projective_space(Q3, 2), 5);
        for (const Int& v : a) CHECK(v == 1);
    }
    SECTION("elliptic spectrum: a_n = 1 - p_n(x^2+2), negative entries appear") {
        // power sums of x^2+2 are 0, -4, 0, 8, so a_n = 1, 5, 1, -7; the split
        // identity N_n = a_n + 2^n * #_n(cofactor) pins a_2 = 9 - 4 = 5
        auto a = a_n_series(elliptic_motive(), 4);
        CHECK(a == std::vector<Int>{Int(1), Int(5), Int(1), Int(-7)});
        CHECK(a[3] < 0);
        // and a_n reduces to the count residues mod 2^n
        auto counts = elliptic_motive().sharp_upto(4);
        for (unsigned n = 1; n <= 4; ++n) {
            Int modulus = pow_int(Int(2), n);
            Int lhs = ((a[n - 1] % modulus) + modulus) % modulus;
            Int rhs = ((Int(counts[n - 1].get_num()) % modulus) + modulus) % modulus;
            CHECK(lhs == rhs);
            CHECK(lhs == sharp_bar(elliptic_motive(), n));
        }
    }
    SECTION("pure Lefschetz classes die birationally") {
        auto a = a_n_series(VirtualMotive::lefschetz(Q2), 3);
        CHECK(a == std::vector<Int>{Int(0), Int(0), Int(0)});
    }
    SECTION("non-integral birational part is an error") {
        CHECK_THROWS_AS(a_n_series(half_orbit(), 2), Error);
    }
}

TEST_CASE("effectivity probe") {
    SECTION("integral spectra stay integral") {
        auto rep = effectivity_probe(VirtualMotive::projective_space(Q2, 2), 20);
        CHECK(rep.integral_within_window());
        CHECK(rep.all_orbits_integral);
        CHECK(rep.verdicts_agree());
    }
    SECTION("witness for [x - 1/2]") {
        auto rep = effectivity_probe(half_orbit(), 50);
        REQUIRE(rep.witness_n.has_value());
        CHECK(*rep.witness_n == 1);
        CHECK(rep.witness_value == make_rat(1, 2));
    }
    SECTION("witness can appear later than n = 1") {
        VirtualMotive m(Q2);
        m.add_term(NumberOrbit(RatPoly(std::vector<Rat>{make_rat(-1, 2), Rat(1)})), 1);
        m.add_term(NumberOrbit(RatPoly(std::vector<Rat>{make_rat(-3, 2), Rat(1)})), 1);
        auto rep = effectivity_probe(m, 50);
        REQUIRE(rep.witness_n.has_value());
        CHECK(*rep.witness_n == 2);  // #_1 = 2 but #_2 = 5/2
        CHECK(rep.witness_value == make_rat(5, 2));
        CHECK(rep.verdicts_agree());
    }
}

TEST_CASE("ring homomorphism properties") {
    // #_n(M + N) = #_n(M) + #_n(N) and #_n(M (x) N) = #_n(M) #_n(N), exactly
    wmtest::Rng rng(0x417);
    for (int i = 0; i < 40; ++i) {
        auto m = wmtest::random_integral_motive(rng, Q2, 3, 2);
        auto n = wmtest::random_integral_motive(rng, Q2, 3, 2);
        auto sum = m + n;
        auto prod = m.tensor(n, 9);
        for (unsigned k = 1; k <= 5; ++k) {
            CHECK(sum.sharp(k) == m.sharp(k) + n.sharp(k));
            CHECK(prod.sharp(k) == m.sharp(k) * n.sharp(k));
        }
    }
}

TEST_CASE("integral spectra have integer counts") {
    // shadow of the integrality lemma: all orbits integral implies #_n in Z
    wmtest::Rng rng(0x1e3a);
    for (int i = 0; i < 200; ++i) {
        auto m = wmtest::random_integral_motive(rng, Q3, 4);
        for (const Rat& v : m.sharp_upto(20)) CHECK(is_integer(v));
    }
}

TEST_CASE("sharp_bar is multiplicative mod q^n") {
    wmtest::Rng rng(0xba2);
    for (int i = 0; i < 25; ++i) {
        auto m = wmtest::random_integral_motive(rng, Q2, 3, 2);
        auto n = wmtest::random_integral_motive(rng, Q2, 3, 2);
        auto prod = m.tensor(n, 9);
        for (unsigned k = 1; k <= 4; ++k) {
            Int modulus = pow_int(Int(2), k);
            Int lhs = sharp_bar(prod, k);
            Int rhs = (sharp_bar(m, k) * sharp_bar(n, k)) % modulus;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("point counts separate spectra") {
    // desk-scale injectivity probe over Q: motives of total degree <= D that
    // share #_n for n <= 2D coincide
    wmtest::Rng rng(0x1271);
    for (int i = 0; i < 60; ++i) {
        auto m = wmtest::random_integral_motive(rng, Q2, 3, 2);
        auto n = wmtest::random_integral_motive(rng, Q2, 3, 2);
        unsigned deg = 0;
        for (const auto& [o, mult] : m.terms()) deg += o.degree() * std::abs(mult);
        for (const auto& [o, mult] : n.terms()) deg += o.degree() * std::abs(mult);
        if (m == n) continue;
        bool separated = false;
        auto sm = m.sharp_upto(2 * deg), sn = n.sharp_upto(2 * deg);
        for (unsigned k = 0; k < 2 * deg && !separated; ++k) separated = sm[k] != sn[k];
        CHECK(separated);
    }
}

TEST_CASE("zeta series consistency") {
    // the expansion of Z(M, t) equals exp(sum #_n t^n / n) term by term
    wmtest::Rng rng(0x2e7a);
    for (int i = 0; i < 15; ++i) {
        auto m = wmtest::random_integral_motive(rng, Q2, 3);
        auto z = zeta_of_motive(m);
        auto sharps = m.sharp_upto(8);
        std::vector<Rat> expect(9, Rat(0));
        expect[0] = 1;
        for (unsigned k = 1; k <= 8; ++k) {
            Rat acc(0);
            for (unsigned j = 1; j <= k; ++j) acc += sharps[j - 1] * expect[k - j];
            expect[k] = acc / Rat(static_cast<long>(k));
        }
        CHECK(z.expand(8) == expect);
    }
}
