#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "weilmot/ff.hpp"

using namespace weilmot;

TEST_CASE("prime modulus validation") {
    CHECK(PrimeModulus(2).value() == 2);
    CHECK(PrimeModulus(2147483647).value() == 2147483647u);  // 2^31 - 1
    CHECK_THROWS_AS(PrimeModulus(1), Error);
    CHECK_THROWS_AS(PrimeModulus(4), Error);
    CHECK_THROWS_AS(PrimeModulus(2147483649ull), Error);  // over the 31-bit cap
}

TEST_CASE("canonical modulus selection") {
    // F_2: the modulus of a prime field is x itself
    auto f2 = ExtField::build(2, 1);
    CHECK(f2.modulus() == std::vector<std::uint32_t>{0, 1});

    // F_4: x^2 + x + 1 is the unique monic irreducible quadratic over F_2.
    // Oracle: every earlier candidate in the scan order has a root in F_2.
    auto f4 = ExtField::build(2, 2);
    CHECK(f4.modulus() == std::vector<std::uint32_t>{1, 1, 1});
    for (unsigned v = 0; v < 3; ++v) {  // x^2, x^2+1, x^2+x
        unsigned c0 = v & 1, c1 = (v >> 1) & 1;
        bool has_root = false;
        for (unsigned x = 0; x < 2; ++x)
            if ((x * x + c1 * x + c0) % 2 == 0) has_root = true;
        CHECK(has_root);
    }

    // F_9: x^2 + 1, irreducible since -1 is a non-residue mod 3
    auto f9 = ExtField::build(3, 2);
    CHECK(f9.modulus() == std::vector<std::uint32_t>{1, 0, 1});
    for (unsigned x = 0; x < 3; ++x) CHECK((x * x + 1) % 3 != 0);

    SECTION("degree cap") {
        CHECK_THROWS_AS(ExtField::build(2, 17), Error);
        CHECK_NOTHROW(ExtField::build(2, 17, 32));
    }
}

TEST_CASE("modulus divides x^(p^e) - x") {
    // equivalently the canonical generator is fixed by e Frobenius steps
    for (auto [p, e] : {std::pair<unsigned, unsigned>{2, 4},
                        {3, 3},
                        {5, 2},
                        {7, 2},
                        {2, 8},
                        {13, 2}}) {
        auto F = ExtField::build(p, e);
        FFElem t = F.gen();
        for (unsigned i = 0; i < e; ++i) t = F.frobenius(t);
        CHECK(t == F.gen());
    }
}

TEST_CASE("arithmetic in F_4") {
    auto F = ExtField::build(2, 2);
    FFElem g = F.gen();
    FFElem g1 = F.add(g, F.one());

    CHECK(F.mul(g, g) == g1);        // g^2 = g + 1 by reduction mod x^2+x+1
    CHECK(F.frobenius(g) == g1);     // g^2 again
    CHECK(F.inv(F.one()) == F.one());
    CHECK(F.mul(g, F.inv(g)) == F.one());
    CHECK(F.mul(g, g1) == F.one());  // g * (g+1) = g^2 + g = 1
    CHECK(F.pow(g, 3) == F.one());   // the multiplicative group has order 3
}

TEST_CASE("inverses across small fields") {
    for (auto [p, e] : {std::pair<unsigned, unsigned>{2, 3}, {3, 2}, {5, 1}, {7, 2}}) {
        auto F = ExtField::build(p, e);
        std::uint64_t card = F.cardinality_u64();
        for (std::uint64_t c = 1; c < card; ++c) {
            FFElem a = F.decode(c);
            CHECK(F.mul(a, F.inv(a)) == F.one());
        }
        CHECK_THROWS_AS(F.inv(F.zero()), Error);
    }
}

TEST_CASE("field mismatch is rejected") {
    auto F4 = ExtField::build(2, 2);
    auto F8 = ExtField::build(2, 3);
    CHECK_THROWS_AS(F4.add(F4.one(), F8.one()), Error);
}

TEST_CASE("frobenius is a field automorphism") {
    // 1000 random pairs across two fields
    std::mt19937_64 rng(0xf0b1a5);
    for (auto [p, e] : {std::pair<unsigned, unsigned>{3, 3}, {2, 4}}) {
        auto F = ExtField::build(p, e);
        std::uint64_t card = F.cardinality_u64();
        std::uniform_int_distribution<std::uint64_t> d(0, card - 1);
        for (int i = 0; i < 500; ++i) {
            FFElem a = F.decode(d(rng)), b = F.decode(d(rng));
            CHECK(F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b)));
            CHECK(F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b)));
        }
    }
}

TEST_CASE("projective enumeration counts") {
    auto size = [](unsigned p, unsigned e, unsigned N) {
        auto F = ExtField::build(p, e);
        ProjectiveEnumerator en(F, N);
        std::uint64_t n = 0;
        for (en.first(); !en.done(); en.next()) ++n;
        return n;
    };
    CHECK(size(2, 1, 2) == 7);    // P^2(F_2)
    CHECK(size(2, 2, 1) == 5);    // P^1(F_4)
    CHECK(size(3, 1, 3) == 40);   // P^3(F_3)
    CHECK(size(5, 1, 2) == 31);   // P^2(F_5)
}

TEST_CASE("representatives are pairwise non-proportional") {
    // exhaustive for |F| <= 9, N <= 3: no two representatives may be scalar
    // multiples, and the stream length matches (|F|^(N+1)-1)/(|F|-1)
    for (auto [p, e] : {std::pair<unsigned, unsigned>{2, 1},
                        {3, 1},
                        {2, 2},
                        {5, 1},
                        {7, 1},
                        {2, 3},
                        {3, 2}}) {
        auto F = ExtField::build(p, e);
        std::uint64_t card = F.cardinality_u64();
        for (unsigned N = 0; N <= 3; ++N) {
            if (card > 5 && N == 3) continue;  // keep the exhaustive pass quick
            ProjectiveEnumerator en(F, N);
            std::vector<std::vector<FFElem>> pts;
            for (en.first(); !en.done(); en.next()) pts.push_back(en.point());
            Int expect = (pow_int(Int(static_cast<long>(card)), N + 1) - 1) /
                         Int(static_cast<long>(card) - 1);
            REQUIRE(Int(static_cast<unsigned long>(pts.size())) == expect);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                // first nonzero coordinate is 1
                std::size_t piv = 0;
                while (piv <= N && pts[i][piv].is_zero()) ++piv;
                REQUIRE(piv <= N);
                CHECK(pts[i][piv] == F.one());
                for (std::size_t j = i + 1; j < pts.size(); ++j) {
                    // proportional would mean pts[j] = lambda * pts[i]
                    for (std::uint64_t lam = 1; lam < card; ++lam) {
                        FFElem l = F.decode(lam);
                        bool all = true;
                        for (unsigned k = 0; k <= N; ++k)
                            if (!(F.mul(l, pts[i][k]) == pts[j][k])) {
                                all = false;
                                break;
                            }
                        if (all) FAIL("scalar multiple found");
                    }
                }
            }
        }
    }
}

TEST_CASE("seek matches streaming order") {
    auto F = ExtField::build(3, 1);
    ProjectiveEnumerator a(F, 2), b(F, 2);
    std::uint64_t total = a.total_u64();
    a.first();
    for (std::uint64_t i = 0; i < total; ++i) {
        b.seek(i);
        REQUIRE(!b.done());
        CHECK(a.point() == b.point());
        a.next();
    }
    b.seek(total);
    CHECK(b.done());
}
