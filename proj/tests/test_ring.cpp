#include <doctest.h>

#include "mhs/ring.hpp"

using namespace mhs;

TEST_CASE("modular arithmetic closes in [0, p^m)") {
    Modulus m49(Int(7), 2);
    RingElem a(m49, 3), b(m49, 33);
    CHECK((a * b).residue() == 1); // 3*33 = 99 = 2*49 + 1

    RingElem x(m49, 48), one(m49, 1);
    CHECK((x + one).residue() == 0);

    RingElem y(m49, 17);
    CHECK((y + RingElem::zero(m49)) == y);
    CHECK((y - y).is_zero());
    CHECK((-RingElem(m49, 1)).residue() == 48);
}

TEST_CASE("operations require identical moduli") {
    Modulus m49(Int(7), 2), m25(Int(5), 2);
    RingElem a(m49, 3), b(m25, 3);
    CHECK_THROWS_AS(a + b, usage_error);
    CHECK_THROWS_AS(a * b, usage_error);
}

TEST_CASE("invert against p^m by extended Euclid") {
    Modulus m49(Int(7), 2);
    CHECK(invert(RingElem(m49, 1)).residue() == 1);
    CHECK(invert(RingElem(m49, 4)).residue() == 37); // 4*37 = 148 = 3*49 + 1

    try {
        invert(RingElem(m49, 7));
        FAIL("expected non_invertible_error");
    } catch (const non_invertible_error& e) {
        CHECK(e.valuation() == 1);
    }
    try {
        invert(RingElem::zero(m49));
        FAIL("expected non_invertible_error");
    } catch (const non_invertible_error& e) {
        CHECK(e.valuation() == -1); // infinity marker
    }
}

TEST_CASE("unit group properties: a*inv(a) = 1, inv(inv(a)) = a") {
    for (auto [p, m] : {std::pair<long, unsigned>{7, 2},
                        {5, 3},
                        {11, 2},
                        {3, 4}}) {
        Modulus mod(Int(p), m);
        for (Int a = 1; a < mod.value(); ++a) {
            if (mpz_divisible_p(a.get_mpz_t(), mod.prime().get_mpz_t())) continue;
            RingElem u(mod, a);
            RingElem v = invert(u);
            CHECK((u * v) == RingElem::one(mod));
            CHECK(invert(v) == u);
        }
    }
}

TEST_CASE("valuation") {
    CHECK(!valuation(Int(0), Int(5)).has_value()); // v_p(0) = +infinity
    CHECK(valuation(Int(49), Int(7)) == 2);
    CHECK(valuation(Int(1330), Int(7)) == 1); // 1330 = 7 * 190
    CHECK(valuation(Int(190), Int(7)) == 0);

    // v(xy) = v(x) + v(y)
    for (long x : {3, 14, 49, 98, 75, -21}) {
        for (long y : {2, 7, 35, 99, -7}) {
            auto vx = valuation(Int(x), Int(7));
            auto vy = valuation(Int(y), Int(7));
            auto vxy = valuation(Int(x) * Int(y), Int(7));
            CHECK(*vxy == *vx + *vy);
        }
    }
}

TEST_CASE("Modulus rejects composite bases and zero exponents") {
    for (long n = 2; n < 10000; ++n) {
        bool prime = is_prime(Int(n));
        if (prime) continue;
        CHECK_THROWS_AS(Modulus(Int(n), 1), usage_error);
    }
    CHECK_THROWS_AS(Modulus(Int(7), 0), usage_error);
    CHECK_THROWS_AS(Modulus(Int(1), 1), usage_error);
    CHECK_THROWS_AS(Modulus(Int(-7), 1), usage_error);
    CHECK(Modulus(Int(999983), 1).value() == 999983); // largest prime < 10^6
}

TEST_CASE("padic rational normal form") {
    PadicRational q(Rational(35, 12), Int(5)); // 35/12 = 5 * 7/12
    CHECK(!q.is_zero());
    CHECK(q.sign() == 1);
    CHECK(q.val() == 1);
    CHECK(q.unit_num() == 7);
    CHECK(q.unit_den() == 12);
    CHECK(q.value() == Rational(35, 12));

    PadicRational neg(Rational(-3, 50), Int(5)); // -3 / (2 * 5^2)
    CHECK(neg.sign() == -1);
    CHECK(neg.val() == -2);
    CHECK(neg.unit_num() == 3);
    CHECK(neg.unit_den() == 2);
    CHECK(neg.value() == Rational(-3, 50));

    CHECK(PadicRational::zero(Int(7)).is_zero());
    CHECK_THROWS_AS(PadicRational(Rational(1, 2), Int(6)), usage_error);
}

TEST_CASE("reduce realizes rational congruences") {
    Modulus m49(Int(7), 2);
    CHECK(reduce(Rational(1, 6), m49).residue() == 41); // 6*41 = 246 = 5*49 + 1
    CHECK(reduce(Rational(0), m49).is_zero());

    // -3/4 * 7 == 7 (mod 49)
    CHECK(reduce(Rational(-21, 4), m49).residue() == 7);

    // high valuation collapses to zero
    CHECK(reduce(Rational(49 * 3), m49).is_zero());

    CHECK_THROWS_AS(reduce(Rational(1, 7), m49), negative_valuation_error);

    PadicRational wrong_base(Rational(1, 2), Int(5));
    CHECK_THROWS_AS(reduce(wrong_base, m49), usage_error);
}

TEST_CASE("reduce is a ring homomorphism on p-adic integers") {
    Modulus m343(Int(7), 3);
    std::vector<Rational> samples;
    for (long num : {-9, -2, 0, 1, 5, 14, 49}) {
        for (long den : {1, 2, 3, 6, 11, 12}) {
            Rational q(num, den);
            q.canonicalize();
            samples.push_back(q);
        }
    }
    for (const Rational& q1 : samples) {
        for (const Rational& q2 : samples) {
            CHECK(reduce(Rational(q1 + q2), m343) ==
                  reduce(q1, m343) + reduce(q2, m343));
            CHECK(reduce(Rational(q1 * q2), m343) ==
                  reduce(q1, m343) * reduce(q2, m343));
        }
    }
}
