#include <doctest.h>

#include "mhs/bernoulli.hpp"
#include "mhs/sums.hpp"
#include "support/oracles.hpp"

using namespace mhs;

TEST_CASE("brute force matches hand enumeration") {
    // compositions of 5 into 3 parts < 5: the sum is 7/4, and 7/4 == 3 (mod 5)
    MhsQuery q{3, Int(5), Int(5), 1, Int(5), true, 1};
    MhsResult res = mhs_bruteforce(q);
    CHECK(res.residue.residue() == 3);
    CHECK(res.term_count == 6); // 3 perms of {1,1,3} + 3 perms of {1,2,2}
    CHECK(testing::harmonic_sum_exact(3, 5, 5, 5, true) == Rational(7, 4));
    CHECK(reduce(Rational(7, 4), q.modulus()) == res.residue);

    // compositions of 9 into 3 parts < 9 coprime to 3, mod 9
    MhsQuery q2{3, Int(9), Int(3), 2, Int(9), true, 2};
    CHECK(mhs_bruteforce(q2).residue.residue() == 3);

    // single tuple (1, 1)
    MhsQuery q3{2, Int(2), Int(5), 1, Int(5), true, 1};
    MhsResult res3 = mhs_bruteforce(q3);
    CHECK(res3.residue.residue() == 1);
    CHECK(res3.term_count == 1);
}

TEST_CASE("infeasible queries give the empty sum") {
    MhsQuery q{3, Int(100), Int(5), 1, Int(5), true, 1};
    for (auto* engine : {&mhs_bruteforce, &mhs_convolution}) {
        MhsResult res = (*engine)(q, ComputeLimits{});
        CHECK(res.residue.is_zero());
        CHECK(res.term_count == 0);
    }
    MhsQuery below{3, Int(2), Int(5), 1, Int(5), true, 1};
    CHECK(mhs_bruteforce(below).term_count == 0);
}

TEST_CASE("brute-force ceiling refuses with the estimate") {
    MhsQuery q = MhsQuery::harmonic(5, 1, Int(7), 2, 2);
    ComputeLimits limits;
    limits.bruteforce_ceiling = 10;
    try {
        mhs_bruteforce(q, limits);
        FAIL("expected limit_error");
    } catch (const limit_error& e) {
        CHECK(std::string(e.what()).find("194580") != std::string::npos);
    }
}

TEST_CASE("convolution equals brute force and the known instance") {
    // S_5^(1)(7^2) == -(5!/6) 7 B_2 == 42 (mod 49)
    MhsQuery q = MhsQuery::harmonic(5, 1, Int(7), 2, 2);
    MhsResult conv = mhs_convolution(q);
    MhsResult brute = mhs_bruteforce(q);
    CHECK(conv.residue == brute.residue);
    CHECK(conv.term_count == brute.term_count);
    CHECK(conv.residue.residue() == 42);
    CHECK(reduce(Rational(-140, 6), q.modulus()) == conv.residue);
}

TEST_CASE("single part short-circuits to invert") {
    MhsQuery q = MhsQuery::with_sum(1, Int(10), Int(7), 2);
    MhsResult res = mhs_convolution(q);
    CHECK(res.residue == invert(RingElem(q.modulus(), 10)));
    CHECK(res.term_count == 1);

    MhsQuery blocked = MhsQuery::with_sum(1, Int(14), Int(7), 2);
    CHECK(mhs_convolution(blocked).residue.is_zero());
    CHECK(mhs_bruteforce(blocked).term_count == 0);
}

TEST_CASE("oracle equivalence over a small grid") {
    for (long p : {3L, 5L}) {
        for (unsigned r = 1; r <= 2; ++r) {
            Int pr;
            mpz_pow_ui(pr.get_mpz_t(), Int(p).get_mpz_t(), r);
            if (pr > 25) continue;
            for (unsigned n = 2; n <= 4; ++n) {
                for (unsigned k = 1; k < n; ++k) {
                    for (unsigned m = 1; m <= r + 1; ++m) {
                        MhsQuery q = MhsQuery::harmonic(n, k, Int(p), r, m);
                        MhsResult a = mhs_bruteforce(q);
                        MhsResult b = mhs_convolution(q);
                        CHECK(a.residue == b.residue);
                        CHECK(a.term_count == b.term_count);
                    }
                }
            }
        }
    }
}

TEST_CASE("term counts match enumeration") {
    MhsQuery q = MhsQuery::harmonic(4, 2, Int(5), 1, 1);
    MhsResult brute = mhs_bruteforce(q);
    MhsResult conv = mhs_convolution(q);
    CHECK(brute.term_count ==
          testing::count_positive_tuples_enumerated(10, 4, 5, 5, true));
    CHECK(conv.term_count == brute.term_count);
}

TEST_CASE("reflection symmetry S_n^(k) == (-1)^n S_n^(n-k)") {
    for (unsigned n : {3u, 4u, 5u}) {
        for (unsigned k = 1; k < n; ++k) {
            MhsQuery a = MhsQuery::harmonic(n, k, Int(7), 1, 1);
            MhsQuery b = MhsQuery::harmonic(n, n - k, Int(7), 1, 1);
            RingElem lhs = compute(a).residue;
            RingElem rhs = compute(b).residue;
            CHECK(lhs == (n % 2 == 0 ? rhs : -rhs));
        }
    }
}

TEST_CASE("method dispatch records the engine") {
    MhsQuery small = MhsQuery::harmonic(3, 1, Int(5), 1, 1);
    CHECK(compute(small).method == SumMethod::bruteforce);

    ComputeLimits tight;
    tight.dispatch_threshold = 1;
    CHECK(compute(small, tight).method == SumMethod::convolution);

    // C(120, 4) = 8214570 estimated tuples pushes past the default threshold
    MhsQuery big = MhsQuery::harmonic(5, 1, Int(11), 2, 2);
    CHECK(estimate_terms(big) == 8214570);
    CHECK(compute(big).method == SumMethod::convolution);
}

TEST_CASE("power sums") {
    // 1 + 1/2 + 1/3 + 1/4 = 25/12 has 5-adic valuation 2
    CHECK(power_sum(1, SumRange::below_p, Modulus(Int(5), 2)).is_zero());
    CHECK(power_sum(2, SumRange::below_p, Modulus(Int(7), 1)).is_zero());
    CHECK(power_sum(1, SumRange::below_2p_excl_p, Modulus(Int(5), 2)).is_zero());

    // direct small case: 1 + 1/2 mod 5 = 1 + 3 = 4
    CHECK(power_sum(1, SumRange::below_p, Modulus(Int(3), 1)).residue() ==
          reduce(Rational(3, 2), Modulus(Int(3), 1)).residue());
}

TEST_CASE("distinct tuple sums via Moebius inversion") {
    Modulus m5(Int(5), 1);
    CHECK(distinct_tuple_sum({1, 1}, SumRange::below_p, m5).is_zero());

    Modulus m25(Int(5), 2);
    CHECK(distinct_tuple_sum({1, 1}, SumRange::below_p, m25) ==
          reduce(Rational(-5, 9), m25));

    // single exponent collapses to power_sum
    for (unsigned alpha : {1u, 2u, 3u}) {
        CHECK(distinct_tuple_sum({alpha}, SumRange::below_p, Modulus(Int(7), 2)) ==
              power_sum(alpha, SumRange::below_p, Modulus(Int(7), 2)));
    }

    CHECK_THROWS_AS(
        distinct_tuple_sum({1, 1, 1, 1, 1}, SumRange::below_p, m5),
        usage_error);
}

TEST_CASE("Moebius path equals direct enumeration") {
    for (long p : {5L, 7L}) {
        for (auto range : {SumRange::below_p, SumRange::below_2p_excl_p}) {
            Modulus mod(Int(p), 2);
            for (const auto& alphas :
                 std::vector<std::vector<unsigned>>{{1}, {2}, {1, 1}, {1, 2}, {1, 1, 1}, {2, 1, 1}}) {
                if (p <= static_cast<long>(alphas.size())) continue;
                CHECK(distinct_tuple_sum(alphas, range, mod) ==
                      testing::distinct_tuple_sum_enumerated(alphas, range, mod));
            }
        }
    }
}

TEST_CASE("all-ones distinct sum is n! times the increasing sum") {
    Modulus mod(Int(7), 2);
    for (unsigned n : {2u, 3u}) {
        Int f;
        mpz_fac_ui(f.get_mpz_t(), n);
        std::vector<unsigned> ones(n, 1);
        CHECK(distinct_tuple_sum(ones, SumRange::below_p, mod) ==
              RingElem(mod, f) *
                  testing::increasing_tuple_sum_enumerated(n, SumRange::below_p, mod));
    }
}

TEST_CASE("query validation") {
    MhsQuery q;
    q.parts = 0;
    CHECK_THROWS_AS(q.validate(), usage_error);
    q = MhsQuery{2, Int(0), Int(5), 1, Int(5), true, 1};
    CHECK_THROWS_AS(q.validate(), usage_error);
    q = MhsQuery{2, Int(4), Int(5), 1, Int(1), true, 1};
    CHECK_THROWS_AS(q.validate(), usage_error);
    q = MhsQuery{2, Int(4), Int(5), 1, Int(5), true, 0};
    CHECK_THROWS_AS(q.validate(), usage_error);
}

TEST_CASE("wide moduli fall back or refuse predictably") {
    // 3^41 does not fit the convolution word; brute force still works.
    MhsQuery q = MhsQuery::harmonic(2, 1, Int(3), 1, 41);
    MhsResult res = mhs_bruteforce(q);
    CHECK(res.term_count == 2); // (1,2) and (2,1), each term 1/2
    CHECK(res.residue == RingElem::one(q.modulus()));
    CHECK_THROWS_AS(mhs_convolution(q), limit_error);
}
