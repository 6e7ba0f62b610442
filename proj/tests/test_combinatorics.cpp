#include <doctest.h>

#include "mhs/combinatorics.hpp"
#include "mhs/ring.hpp"
#include "support/oracles.hpp"

using namespace mhs;

TEST_CASE("binom_exact") {
    CHECK(binom_exact(Int(17), 4) == 2380);
    CHECK(binom_exact(Int(10), 0) == 1);
    CHECK(binom_exact(Int(3), 4) == 0);
    CHECK(binom_exact(Int(0), 0) == 1);
}

TEST_CASE("bounded composition counts match the closed formula") {
    CHECK(count_bounded_compositions({Int(13), 5, Int(7)}) == 1330);
    CHECK(count_bounded_compositions({Int(0), 4, Int(3)}) == 1);
    CHECK(count_bounded_compositions({Int(5), 2, Int(3)}) == 0); // max 2+2

    // stars and bars without a bound
    for (long total : {0, 1, 4, 9}) {
        for (unsigned parts : {1u, 3u, 5u}) {
            CHECK(count_bounded_compositions({Int(total), parts, std::nullopt}) ==
                  binom_exact(Int(total + parts - 1), parts - 1));
        }
    }
}

TEST_CASE("bounded composition counts agree with the DP oracle") {
    for (long total = 0; total <= 24; ++total) {
        for (unsigned parts = 1; parts <= 6; ++parts) {
            for (long bound : {2L, 3L, 5L, 7L, 11L, 0L /* unbounded */}) {
                std::optional<Int> b;
                if (bound > 0) b = Int(bound);
                CHECK(count_bounded_compositions({Int(total), parts, b}) ==
                      testing::count_compositions_dp(Int(total), parts, b));
            }
        }
    }
}

TEST_CASE("coprime composition counts agree with enumeration") {
    for (long total = 1; total <= 18; ++total) {
        for (unsigned parts = 1; parts <= 4; ++parts) {
            for (long bound : {3L, 5L, 8L, 19L}) {
                for (long p : {2L, 3L, 5L}) {
                    Int got = count_coprime_compositions(
                        Int(total), parts, std::optional<Int>(Int(bound)), Int(p));
                    Int want = testing::count_positive_tuples_enumerated(
                        total, parts, bound, p, true);
                    CHECK(got == want);
                }
            }
        }
    }
    // unbounded variant
    for (long total = 1; total <= 14; ++total) {
        Int got = count_coprime_compositions(Int(total), 3, std::nullopt, Int(3));
        Int want = testing::count_positive_tuples_enumerated(total, 3, total + 1,
                                                             3, true);
        CHECK(got == want);
    }
}

TEST_CASE("casolution closed form") {
    CHECK(casolution(Int(7), 1) == 1330); // C(17,4) - 5 C(10,4)
    CHECK(casolution(Int(7), 4) ==
          count_bounded_compositions({Int(10), 5, Int(7)}));
    for (long p : {7L, 11L, 13L, 17L}) {
        for (unsigned a = 1; a <= 4; ++a) {
            CHECK(casolution(Int(p), a) ==
                  count_bounded_compositions({Int(2 * p - a), 5, Int(p)}));
            // p | C_a
            CHECK(mpz_divisible_p(casolution(Int(p), a).get_mpz_t(),
                                  Int(p).get_mpz_t()));
        }
    }
    CHECK_THROWS_AS(casolution(Int(7), 0), usage_error);
    CHECK_THROWS_AS(casolution(Int(7), 5), usage_error);
    CHECK_THROWS_AS(casolution(Int(5), 1), usage_error);
}

TEST_CASE("casolution residues mod p^2") {
    // C_1 = 1330 = 27*49 + 7, and -3/4 * 7 == 7 (mod 49)
    Modulus m49(Int(7), 2);
    CHECK(RingElem(m49, casolution(Int(7), 1)) == reduce(Rational(-21, 4), m49));
}

TEST_CASE("column sums via the DP oracle at p = 7") {
    for (unsigned a = 1; a <= 4; ++a) {
        Int ca = casolution(Int(7), a);
        Int direct = testing::weighted_x1_sum_dp(Int(14 - a), 5,
                                                 std::optional<Int>(Int(7)));
        CHECK(direct * 5 == Int(14 - a) * ca);
        CHECK(mpz_divisible_ui_p(direct.get_mpz_t(), 7));
    }
}
