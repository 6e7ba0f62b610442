#include <doctest.h>

#include "mhs/report.hpp"
#include "mhs/verifier.hpp"

using namespace mhs;

TEST_CASE("MAIN at p = 7, r = 2 passes with both sides 42 mod 49") {
    CheckResult r = run_check({CheckId::MAIN, {{"p", 7}, {"r", 2}}});
    CHECK(r.pass);
    CHECK(!r.rejected);
    CHECK(r.lhs->residue() == 42);
    CHECK(r.rhs->residue() == 42);
    CHECK(r.modulus.str() == "7^2");
    CHECK(r.method == "convolution");
}

TEST_CASE("ZHAO1 at p = 5 passes with both sides 3 mod 5") {
    CheckResult r = run_check({CheckId::ZHAO1, {{"p", 5}}});
    CHECK(r.pass);
    CHECK(r.lhs->residue() == 3);
    CHECK(r.rhs->residue() == 3);
    CHECK(r.method == "bruteforce");
}

TEST_CASE("hypothesis gating rejects without failing") {
    CheckResult r = run_check({CheckId::MAIN, {{"p", 5}, {"r", 2}}});
    CHECK(r.rejected);
    CHECK(!r.pass);
    CHECK(r.reason.find("p > 5") != std::string::npos);
    CHECK(!r.lhs.has_value());

    CheckResult r1 = run_check({CheckId::MAIN, {{"p", 7}, {"r", 1}}});
    CHECK(r1.rejected);
    CHECK(r1.reason.find("r >= 2") != std::string::npos);

    // n = 1 makes B_{p-1} irreducible mod p (von Staudt-Clausen)
    CheckResult r2 = run_check({CheckId::ZHOU_ODD, {{"p", 7}, {"n", 1}}});
    CHECK(r2.rejected);
    CHECK(r2.reason.find("von Staudt-Clausen") != std::string::npos);
}

TEST_CASE("ZHOU over n = 1..5 at p = 7: one result per (parity, n)") {
    auto results = run_suite({CheckId::ZHOU_ODD, CheckId::ZHOU_EVEN}, {7}, {});
    CHECK(results.size() == 5); // n in {1, 3, 5} odd and {2, 4} even
    int rejected = 0;
    for (const CheckResult& r : results) {
        if (r.rejected) {
            ++rejected;
            CHECK(r.spec.params.at("n") == 1);
        } else {
            CHECK(r.pass);
        }
    }
    CHECK(rejected == 1);
}

TEST_CASE("run_suite over the ZHAO1 acceptance primes") {
    auto results = run_suite({CheckId::ZHAO1}, {5, 7, 11, 13}, {});
    CHECK(results.size() == 4);
    for (const CheckResult& r : results) CHECK(r.pass);

    CHECK(run_suite({}, {5, 7}, {}).empty());
}

TEST_CASE("suite results are ordered and thread-count independent") {
    std::vector<CheckId> ids{CheckId::WANG_PP, CheckId::CASOL_RESIDUE,
                             CheckId::ZHAO1};
    SuiteOptions serial;
    SuiteOptions parallel;
    parallel.threads = 4;
    auto a = run_suite(ids, {5, 7}, {1, 2}, serial);
    auto b = run_suite(ids, {5, 7}, {1, 2}, parallel);
    CHECK(suite_to_json(a) == suite_to_json(b));
    // ids come back in enum order: ZHAO1 before WANG_PP before CASOL_RESIDUE
    CHECK(a.front().spec.id == CheckId::ZHAO1);
    CHECK(a.back().spec.id == CheckId::CASOL_RESIDUE);
}

TEST_CASE("recurrence checks certify engine-level consistency") {
    CheckResult s5 = run_check({CheckId::REC_S5, {{"p", 7}, {"r", 2}}});
    CHECK(s5.pass);
    CheckResult s21 = run_check({CheckId::REC_S21, {{"p", 7}, {"r", 1}}});
    CHECK(s21.pass);
    CheckResult line2 =
        run_check({CheckId::REC_S512, {{"p", 7}, {"r", 1}, {"k", 2}}});
    CHECK(line2.pass);
}

TEST_CASE("check id round trip and statements") {
    for (CheckId id : all_check_ids()) {
        auto parsed = parse_check_id(to_string(id));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == id);
        CHECK(statement_of(id) != std::string("?"));
    }
    CHECK(!parse_check_id("NOPE").has_value());
}

TEST_CASE("default suite covers every check id") {
    auto suite = default_suite();
    for (CheckId id : all_check_ids()) {
        bool found = false;
        for (const CheckSpec& spec : suite) {
            if (spec.id == id) {
                found = true;
                break;
            }
        }
        CHECK_MESSAGE(found, to_string(id));
    }
}

TEST_CASE("conjecture_scan reproduces the known coefficients") {
    ScanTable five = conjecture_scan(5, {7, 11, 13}, 2);
    for (const ScanRow& row : five.rows) {
        REQUIRE(row.available);
        Modulus mp(Int(row.p), 1);
        CHECK(*row.ratio == reduce(Rational(-20), mp));
    }

    ScanTable three = conjecture_scan(3, {5, 7}, 2);
    for (const ScanRow& row : three.rows) {
        REQUIRE(row.available);
        Modulus mp(Int(row.p), 1);
        CHECK(*row.ratio == reduce(Rational(-2), mp));
    }

    std::string msg;
    CHECK(scan_calibrates({7, 11, 13}, 2, &msg));
}

TEST_CASE("scan emits data rows for the open n = 7 case") {
    ScanTable t = conjecture_scan(7, {11, 13}, 2);
    CHECK(t.rows.size() == 2);
    for (const ScanRow& row : t.rows) {
        CHECK(row.available);
        CHECK(row.ratio.has_value());
    }

    // p <= n rows are marked, not errors
    ScanTable gated = conjecture_scan(7, {5, 11}, 2);
    CHECK(!gated.rows[0].available);
    CHECK(gated.rows[0].note.find("p > n") != std::string::npos);

    CHECK_THROWS_AS(conjecture_scan(4, {11}, 2), usage_error);
    CHECK_THROWS_AS(conjecture_scan(7, {11}, 1), usage_error);
}
