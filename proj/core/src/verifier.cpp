#include "mhs/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>

#include "mhs/combinatorics.hpp"

namespace mhs {

namespace {

using Clock = std::chrono::steady_clock;

// Internal control flow: a parameter set outside the statement's
// hypotheses. Converted into a rejected CheckResult by run_check.
struct reject_check {
    std::string reason;
    Modulus mod;
};

long need(const CheckParams& prm, const char* key) {
    auto it = prm.find(key);
    if (it == prm.end()) {
        throw usage_error(std::string("missing check parameter '") + key + "'");
    }
    return it->second;
}

std::optional<long> maybe(const CheckParams& prm, const char* key) {
    auto it = prm.find(key);
    if (it == prm.end()) return std::nullopt;
    return it->second;
}

Rational fact(unsigned long n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

Rational pow_p(long p, unsigned long e) {
    Int t;
    mpz_pow_ui(t.get_mpz_t(), Int(p).get_mpz_t(), e);
    return Rational(t);
}

// B_idx with a friendly rejection when p divides the denominator.
Rational bern_checked(long idx, const Modulus& mod) {
    if (idx < 0) throw usage_error("negative Bernoulli index");
    Rational b = bernoulli_exact(static_cast<unsigned>(idx));
    if (mpz_divisible_p(b.get_den().get_mpz_t(), mod.prime().get_mpz_t())) {
        throw reject_check{
            "den(B_" + std::to_string(idx) + ") is divisible by p = " +
                mod.prime().get_str() + " (von Staudt-Clausen)",
            mod};
    }
    return b;
}

RingElem reduce_rhs(const Rational& q, const Modulus& mod) {
    try {
        return reduce(q, mod);
    } catch (const negative_valuation_error& e) {
        throw reject_check{std::string("right side ill-posed: ") + e.what(), mod};
    }
}

enum class Engine { automatic, bruteforce, convolution };

// Targets this small get an independent brute-force confirmation of every
// convolution-produced residue.
constexpr long kCrossCheckTarget = 49;

MhsResult engine_query(const MhsQuery& q, Engine engine,
                       const CheckOptions& opts) {
    auto run = [&](const MhsQuery& qq) -> MhsResult {
        switch (engine) {
        case Engine::bruteforce:
            return mhs_bruteforce(qq, opts.limits);
        case Engine::convolution: {
            MhsResult res = mhs_convolution(qq, opts.limits);
            if (qq.target <= kCrossCheckTarget) {
                MhsResult bf = mhs_bruteforce(qq, opts.limits);
                if (bf.residue != res.residue) {
                    throw std::logic_error(
                        "engine disagreement at target " + qq.target.get_str() +
                        ": convolution " + res.residue.str() + " vs bruteforce " +
                        bf.residue.str());
                }
            }
            return res;
        }
        case Engine::automatic:
        default:
            return compute(qq, opts.limits);
        }
    };
    if (opts.cache) return opts.cache->lookup_or_compute(q, run);
    return run(q);
}

// S_n^(k)(p^r) reduced in Z/p^m.
MhsResult S(unsigned n, unsigned k, long p, unsigned r, unsigned m,
            Engine engine, const CheckOptions& opts) {
    return engine_query(MhsQuery::harmonic(n, k, Int(p), r, m), engine, opts);
}

struct Outcome {
    Modulus mod;
    RingElem lhs;
    RingElem rhs;
    std::string method;
};

void gate(bool ok, const std::string& why, const Modulus& mod) {
    if (!ok) throw reject_check{why, mod};
}

// ---- closed-form congruences for S_n^(1) -----------------------------------

// sum_{i+j+k=p} 1/(ijk) == -2 B_{p-3} (mod p)
Outcome check_zhao1(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    Modulus mod{Int(p), 1};
    gate(p >= 3, "requires p >= 3", mod);
    MhsResult lhs = S(3, 1, p, 1, 1, Engine::bruteforce, opts);
    RingElem rhs = reduce_rhs(Rational(-2) * bern_checked(p - 3, mod), mod);
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// S_n^(1)(p), odd n: == -(n-1)! B_{p-n} (mod p)
// S_n^(1)(p), even n: == -n/(2(n+1)) n! B_{p-n-1} p (mod p^2)
Outcome check_zhou(const CheckParams& prm, const CheckOptions& opts, bool odd) {
    long p = need(prm, "p");
    long n = need(prm, "n");
    if ((n % 2 == 1) != odd) {
        throw usage_error("n parity does not match the check id");
    }
    Modulus mod{Int(p), odd ? 1u : 2u};
    gate(p >= 5, "requires p >= 5", mod);
    gate(n >= 1 && n <= p - 2, "requires 1 <= n <= p-2", mod);
    Rational rhs_q;
    if (odd) {
        rhs_q = -fact(n - 1) * bern_checked(p - n, mod);
    } else {
        rhs_q = -Rational(n, 2 * (n + 1)) * fact(n) *
                bern_checked(p - n - 1, mod) * Rational(p);
    }
    RingElem rhs = reduce_rhs(rhs_q, mod);
    MhsResult lhs = S(static_cast<unsigned>(n), 1, p, 1, mod.exponent(),
                      Engine::bruteforce, opts);
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// S_3^(1)(p^r) == -2 p^(r-1) B_{p-3} (mod p^r)
Outcome check_wang_pp(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r))};
    gate(p >= 3, "requires p >= 3", mod);
    gate(r >= 1, "requires r >= 1", mod);
    MhsResult lhs = S(3, 1, p, static_cast<unsigned>(r),
                      static_cast<unsigned>(r), Engine::convolution, opts);
    RingElem rhs = reduce_rhs(
        Rational(-2) * pow_p(p, r - 1) * bern_checked(p - 3, mod), mod);
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// S_4^(1)(p^r) == -(4!/5) p^r B_{p-5} (mod p^(r+1))
Outcome check_zhao4(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r) + 1)};
    gate(p >= 5, "requires p >= 5", mod);
    gate(r >= 2, "requires r >= 2", mod);
    MhsResult lhs = S(4, 1, p, static_cast<unsigned>(r),
                      static_cast<unsigned>(r + 1), Engine::convolution, opts);
    RingElem rhs = reduce_rhs(
        Rational(-24, 5) * pow_p(p, r) * bern_checked(p - 5, mod), mod);
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// S_5^(1)(p^r) == -(5!/6) p^(r-1) B_{p-5} (mod p^r)
Outcome check_main(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r))};
    gate(p > 5, "requires p > 5", mod);
    gate(r >= 2, "requires r >= 2", mod);
    MhsResult lhs = S(5, 1, p, static_cast<unsigned>(r),
                      static_cast<unsigned>(r), Engine::convolution, opts);
    RingElem rhs = reduce_rhs(
        Rational(-20) * pow_p(p, r - 1) * bern_checked(p - 5, mod), mod);
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// sum over l_1+...+l_5 = mp, parts in P_p:
//   == -(4!/6)(5m + m^3) B_{p-5} (mod p)
Outcome check_thm2_r1(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long m = need(prm, "m");
    Modulus mod{Int(p), 1};
    gate(p > 5, "requires p > 5", mod);
    gate(m >= 1, "requires m >= 1", mod);
    gate(m % p != 0, "requires p not dividing m = n/p", mod);
    MhsQuery q = MhsQuery::with_sum(5, Int(m) * p, Int(p), 1);
    MhsResult lhs = engine_query(q, Engine::convolution, opts);
    Rational coeff = Rational(-4) * Rational(5 * m + m * m * m);
    RingElem rhs = reduce_rhs(coeff * bern_checked(p - 5, mod), mod);
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// sum over l_1+...+l_5 = m p^r, parts in P_p:
//   == -(5!/6) (n/p) B_{p-5} (mod p^r), n/p = m p^(r-1)
Outcome check_thm2_rge2(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    long m = need(prm, "m");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r))};
    gate(p > 5, "requires p > 5", mod);
    gate(r >= 2, "requires r >= 2", mod);
    gate(m >= 1, "requires m >= 1", mod);
    gate(m % p != 0, "requires p not dividing m", mod);
    Int pr;
    mpz_pow_ui(pr.get_mpz_t(), Int(p).get_mpz_t(), static_cast<unsigned long>(r));
    MhsQuery q = MhsQuery::with_sum(5, Int(m) * pr, Int(p),
                                    static_cast<unsigned>(r));
    MhsResult lhs = engine_query(q, Engine::convolution, opts);
    RingElem rhs = reduce_rhs(
        Rational(-20) * Rational(m) * pow_p(p, r - 1) * bern_checked(p - 5, mod),
        mod);
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// ---- reflection and lifting identities --------------------------------------

// S_n^(k)(p^r) == (-1)^n S_n^(n-k)(p^r) (mod p^r)
Outcome check_rec_i(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    long n = need(prm, "n");
    long k = need(prm, "k");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r))};
    gate(p > n, "requires p > n", mod);
    gate(r >= 1, "requires r >= 1", mod);
    gate(k >= 1 && k <= n - 1, "requires 1 <= k <= n-1", mod);
    MhsResult lhs = S(static_cast<unsigned>(n), static_cast<unsigned>(k), p,
                      static_cast<unsigned>(r), static_cast<unsigned>(r),
                      Engine::automatic, opts);
    MhsResult other = S(static_cast<unsigned>(n), static_cast<unsigned>(n - k),
                        p, static_cast<unsigned>(r), static_cast<unsigned>(r),
                        Engine::automatic, opts);
    RingElem rhs = (n % 2 == 0) ? other.residue : -other.residue;
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// S_n^(1)(p^(r+1)) == sum_{k=1}^{n-1} C(p-k+n-1, n-1) S_n^(k)(p^r)
//   (mod p^(r+1))
Outcome check_rec_ii(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    long n = need(prm, "n");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r) + 1)};
    gate(p > n, "requires p > n", mod);
    gate(r >= 1, "requires r >= 1", mod);
    MhsResult lhs = S(static_cast<unsigned>(n), 1, p,
                      static_cast<unsigned>(r + 1), mod.exponent(),
                      Engine::automatic, opts);
    RingElem rhs = RingElem::zero(mod);
    for (long k = 1; k <= n - 1; ++k) {
        Int c = binom_exact(Int(p - k + n - 1), static_cast<unsigned long>(n - 1));
        MhsResult sk = S(static_cast<unsigned>(n), static_cast<unsigned>(k), p,
                         static_cast<unsigned>(r), mod.exponent(),
                         Engine::automatic, opts);
        rhs = rhs + RingElem(mod, c) * sk.residue;
    }
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// ---- bounded solution counts C_a ---------------------------------------------

const Rational& casol_coefficient(long a) {
    static const Rational coef[4] = {Rational(-3, 4), Rational(1, 4),
                                     Rational(-1, 4), Rational(3, 4)};
    return coef[a - 1];
}

// C_a == {-3/4, 1/4, -1/4, 3/4}[a] p (mod p^2)
Outcome check_casol_residue(const CheckParams& prm, const CheckOptions&) {
    long p = need(prm, "p");
    long a = need(prm, "a");
    Modulus mod{Int(p), 2};
    gate(p > 5, "requires p > 5", mod);
    gate(a >= 1 && a <= 4, "requires 1 <= a <= 4", mod);
    Int ca = casolution(Int(p), static_cast<unsigned>(a));
    Int counted = count_bounded_compositions({Int(2 * p - a), 5, Int(p)});
    if (ca != counted) {
        throw std::logic_error("C_a closed form " + ca.get_str() +
                               " disagrees with bounded-composition count " +
                               counted.get_str());
    }
    RingElem lhs(mod, ca);
    RingElem rhs = reduce_rhs(casol_coefficient(a) * Rational(p), mod);
    return {mod, lhs, rhs, "formula"};
}

// sum over solutions of x_1 = ((2p-a)/5) C_a == 0 (mod p)
Outcome check_casol_colsum(const CheckParams& prm, const CheckOptions&) {
    long p = need(prm, "p");
    long a = need(prm, "a");
    Modulus mod{Int(p), 1};
    gate(p > 5, "requires p > 5", mod);
    gate(a >= 1 && a <= 4, "requires 1 <= a <= 4", mod);
    Int ca = casolution(Int(p), static_cast<unsigned>(a));
    Int num = Int(2 * p - a) * ca;
    if (!mpz_divisible_ui_p(num.get_mpz_t(), 5)) {
        throw std::logic_error("(2p-a) C_a is not divisible by 5");
    }
    RingElem lhs(mod, num / 5);
    return {mod, lhs, RingElem::zero(mod), "formula"};
}

// ---- distinct-index power sums -----------------------------------------------

std::vector<unsigned> alphas_from(const CheckParams& prm) {
    std::vector<unsigned> alphas;
    for (const char* key : {"a1", "a2", "a3", "a4", "a5", "a6"}) {
        if (auto v = maybe(prm, key)) {
            if (*v < 1) throw usage_error("alpha parts must be >= 1");
            alphas.push_back(static_cast<unsigned>(*v));
        }
    }
    if (alphas.empty()) throw usage_error("missing alpha parameters a1..");
    return alphas;
}

// Distinct-index sums against the Bernoulli closed forms. `two_p` selects
// the range [1, 2p) minus p (with the doubled coefficients) instead of
// [1, p).
Outcome check_distinct_power_sums(const CheckParams& prm, const CheckOptions&,
                             bool two_p) {
    long p = need(prm, "p");
    std::vector<unsigned> alphas = alphas_from(prm);
    unsigned long n = alphas.size();
    long rsum = 0;
    for (unsigned a : alphas) rsum += a;
    bool odd = rsum % 2 == 1;
    Modulus mod{Int(p), odd ? 3u : 2u};
    gate(two_p ? p >= 3 : p >= 2, "requires a prime p", mod);
    gate(rsum <= p - 3, "requires sum of alphas <= p-3", mod);
    gate(p > static_cast<long>(n), "requires p > n", mod);

    RingElem lhs = distinct_tuple_sum(
        alphas, two_p ? SumRange::below_2p_excl_p : SumRange::below_p, mod);

    int sign_flip = (n + (odd ? 0 : 1)) % 2 == 0 ? 1 : -1; // (-1)^n or (-1)^(n-1)
    Rational coeff;
    if (odd) {
        // r(r+1)/(2(r+2)) over [1, p); 2r(r+1)/(r+2) over [1, 2p) \ {p}
        coeff = Rational(rsum) * Rational(rsum + 1) / Rational(rsum + 2);
        if (two_p) {
            coeff *= 2;
        } else {
            coeff /= 2;
        }
    } else {
        // r/(r+1) over [1, p); 2r/(r+1) over [1, 2p) \ {p}
        coeff = Rational(rsum) / Rational(rsum + 1);
        if (two_p) coeff *= 2;
    }
    long bidx = odd ? p - rsum - 2 : p - rsum - 1;
    Rational rhs_q = Rational(sign_flip) * fact(n - 1) * coeff *
                     bern_checked(bidx, mod) *
                     (odd ? pow_p(p, 2) : pow_p(p, 1));
    RingElem rhs = reduce_rhs(rhs_q, mod);
    return {mod, lhs, rhs, "moebius"};
}

// sum 1/l^alpha over the range == 0 (mod p^2 for odd alpha, mod p for even)
Outcome check_power_sum_corollary(const CheckParams& prm, const CheckOptions&,
                                  bool two_p) {
    long p = need(prm, "p");
    long alpha = need(prm, "alpha");
    bool odd = alpha % 2 == 1;
    Modulus mod{Int(p), odd ? 2u : 1u};
    gate(alpha >= 1, "requires alpha >= 1", mod);
    gate(p >= alpha + 3, "requires p >= alpha + 3", mod);
    RingElem lhs = power_sum(
        static_cast<unsigned>(alpha),
        two_p ? SumRange::below_2p_excl_p : SumRange::below_p, mod);
    return {mod, lhs, RingElem::zero(mod), "powersum"};
}

// ---- the bounded 2p sum -------------------------------------------------------

// sum over l_1+...+l_5 = 2p, 1 <= l_i < p: == 2*4! B_{p-5} (mod p).
// Also replays the decomposition of the unbounded 2p sum into
// S_5^(2)(p) + 5 S_5^(1)(p) used to close the proof.
Outcome check_s52modp(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    Modulus mod{Int(p), 1};
    gate(p > 5, "requires p > 5", mod);
    MhsQuery bounded{5, Int(2 * p), Int(p), 1, Int(p), true, 1};
    MhsResult lhs = engine_query(bounded, Engine::bruteforce, opts);
    RingElem rhs = reduce_rhs(Rational(48) * bern_checked(p - 5, mod), mod);

    MhsResult unbounded = engine_query(
        MhsQuery::with_sum(5, Int(2 * p), Int(p), 1), Engine::automatic, opts);
    MhsResult s51 = S(5, 1, p, 1, 1, Engine::automatic, opts);
    RingElem recomposed = lhs.residue + RingElem(mod, 5) * s51.residue;
    if (unbounded.residue != recomposed) {
        throw std::logic_error(
            "2p-sum decomposition failed: unbounded " + unbounded.residue.str() +
            " vs S_5^(2)(p) + 5 S_5^(1)(p) = " + recomposed.str());
    }
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// ---- Recurrences -----------------------------------------------------------

// S_5^(2)(p^(r+1)) == (C_1-C_4) S_5^(1)(p^r) + (C_2-C_3) S_5^(2)(p^r)
//   (mod p^(r+1))
Outcome check_rec_add1(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r) + 1)};
    gate(p > 5, "requires p > 5", mod);
    gate(r >= 1, "requires r >= 1", mod);
    unsigned m = mod.exponent();
    MhsResult lhs = S(5, 2, p, static_cast<unsigned>(r + 1), m,
                      Engine::convolution, opts);
    Int c1 = casolution(Int(p), 1), c2 = casolution(Int(p), 2);
    Int c3 = casolution(Int(p), 3), c4 = casolution(Int(p), 4);
    MhsResult s1 = S(5, 1, p, static_cast<unsigned>(r), m, Engine::convolution, opts);
    MhsResult s2 = S(5, 2, p, static_cast<unsigned>(r), m, Engine::convolution, opts);
    RingElem rhs = RingElem(mod, c1 - c4) * s1.residue +
                   RingElem(mod, c2 - c3) * s2.residue;
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// S_5^(1)(p^(r+1)) == p(p^2+1)/2 S_5^(1)(p^r) + p(p^2-1)/6 S_5^(2)(p^r)
//   (mod p^(r+1))
Outcome check_rec_add2(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r) + 1)};
    gate(p > 5, "requires p > 5", mod);
    gate(r >= 1, "requires r >= 1", mod);
    unsigned m = mod.exponent();
    MhsResult lhs = S(5, 1, p, static_cast<unsigned>(r + 1), m,
                      Engine::convolution, opts);
    MhsResult s1 = S(5, 1, p, static_cast<unsigned>(r), m, Engine::convolution, opts);
    MhsResult s2 = S(5, 2, p, static_cast<unsigned>(r), m, Engine::convolution, opts);
    Rational pq(p);
    RingElem rhs = reduce_rhs(pq * (pq * pq + 1) / 2, mod) * s1.residue +
                   reduce_rhs(pq * (pq * pq - 1) / 6, mod) * s2.residue;
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// Line k of:
//   S_5^(1)(p^(r+1)) == (1/2) p S_5^(1)(p^r) - (1/6) p S_5^(2)(p^r)
//   S_5^(2)(p^(r+1)) == -(3/2) p S_5^(1)(p^r) + (1/2) p S_5^(2)(p^r)
// both mod p^(r+1)
Outcome check_rec_s512(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    long line = need(prm, "k");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r) + 1)};
    gate(p > 5, "requires p > 5", mod);
    gate(r >= 1, "requires r >= 1", mod);
    if (line != 1 && line != 2) throw usage_error("REC_S512 line k must be 1 or 2");
    unsigned m = mod.exponent();
    MhsResult lhs = S(5, line == 1 ? 1 : 2, p, static_cast<unsigned>(r + 1), m,
                      Engine::convolution, opts);
    MhsResult s1 = S(5, 1, p, static_cast<unsigned>(r), m, Engine::convolution, opts);
    MhsResult s2 = S(5, 2, p, static_cast<unsigned>(r), m, Engine::convolution, opts);
    Rational pq(p);
    RingElem rhs = line == 1
        ? reduce_rhs(pq / 2, mod) * s1.residue +
              reduce_rhs(-pq / 6, mod) * s2.residue
        : reduce_rhs(Rational(-3) * pq / 2, mod) * s1.residue +
              reduce_rhs(pq / 2, mod) * s2.residue;
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// S_5^(2)(p^(r+1)) == -3 S_5^(1)(p^(r+1)) (mod p^(r+1))
Outcome check_rec_s21(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r) + 1)};
    gate(p > 5, "requires p > 5", mod);
    gate(r >= 1, "requires r >= 1", mod);
    unsigned m = mod.exponent();
    MhsResult lhs = S(5, 2, p, static_cast<unsigned>(r + 1), m,
                      Engine::convolution, opts);
    MhsResult s1 = S(5, 1, p, static_cast<unsigned>(r + 1), m,
                     Engine::convolution, opts);
    RingElem rhs = RingElem(mod, -3) * s1.residue;
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// S_5^(1)(p^(r+1)) == p S_5^(1)(p^r) (mod p^(r+1))
Outcome check_rec_s5(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r) + 1)};
    gate(p > 5, "requires p > 5", mod);
    gate(r >= 2, "requires r >= 2", mod);
    unsigned m = mod.exponent();
    MhsResult lhs = S(5, 1, p, static_cast<unsigned>(r + 1), m,
                      Engine::convolution, opts);
    MhsResult s1 = S(5, 1, p, static_cast<unsigned>(r), m, Engine::convolution, opts);
    RingElem rhs = RingElem(mod, Int(p)) * s1.residue;
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

// sum over l_1+...+l_5 = m p^r, parts in P_p:
//   == sum_{a=1}^{4} C(m+4-a, 4) S_5^(a)(p^r) (mod p^r)
Outcome check_rec_thm2(const CheckParams& prm, const CheckOptions& opts) {
    long p = need(prm, "p");
    long r = need(prm, "r");
    long m = need(prm, "m");
    Modulus mod{Int(p), static_cast<unsigned>(std::max(1L, r))};
    gate(p > 5, "requires p > 5", mod);
    gate(r >= 1, "requires r >= 1", mod);
    gate(m >= 1, "requires m >= 1", mod);
    gate(m % p != 0, "requires p not dividing m", mod);
    Int pr;
    mpz_pow_ui(pr.get_mpz_t(), Int(p).get_mpz_t(), static_cast<unsigned long>(r));
    MhsResult lhs = engine_query(
        MhsQuery::with_sum(5, Int(m) * pr, Int(p), mod.exponent()),
        Engine::convolution, opts);
    RingElem rhs = RingElem::zero(mod);
    for (long a = 1; a <= 4; ++a) {
        Int c = binom_exact(Int(m + 4 - a), 4);
        if (c == 0) continue;
        MhsResult sa = S(5, static_cast<unsigned>(a), p,
                         static_cast<unsigned>(r), mod.exponent(),
                         Engine::convolution, opts);
        rhs = rhs + RingElem(mod, c) * sa.residue;
    }
    return {mod, lhs.residue, rhs, to_string(lhs.method)};
}

Outcome dispatch(const CheckSpec& spec, const CheckOptions& opts) {
    switch (spec.id) {
    case CheckId::ZHAO1:         return check_zhao1(spec.params, opts);
    case CheckId::ZHOU_ODD:      return check_zhou(spec.params, opts, true);
    case CheckId::ZHOU_EVEN:     return check_zhou(spec.params, opts, false);
    case CheckId::WANG_PP:       return check_wang_pp(spec.params, opts);
    case CheckId::ZHAO4:         return check_zhao4(spec.params, opts);
    case CheckId::MAIN:          return check_main(spec.params, opts);
    case CheckId::THM2_R1:       return check_thm2_r1(spec.params, opts);
    case CheckId::THM2_RGE2:     return check_thm2_rge2(spec.params, opts);
    case CheckId::REC_I:         return check_rec_i(spec.params, opts);
    case CheckId::REC_II:        return check_rec_ii(spec.params, opts);
    case CheckId::CASOL_RESIDUE: return check_casol_residue(spec.params, opts);
    case CheckId::CASOL_COLSUM:  return check_casol_colsum(spec.params, opts);
    case CheckId::ZHOUXIA:       return check_distinct_power_sums(spec.params, opts, false);
    case CheckId::COR_LEMCOR:    return check_power_sum_corollary(spec.params, opts, false);
    case CheckId::LEMMA_2P:      return check_distinct_power_sums(spec.params, opts, true);
    case CheckId::COR_LEMCOR2:   return check_power_sum_corollary(spec.params, opts, true);
    case CheckId::S52MODP:       return check_s52modp(spec.params, opts);
    case CheckId::REC_ADD1:      return check_rec_add1(spec.params, opts);
    case CheckId::REC_ADD2:      return check_rec_add2(spec.params, opts);
    case CheckId::REC_S512:      return check_rec_s512(spec.params, opts);
    case CheckId::REC_S21:       return check_rec_s21(spec.params, opts);
    case CheckId::REC_S5:        return check_rec_s5(spec.params, opts);
    case CheckId::REC_THM2:      return check_rec_thm2(spec.params, opts);
    }
    throw usage_error("unknown check id");
}

} // namespace

const char* to_string(CheckId id) {
    switch (id) {
    case CheckId::ZHAO1:         return "ZHAO1";
    case CheckId::ZHOU_ODD:      return "ZHOU_ODD";
    case CheckId::ZHOU_EVEN:     return "ZHOU_EVEN";
    case CheckId::WANG_PP:       return "WANG_PP";
    case CheckId::ZHAO4:         return "ZHAO4";
    case CheckId::MAIN:          return "MAIN";
    case CheckId::THM2_R1:       return "THM2_R1";
    case CheckId::THM2_RGE2:     return "THM2_RGE2";
    case CheckId::REC_I:         return "REC_I";
    case CheckId::REC_II:        return "REC_II";
    case CheckId::CASOL_RESIDUE: return "CASOL_RESIDUE";
    case CheckId::CASOL_COLSUM:  return "CASOL_COLSUM";
    case CheckId::ZHOUXIA:       return "ZHOUXIA";
    case CheckId::COR_LEMCOR:    return "COR_LEMCOR";
    case CheckId::LEMMA_2P:      return "LEMMA_2P";
    case CheckId::COR_LEMCOR2:   return "COR_LEMCOR2";
    case CheckId::S52MODP:       return "S52MODP";
    case CheckId::REC_ADD1:      return "REC_ADD1";
    case CheckId::REC_ADD2:      return "REC_ADD2";
    case CheckId::REC_S512:      return "REC_S512";
    case CheckId::REC_S21:       return "REC_S21";
    case CheckId::REC_S5:        return "REC_S5";
    case CheckId::REC_THM2:      return "REC_THM2";
    }
    return "?";
}

std::optional<CheckId> parse_check_id(std::string_view s) {
    for (CheckId id : all_check_ids()) {
        if (s == to_string(id)) return id;
    }
    return std::nullopt;
}

const std::vector<CheckId>& all_check_ids() {
    static const std::vector<CheckId> ids = {
        CheckId::ZHAO1,       CheckId::ZHOU_ODD,    CheckId::ZHOU_EVEN,
        CheckId::WANG_PP,     CheckId::ZHAO4,       CheckId::MAIN,
        CheckId::THM2_R1,     CheckId::THM2_RGE2,   CheckId::REC_I,
        CheckId::REC_II,      CheckId::CASOL_RESIDUE, CheckId::CASOL_COLSUM,
        CheckId::ZHOUXIA,     CheckId::COR_LEMCOR,  CheckId::LEMMA_2P,
        CheckId::COR_LEMCOR2, CheckId::S52MODP,     CheckId::REC_ADD1,
        CheckId::REC_ADD2,    CheckId::REC_S512,    CheckId::REC_S21,
        CheckId::REC_S5,      CheckId::REC_THM2,
    };
    return ids;
}

const char* statement_of(CheckId id) {
    switch (id) {
    case CheckId::ZHAO1:
        return "sum_{i+j+k=p} 1/(ijk) == -2 B_{p-3} (mod p)";
    case CheckId::ZHOU_ODD:
        return "S_n^(1)(p) == -(n-1)! B_{p-n} (mod p), n odd";
    case CheckId::ZHOU_EVEN:
        return "S_n^(1)(p) == -(n/(2(n+1))) n! B_{p-n-1} p (mod p^2), n even";
    case CheckId::WANG_PP:
        return "S_3^(1)(p^r) == -2 p^(r-1) B_{p-3} (mod p^r)";
    case CheckId::ZHAO4:
        return "S_4^(1)(p^r) == -(4!/5) p^r B_{p-5} (mod p^(r+1))";
    case CheckId::MAIN:
        return "S_5^(1)(p^r) == -(5!/6) p^(r-1) B_{p-5} (mod p^r)";
    case CheckId::THM2_R1:
        return "sum_{|l|=mp, l in P_p^5} 1/prod(l) == -(4!/6)(5m+m^3) B_{p-5} (mod p)";
    case CheckId::THM2_RGE2:
        return "sum_{|l|=mp^r, l in P_p^5} 1/prod(l) == -(5!/6) m p^(r-1) B_{p-5} (mod p^r)";
    case CheckId::REC_I:
        return "S_n^(k)(p^r) == (-1)^n S_n^(n-k)(p^r) (mod p^r)";
    case CheckId::REC_II:
        return "S_n^(1)(p^(r+1)) == sum_k C(p-k+n-1, n-1) S_n^(k)(p^r) (mod p^(r+1))";
    case CheckId::CASOL_RESIDUE:
        return "C_a == [-3/4, 1/4, -1/4, 3/4][a] p (mod p^2)";
    case CheckId::CASOL_COLSUM:
        return "((2p-a)/5) C_a == 0 (mod p)";
    case CheckId::ZHOUXIA:
        return "sum over distinct l_i in [1, p-1] of prod 1/l_i^a_i vs Bernoulli form";
    case CheckId::COR_LEMCOR:
        return "sum_{1<=l<p} 1/l^alpha == 0 (mod p^2 if alpha odd, p if even)";
    case CheckId::LEMMA_2P:
        return "sum over distinct l_i in [1, 2p) \\ {p} of prod 1/l_i^a_i vs Bernoulli form";
    case CheckId::COR_LEMCOR2:
        return "sum_{1<=l<2p, l!=p} 1/l^alpha == 0 (mod p^2 if alpha odd, p if even)";
    case CheckId::S52MODP:
        return "S_5^(2)(p) == 2*4! B_{p-5} (mod p)";
    case CheckId::REC_ADD1:
        return "S_5^(2)(p^(r+1)) == (C_1-C_4) S_5^(1)(p^r) + (C_2-C_3) S_5^(2)(p^r) (mod p^(r+1))";
    case CheckId::REC_ADD2:
        return "S_5^(1)(p^(r+1)) == p(p^2+1)/2 S_5^(1)(p^r) + p(p^2-1)/6 S_5^(2)(p^r) (mod p^(r+1))";
    case CheckId::REC_S512:
        return "S_5^(k)(p^(r+1)) == [1/2, -1/6; -3/2, 1/2] p [S_5^(1); S_5^(2)](p^r), line k (mod p^(r+1))";
    case CheckId::REC_S21:
        return "S_5^(2)(p^(r+1)) == -3 S_5^(1)(p^(r+1)) (mod p^(r+1))";
    case CheckId::REC_S5:
        return "S_5^(1)(p^(r+1)) == p S_5^(1)(p^r) (mod p^(r+1))";
    case CheckId::REC_THM2:
        return "sum_{|l|=mp^r} 1/prod(l) == sum_a C(m+4-a, 4) S_5^(a)(p^r) (mod p^r)";
    }
    return "?";
}

CheckResult run_check(const CheckSpec& spec, const CheckOptions& opts) {
    auto t0 = Clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double, std::milli>(Clock::now() - t0)
            .count();
    };
    try {
        Outcome out = dispatch(spec, opts);
        CheckResult res{spec,      out.mod, out.lhs, out.rhs, false, false,
                        "",        out.method, 0.0};
        res.pass = out.lhs == out.rhs;
        res.elapsed_ms = elapsed();
        return res;
    } catch (const reject_check& rj) {
        CheckResult res{spec, rj.mod,      std::nullopt, std::nullopt, false,
                        true, rj.reason,   "",           0.0};
        res.elapsed_ms = elapsed();
        return res;
    }
}

std::vector<CheckResult> run_suite(const std::vector<CheckSpec>& specs,
                                   const SuiteOptions& opts) {
    std::vector<std::optional<CheckResult>> slots(specs.size());
    std::atomic<size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= specs.size() || stop.load()) break;
            try {
                CheckResult r = run_check(specs[i], opts.check);
                if (opts.fail_fast && !r.rejected && !r.pass) stop.store(true);
                slots[i] = std::move(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                stop.store(true);
            }
        }
    };

    unsigned threads = std::max(1u, opts.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t + 1 < threads; ++t) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::vector<CheckResult> results;
    results.reserve(specs.size());
    for (auto& slot : slots) {
        if (slot) results.push_back(std::move(*slot));
    }
    return results;
}

namespace {

std::vector<std::vector<unsigned>> distinct_alpha_grid() {
    // Nondecreasing exponent vectors with n <= 3 and total <= 6.
    std::vector<std::vector<unsigned>> grid;
    for (unsigned a = 1; a <= 6; ++a) grid.push_back({a});
    for (unsigned a = 1; a <= 6; ++a)
        for (unsigned b = a; a + b <= 6; ++b) grid.push_back({a, b});
    for (unsigned a = 1; a <= 6; ++a)
        for (unsigned b = a; b <= 6; ++b)
            for (unsigned c = b; a + b + c <= 6; ++c) grid.push_back({a, b, c});
    return grid;
}

// The r grid each statement commits to when the caller does not override it.
std::vector<unsigned> default_r_grid(CheckId id) {
    switch (id) {
    case CheckId::WANG_PP: return {1, 2, 3};
    case CheckId::ZHAO4:
    case CheckId::MAIN: return {2, 3};
    case CheckId::THM2_RGE2:
    case CheckId::REC_S5: return {2};
    case CheckId::REC_II: return {1};
    default: return {1, 2};
    }
}

std::vector<CheckSpec> expand_for_id(CheckId id, const std::vector<long>& primes,
                                     const std::vector<unsigned>& rs) {
    std::vector<CheckSpec> out;
    auto add = [&](CheckParams prm) { out.push_back({id, std::move(prm)}); };
    auto r_or = [&]() {
        return rs.empty() ? default_r_grid(id) : rs;
    };
    switch (id) {
    case CheckId::ZHAO1:
    case CheckId::S52MODP:
        for (long p : primes) add({{"p", p}});
        break;
    case CheckId::ZHOU_ODD:
    case CheckId::ZHOU_EVEN:
        for (long p : primes) {
            long nmax = std::min(p - 2, 8L);
            for (long n = id == CheckId::ZHOU_ODD ? 1 : 2; n <= nmax; n += 2) {
                add({{"p", p}, {"n", n}});
            }
        }
        break;
    case CheckId::WANG_PP:
    case CheckId::ZHAO4:
    case CheckId::MAIN:
    case CheckId::REC_ADD1:
    case CheckId::REC_ADD2:
    case CheckId::REC_S21:
    case CheckId::REC_S5:
        for (long p : primes)
            for (unsigned r : r_or())
                add({{"p", p}, {"r", static_cast<long>(r)}});
        break;
    case CheckId::THM2_R1:
        for (long p : primes)
            for (long m : {2, 3, 4, 6})
                if (m % p != 0) add({{"p", p}, {"m", m}});
        break;
    case CheckId::THM2_RGE2:
        for (long p : primes)
            for (unsigned r : r_or())
                for (long m : {2, 3})
                    if (m % p != 0)
                        add({{"p", p}, {"r", static_cast<long>(r)}, {"m", m}});
        break;
    case CheckId::REC_I:
        for (long p : primes)
            for (unsigned r : r_or())
                for (long n : {3, 4, 5})
                    for (long k = 1; k <= n - 1; ++k)
                        add({{"p", p},
                             {"r", static_cast<long>(r)},
                             {"n", n},
                             {"k", k}});
        break;
    case CheckId::REC_II:
        for (long p : primes)
            for (unsigned r : r_or())
                for (long n : {3, 5})
                    add({{"p", p}, {"r", static_cast<long>(r)}, {"n", n}});
        break;
    case CheckId::CASOL_RESIDUE:
    case CheckId::CASOL_COLSUM:
        for (long p : primes)
            for (long a = 1; a <= 4; ++a) add({{"p", p}, {"a", a}});
        break;
    case CheckId::ZHOUXIA:
    case CheckId::LEMMA_2P:
        for (long p : primes) {
            for (const auto& alphas : distinct_alpha_grid()) {
                CheckParams prm{{"p", p}};
                static const char* keys[] = {"a1", "a2", "a3"};
                for (size_t i = 0; i < alphas.size(); ++i) {
                    prm[keys[i]] = static_cast<long>(alphas[i]);
                }
                add(std::move(prm));
            }
        }
        break;
    case CheckId::COR_LEMCOR:
    case CheckId::COR_LEMCOR2:
        for (long p : primes)
            for (long alpha = 1; alpha <= 6; ++alpha)
                add({{"p", p}, {"alpha", alpha}});
        break;
    case CheckId::REC_S512:
        for (long p : primes)
            for (unsigned r : r_or())
                for (long line : {1, 2})
                    add({{"p", p}, {"r", static_cast<long>(r)}, {"k", line}});
        break;
    case CheckId::REC_THM2:
        for (long p : primes)
            for (unsigned r : r_or())
                for (long m : {2, 3})
                    if (m % p != 0)
                        add({{"p", p}, {"r", static_cast<long>(r)}, {"m", m}});
        break;
    }
    return out;
}

} // namespace

std::vector<CheckSpec> expand_grid(const std::vector<CheckId>& ids,
                                   const std::vector<long>& primes,
                                   const std::vector<unsigned>& r_values) {
    std::vector<CheckId> ordered = ids;
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
    std::vector<long> ps = primes;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<unsigned> rs = r_values;
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());

    std::vector<CheckSpec> out;
    for (CheckId id : ordered) {
        auto part = expand_for_id(id, ps, rs);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::vector<CheckResult> run_suite(const std::vector<CheckId>& ids,
                                   const std::vector<long>& primes,
                                   const std::vector<unsigned>& r_values,
                                   const SuiteOptions& opts) {
    return run_suite(expand_grid(ids, primes, r_values), opts);
}

std::vector<CheckSpec> default_suite() {
    std::vector<CheckSpec> out;
    auto app = [&](std::vector<CheckSpec> v) {
        out.insert(out.end(), std::make_move_iterator(v.begin()),
                   std::make_move_iterator(v.end()));
    };
    app(expand_for_id(CheckId::ZHAO1, {5, 7, 11, 13}, {}));
    app(expand_for_id(CheckId::ZHOU_ODD, {7, 11, 13}, {}));
    app(expand_for_id(CheckId::ZHOU_EVEN, {7, 11, 13}, {}));
    app(expand_for_id(CheckId::WANG_PP, {3, 5, 7}, {}));
    app(expand_for_id(CheckId::ZHAO4, {5, 7}, {}));
    app(expand_for_id(CheckId::MAIN, {7, 11, 13}, {}));
    app(expand_for_id(CheckId::THM2_R1, {7, 11}, {}));
    app(expand_for_id(CheckId::THM2_RGE2, {7}, {}));
    app(expand_for_id(CheckId::REC_I, {7, 11}, {}));
    app(expand_for_id(CheckId::REC_II, {7}, {}));
    app(expand_for_id(CheckId::CASOL_RESIDUE, {7, 11, 13, 17}, {}));
    app(expand_for_id(CheckId::CASOL_COLSUM, {7, 11, 13, 17}, {}));
    app(expand_for_id(CheckId::ZHOUXIA, {13}, {}));
    app(expand_for_id(CheckId::COR_LEMCOR, {13}, {}));
    app(expand_for_id(CheckId::LEMMA_2P, {13}, {}));
    app(expand_for_id(CheckId::COR_LEMCOR2, {13}, {}));
    app(expand_for_id(CheckId::S52MODP, {7, 11, 13}, {}));
    app(expand_for_id(CheckId::REC_ADD1, {7, 11}, {}));
    app(expand_for_id(CheckId::REC_ADD2, {7, 11}, {}));
    app(expand_for_id(CheckId::REC_S512, {7, 11}, {}));
    app(expand_for_id(CheckId::REC_S21, {7, 11}, {}));
    app(expand_for_id(CheckId::REC_S5, {7, 11}, {}));
    app(expand_for_id(CheckId::REC_THM2, {7, 11}, {}));
    return out;
}

ScanTable conjecture_scan(unsigned n, const std::vector<long>& primes,
                          unsigned r, const CheckOptions& opts) {
    if (n < 3 || n % 2 == 0) throw usage_error("scan needs an odd n >= 3");
    if (r < 2) throw usage_error("scan needs r >= 2");
    ScanTable table{n, r, {}};
    for (long p : primes) {
        ScanRow row;
        row.p = p;
        if (p <= static_cast<long>(n)) {
            row.note = "requires p > n";
            table.rows.push_back(std::move(row));
            continue;
        }
        Modulus mod_p{Int(p), 1};
        Rational b = bernoulli_exact(static_cast<unsigned>(p - n));
        if (mpz_divisible_p(b.get_den().get_mpz_t(), mod_p.prime().get_mpz_t())) {
            row.note = "B_{p-n} is not p-integral";
            table.rows.push_back(std::move(row));
            continue;
        }
        RingElem bmodp = reduce(b, mod_p);
        if (bmodp.is_zero()) {
            row.note = "B_{p-n} == 0 (mod p): irregular pair, ratio undefined";
            table.rows.push_back(std::move(row));
            continue;
        }
        MhsResult s = engine_query(MhsQuery::harmonic(n, 1, Int(p), r, r),
                                   Engine::convolution, opts);
        row.sum_residue = s.residue;
        const Int& res = s.residue.residue();
        Int quotient = 0;
        if (res != 0) {
            auto v = valuation(res, Int(p));
            if (!v || *v < r - 1) {
                row.note = "residue valuation below r-1; no p^(r-1) factor";
                table.rows.push_back(std::move(row));
                continue;
            }
            Int pr1;
            mpz_pow_ui(pr1.get_mpz_t(), Int(p).get_mpz_t(), r - 1);
            quotient = res / pr1;
        }
        row.ratio = RingElem(mod_p, quotient) * invert(bmodp);
        row.available = true;
        table.rows.push_back(std::move(row));
    }
    return table;
}

bool scan_calibrates(const std::vector<long>& primes, unsigned r,
                     std::string* message, const CheckOptions& opts) {
    struct Known {
        unsigned n;
        Rational a;
    };
    const Known known[] = {{3, Rational(-2)}, {5, Rational(-20)}};
    for (const Known& k : known) {
        ScanTable table = conjecture_scan(k.n, primes, r, opts);
        for (const ScanRow& row : table.rows) {
            if (!row.available) continue;
            Modulus mod_p{Int(row.p), 1};
            RingElem expected = reduce(k.a, mod_p);
            if (*row.ratio != expected) {
                if (message) {
                    *message = "calibration mismatch at n = " +
                               std::to_string(k.n) + ", p = " +
                               std::to_string(row.p) + ": ratio " +
                               row.ratio->str() + " != expected " +
                               expected.str();
                }
                return false;
            }
        }
    }
    return true;
}

} // namespace mhs
