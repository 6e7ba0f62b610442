#pragma once

/*
 * The multiple-harmonic-sum engine.
 *
 * S_n^(k)(p^r) = sum of 1/(l_1 ... l_n) over ordered tuples with
 * l_1 + ... + l_n = k p^r, every l_i < p^r and coprime to p, reduced in
 * Z/p^m. Two independent routes compute the same residue:
 *
 *   - mhs_bruteforce: direct enumeration of tuples, last coordinate
 *     forced, pruned by partial-sum feasibility;
 *   - mhs_convolution: the coefficient of x^target in f(x)^n where
 *     f = sum over admissible l of (1/l) x^l, truncated schoolbook
 *     multiplication with word-level modular reduction.
 *
 * power_sum and distinct_tuple_sum cover the fixed-exponent sums over
 * distinct indices that the distinct-index checks need.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "mhs/combinatorics.hpp"
#include "mhs/ring.hpp"

namespace mhs {

enum class SumMethod { bruteforce, convolution };
const char* to_string(SumMethod m);

enum class SumRange { below_p, below_2p_excl_p };

// A fully parameterized harmonic-sum instance.
struct MhsQuery {
    unsigned parts = 1;     // n
    Int target = 1;         // composition total
    Int p = 2;
    unsigned r = 1;         // bound exponent; p^r is the canonical bound
    Int bound = 2;          // exclusive per-part bound
    bool coprime = true;    // parts restricted to P_p
    unsigned mod_exponent = 1; // m of the result ring

    // S_n^(k)(p^r) in Z/p^m: target = k p^r, bound = p^r.
    static MhsQuery harmonic(unsigned n, unsigned k, const Int& p, unsigned r,
                             unsigned m);
    // Sum over l_1+...+l_n = target with parts in P_p and no upper bound.
    static MhsQuery with_sum(unsigned n, const Int& target, const Int& p,
                             unsigned m);

    Modulus modulus() const { return Modulus(p, mod_exponent); }
    bool feasible() const;
    void validate() const;
};

struct MhsResult {
    MhsQuery query;
    RingElem residue;
    SumMethod method;
    Int term_count;
    double elapsed_ms = 0.0;
    bool from_cache = false;
};

struct ComputeLimits {
    unsigned long long bruteforce_ceiling = 1'000'000'000ULL; // tuples
    long max_poly_len = 2'000'000;                            // coefficients
    unsigned long long dispatch_threshold = 1'000'000ULL;     // compute() switch
};

// Composition count ignoring coprimality; the a-priori tuple estimate used
// for ceilings and method dispatch.
Int estimate_terms(const MhsQuery& q);

// Enumeration route. Infeasible queries yield 0 with term_count 0;
// an estimate above the ceiling is refused with a limit_error that names it.
MhsResult mhs_bruteforce(const MhsQuery& q, const ComputeLimits& limits = {});

// Generating-function route; agrees with mhs_bruteforce everywhere both run.
MhsResult mhs_convolution(const MhsQuery& q, const ComputeLimits& limits = {});

// Public entry point: picks convolution once the tuple estimate passes
// limits.dispatch_threshold, else brute force. The method used is recorded
// in the result.
MhsResult compute(const MhsQuery& q, const ComputeLimits& limits = {});

// sum of 1/l^alpha over 1 <= l < p, or over 1 <= l < 2p with l != p.
RingElem power_sum(unsigned alpha, SumRange range, const Modulus& mod);

// Sum over ordered tuples of pairwise-distinct l_i in the range of
// prod 1/l_i^alpha_i, by set-partition Moebius inversion:
//   sum over partitions pi of prod_B (-1)^(|B|-1) (|B|-1)! power_sum(sum_B alpha).
// Requires p > n, matching every statement this feeds.
RingElem distinct_tuple_sum(const std::vector<unsigned>& alphas, SumRange range,
                            const Modulus& mod);

// Truncated polynomial over Z/p^m with word-sized coefficients.
// Requires mod.value() < 2^63 so products reduce through one 128-bit word.
class DensePoly {
public:
    DensePoly(Modulus mod, long trunc);

    // f = sum over 1 <= l <= min(bound-1, trunc), p coprime when asked,
    // of (1/l) x^l.
    static DensePoly harmonic_series(const Modulus& mod, const Int& bound,
                                     bool coprime, long trunc);

    long trunc() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
    const Modulus& modulus() const noexcept { return mod_; }
    RingElem coeff(long i) const;
    void set_coeff(long i, const RingElem& v);

    DensePoly mul_truncated(const DensePoly& other) const;
    DensePoly pow_truncated(unsigned long n) const;

private:
    Modulus mod_;
    uint64_t word_mod_;
    std::vector<uint64_t> coeffs_;
};

} // namespace mhs
