#include "mhs/combinatorics.hpp"

#include <string>

namespace mhs {

Int binom_exact(const Int& a, unsigned long b) {
    if (a < 0) throw usage_error("binom_exact expects a >= 0");
    if (a < static_cast<long>(b)) return 0;
    Int r;
    mpz_bin_ui(r.get_mpz_t(), a.get_mpz_t(), b);
    return r;
}

Int count_bounded_compositions(const CountQuery& q) {
    if (q.parts < 1) throw usage_error("composition count needs parts >= 1");
    if (q.total < 0) return 0;
    if (q.bound && *q.bound < 1) return 0;
    Int acc = 0;
    Int sign = 1;
    for (unsigned long j = 0; j <= q.parts; ++j) {
        Int shifted = q.total;
        if (j > 0) {
            if (!q.bound) break;
            shifted -= Int(j) * *q.bound;
        }
        if (shifted < 0) break;
        acc += sign * binom_exact(Int(q.parts), j) *
               binom_exact(shifted + q.parts - 1, q.parts - 1);
        sign = -sign;
    }
    return acc;
}

namespace {

// Compositions of `total` into `parts` positive parts, each <= bound_incl
// (nullopt = unbounded). Shift x_i = l_i - 1 onto the nonnegative count.
Int positive_compositions(const Int& total, unsigned parts,
                          const std::optional<Int>& bound_incl) {
    if (parts == 0) return total == 0 ? Int(1) : Int(0);
    if (total < parts) return 0;
    std::optional<Int> shifted_bound;
    if (bound_incl) shifted_bound = *bound_incl; // x_i < bound_incl
    return count_bounded_compositions({total - parts, parts, shifted_bound});
}

} // namespace

Int count_coprime_compositions(const Int& total, unsigned parts,
                               const std::optional<Int>& bound, const Int& p) {
    if (parts < 1) throw usage_error("composition count needs parts >= 1");
    if (p < 2) throw usage_error("count_coprime_compositions needs p >= 2");
    if (total < parts) return 0;
    std::optional<Int> part_max; // inclusive cap on a part
    if (bound) {
        if (*bound < 2) return 0;
        part_max = *bound - 1;
    }
    // Multiples of p available as a part: p*k with 1 <= k <= mult_max.
    std::optional<Int> mult_max;
    if (part_max) mult_max = *part_max / p;

    // Inclusion-exclusion over a chosen set of j parts forced to be
    // multiples of p; s is the sum of their quotients k_i.
    Int acc = 0;
    Int sign = 1;
    for (unsigned j = 0; j <= parts; ++j) {
        Int choose_j = binom_exact(Int(parts), j);
        Int inner = 0;
        if (j == 0) {
            inner = positive_compositions(total, parts, part_max);
        } else {
            Int s_max = (total - Int(parts - j)) / p;
            if (mult_max) {
                Int cap = Int(j) * *mult_max;
                if (cap < s_max) s_max = cap;
            }
            for (Int s = j; s <= s_max; ++s) {
                Int ways_mult = positive_compositions(s, j, mult_max);
                if (ways_mult == 0) continue;
                Int ways_rest =
                    positive_compositions(total - p * s, parts - j, part_max);
                inner += ways_mult * ways_rest;
            }
        }
        acc += sign * choose_j * inner;
        sign = -sign;
    }
    return acc;
}

Int casolution(const Int& p, unsigned a) {
    if (a < 1 || a > 4) {
        throw usage_error("casolution expects 1 <= a <= 4, got " + std::to_string(a));
    }
    if (p <= 5) throw usage_error("casolution expects a prime p > 5");
    return binom_exact(2 * p - a + 4, 4) - 5 * binom_exact(p - a + 4, 4);
}

} // namespace mhs
