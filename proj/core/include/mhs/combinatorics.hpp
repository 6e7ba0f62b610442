#pragma once

/*
 * Exact binomial coefficients and bounded-composition counting.
 *
 * Everything here is computed over the integers and reduced afterwards by
 * the caller. No Lucas-style or factorial-inverse shortcuts: the counts we
 * reduce are often divisible by p, which those tricks cannot represent.
 */

#include <optional>

#include <gmpxx.h>

#include "mhs/ring.hpp"

namespace mhs {

// Tuples of nonnegative integers with a prescribed sum, each part below
// `bound` (exclusive); nullopt means unbounded parts.
struct CountQuery {
    Int total;
    unsigned parts = 1;
    std::optional<Int> bound;
};

// C(a, b); zero when b > a. Arguments are nonnegative.
Int binom_exact(const Int& a, unsigned long b);

// Inclusion-exclusion over parts that overflow the bound:
//   sum_j (-1)^j C(parts, j) C(total - j*bound + parts - 1, parts - 1).
// The unbounded case keeps only the j = 0 stars-and-bars term.
Int count_bounded_compositions(const CountQuery& q);

// Ordered tuples of positive parts l_i with sum `total`, l_i < bound
// (nullopt = unbounded), and p not dividing any part. This is the exact
// number of terms in a coprime harmonic sum.
Int count_coprime_compositions(const Int& total, unsigned parts,
                               const std::optional<Int>& bound, const Int& p);

// C_a = C(2p-a+4, 4) - 5 C(p-a+4, 4): the number of (x_1..x_5) with
// x_1+...+x_5 = 2p-a and 0 <= x_i < p, for 1 <= a <= 4.
Int casolution(const Int& p, unsigned a);

} // namespace mhs
