#pragma once

/*
 * Test-only oracles. Everything here is deliberately independent of the
 * implementation paths it checks: counting is dynamic programming instead
 * of inclusion-exclusion, sums are direct enumeration instead of Moebius
 * inversion or convolution, and rational arithmetic stays exact.
 */

#include <optional>
#include <vector>

#include "mhs/ring.hpp"
#include "mhs/sums.hpp"

namespace mhs::testing {

// Tuples of nonnegative integers summing to `total`, each < bound
// (nullopt = unbounded), by dynamic programming over parts.
Int count_compositions_dp(const Int& total, unsigned parts,
                          const std::optional<Int>& bound);

// sum of x_1 over the same solution set.
Int weighted_x1_sum_dp(const Int& total, unsigned parts,
                       const std::optional<Int>& bound);

// Ordered tuples of positive parts < bound summing to total, p coprime
// when asked, counted one by one.
Int count_positive_tuples_enumerated(long total, unsigned parts, long bound,
                                     long p, bool coprime);

// sum over ordered tuples of pairwise-distinct l_i in the range of
// prod 1/l_i^alpha_i, by direct enumeration.
RingElem distinct_tuple_sum_enumerated(const std::vector<unsigned>& alphas,
                                       SumRange range, const Modulus& mod);

// sum over strictly increasing tuples l_1 < ... < l_n in the range of
// prod 1/l_i.
RingElem increasing_tuple_sum_enumerated(unsigned n, SumRange range,
                                         const Modulus& mod);

// The harmonic sum as an exact rational, for tiny instances.
Rational harmonic_sum_exact(unsigned parts, long target, long bound, long p,
                            bool coprime);

} // namespace mhs::testing
