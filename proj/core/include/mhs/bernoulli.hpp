#pragma once

/*
 * Exact Bernoulli numbers (B_0 = 1, B_1 = -1/2, generating function
 * x/(e^x - 1) = sum B_n x^n / n!) and their reduction modulo prime powers.
 */

#include <gmpxx.h>

#include "mhs/ring.hpp"

namespace mhs {

using BigRational = mpq_class;

inline constexpr unsigned kBernoulliCap = 200;

// B_n by the defining recurrence sum_{j=0}^{n} C(n+1, j) B_j = 0,
// computed once in exact rational arithmetic and memoized up to the cap.
// Throws limit_error for n above the cap. Thread safe.
BigRational bernoulli_exact(unsigned n, unsigned cap = kBernoulliCap);

// Same recurrence without the shared memo table.
BigRational bernoulli_exact_uncached(unsigned n);

// reduce(B_n, mod). Throws irregular_denominator_error when p | den(B_n);
// by von Staudt-Clausen that is exactly the case (p-1) | n for even n.
RingElem bernoulli_mod(unsigned n, const Modulus& mod);

} // namespace mhs
