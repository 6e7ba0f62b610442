#include "mhs/bernoulli.hpp"

#include <deque>
#include <mutex>
#include <string>

namespace mhs {

namespace {

// B_n = -1/(n+1) * sum_{j=0}^{n-1} C(n+1, j) B_j, extending `table` to
// index n inclusive.
void extend_table(std::deque<BigRational>& table, unsigned n) {
    if (table.empty()) table.emplace_back(1); // B_0
    for (unsigned k = static_cast<unsigned>(table.size()); k <= n; ++k) {
        BigRational acc(0);
        Int binom;
        for (unsigned j = 0; j < k; ++j) {
            if (table[j] == 0) continue;
            mpz_bin_uiui(binom.get_mpz_t(), k + 1, j);
            acc += BigRational(binom) * table[j];
        }
        BigRational b = -acc / BigRational(k + 1);
        b.canonicalize();
        table.push_back(b);
    }
}

std::mutex g_mutex;
std::deque<BigRational> g_table; // guarded by g_mutex

} // namespace

BigRational bernoulli_exact(unsigned n, unsigned cap) {
    if (n > cap) {
        throw limit_error("Bernoulli index " + std::to_string(n) +
                          " exceeds cap " + std::to_string(cap));
    }
    std::lock_guard<std::mutex> lock(g_mutex);
    extend_table(g_table, n);
    return g_table[n];
}

BigRational bernoulli_exact_uncached(unsigned n) {
    std::deque<BigRational> table;
    extend_table(table, n);
    return table[n];
}

RingElem bernoulli_mod(unsigned n, const Modulus& mod) {
    BigRational b = bernoulli_exact(n);
    if (mpz_divisible_p(b.get_den().get_mpz_t(), mod.prime().get_mpz_t())) {
        throw irregular_denominator_error(
            "den(B_" + std::to_string(n) + ") is divisible by p = " +
            mod.prime().get_str() + " (von Staudt-Clausen: (p-1) | n)");
    }
    return reduce(b, mod);
}

} // namespace mhs
