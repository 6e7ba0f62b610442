#include "mhs/sums.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <string>
#include <utility>

namespace mhs {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t addmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    uint64_t s = a + b; // m < 2^63 keeps this from wrapping
    return s >= m ? s - m : s;
}

// Extended Euclid; a must be a unit mod m.
uint64_t invmod_u64(uint64_t a, uint64_t m) {
    int64_t t = 0, newt = 1;
    int64_t r = static_cast<int64_t>(m), newr = static_cast<int64_t>(a % m);
    while (newr != 0) {
        int64_t q = r / newr;
        t = std::exchange(newt, t - q * newt);
        r = std::exchange(newr, r - q * newr);
    }
    if (t < 0) t += static_cast<int64_t>(m);
    return static_cast<uint64_t>(t);
}

bool fits_word(const Int& modulus_value) {
    return mpz_sizeinbase(modulus_value.get_mpz_t(), 2) <= 62;
}

// Scalar arithmetic in Z/p^m over machine words.
struct WordRing {
    using Scalar = uint64_t;
    uint64_t m;
    Scalar zero() const { return 0; }
    Scalar one() const { return 1 % m; }
    Scalar add(Scalar a, Scalar b) const { return addmod_u64(a, b, m); }
    Scalar mul(Scalar a, Scalar b) const { return mulmod_u64(a, b, m); }
    Scalar inv_of(long l) const {
        return invmod_u64(static_cast<uint64_t>(l) % m, m);
    }
    Int to_int(Scalar a) const {
        return Int(static_cast<unsigned long>(a));
    }
};

// Same interface over mpz, for moduli past the word size.
struct BigRing {
    using Scalar = Int;
    Int m;
    Scalar zero() const { return 0; }
    Scalar one() const { return Int(1) % m; }
    Scalar add(const Scalar& a, const Scalar& b) const {
        Int s = a + b;
        if (s >= m) s -= m;
        return s;
    }
    Scalar mul(const Scalar& a, const Scalar& b) const {
        Int r = a * b;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
        return r;
    }
    Scalar inv_of(long l) const {
        Int r, a = Int(l) % m;
        mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
        return r;
    }
    Int to_int(const Scalar& a) const { return a; }
};

template <typename Ring>
struct Enumeration {
    const Ring& ring;
    const std::vector<typename Ring::Scalar>& inv; // index by part value
    const std::vector<char>& allowed;
    long part_max;
    typename Ring::Scalar sum;
    unsigned long long tuples = 0;

    // depth_left parts still to place, summing to `remaining`.
    void run(long remaining, unsigned depth_left,
             typename Ring::Scalar partial) {
        if (depth_left == 1) {
            if (remaining >= 1 && remaining <= part_max && allowed[remaining]) {
                sum = ring.add(sum, ring.mul(partial, inv[remaining]));
                ++tuples;
            }
            return;
        }
        long rest = static_cast<long>(depth_left) - 1;
        long lo = remaining - rest * part_max;
        if (lo < 1) lo = 1;
        long hi = remaining - rest;
        if (hi > part_max) hi = part_max;
        for (long l = lo; l <= hi; ++l) {
            if (!allowed[l]) continue;
            run(remaining - l, depth_left - 1, ring.mul(partial, inv[l]));
        }
    }
};

bool part_allowed(const Int& l, const MhsQuery& q) {
    if (l < 1 || l >= q.bound) return false;
    return !q.coprime || !mpz_divisible_p(l.get_mpz_t(), q.p.get_mpz_t());
}

MhsResult single_part_result(const MhsQuery& q, SumMethod method,
                             Clock::time_point t0) {
    Modulus mod = q.modulus();
    if (!part_allowed(q.target, q)) {
        return {q, RingElem::zero(mod), method, 0, ms_since(t0), false};
    }
    RingElem r = invert(RingElem(mod, q.target));
    return {q, r, method, 1, ms_since(t0), false};
}

Int coprime_aware_term_count(const MhsQuery& q) {
    if (q.coprime) {
        return count_coprime_compositions(q.target, q.parts,
                                          std::optional<Int>(q.bound), q.p);
    }
    return count_bounded_compositions(
        {q.target - q.parts, q.parts, std::optional<Int>(q.bound - 1)});
}

template <typename Ring>
MhsResult run_enumeration(const Ring& ring, const MhsQuery& q, long part_max,
                          Clock::time_point t0) {
    std::vector<typename Ring::Scalar> inv(part_max + 1, ring.zero());
    std::vector<char> allowed(part_max + 1, 0);
    long p_long = q.p.fits_slong_p() ? q.p.get_si() : 0; // 0: p > part_max
    for (long l = 1; l <= part_max; ++l) {
        if (q.coprime && p_long != 0 && l % p_long == 0) continue;
        allowed[l] = 1;
        inv[l] = ring.inv_of(l);
    }
    Enumeration<Ring> e{ring, inv, allowed, part_max, ring.zero(), 0};
    e.run(q.target.get_si(), q.parts, ring.one());
    Modulus mod = q.modulus();
    return {q, RingElem(mod, ring.to_int(e.sum)), SumMethod::bruteforce,
            Int(static_cast<unsigned long>(e.tuples)), ms_since(t0), false};
}

} // namespace

const char* to_string(SumMethod m) {
    return m == SumMethod::bruteforce ? "bruteforce" : "convolution";
}

MhsQuery MhsQuery::harmonic(unsigned n, unsigned k, const Int& p, unsigned r,
                            unsigned m) {
    Int pr;
    mpz_pow_ui(pr.get_mpz_t(), p.get_mpz_t(), r);
    return MhsQuery{n, Int(k) * pr, p, r, pr, true, m};
}

MhsQuery MhsQuery::with_sum(unsigned n, const Int& target, const Int& p,
                            unsigned m) {
    return MhsQuery{n, target, p, 1, target + 1, true, m};
}

bool MhsQuery::feasible() const {
    return target >= parts && target <= Int(parts) * (bound - 1);
}

void MhsQuery::validate() const {
    if (parts < 1) throw usage_error("harmonic sum needs parts >= 1");
    if (target < 1) throw usage_error("harmonic sum needs target >= 1");
    if (bound < 2) throw usage_error("harmonic sum needs bound >= 2");
    if (r < 1) throw usage_error("harmonic sum needs r >= 1");
    if (mod_exponent < 1) throw usage_error("harmonic sum needs m >= 1");
    if (p < 2) throw usage_error("harmonic sum needs p >= 2");
}

Int estimate_terms(const MhsQuery& q) {
    return count_bounded_compositions(
        {q.target - q.parts, q.parts, std::optional<Int>(q.bound - 1)});
}

MhsResult mhs_bruteforce(const MhsQuery& q, const ComputeLimits& limits) {
    q.validate();
    auto t0 = Clock::now();
    Modulus mod = q.modulus();
    if (!q.feasible()) {
        return {q, RingElem::zero(mod), SumMethod::bruteforce, 0, ms_since(t0),
                false};
    }
    if (q.parts == 1) return single_part_result(q, SumMethod::bruteforce, t0);
    if (q.parts > 10000) {
        throw limit_error("enumeration depth " + std::to_string(q.parts) +
                          " exceeds limit 10000");
    }
    if (!q.target.fits_slong_p()) {
        throw limit_error("target " + q.target.get_str() +
                          " too large for enumeration");
    }

    Int est = estimate_terms(q);
    if (est > static_cast<unsigned long>(limits.bruteforce_ceiling)) {
        throw limit_error("estimated " + est.get_str() +
                          " tuples exceeds brute-force ceiling " +
                          std::to_string(limits.bruteforce_ceiling));
    }
    // Parts never exceed target - (parts - 1).
    Int pm = q.bound - 1;
    Int cap = q.target - (q.parts - 1);
    if (cap < pm) pm = cap;
    if (pm > limits.max_poly_len) {
        throw limit_error("enumeration table of " + pm.get_str() +
                          " entries exceeds limit " +
                          std::to_string(limits.max_poly_len));
    }
    long part_max = pm.get_si();
    if (fits_word(mod.value())) {
        WordRing ring{mod.value().get_ui()};
        return run_enumeration(ring, q, part_max, t0);
    }
    BigRing ring{mod.value()};
    return run_enumeration(ring, q, part_max, t0);
}

MhsResult mhs_convolution(const MhsQuery& q, const ComputeLimits& limits) {
    q.validate();
    auto t0 = Clock::now();
    Modulus mod = q.modulus();
    if (!q.feasible()) {
        return {q, RingElem::zero(mod), SumMethod::convolution, 0, ms_since(t0),
                false};
    }
    if (q.parts == 1) return single_part_result(q, SumMethod::convolution, t0);
    if (q.target > limits.max_poly_len) {
        throw limit_error("truncation degree " + q.target.get_str() +
                          " exceeds polynomial limit " +
                          std::to_string(limits.max_poly_len));
    }
    long trunc = q.target.get_si();
    DensePoly f = DensePoly::harmonic_series(mod, q.bound, q.coprime, trunc);
    DensePoly g = f.pow_truncated(q.parts);
    return {q, g.coeff(trunc), SumMethod::convolution,
            coprime_aware_term_count(q), ms_since(t0), false};
}

MhsResult compute(const MhsQuery& q, const ComputeLimits& limits) {
    q.validate();
    if (!q.feasible() || q.parts == 1) return mhs_bruteforce(q, limits);
    Int est = estimate_terms(q);
    if (est > static_cast<unsigned long>(limits.dispatch_threshold)) {
        return mhs_convolution(q, limits);
    }
    return mhs_bruteforce(q, limits);
}

RingElem power_sum(unsigned alpha, SumRange range, const Modulus& mod) {
    if (alpha < 1) throw usage_error("power_sum needs alpha >= 1");
    const Int& p = mod.prime();
    Int hi = range == SumRange::below_p ? p : Int(2 * p);
    RingElem acc = RingElem::zero(mod);
    for (Int l = 1; l < hi; ++l) {
        if (range == SumRange::below_2p_excl_p && l == p) continue;
        acc = acc + invert(RingElem(mod, l)).pow(alpha);
    }
    return acc;
}

namespace {

// Walks set partitions of {0..n-1}; block_sums holds the exponent total per
// block, block_sizes the cardinalities.
void partition_rec(const std::vector<unsigned>& alphas, unsigned i,
                   std::vector<unsigned>& block_sums,
                   std::vector<unsigned>& block_sizes,
                   const std::function<void()>& emit) {
    if (i == alphas.size()) {
        emit();
        return;
    }
    for (size_t b = 0; b < block_sums.size(); ++b) {
        block_sums[b] += alphas[i];
        block_sizes[b] += 1;
        partition_rec(alphas, i + 1, block_sums, block_sizes, emit);
        block_sums[b] -= alphas[i];
        block_sizes[b] -= 1;
    }
    block_sums.push_back(alphas[i]);
    block_sizes.push_back(1);
    partition_rec(alphas, i + 1, block_sums, block_sizes, emit);
    block_sums.pop_back();
    block_sizes.pop_back();
}

} // namespace

RingElem distinct_tuple_sum(const std::vector<unsigned>& alphas, SumRange range,
                            const Modulus& mod) {
    if (alphas.empty()) throw usage_error("distinct_tuple_sum needs n >= 1");
    if (mod.prime() <= static_cast<long>(alphas.size())) {
        throw usage_error("distinct_tuple_sum needs p > n (p = " +
                          mod.prime().get_str() + ", n = " +
                          std::to_string(alphas.size()) + ")");
    }
    for (unsigned a : alphas) {
        if (a < 1) throw usage_error("distinct_tuple_sum needs alpha_i >= 1");
    }

    std::map<unsigned, RingElem> psums; // power_sum per exponent total
    auto psum = [&](unsigned e) -> const RingElem& {
        auto it = psums.find(e);
        if (it == psums.end()) {
            it = psums.emplace(e, power_sum(e, range, mod)).first;
        }
        return it->second;
    };

    RingElem acc = RingElem::zero(mod);
    std::vector<unsigned> block_sums, block_sizes;
    partition_rec(alphas, 0, block_sums, block_sizes, [&]() {
        // mu(pi) = prod over blocks of (-1)^(|B|-1) (|B|-1)!
        Int coeff = 1;
        for (unsigned sz : block_sizes) {
            Int f;
            mpz_fac_ui(f.get_mpz_t(), sz - 1);
            coeff *= (sz % 2 == 0) ? -f : f;
        }
        RingElem term(mod, coeff);
        for (unsigned s : block_sums) term = term * psum(s);
        acc = acc + term;
    });
    return acc;
}

DensePoly::DensePoly(Modulus mod, long trunc) : mod_(std::move(mod)) {
    if (trunc < 0) throw usage_error("DensePoly needs trunc >= 0");
    if (!fits_word(mod_.value())) {
        throw limit_error("modulus " + mod_.str() +
                          " too wide for word-level convolution (< 2^63)");
    }
    word_mod_ = mod_.value().get_ui();
    coeffs_.assign(static_cast<size_t>(trunc) + 1, 0);
}

DensePoly DensePoly::harmonic_series(const Modulus& mod, const Int& bound,
                                     bool coprime, long trunc) {
    DensePoly f(mod, trunc);
    Int top = bound - 1;
    if (top > trunc) top = trunc;
    long hi = top.fits_slong_p() ? top.get_si() : trunc;
    long p_long = mod.prime().fits_slong_p() ? mod.prime().get_si() : 0;
    for (long l = 1; l <= hi; ++l) {
        if (coprime && p_long != 0 && l % p_long == 0) continue;
        uint64_t lw = static_cast<uint64_t>(l) % f.word_mod_;
        if (!coprime) {
            // A part divisible by p has no inverse in this ring.
            Int g;
            mpz_gcd(g.get_mpz_t(), Int(l).get_mpz_t(), mod.value().get_mpz_t());
            if (g != 1) {
                throw non_invertible_error(
                    "part " + std::to_string(l) + " is not invertible mod " +
                        mod.str() + "; coprime sums only",
                    static_cast<long>(*valuation(Int(l), mod.prime())));
            }
        }
        f.coeffs_[static_cast<size_t>(l)] = invmod_u64(lw, f.word_mod_);
    }
    return f;
}

RingElem DensePoly::coeff(long i) const {
    if (i < 0 || i > trunc()) throw usage_error("coefficient index out of range");
    return RingElem(mod_, Int(static_cast<unsigned long>(coeffs_[i])));
}

void DensePoly::set_coeff(long i, const RingElem& v) {
    if (i < 0 || i > trunc()) throw usage_error("coefficient index out of range");
    if (v.modulus() != mod_) throw usage_error("coefficient modulus mismatch");
    coeffs_[i] = v.residue().get_ui();
}

DensePoly DensePoly::mul_truncated(const DensePoly& other) const {
    if (mod_ != other.mod_) throw usage_error("polynomial modulus mismatch");
    long t = std::min(trunc(), other.trunc());
    DensePoly out(mod_, t);
    const uint64_t m = word_mod_;
    for (long i = 0; i <= t; ++i) {
        uint64_t a = coeffs_[i];
        if (a == 0) continue;
        long jmax = t - i;
        if (jmax > other.trunc()) jmax = other.trunc();
        for (long j = 0; j <= jmax; ++j) {
            uint64_t b = other.coeffs_[j];
            if (b == 0) continue;
            uint64_t& c = out.coeffs_[i + j];
            c = addmod_u64(c, mulmod_u64(a, b, m), m);
        }
    }
    return out;
}

DensePoly DensePoly::pow_truncated(unsigned long n) const {
    if (n == 0) {
        DensePoly one(mod_, trunc());
        one.coeffs_[0] = 1 % word_mod_;
        return one;
    }
    DensePoly base = *this;
    DensePoly acc(mod_, trunc());
    bool acc_set = false;
    while (n > 0) {
        if (n & 1) {
            acc = acc_set ? acc.mul_truncated(base) : base;
            acc_set = true;
        }
        n >>= 1;
        if (n > 0) base = base.mul_truncated(base);
    }
    return acc;
}

} // namespace mhs
