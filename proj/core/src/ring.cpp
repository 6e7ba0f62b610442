#include "mhs/ring.hpp"

#include <cstdint>
#include <utility>

namespace mhs {

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t acc = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) acc = mulmod_u64(acc, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return acc;
}

// Deterministic Miller-Rabin for n < 2^64 with the standard 12-base set.
bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

} // namespace

bool is_prime(const Int& n) {
    if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
    if (sgn(n) <= 0) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

Modulus::Modulus(Int prime, unsigned exponent) : p_(std::move(prime)), m_(exponent) {
    if (m_ < 1) throw usage_error("modulus exponent must be >= 1");
    if (!is_prime(p_)) {
        throw usage_error("modulus base " + p_.get_str() + " is not prime");
    }
    mpz_pow_ui(value_.get_mpz_t(), p_.get_mpz_t(), m_);
}

std::string Modulus::str() const {
    return p_.get_str() + "^" + std::to_string(m_);
}

RingElem::RingElem(Modulus mod, const Int& value) : mod_(std::move(mod)) {
    mpz_mod(residue_.get_mpz_t(), value.get_mpz_t(), mod_.value().get_mpz_t());
}

RingElem RingElem::operator-() const {
    return RingElem(mod_, -residue_);
}

RingElem RingElem::pow(unsigned long e) const {
    Int r;
    mpz_powm_ui(r.get_mpz_t(), residue_.get_mpz_t(), e, mod_.value().get_mpz_t());
    return RingElem(mod_, r);
}

namespace {

void require_same_modulus(const RingElem& a, const RingElem& b) {
    if (a.modulus() != b.modulus()) {
        throw usage_error("modulus mismatch: " + a.modulus().str() + " vs " +
                          b.modulus().str());
    }
}

} // namespace

RingElem operator+(const RingElem& a, const RingElem& b) {
    require_same_modulus(a, b);
    return RingElem(a.modulus(), a.residue() + b.residue());
}

RingElem operator-(const RingElem& a, const RingElem& b) {
    require_same_modulus(a, b);
    return RingElem(a.modulus(), a.residue() - b.residue());
}

RingElem operator*(const RingElem& a, const RingElem& b) {
    require_same_modulus(a, b);
    return RingElem(a.modulus(), a.residue() * b.residue());
}

RingElem invert(const RingElem& a) {
    Int r;
    int ok = mpz_invert(r.get_mpz_t(), a.residue().get_mpz_t(),
                        a.modulus().value().get_mpz_t());
    if (!ok) {
        auto v = valuation(a.residue(), a.modulus().prime());
        long vl = v ? static_cast<long>(*v) : -1; // -1 marks v_p(0) = +infinity
        throw non_invertible_error(
            a.residue().get_str() + " is not a unit mod " + a.modulus().str() +
                " (p-adic valuation " + (v ? std::to_string(*v) : "infinity") + ")",
            vl);
    }
    return RingElem(a.modulus(), r);
}

std::optional<unsigned long> valuation(const Int& x, const Int& p) {
    if (x == 0) return std::nullopt;
    Int unit;
    unsigned long e = mpz_remove(unit.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
    return e;
}

PadicRational::PadicRational(const Rational& q, Int p) : p_(std::move(p)) {
    if (p_ < 2 || !is_prime(p_)) {
        throw usage_error("p-adic base " + p_.get_str() + " is not prime");
    }
    if (q == 0) {
        is_zero_ = true;
        sign_ = 1;
        unum_ = 0;
        uden_ = 1;
        val_ = 0;
        return;
    }
    is_zero_ = false;
    sign_ = sgn(q) > 0 ? 1 : -1;
    Int num = abs(q.get_num());
    Int den = q.get_den(); // mpq_class keeps den > 0 and the fraction reduced
    unsigned long vn = mpz_remove(unum_.get_mpz_t(), num.get_mpz_t(), p_.get_mpz_t());
    unsigned long vd = mpz_remove(uden_.get_mpz_t(), den.get_mpz_t(), p_.get_mpz_t());
    val_ = static_cast<long>(vn) - static_cast<long>(vd);
}

Rational PadicRational::value() const {
    if (is_zero_) return Rational(0);
    Rational unit(unum_, uden_);
    unit.canonicalize();
    Rational pw;
    if (val_ >= 0) {
        Int t;
        mpz_pow_ui(t.get_mpz_t(), p_.get_mpz_t(), static_cast<unsigned long>(val_));
        pw = Rational(t);
    } else {
        Int t;
        mpz_pow_ui(t.get_mpz_t(), p_.get_mpz_t(), static_cast<unsigned long>(-val_));
        pw = Rational(Int(1), t);
        pw.canonicalize();
    }
    return (sign_ > 0 ? 1 : -1) * unit * pw;
}

RingElem reduce(const PadicRational& q, const Modulus& mod) {
    if (q.prime() != mod.prime()) {
        throw usage_error("p-adic base " + q.prime().get_str() +
                          " does not match modulus " + mod.str());
    }
    if (q.is_zero()) return RingElem::zero(mod);
    if (q.val() < 0) {
        throw negative_valuation_error(
            "valuation " + std::to_string(q.val()) + " < 0: not reducible mod " +
            mod.str());
    }
    if (static_cast<unsigned long>(q.val()) >= mod.exponent()) {
        return RingElem::zero(mod);
    }
    Int pv;
    mpz_pow_ui(pv.get_mpz_t(), mod.prime().get_mpz_t(),
               static_cast<unsigned long>(q.val()));
    RingElem r = RingElem(mod, q.unit_num()) * invert(RingElem(mod, q.unit_den()));
    r = r * RingElem(mod, pv);
    return q.sign() > 0 ? r : -r;
}

RingElem reduce(const Rational& q, const Modulus& mod) {
    return reduce(PadicRational(q, mod.prime()), mod);
}

} // namespace mhs
