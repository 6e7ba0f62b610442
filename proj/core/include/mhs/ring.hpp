#pragma once

/*
 * Exact arithmetic in Z/p^m together with p-adic bookkeeping for the
 * rationals that appear on the right-hand side of congruences.
 *
 * Residues are kept canonically in [0, p^m); congruence equality is
 * residue equality. A PadicRational stores sign * p^val * unum/uden with
 * both unit parts coprime to p, so "is this statable mod p^m" is just
 * val >= 0.
 */

#include <optional>
#include <string>

#include <gmpxx.h>

#include "mhs/errors.hpp"

namespace mhs {

using Int = mpz_class;
using Rational = mpq_class;

// Deterministic for all 64-bit inputs (Miller-Rabin with a fixed base set);
// falls back to GMP's probabilistic test above that, far beyond the
// supported desk-scale range.
bool is_prime(const Int& n);

// The ring Z/p^m for a prime p and exponent m >= 1.
class Modulus {
public:
    Modulus(Int prime, unsigned exponent);

    const Int& prime() const noexcept { return p_; }
    unsigned exponent() const noexcept { return m_; }
    const Int& value() const noexcept { return value_; }

    bool operator==(const Modulus& other) const {
        return p_ == other.p_ && m_ == other.m_;
    }
    bool operator!=(const Modulus& other) const { return !(*this == other); }

    // Prints as "p^m", e.g. "7^2".
    std::string str() const;

private:
    Int p_;
    unsigned m_;
    Int value_;
};

class RingElem {
public:
    RingElem(Modulus mod, const Int& value);

    static RingElem zero(const Modulus& mod) { return RingElem(mod, 0); }
    static RingElem one(const Modulus& mod) { return RingElem(mod, 1); }

    const Int& residue() const noexcept { return residue_; }
    const Modulus& modulus() const noexcept { return mod_; }
    bool is_zero() const { return residue_ == 0; }

    RingElem operator-() const;
    RingElem pow(unsigned long e) const;

    friend RingElem operator+(const RingElem& a, const RingElem& b);
    friend RingElem operator-(const RingElem& a, const RingElem& b);
    friend RingElem operator*(const RingElem& a, const RingElem& b);

    bool operator==(const RingElem& other) const {
        return mod_ == other.mod_ && residue_ == other.residue_;
    }
    bool operator!=(const RingElem& other) const { return !(*this == other); }

    std::string str() const { return residue_.get_str(); }

private:
    Modulus mod_;
    Int residue_;
};

// Multiplicative inverse by extended Euclid against p^m.
// Throws non_invertible_error when p divides the residue.
RingElem invert(const RingElem& a);

// Largest e with p^e | x; nullopt encodes v_p(0) = +infinity.
std::optional<unsigned long> valuation(const Int& x, const Int& p);

// A rational seen through the p-adic lens: sign * p^val * unum / uden
// with gcd(unum, p) = gcd(uden, p) = gcd(unum, uden) = 1.
class PadicRational {
public:
    PadicRational(const Rational& q, Int p);
    static PadicRational zero(Int p) { return PadicRational(Rational(0), std::move(p)); }

    bool is_zero() const noexcept { return is_zero_; }
    int sign() const noexcept { return sign_; }
    const Int& unit_num() const noexcept { return unum_; }
    const Int& unit_den() const noexcept { return uden_; }
    long val() const noexcept { return val_; }
    const Int& prime() const noexcept { return p_; }

    Rational value() const;

private:
    Int p_;
    bool is_zero_;
    int sign_;
    Int unum_;
    Int uden_;
    long val_;
};

// Image of a p-adic integer in Z/p^m.
// Throws negative_valuation_error when q.val() < 0 (the congruence is
// not statable at this modulus) and usage_error on a prime mismatch.
RingElem reduce(const PadicRational& q, const Modulus& mod);
RingElem reduce(const Rational& q, const Modulus& mod);

} // namespace mhs
