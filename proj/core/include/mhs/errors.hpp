#pragma once

#include <stdexcept>
#include <string>

namespace mhs {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed request: mismatched moduli, out-of-range parameters, bad flags.
class usage_error : public error {
public:
    using error::error;
};

// Resource ceiling hit: enumeration too large, polynomial too long, index above cap.
class limit_error : public error {
public:
    using error::error;
};

// Attempt to invert an element divisible by p. Carries v_p of the residue.
class non_invertible_error : public error {
public:
    non_invertible_error(const std::string& what, long val)
        : error(what), valuation_(val) {}
    long valuation() const noexcept { return valuation_; }

private:
    long valuation_;
};

// A rational with v_p < 0 cannot be reduced modulo p^m.
class negative_valuation_error : public error {
public:
    using error::error;
};

// p divides den(B_n); by von Staudt-Clausen this happens exactly when
// n is even and (p-1) | n, plus the B_1 = -1/2 case at p = 2.
class irregular_denominator_error : public error {
public:
    using error::error;
};

} // namespace mhs
