#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>

namespace fglab {

// Sentinel for v_p(0) = +infinity.
inline constexpr long kValInfinity = std::numeric_limits<long>::max();

// Exact rational scalar.  Always stored in lowest terms with positive
// denominator (GMP canonical form); arithmetic never rounds.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(long n, long d);
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit Rat(const mpz_class& z) : v_(z) {}

    // Parses "num" or "num/den" (leading '-' on the numerator only).
    static Rat parse(const std::string& s);

    const mpq_class& raw() const { return v_; }
    const mpz_class num() const { return v_.get_num(); }
    const mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }

    Rat inverse() const;

    // Canonical form "num/den", den omitted when 1.  Bit-exact round-trip with parse().
    std::string str() const;

private:
    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

// p must be prime; rejected otherwise.
void require_prime(long p);

// p-adic valuation; kValInfinity for x = 0.
long vp(const Rat& x, long p);

bool is_p_integral(const Rat& x, long p);  // vp(x) >= 0
bool is_p_unit(const Rat& x, long p);      // vp(x) == 0

// p^k as a rational, k may be negative.
Rat p_power(long p, long k);

// For p-integral x and prime p: the digit x mod p in [0, p).
long residue_mod_p(const Rat& x, long p);

}  // namespace fglab
