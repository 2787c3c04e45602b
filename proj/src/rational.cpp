#include "fglab/rational.hpp"

#include <ostream>

#include "fglab/errors.hpp"

namespace fglab {

Rat::Rat(long n, long d) : v_(n, d) {
    if (d == 0) throw input_error("rational with zero denominator");
    v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero()) throw input_error("division by zero rational");
    v_ /= o.v_;
    return *this;
}

Rat Rat::inverse() const {
    if (is_zero()) throw input_error("inverse of zero");
    return Rat(mpq_class(1) / v_);
}

Rat Rat::parse(const std::string& s) {
    if (s.empty()) throw input_error("empty rational literal");
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw input_error("bad rational literal: " + s);
    if (q.get_den() == 0) throw input_error("zero denominator in: " + s);
    q.canonicalize();
    return Rat(q);
}

std::string Rat::str() const {
    return v_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
    return os << r.str();
}

void require_prime(long p) {
    if (p < 2) throw input_error("p must be a prime, got " + std::to_string(p));
    mpz_class z(p);
    if (mpz_probab_prime_p(z.get_mpz_t(), 30) == 0)
        throw input_error("p must be a prime, got " + std::to_string(p));
}

long vp(const Rat& x, long p) {
    require_prime(p);
    if (x.is_zero()) return kValInfinity;
    mpz_class pz(p), tmp;
    long vnum = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.num().get_mpz_t(), pz.get_mpz_t()));
    long vden = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.den().get_mpz_t(), pz.get_mpz_t()));
    return vnum - vden;
}

bool is_p_integral(const Rat& x, long p) {
    return vp(x, p) >= 0;
}

bool is_p_unit(const Rat& x, long p) {
    return vp(x, p) == 0;
}

Rat p_power(long p, long k) {
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k >= 0 ? k : -k));
    if (k >= 0) return Rat(pk);
    return Rat(mpq_class(1, pk));
}

long residue_mod_p(const Rat& x, long p) {
    if (!is_p_integral(x, p)) throw input_error("residue_mod_p on non p-integral value " + x.str());
    // x = a/b with p coprime to b: digit = a * b^{-1} mod p.
    mpz_class pz(p), a = x.num() % pz, b = x.den() % pz, binv;
    if (mpz_invert(binv.get_mpz_t(), b.get_mpz_t(), pz.get_mpz_t()) == 0)
        throw input_error("denominator not invertible mod p");
    mpz_class d = (a * binv) % pz;
    if (d < 0) d += pz;
    return d.get_si();
}

}  // namespace fglab
