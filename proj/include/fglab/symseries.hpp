#pragma once

#include <map>

#include "fglab/series.hpp"

namespace fglab {

// Symmetric series in z_1..z_l stored by sorted exponent key: the key is the
// non-increasing exponent tuple and the value is the coefficient carried by
// every ordered monomial in its orbit.  Cuts memory on integrality sweeps
// where arity times degree would make ordered storage explode.
class SymSeries {
public:
    SymSeries() : arity_(0), cap_(0) {}
    SymSeries(int arity, int cap) : arity_(arity), cap_(cap) {}
    SymSeries(const SymSeries& o) : arity_(o.arity_), cap_(o.cap_), terms_(o.terms_) {
        memlimit::charge_terms(static_cast<std::ptrdiff_t>(terms_.size()));
    }
    SymSeries(SymSeries&& o) noexcept
        : arity_(o.arity_), cap_(o.cap_), terms_(std::move(o.terms_)) {
        o.terms_.clear();
    }
    SymSeries& operator=(const SymSeries& o) {
        if (this != &o) {
            memlimit::charge_terms(static_cast<std::ptrdiff_t>(o.terms_.size()) -
                                   static_cast<std::ptrdiff_t>(terms_.size()));
            arity_ = o.arity_;
            cap_ = o.cap_;
            terms_ = o.terms_;
        }
        return *this;
    }
    SymSeries& operator=(SymSeries&& o) noexcept {
        if (this != &o) {
            memlimit::charge_terms(-static_cast<std::ptrdiff_t>(terms_.size()));
            arity_ = o.arity_;
            cap_ = o.cap_;
            terms_ = std::move(o.terms_);
            o.terms_.clear();
        }
        return *this;
    }
    ~SymSeries() { memlimit::charge_terms(-static_cast<std::ptrdiff_t>(terms_.size())); }

    int arity() const { return arity_; }
    int cap() const { return cap_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<ExpVec, Rat>& terms() const { return terms_; }

    // e need not be sorted; it is canonicalized.
    Rat coefficient(ExpVec e) const;
    void add_term(ExpVec e, const Rat& c);

    SymSeries operator-() const;
    friend SymSeries operator+(const SymSeries& a, const SymSeries& b);
    friend SymSeries operator-(const SymSeries& a, const SymSeries& b);
    // Product of symmetric series is symmetric; computed orbit-wise.
    friend SymSeries operator*(const SymSeries& a, const SymSeries& b);
    SymSeries scaled(const Rat& c) const;
    SymSeries pow(unsigned k) const;

    bool operator==(const SymSeries& o) const {
        return arity_ == o.arity_ && terms_ == o.terms_;
    }

    // Substitutes the same univariate series for every variable.
    // Requires g(0) = 0 with g(z) = unit z + higher.
    SymSeries substitute_each(const Series& g) const;

    // Expansion to ordered storage (small arities only).
    Series to_series(const std::vector<std::string>& vars) const;

    // z_j-exponents all >= 1 for every stored monomial.
    bool divisible_by_all_vars() const;

    // every positive exponent congruent to 1 mod p^n - 1
    bool gradable(long p, int n) const;

    std::string str() const;

private:
    int arity_;
    int cap_;
    std::map<ExpVec, Rat> terms_;  // keys sorted non-increasing
};

// All non-increasing tuples of given length over support exponents summing to
// total; calls fn(tuple).
void for_each_sorted_tuple(const std::vector<unsigned>& support, int length, unsigned total,
                           const std::function<void(const ExpVec&)>& fn);

}  // namespace fglab
