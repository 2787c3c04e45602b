#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "fglab/errors.hpp"
#include "fglab/graded_poly.hpp"
#include "fglab/memlimit.hpp"
#include "fglab/rational.hpp"

namespace fglab {

using ExpVec = std::vector<unsigned>;

inline unsigned total_degree(const ExpVec& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

template <class R>
struct ring_traits;

template <>
struct ring_traits<Rat> {
    static bool is_zero(const Rat& x) { return x.is_zero(); }
    static Rat one_like(const Rat&) { return Rat(1); }
};

template <>
struct ring_traits<GradedPolynomial> {
    static bool is_zero(const GradedPolynomial& x) { return x.is_zero(); }
    static GradedPolynomial one_like(const GradedPolynomial& sample) {
        return GradedPolynomial::constant(sample.gens(), Rat(1));
    }
};

// Sparse multivariate power series truncated at a fixed total-degree cap.
// Terms beyond the cap are never stored; binary operations re-truncate to the
// minimum cap of the operands and never extend a cap silently.
template <class R>
class TruncatedSeries {
public:
    TruncatedSeries() : cap_(0) {}
    TruncatedSeries(std::vector<std::string> vars, int cap)
        : vars_(std::move(vars)), cap_(cap) {
        if (cap_ < 0) throw input_error("negative series cap");
    }
    TruncatedSeries(const TruncatedSeries& o) : vars_(o.vars_), cap_(o.cap_), terms_(o.terms_) {
        memlimit::charge_terms(static_cast<std::ptrdiff_t>(terms_.size()));
    }
    TruncatedSeries(TruncatedSeries&& o) noexcept
        : vars_(std::move(o.vars_)), cap_(o.cap_), terms_(std::move(o.terms_)) {
        o.terms_.clear();
    }
    TruncatedSeries& operator=(const TruncatedSeries& o) {
        if (this != &o) {
            memlimit::charge_terms(static_cast<std::ptrdiff_t>(o.terms_.size()) -
                                   static_cast<std::ptrdiff_t>(terms_.size()));
            vars_ = o.vars_;
            cap_ = o.cap_;
            terms_ = o.terms_;
        }
        return *this;
    }
    TruncatedSeries& operator=(TruncatedSeries&& o) noexcept {
        if (this != &o) {
            memlimit::charge_terms(-static_cast<std::ptrdiff_t>(terms_.size()));
            vars_ = std::move(o.vars_);
            cap_ = o.cap_;
            terms_ = std::move(o.terms_);
            o.terms_.clear();
        }
        return *this;
    }
    ~TruncatedSeries() { memlimit::charge_terms(-static_cast<std::ptrdiff_t>(terms_.size())); }

    static TruncatedSeries variable(const std::vector<std::string>& vars, int cap, size_t index) {
        TruncatedSeries s(vars, cap);
        if (index >= vars.size()) throw input_error("variable index out of range");
        if (cap >= 1) {
            ExpVec e(vars.size(), 0);
            e[index] = 1;
            s.set_term(e, Rat(1));
        }
        return s;
    }

    const std::vector<std::string>& vars() const { return vars_; }
    size_t nvars() const { return vars_.size(); }
    int cap() const { return cap_; }
    const std::map<ExpVec, R>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    R coefficient(const ExpVec& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? R{} : it->second;
    }

    void set_term(const ExpVec& e, const R& c) {
        check_exp(e);
        auto it = terms_.find(e);
        if (ring_traits<R>::is_zero(c)) {
            if (it != terms_.end()) {
                terms_.erase(it);
                memlimit::charge_terms(-1);
            }
            return;
        }
        if (it == terms_.end()) {
            terms_.emplace(e, c);
            memlimit::charge_terms(1);
        } else {
            it->second = c;
        }
    }

    void add_term(const ExpVec& e, const R& c) {
        if (ring_traits<R>::is_zero(c)) return;
        if (total_degree(e) > static_cast<unsigned>(cap_)) return;
        check_exp(e);
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
            memlimit::charge_terms(1);
        } else {
            it->second += c;
            if (ring_traits<R>::is_zero(it->second)) {
                terms_.erase(it);
                memlimit::charge_terms(-1);
            }
        }
    }

    R constant_term() const { return coefficient(ExpVec(nvars(), 0)); }

    // Univariate accessors.
    R coeff1(unsigned k) const {
        if (nvars() != 1) throw input_error("coeff1 on non-univariate series");
        return coefficient(ExpVec{k});
    }
    void set_coeff1(unsigned k, const R& c) { set_term(ExpVec{k}, c); }

    TruncatedSeries truncated(int new_cap) const {
        if (new_cap > cap_) throw cap_error("cannot extend series cap from " +
                                            std::to_string(cap_) + " to " + std::to_string(new_cap));
        TruncatedSeries r(vars_, new_cap);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) <= static_cast<unsigned>(new_cap)) r.set_term(e, c);
        return r;
    }

    TruncatedSeries homogeneous_component(unsigned d) const {
        TruncatedSeries r(vars_, cap_);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) == d) r.set_term(e, c);
        return r;
    }

    TruncatedSeries operator-() const {
        TruncatedSeries r(vars_, cap_);
        for (const auto& [e, c] : terms_) r.set_term(e, -c);
        return r;
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_compatible(b);
        TruncatedSeries r = a.truncated(std::min(a.cap_, b.cap_));
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }

    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_compatible(b);
        TruncatedSeries r = a.truncated(std::min(a.cap_, b.cap_));
        for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_compatible(b);
        TruncatedSeries r(a.vars_, std::min(a.cap_, b.cap_));
        for (const auto& [ea, ca] : a.terms_) {
            unsigned da = total_degree(ea);
            if (da > static_cast<unsigned>(r.cap_)) continue;
            for (const auto& [eb, cb] : b.terms_) {
                if (da + total_degree(eb) > static_cast<unsigned>(r.cap_)) continue;
                ExpVec e(ea.size());
                for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    TruncatedSeries scaled(const R& c) const {
        TruncatedSeries r(vars_, cap_);
        if (ring_traits<R>::is_zero(c)) return r;
        for (const auto& [e, v] : terms_) r.add_term(e, v * c);
        return r;
    }

    TruncatedSeries pow(unsigned k) const {
        if (k == 0) {
            TruncatedSeries r(vars_, cap_);
            R one = terms_.empty() ? ring_traits<R>::one_like(R{})
                                   : ring_traits<R>::one_like(terms_.begin()->second);
            r.set_term(ExpVec(nvars(), 0), one);
            return r;
        }
        TruncatedSeries r = *this;
        for (unsigned i = 1; i < k; ++i) r = r * (*this);
        return r;
    }

    // Equality of all stored terms up to the common cap.
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        if (a.vars_ != b.vars_) return false;
        int cap = std::min(a.cap_, b.cap_);
        auto upto = [cap](const TruncatedSeries& s) {
            std::map<ExpVec, R> t;
            for (const auto& [e, c] : s.terms_)
                if (total_degree(e) <= static_cast<unsigned>(cap)) t.emplace(e, c);
            return t;
        };
        return upto(a) == upto(b);
    }

    std::string str() const;

private:
    void check_exp(const ExpVec& e) const {
        if (e.size() != vars_.size()) throw input_error("exponent arity mismatch");
        if (total_degree(e) > static_cast<unsigned>(cap_))
            throw cap_error("term beyond series cap");
    }
    void check_compatible(const TruncatedSeries& o) const {
        if (vars_ != o.vars_) throw input_error("series variable mismatch");
    }

    std::vector<std::string> vars_;
    int cap_;
    std::map<ExpVec, R> terms_;
};

using Series = TruncatedSeries<Rat>;
using GradedSeries = TruncatedSeries<GradedPolynomial>;

template <class R>
std::string TruncatedSeries<R>::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
        if (!out.empty()) out += " + ";
        bool printed = false;
        if constexpr (std::is_same_v<R, Rat>) {
            out += c.str();
            printed = true;
        } else {
            out += "(" + c.str() + ")";
            printed = true;
        }
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (printed) out += "*";
            out += vars_[i];
            if (e[i] > 1) out += "^" + std::to_string(e[i]);
        }
        (void)printed;
    }
    return out;
}

// --- composition -----------------------------------------------------------

// f univariate, g arbitrary: f(g), truncated at g's cap.  Requires g(0) = 0.
template <class R>
TruncatedSeries<R> compose1(const TruncatedSeries<R>& f, const TruncatedSeries<R>& g) {
    if (f.nvars() != 1) throw input_error("compose1 needs univariate outer series");
    if (!ring_traits<R>::is_zero(g.constant_term()))
        throw input_error("substituted series has nonzero constant term");
    TruncatedSeries<R> acc(g.vars(), g.cap());
    // Horner on descending exponents present in f.
    std::vector<std::pair<unsigned, R>> coeffs(f.terms().size());
    size_t i = 0;
    for (const auto& [e, c] : f.terms()) coeffs[i++] = {e[0], c};
    // highest exponent first
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        unsigned gap = (std::next(it) != coeffs.rend()) ? it->first - std::next(it)->first : it->first;
        acc.add_term(ExpVec(g.nvars(), 0), it->second);
        for (unsigned k = 0; k < gap; ++k) acc = acc * g;
    }
    return acc;
}

// General substitution: assignment[i] replaces variable i of f; all substituted
// series share one variable frame and cap.  Substituted series must have zero
// constant term unless allow_constant is set (only safe when f is genuinely a
// polynomial in that variable rather than a truncation).
template <class R>
TruncatedSeries<R> substitute(const TruncatedSeries<R>& f,
                              const std::vector<TruncatedSeries<R>>& assignment,
                              bool allow_constant = false) {
    if (assignment.size() != f.nvars()) throw input_error("substitute: arity mismatch");
    if (assignment.empty()) throw input_error("substitute: no variables");
    const auto& frame_vars = assignment[0].vars();
    int cap = assignment[0].cap();
    for (const auto& s : assignment) {
        if (s.vars() != frame_vars) throw input_error("substitute: inconsistent frames");
        cap = std::min(cap, s.cap());
        if (!allow_constant && !ring_traits<R>::is_zero(s.constant_term()))
            throw input_error("substituted series has nonzero constant term");
    }
    cap = std::min(cap, f.cap());
    // Cache powers of each substituted series.
    std::vector<std::vector<TruncatedSeries<R>>> powers(f.nvars());
    auto power = [&](size_t var, unsigned k) -> const TruncatedSeries<R>& {
        auto& tab = powers[var];
        if (tab.empty()) tab.push_back(assignment[var].truncated(cap).pow(0));
        while (tab.size() <= k) tab.push_back(tab.back() * assignment[var].truncated(cap));
        return tab[k];
    };
    TruncatedSeries<R> out(frame_vars, cap);
    for (const auto& [e, c] : f.terms()) {
        TruncatedSeries<R> term(frame_vars, cap);
        term.set_term(ExpVec(frame_vars.size(), 0), c);
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) term = term * power(i, e[i]);
        for (const auto& [te, tc] : term.terms()) out.add_term(te, tc);
    }
    return out;
}

// Compositional inverse of a univariate series with f(0) = 0 and invertible
// linear coefficient: returns g with f(g(x)) = x = g(f(x)) up to the cap.
Series reverse_series(const Series& f);

// True iff every positive exponent of every stored monomial is congruent to
// 1 modulo p^n - 1, in each variable separately.
template <class R>
bool is_pn_gradable(const TruncatedSeries<R>& f, long p, int n) {
    require_prime(p);
    if (n < 1) throw input_error("n must be >= 1");
    mpz_class pn;
    mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
    mpz_class period = pn - 1;
    if (period == 1) return true;
    long q = period.get_si();
    for (const auto& [e, c] : f.terms())
        for (unsigned ei : e)
            if (ei > 0 && static_cast<long>(ei) % q != 1 % q) return false;
    return true;
}

// Degree-D homogeneous component of prod_{j=1..l} f(z_j) for univariate f with
// f(0) = 0, computed without materializing other degrees.
Series symmetric_product_expand(const Series& f, int l, unsigned D);

}  // namespace fglab
