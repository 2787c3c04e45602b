#include "fglab/symseries.hpp"

#include <algorithm>
#include <functional>

#include "fglab/errors.hpp"

namespace fglab {

namespace {

ExpVec sorted_desc(ExpVec e) {
    std::sort(e.begin(), e.end(), std::greater<unsigned>());
    return e;
}

// Calls fn once per distinct permutation of key.
void for_each_distinct_permutation(const ExpVec& key, const std::function<void(const ExpVec&)>& fn) {
    ExpVec v = key;
    std::sort(v.begin(), v.end());
    do {
        fn(v);
    } while (std::next_permutation(v.begin(), v.end()));
}

// All non-increasing tuples of the given length with entries <= first_max
// summing to total (entries may be 0).
void sorted_tuples_rec(int length, unsigned total, unsigned first_max, ExpVec& acc,
                       const std::function<void(const ExpVec&)>& fn) {
    if (length == 0) {
        if (total == 0) fn(acc);
        return;
    }
    unsigned hi = std::min(first_max, total);
    for (unsigned v = hi + 1; v-- > 0;) {
        if (static_cast<unsigned long>(v) * static_cast<unsigned long>(length) < total) break;
        acc.push_back(v);
        sorted_tuples_rec(length - 1, total - v, v, acc, fn);
        acc.pop_back();
    }
}

}  // namespace

Rat SymSeries::coefficient(ExpVec e) const {
    auto it = terms_.find(sorted_desc(std::move(e)));
    return it == terms_.end() ? Rat(0) : it->second;
}

void SymSeries::add_term(ExpVec e, const Rat& c) {
    if (c.is_zero()) return;
    if (static_cast<int>(e.size()) != arity_) throw input_error("SymSeries arity mismatch");
    if (total_degree(e) > static_cast<unsigned>(cap_)) return;
    ExpVec k = sorted_desc(std::move(e));
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(std::move(k), c);
        memlimit::charge_terms(1);
    } else {
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
            memlimit::charge_terms(-1);
        }
    }
}

SymSeries SymSeries::operator-() const {
    SymSeries r(arity_, cap_);
    for (const auto& [e, c] : terms_) r.add_term(e, -c);
    return r;
}

SymSeries operator+(const SymSeries& a, const SymSeries& b) {
    if (a.arity_ != b.arity_) throw input_error("SymSeries arity mismatch");
    SymSeries r(a.arity_, std::min(a.cap_, b.cap_));
    for (const auto& [e, c] : a.terms_)
        if (total_degree(e) <= static_cast<unsigned>(r.cap_)) r.add_term(e, c);
    for (const auto& [e, c] : b.terms_)
        if (total_degree(e) <= static_cast<unsigned>(r.cap_)) r.add_term(e, c);
    return r;
}

SymSeries operator-(const SymSeries& a, const SymSeries& b) { return a + (-b); }

SymSeries operator*(const SymSeries& a, const SymSeries& b) {
    if (a.arity_ != b.arity_) throw input_error("SymSeries arity mismatch");
    const int l = a.arity_;
    SymSeries r(l, std::min(a.cap_, b.cap_));
    if (a.is_zero() || b.is_zero()) return r;
    std::vector<unsigned> adeg, bdeg;
    for (const auto& [e, c] : a.terms_) adeg.push_back(total_degree(e));
    for (const auto& [e, c] : b.terms_) bdeg.push_back(total_degree(e));
    std::sort(adeg.begin(), adeg.end());
    adeg.erase(std::unique(adeg.begin(), adeg.end()), adeg.end());
    std::sort(bdeg.begin(), bdeg.end());
    bdeg.erase(std::unique(bdeg.begin(), bdeg.end()), bdeg.end());

    // For a sorted target t the ordered-series coefficient at the ordered
    // monomial t sums over componentwise splits; each factor is looked up
    // through its own sorted key.
    ExpVec mu(static_cast<size_t>(l));
    for (unsigned da : adeg) {
        for (unsigned db : bdeg) {
            if (da + db > static_cast<unsigned>(r.cap_)) continue;
            unsigned d = da + db;
            ExpVec acc;
            sorted_tuples_rec(l, d, d, acc, [&](const ExpVec& t) {
                Rat total(0);
                std::function<void(size_t, unsigned)> split = [&](size_t pos, unsigned left) {
                    if (pos == t.size()) {
                        if (left != 0) return;
                        Rat ca = a.coefficient(mu);
                        if (ca.is_zero()) return;
                        ExpVec rest(t.size());
                        for (size_t i = 0; i < t.size(); ++i) rest[i] = t[i] - mu[i];
                        Rat cb = b.coefficient(rest);
                        if (!cb.is_zero()) total += ca * cb;
                        return;
                    }
                    unsigned hi = std::min<unsigned>(t[pos], left);
                    for (unsigned v = 0; v <= hi; ++v) {
                        mu[pos] = v;
                        split(pos + 1, left - v);
                    }
                };
                split(0, da);
                if (!total.is_zero()) r.add_term(t, total);
            });
        }
    }
    return r;
}

SymSeries SymSeries::scaled(const Rat& c) const {
    SymSeries r(arity_, cap_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) r.add_term(e, v * c);
    return r;
}

SymSeries SymSeries::pow(unsigned k) const {
    if (k == 0) throw input_error("SymSeries::pow needs k >= 1");
    SymSeries r = *this;
    for (unsigned i = 1; i < k; ++i) r = r * (*this);
    return r;
}

SymSeries SymSeries::substitute_each(const Series& g) const {
    if (g.nvars() != 1) throw input_error("substitute_each needs univariate g");
    if (!g.constant_term().is_zero()) throw input_error("substitute_each needs g(0) = 0");
    SymSeries out(arity_, cap_);
    unsigned max_exp = 0;
    for (const auto& [key, c] : terms_)
        if (!key.empty()) max_exp = std::max(max_exp, key[0]);
    std::vector<Series> gp;
    gp.push_back(Series::variable(g.vars(), std::min(cap_, g.cap()), 0).pow(0));
    gp.push_back(g.truncated(std::min(cap_, g.cap())));
    while (gp.size() <= max_exp) gp.push_back(gp.back() * gp[1]);
    auto gpow = [&](unsigned k) -> const Series& { return gp[k]; };
    for (const auto& [key, c] : terms_) {
        // orbit sum: for each distinct permutation mu of key expand
        // prod_j g^{mu_j}(z_j) keeping only non-increasing outputs
        for_each_distinct_permutation(key, [&](const ExpVec& mu) {
            ExpVec d(static_cast<size_t>(arity_), 0);
            std::function<void(size_t, unsigned, unsigned, Rat)> rec =
                [&](size_t pos, unsigned left, unsigned prev, Rat accc) {
                    if (pos == mu.size()) {
                        out.add_term(d, accc);
                        return;
                    }
                    if (mu[pos] == 0) {
                        d[pos] = 0;
                        rec(pos + 1, left, 0, accc);
                        return;
                    }
                    const Series& P = gpow(mu[pos]);
                    for (const auto& [pe, pc] : P.terms()) {
                        unsigned dd = pe[0];
                        if (dd > prev || dd > left) continue;
                        d[pos] = dd;
                        rec(pos + 1, left - dd, dd, accc * pc);
                    }
                };
            rec(0, static_cast<unsigned>(cap_), static_cast<unsigned>(cap_), c);
        });
    }
    return out;
}

Series SymSeries::to_series(const std::vector<std::string>& vars) const {
    if (static_cast<int>(vars.size()) != arity_) throw input_error("to_series arity mismatch");
    Series out(vars, cap_);
    for (const auto& [key, c] : terms_)
        for_each_distinct_permutation(key, [&](const ExpVec& mu) { out.add_term(mu, c); });
    return out;
}

bool SymSeries::divisible_by_all_vars() const {
    for (const auto& [key, c] : terms_)
        if (key.empty() || key.back() == 0) return false;
    return true;
}

bool SymSeries::gradable(long p, int n) const {
    mpz_class pn;
    mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
    mpz_class period = pn - 1;
    if (period == 1) return true;
    long q = period.get_si();
    for (const auto& [key, c] : terms_)
        for (unsigned e : key)
            if (e > 0 && static_cast<long>(e) % q != 1 % q) return false;
    return true;
}

std::string SymSeries::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += c.str() + "*[";
        for (size_t i = 0; i < e.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(e[i]);
        }
        out += "]";
    }
    return out;
}

void for_each_sorted_tuple(const std::vector<unsigned>& support, int length, unsigned total,
                           const std::function<void(const ExpVec&)>& fn) {
    std::vector<unsigned> supp = support;
    std::sort(supp.begin(), supp.end(), std::greater<unsigned>());
    supp.erase(std::unique(supp.begin(), supp.end()), supp.end());
    ExpVec acc;
    std::function<void(int, unsigned, unsigned)> rec = [&](int left, unsigned remaining,
                                                           unsigned prev) {
        if (left == 0) {
            if (remaining == 0) fn(acc);
            return;
        }
        for (unsigned v : supp) {
            if (v > prev || v > remaining) continue;
            if (static_cast<unsigned long>(v) * static_cast<unsigned long>(left) < remaining)
                break;  // supp sorted descending: later values only smaller
            acc.push_back(v);
            rec(left - 1, remaining - v, v);
            acc.pop_back();
        }
    };
    rec(length, total, total);
}

}  // namespace fglab
