#include "fglab/fgl.hpp"

#include <algorithm>

namespace fglab {

namespace {

const std::vector<std::string> kX = {"x"};
const std::vector<std::string> kXY = {"x", "y"};

}  // namespace

Rat MoravaSpec::a_at(size_t i) const {
    if (i == 0) throw input_error("a index is 1-based");
    if (a.empty()) throw input_error("MoravaSpec needs at least one unit a_1");
    return i <= a.size() ? a[i - 1] : a.back();
}

void MoravaSpec::validate() const {
    require_prime(p);
    if (n < 1) throw input_error("Morava spec needs n >= 1");
    if (a.empty()) throw input_error("MoravaSpec needs at least one unit a_1");
    for (const Rat& u : a)
        if (!is_p_unit(u, p))
            throw input_error("Morava a_i must be a p-unit, got " + u.str());
}

FormalGroupLaw::FormalGroupLaw()
    : p_(2), log_(Series::variable(kX, 1, 0)), exp_(Series::variable(kX, 1, 0)),
      name_("placeholder") {}

FormalGroupLaw::FormalGroupLaw(long p, Series log, std::string name)
    : p_(p), log_(std::move(log)), exp_(kX, 0), name_(std::move(name)) {
    require_prime(p_);
    if (log_.nvars() != 1) throw input_error("logarithm must be univariate");
    if (!log_.constant_term().is_zero() || log_.coeff1(1) != Rat(1))
        throw input_error("logarithm must be x + higher order terms");
    exp_ = reverse_series(log_);
}

const Series& FormalGroupLaw::F() const {
    if (!f_) {
        Series lx = substitute(log_, {Series::variable(kXY, cap(), 0)});
        Series ly = substitute(log_, {Series::variable(kXY, cap(), 1)});
        f_ = compose1(exp_, lx + ly);
    }
    return *f_;
}

FormalGroupLaw morava(const MoravaSpec& spec, int cap) {
    spec.validate();
    if (cap < 1) throw input_error("cap must be >= 1");
    Series log(kX, cap);
    log.set_coeff1(1, Rat(1));
    mpz_class pni(1);
    mpz_class pn;
    mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(spec.p), static_cast<unsigned long>(spec.n));
    Rat pinv = Rat(spec.p).inverse();
    Rat denom(1);
    for (size_t i = 1;; ++i) {
        pni *= pn;
        if (pni > cap) break;
        denom *= Rat(spec.p);
        log.set_coeff1(static_cast<unsigned>(pni.get_ui()), spec.a_at(i) / denom);
    }
    return FormalGroupLaw(spec.p, log,
                          "K(" + std::to_string(spec.n) + ")@p=" + std::to_string(spec.p));
}

FormalGroupLaw additive_fgl(long p, int cap) {
    Series log(kX, cap);
    log.set_coeff1(1, Rat(1));
    return FormalGroupLaw(p, log, "additive");
}

FormalGroupLaw multiplicative_fgl(long p, const Rat& beta, int cap) {
    if (beta.is_zero()) throw input_error("multiplicative FGL needs beta != 0");
    // F = x + y + beta xy has log = sum_{k>=1} (-beta)^{k-1} x^k / k.
    Series log(kX, cap);
    Rat pw(1);
    for (int k = 1; k <= cap; ++k) {
        log.set_coeff1(static_cast<unsigned>(k), pw / Rat(k));
        pw *= -beta;
    }
    return FormalGroupLaw(p, log, "multiplicative");
}

FormalGroupLaw fgl_from_log_coeffs(long p, const std::vector<std::pair<unsigned, Rat>>& coeffs,
                                   int cap) {
    Series log(kX, cap);
    log.set_coeff1(1, Rat(1));
    for (const auto& [e, c] : coeffs) {
        if (e == 0) throw input_error("logarithm cannot have a constant term");
        if (e == 1 && c != Rat(1)) throw input_error("logarithm linear coefficient must be 1");
        if (e <= static_cast<unsigned>(cap)) log.set_coeff1(e, c);
    }
    return FormalGroupLaw(p, log, "log-specified");
}

FormalGroupLaw fgl_from_araki_units(long p, int n, const std::vector<Rat>& units, int cap) {
    require_prime(p);
    if (n < 1) throw input_error("n must be >= 1");
    for (const Rat& u : units)
        if (!u.is_zero() && !is_p_integral(u, p))
            throw input_error("Araki unit images must be p-integral");
    if (units.empty() || !is_p_unit(units[0], p))
        throw input_error("v_n must map to a p-unit for height n");
    // l_m = (sum_{0<=i<m} l_i v_{m-i}^{p^i}) / (p - p^{p^m}), v_{jn} = units[j-1], others 0.
    std::vector<Rat> l = {Rat(1)};
    Series log(kX, cap);
    log.set_coeff1(1, Rat(1));
    mpz_class pm(1);  // p^m
    for (int m = 1;; ++m) {
        pm *= p;
        if (pm > cap) break;
        Rat num(0);
        mpz_class pi(1);  // p^i
        for (int i = 0; i < m; ++i) {
            int j = m - i;
            Rat vj(0);
            if (j % n == 0 && static_cast<size_t>(j / n) <= units.size()) vj = units[j / n - 1];
            if (!vj.is_zero() && !l[i].is_zero()) {
                // v_j^{p^i}
                mpq_class base = vj.raw();
                mpz_class e = pi;
                mpz_class bn, bd;
                mpz_pow_ui(bn.get_mpz_t(), base.get_num().get_mpz_t(), e.get_ui());
                mpz_pow_ui(bd.get_mpz_t(), base.get_den().get_mpz_t(), e.get_ui());
                num += l[i] * Rat(mpq_class(bn, bd));
            }
            pi *= p;
        }
        // p - p^{p^m}
        mpz_class ppm;
        mpz_ui_pow_ui(ppm.get_mpz_t(), static_cast<unsigned long>(p), pm.get_ui());
        Rat denom = Rat(p) - Rat(ppm);
        l.push_back(num / denom);
        if (!l.back().is_zero()) log.set_coeff1(static_cast<unsigned>(pm.get_ui()), l.back());
    }
    return FormalGroupLaw(p, log, "araki-specialized");
}

std::vector<Rat> extract_morava_a(const FormalGroupLaw& F, int n, int count) {
    std::vector<Rat> out;
    mpz_class pn;
    mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(F.p()),
                  static_cast<unsigned long>(n));
    mpz_class pni(1);
    Rat pk(1);
    for (int k = 1; k <= count; ++k) {
        pni *= pn;
        pk *= Rat(F.p());
        if (pni > F.cap()) break;
        out.push_back(F.log().coeff1(static_cast<unsigned>(pni.get_ui())) * pk);
    }
    return out;
}

Series m_series(const FormalGroupLaw& F, long m) {
    if (m == 0) return Series(kX, F.cap());
    if (m == 1) return Series::variable(kX, F.cap(), 0);
    return compose1(F.exp(), F.log().scaled(Rat(m)));
}

HeightResult height_mod_p(const FormalGroupLaw& F) {
    const long p = F.p();
    if (F.cap() < p) throw cap_error("cap too small to see x^p in [p]x");
    Series px = m_series(F, p);
    HeightResult res;
    res.cap = F.cap();
    for (const auto& [e, c] : px.terms()) {
        if (!is_p_integral(c, p))
            throw claim_error("[p]-series has non p-integral coefficient " + c.str());
        if (is_p_unit(c, p)) {
            // first unit must sit at a p-power exponent
            unsigned d = e[0];
            mpz_class q(1);
            int k = 0;
            while (q < d) { q *= p; ++k; }
            if (q != d)
                throw claim_error("[p]x has unit coefficient at non p-power exponent " +
                                  std::to_string(d));
            if (k == 0) throw claim_error("[p]x has unit linear coefficient");
            res.kind = HeightResult::kFinite;
            res.k = k;
            return res;
        }
    }
    res.kind = HeightResult::kInfinityCapped;
    return res;
}

bool is_p_typical(const FormalGroupLaw& F) {
    const long p = F.p();
    for (const auto& [e, c] : F.log().terms()) {
        unsigned d = e[0];
        mpz_class q(1);
        while (q < d) q *= p;
        if (q != d) return false;
    }
    return true;
}

bool is_pn_typical(const FormalGroupLaw& F, int n) {
    const long p = F.p();
    mpz_class pn;
    mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
    bool log_criterion = true;
    for (const auto& [e, c] : F.log().terms()) {
        unsigned d = e[0];
        mpz_class q(1);
        while (q < d) q *= pn;
        if (q != d) { log_criterion = false; break; }
    }
    // Independent route: p-typicality plus p^n-gradability of the p-series.
    bool series_criterion = is_p_typical(F) && is_pn_gradable(m_series(F, p), p, n);
    if (log_criterion != series_criterion)
        throw claim_error("p^n-typicality criteria disagree for " + F.name());
    return log_criterion;
}

void verify_fgl_axioms(const FormalGroupLaw& F) {
    const Series& f = F.F();
    const int cap = F.cap();
    // symmetry
    Series swapped(kXY, cap);
    for (const auto& [e, c] : f.terms()) swapped.add_term({e[1], e[0]}, c);
    if (!(swapped == f)) throw claim_error(F.name() + ": F(x,y) != F(y,x)");
    // unit: F(x, 0) = x
    Series x1 = Series::variable(kX, cap, 0);
    Series zero(kX, cap);
    Series fx0 = substitute(f, {x1, zero});
    if (!(fx0 == x1)) throw claim_error(F.name() + ": F(x,0) != x");
    // associativity in three variables
    const std::vector<std::string> xyz = {"x", "y", "z"};
    Series X = Series::variable(xyz, cap, 0), Y = Series::variable(xyz, cap, 1),
           Z = Series::variable(xyz, cap, 2);
    Series fxy = substitute(f, {X, Y});
    Series fyz = substitute(f, {Y, Z});
    Series lhs = substitute(f, {fxy, Z});
    Series rhs = substitute(f, {X, fyz});
    if (!(lhs == rhs)) throw claim_error(F.name() + ": associativity fails");
}

GradedSeries ArakiLog::as_series() const {
    GradedSeries s(std::vector<std::string>{"x"}, cap);
    mpz_class pi(1);
    for (size_t i = 0; i < l.size(); ++i) {
        if (pi <= cap && !l[i].is_zero())
            s.set_term(ExpVec{static_cast<unsigned>(pi.get_ui())}, l[i]);
        pi *= p;
    }
    return s;
}

ArakiLog araki_log(int num_generators, long p, int cap) {
    require_prime(p);
    if (num_generators < 1) throw input_error("need at least one generator");
    mpz_class pfirst(p);
    if (cap < pfirst) throw cap_error("cap must reach p so at least one generator matters");
    ArakiLog out;
    out.gens = GeneratorSet::araki(p, num_generators);
    out.p = p;
    out.cap = cap;
    out.l.push_back(GradedPolynomial::constant(out.gens, Rat(1)));  // l_0 = 1
    mpz_class pm(1);
    for (int m = 1;; ++m) {
        pm *= p;
        if (pm > cap) break;
        GradedPolynomial num(out.gens);
        mpz_class pi(1);
        for (int i = 0; i < m; ++i) {
            int j = m - i;
            if (j <= num_generators) {
                GradedPolynomial vj = GradedPolynomial::generator(out.gens, static_cast<size_t>(j - 1));
                num += out.l[static_cast<size_t>(i)] * vj.pow(static_cast<unsigned>(pi.get_ui()));
            }
            pi *= p;
        }
        mpz_class ppm;
        mpz_ui_pow_ui(ppm.get_mpz_t(), static_cast<unsigned long>(p), pm.get_ui());
        Rat denom = Rat(p) - Rat(ppm);
        out.l.push_back(num.scaled(denom.inverse()));
    }
    return out;
}

BpnReport bpn_check(int n, int num_generators, long p, int cap) {
    if (n < 1) throw input_error("n must be >= 1");
    ArakiLog univ = araki_log(num_generators, p, cap);
    std::vector<size_t> kill;
    for (int j = 1; j <= num_generators; ++j)
        if (j % n != 0) kill.push_back(static_cast<size_t>(j - 1));
    BpnReport rep;
    rep.n = n;
    rep.pass = true;
    for (size_t i = 0; i < univ.l.size(); ++i) {
        GradedPolynomial li = univ.l[i].kill_generators(kill);
        rep.specialized_l.push_back(li);
        if (static_cast<int>(i) % n != 0 && !li.is_zero()) {
            rep.pass = false;
            rep.offending_indices.push_back(static_cast<int>(i));
        }
    }
    return rep;
}

Series strict_iso(const FormalGroupLaw& F1, const FormalGroupLaw& F2) {
    if (F1.p() != F2.p()) throw input_error("strict_iso needs equal primes");
    int cap = std::min(F1.cap(), F2.cap());
    Series gamma = compose1(F1.exp().truncated(cap), F2.log().truncated(cap));
    // gamma intertwines the two laws: F1(g(x), g(y)) = g(F2(x, y)).
    Series gx = substitute(gamma, {Series::variable(kXY, cap, 0)});
    Series gy = substitute(gamma, {Series::variable(kXY, cap, 1)});
    Series lhs = substitute(F1.F().truncated(cap), {gx, gy});
    Series rhs = compose1(gamma, F2.F().truncated(cap));
    if (!(lhs == rhs)) throw claim_error("strict_iso verification failed");
    return gamma;
}

IntegralityWitness iso_is_integral(const Series& gamma, long p) {
    IntegralityWitness w;
    for (const auto& [e, c] : gamma.terms()) {
        if (!is_p_integral(c, p)) {
            w.integral = false;
            w.exponent = e[0];
            w.coefficient = c;
            return w;
        }
    }
    return w;
}

GradedIsoVerdict graded_iso_obstruction(long p, const Rat& a1, const Rat& b1,
                                        const Rat& a2, const Rat& b2) {
    require_prime(p);
    if (!is_p_unit(a1, p) || !is_p_unit(a2, p))
        throw input_error("a_1, a_2 must be p-units");
    if (!is_p_integral(b1, p) || !is_p_integral(b2, p))
        throw input_error("b_1, b_2 must be p-integral");
    GradedIsoVerdict v;
    long alpha = residue_mod_p(a1 / a2, p);
    long lhs = residue_mod_p(b1 * Rat(alpha) * Rat(alpha), p);
    long rhs = residue_mod_p(b2, p);
    if (lhs == rhs) {
        v.obstructed = false;
        v.alpha_residue = alpha;
    } else {
        v.obstructed = true;
    }
    return v;
}

}  // namespace fglab
