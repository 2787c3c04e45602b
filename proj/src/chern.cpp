#include "fglab/chern.hpp"

#include <algorithm>

#include "fglab/errors.hpp"

namespace fglab {

long int_pow(long base, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

int ChernTower::period() const {
    return static_cast<int>(int_pow(source_.p(), n_)) - 1;
}

const DiagonalOperation& ChernTower::theta(int i) const {
    if (i < 1 || i > static_cast<int>(thetas_.size()))
        throw input_error("tower index out of range");
    return thetas_[static_cast<size_t>(i - 1)];
}

const SymSeries& ChernTower::theta_G(int i, int l) const {
    auto key = std::make_pair(i, l);
    auto it = theta_cache_.find(key);
    if (it == theta_cache_.end())
        it = theta_cache_.emplace(key, evaluate_G(theta(i), l)).first;
    return it->second;
}

const SymSeries& ChernTower::q_value(int i, int l) const {
    auto key = std::make_pair(i, l);
    auto it = q_cache_.find(key);
    if (it != q_cache_.end()) return it->second;
    // [t^i] of the nonlinear part of exp_source(sum_{j<i} theta_j t^j) at arity l
    SymSeries zero(l, cap_degree_);
    std::vector<SymSeries> U(static_cast<size_t>(i) + 1, zero);
    bool any = false;
    for (int j = 1; j < i && j <= static_cast<int>(thetas_.size()); ++j) {
        SymSeries v = theta_G(j, l);
        if (!v.is_zero()) {
            U[static_cast<size_t>(j)] = v;
            any = true;
        }
    }
    SymSeries q = zero;
    if (any) {
        // powers of U in t, truncated at t^i
        std::vector<std::vector<SymSeries>> upow;
        upow.push_back({});  // placeholder for U^0
        upow.push_back(U);
        auto mul_t = [&](const std::vector<SymSeries>& A, const std::vector<SymSeries>& B) {
            std::vector<SymSeries> C(static_cast<size_t>(i) + 1, zero);
            for (size_t x = 1; x <= static_cast<size_t>(i); ++x) {
                if (A[x].is_zero()) continue;
                for (size_t y = 1; x + y <= static_cast<size_t>(i); ++y) {
                    if (B[y].is_zero()) continue;
                    C[x + y] = C[x + y] + A[x] * B[y];
                }
            }
            return C;
        };
        const Series& f = source_.exp();
        for (const auto& [fe, fc] : f.terms()) {
            unsigned k = fe[0];
            if (k < 2 || k > static_cast<unsigned>(i)) continue;
            while (upow.size() <= k) upow.push_back(mul_t(upow.back(), U));
            const SymSeries& comp = upow[k][static_cast<size_t>(i)];
            if (!comp.is_zero()) q = q + comp.scaled(fc);
        }
    }
    return q_cache_.emplace(key, std::move(q)).first->second;
}

SymSeries ChernTower::c_value(int i, int l) const {
    return theta_G(i, l) + q_value(i, l);
}

ChernTower build_tower(const FormalGroupLaw& source, int n, const FormalGroupLaw& target,
                       int max_index, int cap_arity, int cap_degree) {
    if (!is_pn_typical(target, n))
        throw input_error("tower target must be p^n-typical");
    ChernTower tower(source, target, n, max_index, cap_arity, cap_degree);
    for (int i = 1; i <= max_index; ++i) {
        std::map<int, SymSeries> residues;
        for (int l = 1; l <= cap_arity; ++l) {
            SymSeries q = tower.q_value(i, l);
            if (!q.is_zero()) residues.emplace(l, std::move(q));
        }
        SolveResult r = solve_generator(source, target, n, i, cap_arity, cap_degree, residues);
        if (!r.ok)
            throw claim_error("tower construction failed at index " + std::to_string(i) + ": " +
                              r.failure);
        tower.push_theta(std::move(r.op));
    }
    return tower;
}

Rat rr_constant(const ChernTower& tower, int i, int codim) {
    if (codim > tower.cap_arity() || codim > tower.cap_degree())
        throw cap_error("rr_constant needs arity and degree caps >= codim");
    SymSeries c = tower.c_value(i, codim);
    return c.coefficient(ExpVec(static_cast<size_t>(codim), 1));
}

Rat constant_a(const ChernTower& tower, int i) {
    Rat a = rr_constant(tower, i, i);
    const long p = tower.source().p();
    long pn = int_pow(p, tower.n());
    if (a.is_zero()) throw claim_error("a_" + std::to_string(i) + " vanished");
    if (i <= pn && !is_p_unit(a, p))
        throw claim_error("a_" + std::to_string(i) + " = " + a.str() + " is not a p-unit");
    return a;
}

Rat constant_e(const ChernTower& self_tower, int j) {
    const long p = self_tower.source().p();
    long pn = int_pow(p, self_tower.n());
    int l = 1 + j * (static_cast<int>(pn) - 1);
    Rat e = rr_constant(self_tower, static_cast<int>(pn), l);
    if (j >= 1 && !is_p_unit(e, p))
        throw claim_error("e_" + std::to_string(j) + " = " + e.str() + " is not a p-unit");
    return e;
}

std::pair<Rat, Rat> theta_pn_alpha_beta(const ChernTower& self_tower, int j) {
    const long p = self_tower.source().p();
    int pn = static_cast<int>(int_pow(p, self_tower.n()));
    int l = 1 + j * (pn - 1);
    if (l > self_tower.cap_arity()) throw cap_error("arity cap too small for alpha/beta");
    SymSeries G = evaluate_G(self_tower.theta(pn), l);
    ExpVec lead(static_cast<size_t>(l), 1);
    Rat alpha = G.coefficient(lead);
    ExpVec bump = lead;
    bump[0] = static_cast<unsigned>(pn);
    Rat beta = (total_degree(bump) <= static_cast<unsigned>(self_tower.cap_degree()))
                   ? G.coefficient(bump)
                   : Rat(0);
    return {alpha, beta};
}

void check_veronese_recursion(const ChernTower& self_tower, int j_max) {
    const long p = self_tower.source().p();
    int pn = static_cast<int>(int_pow(p, self_tower.n()));
    Series px = m_series(self_tower.source(), p);
    Rat v_n = px.coeff1(static_cast<unsigned>(pn));
    if (!is_p_unit(v_n, p)) throw claim_error("v_n read from [p]x is not a unit");
    mpz_class ppn;
    mpz_ui_pow_ui(ppn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(pn));
    Rat slope = (Rat(ppn) - Rat(p)) / v_n;
    // from comparing [p]-pullbacks: v_n alpha_{j+1} + p beta_j = v_n alpha_j + p^{p^n} beta_j
    for (int j = 0; j < j_max; ++j) {
        auto [alpha_j, beta_j] = theta_pn_alpha_beta(self_tower, j);
        auto [alpha_next, ignored] = theta_pn_alpha_beta(self_tower, j + 1);
        if (alpha_next != alpha_j + slope * beta_j)
            throw claim_error("Veronese recursion failed at j = " + std::to_string(j) +
                              ": alpha_{j+1} = " + alpha_next.str() + ", expected " +
                              (alpha_j + slope * beta_j).str());
    }
}

Series adams(const FormalGroupLaw& F, long k) {
    Series gamma = m_series(F, k);
    // Chern-character conjugate must be t -> k t
    Series conj = compose1(F.log(), compose1(gamma, F.exp()));
    Series expect = Series::variable({"x"}, F.cap(), 0).scaled(Rat(k));
    if (!(conj == expect))
        throw claim_error("Adams conjugate is not multiplication by k");
    return gamma;
}

long default_chi_k(long p) {
    if (p == 2) return 3;
    // smallest generator of (Z/p^2)^x, by direct order computation
    const long m = p * p;
    const long group_order = p * (p - 1);
    for (long k = 2; k < m; ++k) {
        if (k % p == 0) continue;
        long x = k % m, order = 1;
        while (x != 1) {
            x = (x * k) % m;
            ++order;
        }
        if (order == group_order) return k;
    }
    throw claim_error("no generator of (Z/p^2)^x found");
}

namespace {

std::vector<Rat> chi_constants_impl(const ChernTower& self_tower, long k, int j_max) {
    const long p = self_tower.source().p();
    int pn = static_cast<int>(int_pow(p, self_tower.n()));
    Series gamma_k = adams(self_tower.source(), k);
    mpz_class kpn_z(k);
    mpz_pow_ui(kpn_z.get_mpz_t(), kpn_z.get_mpz_t(), static_cast<unsigned long>(pn));
    Rat kpn(kpn_z);
    std::vector<Rat> out;
    for (int j = 1; j <= j_max; ++j) {
        int l = 1 + j * (pn - 1);
        if (l > self_tower.cap_arity()) throw cap_error("arity cap too small for chi constants");
        SymSeries c = self_tower.c_value(pn, l);
        SymSeries chi = c.substitute_each(gamma_k) - c.scaled(kpn);
        Rat h = chi.coefficient(ExpVec(static_cast<size_t>(l), 1));
        // proof identity: h_j = e_j k^{p^n} (k^{(j-1)(p^n-1)} - 1)
        Rat e_j = c.coefficient(ExpVec(static_cast<size_t>(l), 1));
        mpz_class km(k);
        mpz_pow_ui(km.get_mpz_t(), km.get_mpz_t(),
                   static_cast<unsigned long>((j - 1) * (pn - 1)));
        Rat expect = e_j * kpn * (Rat(km) - Rat(1));
        if (h != expect)
            throw claim_error("chi constant mismatch at j = " + std::to_string(j) + ": " +
                              h.str() + " vs " + expect.str());
        out.push_back(h);
    }
    return out;
}

}  // namespace

std::vector<Rat> chi_constants(const ChernTower& self_tower, long k, int j_max) {
    const long p = self_tower.source().p();
    if (k % p == 0) throw input_error("chi needs k coprime to p");
    return chi_constants_impl(self_tower, k, j_max);
}

std::vector<Rat> f_constants(const ChernTower& self_tower, int j_max) {
    return chi_constants_impl(self_tower, self_tower.source().p(), j_max);
}

std::vector<MuBRow> mu_and_b(long p, int n, int i_max, const ChernTower& chow_tower) {
    require_prime(p);
    if (!chow_tower.target().same_law(additive_fgl(p, chow_tower.target().cap())))
        throw input_error("mu_and_b cross-checks against a Chow (additive-target) tower");
    if (chow_tower.max_index() < i_max) throw cap_error("Chow tower shorter than i_max");
    long pn = int_pow(p, n);
    std::vector<Rat> d = d_recursion(p, n, i_max);

    // direct mu: valuations of P_i = [t^i](c_i - log(c_tot)) in abstract c_j's
    GeneratorSet gens;
    for (int j = 1; j <= i_max; ++j) {
        gens.names.push_back("c" + std::to_string(j));
        gens.degrees.push_back(j);
    }
    GradedPolynomial zero(gens);
    std::vector<GradedPolynomial> ctot(static_cast<size_t>(i_max) + 1, zero);
    for (int j = 1; j <= i_max; ++j)
        ctot[static_cast<size_t>(j)] = GradedPolynomial::generator(gens, static_cast<size_t>(j - 1));
    auto mul_t = [&](const std::vector<GradedPolynomial>& A,
                     const std::vector<GradedPolynomial>& B) {
        std::vector<GradedPolynomial> C(static_cast<size_t>(i_max) + 1, zero);
        for (size_t x = 1; x <= static_cast<size_t>(i_max); ++x) {
            if (A[x].is_zero()) continue;
            for (size_t y = 1; x + y <= static_cast<size_t>(i_max); ++y) {
                if (B[y].is_zero()) continue;
                C[x + y] += A[x] * B[y];
            }
        }
        return C;
    };
    // log_source(c_tot) minus the linear part, from the Morava log coefficients
    const Series& log_src = chow_tower.source().log();
    std::vector<GradedPolynomial> nonlinear(static_cast<size_t>(i_max) + 1, zero);
    std::vector<std::vector<GradedPolynomial>> cpow;
    cpow.push_back({});
    cpow.push_back(ctot);
    for (const auto& [le, lc] : log_src.terms()) {
        unsigned m = le[0];
        if (m < 2 || m > static_cast<unsigned>(i_max)) continue;
        while (cpow.size() <= m) cpow.push_back(mul_t(cpow.back(), ctot));
        for (size_t i = 1; i <= static_cast<size_t>(i_max); ++i) {
            const GradedPolynomial& comp = cpow[m][i];
            if (!comp.is_zero()) nonlinear[i] += comp.scaled(lc);
        }
    }

    std::vector<MuBRow> rows;
    for (int i = 1; i <= i_max; ++i) {
        MuBRow row;
        row.i = i;
        // closed form: mu_i = k when i = p^{nk} v with p^n not dividing v
        int mu = 0;
        long q = i;
        while (q % pn == 0) { q /= pn; ++mu; }
        row.mu = mu;
        // direct valuation of P_i
        long minv = 0;
        for (const auto& [e, c] : nonlinear[static_cast<size_t>(i)].terms())
            minv = std::min(minv, vp(c, p));
        row.mu_direct = static_cast<int>(std::max<long>(0, -minv));
        if (row.mu != row.mu_direct)
            throw claim_error("mu mismatch at i = " + std::to_string(i) + ": closed form " +
                              std::to_string(row.mu) + ", direct " + std::to_string(row.mu_direct));
        row.d = d[static_cast<size_t>(i - 1)];
        row.b = row.d / p_power(p, row.mu);
        row.chow_lead_vp = chow_tower.theta(i).leading_valuation();
        if (row.chow_lead_vp != vp(row.b, p))
            throw claim_error("b mismatch at i = " + std::to_string(i) + ": Chow tower lead vp " +
                              std::to_string(row.chow_lead_vp) + ", b = " + row.b.str());
        rows.push_back(row);
    }
    return rows;
}

void check_cartan(const ChernTower& tower, int a, int b) {
    const int nv = a + b;
    const int capD = tower.cap_degree();
    const int I = tower.max_index();
    std::vector<std::string> vars;
    for (int j = 1; j <= nv; ++j) vars.push_back("z" + std::to_string(j));
    Series zero(vars, capD);
    // theta values on u = z_1...z_a and v = z_{a+1}...z_{a+b}
    auto embed = [&](const SymSeries& s, bool back) {
        Series ordered = s.to_series(std::vector<std::string>(vars.begin(), vars.begin() + s.arity()));
        Series out(vars, capD);
        for (const auto& [e, c] : ordered.terms()) {
            ExpVec full(static_cast<size_t>(nv), 0);
            for (size_t i = 0; i < e.size(); ++i) full[back ? i + static_cast<size_t>(a) : i] = e[i];
            out.add_term(full, c);
        }
        return out;
    };
    std::vector<Series> Lsum(static_cast<size_t>(I) + 1, zero);
    std::vector<Series> Lu(static_cast<size_t>(I) + 1, zero), Lv(static_cast<size_t>(I) + 1, zero);
    for (int j = 1; j <= I; ++j) {
        Series tu = embed(evaluate_G(tower.theta(j), a), false);
        Series tv = embed(evaluate_G(tower.theta(j), b), true);
        Lu[static_cast<size_t>(j)] = tu;
        Lv[static_cast<size_t>(j)] = tv;
        Lsum[static_cast<size_t>(j)] = tu + tv;
    }
    auto mul_t = [&](const std::vector<Series>& A, const std::vector<Series>& B) {
        std::vector<Series> C(static_cast<size_t>(I) + 1, zero);
        for (size_t x = 1; x <= static_cast<size_t>(I); ++x) {
            if (A[x].is_zero()) continue;
            for (size_t y = 1; x + y <= static_cast<size_t>(I); ++y) {
                if (B[y].is_zero()) continue;
                C[x + y] = C[x + y] + A[x] * B[y];
            }
        }
        return C;
    };
    // exp reassembly of a t-series
    auto exp_reassemble = [&](const std::vector<Series>& L) {
        std::vector<Series> out(static_cast<size_t>(I) + 1, zero);
        std::vector<std::vector<Series>> lp;
        lp.push_back({});
        lp.push_back(L);
        for (const auto& [fe, fc] : tower.source().exp().terms()) {
            unsigned k = fe[0];
            if (k < 1 || k > static_cast<unsigned>(I)) continue;
            while (lp.size() <= k) lp.push_back(mul_t(lp.back(), L));
            for (size_t i = 1; i <= static_cast<size_t>(I); ++i)
                if (!lp[k][i].is_zero()) out[i] = out[i] + lp[k][i].scaled(fc);
        }
        return out;
    };
    std::vector<Series> lhs = exp_reassemble(Lsum);     // c_tot(u + v)
    std::vector<Series> cu = exp_reassemble(Lu);        // c_tot(u)
    std::vector<Series> cv = exp_reassemble(Lv);        // c_tot(v)
    // F(c_tot(u), c_tot(v)) in the t-truncated ring
    std::vector<Series> rhs(static_cast<size_t>(I) + 1, zero);
    std::vector<std::vector<Series>> cup, cvp;
    cup.push_back({});
    cup.push_back(cu);
    cvp.push_back({});
    cvp.push_back(cv);
    auto tpow = [&](std::vector<std::vector<Series>>& tab, const std::vector<Series>& base,
                    unsigned k) -> const std::vector<Series>& {
        while (tab.size() <= k) tab.push_back(mul_t(tab.back(), base));
        return tab[k];
    };
    // one(t) for exponent zero: the multiplicative unit in the t-ring
    for (const auto& [fe, fc] : tower.source().F().terms()) {
        unsigned ex = fe[0], ey = fe[1];
        if (ex + ey == 0 || ex + ey > static_cast<unsigned>(I)) continue;
        std::vector<Series> term(static_cast<size_t>(I) + 1, zero);
        if (ex == 0) {
            term = tpow(cvp, cv, ey);
        } else if (ey == 0) {
            term = tpow(cup, cu, ex);
        } else {
            term = mul_t(tpow(cup, cu, ex), tpow(cvp, cv, ey));
        }
        for (size_t i = 1; i <= static_cast<size_t>(I); ++i)
            if (!term[i].is_zero()) rhs[i] = rhs[i] + term[i].scaled(fc);
    }
    for (size_t i = 1; i <= static_cast<size_t>(I); ++i) {
        if (!(lhs[i] == rhs[i]))
            throw claim_error("Cartan identity failed at t^" + std::to_string(i) +
                              " on split (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
}

Rat ConstantsTable::chern(int i, int codim) const {
    auto it = chern_rr.find({i, codim});
    if (it == chern_rr.end())
        throw input_error("constant unavailable for c_" + std::to_string(i) + " at codim " +
                          std::to_string(codim));
    return it->second;
}

ConstantsTable compute_constants(const ChernTower& self_tower, int j_max) {
    ConstantsTable table;
    table.p = self_tower.source().p();
    table.n = self_tower.n();
    table.cap_arity = self_tower.cap_arity();
    table.cap_degree = self_tower.cap_degree();
    table.max_index = self_tower.max_index();
    table.chi_k = default_chi_k(table.p);
    int per = self_tower.period();
    int pn = per + 1;
    for (int i = 1; i <= self_tower.max_index(); ++i) {
        for (int codim = i; codim <= self_tower.cap_arity() && codim <= self_tower.cap_degree();
             codim += (per == 0 ? 1 : per)) {
            if (per > 0 && (codim - i) % per != 0) continue;
            table.chern_rr[{i, codim}] = rr_constant(self_tower, i, codim);
        }
    }
    for (int j = 1; j <= j_max; ++j) {
        int l = 1 + j * (pn - 1);
        if (l > self_tower.cap_arity() || l > self_tower.cap_degree()) break;
        table.e[j] = constant_e(self_tower, j);
    }
    int jm = 0;
    for (int j = 1; j <= j_max; ++j) {
        int l = 1 + j * (pn - 1);
        if (l <= self_tower.cap_arity() && l <= self_tower.cap_degree()) jm = j;
    }
    if (jm > 0) {
        std::vector<Rat> h = chi_constants(self_tower, table.chi_k, jm);
        std::vector<Rat> f = f_constants(self_tower, jm);
        for (int j = 1; j <= jm; ++j) {
            table.h[j] = h[static_cast<size_t>(j - 1)];
            table.f[j] = f[static_cast<size_t>(j - 1)];
        }
    }
    return table;
}

}  // namespace fglab
