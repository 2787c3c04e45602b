#pragma once

#include <map>

#include "fglab/addops.hpp"

namespace fglab {

long int_pow(long base, int e);

// Chern tower from a Morava source to a p^n-typical target: the additive
// coefficients theta_i of log_source applied to the total Chern class, so that
// c_i = [t^i] exp_source(sum_j theta_j t^j).  The Cartan identity holds by
// this reassembly; the solver picks each theta so c_i acts integrally.
class ChernTower {
public:
    ChernTower(FormalGroupLaw source, FormalGroupLaw target, int n, int max_index, int cap_arity,
               int cap_degree)
        : source_(std::move(source)), target_(std::move(target)), n_(n), max_index_(max_index),
          cap_arity_(cap_arity), cap_degree_(cap_degree) {}

    const FormalGroupLaw& source() const { return source_; }
    const FormalGroupLaw& target() const { return target_; }
    int n() const { return n_; }
    int period() const;
    int max_index() const { return max_index_; }
    int cap_arity() const { return cap_arity_; }
    int cap_degree() const { return cap_degree_; }
    bool self_target() const { return source_.same_law(target_); }

    const std::vector<DiagonalOperation>& thetas() const { return thetas_; }
    const DiagonalOperation& theta(int i) const;

    // Symbol series of the correction polynomial Q_i(theta_{<i}) at arity l.
    const SymSeries& q_value(int i, int l) const;
    // Symbol series of c_i = theta_i + Q_i at arity l.
    SymSeries c_value(int i, int l) const;

    void push_theta(DiagonalOperation op) { thetas_.push_back(std::move(op)); }

private:
    const SymSeries& theta_G(int i, int l) const;

    FormalGroupLaw source_, target_;
    int n_, max_index_, cap_arity_, cap_degree_;
    std::vector<DiagonalOperation> thetas_;
    mutable std::map<std::pair<int, int>, SymSeries> theta_cache_;
    mutable std::map<std::pair<int, int>, SymSeries> q_cache_;
};

// Builds theta_1..theta_I by the triangular solver, folding the degree-i
// coefficient of the exponential reassembly into the constraint residues.
// Solver failure aborts with the failing index in the message.
ChernTower build_tower(const FormalGroupLaw& source, int n, const FormalGroupLaw& target,
                       int max_index, int cap_arity, int cap_degree);

// Coefficient of z_1...z_c in c_i(z_1...z_c); zero off the grading class.
Rat rr_constant(const ChernTower& tower, int i, int codim);

// a_i = rr_constant(i, i); asserts a_i != 0, and a p-unit for 1 <= i <= p^n.
Rat constant_a(const ChernTower& tower, int i);

// e_j = coefficient of z_1...z_{1+j(p^n-1)} in c_{p^n} of that class (self
// tower); asserts e_j is a p-unit for j >= 1.
Rat constant_e(const ChernTower& self_tower, int j);

// alpha_j / beta_j of the additive part theta_{p^n}: coefficients of
// z_1...z_l and z_1^{p^n} z_2...z_l at arity l = 1 + j(p^n-1).
std::pair<Rat, Rat> theta_pn_alpha_beta(const ChernTower& self_tower, int j);

// Checks alpha_{j+1} = alpha_j - ((p^{p^n}-p)/v_n) beta_j for 0 <= j < j_max,
// with v_n read off [p]x.  Throws claim_error on violation.
void check_veronese_recursion(const ChernTower& self_tower, int j_max);

// Adams operation as its substitution series [k]x; verifies that the
// Chern-character conjugate acts by t -> k t (diagonal multiplier k^j).
Series adams(const FormalGroupLaw& F, long k);

// smallest valid k for chi: a generator of (Z/p^2)^x for odd p, 3 for p = 2
long default_chi_k(long p);

// h_j from chi_k = (Psi_k - k^{p^n} id) o c_{p^n}; cross-checked against
// e_j k^{p^n}(k^{(j-1)(p^n-1)} - 1).
std::vector<Rat> chi_constants(const ChernTower& self_tower, long k, int j_max);
// f_j = chi_p constants
std::vector<Rat> f_constants(const ChernTower& self_tower, int j_max);

struct MuBRow {
    int i = 0;
    int mu = 0;            // closed form
    int mu_direct = 0;     // from the valuation of the reassembly polynomial P_i
    Rat d;                 // recursion value
    Rat b;                 // d / p^mu
    long chow_lead_vp = 0; // valuation of the solved Chow-tower theta_i lead
};

// mu_i, b_i table with hard cross-checks against the Chow tower.
std::vector<MuBRow> mu_and_b(long p, int n, int i_max, const ChernTower& chow_tower);

// Cartan identity on u = z_1...z_a, v = z_{a+1}...z_{a+b}: compares
// c_tot(u + v) with F_source(c_tot(u), c_tot(v)) coefficient-wise in t up to
// the tower index.  Throws claim_error on mismatch.
void check_cartan(const ChernTower& tower, int a, int b);

// Everything the gamma engine consumes, with provenance caps.
struct ConstantsTable {
    long p = 2;
    int n = 1;
    int cap_arity = 0, cap_degree = 0, max_index = 0;
    long chi_k = 3;
    std::map<std::pair<int, int>, Rat> chern_rr;  // (i, codim) -> leading constant
    std::map<int, Rat> e;                          // j -> e_j
    std::map<int, Rat> h;                          // j -> h_j (k = chi_k)
    std::map<int, Rat> f;                          // j -> f_j (k = p)

    bool has_chern(int i, int codim) const { return chern_rr.count({i, codim}) > 0; }
    Rat chern(int i, int codim) const;
};

ConstantsTable compute_constants(const ChernTower& self_tower, int j_max);

}  // namespace fglab
