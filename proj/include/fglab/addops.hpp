#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fglab/fgl.hpp"
#include "fglab/padic.hpp"
#include "fglab/symseries.hpp"

namespace fglab {

// An additive operation between two free theories in Chern-character
// coordinates: a rational multiplier lambda_s per codimension
// lead + s*(p^n - 1), where (p, n) belong to the source Morava theory.
// Composition of such operations is pointwise multiplication of multipliers.
struct DiagonalOperation {
    FormalGroupLaw source;
    FormalGroupLaw target;
    int n_source = 1;
    int lead = 1;
    std::map<int, Rat> lambda;  // stage s >= 0 -> multiplier
    int cap_arity = 0;
    int cap_degree = 0;

    long p() const { return source.p(); }
    int period() const;
    int codim_of_stage(int s) const { return lead + s * period(); }
    int stages() const { return (cap_degree - lead) / period() + 1; }

    Rat lambda_stage(int s) const {
        auto it = lambda.find(s);
        return it == lambda.end() ? Rat(0) : it->second;
    }
    Rat lambda_at_codim(int d) const;
    Rat leading_coefficient() const { return lambda_stage(0); }
    long leading_valuation() const { return vp(leading_coefficient(), p()); }

    // identity coordinates on the residue class of `lead`
    static DiagonalOperation identity(const FormalGroupLaw& F, int n, int lead, int cap_arity,
                                      int cap_degree);
};

// Per-(source,target) evaluation tables: a_d(t) = sum_k c_k t^{E_k} [z^d] g^{E_k}
// with f = exp_source = sum c_k w^{E_k} and g = log_target.  The symbol series
// coefficient of G_l at a sorted monomial m is sum_s lambda_s [t^{D_s}] prod_j a_{m_j}(t).
class SymbolKernel {
public:
    SymbolKernel(const FormalGroupLaw& source, const FormalGroupLaw& target, int cap_degree);

    int cap_degree() const { return cap_; }
    const std::vector<unsigned>& support() const { return support_; }
    // t-polynomial for one z-degree; index = t-power
    const std::vector<Rat>& a_poly(unsigned d) const;

    // [t^{tpow}] prod_j a_{m_j}(t) for a sorted tuple m; tpow <= cap.
    std::vector<Rat> tuple_poly(const ExpVec& m) const;

private:
    int cap_;
    std::vector<std::vector<Rat>> a_;  // a_[d] = coefficients of a_d(t)
    std::vector<unsigned> support_;
};

// G_l: the operation's symbol series on l projective-space classes.
SymSeries evaluate_G(const DiagonalOperation& op, int l);

struct IntegralWitness {
    bool integral = true;
    int arity = 0;
    ExpVec monomial;
    Rat coefficient;
};

IntegralWitness is_integral(const DiagonalOperation& op);

// --- d-table ------------------------------------------------------------------

// Minimal p-power scaling making the Chern-character projection ch_i integral
// on products of projective spaces, by direct search over k = 0, 1, 2, ...
Rat d_constant(long p, int n, int i, int cap_arity, int cap_degree);

// Appendix-style recursion: d_1 = 1; d_i = max_j d_j d_{i-j}, doubled by p at
// i = p^{sn}.  Returns d_1..d_{i_max}.
std::vector<Rat> d_recursion(long p, int n, int i_max);

// --- triangular solver ----------------------------------------------------------

struct SolveOptions {
    int e_max = 48;           // leading-valuation search bound
    int stage_retries = 2;    // alternative representatives per stage
};

struct SolveResult {
    bool ok = false;
    DiagonalOperation op;
    long e = 0;  // leading valuation
    std::string failure;  // offending constraint when not ok
};

// Constructs an integral operation with the given lead codimension: stage 0
// fixes lambda_0 (p^e with minimal achievable e when the constraints allow a
// pure p-power, the canonical minimal-valuation pick otherwise), later stages
// intersect the p-adic balls cut out by the integrality constraints of their
// degree window and take canonical_pick, with bounded most-recent-first
// backtracking before the leading valuation is raised.  `residues` folds the
// inhomogeneous symbol data of a non-additive correction term (per arity)
// into every constraint.
SolveResult solve_generator(const FormalGroupLaw& source, const FormalGroupLaw& target,
                            int n_source, int lead, int cap_arity, int cap_degree,
                            const std::map<int, SymSeries>& residues = {},
                            const SolveOptions& opts = {});

// Minimal e per cap in the schedule (cap_arity = cap_degree = cap); a strictly
// increasing sequence is the computational signature of non-existence.
std::vector<long> required_leading_valuation(const FormalGroupLaw& source,
                                             const FormalGroupLaw& target, int n_source,
                                             int lead, const std::vector<int>& cap_schedule);

// --- operation algebra ----------------------------------------------------------

// Pointwise product of coordinates (op2 after op1); requires op1.target = op2.source.
DiagonalOperation compose(const DiagonalOperation& op2, const DiagonalOperation& op1);

// Triangular expansion of diagonal coordinates in a basis with strictly
// increasing leads; throws claim_error when the coordinates do not lie in the
// basis span (nonzero residue at an uncovered codimension).
std::vector<Rat> expand_in_basis(const std::map<int, Rat>& coords,
                                 const std::vector<DiagonalOperation>& basis);

struct InvertResult {
    bool ok = false;
    std::vector<Rat> inverse_coeffs;  // coordinates of the inverse in the basis
    int failing_index = -1;           // first i <= p^n-1 with a_i not a unit, on failure
};

// Inverse of sum_i a_i phi_i in the coordinate algebra, expanded in the same
// basis; succeeds iff the expansion is p-integral (the invertibility criterion).
InvertResult invert(const std::vector<Rat>& coeffs, const std::vector<DiagonalOperation>& basis);

struct CrossIsoResult {
    bool invertible = false;
    std::vector<DiagonalOperation> forward;   // phi_i : K1 -> K2, i = 1..p^n-1
    std::vector<DiagonalOperation> backward;  // psi_i : K2 -> K1
    std::vector<Rat> composite_coeffs;        // psi o phi in the K1 endo-basis
};

// Solves the cross-theory generators for i = 1..p^n-1 both ways, sums them and
// certifies invertibility of the composite via the unit criterion.
CrossIsoResult cross_iso(const FormalGroupLaw& K1, const FormalGroupLaw& K2, int n,
                         int cap_arity, int cap_degree);

}  // namespace fglab
