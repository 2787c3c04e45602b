#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fglab/series.hpp"

namespace fglab {

// Parameters of a Morava formal group law: log = x + sum_i (a_i/p^i) x^{p^{ni}}.
struct MoravaSpec {
    long p = 2;
    int n = 1;
    std::vector<Rat> a;  // a_i must be p-units; entries past the end repeat the last one

    Rat a_at(size_t i) const;  // 1-based
    void validate() const;
};

// Logarithm-backed formal group law over exact rational coefficients.
// exp = reverse(log); F(x,y) = exp(log x + log y).
class FormalGroupLaw {
public:
    // trivial placeholder law (additive over Z_(2), cap 1)
    FormalGroupLaw();
    FormalGroupLaw(long p, Series log, std::string name);

    long p() const { return p_; }
    int cap() const { return log_.cap(); }
    const std::string& name() const { return name_; }
    const Series& log() const { return log_; }
    const Series& exp() const { return exp_; }

    // Bivariate F(x, y) up to the cap.
    const Series& F() const;

    bool same_law(const FormalGroupLaw& o) const {
        return p_ == o.p_ && log_.truncated(std::min(cap(), o.cap())) ==
                                 o.log_.truncated(std::min(cap(), o.cap()));
    }

private:
    long p_;
    Series log_, exp_;
    mutable std::optional<Series> f_;
    std::string name_;
};

FormalGroupLaw morava(const MoravaSpec& spec, int cap);
FormalGroupLaw additive_fgl(long p, int cap);
FormalGroupLaw multiplicative_fgl(long p, const Rat& beta, int cap);
FormalGroupLaw fgl_from_log_coeffs(long p, const std::vector<std::pair<unsigned, Rat>>& coeffs,
                                   int cap);

// Height-n law obtained from the universal p-typical log by the classifying
// map v_{jn} -> units[j-1] (0 past the end), all other Araki generators to 0.
// Integral by construction; use for legitimate Morava instances at any prime.
FormalGroupLaw fgl_from_araki_units(long p, int n, const std::vector<Rat>& units, int cap);

// Morava log coefficients a_k = p^k * [x^{p^{nk}}] log, for k = 1..count.
std::vector<Rat> extract_morava_a(const FormalGroupLaw& F, int n, int count);

// [m] . x = exp(m log x); [0] = 0, [1] = x.
Series m_series(const FormalGroupLaw& F, long m);

struct HeightResult {
    enum Kind { kFinite, kInfinityCapped } kind = kInfinityCapped;
    int k = 0;       // height when finite
    int cap = 0;     // inspected range

    bool finite() const { return kind == kFinite; }
};

// Least k with the x^{p^k} coefficient of [p]x a p-unit, all lower coefficients
// divisible by p.  kInfinityCapped when no unit shows below the cap (the
// additive law stays there for every cap).
HeightResult height_mod_p(const FormalGroupLaw& F);

bool is_p_typical(const FormalGroupLaw& F);
// Checks the logarithm criterion and cross-checks p^n-gradability of [p]x;
// disagreement raises claim_error (internal inconsistency, not user error).
bool is_pn_typical(const FormalGroupLaw& F, int n);

// Commutativity, unit law and associativity of F up to the cap.
void verify_fgl_axioms(const FormalGroupLaw& F);

// --- universal p-typical logarithm (Araki generators) -----------------------

// log = sum l_i x^{p^i} over Q[v_1..v_m] with p l_m = sum_{i<=m} l_i v_{m-i}^{p^i},
// v_0 = p, l_0 = 1; generators above m act as zero.
struct ArakiLog {
    GeneratorSet gens;
    std::vector<GradedPolynomial> l;  // l[0..], index i holds l_i
    long p = 2;
    int cap = 0;

    GradedSeries as_series() const;
};

ArakiLog araki_log(int num_generators, long p, int cap);

struct BpnReport {
    bool pass = false;
    int n = 1;
    std::vector<GradedPolynomial> specialized_l;  // coefficients after killing v_j, n∤j
    std::vector<int> offending_indices;           // i with nonzero l_i, n∤i
};

// Specializes v_j := 0 for n∤j and asserts the surviving logarithm has only
// x^{p^{ni}} terms up to the cap.
BpnReport bpn_check(int n, int num_generators, long p, int cap);

// --- isomorphism probes ------------------------------------------------------

// gamma = exp_{F1}(log_{F2}(x)); verified to satisfy F1(g(x),g(y)) = g(F2(x,y)).
Series strict_iso(const FormalGroupLaw& F1, const FormalGroupLaw& F2);

struct IntegralityWitness {
    bool integral = true;
    unsigned exponent = 0;
    Rat coefficient;
};

IntegralityWitness iso_is_integral(const Series& gamma, long p);

struct GradedIsoVerdict {
    bool obstructed = false;
    std::optional<long> alpha_residue;  // the forced residue of alpha mod p when unobstructed
};

// Graded multiplicative isomorphism test for two graded height-n laws given by
// (a, b) = images of v_n (unit) and v_{2n}: solvable iff an alpha in Z_(p)^x
// satisfies alpha = a1/a2 and b1 alpha^2 = b2 mod p.
GradedIsoVerdict graded_iso_obstruction(long p, const Rat& a1, const Rat& b1,
                                        const Rat& a2, const Rat& b2);

}  // namespace fglab
