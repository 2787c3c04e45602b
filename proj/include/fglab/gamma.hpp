#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fglab/chern.hpp"

namespace fglab {

struct Cell {
    std::string name;
    int tau_codim = 0;
    int grading = 0;  // residue mod p^n - 1
    bool subvariety = false;
};

// leading term of a product of two cells; tails are unknown elements of
// strictly higher codimension in the same grading
struct ProductRule {
    Rat lead_coeff;
    std::string lead_cell;  // empty = no known lead
    bool unknown_tail = true;
};

class CellularModule {
public:
    long p = 2;
    int n = 1;
    bool iso_flag = false;
    std::vector<Cell> cells;
    std::map<std::pair<std::string, std::string>, ProductRule> products;  // key sorted

    int period() const { return static_cast<int>(int_pow(p, n)) - 1; }
    int dimension() const;  // max cell codimension
    const Cell& cell(const std::string& name) const;
    const Cell& unit_cell() const;
    bool has_cell(const std::string& name) const;
    const ProductRule* rule(const std::string& a, const std::string& b) const;

    // invariant checks: exactly one codim-0 cell; product rules respect
    // codimension addition and grading addition
    void validate() const;
};

// p-integral affine expression in named unknown parameters
struct Affine {
    Rat known;
    std::map<std::string, Rat> unknowns;  // parameter name -> coefficient

    bool is_known() const { return unknowns.empty(); }
    bool is_zero() const { return known.is_zero() && unknowns.empty(); }
    Affine& operator+=(const Affine& o);
    Affine scaled(const Rat& c) const;
    std::string str() const;
};

struct ParamGen {
    int counter = 0;
    std::string fresh(const std::string& hint);
};

// known-or-affine entries over cells; entries absent = 0
struct ParametricVector {
    std::map<std::string, Affine> entries;
    int weight = 0;        // guaranteed gamma weight
    int grading = 0;       // all entries share one grading
    std::string label;

    bool is_zero() const;
    int leading_codim(const CellularModule& mod) const;  // smallest codim with nonzero entry
    ParametricVector& add(const ParametricVector& o);
    ParametricVector scaled(const Rat& c) const;
};

// product of two vectors through the module's leading-term rules; unknown
// products spread fresh parameters over every admissible higher cell
ParametricVector module_product(const CellularModule& mod, const ParametricVector& a,
                                const ParametricVector& b, ParamGen& gen);

enum class OpKind { Chern, Chi, PsiP };

struct GammaOp {
    OpKind kind = OpKind::Chern;
    int index = 0;  // i for chern(i); unused otherwise
};

// Riemann-Roch leading term: constant times the cell plus fresh unknowns on
// all same-grading higher-codim cells.  The constant must exist in the table.
ParametricVector op_value(const CellularModule& mod, const ConstantsTable& table,
                          const std::string& cell_name, const GammaOp& op, ParamGen& gen);

// products of op-values on subvariety cells, powers of codim-1 cells and
// single cell multipliers, of total Chern weight >= m
std::vector<ParametricVector> gamma_generators(const CellularModule& mod,
                                               const ConstantsTable& table, int m,
                                               int degree_cap, ParamGen& gen);

// echelonized Z_(p)-lattice over an ordered cell basis
class ZpLattice {
public:
    ZpLattice(long p, std::vector<std::string> basis) : p_(p), basis_(std::move(basis)) {}

    const std::vector<std::string>& basis() const { return basis_; }
    void add_row(std::map<std::string, Rat> row);
    bool contains(const std::map<std::string, Rat>& row) const;
    bool contains_cell(const std::string& cell) const;
    size_t rank() const { return rows_.size(); }
    const std::vector<std::map<std::string, Rat>>& rows() const { return rows_; }

private:
    long p_;
    std::vector<std::string> basis_;
    std::vector<std::map<std::string, Rat>> rows_;  // echelon by basis order
};

// largest sublattice of fully-known vectors provably inside the span of the
// inputs for every p-integral value of the unknowns: elimination only ever
// divides by known coefficients, with unknown entries erased solely through
// unit pivots
ZpLattice guaranteed_span(const CellularModule& mod, const std::vector<ParametricVector>& vectors);

struct DegreeReport {
    int degree = 0;
    std::vector<std::string> tau_window_cells;
    int free_rank = 0;
    std::vector<std::string> torsion;  // elementary divisors as p-power strings
    std::vector<std::string> generators_used;
    bool coarse = false;  // an unknown entry survived reduction; bound widened
};

std::vector<DegreeReport> graded_report(const CellularModule& mod, const ConstantsTable& table,
                                        int i_max);

// split Pfister quadric module: dim 2^{n+2}-2, cells h^0..h^{2^{n+1}-1} with
// exact products and subvariety classes l_0..l_{2^{n+1}-1}
CellularModule pfister(int n);

// elementary divisor exponents (ascending) of a p-integral matrix over Z_(p)
std::vector<int> smith_valuations(std::vector<std::vector<Rat>> m, long p);

}  // namespace fglab
