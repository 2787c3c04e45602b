#include "fglab/gamma.hpp"

#include <algorithm>

#include "fglab/errors.hpp"

namespace fglab {

namespace {

std::pair<std::string, std::string> sorted_key(const std::string& a, const std::string& b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

int mod_period(int x, int per) {
    if (per <= 0) return 0;
    int r = x % per;
    return r < 0 ? r + per : r;
}

}  // namespace

int CellularModule::dimension() const {
    int d = 0;
    for (const Cell& c : cells) d = std::max(d, c.tau_codim);
    return d;
}

const Cell& CellularModule::cell(const std::string& name) const {
    for (const Cell& c : cells)
        if (c.name == name) return c;
    throw input_error("unknown cell " + name);
}

bool CellularModule::has_cell(const std::string& name) const {
    for (const Cell& c : cells)
        if (c.name == name) return true;
    return false;
}

const Cell& CellularModule::unit_cell() const {
    for (const Cell& c : cells)
        if (c.tau_codim == 0) return c;
    throw input_error("module has no codim-0 unit cell");
}

const ProductRule* CellularModule::rule(const std::string& a, const std::string& b) const {
    auto it = products.find(sorted_key(a, b));
    return it == products.end() ? nullptr : &it->second;
}

void CellularModule::validate() const {
    require_prime(p);
    if (n < 1) throw input_error("module needs n >= 1");
    int units = 0;
    for (const Cell& c : cells) {
        if (c.tau_codim == 0) ++units;
        if (c.tau_codim < 0) throw input_error("negative codimension on cell " + c.name);
        if (period() > 0 && c.grading != mod_period(c.tau_codim, period()))
            throw input_error("cell " + c.name + " grading does not match codim mod p^n-1");
    }
    if (units != 1) throw input_error("module must have exactly one codim-0 cell");
    for (const auto& [key, r] : products) {
        const Cell& a = cell(key.first);
        const Cell& b = cell(key.second);
        if (!r.lead_cell.empty()) {
            const Cell& lead = cell(r.lead_cell);
            if (lead.tau_codim != a.tau_codim + b.tau_codim)
                throw input_error("product lead codim mismatch for " + key.first + "*" + key.second);
            if (period() > 0 &&
                lead.grading != mod_period(a.grading + b.grading, period()))
                throw input_error("product lead grading mismatch for " + key.first + "*" + key.second);
        }
    }
}

Affine& Affine::operator+=(const Affine& o) {
    known += o.known;
    for (const auto& [k, v] : o.unknowns) {
        Rat& slot = unknowns[k];
        slot += v;
        if (slot.is_zero()) unknowns.erase(k);
    }
    return *this;
}

Affine Affine::scaled(const Rat& c) const {
    Affine r;
    if (c.is_zero()) return r;
    r.known = known * c;
    for (const auto& [k, v] : unknowns) r.unknowns[k] = v * c;
    return r;
}

std::string Affine::str() const {
    std::string s = known.str();
    for (const auto& [k, v] : unknowns) s += " + " + v.str() + "*" + k;
    return s;
}

std::string ParamGen::fresh(const std::string& hint) {
    return "u" + std::to_string(counter++) + "_" + hint;
}

bool ParametricVector::is_zero() const {
    for (const auto& [c, a] : entries)
        if (!a.is_zero()) return false;
    return true;
}

int ParametricVector::leading_codim(const CellularModule& mod) const {
    int lead = mod.dimension() + 1;
    for (const auto& [c, a] : entries)
        if (!a.is_zero()) lead = std::min(lead, mod.cell(c).tau_codim);
    return lead;
}

ParametricVector& ParametricVector::add(const ParametricVector& o) {
    for (const auto& [c, a] : o.entries) {
        Affine& slot = entries[c];
        slot += a;
        if (slot.is_zero()) entries.erase(c);
    }
    return *this;
}

ParametricVector ParametricVector::scaled(const Rat& c) const {
    ParametricVector r;
    r.weight = weight;
    r.grading = grading;
    r.label = label;
    if (c.is_zero()) return r;
    for (const auto& [cell, a] : entries) r.entries[cell] = a.scaled(c);
    return r;
}

namespace {

// affine * affine; any cross term of unknowns collapses to a fresh p-integral
// parameter (a superset of the true value set, hence sound for guarantees)
Affine mul_affine(const Affine& x, const Affine& y, ParamGen& gen, const std::string& hint) {
    Affine r;
    r.known = x.known * y.known;
    for (const auto& [k, v] : y.unknowns) {
        Rat c = x.known * v;
        if (!c.is_zero()) r.unknowns[k] += c;
    }
    for (const auto& [k, v] : x.unknowns) {
        Rat c = y.known * v;
        if (!c.is_zero()) r.unknowns[k] += c;
    }
    for (auto it = r.unknowns.begin(); it != r.unknowns.end();) {
        if (it->second.is_zero()) it = r.unknowns.erase(it);
        else ++it;
    }
    if (!x.unknowns.empty() && !y.unknowns.empty()) r.unknowns[gen.fresh(hint)] = Rat(1);
    return r;
}

// cell * cell as a ParametricVector
ParametricVector cell_product(const CellularModule& mod, const std::string& a,
                              const std::string& b, ParamGen& gen) {
    ParametricVector out;
    const Cell& ca = mod.cell(a);
    const Cell& cb = mod.cell(b);
    out.grading = mod_period(ca.grading + cb.grading, mod.period());
    if (ca.tau_codim == 0) {
        out.entries[b].known = Rat(1);
        out.grading = cb.grading;
        return out;
    }
    if (cb.tau_codim == 0) {
        out.entries[a].known = Rat(1);
        out.grading = ca.grading;
        return out;
    }
    int codim = ca.tau_codim + cb.tau_codim;
    if (codim > mod.dimension()) return out;  // vanishes for dimension reasons
    const ProductRule* r = mod.rule(a, b);
    int tail_from = codim + 1;
    if (r) {
        if (!r->lead_cell.empty() && !r->lead_coeff.is_zero())
            out.entries[r->lead_cell].known = r->lead_coeff;
        if (!r->unknown_tail) return out;
    } else {
        tail_from = codim;  // no rule at all: even the leading cell is unknown
    }
    for (const Cell& c : mod.cells) {
        if (c.tau_codim < tail_from || c.grading != out.grading) continue;
        if (r && !r->lead_cell.empty() && c.name == r->lead_cell) continue;
        out.entries[c.name].unknowns[gen.fresh(a + "*" + b)] = Rat(1);
    }
    return out;
}

}  // namespace

ParametricVector module_product(const CellularModule& mod, const ParametricVector& a,
                                const ParametricVector& b, ParamGen& gen) {
    ParametricVector out;
    out.weight = a.weight + b.weight;
    out.grading = mod_period(a.grading + b.grading, mod.period());
    out.label = (a.label == "1" || a.label.empty()) ? b.label
                : (b.label == "1" || b.label.empty()) ? a.label
                                                      : a.label + "*" + b.label;
    for (const auto& [ca, xa] : a.entries) {
        if (xa.is_zero()) continue;
        for (const auto& [cb, xb] : b.entries) {
            if (xb.is_zero()) continue;
            Affine coeff = mul_affine(xa, xb, gen, ca + "*" + cb);
            if (coeff.is_zero()) continue;
            ParametricVector cells = cell_product(mod, ca, cb, gen);
            for (const auto& [cc, xc] : cells.entries) {
                // xc is either the known lead or a single fresh unknown
                Affine term = xc.is_known() ? coeff.scaled(xc.known)
                                            : mul_affine(coeff, xc, gen, cc);
                Affine& slot = out.entries[cc];
                slot += term;
                if (slot.is_zero()) out.entries.erase(cc);
            }
        }
    }
    return out;
}

ParametricVector op_value(const CellularModule& mod, const ConstantsTable& table,
                          const std::string& cell_name, const GammaOp& op, ParamGen& gen) {
    const Cell& c = mod.cell(cell_name);
    if (!c.subvariety)
        throw input_error("op_value needs a subvariety class, got " + cell_name);
    const int per = mod.period();
    if (c.tau_codim == 0) {
        // positive-weight operations kill constants
        ParametricVector zero;
        zero.grading = c.grading;
        zero.weight = op.kind == OpKind::Chern ? op.index : 2 * (per + 1) - 1;
        zero.label = "0";
        return zero;
    }
    const int pn = per + 1;
    ParametricVector out;
    out.grading = c.grading;
    Rat b;
    switch (op.kind) {
        case OpKind::Chern: {
            if (per > 0 && mod_period(c.tau_codim - op.index, per) != 0) {
                // off the grading class: zero value
                out.weight = op.index;
                out.label = "c" + std::to_string(op.index) + "(" + cell_name + ")";
                return out;
            }
            b = table.chern(op.index, c.tau_codim);
            out.weight = op.index;
            out.label = "c" + std::to_string(op.index) + "(" + cell_name + ")";
            break;
        }
        case OpKind::Chi:
        case OpKind::PsiP: {
            if (per > 0 && mod_period(c.tau_codim - 1, per) != 0)
                throw input_error("chi constants live on grading-1 cells");
            int j = (c.tau_codim - 1) / std::max(1, per);
            const auto& tab = (op.kind == OpKind::Chi) ? table.h : table.f;
            auto it = tab.find(j);
            if (it == tab.end())
                throw input_error("constant unavailable for chi at codim " +
                                  std::to_string(c.tau_codim));
            b = it->second;
            out.weight = 2 * pn - 1;
            out.label = (op.kind == OpKind::Chi ? "chi(" : "psi_p(") + cell_name + ")";
            break;
        }
    }
    if (!b.is_zero()) out.entries[cell_name].known = b;
    for (const Cell& t : mod.cells) {
        if (t.tau_codim <= c.tau_codim || t.grading != c.grading) continue;
        out.entries[t.name].unknowns[gen.fresh(out.label)] = Rat(1);
    }
    return out;
}

std::vector<ParametricVector> gamma_generators(const CellularModule& mod,
                                               const ConstantsTable& table, int m,
                                               int degree_cap, ParamGen& gen) {
    if (m < 0) throw input_error("gamma_generators needs m >= 0");
    const int per = mod.period();
    if (m == 0) {
        std::vector<ParametricVector> everything;
        for (const Cell& c : mod.cells) {
            ParametricVector v;
            v.entries[c.name].known = Rat(1);
            v.weight = 0;
            v.grading = c.grading;
            v.label = c.name;
            everything.push_back(v);
        }
        return everything;
    }
    std::vector<ParametricVector> ops;
    for (const Cell& c : mod.cells) {
        if (!c.subvariety || c.tau_codim == 0) continue;
        for (int i = 1; i <= table.max_index; ++i) {
            if (per > 0 && mod_period(c.tau_codim - i, per) != 0) continue;
            if (!table.has_chern(i, c.tau_codim)) continue;
            ops.push_back(op_value(mod, table, c.name, {OpKind::Chern, i}, gen));
        }
        if (per == 0 || mod_period(c.tau_codim - 1, per) == 0) {
            int j = (c.tau_codim - 1) / std::max(1, per);
            if (table.h.count(j)) ops.push_back(op_value(mod, table, c.name, {OpKind::Chi, 0}, gen));
            if (table.f.count(j)) ops.push_back(op_value(mod, table, c.name, {OpKind::PsiP, 0}, gen));
        }
    }
    // codim-1 cells whose powers scale the weight (gamma^1 elements)
    std::vector<std::string> ample;
    for (const Cell& c : mod.cells)
        if (c.tau_codim == 1) ample.push_back(c.name);
    std::vector<ParametricVector> out;
    auto consider = [&](ParametricVector v) {
        if (v.weight < m || v.is_zero()) return;
        if (v.leading_codim(mod) > degree_cap) return;
        out.push_back(std::move(v));
    };
    // op parts: none, single, pairwise
    std::vector<ParametricVector> op_parts;
    {
        ParametricVector unit;
        unit.entries[mod.unit_cell().name].known = Rat(1);
        unit.weight = 0;
        unit.grading = 0;
        unit.label = "1";
        op_parts.push_back(unit);
    }
    for (const auto& o : ops) op_parts.push_back(o);
    for (size_t i = 0; i < ops.size(); ++i)
        for (size_t j = i; j < ops.size(); ++j)
            op_parts.push_back(module_product(mod, ops[i], ops[j], gen));
    const int dim = mod.dimension();
    for (const auto& base : op_parts) {
        // cell multiplier: none or a single positive-codim cell (a gamma^1 element)
        std::vector<std::pair<ParametricVector, int>> with_cell;
        {
            ParametricVector none = base;
            with_cell.push_back({none, 0});
        }
        for (const Cell& c : mod.cells) {
            if (c.tau_codim == 0) continue;
            ParametricVector cv;
            cv.entries[c.name].known = Rat(1);
            cv.weight = 1;
            cv.grading = c.grading;
            cv.label = c.name;
            with_cell.push_back({module_product(mod, base, cv, gen), 0});
        }
        for (auto& [v0, unused] : with_cell) {
            // powers of an ample cell on top
            consider(v0);
            for (const std::string& x : ample) {
                ParametricVector xv;
                xv.entries[x].known = Rat(1);
                xv.weight = 1;
                xv.grading = mod.cell(x).grading;
                xv.label = x;
                ParametricVector acc = v0;
                for (int k = 1; k <= degree_cap; ++k) {
                    acc = module_product(mod, acc, xv, gen);
                    if (acc.is_zero()) break;
                    consider(acc);
                    if (acc.leading_codim(mod) > std::min(degree_cap, dim)) break;
                }
            }
        }
    }
    return out;
}

void ZpLattice::add_row(std::map<std::string, Rat> row) {
    for (auto it = row.begin(); it != row.end();) {
        if (it->second.is_zero()) it = row.erase(it);
        else ++it;
    }
    // reduce against existing echelon rows, basis order
    bool clean_before = true;  // no surviving entries at columns already passed
    for (const std::string& col : basis_) {
        auto rit = row.find(col);
        if (rit == row.end() || rit->second.is_zero()) continue;
        // find pivot row at this column
        std::map<std::string, Rat>* pivot = nullptr;
        for (auto& r : rows_) {
            // leading column of r
            for (const std::string& c2 : basis_) {
                auto f = r.find(c2);
                if (f != r.end() && !f->second.is_zero()) {
                    if (c2 == col) pivot = &r;
                    break;
                }
            }
            if (pivot) break;
        }
        if (!pivot) {
            clean_before = false;  // this entry will lead (or trail) the appended row
            continue;
        }
        Rat pv = (*pivot)[col];
        if (vp(rit->second, p_) >= vp(pv, p_)) {
            Rat mult = rit->second / pv;
            for (const auto& [c2, v2] : *pivot) {
                Rat& slot = row[c2];
                slot -= mult * v2;
                if (slot.is_zero()) row.erase(c2);
            }
        } else if (clean_before) {
            // the incoming row genuinely leads at this column with smaller
            // valuation: swap it in and keep reducing the displaced pivot
            std::map<std::string, Rat> old = *pivot;
            *pivot = row;
            row = old;
            Rat mult = row[col] / (*pivot)[col];
            for (const auto& [c2, v2] : *pivot) {
                Rat& slot = row[c2];
                slot -= mult * v2;
                if (slot.is_zero()) row.erase(c2);
            }
        }
        // else: the entry is a tail of a row leading at an earlier column;
        // leave it in place
    }
    bool nz = false;
    for (const auto& [c, v] : row)
        if (!v.is_zero()) { nz = true; break; }
    if (nz) rows_.push_back(std::move(row));
}

bool ZpLattice::contains(const std::map<std::string, Rat>& row_in) const {
    std::map<std::string, Rat> row = row_in;
    for (const std::string& col : basis_) {
        auto rit = row.find(col);
        if (rit == row.end() || rit->second.is_zero()) continue;
        const std::map<std::string, Rat>* pivot = nullptr;
        for (const auto& r : rows_) {
            for (const std::string& c2 : basis_) {
                auto f = r.find(c2);
                if (f != r.end() && !f->second.is_zero()) {
                    if (c2 == col) pivot = &r;
                    break;
                }
            }
            if (pivot) break;
        }
        if (!pivot) return false;
        Rat pv = pivot->at(col);
        if (vp(rit->second, p_) < vp(pv, p_)) return false;
        Rat mult = rit->second / pv;
        for (const auto& [c2, v2] : *pivot) {
            Rat& slot = row[c2];
            slot -= mult * v2;
            if (slot.is_zero()) row.erase(c2);
        }
    }
    for (const auto& [c, v] : row)
        if (!v.is_zero()) return false;
    return true;
}

bool ZpLattice::contains_cell(const std::string& cell) const {
    std::map<std::string, Rat> e;
    e[cell] = Rat(1);
    return contains(e);
}

ZpLattice guaranteed_span(const CellularModule& mod,
                          const std::vector<ParametricVector>& vectors) {
    // cell order: by codim then name
    std::vector<std::string> order;
    {
        std::vector<const Cell*> cs;
        for (const Cell& c : mod.cells) cs.push_back(&c);
        std::sort(cs.begin(), cs.end(), [](const Cell* a, const Cell* b) {
            return a->tau_codim != b->tau_codim ? a->tau_codim < b->tau_codim
                                                : a->name < b->name;
        });
        for (const Cell* c : cs) order.push_back(c->name);
    }
    std::vector<std::map<std::string, Affine>> work;
    for (const auto& v : vectors) {
        std::map<std::string, Affine> row;
        for (const auto& [c, a] : v.entries)
            if (!a.is_zero()) row[c] = a;
        if (!row.empty()) work.push_back(std::move(row));
    }
    auto leading = [&](const std::map<std::string, Affine>& row) -> int {
        for (size_t i = 0; i < order.size(); ++i) {
            auto it = row.find(order[i]);
            if (it != row.end() && !it->second.is_zero()) return static_cast<int>(i);
        }
        return -1;
    };
    // fresh parameters for elimination products, disjoint from generator names
    ParamGen degrade;
    degrade.counter = 1000000;
    // triangular elimination: pivots must be known and lead their row
    for (size_t ci = 0; ci < order.size(); ++ci) {
        const std::string& col = order[ci];
        // best known pivot leading at col (minimal valuation)
        int pivot_idx = -1;
        long pivot_vp = 0;
        for (size_t r = 0; r < work.size(); ++r) {
            if (leading(work[r]) != static_cast<int>(ci)) continue;
            const Affine& a = work[r].at(col);
            if (!a.is_known()) continue;
            long v = vp(a.known, mod.p);
            if (pivot_idx < 0 || v < pivot_vp) {
                pivot_idx = static_cast<int>(r);
                pivot_vp = v;
            }
        }
        if (pivot_idx < 0) continue;
        const bool unit_pivot = (pivot_vp == 0);
        for (size_t r = 0; r < work.size(); ++r) {
            if (static_cast<int>(r) == pivot_idx) continue;
            auto it = work[r].find(col);
            if (it == work[r].end() || it->second.is_zero()) continue;
            const Affine& entry = it->second;
            bool can_eliminate = false;
            if (unit_pivot) {
                can_eliminate = true;  // entry/pivot is p-integral for every parameter value
            } else if (entry.is_known() && vp(entry.known, mod.p) >= pivot_vp) {
                can_eliminate = true;
            }
            if (!can_eliminate) continue;
            // row <- row - (entry/pivot) * pivot_row
            Rat pk = work[static_cast<size_t>(pivot_idx)].at(col).known;
            Affine mult;  // entry / pivot
            mult.known = entry.known / pk;
            for (const auto& [u, ccoef] : entry.unknowns) mult.unknowns[u] = ccoef / pk;
            std::map<std::string, Affine> updated = work[r];
            for (const auto& [c2, a2] : work[static_cast<size_t>(pivot_idx)]) {
                Affine term = mul_affine(mult, a2, degrade, "elim_" + c2);
                Affine& slot = updated[c2];
                slot.known -= term.known;
                for (const auto& [u, cc] : term.unknowns) {
                    Rat& s = slot.unknowns[u];
                    s -= cc;
                    if (s.is_zero()) slot.unknowns.erase(u);
                }
                if (slot.is_zero()) updated.erase(c2);
            }
            work[r] = std::move(updated);
        }
    }
    ZpLattice lat(mod.p, order);
    for (const auto& row : work) {
        bool all_known = true;
        for (const auto& [c, a] : row)
            if (!a.is_known()) { all_known = false; break; }
        if (!all_known) continue;
        std::map<std::string, Rat> known_row;
        for (const auto& [c, a] : row)
            if (!a.known.is_zero()) known_row[c] = a.known;
        if (!known_row.empty()) lat.add_row(std::move(known_row));
    }
    return lat;
}

std::vector<int> smith_valuations(std::vector<std::vector<Rat>> m, long p) {
    std::vector<int> out;
    size_t rows = m.size();
    if (rows == 0) return out;
    size_t cols = m[0].size();
    size_t r0 = 0, c0 = 0;
    while (r0 < rows && c0 < cols) {
        // minimal valuation pivot in the remaining block
        long best = kValInfinity;
        size_t br = r0, bc = c0;
        for (size_t r = r0; r < rows; ++r)
            for (size_t c = c0; c < cols; ++c) {
                if (m[r][c].is_zero()) continue;
                long v = vp(m[r][c], p);
                if (v < best) { best = v; br = r; bc = c; }
            }
        if (best == kValInfinity) break;
        std::swap(m[r0], m[br]);
        for (size_t r = 0; r < rows; ++r) std::swap(m[r][c0], m[r][bc]);
        for (size_t r = r0 + 1; r < rows; ++r) {
            if (m[r][c0].is_zero()) continue;
            Rat mult = m[r][c0] / m[r0][c0];
            for (size_t c = c0; c < cols; ++c) m[r][c] -= mult * m[r0][c];
        }
        for (size_t c = c0 + 1; c < cols; ++c) {
            if (m[r0][c].is_zero()) continue;
            Rat mult = m[r0][c] / m[r0][c0];
            for (size_t r = r0; r < rows; ++r) m[r][c] -= mult * m[r][c0];
        }
        out.push_back(static_cast<int>(best));
        ++r0;
        ++c0;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<DegreeReport> graded_report(const CellularModule& mod, const ConstantsTable& table,
                                        int i_max) {
    mod.validate();
    if (table.p != mod.p || table.n != mod.n)
        throw input_error("constants table does not match the module's (p, n)");
    const int per = mod.period();
    const int degree_cap = mod.dimension();
    std::vector<DegreeReport> reports;
    ParamGen gen;
    for (int i = 0; i <= i_max; ++i) {
        DegreeReport rep;
        rep.degree = i;
        // generators of gamma^i and gamma^{i+1}
        std::vector<ParametricVector> gi = gamma_generators(mod, table, i, degree_cap, gen);
        std::vector<ParametricVector> gnext = gamma_generators(mod, table, i + 1, degree_cap, gen);
        ZpLattice G = guaranteed_span(mod, gnext);
        std::set<std::string> killed;
        for (const Cell& c : mod.cells)
            if (c.tau_codim > 0 && G.contains_cell(c.name)) killed.insert(c.name);
        // surviving grading-i cells
        std::vector<std::string> survivors;
        for (const Cell& c : mod.cells) {
            if (killed.count(c.name)) continue;
            if (per > 0 && c.grading != mod_period(i, per)) continue;
            survivors.push_back(c.name);
        }
        std::sort(survivors.begin(), survivors.end(), [&](const std::string& a, const std::string& b) {
            int ca = mod.cell(a).tau_codim, cb = mod.cell(b).tau_codim;
            return ca != cb ? ca < cb : a < b;
        });
        // tau window: grading-compatible cells with codim in [i, i + per - 1]
        for (const Cell& c : mod.cells)
            if (c.tau_codim >= i && c.tau_codim <= i + std::max(0, per - 1) &&
                (per == 0 || c.grading == mod_period(i, per)))
                rep.tau_window_cells.push_back(c.name);
        // generator rows mod the killed cells
        auto reduce = [&](const ParametricVector& v, bool& clean) {
            std::map<std::string, Rat> row;
            clean = true;
            for (const auto& [c, a] : v.entries) {
                if (killed.count(c)) continue;
                if (per > 0 && mod.cell(c).grading != mod_period(i, per)) {
                    // off-grading entries cannot appear in a single-grading vector
                    continue;
                }
                if (!a.is_known()) {
                    clean = false;
                    continue;
                }
                if (!a.known.is_zero()) row[c] = a.known;
            }
            return row;
        };
        std::vector<std::map<std::string, Rat>> arows, rrows;
        for (const auto& v : gi) {
            if (per > 0 && v.grading != mod_period(i, per)) continue;
            bool clean = true;
            auto row = reduce(v, clean);
            if (!clean) {
                // widen: every touched surviving cell may independently appear
                rep.coarse = true;
                for (const auto& [c, a] : v.entries)
                    if (!killed.count(c) && !a.is_zero() &&
                        (per == 0 || mod.cell(c).grading == mod_period(i, per)))
                        arows.push_back({{c, Rat(1)}});
                continue;
            }
            if (!row.empty()) {
                if (std::find(arows.begin(), arows.end(), row) == arows.end()) {
                    arows.push_back(row);
                    if (std::find(rep.generators_used.begin(), rep.generators_used.end(),
                                  v.label) == rep.generators_used.end())
                        rep.generators_used.push_back(v.label);
                }
            }
        }
        for (const auto& r : G.rows()) {
            std::map<std::string, Rat> row;
            for (const auto& [c, val] : r) {
                if (killed.count(c)) continue;
                if (per > 0 && mod.cell(c).grading != mod_period(i, per)) continue;
                if (!val.is_zero()) row[c] = val;
            }
            if (!row.empty()) rrows.push_back(row);
        }
        for (const auto& v : gnext) {
            if (per > 0 && v.grading != mod_period(i, per)) continue;
            bool clean = true;
            auto row = reduce(v, clean);
            if (clean && !row.empty()) rrows.push_back(row);
        }
        // quotient (A + R)/R over the surviving cells
        std::map<std::string, size_t> colof;
        for (size_t c = 0; c < survivors.size(); ++c) colof[survivors[c]] = c;
        auto to_dense = [&](const std::map<std::string, Rat>& row) {
            std::vector<Rat> d(survivors.size(), Rat(0));
            for (const auto& [c, v] : row) {
                auto it = colof.find(c);
                if (it != colof.end()) d[it->second] = v;
            }
            return d;
        };
        // echelon basis of A + R
        ZpLattice full(mod.p, survivors);
        for (const auto& r : arows) full.add_row(r);
        for (const auto& r : rrows) full.add_row(r);
        // coordinates of R in the basis of full
        std::vector<std::map<std::string, Rat>> basis = full.rows();
        // order basis rows by leading column
        std::sort(basis.begin(), basis.end(),
                  [&](const std::map<std::string, Rat>& x, const std::map<std::string, Rat>& y) {
                      auto leadcol = [&](const std::map<std::string, Rat>& row) {
                          for (size_t c = 0; c < survivors.size(); ++c) {
                              auto it = row.find(survivors[c]);
                              if (it != row.end() && !it->second.is_zero()) return c;
                          }
                          return survivors.size();
                      };
                      return leadcol(x) < leadcol(y);
                  });
        std::vector<std::vector<Rat>> rel;
        for (const auto& r : rrows) {
            std::vector<Rat> dense = to_dense(r);
            std::vector<Rat> coord(basis.size(), Rat(0));
            for (size_t b = 0; b < basis.size(); ++b) {
                // leading column of basis row b
                size_t lc = survivors.size();
                for (size_t c = 0; c < survivors.size(); ++c) {
                    auto it = basis[b].find(survivors[c]);
                    if (it != basis[b].end() && !it->second.is_zero()) { lc = c; break; }
                }
                if (lc == survivors.size()) continue;
                if (dense[lc].is_zero()) continue;
                Rat mult = dense[lc] / basis[b].at(survivors[lc]);
                coord[b] = mult;
                for (size_t c = 0; c < survivors.size(); ++c) {
                    auto it = basis[b].find(survivors[c]);
                    if (it != basis[b].end()) dense[c] -= mult * it->second;
                }
            }
            bool zero = true;
            for (const Rat& v : dense)
                if (!v.is_zero()) { zero = false; break; }
            if (!zero) throw claim_error("relation row escaped the combined lattice");
            rel.push_back(coord);
        }
        std::vector<int> divisors = smith_valuations(rel, mod.p);
        int tors = 0;
        for (int dv : divisors)
            if (dv > 0) ++tors;
        rep.free_rank = static_cast<int>(basis.size()) - static_cast<int>(divisors.size());
        for (int dv : divisors)
            if (dv > 0) rep.torsion.push_back(p_power(mod.p, dv).str());
        (void)tors;
        reports.push_back(std::move(rep));
    }
    return reports;
}

CellularModule pfister(int n) {
    if (n < 1) throw input_error("pfister needs n >= 1");
    CellularModule mod;
    mod.p = 2;
    mod.n = n;
    mod.iso_flag = true;
    const int half = static_cast<int>(int_pow(2, n + 1));  // number of h-cells
    const int dim = 2 * half - 2;
    const int per = static_cast<int>(int_pow(2, n)) - 1;
    auto grading_of = [&](int codim) { return per > 0 ? mod_period(codim, per) : 0; };
    for (int i = 0; i < half; ++i)
        mod.cells.push_back({"h" + std::to_string(i), i, grading_of(i), false});
    for (int i = 0; i < half; ++i)
        mod.cells.push_back({"l" + std::to_string(i), dim - i, grading_of(dim - i), true});
    // exact powers of the hyperplane class
    for (int a = 1; a < half; ++a)
        for (int b = a; b < half; ++b) {
            if (a + b < half) {
                mod.products[sorted_key("h" + std::to_string(a), "h" + std::to_string(b))] =
                    {Rat(1), "h" + std::to_string(a + b), false};
            } else if (a + b <= dim) {
                // past the middle the split quadric doubles onto l-cells
                mod.products[sorted_key("h" + std::to_string(a), "h" + std::to_string(b))] =
                    {Rat(2), "l" + std::to_string(dim - a - b), true};
            }
        }
    // h shifts l-cells down with unknown lower tails
    for (int a = 1; a < half; ++a)
        for (int i = 0; i < half; ++i) {
            int target = i - a;
            if (dim - i + a > dim) continue;  // codim overflow: zero, no rule needed
            if (target >= 0) {
                mod.products[sorted_key("h" + std::to_string(a), "l" + std::to_string(i))] =
                    {Rat(1), "l" + std::to_string(target), true};
            }
        }
    mod.validate();
    return mod;
}

}  // namespace fglab
