#include "fglab/addops.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "fglab/errors.hpp"

namespace fglab {

namespace {

int period_of(long p, int n) {
    mpz_class pn;
    mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
    mpz_class per = pn - 1;
    if (!per.fits_slong_p()) throw cap_error("p^n - 1 does not fit a machine word");
    return static_cast<int>(per.get_si());
}

bool same_class(int a, int b, int per) {
    return (a - b) % per == 0;
}

std::string monomial_str(int arity, const ExpVec& m) {
    std::ostringstream os;
    os << "arity " << arity << " monomial [";
    for (size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
    os << "]";
    return os.str();
}

}  // namespace

int DiagonalOperation::period() const { return period_of(p(), n_source); }

Rat DiagonalOperation::lambda_at_codim(int d) const {
    int per = period();
    if (d < lead || (d - lead) % per != 0) return Rat(0);
    return lambda_stage((d - lead) / per);
}

DiagonalOperation DiagonalOperation::identity(const FormalGroupLaw& F, int n, int lead,
                                              int cap_arity, int cap_degree) {
    DiagonalOperation op{F, F, n, lead, {}, cap_arity, cap_degree};
    for (int s = 0; s < op.stages(); ++s) op.lambda[s] = Rat(1);
    return op;
}

SymbolKernel::SymbolKernel(const FormalGroupLaw& source, const FormalGroupLaw& target,
                           int cap_degree)
    : cap_(cap_degree) {
    if (source.p() != target.p()) throw input_error("source/target prime mismatch");
    if (source.cap() < cap_degree || target.cap() < cap_degree)
        throw cap_error("FGL caps below requested kernel degree cap");
    const Series f = source.exp().truncated(cap_);
    const Series g = target.log().truncated(cap_);
    a_.assign(static_cast<size_t>(cap_) + 1, {});
    std::vector<Series> gp;
    gp.push_back(Series::variable(g.vars(), cap_, 0).pow(0));
    gp.push_back(g);
    auto gpow = [&](unsigned k) -> const Series& {
        while (gp.size() <= k) gp.push_back(gp.back() * gp[1]);
        return gp[k];
    };
    for (const auto& [fe, fc] : f.terms()) {
        unsigned E = fe[0];
        if (E == 0 || E > static_cast<unsigned>(cap_)) continue;
        const Series& gE = gpow(E);
        for (const auto& [ge, gc] : gE.terms()) {
            unsigned d = ge[0];
            if (d > static_cast<unsigned>(cap_)) continue;
            auto& poly = a_[d];
            if (poly.empty()) poly.assign(static_cast<size_t>(cap_) + 1, Rat(0));
            poly[E] += fc * gc;
        }
    }
    for (unsigned d = 1; d <= static_cast<unsigned>(cap_); ++d) {
        if (a_[d].empty()) continue;
        bool nz = false;
        for (const Rat& c : a_[d])
            if (!c.is_zero()) { nz = true; break; }
        if (nz) support_.push_back(d);
        else a_[d].clear();
    }
}

const std::vector<Rat>& SymbolKernel::a_poly(unsigned d) const {
    static const std::vector<Rat> kEmpty;
    if (d >= a_.size() || a_[d].empty()) return kEmpty;
    return a_[d];
}

std::vector<Rat> SymbolKernel::tuple_poly(const ExpVec& m) const {
    std::vector<Rat> acc(static_cast<size_t>(cap_) + 1, Rat(0));
    acc[0] = Rat(1);
    for (unsigned d : m) {
        const std::vector<Rat>& ad = a_poly(d);
        if (ad.empty()) return std::vector<Rat>(static_cast<size_t>(cap_) + 1, Rat(0));
        std::vector<Rat> next(static_cast<size_t>(cap_) + 1, Rat(0));
        for (size_t i = 0; i <= static_cast<size_t>(cap_); ++i) {
            if (acc[i].is_zero()) continue;
            for (size_t j = 0; i + j <= static_cast<size_t>(cap_) && j < ad.size(); ++j) {
                if (ad[j].is_zero()) continue;
                next[i + j] += acc[i] * ad[j];
            }
        }
        acc = std::move(next);
    }
    return acc;
}

SymSeries evaluate_G(const DiagonalOperation& op, int l) {
    if (l < 1 || l > op.cap_arity) throw cap_error("arity outside operation cap");
    SymSeries out(l, op.cap_degree);
    const int per = op.period();
    if (!same_class(l, op.lead, per)) return out;  // grading support
    SymbolKernel kernel(op.source, op.target, op.cap_degree);
    for (unsigned D = static_cast<unsigned>(l); D <= static_cast<unsigned>(op.cap_degree); ++D) {
        for_each_sorted_tuple(kernel.support(), l, D, [&](const ExpVec& m) {
            std::vector<Rat> tp = kernel.tuple_poly(m);
            Rat coeff(0);
            for (int s = 0; s < op.stages(); ++s) {
                int codim = op.codim_of_stage(s);
                if (codim > static_cast<int>(D)) break;
                Rat ls = op.lambda_stage(s);
                if (!ls.is_zero() && !tp[static_cast<size_t>(codim)].is_zero())
                    coeff += ls * tp[static_cast<size_t>(codim)];
            }
            if (!coeff.is_zero()) out.add_term(m, coeff);
        });
    }
    return out;
}

IntegralWitness is_integral(const DiagonalOperation& op) {
    IntegralWitness w;
    const long p = op.p();
    for (int l = 1; l <= op.cap_arity; ++l) {
        if (!same_class(l, op.lead, op.period())) continue;
        SymSeries G = evaluate_G(op, l);
        for (const auto& [m, c] : G.terms()) {
            if (!is_p_integral(c, p)) {
                w.integral = false;
                w.arity = l;
                w.monomial = m;
                w.coefficient = c;
                return w;
            }
        }
    }
    return w;
}

Rat d_constant(long p, int n, int i, int cap_arity, int cap_degree) {
    require_prime(p);
    if (cap_arity < i) throw cap_error("d_constant needs arity cap >= i");
    if (cap_degree < i) throw cap_error("d_constant needs degree cap >= i");
    FormalGroupLaw src = morava({p, n, {Rat(1)}}, cap_degree);
    FormalGroupLaw tgt = additive_fgl(p, cap_degree);
    DiagonalOperation chi{src, tgt, n, i, {{0, Rat(1)}}, cap_arity, cap_degree};
    for (int k = 0; k <= 64; ++k) {
        DiagonalOperation scaled = chi;
        scaled.lambda[0] = p_power(p, k);
        if (is_integral(scaled).integral) return p_power(p, k);
    }
    throw cap_error("d_constant search exhausted");
}

std::vector<Rat> d_recursion(long p, int n, int i_max) {
    require_prime(p);
    if (i_max < 1) throw input_error("i_max must be >= 1");
    auto is_psn = [&](int i) {
        mpz_class q(1), pn;
        mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
        while (q < i) q *= pn;
        return q == i;
    };
    std::vector<Rat> d(static_cast<size_t>(i_max) + 1, Rat(1));
    for (int i = 2; i <= i_max; ++i) {
        Rat best(0);
        for (int j = 1; j < i; ++j) {
            Rat cand = d[static_cast<size_t>(j)] * d[static_cast<size_t>(i - j)];
            if (best < cand) best = cand;
        }
        d[static_cast<size_t>(i)] = is_psn(i) ? best * Rat(p) : best;
    }
    return std::vector<Rat>(d.begin() + 1, d.end());
}

// --- solver ---------------------------------------------------------------------

namespace {

struct Constraint {
    int stage = 0;
    std::vector<std::pair<int, Rat>> coeffs;  // (s, c_s) with c_s != 0
    Rat resid;
    int arity = 0;
    ExpVec monomial;
};

struct ConstraintSystem {
    std::vector<std::vector<Constraint>> by_stage;
    std::vector<Constraint> prechecks;
    int num_stages = 0;
};

ConstraintSystem build_constraints(const FormalGroupLaw& source, const FormalGroupLaw& target,
                                   int n_source, int lead, int cap_arity, int cap_degree,
                                   const std::map<int, SymSeries>& residues) {
    const int per = period_of(source.p(), n_source);
    const int num_stages = (cap_degree - lead) / per + 1;
    SymbolKernel kernel(source, target, cap_degree);
    ConstraintSystem sys;
    sys.num_stages = num_stages;
    sys.by_stage.resize(static_cast<size_t>(num_stages));
    for (int l = 1; l <= cap_arity; ++l) {
        std::map<ExpVec, Constraint> merged;
        if (same_class(l, lead, per)) {
            for (unsigned D = static_cast<unsigned>(std::max(l, lead));
                 D <= static_cast<unsigned>(cap_degree); ++D) {
                for_each_sorted_tuple(kernel.support(), l, D, [&](const ExpVec& m) {
                    std::vector<Rat> tp = kernel.tuple_poly(m);
                    Constraint c;
                    c.arity = l;
                    c.monomial = m;
                    c.stage = (static_cast<int>(D) - lead) / per;
                    for (int s = 0; s < num_stages && s <= c.stage; ++s) {
                        const Rat& cs = tp[static_cast<size_t>(lead + s * per)];
                        if (!cs.is_zero()) c.coeffs.push_back({s, cs});
                    }
                    if (!c.coeffs.empty()) merged.emplace(m, std::move(c));
                });
            }
        }
        auto rit = residues.find(l);
        if (rit != residues.end()) {
            for (const auto& [m, rc] : rit->second.terms()) {
                unsigned D = total_degree(m);
                if (D > static_cast<unsigned>(cap_degree)) continue;
                auto it = merged.find(m);
                if (it != merged.end()) {
                    it->second.resid = rc;
                } else {
                    Constraint c;
                    c.arity = l;
                    c.monomial = m;
                    c.resid = rc;
                    c.stage =
                        (static_cast<int>(D) >= lead) ? (static_cast<int>(D) - lead) / per : -1;
                    merged.emplace(m, std::move(c));
                }
            }
        }
        for (auto& [m, c] : merged) {
            if (c.coeffs.empty()) {
                sys.prechecks.push_back(std::move(c));
            } else {
                sys.by_stage[static_cast<size_t>(c.stage)].push_back(std::move(c));
            }
        }
    }
    return sys;
}

}  // namespace

SolveResult solve_generator(const FormalGroupLaw& source, const FormalGroupLaw& target,
                            int n_source, int lead, int cap_arity, int cap_degree,
                            const std::map<int, SymSeries>& residues, const SolveOptions& opts) {
    if (lead < 1) throw input_error("lead codimension must be >= 1");
    if (cap_arity < lead)
        throw cap_error("solver needs arity cap >= lead to pin the leading coefficient");
    if (cap_degree < lead) throw cap_error("solver needs degree cap >= lead");
    const long p = source.p();
    SolveResult result;

    ConstraintSystem sys =
        build_constraints(source, target, n_source, lead, cap_arity, cap_degree, residues);

    for (const Constraint& c : sys.prechecks) {
        if (!is_p_integral(c.resid, p)) {
            result.failure = "residue not integral at " + monomial_str(c.arity, c.monomial) +
                             ", coefficient " + c.resid.str();
            return result;
        }
    }

    std::vector<Rat> lambdas(static_cast<size_t>(sys.num_stages), Rat(0));
    std::string last_failure;

    auto stage_ball = [&](int s, bool& infeasible) -> std::optional<PadicBall> {
        infeasible = false;
        std::optional<PadicBall> ball;
        bool have = false;
        for (const Constraint& c : sys.by_stage[static_cast<size_t>(s)]) {
            Rat r = c.resid;
            Rat top(0);
            for (const auto& [si, cs] : c.coeffs) {
                if (si == s) top = cs;
                else r += lambdas[static_cast<size_t>(si)] * cs;
            }
            if (top.is_zero()) {
                if (!is_p_integral(r, p)) {
                    infeasible = true;
                    last_failure = "consistency failed at " + monomial_str(c.arity, c.monomial) +
                                   ", value " + r.str();
                    return std::nullopt;
                }
                continue;
            }
            PadicBall b{-(r / top), -vp(top, p)};
            if (!have) {
                ball = b;
                have = true;
            } else {
                ball = ball_intersect(ball, b, p);
                if (!ball) {
                    infeasible = true;
                    last_failure = "empty ball intersection at stage " + std::to_string(s) + " (" +
                                   monomial_str(c.arity, c.monomial) + ")";
                    return std::nullopt;
                }
            }
        }
        if (!have) return std::nullopt;  // unconstrained
        return ball;
    };

    std::function<bool(int)> descend = [&](int s) -> bool {
        if (s >= sys.num_stages) return true;
        bool infeasible = false;
        std::optional<PadicBall> ball = stage_ball(s, infeasible);
        if (infeasible) return false;
        std::vector<Rat> choices;
        if (s == 0) {
            if (!ball) {
                choices.push_back(Rat(1));
            } else if (vp(ball->center, p) >= ball->radius_exponent) {
                long e0 = std::max<long>(0, ball->radius_exponent);
                for (long e = e0; e <= opts.e_max; ++e) choices.push_back(p_power(p, e));
            } else {
                Rat pick = canonical_pick(*ball, p);
                for (int j = 0; j <= opts.stage_retries; ++j)
                    choices.push_back(pick + Rat(j) * p_power(p, ball->radius_exponent));
            }
        } else {
            if (!ball) {
                choices.push_back(Rat(0));
            } else {
                Rat pick = canonical_pick(*ball, p);
                for (int j = 0; j <= opts.stage_retries; ++j)
                    choices.push_back(pick + Rat(j) * p_power(p, ball->radius_exponent));
            }
        }
        for (const Rat& choice : choices) {
            lambdas[static_cast<size_t>(s)] = choice;
            if (descend(s + 1)) return true;
        }
        lambdas[static_cast<size_t>(s)] = Rat(0);
        return false;
    };

    if (!descend(0)) {
        result.failure = last_failure.empty() ? "search exhausted (e_max reached)" : last_failure;
        return result;
    }

    DiagonalOperation op{source, target, n_source, lead, {}, cap_arity, cap_degree};
    for (int s = 0; s < sys.num_stages; ++s)
        if (!lambdas[static_cast<size_t>(s)].is_zero())
            op.lambda[s] = lambdas[static_cast<size_t>(s)];

    // mandatory post-verification over the full constraint set
    for (const auto& stage_list : sys.by_stage) {
        for (const Constraint& c : stage_list) {
            Rat v = c.resid;
            for (const auto& [si, cs] : c.coeffs) v += lambdas[static_cast<size_t>(si)] * cs;
            if (!is_p_integral(v, p))
                throw claim_error("solver post-verification failed at " +
                                  monomial_str(c.arity, c.monomial));
        }
    }
    if (residues.empty() && !is_integral(op).integral)
        throw claim_error("solver output failed is_integral post-verification");

    result.ok = true;
    result.op = std::move(op);
    result.e = result.op.leading_valuation();
    return result;
}

std::vector<long> required_leading_valuation(const FormalGroupLaw& source,
                                             const FormalGroupLaw& target, int n_source,
                                             int lead, const std::vector<int>& cap_schedule) {
    std::vector<long> out;
    for (int cap : cap_schedule) {
        SolveResult r = solve_generator(source, target, n_source, lead, cap, cap);
        if (!r.ok)
            throw cap_error("generator solve failed at cap " + std::to_string(cap) + ": " +
                            r.failure);
        out.push_back(r.e);
    }
    return out;
}

DiagonalOperation compose(const DiagonalOperation& op2, const DiagonalOperation& op1) {
    if (!op1.target.same_law(op2.source))
        throw input_error("compose: target of first operation differs from source of second");
    if (op1.p() != op2.p() || op1.n_source != op2.n_source)
        throw input_error("compose: operations live on different gradings");
    const int per = op1.period();
    DiagonalOperation out{op1.source,
                          op2.target,
                          op1.n_source,
                          std::max(op1.lead, op2.lead),
                          {},
                          std::min(op1.cap_arity, op2.cap_arity),
                          std::min(op1.cap_degree, op2.cap_degree)};
    if (!same_class(op1.lead, op2.lead, per)) return out;  // zero operation
    for (int s = 0; s < out.stages(); ++s) {
        int codim = out.codim_of_stage(s);
        Rat prod = op1.lambda_at_codim(codim) * op2.lambda_at_codim(codim);
        if (!prod.is_zero()) out.lambda[s] = prod;
    }
    return out;
}

std::vector<Rat> expand_in_basis(const std::map<int, Rat>& coords,
                                 const std::vector<DiagonalOperation>& basis) {
    if (basis.empty()) throw input_error("expand_in_basis: empty basis");
    for (size_t r = 1; r < basis.size(); ++r)
        if (basis[r].lead <= basis[r - 1].lead)
            throw input_error("expand_in_basis: basis leads must strictly increase");
    const int up_to = basis.back().lead;
    std::map<int, Rat> residual;
    for (const auto& [d, c] : coords)
        if (d <= up_to && !c.is_zero()) residual[d] = c;
    std::vector<Rat> out;
    for (const DiagonalOperation& b : basis) {
        Rat lead_coeff = b.leading_coefficient();
        if (lead_coeff.is_zero()) throw input_error("expand_in_basis: singular basis element");
        Rat beta(0);
        auto it = residual.find(b.lead);
        if (it != residual.end()) beta = it->second / lead_coeff;
        out.push_back(beta);
        if (!beta.is_zero()) {
            for (int s = 0; s < b.stages(); ++s) {
                int codim = b.codim_of_stage(s);
                if (codim > up_to) break;
                Rat v = b.lambda_stage(s);
                if (v.is_zero()) continue;
                Rat& slot = residual[codim];
                slot -= beta * v;
                if (slot.is_zero()) residual.erase(codim);
            }
        }
    }
    for (const auto& [d, c] : residual)
        if (!c.is_zero())
            throw claim_error("expand_in_basis: residual coordinate " + c.str() +
                              " at codimension " + std::to_string(d));
    return out;
}

InvertResult invert(const std::vector<Rat>& coeffs,
                    const std::vector<DiagonalOperation>& basis) {
    if (coeffs.size() != basis.size()) throw input_error("invert: coefficient count mismatch");
    if (basis.empty()) throw input_error("invert: empty basis");
    InvertResult res;
    const long p = basis.front().p();
    const int per = basis.front().period();
    const int unit_range = std::max(1, per);
    const int up_to = basis.back().lead;
    std::map<int, Rat> combined;
    for (size_t r = 0; r < basis.size(); ++r) {
        if (coeffs[r].is_zero()) continue;
        for (int s = 0; s < basis[r].stages(); ++s) {
            int codim = basis[r].codim_of_stage(s);
            if (codim > up_to) break;
            Rat v = basis[r].lambda_stage(s);
            if (!v.is_zero()) combined[codim] += coeffs[r] * v;
        }
    }
    auto report_failure = [&]() {
        res.failing_index = -1;
        for (size_t i = 0; i < basis.size(); ++i) {
            if (basis[i].lead > unit_range) break;
            if (!is_p_unit(coeffs[i], p)) {
                res.failing_index = basis[i].lead;
                return;
            }
        }
    };
    std::map<int, Rat> inverse_coords;
    for (const DiagonalOperation& b : basis) {
        for (int s = 0; s < b.stages(); ++s) {
            int codim = b.codim_of_stage(s);
            if (codim > up_to) break;
            if (inverse_coords.count(codim)) continue;
            auto it = combined.find(codim);
            if (it == combined.end() || it->second.is_zero()) {
                report_failure();
                if (res.failing_index == -1)
                    throw claim_error("invert: vanishing coordinate at codim " +
                                      std::to_string(codim) + " despite unit leads");
                return res;
            }
            inverse_coords[codim] = it->second.inverse();
        }
    }
    std::vector<Rat> expansion = expand_in_basis(inverse_coords, basis);
    for (const Rat& b : expansion) {
        if (!is_p_integral(b, p)) {
            report_failure();
            if (res.failing_index == -1)
                throw claim_error("invert: non-integral inverse despite unit leads (" + b.str() +
                                  ")");
            return res;
        }
    }
    res.ok = true;
    res.inverse_coeffs = std::move(expansion);
    return res;
}

CrossIsoResult cross_iso(const FormalGroupLaw& K1, const FormalGroupLaw& K2, int n,
                         int cap_arity, int cap_degree) {
    if (K1.p() != K2.p()) throw input_error("cross_iso: prime mismatch");
    const long p = K1.p();
    const int per = period_of(p, n);
    const int top = std::max(1, per);
    CrossIsoResult res;
    for (int i = 1; i <= top; ++i) {
        SolveResult f = solve_generator(K1, K2, n, i, cap_arity, cap_degree);
        if (!f.ok)
            throw claim_error("cross_iso: forward generator failed at lead " + std::to_string(i) +
                              ": " + f.failure);
        SolveResult b = solve_generator(K2, K1, n, i, cap_arity, cap_degree);
        if (!b.ok)
            throw claim_error("cross_iso: backward generator failed at lead " + std::to_string(i) +
                              ": " + b.failure);
        res.forward.push_back(f.op);
        res.backward.push_back(b.op);
    }
    std::map<int, Rat> fw, bw, comp;
    for (const auto& op : res.forward)
        for (int s = 0; s < op.stages(); ++s) {
            Rat v = op.lambda_stage(s);
            if (!v.is_zero()) fw[op.codim_of_stage(s)] += v;
        }
    for (const auto& op : res.backward)
        for (int s = 0; s < op.stages(); ++s) {
            Rat v = op.lambda_stage(s);
            if (!v.is_zero()) bw[op.codim_of_stage(s)] += v;
        }
    for (const auto& [d, v] : fw) {
        auto it = bw.find(d);
        if (it != bw.end()) {
            Rat prod = v * it->second;
            if (!prod.is_zero()) comp[d] = prod;
        }
    }
    std::vector<DiagonalOperation> basis;
    for (int i = 1; i <= cap_degree; ++i) {
        SolveResult g = solve_generator(K1, K1, n, i, cap_arity, cap_degree);
        if (!g.ok)
            throw claim_error("cross_iso: endo-basis solve failed at lead " + std::to_string(i) +
                              ": " + g.failure);
        basis.push_back(g.op);
    }
    std::vector<Rat> coeffs = expand_in_basis(comp, basis);
    res.composite_coeffs = coeffs;
    res.invertible = true;
    for (int i = 0; i < std::max(1, per) && i < static_cast<int>(coeffs.size()); ++i)
        if (!is_p_unit(coeffs[static_cast<size_t>(i)], p)) res.invertible = false;
    for (const Rat& c : coeffs)
        if (!is_p_integral(c, p)) res.invertible = false;
    return res;
}

}  // namespace fglab
